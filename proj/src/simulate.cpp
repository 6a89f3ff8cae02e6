#include "delaystab/simulate.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace dstab {

namespace {

constexpr double kOverflow = 1e150;

struct Perturbation {
    std::array<double, 3> amp_x{}, amp_y{}, freq{}, phase_x{}, phase_y{};
};

class HistoryFn {
public:
    explicit HistoryFn(const History& h) : base_{h.x0, h.y0} {
        if (!h.random_seed) return;
        std::mt19937_64 rng(*h.random_seed);
        std::uniform_real_distribution<double> amp(-0.5, 0.5), freq(0.5, 3.0), phase(0.0, 6.283185307179586);
        Perturbation p;
        for (std::size_t j = 0; j < 3; ++j) {
            p.amp_x[j] = amp(rng);
            p.amp_y[j] = amp(rng);
            p.freq[j] = freq(rng);
            p.phase_x[j] = phase(rng);
            p.phase_y[j] = phase(rng);
        }
        pert_ = p;
    }

    [[nodiscard]] State operator()(double t) const noexcept {
        State s = base_;
        if (pert_) {
            for (std::size_t j = 0; j < 3; ++j) {
                s.x += pert_->amp_x[j] * std::sin(pert_->freq[j] * t + pert_->phase_x[j]);
                s.y += pert_->amp_y[j] * std::sin(pert_->freq[j] * t + pert_->phase_y[j]);
            }
        }
        return s;
    }

private:
    State base_;
    std::optional<Perturbation> pert_;
};

State rhs(const SystemParams& p, State now, State delayed) noexcept {
    return {-p.a * now.x - p.alpha * delayed.x - p.b * now.y,
            -p.a * now.y - p.c * now.x - p.alpha * delayed.y};
}

State axpy(State s, double h, State k) noexcept { return {s.x + h * k.x, s.y + h * k.y}; }

double hermite(double y0, double y1, double d0, double d1, double h, double u) noexcept {
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * d1;
}

}  // namespace

const char* to_string(DecayHint h) noexcept {
    switch (h) {
        case DecayHint::Decaying: return "decaying";
        case DecayHint::Growing: return "growing";
        case DecayHint::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

void SimConfig::validate(double tau) const {
    if (!std::isfinite(step) || !(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    if (step > tau / 10.0 * (1.0 + 1e-12)) throw Error(ErrorCode::InvalidArgument, "step must not exceed tau/10");
    if (!std::isfinite(horizon) || horizon < 20.0 * tau * (1.0 - 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "horizon must be at least 20 tau");
    }
    if (!std::isfinite(history.x0) || !std::isfinite(history.y0)) {
        throw Error(ErrorCode::InvalidArgument, "history must be finite");
    }
}

Trajectory simulate(const SystemParams& params, const SimConfig& config) {
    params.validate();
    config.validate(params.tau);

    const double tau = params.tau;
    const auto m = static_cast<std::size_t>(std::ceil(tau / config.step - 1e-9));
    const double h = tau / static_cast<double>(m);
    const auto steps = static_cast<std::size_t>(std::ceil(config.horizon / h - 1e-9));
    const HistoryFn history(config.history);

    Trajectory tr;
    tr.step = h;
    tr.times.reserve(m + steps + 1);
    tr.states.reserve(m + steps + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        const double t = -tau + static_cast<double>(i) * h;
        tr.times.push_back(i == m ? 0.0 : t);
        tr.states.push_back(history(tr.times.back()));
    }

    // derivs[j] is the right derivative at t = j h, j >= 0.
    std::vector<State> derivs;
    derivs.reserve(steps + 1);

    // State at (t_i + frac h) - tau, where sample i sits at t_i = (i - m) h.
    auto delayed = [&](std::size_t i_now, double frac) -> State {
        const auto q = static_cast<long long>(i_now) - 2 * static_cast<long long>(m);
        if (q < 0 || (q == 0 && frac == 0.0)) return history((static_cast<double>(q) + frac) * h);
        const auto base = static_cast<std::size_t>(q);
        if (frac == 0.0) return tr.states[m + base];
        if (frac == 1.0) return tr.states[m + base + 1];
        const State y0 = tr.states[m + base];
        const State y1 = tr.states[m + base + 1];
        const State d0 = derivs[base];
        const State d1 = derivs[base + 1];
        return {hermite(y0.x, y1.x, d0.x, d1.x, h, frac), hermite(y0.y, y1.y, d0.y, d1.y, h, frac)};
    };

    derivs.push_back(rhs(params, tr.states[m], delayed(m, 0.0)));
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t i = m + n;
        const State y = tr.states[i];
        const State k1 = derivs[n];
        const State dmid = delayed(i, 0.5);
        const State k2 = rhs(params, axpy(y, 0.5 * h, k1), dmid);
        const State k3 = rhs(params, axpy(y, 0.5 * h, k2), dmid);
        const State k4 = rhs(params, axpy(y, h, k3), delayed(i, 1.0));
        const State next{y.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                         y.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y)};
        tr.times.push_back(static_cast<double>(n + 1) * h);
        tr.states.push_back(next);
        if (!(std::hypot(next.x, next.y) <= kOverflow)) {
            tr.overflowed = true;
            break;
        }
        derivs.push_back(rhs(params, next, delayed(i + 1, 0.0)));
    }
    return tr;
}

DecayEstimate estimate_decay(const Trajectory& traj) {
    if (traj.times.size() < 2 || traj.times.size() != traj.states.size()) {
        throw Error(ErrorCode::InvalidArgument, "trajectory is empty or inconsistent");
    }
    const double tau = -traj.times.front();
    const double t_end = traj.times.back();
    if (!traj.overflowed && t_end < 20.0 * tau * (1.0 - 1e-9)) {
        throw Error(ErrorCode::Precondition, "trajectory must span at least 20 tau");
    }

    double n = 0, st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t < 0.5 * t_end) continue;
        const double norm = std::hypot(traj.states[i].x, traj.states[i].y);
        if (!(norm >= 1e-300) || !std::isfinite(norm)) continue;
        const double lg = std::log(norm);
        n += 1;
        st += t;
        sl += lg;
        stt += t * t;
        stl += t * lg;
    }
    if (n < 2) throw Error(ErrorCode::Degenerate, "trajectory is identically below 1e-300");
    const double denom = n * stt - st * st;
    DecayEstimate est;
    est.rate = denom > 0.0 ? (n * stl - st * sl) / denom : 0.0;
    if (traj.overflowed) {
        est.verdict_hint = DecayHint::Growing;
    } else if (std::abs(est.rate) * t_end < 2.0) {
        est.verdict_hint = DecayHint::Inconclusive;
    } else {
        est.verdict_hint = est.rate < 0.0 ? DecayHint::Decaying : DecayHint::Growing;
    }
    return est;
}

void write_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,x,y\n";
    char buf[96];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", traj.times[i], traj.states[i].x, traj.states[i].y);
        os << buf;
    }
}

}  // namespace dstab
