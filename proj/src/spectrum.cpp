#include "delaystab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace dstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNearContour = 1e-6;
constexpr int kMaxBisection = 48;

void validate_oracle_params(const SystemParams& p) {
    p.coefficients().validate();
    if (!std::isfinite(p.tau) || p.tau < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "tau must be finite and non-negative");
    }
}

double spectral_radius_term(const SystemParams& p) {
    const double bc = p.bc();
    return std::sqrt(std::abs(bc));
}

// Accumulates the argument of f along a parametrised path, bisecting each
// piece until both halves turn by less than pi/4.
class PhaseWalker {
public:
    PhaseWalker(const DelayFactor& f, std::function<cplx(double)> path)
        : f_(f), path_(std::move(path)) {}

    cplx eval(double t) {
        const cplx v = f_.value(path_(t));
        min_abs_ = std::min(min_abs_, std::abs(v));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw Error(ErrorCode::InsufficientSamples, "non-finite value on contour");
        }
        return v;
    }

    double increment(double t0, double t1, cplx f0, cplx f1, int depth) {
        const double tm = 0.5 * (t0 + t1);
        const cplx fm = eval(tm);
        const double d1 = std::arg(fm / f0);
        const double d2 = std::arg(f1 / fm);
        if (std::abs(d1) < kPi / 4 && std::abs(d2) < kPi / 4) return d1 + d2;
        if (min_abs_ < kNearContour || std::abs(t1 - t0) < 1e-13) {
            throw Error(ErrorCode::RootNearContour, "root near contour; retry with a perturbed left edge");
        }
        if (depth >= kMaxBisection) {
            throw Error(ErrorCode::InsufficientSamples, "phase steps stay above pi/2 after bisection");
        }
        return increment(t0, tm, f0, fm, depth + 1) + increment(tm, t1, fm, f1, depth + 1);
    }

    double walk(double t_begin, double t_end, int pieces) {
        double total = 0.0;
        double t_prev = t_begin;
        cplx f_prev = eval(t_prev);
        for (int i = 1; i <= pieces; ++i) {
            const double t = t_begin + (t_end - t_begin) * static_cast<double>(i) / pieces;
            const cplx fv = eval(t);
            total += increment(t_prev, t, f_prev, fv, 0);
            t_prev = t;
            f_prev = fv;
        }
        return total;
    }

    [[nodiscard]] double min_abs() const noexcept { return min_abs_; }

private:
    const DelayFactor& f_;
    std::function<cplx(double)> path_;
    double min_abs_ = std::numeric_limits<double>::infinity();
};

}  // namespace

const char* to_string(Direction d) noexcept {
    switch (d) {
        case Direction::LeftToRight: return "left_to_right";
        case Direction::RightToLeft: return "right_to_left";
        case Direction::Degenerate: return "degenerate";
    }
    return "unknown";
}

std::vector<DelayFactor> spectral_factors(const SystemParams& p) {
    const double bc = p.bc();
    if (bc >= -kEqTol) {
        const double beta = bc > kEqTol ? std::sqrt(bc) : 0.0;
        return {DelayFactor{{p.a + beta, 0.0}, p.alpha, p.tau}, DelayFactor{{p.a - beta, 0.0}, p.alpha, p.tau}};
    }
    return {DelayFactor{{p.a, std::sqrt(-bc)}, p.alpha, p.tau}};
}

cplx char_G(cplx lambda, const SystemParams& p) noexcept {
    const cplx h = lambda + p.alpha * std::exp(-lambda * p.tau) + p.a;
    return h * h - p.bc();
}

cplx char_F(cplx lambda, const SystemParams& p) {
    const double bc = p.bc();
    if (bc >= -kEqTol) throw Error(ErrorCode::Precondition, "F is defined only for bc < 0");
    return DelayFactor{{p.a, std::sqrt(-bc)}, p.alpha, p.tau}.value(lambda);
}

void ContourSpec::validate() const {
    if (!std::isfinite(radius) || !(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "contour radius must be positive");
    if (!std::isfinite(left_edge) || left_edge < 0.0) throw Error(ErrorCode::InvalidArgument, "left edge must be >= 0");
    if (left_edge >= radius) throw Error(ErrorCode::InvalidArgument, "left edge must be inside the radius");
    if (samples < 1000 || samples % 2 != 0) throw Error(ErrorCode::InvalidArgument, "samples must be even and >= 1000");
}

ContourSpec default_contour(const SystemParams& p) {
    return {std::abs(p.a) + std::abs(p.alpha) + spectral_radius_term(p) + 1.0, 0.0, 2000};
}

int count_roots(const DelayFactor& f, const ContourSpec& spec) {
    spec.validate();
    const double R = spec.radius;
    const double sigma = spec.left_edge;
    const double half_angle = std::acos(sigma / R);
    const double half_height = R * std::sin(half_angle);

    const double arc_len = 2.0 * R * half_angle;
    const double seg_len = 2.0 * half_height;
    const int arc_pieces = std::max(1, static_cast<int>(std::lround(spec.samples * arc_len / (arc_len + seg_len))));
    const int seg_pieces = std::max(1, spec.samples - arc_pieces);

    // Counter-clockwise: right arc bottom to top, then down the vertical edge.
    PhaseWalker arc(f, [R](double th) { return std::polar(R, th); });
    PhaseWalker seg(f, [sigma](double y) { return cplx{sigma, y}; });
    const double total = arc.walk(-half_angle, half_angle, arc_pieces) + seg.walk(half_height, -half_height, seg_pieces);
    if (std::min(arc.min_abs(), seg.min_abs()) < kNearContour) {
        throw Error(ErrorCode::RootNearContour, "root near contour; retry with a perturbed left edge");
    }

    const double winding = total / (2.0 * kPi);
    const double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 1e-3 || rounded < 0.0) {
        throw Error(ErrorCode::InsufficientSamples, "winding number did not resolve to a non-negative integer");
    }
    return static_cast<int>(rounded);
}

int count_rhp_roots(const SystemParams& params, const ContourSpec& spec) {
    validate_oracle_params(params);
    int total = 0;
    for (const auto& f : spectral_factors(params)) {
        if (!(spec.radius > f.root_bound())) {
            throw Error(ErrorCode::InvalidArgument, "contour radius does not exceed the root bound");
        }
        total += count_roots(f, spec);
    }
    return total;
}

int count_rhp_roots(const SystemParams& params) {
    ContourSpec spec = default_contour(params);
    for (double edge : {0.0, 1e-6, 1e-5, 1e-4}) {
        spec.left_edge = edge;
        try {
            return count_rhp_roots(params, spec);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::RootNearContour || edge == 1e-4) throw;
        }
    }
    throw Error(ErrorCode::RootNearContour, "root near contour");
}

std::optional<cplx> newton_refine(const DelayFactor& f, cplx seed) {
    cplx z = seed;
    for (int it = 0; it < 50; ++it) {
        const cplx v = f.value(z);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return std::nullopt;
        if (std::abs(v) < 1e-12 * std::max(1.0, std::abs(z))) return z;
        const cplx dv = f.derivative(z);
        if (std::abs(dv) == 0.0) return std::nullopt;
        z -= v / dv;
    }
    const cplx v = f.value(z);
    if (std::abs(v) < 1e-12 * std::max(1.0, std::abs(z))) return z;
    return std::nullopt;
}

std::optional<cplx> rightmost_root(const SystemParams& params, double search_left) {
    validate_oracle_params(params);
    std::optional<cplx> best;
    for (const auto& f : spectral_factors(params)) {
        const double growth = f.tau * std::max(0.0, -search_left);
        const double bound = std::abs(f.shift) + std::abs(f.gain) * std::exp(std::min(growth, 50.0)) + 1.0;
        const double re_lo = search_left;
        const double re_hi = std::max(bound, search_left + 1.0);
        // Zeros are spaced about 2 pi / tau apart vertically.
        const int n_im = std::clamp(static_cast<int>(std::ceil(2.0 * bound * std::max(f.tau, 1.0) / kPi * 4.0)), 40, 800);
        const int n_re = 24;
        for (int i = 0; i <= n_re; ++i) {
            const double re = re_lo + (re_hi - re_lo) * i / n_re;
            for (int j = 0; j <= n_im; ++j) {
                const double im = -bound + 2.0 * bound * j / n_im;
                const auto root = newton_refine(f, {re, im});
                if (!root || root->real() < search_left - 1e-9 || std::abs(*root) > 2.0 * bound) continue;
                if (!best || root->real() > best->real()) best = *root;
            }
        }
    }
    return best;
}

std::vector<Crossing> imaginary_crossings(const Coefficients& k, double tau_max) {
    k.validate();
    if (!std::isfinite(tau_max) || tau_max <= 0.0) throw Error(ErrorCode::InvalidArgument, "tau_max must be positive");
    const double bc = k.bc();
    if (bc >= -kEqTol) throw Error(ErrorCode::Precondition, "crossings need bc < 0");
    if (std::abs(k.alpha) <= kEqTol) throw Error(ErrorCode::Precondition, "crossings need alpha != 0");
    const double D = k.alpha * k.alpha - k.a * k.a;
    if (D < -kEqTol) throw Error(ErrorCode::NoImaginaryRoots, "alpha^2 < a^2: F has no purely imaginary roots");

    const double d = std::sqrt(-bc);
    const double sqrtD = std::sqrt(std::max(D, 0.0));
    std::vector<double> omegas{-d - sqrtD};
    if (std::abs(d - sqrtD) > kEqTol && sqrtD > kEqTol) omegas.push_back(-d + sqrtD);

    std::vector<Crossing> out;
    for (double omega : omegas) {
        // alpha cos(omega tau) = -a, alpha sin(omega tau) = omega + d.
        double phase = std::atan2((omega + d) / k.alpha, -k.a / k.alpha);
        if (phase < 0.0) phase += 2.0 * kPi;
        const double period = 2.0 * kPi / std::abs(omega);
        double first = omega > 0.0 ? phase / omega : (2.0 * kPi - phase) / std::abs(omega);
        if (first <= 0.0) first += period;
        for (long long n = 0;; ++n) {
            const double tau = first + static_cast<double>(n) * period;
            if (tau > tau_max) break;
            const SystemParams p = SystemParams::from(k, tau);
            const double residual = std::abs(char_F({0.0, omega}, p));
            if (residual >= 1e-9 * std::max(1.0, std::abs(k.alpha))) {
                throw Error(ErrorCode::NotACrossing, "crossing failed validation");
            }
            out.push_back({omega, tau, crossing_direction(omega, tau, p)});
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.tau < y.tau; });
    return out;
}

Direction crossing_direction(double omega, double tau, const SystemParams& params) {
    validate_oracle_params(params);
    const SystemParams p{params.a, params.alpha, params.b, params.c, tau};
    if (std::abs(char_F({0.0, omega}, p)) >= 1e-6) {
        throw Error(ErrorCode::NotACrossing, "i*omega is not a root of F at this tau");
    }
    const double d = std::sqrt(-p.bc());
    const double s = omega * (omega + d);
    if (std::abs(s) < 1e-12) return Direction::Degenerate;
    return s > 0.0 ? Direction::LeftToRight : Direction::RightToLeft;
}

std::optional<cplx> continue_root(const SystemParams& params, double omega, double tau) {
    SystemParams p = params;
    p.tau = tau;
    validate_oracle_params(p);
    const auto factors = spectral_factors(p);
    if (factors.size() != 1) throw Error(ErrorCode::Precondition, "continuation follows F, which needs bc < 0");
    return newton_refine(factors.front(), {0.0, omega});
}

}  // namespace dstab
