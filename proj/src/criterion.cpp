#include "delaystab/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace dstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool alpha_is_zero(const Coefficients& k) noexcept { return std::abs(k.alpha) <= kEqTol; }

void require_crossing_inputs(const DerivedQuantities& dq) {
    if (!dq.d || !dq.sqrtD || !dq.E) {
        throw Error(ErrorCode::Precondition, "switch times need bc < 0, alpha != 0 and D >= 0");
    }
}

// Everything the windows and the verdict both need.
struct Analysis {
    DerivedQuantities dq;
    std::string branch;
    TauWindows windows;
};

void push_window(TauWindows& w, double lo, double hi) {
    if (lo < hi) {
        w.intervals.push_back({lo, hi});
    } else {
        w.diagnostics.push_back("dropped degenerate window (" + fmt(lo) + ", " + fmt(hi) + ")");
    }
}

Analysis analyze(const Coefficients& k) {
    k.validate();
    Analysis an;
    an.dq = derive(k);
    const auto& dq = an.dq;

    if (alpha_is_zero(k)) {
        // Delay-free roots -a +/- sqrt(bc) (bc >= 0) or -a +/- i sqrt(-bc).
        an.branch = "alpha-zero";
        const bool stable = dq.beta ? (-k.a + *dq.beta < 0.0) : (k.a > 0.0);
        if (stable) an.windows.intervals.push_back({0.0, kInf});
        return an;
    }

    if (dq.beta) {
        const auto plus = hayes_threshold(k.a + *dq.beta, k.alpha);
        const auto minus = hayes_threshold(k.a - *dq.beta, k.alpha);
        using K = HayesThreshold::Kind;
        if (plus.kind == K::None || minus.kind == K::None) {
            an.branch = "i-fails";
            return an;
        }
        double hi = kInf;
        if (plus.kind == K::UpTo) hi = std::min(hi, plus.bound);
        if (minus.kind == K::UpTo) hi = std::min(hi, minus.bound);
        an.branch = hi == kInf ? "i-first" : "i-tau-bound";
        push_window(an.windows, 0.0, hi);
        return an;
    }

    const double D = *dq.D;
    if (std::abs(D) <= kEqTol) {
        throw Error(ErrorCode::ExcludedByHypothesis, "bc < 0 and alpha^2 = a^2");
    }
    const bool positive_sum = k.a + k.alpha > 0.0;
    if (D < 0.0) {
        an.branch = "ii-2";
        if (positive_sum) an.windows.intervals.push_back({0.0, kInf});
        return an;
    }

    const Sign sgn = k.alpha > 0.0 ? Sign::Positive : Sign::Negative;
    const double d = *dq.d;
    const double sqrtD = *dq.sqrtD;
    const bool root_dominates = sqrtD > d || std::abs(d - sqrtD) <= kEqTol;

    if (positive_sum) {
        if (root_dominates) {
            an.branch = std::abs(d - sqrtD) <= kEqTol ? "ii-1/I-2" : "ii-1/I-1";
            push_window(an.windows, 0.0, switch_time_r1(dq, sgn, 0));
            return an;
        }
        const long long kk = *dq.k;
        an.branch = kk >= 1 ? "ii-1/I-3-b" : "ii-1/I-3-a";
        push_window(an.windows, 0.0, switch_time_r1(dq, sgn, 0));
        for (long long n = 1; n <= kk; ++n) {
            push_window(an.windows, switch_time_r2(dq, sgn, n - 1), switch_time_r1(dq, sgn, n));
        }
        return an;
    }

    if (root_dominates) {
        an.branch = "ii-1/II-1";
        return an;
    }
    an.branch = "ii-1/II-2";
    for (long long n = 0; n <= *dq.l; ++n) {
        push_window(an.windows, switch_time_r2(dq, sgn, n), switch_time_r1(dq, sgn, n));
    }
    return an;
}

}  // namespace

bool hayes_stable(double p, double q, double tau) noexcept {
    if (-p < q && q <= p) return true;
    if (std::abs(p) < q) return tau < principal_acos(-p / q) / std::sqrt(q * q - p * p);
    return false;
}

HayesThreshold hayes_threshold(double p, double q) noexcept {
    if (-p < q && q <= p) return {HayesThreshold::Kind::AllTau, kInf};
    if (std::abs(p) < q) {
        return {HayesThreshold::Kind::UpTo, principal_acos(-p / q) / std::sqrt(q * q - p * p)};
    }
    return {HayesThreshold::Kind::None, 0.0};
}

double switch_time_r1(const DerivedQuantities& dq, Sign alpha_sign, long long n) {
    require_crossing_inputs(dq);
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "switch index must be non-negative");
    const double w1 = *dq.omega1;
    const double ac = principal_acos(*dq.E);
    const double nn = static_cast<double>(n);
    if (alpha_sign == Sign::Positive) return (-2.0 * nn * kPi - ac) / w1;
    return (-2.0 * (nn + 1.0) * kPi + ac) / w1;
}

double switch_time_r2(const DerivedQuantities& dq, Sign alpha_sign, long long n) {
    require_crossing_inputs(dq);
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "switch index must be non-negative");
    if (std::abs(*dq.d - *dq.sqrtD) <= kEqTol) {
        throw Error(ErrorCode::UndefinedAtResonance, "r2 is undefined at resonance (d = sqrt(D), omega2 = 0)");
    }
    const double w2 = *dq.omega2;
    const double ac = principal_acos(*dq.E);
    const double nn = static_cast<double>(n);
    if (w2 < 0.0) {
        if (alpha_sign == Sign::Positive) return (-2.0 * (nn + 1.0) * kPi + ac) / w2;
        return (-2.0 * nn * kPi - ac) / w2;
    }
    // omega2 > 0 (sqrt(D) > d): the closed form above goes negative, so solve
    // cos(omega2 tau) = E, sin(omega2 tau) = sqrt(D)/alpha for tau > 0 directly.
    if (alpha_sign == Sign::Positive) return (2.0 * nn * kPi + ac) / w2;
    return (2.0 * (nn + 1.0) * kPi - ac) / w2;
}

std::string governing_branch(const Coefficients& k) { return analyze(k).branch; }

TauWindows stability_windows(const Coefficients& k) { return analyze(k).windows; }

Verdict is_asymptotically_stable(const SystemParams& params) {
    params.validate();
    Analysis an;
    try {
        an = analyze(params.coefficients());
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ExcludedByHypothesis) throw;
        return {Status::ExcludedByHypothesis, "excluded", std::string("bc < 0 and alpha^2 = a^2")};
    }

    Verdict v;
    v.branch = an.branch;
    const double tau = params.tau;
    for (const auto& w : an.windows.intervals) {
        const bool at_lo = w.lo > 0.0 && std::abs(tau - w.lo) <= kEqTol;
        const bool at_hi = !w.unbounded() && std::abs(tau - w.hi) <= kEqTol;
        if (at_lo || at_hi) {
            v.status = Status::Unstable;
            v.witness = "boundary: non-asymptotic (tau = " + fmt(at_lo ? w.lo : w.hi) + ")";
            return v;
        }
    }
    for (const auto& w : an.windows.intervals) {
        if (w.contains(tau)) {
            v.status = Status::Stable;
            v.witness = "tau in (" + fmt(w.lo) + ", " + (w.unbounded() ? std::string("inf") : fmt(w.hi)) + ")";
            return v;
        }
    }
    v.status = Status::Unstable;
    v.witness = an.windows.empty() ? "no stability window exists" : "tau outside every stability window";
    return v;
}

}  // namespace dstab
