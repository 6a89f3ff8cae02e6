#include "delaystab/model.hpp"

#include <cmath>
#include <numbers>

namespace dstab {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::Precondition: return "precondition violated";
        case ErrorCode::ExcludedByHypothesis: return "excluded by hypothesis";
        case ErrorCode::UndefinedAtResonance: return "undefined at resonance";
        case ErrorCode::NoImaginaryRoots: return "no purely imaginary roots";
        case ErrorCode::RootNearContour: return "root near contour";
        case ErrorCode::InsufficientSamples: return "insufficient samples";
        case ErrorCode::NotACrossing: return "not a crossing";
        case ErrorCode::Degenerate: return "degenerate";
    }
    return "unknown error";
}

const char* to_string(Status s) noexcept {
    switch (s) {
        case Status::Stable: return "stable";
        case Status::Unstable: return "unstable";
        case Status::ExcludedByHypothesis: return "excluded_by_hypothesis";
    }
    return "unknown";
}

void Coefficients::validate() const {
    if (!std::isfinite(a) || !std::isfinite(alpha) || !std::isfinite(b) || !std::isfinite(c)) {
        throw Error(ErrorCode::InvalidArgument, "coefficients must be finite");
    }
}

void SystemParams::validate() const {
    coefficients().validate();
    if (!std::isfinite(tau) || !(tau > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tau must be finite and positive");
    }
}

double principal_acos(double x) noexcept {
    if (x > 1.0) x = 1.0;
    if (x < -1.0) x = -1.0;
    return std::acos(x);
}

long long snapped_floor(double x) noexcept {
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= kEqTol) return static_cast<long long>(nearest);
    return static_cast<long long>(std::floor(x));
}

DerivedQuantities derive(const Coefficients& k) {
    constexpr double pi = std::numbers::pi;
    DerivedQuantities q;
    q.bc = k.bc();

    if (q.bc >= -kEqTol) {
        q.beta = q.bc > kEqTol ? std::sqrt(q.bc) : 0.0;
    } else {
        q.d = std::sqrt(-q.bc);
    }

    if (std::abs(k.alpha) > kEqTol) {
        q.D = k.alpha * k.alpha - k.a * k.a;
        q.E = -k.a / k.alpha;
        if (*q.D >= -kEqTol) q.sqrtD = std::abs(*q.D) <= kEqTol ? 0.0 : std::sqrt(*q.D);
    }

    if (q.d && q.sqrtD) {
        q.omega1 = -*q.d - *q.sqrtD;
        q.omega2 = -*q.d + *q.sqrtD;
        if (*q.sqrtD > 0.0) {
            const double ac = principal_acos(*q.E);
            const double denom = 2.0 * *q.sqrtD * pi;
            q.k = snapped_floor(*q.d * ac / denom);
            q.l = snapped_floor(((*q.d - *q.sqrtD) * pi - *q.d * ac) / denom);
        }
    }
    return q;
}

bool TauWindows::contains(double tau) const noexcept {
    for (const auto& w : intervals) {
        if (w.contains(tau)) return true;
    }
    return false;
}

bool TauWindows::well_formed() const noexcept {
    double prev_hi = 0.0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& w = intervals[i];
        if (!(w.lo >= 0.0) || !(w.lo < w.hi)) return false;
        if (i > 0 && !(w.lo >= prev_hi)) return false;
        if (w.unbounded() && i + 1 != intervals.size()) return false;
        prev_hi = w.hi;
    }
    return true;
}

}  // namespace dstab
