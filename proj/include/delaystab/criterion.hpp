#pragma once

// Closed-form asymptotic-stability criterion for the coupled delay system and
// enumeration of the delay windows on which it holds.

#include "delaystab/model.hpp"

namespace dstab {

/// True iff every root of  lambda + p + q e^{-lambda tau} = 0  has negative
/// real part (scalar Hayes-type condition).
[[nodiscard]] bool hayes_stable(double p, double q, double tau) noexcept;

struct HayesThreshold {
    enum class Kind { AllTau, UpTo, None };
    Kind kind = Kind::None;
    /// Supremum of the stable delays; meaningful only for Kind::UpTo.
    double bound = 0.0;
};

[[nodiscard]] HayesThreshold hayes_threshold(double p, double q) noexcept;

/// n-th delay at which  i*omega1  is a characteristic root.
/// Requires bc < 0, alpha != 0 and D >= 0 (d, sqrtD and E present in dq).
[[nodiscard]] double switch_time_r1(const DerivedQuantities& dq, Sign alpha_sign, long long n);

/// n-th delay at which  i*omega2  is a characteristic root. Same preconditions
/// as switch_time_r1, and throws UndefinedAtResonance when d = sqrt(D).
[[nodiscard]] double switch_time_r2(const DerivedQuantities& dq, Sign alpha_sign, long long n);

/// Label of the criterion branch that governs these coefficients, independent
/// of tau. Throws ExcludedByHypothesis for bc < 0, alpha != 0, alpha^2 = a^2.
[[nodiscard]] std::string governing_branch(const Coefficients& k);

/// Every tau > 0 at which the zero solution is asymptotically stable, as a
/// sorted union of open intervals. Throws ExcludedByHypothesis for bc < 0,
/// alpha != 0, alpha^2 = a^2.
[[nodiscard]] TauWindows stability_windows(const Coefficients& k);

/// Full verdict at a specific delay. Never throws for valid params; the
/// excluded case is reported through Status::ExcludedByHypothesis.
[[nodiscard]] Verdict is_asymptotically_stable(const SystemParams& params);

}  // namespace dstab
