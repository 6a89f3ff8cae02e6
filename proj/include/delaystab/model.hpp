#pragma once

// Parameter and result types for the two-dimensional linear delay system
//
//   x'(t) + a x(t) + alpha x(t - tau) + b y(t) = 0
//   y'(t) + a y(t) + c x(t) + alpha y(t - tau) = 0
//
// All types are immutable-by-convention value objects.

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dstab {

/// Absolute tolerance used by every exact-branch selector (bc = 0, D = 0,
/// alpha = 0, sqrt(D) = d, tau on a window endpoint).
inline constexpr double kEqTol = 1e-12;

enum class ErrorCode {
    InvalidArgument = 1,
    Precondition,
    ExcludedByHypothesis,
    UndefinedAtResonance,
    NoImaginaryRoots,
    RootNearContour,
    InsufficientSamples,
    NotACrossing,
    Degenerate,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// The four coupling coefficients, i.e. a system with the delay left open.
struct Coefficients {
    double a = 0.0;
    double alpha = 0.0;
    double b = 0.0;
    double c = 0.0;

    [[nodiscard]] double bc() const noexcept { return b * c; }
    /// Throws InvalidArgument unless every coefficient is finite.
    void validate() const;
};

struct SystemParams {
    double a = 0.0;
    double alpha = 0.0;
    double b = 0.0;
    double c = 0.0;
    double tau = 1.0;

    [[nodiscard]] Coefficients coefficients() const noexcept { return {a, alpha, b, c}; }
    [[nodiscard]] double bc() const noexcept { return b * c; }
    /// Throws InvalidArgument unless all fields are finite and tau > 0.
    void validate() const;

    static SystemParams from(const Coefficients& k, double tau) noexcept {
        return {k.a, k.alpha, k.b, k.c, tau};
    }
};

enum class Sign { Negative = -1, Positive = 1 };

/// Quantities appearing in the closed-form criterion. A field is present only
/// where its defining formula applies; absent fields are never NaN.
struct DerivedQuantities {
    double bc = 0.0;
    std::optional<double> beta;    // sqrt(bc), bc >= 0
    std::optional<double> d;       // sqrt(-bc), bc < 0
    std::optional<double> D;       // alpha^2 - a^2, alpha != 0
    std::optional<double> sqrtD;   // D >= 0
    std::optional<double> E;       // -a / alpha, alpha != 0
    std::optional<double> omega1;  // -d - sqrt(D)
    std::optional<double> omega2;  // -d + sqrt(D)
    std::optional<long long> k;
    std::optional<long long> l;
};

/// Computes the derived quantities. Depends only on (a, alpha, b*c).
[[nodiscard]] DerivedQuantities derive(const Coefficients& k);
[[nodiscard]] inline DerivedQuantities derive(const SystemParams& p) { return derive(p.coefficients()); }

/// Principal inverse cosine with the argument clamped into [-1, 1].
[[nodiscard]] double principal_acos(double x) noexcept;

/// floor(x), snapping x to the nearest integer first when it is within kEqTol.
[[nodiscard]] long long snapped_floor(double x) noexcept;

enum class Status { Stable, Unstable, ExcludedByHypothesis };

const char* to_string(Status s) noexcept;

struct Verdict {
    Status status = Status::Unstable;
    /// Deciding branch, e.g. "alpha-zero", "i-first", "i-tau-bound", "ii-2",
    /// "ii-1/I-3-b", "excluded".
    std::string branch;
    std::optional<std::string> witness;
};

/// Open interval (lo, hi); hi may be +infinity.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool unbounded() const noexcept { return hi == std::numeric_limits<double>::infinity(); }
    [[nodiscard]] bool contains(double t) const noexcept { return lo < t && t < hi; }
};

struct TauWindows {
    std::vector<Interval> intervals;
    /// Notes about windows dropped for floating-point degeneracy.
    std::vector<std::string> diagnostics;

    [[nodiscard]] bool empty() const noexcept { return intervals.empty(); }
    [[nodiscard]] bool contains(double tau) const noexcept;
    /// True when the structural invariants (disjoint, increasing, lo >= 0,
    /// at most one trailing unbounded interval) hold.
    [[nodiscard]] bool well_formed() const noexcept;
};

struct State {
    double x = 0.0;
    double y = 0.0;
};

struct Trajectory {
    std::vector<double> times;  // starts at -tau
    std::vector<State> states;
    double step = 0.0;
    /// Set when integration stopped because the norm exceeded the overflow limit.
    bool overflowed = false;
};

}  // namespace dstab
