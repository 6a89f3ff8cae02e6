#pragma once

// Numerical oracle for the characteristic equation
//
//   G(lambda) = (lambda + alpha e^{-lambda tau} + a)^2 - bc
//
// which factors into two scalar quasi-polynomials  lambda + alpha e^{-lambda tau} + s
// with s = a +/- sqrt(bc) (bc >= 0) or s = a +/- i sqrt(-bc) (bc < 0). Nothing
// here consults the closed-form criterion.

#include <complex>
#include <optional>
#include <vector>

#include "delaystab/model.hpp"

namespace dstab {

using cplx = std::complex<double>;

/// f(lambda) = lambda + gain * e^{-lambda tau} + shift.
struct DelayFactor {
    cplx shift{0.0, 0.0};
    double gain = 0.0;
    double tau = 0.0;

    [[nodiscard]] cplx value(cplx lambda) const noexcept {
        return lambda + gain * std::exp(-lambda * tau) + shift;
    }
    [[nodiscard]] cplx derivative(cplx lambda) const noexcept {
        return 1.0 - gain * tau * std::exp(-lambda * tau);
    }
    /// Radius enclosing every root with Re(lambda) >= 0.
    [[nodiscard]] double root_bound() const noexcept { return std::abs(shift) + std::abs(gain); }
};

/// The factors whose root sets make up the spectrum: both real factors when
/// bc >= 0, only the F factor (shift a + i d) when bc < 0, since the second
/// complex factor carries the conjugate roots.
[[nodiscard]] std::vector<DelayFactor> spectral_factors(const SystemParams& params);

[[nodiscard]] cplx char_G(cplx lambda, const SystemParams& params) noexcept;

/// F(lambda) = lambda + alpha e^{-lambda tau} + a + i d. Throws Precondition
/// for bc >= 0.
[[nodiscard]] cplx char_F(cplx lambda, const SystemParams& params);

struct ContourSpec {
    double radius = 1.0;
    double left_edge = 0.0;
    int samples = 2000;

    void validate() const;
};

/// Certified D-contour: radius |a| + |alpha| + max(beta, d) + 1.
[[nodiscard]] ContourSpec default_contour(const SystemParams& params);

/// Roots of one factor strictly right of spec.left_edge inside the contour,
/// counted by winding number. Throws RootNearContour / InsufficientSamples.
[[nodiscard]] int count_roots(const DelayFactor& f, const ContourSpec& spec);

/// nu(tau) for bc < 0, the right-half-plane root count of G for bc >= 0.
/// tau = 0 is accepted as a limit check.
[[nodiscard]] int count_rhp_roots(const SystemParams& params, const ContourSpec& spec);

/// count_rhp_roots on the default contour, retrying with left_edge
/// 1e-6, 1e-5, 1e-4 when a root sits on the imaginary axis.
[[nodiscard]] int count_rhp_roots(const SystemParams& params);

/// Newton iteration on f with the exact derivative; 50 iterations max,
/// converged when |f| < 1e-12.
[[nodiscard]] std::optional<cplx> newton_refine(const DelayFactor& f, cplx seed);

/// Root with the largest real part among those with Re >= search_left,
/// located by Newton from a seed grid. For bc < 0 the conjugate factor is
/// covered by symmetry.
[[nodiscard]] std::optional<cplx> rightmost_root(const SystemParams& params, double search_left = -1e-6);

enum class Direction { LeftToRight, RightToLeft, Degenerate };

const char* to_string(Direction d) noexcept;

struct Crossing {
    double omega = 0.0;
    double tau = 0.0;
    Direction direction = Direction::Degenerate;
};

/// Every (omega, tau) with F(i omega) = 0 and 0 < tau <= tau_max, sorted by
/// tau. Requires bc < 0 and alpha != 0; throws NoImaginaryRoots for
/// alpha^2 < a^2.
[[nodiscard]] std::vector<Crossing> imaginary_crossings(const Coefficients& k, double tau_max);

/// Sign of Re d(lambda)/d(tau) at a crossing, i.e. sign(omega (omega + d)).
/// Throws NotACrossing when |F(i omega)| >= 1e-6.
[[nodiscard]] Direction crossing_direction(double omega, double tau, const SystemParams& params);

/// Root of F continued by Newton from i*omega to the delay tau.
[[nodiscard]] std::optional<cplx> continue_root(const SystemParams& params, double omega, double tau);

}  // namespace dstab
