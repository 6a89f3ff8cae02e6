#pragma once

// Method-of-steps integration of the delay system, used as a time-domain
// cross-check of the criterion.

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "delaystab/model.hpp"

namespace dstab {

/// Initial function on [-tau, 0]. Constant (x0, y0), optionally plus a
/// seeded random smooth perturbation so that no mode is missed by symmetry.
struct History {
    double x0 = 1.0;
    double y0 = 0.0;
    std::optional<std::uint64_t> random_seed;
};

struct SimConfig {
    double step = 0.01;
    double horizon = 100.0;
    History history;

    /// Throws InvalidArgument unless step <= tau/10 and horizon >= 20 tau.
    void validate(double tau) const;
};

enum class DecayHint { Decaying, Growing, Inconclusive };

const char* to_string(DecayHint h) noexcept;

struct DecayEstimate {
    double rate = 0.0;
    DecayHint verdict_hint = DecayHint::Inconclusive;
};

/// Classical RK4 with the delayed state taken from a cubic Hermite
/// interpolant of the stored solution. The step is shrunk, if needed, so that
/// tau is an integer number of steps. Stops early (overflowed = true) when the
/// norm exceeds 1e150.
[[nodiscard]] Trajectory simulate(const SystemParams& params, const SimConfig& config);

/// Least-squares slope of log|(x, y)| over the last half of the horizon.
/// Throws Degenerate when every sample there is below 1e-300.
[[nodiscard]] DecayEstimate estimate_decay(const Trajectory& traj);

/// CSV with header "t,x,y" and 17 significant digits per value.
void write_csv(const Trajectory& traj, std::ostream& os);

}  // namespace dstab
