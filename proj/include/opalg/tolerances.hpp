#pragma once

#include <cstdint>

namespace opalg {

/// Numerical thresholds shared across modules. Overridable from the CLI as
/// `--tol.rank`, `--tol.gap`, `--tol.state`.
struct Tolerances {
    double rank = 1e-9;   // rank / span membership decisions
    double gap = 1e-8;    // eigenvalue grouping
    double state = 1e-10; // State and ProbabilityWeight validation
};

/// Dense ambient dimension cap.
inline constexpr int kMaxAmbientDim = 256;

/// Seed used wherever a pseudo-random element is drawn and the caller does not
/// supply one.
inline constexpr std::uint64_t kDefaultSeed = 0;

}  // namespace opalg
