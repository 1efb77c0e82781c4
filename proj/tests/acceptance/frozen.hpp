#pragma once

// Thresholds frozen from the oracle runs in tests/oracles; test_frozen
// recomputes them.

namespace frozen {

// Relative L2 error of the trapezoid-truncated inverse transform (origin
// interpolated from its neighbours, 1001-node trapezoid norm) for
// bump(p=4) on [0.1, 0.9], dkappa = 0.05, K = 64.
inline constexpr double kMeanRelErrorK64 = 5.8916548711869734e-05;

// Same for g = bump(p=4)^2 sampled at xi = +-2 kappa (spacing 0.1, band 128).
inline constexpr double kVarianceRelErrorK64 = 1.183746647789546e-05;

// Allowed gap between the library and the oracle.
inline constexpr double kOracleAgreement = 1e-9;

}  // namespace frozen
