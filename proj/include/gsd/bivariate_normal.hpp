#pragma once

namespace gsd::stat {

/// P(Z1 <= h, Z2 <= k) for standard bivariate normal with correlation rho.
/// Genz's reformulation of the Drezner-Wesolowsky algorithm; absolute
/// accuracy around 5e-16 for |rho| <= 0.925 and 1e-14 beyond. Handles
/// rho = +-1 as the degenerate limits.
double bvn_cdf(double h, double k, double rho);

}  // namespace gsd::stat
