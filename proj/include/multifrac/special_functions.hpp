#pragma once

namespace multifrac {

/// Gamma function via the Lanczos approximation (g = 7, nine terms), with the
/// reflection formula for x < 1/2. Relative error about 1e-15 away from poles.
/// Throws std::domain_error at non-positive integers.
double gamma_fn(double x);

/// Riemann zeta for real s > 1 by Euler-Maclaurin summation; relative error below 1e-14.
double zeta_fn(double s);

} // namespace multifrac
