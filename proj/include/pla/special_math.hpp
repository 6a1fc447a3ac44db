#pragma once

#include <functional>
#include <stdexcept>

namespace pla {

// CDF of the normalized complex chi-squared statistic with N complex
// degrees of freedom: G(z) = 1 - e^{-z} sum_{L=0}^{N-1} z^L / L!.
// Equivalent to the regularized lower incomplete gamma P(N, z).
// Stable for N up to several thousand (log-space series / continued
// fraction split at z = N + 1).
double chi2_cdf(int n, double z);

// Upper tail Q(N, z) = 1 - G(z), computed directly so small tails keep
// full relative precision.
double chi2_sf(int n, double z);

// Density f(z) = z^{N-1} e^{-z} / (N-1)!, evaluated in log space.
double chi2_pdf(int n, double z);

// Root of a continuous, strictly monotone f on [lo, hi] by bisection.
// Requires a sign change on the bracket; throws std::invalid_argument
// otherwise. Stops when the bracket width or |f| drops below tol.
double solve_monotone(const std::function<double(double)>& f, double lo,
                      double hi, double tol = 1e-12);

}  // namespace pla
