#include "pla/special_math.hpp"

#include <cmath>
#include <limits>

namespace pla {

namespace {

// Regularized lower incomplete gamma P(a, z) by its power series,
// accumulated in linear space with a log-space prefactor.
double gamma_p_series(double a, double z) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int it = 0; it < 10000; ++it) {
        ap += 1.0;
        del *= z / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    double lg = a * std::log(z) - z - std::lgamma(a);
    return sum * std::exp(lg);
}

// Regularized upper incomplete gamma Q(a, z) by Lentz continued fraction.
double gamma_q_cf(double a, double z) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    double lg = a * std::log(z) - z - std::lgamma(a);
    return h * std::exp(lg);
}

}  // namespace

double chi2_cdf(int n, double z) {
    if (n < 1) throw std::domain_error("chi2_cdf: N must be >= 1");
    if (z < 0.0) throw std::domain_error("chi2_cdf: z must be >= 0");
    if (z == 0.0) return 0.0;
    const double a = static_cast<double>(n);
    double p = (z < a + 1.0) ? gamma_p_series(a, z) : 1.0 - gamma_q_cf(a, z);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

double chi2_sf(int n, double z) {
    if (n < 1) throw std::domain_error("chi2_sf: N must be >= 1");
    if (z < 0.0) throw std::domain_error("chi2_sf: z must be >= 0");
    if (z == 0.0) return 1.0;
    const double a = static_cast<double>(n);
    double q = (z < a + 1.0) ? 1.0 - gamma_p_series(a, z) : gamma_q_cf(a, z);
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    return q;
}

double chi2_pdf(int n, double z) {
    if (n < 1) throw std::domain_error("chi2_pdf: N must be >= 1");
    if (z < 0.0) throw std::domain_error("chi2_pdf: z must be >= 0");
    if (z == 0.0) return n == 1 ? 1.0 : 0.0;
    double lg = (n - 1) * std::log(z) - z - std::lgamma(static_cast<double>(n));
    // lgamma(n) = log((n-1)!)
    return std::exp(lg);
}

double solve_monotone(const std::function<double(double)>& f, double lo,
                      double hi, double tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("solve_monotone: no sign change on bracket");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // bracket at float resolution
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace pla
