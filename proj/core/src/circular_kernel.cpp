#include "qsa/circular_kernel.hpp"

#include <cmath>

#include "qsa/errors.hpp"
#include "qsa/specfun.hpp"

namespace qsa {

CircularJacobiKernel::CircularJacobiKernel(double alpha, double beta, double t,
                                           const SeriesParams& sp) {
    if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("circular kernel requires alpha, beta > -1");
    if (!(t > 0.0)) throw DomainError("circular kernel requires t > 0");
    params_.alpha = alpha;
    params_.beta = beta;
    params_.t = t;
    log_pref_ = std::log(2.0) - std::lgamma(alpha + 1.0);

    // term magnitude bound: |P_j| <= (max(a,b)+1)_j / j! on [-1,1] for a,b >= -1/2
    const double q = std::max(alpha, beta);
    double sum_bound = 0.0;
    int below = 0;
    for (int j = 0; j < sp.max_terms; ++j) {
        const double lg = std::lgamma(j + alpha + beta + 1.0) - std::lgamma(j + beta + 1.0);
        const double c = (2.0 * j + alpha + beta + 1.0) *
                         std::exp(-2.0 * j * (j + alpha + beta + 1.0) * t + lg);
        coeff_.push_back(c);
        const double pbound = std::exp(log_pochhammer(q + 1.0, j) - std::lgamma(j + 1.0));
        const double mag = std::fabs(c) * pbound;
        sum_bound += mag;
        below = (mag < sp.term_rel_tol * sum_bound) ? below + 1 : 0;
        if (below >= sp.consecutive) break;
    }
    params_.j_max = int(coeff_.size()) - 1;
    if (params_.j_max + 1 >= sp.max_terms)
        throw SeriesDivergence("circular kernel spectral series did not truncate");
}

double CircularJacobiKernel::operator()(double r) const {
    if (!(r > 0.0) || !(r < M_PI / 2.0))
        throw DomainError("circular kernel requires r in (0, pi/2)");
    const double a = params_.alpha, b = params_.beta;
    const double x = std::cos(2.0 * r);
    // three-term Jacobi recurrence interleaved with the coefficient sum
    double sum = coeff_[0];
    double pm1 = 1.0;
    double p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for (int j = 1; j <= params_.j_max; ++j) {
        sum += coeff_[j] * p;
        if (j == params_.j_max) break;
        const int m = j + 1;
        const double s = m + a + b;
        const double c1 = 2.0 * m * s * (2.0 * m + a + b - 2.0);
        const double c2 = (2.0 * m + a + b - 1.0) *
                          ((2.0 * m + a + b) * (2.0 * m + a + b - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + a + b);
        const double next = (c2 * p - c3 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    const double weight = std::exp(log_pref_ + (2.0 * b + 1.0) * std::log(std::cos(r)) +
                                   (2.0 * a + 1.0) * std::log(std::sin(r)));
    const double val = weight * sum;
    if (val < -1e-12)
        throw NegativeDensity("circular kernel evaluated below -1e-12: truncation failure");
    return val < 0.0 ? 0.0 : val;
}

double circular_jacobi_kernel(const CircularKernelParams& p, double r) {
    CircularJacobiKernel k(p.alpha, p.beta, p.t);
    return k(r);
}

} // namespace qsa
