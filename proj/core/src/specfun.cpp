#include "qsa/specfun.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "qsa/errors.hpp"
#include "qsa/quadrature.hpp"

namespace qsa {

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
    return std::lgamma(x);
}

double pochhammer(double a, int j) {
    double p = 1.0;
    for (int m = 0; m < j; ++m) {
        p *= a + m;
        if (!std::isfinite(p)) {
            if (a > 0.0) return std::exp(std::lgamma(a + j) - std::lgamma(a));
            return p;
        }
    }
    return p;
}

double log_pochhammer(double a, int j) {
    if (!(a > 0.0)) throw DomainError("log_pochhammer requires a > 0");
    return std::lgamma(a + j) - std::lgamma(a);
}

double jacobi_poly(int j, double a, double b, double x) {
    if (j < 0) throw DomainError("jacobi_poly requires j >= 0");
    if (j == 0) return 1.0;
    double pm1 = 1.0;
    double p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for (int m = 2; m <= j; ++m) {
        const double s = m + a + b;
        const double c1 = 2.0 * m * s * (2.0 * m + a + b - 2.0);
        const double c2 = (2.0 * m + a + b - 1.0) *
                          ((2.0 * m + a + b) * (2.0 * m + a + b - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + a + b);
        const double next = (c2 * p - c3 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    return p;
}

double hermite_poly(int j, double x) {
    if (j < 0) throw DomainError("hermite_poly requires j >= 0");
    if (j == 0) return 1.0;
    double hm1 = 1.0, h = x;
    for (int m = 1; m < j; ++m) {
        const double next = x * h - m * hm1;
        hm1 = h;
        h = next;
    }
    return h;
}

double bessel_i_half(int m, double u, const SeriesParams& sp) {
    if (m < 0) throw DomainError("bessel_i_half requires m >= 0");
    if (!(u > 0.0)) throw DomainError("bessel_i_half requires u > 0");
    const double q = 0.5 * u;
    // first term (u/2)^{m-1/2} / Gamma(m+1/2)
    double term = std::exp((m - 0.5) * std::log(q) - std::lgamma(m + 0.5));
    double sum = term;
    const double q2 = q * q;
    int below = 0;
    for (int j = 1; j <= sp.max_terms; ++j) {
        term *= q2 / (j * (j + m - 0.5));
        sum += term;
        below = (term < sp.term_rel_tol * sum) ? below + 1 : 0;
        if (below >= sp.consecutive) return sum;
    }
    throw SeriesDivergence("bessel_i_half series did not converge");
}

namespace {

// Asymptotic expansion of e^v K_2(v); usable for v >= 16 (min term < 1e-13 rel).
double k2_scaled_asymptotic(double v) {
    const double nu4 = 16.0; // 4*nu^2 for nu = 2
    double term = 1.0, sum = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (nu4 - odd * odd) / (8.0 * k * v);
        if (std::fabs(term) > prev) break; // divergent tail reached
        prev = std::fabs(term);
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return std::sqrt(1.5707963267948966 / v) * sum;
}

// e^v K_2(v) = int_0^inf e^{-v(cosh s - 1)} cosh(2s) ds, single-peak integrand.
double k2_scaled_quadrature(double v) {
    const double S = std::acosh(1.0 + 60.0 / v) + 1.5;
    const double scale = std::max(1.0, 2.0 / (v * v));
    QuadratureParams qp;
    qp.abs_tol = 1e-14 * scale;
    qp.max_panels = 1000;
    return integrate(
        [v](double s) {
            const double sh = std::sinh(0.5 * s);
            return std::exp(-2.0 * v * sh * sh) * std::cosh(2.0 * s); // cosh s - 1 = 2 sinh^2(s/2)
        },
        0.0, S, qp);
}

} // namespace

double bessel_k2_scaled(double v) {
    if (!(v > 0.0)) throw DomainError("bessel_k2 requires v > 0");
    return v >= 16.0 ? k2_scaled_asymptotic(v) : k2_scaled_quadrature(v);
}

double bessel_k2(double v) {
    if (!(v > 0.0)) throw DomainError("bessel_k2 requires v > 0");
    if (v > 700.0) return 0.0;
    return std::exp(-v) * bessel_k2_scaled(v);
}

double gauss_2f1_terminating(int neg_j, double b, double c, double z) {
    if (neg_j > 0) throw DomainError("gauss_2f1_terminating requires a nonpositive first parameter");
    const int j = -neg_j;
    // reject c in {0, -1, ..., -(j-1)}: a pole inside the finite sum
    if (c <= 0.0 && c == std::floor(c) && -c < double(j))
        throw DomainError("gauss_2f1_terminating: c is a nonpositive integer inside the sum");
    double term = 1.0, sum = 1.0;
    for (int m = 0; m < j; ++m) {
        term *= (double(-j + m) * (b + m)) / ((c + m) * (m + 1)) * z;
        sum += term;
    }
    return sum;
}

double q2m_poly(int m, const Su2Vector& v, double t) {
    if (m < 0) throw DomainError("q2m_poly requires m >= 0");
    if (!(t > 0.0)) throw DomainError("q2m_poly requires t > 0");
    if (m == 0) return 1.0;
    const double st = std::sqrt(t);
    const double x1 = v.vI / st, x2 = v.vJ / st, x3 = v.vK / st;
    // cache He_{2j}(x_i) for j = 0..m
    std::vector<double> h1(m + 1), h2(m + 1), h3(m + 1);
    for (int j = 0; j <= m; ++j) {
        h1[j] = hermite_poly(2 * j, x1);
        h2[j] = hermite_poly(2 * j, x2);
        h3[j] = hermite_poly(2 * j, x3);
    }
    std::vector<double> lf(2 * m + 2);
    lf[0] = 0.0;
    for (int k = 1; k < int(lf.size()); ++k) lf[k] = lf[k - 1] + std::log(double(k));
    double sum = 0.0;
    for (int j1 = 0; j1 <= m; ++j1)
        for (int j2 = 0; j2 + j1 <= m; ++j2) {
            const int j3 = m - j1 - j2;
            const double coeff = std::exp(lf[m] - lf[j1] - lf[j2] - lf[j3]);
            sum += coeff * h1[j1] * h2[j2] * h3[j3];
        }
    return sum / std::pow(t, m);
}

} // namespace qsa
