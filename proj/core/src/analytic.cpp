#include "qsa/analytic.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "qsa/circular_kernel.hpp"
#include "qsa/errors.hpp"
#include "qsa/quadrature.hpp"
#include "qsa/sinh_kernel.hpp"
#include "qsa/specfun.hpp"

namespace qsa {

namespace {

constexpr double kLn2 = 0.6931471805599453094;
constexpr double kTwoPi = 6.2831853071795864769;

double log_cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)) - kLn2; }
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - kLn2; }

// ln(sinh u / u); small-u branch avoids the 0/0.
double log_sinh_over_u(double u) {
    if (u < 1e-4) return std::log1p(u * u / 6.0 * (1.0 + u * u / 20.0));
    return log_sinh(u) - std::log(u);
}

// u coth u - 1, stable near 0.
double u_coth_u_minus_1(double u) {
    if (u < 1e-4) return u * u / 3.0 - u * u * u * u / 45.0;
    return u / std::tanh(u) - 1.0;
}

// Completion factor for the kernel-form hyperbolic expressions: the displayed
// (r,u) integral carries total mass Gamma(2n)/(4 pi^{2n}).
double hyp_completion(int n) {
    return 4.0 * std::pow(M_PI, 2 * n) / std::exp(std::lgamma(2.0 * n));
}

// Test hook: QSA_CORRUPT=<op> perturbs one constant so the acceptance battery
// can demonstrate that a broken build fails with the criterion named.
bool corrupted(const char* op) {
    const char* env = std::getenv("QSA_CORRUPT");
    return env && std::strcmp(env, op) == 0;
}

double stable_acosh(double coshu, double coshr, double u, double r) {
    // acosh(cosh u cosh r) with a series fallback when both arguments are tiny
    const double z = coshu * coshr;
    if (z < 1.0 + 1e-12) return std::sqrt(std::max(0.0, u * u + r * r));
    return std::acosh(z);
}

} // namespace

double CharFnQuery::mu() const {
    return std::sqrt(lambda.norm_sq() + 1.0) - 1.0;
}

double flat_cf(const CharFnQuery& q) {
    const double u = 0.5 * q.lambda_norm() * q.t;
    double v = std::exp(-2.0 * q.n * log_cosh(u));
    if (corrupted("flat_cf")) v *= 1.01;
    return v;
}

double flat_conditional_cf(const CharFnQuery& q, double r) {
    if (r < 0.0) throw DomainError("flat_conditional_cf requires r >= 0");
    const double u = 0.5 * q.lambda_norm() * q.t;
    if (u == 0.0) return 1.0;
    return std::exp(-2.0 * q.n * log_sinh_over_u(u) -
                    r * r / (2.0 * q.t) * u_coth_u_minus_1(u));
}

double flat_density_radial(double phi_norm, double t, int n, const QuadratureParams& qp) {
    if (!(t > 0.0)) throw DomainError("flat_density requires t > 0");
    if (n < 1) throw DomainError("flat_density requires n >= 1");
    const double smax = 50.0 / n + 12.0;
    const double freq = phi_norm / t;
    QuadratureParams inner_qp{qp.abs_tol * 1e-2, qp.max_panels};
    auto inner = [&](double u) {
        return 2.0 * integrate(
                         [&](double s) {
                             return s * s * std::exp(-2.0 * n * (log_cosh(0.5 * s) + kLn2)) *
                                    std::cos(u * freq * s);
                         },
                         0.0, smax, inner_qp);
    };
    const double outer = integrate(inner, -1.0, 1.0, qp);
    const double c = std::pow(2.0, 2 * n - 1) / (kTwoPi * kTwoPi * t * t * t);
    return c * outer;
}

double flat_density(const Su2Vector& phi, double t, int n, const QuadratureParams& qp) {
    return flat_density_radial(phi.norm(), t, n, qp);
}

double hyp_cf(const CharFnQuery& q, const QuadratureParams& qp) {
    if (q.space != Space::Hyperbolic) throw DomainError("hyp_cf requires the hyperbolic space");
    const int n = q.n;
    const double t = q.t, lam = q.lambda_norm(), mu = q.mu();
    const HyperbolicHeatKernel kernel(n);
    // truncation radius from the Gaussian tail bound of s_{t,4n+1}
    const double A = std::max(double(4 * n + 1), mu + 1.0);
    const double R = 2.0 * A * t + 8.0 * std::sqrt(t) + 2.0;
    QuadratureParams inner_qp{qp.abs_tol / (4.0 * R), qp.max_panels};
    auto integrand = [&](double r, double u) {
        const double x = stable_acosh(std::cosh(u), std::cosh(r), u, r);
        const double ls = kernel.log_value(t, std::max(x, 1e-14));
        if (!std::isfinite(ls)) return 0.0;
        const double w = -lam * lam * t / 2.0 + (mu + 1.0) * u +
                         std::log1p(std::exp(-2.0 * (mu + 1.0) * u)) - kLn2 +
                         (4.0 * n - 1.0) * log_sinh(std::max(r, 1e-300)) + 2.0 * log_cosh(r) + ls;
        return std::exp(w);
    };
    const double outer = integrate(
        [&](double r) {
            if (r <= 0.0) return 0.0;
            return integrate([&](double u) { return integrand(r, u); }, 0.0, R, inner_qp);
        },
        0.0, R, qp);
    double v = hyp_completion(n) * std::exp(-(4.0 * n + 1.0) * t / 2.0) * outer;
    if (corrupted("hyp_cf")) v *= 1.01;
    return v;
}

HypDensityEvaluator::HypDensityEvaluator(int n, double t, const SeriesParams& sp,
                                         const QuadratureParams& qp)
    : n_(n), t_(t), sp_(sp) {
    if (!(t > 0.0)) throw DomainError("hyp_density requires t > 0");
    if (n < 1) throw DomainError("hyp_density requires n >= 1");
    const HyperbolicHeatKernel kernel(n);
    const double Rr = 2.0 * (4.0 * n + 1.0) * t + 8.0 * std::sqrt(t) + 2.0;
    const double Ru = t + std::sqrt(2.0 * t * 45.0) + 2.0;
    QuadratureParams cm_qp{1e-13, qp.max_panels};
    QuadratureParams inner_qp{1e-13 / (4.0 * Ru), qp.max_panels};
    const double sqrt_pi = std::sqrt(M_PI);
    double c0 = 0.0;
    for (int m = 0; m < sp.max_terms; ++m) {
        auto integrand = [&](double r, double u) {
            const double x = stable_acosh(std::cosh(u), std::cosh(r), u, r);
            const double ls = kernel.log_value(t, std::max(x, 1e-14));
            if (!std::isfinite(ls)) return 0.0;
            const double w = (4.0 * n - 1.0) * log_sinh(std::max(r, 1e-300)) +
                             2.0 * log_cosh(r) + ls;
            return std::exp(w) * std::pow(0.5 * u, m + 0.5) * sqrt_pi *
                   bessel_i_half(m, std::max(u, 1e-300));
        };
        const double val = integrate(
            [&](double r) {
                if (r <= 0.0) return 0.0;
                return integrate([&](double u) { return u <= 0.0 ? 0.0 : integrand(r, u); },
                                 0.0, Ru, inner_qp);
            },
            0.0, Rr, cm_qp);
        double lfact = std::lgamma(m + 1.0);
        const double cm = ((m % 2) ? -1.0 : 1.0) * std::exp(-lfact) * val;
        cm_.push_back(cm);
        if (m == 0) c0 = std::fabs(cm);
        if (m >= 2 && std::fabs(cm) < 1e-22 * c0) break;
    }
    log_pref_ = std::log(hyp_completion(n)) - (4.0 * n + 1.0) * t / 2.0 -
                1.5 * std::log(kTwoPi * t);
    if (int(cm_.size()) >= sp.max_terms)
        throw SeriesDivergence("hyp_density moment coefficients did not decay");
}

double HypDensityEvaluator::operator()(const Su2Vector& v) const {
    const double v2 = v.norm_sq();
    double sum = 0.0;
    int below = 0;
    for (std::size_t m = 0; m < cm_.size(); ++m) {
        const double q = q2m_poly(int(m), v, t_);
        // section bound |Q_2m| <= m! 2^{2m} t^-m e^{|v|^2/4t} (m+1)(m+2)/2; a
        // violation means the Hermite evaluation left its validity range.
        const double majorant = std::exp(std::lgamma(m + 1.0) + 2.0 * m * kLn2 -
                                         double(m) * std::log(t_) + v2 / (4.0 * t_)) *
                                (m + 1.0) * (m + 2.0) / 2.0;
        if (std::fabs(q) > majorant * (1.0 + 1e-9))
            throw SeriesDivergence("hyp_density: Q_2m exceeded its majorant");
        const double term = cm_[m] * q;
        sum += term;
        below = (std::fabs(term) < sp_.term_rel_tol * std::fabs(sum)) ? below + 1 : 0;
        if (below >= sp_.consecutive) break;
    }
    return std::exp(log_pref_ - v2 / (2.0 * t_)) * sum;
}

double hyp_density(const Su2Vector& v, double t, int n, const SeriesParams& sp) {
    return HypDensityEvaluator(n, t, sp)(v);
}

double proj_cf_integral(const CharFnQuery& q, const QuadratureParams& qp) {
    if (q.space != Space::Projective) throw DomainError("proj_cf_integral requires the projective space");
    const double mu = q.mu();
    const CircularJacobiKernel kernel(2.0 * q.n - 1.0, mu + 1.0, q.t);
    const double val = integrate(
        [&](double r) {
            if (r <= 0.0 || r >= M_PI / 2.0) return 0.0;
            return kernel(r) * std::exp(-mu * std::log(std::cos(r)));
        },
        0.0, M_PI / 2.0, qp);
    return std::exp(-2.0 * q.n * mu * q.t) * val;
}

double proj_cf_series(const CharFnQuery& q, const SeriesParams& sp) {
    if (q.space != Space::Projective) throw DomainError("proj_cf_series requires the projective space");
    const int n = q.n;
    const double t = q.t, mu = q.mu();
    if (q.lambda_norm() == 0.0) return 1.0; // analytic mu -> 0 limit: only j = 0 survives
    double sum = 0.0;
    int below = 0;
    for (int j = 0; j < sp.max_terms; ++j) {
        const double lg = log_pochhammer(2.0 * n, j) - std::lgamma(j + 1.0) +
                          std::lgamma(j + mu / 2.0) + std::lgamma(j + 2.0 * n + mu + 1.0) -
                          std::lgamma(j + mu / 2.0 + 2.0 * n + 2.0) - std::lgamma(j + mu + 2.0);
        const double term = ((j % 2) ? -1.0 : 1.0) * (2.0 * j + 2.0 * n + mu + 1.0) *
                            std::exp(-2.0 * j * (j + 2.0 * n + mu + 1.0) * t + lg) * mu *
                            (mu + 2.0) / 4.0;
        sum += term;
        below = (std::fabs(term) < sp.term_rel_tol * std::fabs(sum)) ? below + 1 : 0;
        if (below >= sp.consecutive) {
            double v = std::exp(-2.0 * n * mu * t) * sum;
            if (corrupted("proj_cf_series")) v *= 1.01;
            return v;
        }
    }
    throw SeriesDivergence("proj_cf_series did not converge within the term budget");
}

PartialFractionTable partial_fraction_coeffs(int n, int j) {
    if (n < 1) throw DomainError("partial_fraction_coeffs requires n >= 1");
    if (j < 0) throw DomainError("partial_fraction_coeffs requires j >= 0");
    PartialFractionTable table;
    table.n = n;
    table.j = j;
    table.a.resize(2 * n + 2);
    // residue of N(mu)/D(mu) at mu_k = -2(j+k):
    //   N(mu) = (2j+2n+mu+1) mu (mu+2) prod_{i=2}^{2n} (j+mu+i)
    //   D(mu) = 4 prod_{i=0}^{2n+1} (j+mu/2+i)
    for (int k = 0; k <= 2 * n + 1; ++k) {
        double denom = 1.0;
        for (int i = 0; i <= 2 * n + 1; ++i) {
            if (i == k) continue;
            denom *= double(i - k);
        }
        if (denom == 0.0) throw DegenerateResidue("coinciding poles in partial-fraction system");
        double num = double(2 * n + 1 - 2 * k) * 4.0 * double(j + k) * double(j + k - 1);
        for (int i = 2; i <= 2 * n; ++i) num *= double(i - j - 2 * k);
        table.a[k] = num / (2.0 * denom);
    }
    return table;
}

namespace {

double proj_density_impl(double x2, double t, int n, const SeriesParams& sp) {
    if (!(t > 0.0)) throw DomainError("proj_density requires t > 0");
    if (n < 1) throw DomainError("proj_density requires n >= 1");
    QuadratureParams uqp{1e-13, 2000};
    double sum = 0.0;
    int below = 0;
    for (int j = 0; j < sp.max_terms; ++j) {
        const double c = (2.0 * j + 2.0 * n) * t;
        const double outer = ((j % 2) ? -1.0 : 1.0) *
                             std::exp(log_pochhammer(2.0 * n, j) - std::lgamma(j + 1.0) -
                                      2.0 * j * (j + 2.0 * n + 1.0) * t);
        const double v0 = std::sqrt(x2 + c * c);
        // closed term prefactor is the full c = (2j+2n) t of the Fourier pair
        double bracket = std::pow(2.0, 2 * n) * c * std::exp(c - v0) *
                         bessel_k2_scaled(v0) / (x2 + c * c);
        const PartialFractionTable pf = partial_fraction_coeffs(n, j);
        for (int k = 0; k <= 2 * n + 1; ++k) {
            if (pf.a[k] == 0.0) continue;
            const double decay = 2.0 * (j + k);
            const double U = (40.0 + std::log1p(x2)) / std::max(decay, 1.0) + 8.0;
            const double integral = integrate(
                [&](double u) {
                    const double cu = u + c;
                    const double v = std::sqrt(x2 + cu * cu);
                    return std::exp(-decay * u + cu - v) * cu * bessel_k2_scaled(v) /
                           (x2 + cu * cu);
                },
                0.0, U, uqp);
            bracket += pf.a[k] * integral;
        }
        const double term = outer * bracket;
        sum += term;
        below = (std::fabs(term) < sp.term_rel_tol * std::fabs(sum)) ? below + 1 : 0;
        if (below >= sp.consecutive) return sum / (2.0 * M_PI * M_PI);
    }
    throw SeriesDivergence("proj_density series did not converge within the term budget");
}

} // namespace

double proj_density_radial(double x_norm, double t, int n, const SeriesParams& sp) {
    return proj_density_impl(x_norm * x_norm, t, n, sp);
}

double proj_density(const Su2Vector& x, double t, int n, const SeriesParams& sp) {
    return proj_density_impl(x.norm_sq(), t, n, sp);
}

double clt_limit_cf(Space space, int n, const Su2Vector& lambda) {
    const double l2 = lambda.norm_sq();
    switch (space) {
        case Space::Hyperbolic:
            return std::exp(-l2 / 2.0);
        case Space::Projective:
            return std::exp(-double(n) * l2);
        default:
            throw DomainError("clt_limit_cf is defined for the curved spaces only");
    }
}

} // namespace qsa
