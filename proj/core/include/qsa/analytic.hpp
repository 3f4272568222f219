#pragma once

#include <vector>

#include "qsa/params.hpp"
#include "qsa/quaternion.hpp"

namespace qsa {

enum class Space { Flat, Hyperbolic, Projective };

/// Input of every characteristic-function evaluator. All formulas depend on
/// lambda through |lambda| only; the full vector is kept so rotational
/// invariance can be exercised end to end.
struct CharFnQuery {
    Space space;
    int n;
    double t;
    Su2Vector lambda;

    double lambda_norm() const { return lambda.norm(); }
    /// mu = sqrt(|lambda|^2 + 1) - 1 (curved spaces).
    double mu() const;
};

/// Coefficients a_{k,n}(j), k = 0..2n+1, of the partial-fraction decomposition
/// of the rational j-th characteristic-function coefficient in mu.
struct PartialFractionTable {
    int n;
    int j;
    std::vector<double> a;
};

/// Flat-space CF: (cosh(|lambda| t / 2))^{-2n}.
double flat_cf(const CharFnQuery& q);

/// CF conditioned on the radial endpoint r (Yor's formula):
/// (u/sinh u)^{2n} exp(-(r^2/2t)(u coth u - 1)), u = |lambda| t / 2.
double flat_conditional_cf(const CharFnQuery& q, double r);

/// Flat-space density of the area at time t, by the closed double integral
/// (u on [-1,1]; the v-integral taken through y = v/(1-v), y = e^s).
double flat_density(const Su2Vector& phi, double t, int n, const QuadratureParams& qp = {});
double flat_density_radial(double phi_norm, double t, int n, const QuadratureParams& qp = {});

/// Hyperbolic CF by the kernel-form double integral over (r, u).
double hyp_cf(const CharFnQuery& q, const QuadratureParams& qp = {});

/// Hyperbolic density evaluator. The (r,u) double integrals depend on v only
/// through the even-moment index m, so the coefficient sequence is computed
/// once and reused across a grid of v.
class HypDensityEvaluator {
public:
    HypDensityEvaluator(int n, double t, const SeriesParams& sp = {},
                        const QuadratureParams& qp = {});

    double operator()(const Su2Vector& v) const;
    const std::vector<double>& moment_coefficients() const { return cm_; }

private:
    int n_;
    double t_;
    SeriesParams sp_;
    std::vector<double> cm_;
    double log_pref_;
};

double hyp_density(const Su2Vector& v, double t, int n, const SeriesParams& sp = {});

/// Projective CF, kernel-integral route (Jacobi kernel over (0, pi/2)).
double proj_cf_integral(const CharFnQuery& q, const QuadratureParams& qp = {});

/// Projective CF, alternating-series route (Beta-integral reduction).
/// At lambda = 0 the mu->0 limit is taken analytically and the value is 1.
double proj_cf_series(const CharFnQuery& q, const SeriesParams& sp = {});

/// a_{k,n}(j) by exact residue evaluation of the factored rational function.
PartialFractionTable partial_fraction_coeffs(int n, int j);

/// Projective density evaluator (series over j with K_2 integrals); like the
/// hyperbolic evaluator, per-j u-integrals are independent of |x| only through
/// the K_2 argument, so no caching is possible and evaluation is direct.
double proj_density(const Su2Vector& x, double t, int n, const SeriesParams& sp = {});
double proj_density_radial(double x_norm, double t, int n, const SeriesParams& sp = {});

/// Large-time limit CF: e^{-|lambda|^2/2} (Hyperbolic), e^{-n|lambda|^2} (Projective).
double clt_limit_cf(Space space, int n, const Su2Vector& lambda);

} // namespace qsa
