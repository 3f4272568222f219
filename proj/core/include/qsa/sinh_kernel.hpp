#pragma once

#include <cstdint>
#include <vector>

#include "qsa/params.hpp"

namespace qsa {

/// One monomial of the algebra closed under (1/sinh(x) d/dx):
///   coeff * t^{-t_inv_pow} * x^{x_pow} * cosh(x)^{cosh_pow} * sinh(x)^{sinh_pow},
/// understood as multiplying the global Gaussian e^{-x^2/(2t)}.
/// Coefficients stay integer-valued under the derivative rules and are kept exact.
struct SinhOpTerm {
    long long coeff = 0;
    int t_inv_pow = 0;
    int x_pow = 0;
    int cosh_pow = 0;
    int sinh_pow = 0; // may be negative
};

/// Applies (1/sinh(x) d/dx) exactly k times to the term list (merged keys,
/// exact integer coefficients). The empty start {1 * e^{-x^2/2t}} is
/// {coeff=1, all powers 0}.
std::vector<SinhOpTerm> sinh_op_apply(std::vector<SinhOpTerm> terms, int k);

/// Evaluates a term list at (t, x), including the e^{-x^2/(2t)} factor.
/// Plain double summation; fine away from the x->0 cancellation region.
double sinh_op_eval(const std::vector<SinhOpTerm>& terms, double t, double x);

/// Heat kernel s_{t,4n+1}(cosh x) of the (4n+1)-dimensional real hyperbolic
/// space, built from the cached 2n-fold symbolic operator with prefactor
/// e^{-(2n)^2 t/2} / ((2 pi)^{2n} sqrt(2 pi t)).
///
/// Instances are cheap handles onto a process-wide term-list cache keyed by n;
/// concurrent construction is idempotent and evaluation is pure.
class HyperbolicHeatKernel {
public:
    explicit HyperbolicHeatKernel(int n);

    int n() const { return n_; }
    const std::vector<SinhOpTerm>& terms() const { return *terms_; }

    /// s_{t,4n+1}(cosh x), x > 0. Uses compensated double-double summation for
    /// x < 0.05 where the term cancellation is catastrophic in plain doubles.
    double operator()(double t, double x) const;

    /// ln s_{t,4n+1}(cosh x), exponent-shifted so it stays finite far out on
    /// the tail where the plain value underflows. Returns -inf if the value
    /// rounds to a non-positive number.
    double log_value(double t, double x) const;

private:
    int n_;
    const std::vector<SinhOpTerm>* terms_; // owned by the cache
};

} // namespace qsa
