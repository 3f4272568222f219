#pragma once

#include <vector>

#include "qsa/params.hpp"

namespace qsa {

/// Parameters of the circular Jacobi transition density started at 0:
/// generator (1/2) d^2/dr^2 + ((alpha+1/2) cot r - (beta+1/2) tan r) d/dr on (0, pi/2).
struct CircularKernelParams {
    double alpha; // > -1
    double beta;  // > -1
    int j_max;    // filled by the truncation rule at construction
    double t;     // > 0
};

/// Spectral-series evaluation of the circular Jacobi kernel p_t(0, r) as a
/// density in dr. Coefficients are precomputed for fixed (alpha, beta, t) and
/// truncated by the uniform rule; evaluation runs the Jacobi recurrence at
/// cos(2r). Negative values below -1e-12 raise NegativeDensity; tiny negative
/// ripple is clamped to 0.
class CircularJacobiKernel {
public:
    CircularJacobiKernel(double alpha, double beta, double t, const SeriesParams& sp = {});

    const CircularKernelParams& params() const { return params_; }

    double operator()(double r) const;

private:
    CircularKernelParams params_;
    double log_pref_;             // ln(2 / Gamma(alpha+1))
    std::vector<double> coeff_;   // (2j+a+b+1) e^{-2j(j+a+b+1)t} G(j+a+b+1)/G(j+b+1)
};

/// Convenience free function matching the kernel's operation signature.
double circular_jacobi_kernel(const CircularKernelParams& p, double r);

} // namespace qsa
