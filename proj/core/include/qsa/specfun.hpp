#pragma once

#include "qsa/params.hpp"
#include "qsa/quaternion.hpp"

namespace qsa {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Rising factorial (a)_j = a(a+1)...(a+j-1), (a)_0 = 1.
/// Falls back to the log-domain Gamma ratio when the direct product overflows.
double pochhammer(double a, int j);

/// ln (a)_j for a > 0.
double log_pochhammer(double a, int j);

/// Jacobi polynomial P_j^{(a,b)}(x) by the three-term recurrence.
double jacobi_poly(int j, double a, double b, double x);

/// Probabilists' Hermite polynomial He_j via He_{j+1} = x He_j - j He_{j-1}.
double hermite_poly(int j, double x);

/// Modified Bessel function I_{m-1/2}(u) of half-integer order, m >= 0, u > 0,
/// summed from the ascending series (positive terms, uniform stopping rule).
double bessel_i_half(int m, double u, const SeriesParams& sp = {});

/// Modified Bessel function K_2(v) for v > 0; rel. error ~1e-12 on [1e-3, 700],
/// underflows to 0 beyond 700.
double bessel_k2(double v);

/// e^v K_2(v): the scaled form used wherever an e^{+c} factor cancels the decay.
double bessel_k2_scaled(double v);

/// Terminating Gauss hypergeometric 2F1(-j, b; c; z) as the exact finite sum,
/// neg_j = -j <= 0. Throws DomainError when c is a nonpositive integer with
/// -c < j (a pole inside the sum).
double gauss_2f1_terminating(int neg_j, double b, double c, double z);

/// Q_{2m}(v, t) = e^{|v|^2/(2t)} Delta_v^m e^{-|v|^2/(2t)} evaluated through its
/// even-Hermite product representation.
double q2m_poly(int m, const Su2Vector& v, double t);

} // namespace qsa
