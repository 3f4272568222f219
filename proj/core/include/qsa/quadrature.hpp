#pragma once

#include <functional>

#include "qsa/params.hpp"

namespace qsa {

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b] to the
/// absolute tolerance in `qp`. Throws QuadratureFailure once the panel budget
/// is exhausted or the integrand turns non-finite.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureParams& qp = {});

} // namespace qsa
