#pragma once

#include <cstdint>

namespace qsa {

inline constexpr const char* kVersion = "0.1.0";

/// Uniform series stopping contract: stop once |term| < term_rel_tol * |partial sum|
/// for `consecutive` terms in a row, fail after max_terms.
struct SeriesParams {
    int max_terms = 500;
    double term_rel_tol = 1e-16;
    int consecutive = 3;
};

/// Budgeted adaptive Gauss-Kronrod integration.
struct QuadratureParams {
    double abs_tol = 1e-10;
    int max_panels = 4000;
};

} // namespace qsa
