#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qsa/quaternion.hpp"

namespace qsa {

/// Empirical characteristic function (1/M) sum e^{i lambda . a_k} with a
/// conservative standard error: max of the cos/sin component standard errors.
struct EcfEstimate {
    Su2Vector lambda;
    std::complex<double> value;
    double stderr_ = 0.0;
    std::int64_t n_samples = 0;
};

EcfEstimate ecf(const std::vector<Su2Vector>& samples, const Su2Vector& lambda);

using Matrix3 = std::array<std::array<double, 3>, 3>;

struct CovarianceReport {
    Matrix3 sample_cov{};
    Matrix3 target{};
    std::array<double, 3> diag_rel_err{};
    std::array<double, 3> offdiag_z{}; // (0,1), (0,2), (1,2)
    double rel_tol = 0.0;
    std::int64_t n_samples = 0;
    bool passed = false;
    std::string to_json() const;
};

/// Sample covariance vs. a target: diagonal compared at rel_tol, off-diagonal
/// entries as z-scores against 0 at the 3-sigma level.
CovarianceReport covariance_test(const std::vector<Su2Vector>& samples, const Matrix3& target,
                                 double rel_tol);

struct EnergyDistanceReport {
    double statistic = 0.0;
    double p_value = 0.0;
    double level = 0.0;
    int permutations = 0;
    std::int64_t n_x = 0, n_y = 0;
    bool rejected = false;
    std::string to_json() const;
};

/// Two-sample energy-distance test with a seeded permutation null
/// (fixed 200 permutations).
EnergyDistanceReport energy_distance_test(const std::vector<Su2Vector>& x,
                                          const std::vector<Su2Vector>& y, double level,
                                          std::uint64_t seed = 0x5eedu);

} // namespace qsa
