#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qsa/errors.hpp"
#include "qsa/rng.hpp"
#include "qsa/stats.hpp"

using namespace qsa;

namespace {

std::vector<Su2Vector> gaussian_samples(std::size_t m, double sigma, std::uint64_t seed) {
    std::vector<Su2Vector> out(m);
    GaussianStream g(seed, 0);
    for (auto& v : out) v = Su2Vector{sigma * g.next(), sigma * g.next(), sigma * g.next()};
    return out;
}

} // namespace

TEST_CASE("ecf basics") {
    const auto zeros = std::vector<Su2Vector>(100, Su2Vector{0, 0, 0});
    const EcfEstimate at0 = ecf(gaussian_samples(500, 1.0, 1), {0, 0, 0});
    CHECK(at0.value.real() == 1.0);
    CHECK(at0.value.imag() == 0.0);
    CHECK(at0.stderr_ == 0.0);
    const EcfEstimate allz = ecf(zeros, {0.7, -0.2, 0.1});
    CHECK(allz.value.real() == 1.0);
    CHECK(std::abs(allz.value) <= 1.0 + 1e-12);
    CHECK_THROWS_AS(ecf({}, {0, 0, 0}), InsufficientSamples);
}

TEST_CASE("ecf matches the gaussian CF within 3 sigma") {
    const double sigma = 0.8;
    const auto samples = gaussian_samples(20000, sigma, 2);
    for (const double l : {0.5, 1.0, 2.0}) {
        const Su2Vector lambda{l * 0.36, l * 0.48, l * 0.8};
        const EcfEstimate e = ecf(samples, lambda);
        const double want = std::exp(-lambda.norm_sq() * sigma * sigma / 2.0);
        CHECK(std::fabs(e.value.real() - want) <= 3.0 * e.stderr_);
        CHECK(std::fabs(e.value.imag()) <= 3.0 * e.stderr_);
    }
}

TEST_CASE("ecf is bit-exact under sample permutation") {
    auto samples = gaussian_samples(5000, 1.0, 3);
    const Su2Vector lambda{0.4, -0.3, 0.9};
    const EcfEstimate base = ecf(samples, lambda);
    GaussianStream g(4, 0);
    for (int trial = 0; trial < 5; ++trial) {
        for (std::size_t i = samples.size() - 1; i > 0; --i) {
            const auto j = std::size_t(g.next_uniform() * double(i + 1));
            std::swap(samples[i], samples[std::min(j, i)]);
        }
        const EcfEstimate permuted = ecf(samples, lambda);
        CHECK(permuted.value.real() == base.value.real());
        CHECK(permuted.value.imag() == base.value.imag());
        CHECK(permuted.stderr_ == base.stderr_);
    }
}

TEST_CASE("covariance test: designed pass and designed miss") {
    const Matrix3 eye{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto unit = gaussian_samples(20000, 1.0, 5);
    CHECK(covariance_test(unit, eye, 0.10).passed);
    const auto twice = gaussian_samples(20000, std::sqrt(2.0), 6);
    CHECK(!covariance_test(twice, eye, 0.10).passed);
    CHECK_THROWS_AS(covariance_test(gaussian_samples(50, 1.0, 7), eye, 0.1),
                    InsufficientSamples);
}

TEST_CASE("covariance equivariance under rotation") {
    auto samples = gaussian_samples(5000, 1.0, 8);
    // stretch one axis so the covariance is anisotropic
    for (auto& v : samples) v.vI *= 2.0;
    const Matrix3 eye{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const CovarianceReport base = covariance_test(samples, eye, 1e9);
    // rotation by 90 degrees around K: (x, y, z) -> (-y, x, z)
    std::vector<Su2Vector> rotated(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        rotated[i] = Su2Vector{-samples[i].vJ, samples[i].vI, samples[i].vK};
    const CovarianceReport rot = covariance_test(rotated, eye, 1e9);
    // R C R^T for this rotation swaps the (I,I) and (J,J) entries, negates (I,J) pairings
    CHECK(std::fabs(rot.sample_cov[0][0] - base.sample_cov[1][1]) <= 1e-12);
    CHECK(std::fabs(rot.sample_cov[1][1] - base.sample_cov[0][0]) <= 1e-12);
    CHECK(std::fabs(rot.sample_cov[2][2] - base.sample_cov[2][2]) <= 1e-12);
    CHECK(std::fabs(rot.sample_cov[0][1] + base.sample_cov[0][1]) <= 1e-12);
    CHECK(std::fabs(rot.sample_cov[0][2] + base.sample_cov[1][2]) <= 1e-12);
    CHECK(std::fabs(rot.sample_cov[1][2] - base.sample_cov[0][2]) <= 1e-12);
}

TEST_CASE("energy distance: same law accepted, different law rejected") {
    auto pool = gaussian_samples(3000, 1.0, 9);
    const std::vector<Su2Vector> xs(pool.begin(), pool.begin() + 1500);
    const std::vector<Su2Vector> ys(pool.begin() + 1500, pool.end());
    const EnergyDistanceReport same = energy_distance_test(xs, ys, 0.05, 42);
    CHECK(!same.rejected);
    CHECK(same.permutations == 200);
    const auto wide = gaussian_samples(1500, 2.0, 10);
    const EnergyDistanceReport diff = energy_distance_test(xs, wide, 0.05, 42);
    CHECK(diff.rejected);
    CHECK(diff.p_value <= 0.05);
    CHECK_THROWS_AS(energy_distance_test(xs, gaussian_samples(10, 1.0, 11), 0.05),
                    InsufficientSamples);
}

TEST_CASE("reports serialize to JSON with a pass flag") {
    const Matrix3 eye{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto unit = gaussian_samples(2000, 1.0, 12);
    const std::string cov_json = covariance_test(unit, eye, 0.2).to_json();
    CHECK(cov_json.find("\"pass\":true") != std::string::npos);
    CHECK(cov_json.find("\"sample_cov\"") != std::string::npos);
    auto pool = gaussian_samples(2400, 1.0, 13);
    const std::vector<Su2Vector> xs(pool.begin(), pool.begin() + 1200);
    const std::vector<Su2Vector> ys(pool.begin() + 1200, pool.end());
    const std::string e_json = energy_distance_test(xs, ys, 0.05, 7).to_json();
    CHECK(e_json.find("\"p_value\":") != std::string::npos);
    CHECK(e_json.find("\"pass\":") != std::string::npos);
}
