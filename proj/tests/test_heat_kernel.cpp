#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <set>
#include <thread>

#include "qsa/circular_kernel.hpp"
#include "qsa/quadrature.hpp"
#include "qsa/rng.hpp"
#include "qsa/sinh_kernel.hpp"
#include "qsa/specfun.hpp"

using namespace qsa;

namespace {

bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

// independent oracle: (1/sinh d/dx)^k e^{-x^2/2t} = (d/dz)^k e^{-acosh(z)^2/2t}, z = cosh x
double fd_oracle(int k, double t, double x) {
    using LD = long double;
    const LD z = std::cosh((LD)x);
    auto G = [t](LD zz) { return std::exp(-std::pow(std::acosh(zz), 2.0L) / (2.0L * (LD)t)); };
    auto stencil = [&](LD h) {
        LD sum = 0.0L, binom = 1.0L;
        const int m = k / 2;
        for (int i = 0; i <= k; ++i) {
            sum += ((i % 2) ? -1.0L : 1.0L) * binom * G(z + (m - i) * h);
            binom = binom * (k - i) / (i + 1);
        }
        return sum / std::pow(h, (LD)k);
    };
    const LD h0 = 0.12L * std::min(1.0L, z - 1.0L);
    LD row[4];
    for (int j = 0; j < 4; ++j) row[j] = stencil(h0 / std::pow(2.0L, (LD)j));
    LD factor = 4.0L;
    for (int kk = 1; kk < 4; ++kk) {
        for (int j = 3; j >= kk; --j) row[j] = (factor * row[j] - row[j - 1]) / (factor - 1.0L);
        factor *= 4.0L;
    }
    return double(row[3]);
}

} // namespace

TEST_CASE("sinh operator term algebra") {
    const std::vector<SinhOpTerm> start{{1, 0, 0, 0, 0}};
    // k = 0 leaves the list untouched
    const auto same = sinh_op_apply(start, 0);
    REQUIRE(same.size() == 1);
    CHECK(same[0].coeff == 1);
    // one application: -(x/t) sinh^{-1}
    const auto k1 = sinh_op_apply(start, 1);
    REQUIRE(k1.size() == 1);
    CHECK(k1[0].coeff == -1);
    CHECK(k1[0].t_inv_pow == 1);
    CHECK(k1[0].x_pow == 1);
    CHECK(k1[0].cosh_pow == 0);
    CHECK(k1[0].sinh_pow == -1);
    // two applications: the three-term closed form
    const auto k2 = sinh_op_apply(start, 2);
    REQUIRE(k2.size() == 3);
    auto find = [&](int p, int a, int b, int s) -> long long {
        for (const auto& t : k2)
            if (t.t_inv_pow == p && t.x_pow == a && t.cosh_pow == b && t.sinh_pow == s)
                return t.coeff;
        return 0;
    };
    CHECK(find(1, 0, 0, -2) == -1);
    CHECK(find(1, 1, 1, -3) == 1);
    CHECK(find(2, 2, 0, -2) == 1);
}

TEST_CASE("term lists stay merged with polynomial growth") {
    const std::vector<SinhOpTerm> start{{1, 0, 0, 0, 0}};
    const std::size_t expected_counts[] = {1, 3, 6, 11, 17, 26, 36, 50};
    for (int k = 1; k <= 8; ++k) {
        const auto terms = sinh_op_apply(start, k);
        CHECK(terms.size() == expected_counts[k - 1]);
        CHECK(terms.size() <= std::size_t((k + 2) * (k + 2))); // ~quadratic growth
        std::set<std::tuple<int, int, int, int>> keys;
        for (const auto& t : terms) {
            CHECK(t.coeff != 0);
            CHECK(keys.insert({t.t_inv_pow, t.x_pow, t.cosh_pow, t.sinh_pow}).second);
        }
    }
}

TEST_CASE("operator evaluation matches the finite-difference oracle") {
    const std::vector<SinhOpTerm> start{{1, 0, 0, 0, 0}};
    const auto k2 = sinh_op_apply(start, 2);
    CHECK(rel_close(sinh_op_eval(k2, 1.0, 1.0), fd_oracle(2, 1.0, 1.0), 1e-6));
    GaussianStream g(21, 0);
    for (const int n : {1, 2}) {
        const auto terms = sinh_op_apply(start, 2 * n);
        for (int trial = 0; trial < 8; ++trial) {
            const double t = 0.4 + 1.2 * g.next_uniform();
            const double x = 0.8 + 1.4 * g.next_uniform();
            CHECK(rel_close(sinh_op_eval(terms, t, x), fd_oracle(2 * n, t, x), 1e-6));
        }
    }
}

TEST_CASE("hyperbolic heat kernel values and small-x branch") {
    const HyperbolicHeatKernel k1(1);
    const HyperbolicHeatKernel k2(2);
    // high-precision references
    CHECK(rel_close(k1(1.0, 1.0), 0.00078861688904886685328, 1e-12));
    CHECK(rel_close(k2(1.0, 1.0), 1.1966497630133077962e-7, 1e-12));
    CHECK(rel_close(k1(1.0, 0.01), 0.0018233212223748605354, 1e-10));
    CHECK(rel_close(k1(0.5, 0.02), 0.024521348445240418845, 1e-10));
    CHECK(rel_close(k2(0.5, 0.02), 0.0002536680586525063196, 1e-10));
    CHECK(rel_close(k2(1.0, 0.049), 4.0604015560021033166e-7, 1e-10));
    // continuity across the double-double switch at x = 0.05
    CHECK(rel_close(k1(1.0, 0.049), 0.0018197586962163561766, 1e-10));
    CHECK(rel_close(k1(1.0, 0.051), 0.0018194493863868483179, 1e-10));
    // log evaluation agrees with the direct one and survives far tails
    for (const double x : {0.2, 1.0, 3.0, 8.0}) {
        CHECK(rel_close(std::exp(k1.log_value(1.0, x)), k1(1.0, x), 1e-11));
    }
    CHECK(std::isfinite(k1.log_value(1.0, 60.0)));
    CHECK(k1.log_value(1.0, 60.0) < -700.0); // underflows as a plain double
    CHECK_THROWS_AS(k1(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(k1(0.0, 1.0), DomainError);
}

TEST_CASE("heat kernel integrates to 1 against the hyperbolic volume") {
    const int n = 1;
    const double t = 0.5;
    const HyperbolicHeatKernel kernel(n);
    const int d = 4 * n;
    const double omega = 2.0 * std::pow(M_PI, (d + 1) / 2.0) / std::exp(std::lgamma((d + 1) / 2.0));
    const double mass = integrate(
        [&](double x) {
            return x <= 0.0 ? 0.0 : kernel(t, x) * omega * std::pow(std::sinh(x), d);
        },
        0.0, 14.0, {1e-9, 4000});
    CHECK(std::fabs(mass - 1.0) <= 1e-4);
}

TEST_CASE("gaussian bound with fitted constant") {
    // s(cosh x) <= C (x/sinh x) e^{-x^2/2t}: the ratio must stay bounded over
    // the whole half-line; C is fitted on one fine grid and checked on an
    // interleaved one.
    const HyperbolicHeatKernel kernel(1);
    for (const double t : {0.5, 1.0}) {
        auto ratio = [&](double x) {
            return kernel(t, x) / (x / std::sinh(x) * std::exp(-x * x / (2.0 * t)));
        };
        double c_fit = 0.0;
        for (double x = 0.002; x <= 12.0; x += 0.002) c_fit = std::max(c_fit, ratio(x));
        c_fit *= 1.0005;
        for (double x = 0.003; x <= 12.0; x += 0.00317) CHECK(ratio(x) <= c_fit);
    }
}

TEST_CASE("circular jacobi kernel: mass, stationarity, truncation") {
    for (const double t : {0.1, 1.0}) {
        const CircularJacobiKernel kernel(1.0, 1.0, t); // n = 1, mu = 0
        const double mass =
            integrate([&](double r) { return kernel(r); }, 1e-12, M_PI / 2 - 1e-12, {1e-9, 4000});
        CHECK(std::fabs(mass - 1.0) <= 1e-6);
        CHECK(kernel.params().j_max <= 200);
        for (int i = 1; i < 1000; ++i) CHECK(kernel(i * M_PI / 2 / 1000.0) >= 0.0);
    }
    // t -> infinity limit is the Beta-type stationary density 12 cos^3 sin^3 (n=1, mu=0)
    const CircularJacobiKernel stationary(1.0, 1.0, 50.0);
    for (double r = 0.1; r < M_PI / 2 - 0.05; r += 0.1) {
        const double want = 12.0 * std::pow(std::cos(r), 3) * std::pow(std::sin(r), 3);
        CHECK(std::fabs(stationary(r) - want) <= 1e-6);
    }
    CHECK(std::fabs(stationary(0.7) - 1.4354718608921132257) <= 1e-6);
    const CircularJacobiKernel k(1.0, 1.0, 0.5);
    CHECK_THROWS_AS(k(0.0), DomainError);
    CHECK_THROWS_AS(k(M_PI / 2), DomainError);
    CHECK_THROWS_AS(CircularJacobiKernel(-1.5, 1.0, 0.5), DomainError);
}

TEST_CASE("concurrent kernel construction is idempotent") {
    std::vector<std::thread> pool;
    std::array<double, 8> vals{};
    for (int i = 0; i < 8; ++i)
        pool.emplace_back([&vals, i] {
            const HyperbolicHeatKernel k(3); // first construction races on the cache
            vals[i] = k(0.7, 1.1);
        });
    for (auto& th : pool) th.join();
    for (int i = 1; i < 8; ++i) CHECK(vals[i] == vals[0]);
    CHECK(vals[0] > 0.0);
}

TEST_CASE("kernel handles generic (alpha, beta) pairs") {
    // mass stays 1 for non-integer parameters
    const CircularJacobiKernel kernel(3.0, 1.8, 0.3); // n = 2, mu = 0.8
    const double mass =
        integrate([&](double r) { return kernel(r); }, 1e-12, M_PI / 2 - 1e-12, {1e-9, 4000});
    CHECK(std::fabs(mass - 1.0) <= 1e-6);
}
