#include "qsa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qsa/errors.hpp"
#include "qsa/parallel.hpp"
#include "qsa/rng.hpp"

namespace qsa {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

namespace {

// Canonical-order compensated sum: sorting the addends first makes the result
// a function of the multiset, so it is bit-identical under any permutation of
// the samples and any parallel chunking upstream.
double canonical_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0, c = 0.0;
    for (const double x : terms) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

} // namespace

EcfEstimate ecf(const std::vector<Su2Vector>& samples, const Su2Vector& lambda) {
    const std::size_t m = samples.size();
    if (m < 2) throw InsufficientSamples("ecf requires at least 2 samples");
    std::vector<double> cs(m), sn(m);
    parallel_for_blocks(m, 4096, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double phase = lambda.dot(samples[i]);
            cs[i] = std::cos(phase);
            sn[i] = std::sin(phase);
        }
    });
    std::vector<double> work = cs;
    const double c_mean = canonical_sum(work) / double(m);
    work = sn;
    const double s_mean = canonical_sum(work) / double(m);
    work.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = cs[i] - c_mean;
        work[i] = d * d;
    }
    const double c_var = canonical_sum(work) / double(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = sn[i] - s_mean;
        work[i] = d * d;
    }
    const double s_var = canonical_sum(work) / double(m - 1);
    EcfEstimate e;
    e.lambda = lambda;
    e.value = {c_mean, s_mean};
    e.stderr_ = std::sqrt(std::max(c_var, s_var) / double(m));
    e.n_samples = std::int64_t(m);
    return e;
}

CovarianceReport covariance_test(const std::vector<Su2Vector>& samples, const Matrix3& target,
                                 double rel_tol) {
    const std::size_t m = samples.size();
    if (m < 100) throw InsufficientSamples("covariance_test requires at least 100 samples");
    auto comp = [](const Su2Vector& v, int i) { return i == 0 ? v.vI : (i == 1 ? v.vJ : v.vK); };
    std::array<double, 3> mean{};
    for (int i = 0; i < 3; ++i)
        mean[i] = block_sum(m, [&](std::size_t k) { return comp(samples[k], i); }) / double(m);
    CovarianceReport rep;
    rep.target = target;
    rep.rel_tol = rel_tol;
    rep.n_samples = std::int64_t(m);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const double cij = block_sum(m, [&](std::size_t k) {
                                   return (comp(samples[k], i) - mean[i]) *
                                          (comp(samples[k], j) - mean[j]);
                               }) / double(m - 1);
            rep.sample_cov[i][j] = rep.sample_cov[j][i] = cij;
        }
    bool pass = true;
    for (int i = 0; i < 3; ++i) {
        rep.diag_rel_err[i] =
            std::fabs(rep.sample_cov[i][i] - target[i][i]) / std::fabs(target[i][i]);
        if (rep.diag_rel_err[i] > rel_tol) pass = false;
    }
    // off-diagonal z-scores vs 0; Var(c_ij) ~ (c_ii c_jj + c_ij^2)/m
    int idx = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j, ++idx) {
            const double var = (rep.sample_cov[i][i] * rep.sample_cov[j][j] +
                                rep.sample_cov[i][j] * rep.sample_cov[i][j]) /
                               double(m);
            rep.offdiag_z[idx] =
                (rep.sample_cov[i][j] - target[i][j]) / std::sqrt(std::max(var, 1e-300));
            if (std::fabs(rep.offdiag_z[idx]) > 3.0) pass = false;
        }
    rep.passed = pass;
    return rep;
}

std::string CovarianceReport::to_json() const {
    std::string s = "{\"statistic\":\"covariance\",\"n_samples\":" + std::to_string(n_samples) +
                    ",\"rel_tol\":" + fmt(rel_tol) + ",\"sample_cov\":[";
    for (int i = 0; i < 3; ++i) {
        s += i ? ",[" : "[";
        for (int j = 0; j < 3; ++j) s += (j ? "," : "") + fmt(sample_cov[i][j]);
        s += "]";
    }
    s += "],\"diag_rel_err\":[";
    for (int i = 0; i < 3; ++i) s += (i ? "," : "") + fmt(diag_rel_err[i]);
    s += "],\"offdiag_z\":[";
    for (int i = 0; i < 3; ++i) s += (i ? "," : "") + fmt(offdiag_z[i]);
    s += std::string("],\"pass\":") + (passed ? "true" : "false") + "}";
    return s;
}

namespace {

// Row-blocked parallel double sums with per-block Kahan partials reduced in
// block order: deterministic for any worker count, and fast enough for the
// 200-permutation null at 1e4-per-side sample sizes.
double pair_sum(const std::vector<Su2Vector>& pool, const std::uint32_t* rows, std::size_t n_rows,
                const std::uint32_t* cols, std::size_t n_cols) {
    constexpr std::size_t kRowBlock = 8;
    const std::size_t n_blocks = (n_rows + kRowBlock - 1) / kRowBlock;
    std::vector<double> partial(n_blocks, 0.0);
    parallel_for_blocks(n_rows, kRowBlock, [&](std::size_t lo, std::size_t hi) {
        double s = 0.0, c = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const Su2Vector& p = pool[rows[i]];
            double row = 0.0;
            for (std::size_t j = 0; j < n_cols; ++j) {
                const Su2Vector& q = pool[cols[j]];
                const double dI = p.vI - q.vI, dJ = p.vJ - q.vJ, dK = p.vK - q.vK;
                row += std::sqrt(dI * dI + dJ * dJ + dK * dK);
            }
            const double y = row - c;
            const double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        partial[lo / kRowBlock] = s;
    });
    double s = 0.0, c = 0.0;
    for (const double p : partial) {
        const double y = p - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

double energy_statistic(const std::vector<Su2Vector>& pool, const std::vector<std::uint32_t>& idx,
                        std::size_t nx) {
    // E = 2 A - B - C over the index arrangement: x = idx[0..nx), y = idx[nx..)
    const std::size_t ny = idx.size() - nx;
    const std::uint32_t* xi = idx.data();
    const std::uint32_t* yi = idx.data() + nx;
    const double A = pair_sum(pool, xi, nx, yi, ny) / (double(nx) * double(ny));
    const double B = pair_sum(pool, xi, nx, xi, nx) / (double(nx) * double(nx));
    const double C = pair_sum(pool, yi, ny, yi, ny) / (double(ny) * double(ny));
    return 2.0 * A - B - C;
}

} // namespace

EnergyDistanceReport energy_distance_test(const std::vector<Su2Vector>& x,
                                          const std::vector<Su2Vector>& y, double level,
                                          std::uint64_t seed) {
    if (x.size() < 1000 || y.size() < 1000)
        throw InsufficientSamples("energy_distance_test requires >= 1000 samples per set");
    constexpr int kPermutations = 200;
    std::vector<Su2Vector> pool;
    pool.reserve(x.size() + y.size());
    pool.insert(pool.end(), x.begin(), x.end());
    pool.insert(pool.end(), y.begin(), y.end());
    std::vector<std::uint32_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = std::uint32_t(i);

    const double observed = energy_statistic(pool, idx, x.size());
    GaussianStream shuffler(seed, 0xECD15Au);
    int geq = 0;
    for (int p = 0; p < kPermutations; ++p) {
        for (std::size_t i = idx.size() - 1; i > 0; --i) { // seeded Fisher-Yates
            const auto j = std::size_t(shuffler.next_uniform() * double(i + 1));
            std::swap(idx[i], idx[j > i ? i : j]);
        }
        if (energy_statistic(pool, idx, x.size()) >= observed) ++geq;
    }
    EnergyDistanceReport rep;
    rep.statistic = observed;
    rep.p_value = double(1 + geq) / double(1 + kPermutations);
    rep.level = level;
    rep.permutations = kPermutations;
    rep.n_x = std::int64_t(x.size());
    rep.n_y = std::int64_t(y.size());
    rep.rejected = rep.p_value < level;
    return rep;
}

std::string EnergyDistanceReport::to_json() const {
    return "{\"statistic\":" + fmt(statistic) + ",\"p_value\":" + fmt(p_value) +
           ",\"level\":" + fmt(level) + ",\"permutations\":" + std::to_string(permutations) +
           ",\"n_x\":" + std::to_string(n_x) + ",\"n_y\":" + std::to_string(n_y) +
           ",\"pass\":" + (rejected ? "false" : "true") + "}";
}

} // namespace qsa
