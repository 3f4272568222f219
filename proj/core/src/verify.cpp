#include "qsa/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "qsa/analytic.hpp"
#include "qsa/circular_kernel.hpp"
#include "qsa/parallel.hpp"
#include "qsa/quadrature.hpp"
#include "qsa/rng.hpp"
#include "qsa/sde.hpp"
#include "qsa/sinh_kernel.hpp"
#include "qsa/specfun.hpp"
#include "qsa/stats.hpp"

namespace qsa {

namespace {

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

const Su2Vector kDir{0.36, 0.48, 0.80}; // unit, off-axis: exercises rotational invariance

// ---------- finite-difference oracles (independent of the symbolic path) ----------

using LD = long double;

// Central-binomial stencil for the (2m)-th derivative, Richardson-extrapolated.
LD fd_even_deriv(const std::function<LD(LD)>& f, LD x, int order2m, LD h0, int levels = 3) {
    const int m = order2m / 2;
    auto stencil = [&](LD h) {
        LD sum = 0.0L;
        LD binom = 1.0L;
        for (int i = 0; i <= order2m; ++i) {
            const LD sgn = (i % 2) ? -1.0L : 1.0L;
            sum += sgn * binom * f(x + (m - i) * h);
            binom = binom * (order2m - i) / (i + 1);
        }
        return sum / std::pow(h, LD(order2m));
    };
    // Richardson on the h^2 error series
    std::vector<LD> row(levels);
    for (int j = 0; j < levels; ++j) row[j] = stencil(h0 / std::pow(2.0L, LD(j)));
    LD factor = 4.0L;
    for (int k = 1; k < levels; ++k) {
        for (int j = levels - 1; j >= k; --j)
            row[j] = (factor * row[j] - row[j - 1]) / (factor - 1.0L);
        factor *= 4.0L;
    }
    return row[levels - 1];
}

// (1/sinh d/dx)^k e^{-x^2/2t} equals (d/dz)^k e^{-acosh(z)^2/2t} at z = cosh x.
double sinh_op_fd_oracle(int k, double t, double x) {
    const LD z = std::cosh((LD)x);
    auto G = [t](LD zz) { return std::exp(-std::pow(std::acosh(zz), 2.0L) / (2.0L * (LD)t)); };
    const LD h0 = 0.12L * std::min(1.0L, (z - 1.0L));
    return double(fd_even_deriv(G, z, k, h0, 4));
}

// Q_2m via the radial reduction Delta^m F = (d/drho)^{2m}[rho F]/rho, F the Gaussian.
double q2m_fd_oracle(int m, double rho, double t) {
    auto H = [t](LD r) { return r * std::exp(-r * r / (2.0L * (LD)t)); };
    const LD d = fd_even_deriv(H, (LD)rho, 2 * m, 0.2L * std::sqrt((LD)t), 4);
    return double(d / (LD)rho * std::exp((LD)(rho * rho) / (2.0L * (LD)t)));
}

// Radial inversion of a radial CF: density(v) = (1/2pi^2) int rho^2 sinc(rho v) cf(rho) drho.
double radial_cf_inversion(const std::function<double(double)>& cf, double v, double rho_max) {
    QuadratureParams qp{1e-11, 8000};
    return integrate(
               [&](double rho) {
                   const double rv = rho * v;
                   const double sinc = rv < 1e-8 ? 1.0 - rv * rv / 6.0 : std::sin(rv) / rv;
                   return rho * rho * sinc * cf(rho);
               },
               0.0, rho_max, qp) /
           (2.0 * M_PI * M_PI);
}

std::vector<Su2Vector> areas(const BatchResult& batch) {
    std::vector<Su2Vector> v;
    v.reserve(batch.samples.size());
    for (const auto& s : batch.samples) v.push_back(s.a);
    return v;
}

// ---------- criteria ----------

struct Sizes {
    std::int64_t m_ecf, m_energy, m_cov, m_sphere;
};

CriterionResult c1_flat_cf_mc(const Sizes& sz, std::uint64_t seed) {
    CriterionResult r{1, "flat CF closed form vs direct-route ECF", false, ""};
    SimConfig cfg{Space::Flat, 1, 1.0, 1e-3, sz.m_ecf, seed};
    const auto samples = areas(run_batch(cfg, Route::DirectFlat));
    bool ok = true;
    std::string detail;
    for (const double l : {0.5, 1.0, 2.0}) {
        const EcfEstimate e = ecf(samples, l * kDir);
        const double cf = flat_cf({Space::Flat, 1, 1.0, l * kDir});
        const double z = (e.value.real() - cf) / e.stderr_;
        ok = ok && std::fabs(z) <= 3.0 && std::fabs(e.value.imag()) <= 3.0 * e.stderr_;
        detail += fmt("|l|=%.1f z=%+.2f ", l, z);
    }
    r.passed = ok;
    r.detail = detail + fmt("(M=%lld)", (long long)sz.m_ecf);
    return r;
}

CriterionResult c2_flat_two_routes(const Sizes& sz, std::uint64_t seed) {
    CriterionResult r{2, "flat two-route equality in law (energy distance)", false, ""};
    SimConfig cfg{Space::Flat, 1, 1.0, 1e-3, sz.m_energy, seed + 111};
    const auto xs = areas(run_batch(cfg, Route::DirectFlat));
    cfg.seed = seed + 112;
    const auto ys = areas(run_batch(cfg, Route::TimeChange));
    const EnergyDistanceReport rep = energy_distance_test(xs, ys, 0.05, seed + 100);
    r.passed = !rep.rejected;
    r.detail = fmt("E=%.3e p=%.3f (n=%lld per route)", rep.statistic, rep.p_value,
                   (long long)sz.m_energy);
    return r;
}

CriterionResult c3_flat_density(const Sizes&, std::uint64_t) {
    CriterionResult r{3, "flat density normalization and CF inversion match", false, ""};
    const int n = 1;
    const double t = 1.0;
    QuadratureParams qp{1e-9, 8000};
    const double mass = integrate(
        [&](double v) { return 4.0 * M_PI * v * v * flat_density_radial(v, t, n); }, 0.0, 30.0,
        qp);
    bool ok = std::fabs(mass - 1.0) <= 1e-3;
    std::string detail = fmt("mass=%.6f ", mass);
    auto cf = [&](double rho) { return flat_cf({Space::Flat, n, t, {rho, 0, 0}}); };
    for (const double v : {0.25, 0.75, 1.5}) {
        const double mine = flat_density_radial(v, t, n);
        const double ref = radial_cf_inversion(cf, v, 120.0);
        const double rel = std::fabs(mine - ref) / std::fabs(ref);
        ok = ok && rel <= 1e-3;
        detail += fmt("rel(%.2f)=%.1e ", v, rel);
    }
    r.passed = ok;
    r.detail = detail;
    return r;
}

CriterionResult c4_hyp_cf_normalization(const Sizes&, std::uint64_t) {
    CriterionResult r{4, "hyperbolic CF normalization at lambda=0", false, ""};
    bool ok = true;
    std::string detail;
    for (const double t : {0.5, 1.0}) {
        const double v = hyp_cf({Space::Hyperbolic, 1, t, {0, 0, 0}}, {1e-9, 20000});
        ok = ok && std::fabs(v - 1.0) <= 1e-5;
        detail += fmt("t=%.1f cf0=%.7f ", t, v);
    }
    r.passed = ok;
    r.detail = detail;
    return r;
}

CriterionResult c5_hyp_mc_vs_analytic(const Sizes& sz, std::uint64_t seed) {
    CriterionResult r{5, "hyperbolic ECF (time change) vs analytic CF", false, ""};
    SimConfig cfg{Space::Hyperbolic, 1, 1.0, 1e-3, sz.m_ecf, seed + 21};
    const auto samples = areas(run_batch(cfg, Route::TimeChange));
    bool ok = true;
    std::string detail;
    for (const double l : {0.5, 1.0}) {
        const EcfEstimate e = ecf(samples, l * kDir);
        const double cf = hyp_cf({Space::Hyperbolic, 1, 1.0, l * kDir}, {1e-9, 20000});
        const double z = (e.value.real() - cf) / e.stderr_;
        ok = ok && std::fabs(z) <= 3.0;
        detail += fmt("|l|=%.1f z=%+.2f ", l, z);
    }
    r.passed = ok;
    r.detail = detail + fmt("(M=%lld)", (long long)sz.m_ecf);
    return r;
}

CriterionResult c6_hyp_clt(const Sizes& sz, std::uint64_t seed) {
    CriterionResult r{6, "hyperbolic CLT covariance at t=20", false, ""};
    const double t = 20.0;
    SimConfig cfg{Space::Hyperbolic, 1, t, 2e-3, sz.m_cov, seed + 31};
    auto samples = areas(run_batch(cfg, Route::TimeChange));
    const double s = 1.0 / std::sqrt(t);
    for (auto& a : samples) a = s * a;
    Matrix3 target{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const CovarianceReport rep = covariance_test(samples, target, 0.10);
    r.passed = rep.passed;
    r.detail = fmt("diag rel err = %.3f %.3f %.3f max|z|=%.2f", rep.diag_rel_err[0],
                   rep.diag_rel_err[1], rep.diag_rel_err[2],
                   std::max({std::fabs(rep.offdiag_z[0]), std::fabs(rep.offdiag_z[1]),
                             std::fabs(rep.offdiag_z[2])}));
    return r;
}

CriterionResult c7_proj_cross_method(const Sizes&, std::uint64_t) {
    CriterionResult r{7, "projective CF series vs kernel integral", false, ""};
    double worst = 0.0;
    for (const double t : {0.3, 0.5, 1.0})
        for (const double l : {0.5, 1.0, 2.0}) {
            const CharFnQuery q{Space::Projective, 1, t, l * kDir};
            worst = std::max(worst, std::fabs(proj_cf_series(q) - proj_cf_integral(q, {1e-11, 8000})));
        }
    r.passed = worst <= 1e-6;
    r.detail = fmt("max |series-integral| = %.2e over 3x3 (t,|lambda|) grid", worst);
    return r;
}

CriterionResult c8_partial_fractions(const Sizes&, std::uint64_t seed) {
    CriterionResult r{8, "partial-fraction reconstruction and sum rule", false, ""};
    GaussianStream mu_stream(seed, 0xC0FFEE);
    // both sides of the identity are evaluated in extended precision: the
    // summands cancel by ~8 digits at (n, j) = (3, 5), which would otherwise
    // drown the 1e-10 contract in evaluation rounding
    double worst_rec = 0.0, worst_sum = 0.0;
    for (const int n : {1, 2, 3}) {
        for (const int j : {0, 1, 2, 5}) {
            const PartialFractionTable pf = partial_fraction_coeffs(n, j);
            for (int trial = 0; trial < 20; ++trial) {
                const long double mu = 0.1L + 11.9L * (long double)mu_stream.next_uniform();
                long double lhs = (2.0L * j + 2.0L * n + mu + 1.0L) * mu * (mu + 2.0L);
                for (int i = 2; i <= 2 * n; ++i) lhs *= (j + mu + i);
                long double den = 4.0L;
                for (int i = 0; i <= 2 * n + 1; ++i) den *= (j + mu / 2.0L + i);
                lhs /= den;
                long double rhs = std::pow(2.0L, 2 * n);
                for (int k = 0; k <= 2 * n + 1; ++k)
                    rhs += (long double)pf.a[k] / (mu + 2.0L * j + 2.0L * k);
                worst_rec = std::max(worst_rec, double(std::fabs(lhs - rhs) / std::fabs(lhs)));
            }
        }
        const PartialFractionTable pf0 = partial_fraction_coeffs(n, 0);
        long double s = std::pow(2.0L, 2 * n);
        for (int k = 1; k <= 2 * n + 1; ++k) s += (long double)pf0.a[k] / (2.0L * k);
        worst_sum = std::max(worst_sum, double(std::fabs(s - 1.0L)) + std::fabs(pf0.a[0]));
    }
    r.passed = worst_rec <= 1e-10 && worst_sum <= 1e-10;
    r.detail = fmt("max rel reconstruction err = %.2e, max sum-rule err = %.2e", worst_rec,
                   worst_sum);
    return r;
}

CriterionResult c9_proj_clt(const Sizes& sz, std::uint64_t seed) {
    CriterionResult r{9, "projective CLT: covariance and rescaled CF limit", false, ""};
    const int n = 1;
    const double t = 10.0;
    SimConfig cfg{Space::Projective, n, t, 2e-3, sz.m_cov, seed + 41};
    auto samples = areas(run_batch(cfg, Route::TimeChange));
    const double s = 1.0 / std::sqrt(t);
    for (auto& a : samples) a = s * a;
    const double d = 2.0 * n;
    Matrix3 target{{{d, 0, 0}, {0, d, 0}, {0, 0, d}}};
    const CovarianceReport rep = covariance_test(samples, target, 0.10);
    bool ok = rep.passed;
    std::string detail = fmt("cov diag rel = %.3f %.3f %.3f; ", rep.diag_rel_err[0],
                             rep.diag_rel_err[1], rep.diag_rel_err[2]);
    const double t_cf = 50.0;
    double worst = 0.0;
    for (const double l : {0.2, 0.3, 0.4}) {
        const CharFnQuery q{Space::Projective, n, t_cf, (l / std::sqrt(t_cf)) * kDir};
        worst = std::max(worst, std::fabs(proj_cf_series(q) - std::exp(-n * l * l)));
    }
    ok = ok && worst <= 1e-3;
    r.passed = ok;
    r.detail = detail + fmt("max |CF(l/sqrt t) - gaussian| = %.2e at t=50", worst);
    return r;
}

CriterionResult c10_circular_kernel(const Sizes&, std::uint64_t) {
    CriterionResult r{10, "circular Jacobi kernel mass and positivity", false, ""};
    bool ok = true;
    double worst_mass = 0.0;
    for (const int n : {1, 2})
        for (const double mu : {0.0, 1.0})
            for (const double t : {0.1, 1.0}) {
                const CircularJacobiKernel kernel(2.0 * n - 1.0, mu + 1.0, t);
                for (int i = 1; i < 1000; ++i) {
                    const double rr = i * (M_PI / 2.0) / 1000.0;
                    if (kernel(rr) < 0.0) ok = false; // negative beyond -1e-12 throws
                }
                const double mass = integrate([&](double rr) { return kernel(rr); }, 1e-12,
                                              M_PI / 2.0 - 1e-12, {1e-10, 8000});
                worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
            }
    ok = ok && worst_mass <= 1e-6;
    r.passed = ok;
    r.detail = fmt("max |mass-1| = %.2e over (n,mu,t) in {1,2}x{0,1}x{0.1,1}", worst_mass);
    return r;
}

CriterionResult c11_sphere_lift(const Sizes& sz, std::uint64_t seed) {
    CriterionResult r{11, "sphere lift verticality and fiber/area consistency", false, ""};
    double max_resid = 0.0;
    double rms[2] = {0, 0};
    const double dts[2] = {2e-3, 1e-3};
    for (int k = 0; k < 2; ++k) {
        SimConfig cfg{Space::Projective, 1, 0.5, dts[k], sz.m_sphere, seed + 51};
        std::vector<double> sq(cfg.n_paths, 0.0);
        std::vector<double> resid(cfg.n_paths, 0.0);
        parallel_for_blocks(std::size_t(cfg.n_paths), 16, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) {
                const AmbientResult res = simulate_ambient_sphere(cfg, p);
                const Su2Vector gap = res.sample.fiber_log + res.sample.a;
                sq[p] = gap.norm_sq();
                resid[p] = res.max_verticality_residual;
            }
        });
        double acc = 0.0;
        for (std::size_t p = 0; p < sq.size(); ++p) {
            acc += sq[p];
            max_resid = std::max(max_resid, resid[p]);
        }
        rms[k] = std::sqrt(acc / double(sq.size()));
    }
    const double ratio = rms[0] / rms[1];
    r.passed = max_resid <= 1e-10 && ratio >= 1.2 && ratio <= 3.0;
    r.detail = fmt("max verticality = %.1e, RMS(dt)/RMS(dt/2) = %.2f", max_resid, ratio);
    return r;
}

CriterionResult c12_symbolic_operator(const Sizes&, std::uint64_t seed) {
    CriterionResult r{12, "symbolic sinh-operator and Q_2m vs FD oracles", false, ""};
    GaussianStream pts(seed, 0xFD0);
    double worst_op = 0.0;
    for (const int n : {1, 2}) {
        const auto terms = sinh_op_apply({SinhOpTerm{1, 0, 0, 0, 0}}, 2 * n);
        for (int trial = 0; trial < 20; ++trial) {
            const double t = 0.4 + 1.2 * pts.next_uniform();
            const double x = 0.8 + 1.4 * pts.next_uniform();
            const double mine = sinh_op_eval(terms, t, x);
            const double ref = sinh_op_fd_oracle(2 * n, t, x);
            worst_op = std::max(worst_op, std::fabs(mine - ref) / std::fabs(ref));
        }
    }
    double worst_q = 0.0;
    for (int m = 1; m <= 4; ++m)
        for (int trial = 0; trial < 6; ++trial) {
            // keep |v|/sqrt(t) below the first Q_8 zero: relative comparison stays posed
            const double t = 0.7 + 0.7 * pts.next_uniform();
            const double rho = (0.3 + 0.6 * pts.next_uniform()) * std::sqrt(t);
            Su2Vector v{pts.next(), pts.next(), pts.next()};
            v = (rho / v.norm()) * v;
            const double mine = q2m_poly(m, v, t);
            const double ref = q2m_fd_oracle(m, rho, t);
            worst_q = std::max(worst_q, std::fabs(mine - ref) / std::fabs(ref));
        }
    r.passed = worst_op <= 1e-6 && worst_q <= 1e-6;
    r.detail = fmt("max rel: operator %.2e (n=1,2), Q_2m %.2e (m<=4)", worst_op, worst_q);
    return r;
}

CriterionResult c13_determinism(const Sizes&, std::uint64_t seed) {
    CriterionResult r{13, "bit-identical simulation output across thread counts", false, ""};
    SimConfig cfg{Space::Hyperbolic, 1, 0.5, 1e-3, 2000, seed + 61};
    set_worker_override(1);
    const std::string csv1 = samples_csv(run_batch(cfg, Route::TimeChange).samples, cfg.t_final);
    set_worker_override(7);
    const std::string csv7 = samples_csv(run_batch(cfg, Route::TimeChange).samples, cfg.t_final);
    set_worker_override(0);
    const std::string csv_again =
        samples_csv(run_batch(cfg, Route::TimeChange).samples, cfg.t_final);
    r.passed = (csv1 == csv7) && (csv1 == csv_again);
    r.detail = fmt("%zu-byte CSV identical for 1/7/default workers: %s", csv1.size(),
                   r.passed ? "yes" : "NO");
    return r;
}

} // namespace

AcceptanceReport run_acceptance(Suite suite, std::uint64_t seed) {
    const Sizes sz = suite == Suite::Full ? Sizes{200000, 10000, 20000, 2000}
                                          : Sizes{40000, 4000, 8000, 800};
    using Criterion = CriterionResult (*)(const Sizes&, std::uint64_t);
    struct Entry {
        int id;
        const char* name;
        Criterion fn;
    };
    const Entry criteria[] = {
        {1, "flat CF closed form vs direct-route ECF", c1_flat_cf_mc},
        {2, "flat two-route equality in law (energy distance)", c2_flat_two_routes},
        {3, "flat density normalization and CF inversion match", c3_flat_density},
        {4, "hyperbolic CF normalization at lambda=0", c4_hyp_cf_normalization},
        {5, "hyperbolic ECF (time change) vs analytic CF", c5_hyp_mc_vs_analytic},
        {6, "hyperbolic CLT covariance at t=20", c6_hyp_clt},
        {7, "projective CF series vs kernel integral", c7_proj_cross_method},
        {8, "partial-fraction reconstruction and sum rule", c8_partial_fractions},
        {9, "projective CLT: covariance and rescaled CF limit", c9_proj_clt},
        {10, "circular Jacobi kernel mass and positivity", c10_circular_kernel},
        {11, "sphere lift verticality and fiber/area consistency", c11_sphere_lift},
        {12, "symbolic sinh-operator and Q_2m vs FD oracles", c12_symbolic_operator},
        {13, "bit-identical simulation output across thread counts", c13_determinism},
    };
    AcceptanceReport report;
    report.suite = suite;
    report.seed = seed;
    for (const Entry& entry : criteria) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult res;
        try {
            res = entry.fn(sz, seed);
        } catch (const std::exception& e) {
            res.passed = false;
            res.detail = std::string("exception: ") + e.what();
        }
        res.id = entry.id;
        res.name = entry.name;
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.criteria.push_back(res);
    }
    report.all_passed = true;
    for (const auto& c : report.criteria) report.all_passed = report.all_passed && c.passed;
    return report;
}

std::string AcceptanceReport::to_json() const {
    std::string s = "{\"suite\":\"";
    s += (suite == Suite::Full ? "full" : "quick");
    s += "\",\"seed\":" + std::to_string(seed) + ",\"criteria\":[";
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        if (i) s += ",";
        // wall times stay out of the report: a seeded rerun must be byte-identical
        s += "{\"id\":" + std::to_string(c.id) + ",\"name\":\"" + c.name + "\",\"pass\":" +
             (c.passed ? "true" : "false") + ",\"detail\":\"" + c.detail + "\"}";
    }
    s += std::string("],\"all_passed\":") + (all_passed ? "true" : "false") + "}";
    return s;
}

} // namespace qsa
