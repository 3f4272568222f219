#include "qsa/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>

#include "qsa/errors.hpp"
#include "qsa/parallel.hpp"
#include "qsa/rng.hpp"

namespace qsa {

namespace {

constexpr double kGuard = 1e-6;
constexpr double kHalfPi = 1.5707963267948966192;

// coth r - 1/r and cot r - 1/r, stable through r -> 0.
double coth_minus_inv(double r) {
    if (r < 1e-3) return r / 3.0 - r * r * r / 45.0;
    return 1.0 / std::tanh(r) - 1.0 / r;
}
double cot_minus_inv(double r) {
    if (r < 1e-3) return -r / 3.0 - r * r * r / 45.0;
    return 1.0 / std::tan(r) - 1.0 / r;
}

void validate(const SimConfig& cfg) {
    if (cfg.n < 1) throw DomainError("SimConfig requires n >= 1");
    if (!(cfg.dt > 0.0) || !(cfg.t_final > 0.0) || cfg.dt > cfg.t_final)
        throw DomainError("SimConfig requires 0 < dt <= t_final");
    if (cfg.n_paths < 1) throw DomainError("SimConfig requires n_paths >= 1");
    if (cfg.r0 < 0.0) throw DomainError("SimConfig requires r0 >= 0");
}

} // namespace


double RadialScheme::clock_f(double r) const {
    switch (space) {
        case Space::Flat: return 0.25 * r * r;
        case Space::Hyperbolic: { const double th = std::tanh(r); return th * th; }
        case Space::Projective: { const double tn = std::tan(r); return tn * tn; }
    }
    return 0.0;
}

double RadialScheme::fiber_gain(double r) const {
    switch (space) {
        case Space::Flat: return 0.5 * r;
        case Space::Hyperbolic: return std::tanh(r);
        case Space::Projective: return std::tan(r);
    }
    return 0.0;
}

double RadialScheme::step(double r, double dW, std::uint64_t path_index) const {
    // exact sub-flow of the (4n-1)/(2r) drift component
    double rs = std::sqrt(r * r + (4.0 * n - 1.0) * dt);
    double rem = 0.0;
    switch (space) {
        case Space::Flat:
            break;
        case Space::Hyperbolic:
            rem = 0.5 * (4.0 * n - 1.0) * coth_minus_inv(rs) + 1.5 * std::tanh(rs);
            break;
        case Space::Projective: {
            // exact sub-flow of the (3/2)/(pi/2 - r) component
            double w = kHalfPi - rs;
            if (w < 0.0) w = 0.0;
            w = std::sqrt(w * w + 3.0 * dt);
            rs = kHalfPi - w;
            if (rs < kGuard) rs = kGuard;
            rem = 0.5 * (4.0 * n - 1.0) * cot_minus_inv(rs) - 1.5 * cot_minus_inv(w);
            break;
        }
    }
    double next = rs + rem * dt + dW;
    if (next < kGuard) next = 2.0 * kGuard - next;
    if (space == Space::Projective) {
        const double hi = kHalfPi - kGuard;
        if (next > hi) next = 2.0 * hi - next;
    }
    if (!std::isfinite(next) || next < 0.0 ||
        (space == Space::Projective && next > kHalfPi)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "simulate_radial: path %llu left its range",
                      static_cast<unsigned long long>(path_index));
        throw BlowUp(buf);
    }
    return next;
}

std::int64_t SimConfig::steps() const {
    const auto k = static_cast<std::int64_t>(std::llround(t_final / dt));
    return std::max<std::int64_t>(1, k);
}

double SimConfig::dt_eff() const { return t_final / double(steps()); }

RadialPath simulate_radial(const SimConfig& cfg, std::uint64_t path_index) {
    validate(cfg);
    const std::int64_t n_steps = cfg.steps();
    const double dt = cfg.dt_eff();
    const double sqdt = std::sqrt(dt);
    RadialScheme st{cfg.space, cfg.n, dt};
    GaussianStream g(cfg.seed, path_index);

    RadialPath path;
    path.times.reserve(n_steps + 1);
    path.r.reserve(n_steps + 1);
    path.clock.reserve(n_steps + 1);
    double r = std::max(cfg.r0, kGuard);
    double clock = 0.0;
    path.times.push_back(0.0);
    path.r.push_back(r);
    path.clock.push_back(0.0);
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const double f_old = st.clock_f(r);
        r = st.step(r, sqdt * g.next(), path_index);
        clock += 0.5 * dt * (f_old + st.clock_f(r));
        path.times.push_back((k + 1) * dt);
        path.r.push_back(r);
        path.clock.push_back(clock);
    }
    return path;
}

AreaSample simulate_area_timechange(const SimConfig& cfg, std::uint64_t path_index) {
    validate(cfg);
    const std::int64_t n_steps = cfg.steps();
    const double dt = cfg.dt_eff();
    const double sqdt = std::sqrt(dt);
    RadialScheme st{cfg.space, cfg.n, dt};
    GaussianStream g(cfg.seed, path_index);

    double r = std::max(cfg.r0, kGuard);
    double clock = 0.0;
    Su2Vector a{};
    Su2Vector fiber_log{};
    Su2Element theta;
    const double fiber_sign = (cfg.space == Space::Projective) ? -1.0 : 1.0;
    const bool fiber_on = (cfg.space != Space::Flat);
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const double r_old = r;
        const double dW = sqdt * g.next();
        const Su2Vector dgamma{sqdt * g.next(), sqdt * g.next(), sqdt * g.next()};
        r = st.step(r_old, dW, path_index);
        clock += 0.5 * dt * (st.clock_f(r_old) + st.clock_f(r));
        const double gain = st.fiber_gain(0.5 * (r_old + r)); // Stratonovich midpoint
        const Su2Vector da = gain * dgamma;
        a = a + da;
        if (fiber_on) {
            theta = theta * su2_exp(fiber_sign * da);
            fiber_log = fiber_log + fiber_sign * da;
        }
    }
    AreaSample s;
    s.a = a;
    s.theta = theta;
    s.fiber_log = fiber_log;
    s.route = Route::TimeChange;
    s.r_final = r;
    s.clock = clock;
    return s;
}

AreaSample simulate_area_direct_flat(const SimConfig& cfg, std::uint64_t path_index) {
    validate(cfg);
    if (cfg.space != Space::Flat)
        throw DomainError("simulate_area_direct_flat requires the flat space");
    const std::int64_t n_steps = cfg.steps();
    const double dt = cfg.dt_eff();
    const double sqdt = std::sqrt(dt);
    GaussianStream g(cfg.seed, path_index);

    std::vector<Quaternion> B(cfg.n);
    Su2Vector a{};
    double clock = 0.0;
    double norm2 = 0.0;
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const double norm2_old = norm2;
        norm2 = 0.0;
        for (int i = 0; i < cfg.n; ++i) {
            const Quaternion dB{sqdt * g.next(), sqdt * g.next(), sqdt * g.next(),
                                sqdt * g.next()};
            a = a + 0.5 * imag(dB * B[i].conj()); // left endpoint
            B[i] = B[i] + dB;
            norm2 += B[i].norm_sq();
        }
        clock += 0.5 * dt * 0.25 * (norm2_old + norm2);
    }
    AreaSample s;
    s.a = a;
    s.route = Route::DirectFlat;
    s.r_final = std::sqrt(norm2);
    s.clock = clock;
    return s;
}

namespace {

double dot4(const Quaternion& a, const Quaternion& b) {
    return a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}

struct Frame {
    // orthonormal removed directions: X, IX, JX, KX (left multiplication)
    std::vector<Quaternion> dirs[4];
};

void build_frame(const std::vector<Quaternion>& X, Frame& f) {
    const std::size_t m = X.size();
    for (auto& d : f.dirs) d.resize(m);
    static const Quaternion I{0, 1, 0, 0}, J{0, 0, 1, 0}, K{0, 0, 0, 1};
    for (std::size_t i = 0; i < m; ++i) {
        f.dirs[0][i] = X[i];
        f.dirs[1][i] = I * X[i];
        f.dirs[2][i] = J * X[i];
        f.dirs[3][i] = K * X[i];
    }
}

void project(const Frame& f, std::vector<Quaternion>& v) {
    for (const auto& dir : f.dirs) {
        double dp = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dp += dot4(v[i], dir[i]);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] - dp * dir[i];
    }
}

double norm(const std::vector<Quaternion>& v) {
    double s = 0.0;
    for (const auto& q : v) s += q.norm_sq();
    return std::sqrt(s);
}

void normalize(std::vector<Quaternion>& v) {
    const double s = 1.0 / norm(v);
    for (auto& q : v) q = s * q;
}

} // namespace

AmbientResult simulate_ambient_sphere(const SimConfig& cfg, std::uint64_t path_index,
                                      bool record_path) {
    validate(cfg);
    if (cfg.space != Space::Projective)
        throw DomainError("simulate_ambient_sphere requires the projective space");
    const std::int64_t n_steps = cfg.steps();
    const double dt = cfg.dt_eff();
    const double sqdt = std::sqrt(dt);
    const int m = cfg.n + 1;
    GaussianStream g(cfg.seed, path_index);

    std::vector<Quaternion> X(m);
    X[m - 1] = Quaternion::identity(); // north pole lift start
    AmbientResult res;
    res.sample.route = Route::AmbientSphere;
    if (record_path) res.path.push_back({X});

    std::vector<Quaternion> dB(m), pred(m), mid(m), dX(m), Xnew(m);
    std::vector<Quaternion> w_old(cfg.n), w_new(cfg.n);
    Frame frame, frame_mid;
    auto coords = [&](const std::vector<Quaternion>& q, std::vector<Quaternion>& w) {
        if (q[m - 1].norm() < 1e-6) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "ambient path %llu passed near the cut locus",
                          static_cast<unsigned long long>(path_index));
            throw ChartFailure(buf);
        }
        const Quaternion inv = q[m - 1].inverse();
        for (int i = 0; i < cfg.n; ++i) w[i] = inv * q[i];
    };
    // midpoint-rule value of the area one-form along one chart chord
    auto panel_area = [&](const std::vector<Quaternion>& wa, const std::vector<Quaternion>& wb) {
        double rho2 = 0.0;
        Su2Vector da{};
        for (int i = 0; i < cfg.n; ++i) {
            const Quaternion wm = 0.5 * (wa[i] + wb[i]);
            rho2 += wm.norm_sq();
            da = da + imag((wb[i] - wa[i]) * wm.conj());
        }
        return (1.0 / (1.0 + rho2)) * da;
    };
    // int zeta along the renormalized ambient chord A -> B, `pieces` panels
    std::vector<Quaternion> sub(m), wa(cfg.n), wb(cfg.n);
    auto chord_area = [&](const std::vector<Quaternion>& A, const std::vector<Quaternion>& B,
                          int pieces) {
        Su2Vector total{};
        wa = w_old;
        for (int p = 1; p <= pieces; ++p) {
            if (p == pieces) {
                wb = w_new;
            } else {
                const double s = double(p) / double(pieces);
                for (int i = 0; i < m; ++i) sub[i] = (1.0 - s) * A[i] + s * B[i];
                normalize(sub);
                coords(sub, wb);
            }
            total = total + panel_area(wa, wb);
            std::swap(wa, wb);
        }
        return total;
    };

    coords(X, w_old);
    double rho2_old = 0.0;
    Su2Vector a{}, fiber_log{};
    Su2Element theta_old; // identity at the start
    double clock = 0.0;

    for (std::int64_t k = 0; k < n_steps; ++k) {
        for (int i = 0; i < m; ++i)
            dB[i] = Quaternion{sqdt * g.next(), sqdt * g.next(), sqdt * g.next(),
                               sqdt * g.next()};
        build_frame(X, frame);
        pred = dB;
        project(frame, pred);
        for (int i = 0; i < m; ++i) pred[i] = X[i] + pred[i];
        normalize(pred);
        for (int i = 0; i < m; ++i) mid[i] = 0.5 * (X[i] + pred[i]);
        normalize(mid);
        build_frame(mid, frame_mid);
        dX = dB;
        project(frame_mid, dX);
        for (int s = 1; s <= 3; ++s) {
            double dp = 0.0;
            for (int i = 0; i < m; ++i) dp += dot4(dX[i], frame_mid.dirs[s][i]);
            res.max_verticality_residual = std::max(res.max_verticality_residual, std::fabs(dp));
        }
        for (int i = 0; i < m; ++i) Xnew[i] = X[i] + dX[i];
        res.max_norm_drift = std::max(res.max_norm_drift, std::fabs(norm(Xnew) - 1.0));
        normalize(Xnew);

        coords(Xnew, w_new);
        // chart quadrature: a single midpoint panel suffices away from the cut
        // locus; near it (|w| large) the integrand varies violently across one
        // chord, so refine until the panel sum stabilizes.
        Su2Vector da = chord_area(X, Xnew, 1);
        double dw2 = 0.0, rho2_a = 0.0, rho2_b = 0.0;
        for (int i = 0; i < cfg.n; ++i) {
            dw2 += (w_new[i] - w_old[i]).norm_sq();
            rho2_a += w_old[i].norm_sq();
            rho2_b += w_new[i].norm_sq();
        }
        if (dw2 > 1e-3 * (1.0 + std::min(rho2_a, rho2_b))) {
            const double tol = std::max(1e-12, 1e-4 * dt);
            for (int pieces = 2; pieces <= 256; pieces *= 2) {
                const Su2Vector refined = chord_area(X, Xnew, pieces);
                const bool converged = (refined - da).norm() <= tol;
                da = refined;
                if (converged) break;
            }
        }
        a = a + da;

        const Su2Element theta_new(Xnew[m - 1]);
        fiber_log = fiber_log + su2_log(theta_old.inverse() * theta_new);
        theta_old = theta_new;

        clock += 0.5 * dt * (rho2_old + rho2_b); // tan r = rho
        rho2_old = rho2_b;
        std::swap(w_old, w_new);
        X.swap(Xnew);
        if (record_path) res.path.push_back({X});
    }
    res.sample.a = a;
    res.sample.theta = theta_old;
    res.sample.fiber_log = fiber_log;
    res.sample.r_final = std::atan(std::sqrt(rho2_old));
    res.sample.clock = clock;
    return res;
}

Su2Element stochastic_exponential(const std::vector<Su2Vector>& increments) {
    Su2Element x;
    for (const Su2Vector& v : increments) x = x * su2_exp(v);
    return x;
}

BatchResult run_batch(const SimConfig& cfg, Route route) {
    validate(cfg);
    std::vector<AreaSample> samples(cfg.n_paths);
    std::vector<char> ok(cfg.n_paths, 0);
    std::mutex err_mutex;
    std::exception_ptr first_error;
    parallel_for_blocks(std::size_t(cfg.n_paths), 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            try {
                switch (route) {
                    case Route::TimeChange:
                        samples[p] = simulate_area_timechange(cfg, p);
                        break;
                    case Route::DirectFlat:
                        samples[p] = simulate_area_direct_flat(cfg, p);
                        break;
                    case Route::AmbientSphere:
                        samples[p] = simulate_ambient_sphere(cfg, p).sample;
                        break;
                }
                ok[p] = 1;
            } catch (const ChartFailure&) {
                ok[p] = 0; // discarded and counted below
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    });
    if (first_error) std::rethrow_exception(first_error);
    BatchResult res;
    res.samples.reserve(cfg.n_paths);
    for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
        if (ok[p])
            res.samples.push_back(samples[p]);
        else
            ++res.discarded;
    }
    return res;
}

std::string samples_csv(const std::vector<AreaSample>& samples, double t_final) {
    std::string out = "path_id,time,r,clock,aI,aJ,aK\n";
    out.reserve(out.size() + samples.size() * 96);
    char row[256];
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const AreaSample& s = samples[i];
        std::snprintf(row, sizeof row, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, t_final,
                      s.r_final, s.clock, s.a.vI, s.a.vJ, s.a.vK);
        out += row;
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace qsa
