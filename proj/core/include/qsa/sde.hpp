#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsa/analytic.hpp"
#include "qsa/quaternion.hpp"

namespace qsa {

enum class Route { TimeChange, DirectFlat, AmbientSphere };

struct SimConfig {
    Space space = Space::Flat;
    int n = 1;
    double t_final = 1.0;
    double dt = 1e-3;
    std::int64_t n_paths = 1;
    std::uint64_t seed = 0;
    double r0 = 1e-4; // entrance boundary stand-off; exactly 0 is not steppable

    std::int64_t steps() const;
    double dt_eff() const;
};

/// Discretized radial diffusion with its additive clock \int_0^t f(r(s)) ds,
/// f = r^2/4 (flat), tanh^2 (hyperbolic), tan^2 (projective).
struct RadialPath {
    std::vector<double> times;
    std::vector<double> r;
    std::vector<double> clock;
};

struct AreaSample {
    Su2Vector a;          // area value at t_final
    Su2Element theta;     // fiber endpoint (identity for flat routes)
    Su2Vector fiber_log;  // accumulated stepwise su2_log of fiber ratios
    Route route = Route::TimeChange;
    double r_final = 0.0;
    double clock = 0.0;
};

/// Point of S^{4n+3} stored as n+1 unit-norm-constrained quaternions.
struct AmbientState {
    std::vector<Quaternion> q;
};

struct AmbientResult {
    AreaSample sample;
    double max_verticality_residual = 0.0; // max |<P(M)dB, S M>| over steps and S
    double max_norm_drift = 0.0;           // max ||X + dX| - 1| before renormalization
    std::vector<AmbientState> path;        // filled only when record_path is set
};

/// Split-step Euler scheme for the radial diffusions: the singular 1/r (and,
/// on the projective side, 1/(pi/2 - r)) drift components advance by their
/// exact sub-flow r <- sqrt(r^2 + c dt); the smooth remainder and the noise
/// are a plain Euler-Maruyama step. Reflecting guards at 1e-6 (and pi/2-1e-6).
/// One step preserves the pathwise bound dr >= (2n - 1/2) dt + dW exactly on
/// the hyperbolic side.
struct RadialScheme {
    Space space;
    int n;
    double dt;

    /// Clock integrand f: r^2/4 (flat), tanh^2 r (hyperbolic), tan^2 r (projective).
    double clock_f(double r) const;
    /// f^{1/2}: the fiber coefficient.
    double fiber_gain(double r) const;
    /// Advance one step under the Brownian increment dW (pass 0 for the drift ODE).
    double step(double r, double dW, std::uint64_t path_index = 0) const;
};

RadialPath simulate_radial(const SimConfig& cfg, std::uint64_t path_index = 0);

/// Area by the time-change representation: the radial clock drives an
/// independent 3D Brownian motion; the SU(2) fiber is advanced by the
/// stochastic exponential with midpoint (Stratonovich) coefficient evaluation.
AreaSample simulate_area_timechange(const SimConfig& cfg, std::uint64_t path_index = 0);

/// Flat-space area accumulated directly from a 4n-dimensional Brownian path
/// (Ito left-endpoint sum; Ito and Stratonovich coincide for this integrand).
AreaSample simulate_area_direct_flat(const SimConfig& cfg, std::uint64_t path_index = 0);

/// Horizontal Brownian motion on S^{4n+3} by the Stratonovich projector SDE
/// (Heun midpoint scheme), with the area accumulated from the inhomogeneous
/// coordinates and the fiber read off q_{n+1}. Throws ChartFailure when a path
/// approaches the cut locus (|q_{n+1}| < 1e-6).
AmbientResult simulate_ambient_sphere(const SimConfig& cfg, std::uint64_t path_index = 0,
                                      bool record_path = false);

/// Ordered product of su2_exp over the increments (geometric Euler for
/// dX = X o dM).
Su2Element stochastic_exponential(const std::vector<Su2Vector>& increments);

struct BatchResult {
    std::vector<AreaSample> samples;
    std::int64_t discarded = 0; // ambient paths dropped at the cut locus
};

/// Runs n_paths independent paths in parallel; per-path Philox streams make
/// the result bit-identical for any worker count.
BatchResult run_batch(const SimConfig& cfg, Route route);

/// CSV export: header path_id,time,r,clock,aI,aJ,aK; one row per path,
/// 17-significant-digit formatting.
std::string samples_csv(const std::vector<AreaSample>& samples, double t_final);

/// FNV-1a 64-bit over a canonical parameter string; used by run manifests.
std::uint64_t fnv1a64(const std::string& s);

} // namespace qsa
