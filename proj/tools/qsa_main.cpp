// qsa: quaternionic stochastic area toolkit.
//
// Subcommands:
//   simulate  Monte Carlo area samples (CSV + JSON run manifest)
//   charfn    closed-form characteristic function values
//   density   closed-form density values on requested radii
//   verify    acceptance battery (one pass/fail line per criterion)
//
// Exit codes: 0 success, 1 verify failures, 2 invalid flags, 3 evaluation error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsa/analytic.hpp"
#include "qsa/errors.hpp"
#include "qsa/params.hpp"
#include "qsa/sde.hpp"
#include "qsa/verify.hpp"

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
    return buf;
}

qsa::Space parse_space(const std::string& s) {
    if (s == "flat") return qsa::Space::Flat;
    if (s == "hyperbolic") return qsa::Space::Hyperbolic;
    if (s == "projective") return qsa::Space::Projective;
    throw CLI::ValidationError("--space must be flat|hyperbolic|projective");
}

qsa::Su2Vector parse_lambda(const std::string& s) {
    qsa::Su2Vector v;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.vI, &v.vJ, &v.vK) != 3)
        throw CLI::ValidationError("--lambda expects three comma-separated reals");
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + p.string());
}

/// Manifest: command + full parameter set + content hash of the parameters.
/// Keys are emitted sorted; parsing and re-emitting is byte-stable.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const json& params, std::uint64_t seed) {
    json m;
    m["command"] = command;
    m["parameters"] = params;
    m["seed"] = seed;
    m["library_version"] = qsa::kVersion;
    m["timestamp"] = iso_now();
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(qsa::fnv1a64(params.dump())));
    m["param_hash"] = hash;
    write_file(dir / "manifest.json", m.dump(2) + "\n");
}

struct SimArgs {
    std::string space = "flat", route = "timechange", out = ".";
    int n = 1;
    double t = 1.0, dt = 1e-3;
    std::int64_t paths = 1000;
    std::uint64_t seed = 0;
};

int cmd_simulate(const SimArgs& a) {
    const qsa::Space space = parse_space(a.space);
    qsa::Route route;
    if (a.route == "timechange") {
        route = qsa::Route::TimeChange;
    } else if (a.route == "direct") {
        route = qsa::Route::DirectFlat;
        if (space != qsa::Space::Flat) {
            std::fprintf(stderr, "error: --route direct requires --space flat\n");
            return 2;
        }
    } else if (a.route == "ambient") {
        route = qsa::Route::AmbientSphere;
        if (space != qsa::Space::Projective) {
            std::fprintf(stderr, "error: --route ambient requires --space projective\n");
            return 2;
        }
    } else {
        std::fprintf(stderr, "error: --route must be timechange|direct|ambient\n");
        return 2;
    }
    qsa::SimConfig cfg;
    cfg.space = space;
    cfg.n = a.n;
    cfg.t_final = a.t;
    cfg.dt = a.dt;
    cfg.n_paths = a.paths;
    cfg.seed = a.seed;
    try {
        const qsa::BatchResult batch = qsa::run_batch(cfg, route);
        std::filesystem::create_directories(a.out);
        write_file(std::filesystem::path(a.out) / "samples.csv",
                   qsa::samples_csv(batch.samples, cfg.t_final));
        json params;
        params["space"] = a.space;
        params["route"] = a.route;
        params["n"] = a.n;
        params["t"] = a.t;
        params["dt"] = a.dt;
        params["paths"] = a.paths;
        params["r0"] = cfg.r0;
        params["discarded"] = batch.discarded;
        write_manifest(a.out, "simulate", params, a.seed);
        if (batch.discarded > 0)
            std::fprintf(stderr, "note: %lld ambient paths discarded at the cut locus\n",
                         static_cast<long long>(batch.discarded));
    } catch (const qsa::Error& e) {
        std::fprintf(stderr, "simulate failed: %s\n", e.what());
        return 3;
    }
    return 0;
}

struct CharFnArgs {
    std::string space = "flat", method = "closed", out = ".";
    int n = 1;
    double t = 1.0;
    std::vector<std::string> lambdas;
};

int cmd_charfn(const CharFnArgs& a) {
    const qsa::Space space = parse_space(a.space);
    const bool ok_pair = (space == qsa::Space::Flat && a.method == "closed") ||
                         (space == qsa::Space::Hyperbolic && a.method == "integral") ||
                         (space == qsa::Space::Projective &&
                          (a.method == "series" || a.method == "integral"));
    if (!ok_pair) {
        std::fprintf(stderr,
                     "error: unsupported method/space pair (flat: closed; hyperbolic: integral; "
                     "projective: series|integral)\n");
        return 2;
    }
    if (a.lambdas.empty()) {
        std::fprintf(stderr, "error: at least one --lambda is required\n");
        return 2;
    }
    std::string csv = "lambdaI,lambdaJ,lambdaK,cf_value,method\n";
    try {
        for (const std::string& ls : a.lambdas) {
            const qsa::Su2Vector lambda = parse_lambda(ls);
            const qsa::CharFnQuery q{space, a.n, a.t, lambda};
            double value = 0.0;
            if (space == qsa::Space::Flat)
                value = qsa::flat_cf(q);
            else if (space == qsa::Space::Hyperbolic)
                value = qsa::hyp_cf(q);
            else
                value = a.method == "series" ? qsa::proj_cf_series(q) : qsa::proj_cf_integral(q);
            csv += fmt17(lambda.vI) + "," + fmt17(lambda.vJ) + "," + fmt17(lambda.vK) + "," +
                   fmt17(value) + "," + a.method + "\n";
        }
        std::filesystem::create_directories(a.out);
        write_file(std::filesystem::path(a.out) / "charfn.csv", csv);
        json params;
        params["space"] = a.space;
        params["method"] = a.method;
        params["n"] = a.n;
        params["t"] = a.t;
        params["lambda"] = a.lambdas;
        write_manifest(a.out, "charfn", params, 0);
    } catch (const qsa::Error& e) {
        std::fprintf(stderr, "charfn failed: %s\n", e.what());
        return 3;
    }
    return 0;
}

struct DensityArgs {
    std::string space = "flat", out = ".";
    int n = 1;
    double t = 1.0;
    std::string radii;
};

int cmd_density(const DensityArgs& a) {
    const qsa::Space space = parse_space(a.space);
    const std::vector<double> radii = parse_list(a.radii);
    if (radii.empty()) {
        std::fprintf(stderr, "error: --radii expects a comma-separated list\n");
        return 2;
    }
    std::string csv = "v_norm,density\n";
    double current = 0.0;
    try {
        if (space == qsa::Space::Hyperbolic) {
            const qsa::HypDensityEvaluator eval(a.n, a.t);
            for (const double r : radii) {
                current = r;
                csv += fmt17(r) + "," + fmt17(eval({r, 0.0, 0.0})) + "\n";
            }
        } else {
            for (const double r : radii) {
                current = r;
                const double d = space == qsa::Space::Flat
                                     ? qsa::flat_density_radial(r, a.t, a.n)
                                     : qsa::proj_density_radial(r, a.t, a.n);
                csv += fmt17(r) + "," + fmt17(d) + "\n";
            }
        }
        std::filesystem::create_directories(a.out);
        write_file(std::filesystem::path(a.out) / "density.csv", csv);
        json params;
        params["space"] = a.space;
        params["n"] = a.n;
        params["t"] = a.t;
        params["radii"] = a.radii;
        write_manifest(a.out, "density", params, 0);
    } catch (const qsa::Error& e) {
        std::fprintf(stderr, "density failed at radius %.17g: %s\n", current, e.what());
        return 3;
    }
    return 0;
}

struct VerifyArgs {
    std::string suite = "quick", out;
    std::uint64_t seed = 0;
};

int cmd_verify(const VerifyArgs& a) {
    if (a.suite != "quick" && a.suite != "full") {
        std::fprintf(stderr, "error: --suite must be quick|full\n");
        return 2;
    }
    const qsa::AcceptanceReport report =
        qsa::run_acceptance(a.suite == "full" ? qsa::Suite::Full : qsa::Suite::Quick, a.seed);
    for (const auto& c : report.criteria)
        std::printf("[%s] %2d %-55s %s (%.1fs)\n", c.passed ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), c.detail.c_str(), c.seconds);
    if (!a.out.empty()) {
        std::filesystem::create_directories(a.out);
        write_file(std::filesystem::path(a.out) / "verify_report.json", report.to_json() + "\n");
        json params;
        params["suite"] = a.suite;
        write_manifest(a.out, "verify", params, a.seed);
    }
    if (!report.all_passed) {
        std::string failed;
        for (const auto& c : report.criteria)
            if (!c.passed) failed += (failed.empty() ? "" : ", ") + std::to_string(c.id);
        std::fprintf(stderr, "failed criteria: %s\n", failed.c_str());
        return 1;
    }
    std::printf("all %zu criteria passed\n", report.criteria.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternionic stochastic areas: simulation and closed forms"};
    app.require_subcommand(1);

    SimArgs sim;
    auto* s = app.add_subcommand("simulate", "Monte Carlo area samples");
    s->add_option("--space", sim.space, "flat|hyperbolic|projective")->required();
    s->add_option("--n", sim.n, "quaternionic dimension")->check(CLI::PositiveNumber);
    s->add_option("--t", sim.t, "final time")->check(CLI::PositiveNumber);
    s->add_option("--dt", sim.dt, "time step")->check(CLI::PositiveNumber);
    s->add_option("--paths", sim.paths, "number of paths")->check(CLI::PositiveNumber);
    s->add_option("--seed", sim.seed, "RNG seed");
    s->add_option("--route", sim.route, "timechange|direct|ambient");
    s->add_option("--out", sim.out, "output directory")->required();

    CharFnArgs cf;
    auto* c = app.add_subcommand("charfn", "characteristic function values");
    c->add_option("--space", cf.space, "flat|hyperbolic|projective")->required();
    c->add_option("--n", cf.n, "quaternionic dimension")->check(CLI::PositiveNumber);
    c->add_option("--t", cf.t, "time")->check(CLI::PositiveNumber);
    c->add_option("--lambda", cf.lambdas, "frequency vector \"a,b,c\" (repeatable)")->required();
    c->add_option("--method", cf.method, "closed|series|integral");
    c->add_option("--out", cf.out, "output directory")->required();

    DensityArgs den;
    auto* d = app.add_subcommand("density", "density values on radii");
    d->add_option("--space", den.space, "flat|hyperbolic|projective")->required();
    d->add_option("--n", den.n, "quaternionic dimension")->check(CLI::PositiveNumber);
    d->add_option("--t", den.t, "time")->check(CLI::PositiveNumber);
    d->add_option("--radii", den.radii, "comma-separated |v| values")->required();
    d->add_option("--out", den.out, "output directory")->required();

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "acceptance criteria battery");
    v->add_option("--suite", ver.suite, "quick|full");
    v->add_option("--seed", ver.seed, "RNG seed");
    v->add_option("--out", ver.out, "optional report directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // help/version exit 0, flag errors exit 2
    }

    try {
        if (s->parsed()) return cmd_simulate(sim);
        if (c->parsed()) return cmd_charfn(cf);
        if (d->parsed()) return cmd_density(den);
        if (v->parsed()) return cmd_verify(ver);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
