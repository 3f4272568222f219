// End-to-end CLI checks: flag validation, output determinism, manifest
// round-trip, and the corrupted-constant hook failing verify with the
// criterion named. Drives the installed binary through std::system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

std::string bin() {
    const char* b = std::getenv("QSA_BIN");
    REQUIRE(b != nullptr);
    return b;
}

fs::path tmp_dir() {
    const char* t = std::getenv("QSA_TMP");
    REQUIRE(t != nullptr);
    fs::create_directories(t);
    return t;
}

int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("route/space mismatch exits 2") {
    const auto out = tmp_dir() / "mismatch";
    CHECK(run(bin() + " simulate --space flat --route ambient --paths 10 --t 0.1 --dt 0.01 --out " +
              out.string() + " >/dev/null 2>&1") == 2);
    CHECK(run(bin() + " simulate --space hyperbolic --route direct --paths 10 --t 0.1 --dt 0.01 --out " +
              out.string() + " >/dev/null 2>&1") == 2);
    CHECK(run(bin() + " charfn --space flat --method series --lambda 1,0,0 --out " + out.string() +
              " >/dev/null 2>&1") == 2);
    CHECK(run(bin() + " charfn --space hyperbolic --method closed --lambda 1,0,0 --out " +
              out.string() + " >/dev/null 2>&1") == 2);
    CHECK(run(bin() + " nonsense >/dev/null 2>&1") == 2);
}

TEST_CASE("simulate is deterministic: identical flags give identical bytes") {
    const auto out1 = tmp_dir() / "det1";
    const auto out2 = tmp_dir() / "det2";
    const std::string flags =
        " simulate --space flat --n 1 --t 1 --dt 0.001 --paths 1000 --seed 7 --route direct --out ";
    REQUIRE(run(bin() + flags + out1.string() + " >/dev/null 2>&1") == 0);
    REQUIRE(run("QSA_THREADS=1 " + bin() + flags + out2.string() + " >/dev/null 2>&1") == 0);
    const std::string csv1 = slurp(out1 / "samples.csv");
    const std::string csv2 = slurp(out2 / "samples.csv");
    REQUIRE(!csv1.empty());
    CHECK(csv1 == csv2);
    // 1000 data rows plus header
    CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 1001);
    CHECK(csv1.rfind("path_id,time,r,clock,aI,aJ,aK\n", 0) == 0);
}

TEST_CASE("charfn emits flat lambda=0 -> 1 and both projective methods agree") {
    const auto out = tmp_dir() / "charfn";
    REQUIRE(run(bin() + " charfn --space flat --n 1 --t 1 --lambda 0,0,0 --method closed --out " +
                out.string() + " >/dev/null 2>&1") == 0);
    const std::string csv = slurp(out / "charfn.csv");
    CHECK(csv.find("0,0,0,1,closed") != std::string::npos);
    const auto s_dir = tmp_dir() / "proj_series";
    const auto i_dir = tmp_dir() / "proj_integral";
    REQUIRE(run(bin() +
                " charfn --space projective --n 1 --t 0.5 --lambda 0.6,0.8,0 --method series --out " +
                s_dir.string() + " >/dev/null 2>&1") == 0);
    REQUIRE(run(bin() +
                " charfn --space projective --n 1 --t 0.5 --lambda 0.6,0.8,0 --method integral --out " +
                i_dir.string() + " >/dev/null 2>&1") == 0);
    auto value_of = [](const std::string& csv_text) {
        const auto pos = csv_text.rfind('\n', csv_text.size() - 2);
        const std::string row = csv_text.substr(pos + 1);
        double a, b, c, v;
        char method[32];
        REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf,%31s", &a, &b, &c, &v, method) == 5);
        return v;
    };
    const double vs = value_of(slurp(s_dir / "charfn.csv"));
    const double vi = value_of(slurp(i_dir / "charfn.csv"));
    CHECK(std::fabs(vs - vi) <= 1e-6);
}

TEST_CASE("density output is nonnegative on requested radii") {
    const auto out = tmp_dir() / "density";
    REQUIRE(run(bin() + " density --space projective --n 1 --t 1 --radii 0,0.5,1.5 --out " +
                out.string() + " >/dev/null 2>&1") == 0);
    std::ifstream f(out / "density.csv");
    std::string line;
    std::getline(f, line);
    CHECK(line == "v_norm,density");
    int rows = 0;
    while (std::getline(f, line)) {
        double v, d;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &v, &d) == 2);
        CHECK(d >= 0.0);
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("manifest round-trips bit-exactly and carries the parameter hash") {
    const auto out = tmp_dir() / "manifest";
    REQUIRE(run(bin() +
                " simulate --space projective --n 1 --t 0.2 --dt 0.01 --paths 50 --seed 3 "
                "--route timechange --out " +
                out.string() + " >/dev/null 2>&1") == 0);
    const std::string raw = slurp(out / "manifest.json");
    const nlohmann::json parsed = nlohmann::json::parse(raw);
    CHECK(parsed.at("command") == "simulate");
    CHECK(parsed.at("library_version") == "0.1.0");
    CHECK(parsed.at("parameters").at("paths") == 50);
    CHECK(parsed.at("param_hash").get<std::string>().size() == 16);
    // parse -> re-emit reproduces the file byte for byte
    CHECK(parsed.dump(2) + "\n" == raw);
}

TEST_CASE("verify names the broken criterion under the corruption hook") {
    const auto out = tmp_dir() / "verify_corrupt";
    const auto err = tmp_dir() / "verify_corrupt.err";
    const int code = run("QSA_CORRUPT=proj_cf_series " + bin() +
                         " verify --suite quick --seed 5 --out " + out.string() + " >/dev/null 2>" +
                         err.string());
    CHECK(code == 1);
    const std::string stderr_text = slurp(err);
    CHECK(stderr_text.find("failed criteria:") != std::string::npos);
    CHECK(stderr_text.find("7") != std::string::npos);
    const std::string report = slurp(out / "verify_report.json");
    CHECK(report.find("\"all_passed\":false") != std::string::npos);
}
