#include "doctest.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "sac/config.hpp"
#include "sac/experiments.hpp"

namespace fs = std::filesystem;
using namespace sac;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "sac");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    static const auto base = fs::temp_directory_path() / ("sac-cli-" + std::to_string(std::random_device{}()));
    const auto dir = base / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> fields;
        std::stringstream ls(line);
        for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}

std::string drop_column(const fs::path& p, std::size_t col) {
    std::string out;
    for (const auto& row : csv(p)) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != col) out += row[i] + ",";
        }
        out += "\n";
    }
    return out;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("missing config file exits 2 and names the path") {
    const auto dir = scratch("missing");
    const auto r = run({"convergence", "--config", "/no/such/file.ini", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("/no/such/file.ini") != std::string::npos);
    const std::string manifest = slurp(dir / "manifest.txt");
    CHECK(manifest.find("status = config-error") != std::string::npos);
}

TEST_CASE("unknown config keys exit 2 and are listed") {
    const auto dir = scratch("typo");
    write(dir / "bad.ini", "[study]\nsamplez = 4\n");
    const auto r = run({"convergence", "--config", (dir / "bad.ini").string(), "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("study.samplez") != std::string::npos);
}

TEST_CASE("smoke preset writes every artifact quickly") {
    const auto dir = scratch("smoke");
    const auto start = std::chrono::steady_clock::now();
    const auto r = run({"convergence", "--preset", "smoke", "--out", dir.string(), "--threads", "1"});
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(r.code == 0);
    CHECK(elapsed < 5.0);
    for (const char* f : {"errors.csv", "slopes.csv", "slopes_delta.csv", "step_slopes.csv", "manifest.txt"}) {
        CHECK(fs::exists(dir / f));
    }
    const auto rows = csv(dir / "errors.csv");
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == std::vector<std::string>{"scheme", "law", "delta", "mean_steps", "rms_error", "cpu_seconds",
                                              "divergent_samples"});
    CHECK(csv(dir / "slopes.csv")[0] == std::vector<std::string>{"scheme", "law", "slope", "intercept", "r_squared"});

    const std::string manifest = slurp(dir / "manifest.txt");
    for (const char* f : {"errors.csv", "slopes.csv", "slopes_delta.csv", "step_slopes.csv"}) {
        CHECK(manifest.find("output = " + (dir / f).string() + "\n") != std::string::npos);
    }
    CHECK(manifest.find("status = ok") != std::string::npos);
    CHECK(manifest.find("seed = 7") != std::string::npos);
}

TEST_CASE("the manifest reproduces the study when fed back") {
    const auto first = scratch("first");
    REQUIRE(run({"convergence", "--preset", "smoke", "--seed", "123", "--out", first.string()}).code == 0);
    const auto second = scratch("second");
    REQUIRE(run({"convergence", "--config", (first / "manifest.txt").string(), "--out", second.string()}).code == 0);
    CHECK(drop_column(first / "errors.csv", 5) == drop_column(second / "errors.csv", 5));
    CHECK(slurp(second / "manifest.txt").find("seed = 123") != std::string::npos);
}

TEST_CASE("trace of a TE cell has a constant step") {
    const auto dir = scratch("trace-te");
    write(dir / "te.ini", "[study]\nname = te\nmodes = 16\n[trace]\nscheme = TE\nlaw = type1\ndelta = 2^-4\n");
    REQUIRE(run({"trace", "--config", (dir / "te.ini").string(), "--out", dir.string(), "--path-index", "3"}).code == 0);
    const auto rows = csv(dir / "trace.csv");
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] ==
          std::vector<std::string>{"path", "step", "t", "tau", "branch", "norm_l2", "norm_sup", "norm_F"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][0] == "3");
        CHECK(rows[i][3] == "0.0625");
    }
}

TEST_CASE("trace of an AE cell covers the horizon with positive steps") {
    const auto dir = scratch("trace-ae");
    write(dir / "ae.ini", "[study]\nmodes = 16\n[trace]\nscheme = AE\nlaw = au3\ndelta = 2^-5\n");
    REQUIRE(run({"trace", "--config", (dir / "ae.ini").string(), "--out", dir.string()}).code == 0);
    const auto rows = csv(dir / "trace.csv");
    double sum = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double tau = std::stod(rows[i][3]);
        CHECK(tau > 0.0);
        sum += tau;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("paper-literal ATEU trace falls back exactly when the law is below tau_min") {
    const auto dir = scratch("trace-ateu");
    const std::string text = "[study]\nmodes = 16\nseed = 5\n[trace]\nscheme = ATEU\nlaw = type1\ndelta = 2^-2\npath = 1\n";
    write(dir / "ateu.ini", text);
    REQUIRE(run({"trace", "--config", (dir / "ateu.ini").string(), "--out", dir.string(), "--paper-literal-fallback"})
                .code == 0);
    const auto rows = csv(dir / "trace.csv");
    REQUIRE(rows.size() > 1);

    // Replay the path and recompute the proposed step from each state.
    StudyConfig cfg = parse_config(text);
    cfg.paper_literal_fallback = true;
    const Scheme scheme = make_scheme(cfg, SchemeType::ATEU, cfg.trace.law, cfg.trace.delta);
    const auto drift = cfg.drift.make();
    NoiseStream stream(cfg.seed, noise_family(cfg, cfg.trace.delta), cfg.trace.path);
    auto x = initial_state(cfg, cfg.modes);
    std::size_t fallbacks = 0;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double proposed = compute_timestep(scheme.law, x, drift);
        const bool fell_back = rows[i][4] == "tamed-fallback";
        CHECK(fell_back == (proposed < cfg.tau_min));
        fallbacks += fell_back;
        auto [next, rec] = hybrid_step(scheme, x, stream, noise_spec(cfg), drift, std::stod(rows[i][2]));
        CHECK(rec.tau == std::stod(rows[i][3]));
        x = next;
        stream.advance();
    }
    MESSAGE(fallbacks << " fallback steps");
}

TEST_CASE("spatial subcommand writes spatial_errors.csv") {
    const auto dir = scratch("spatial");
    REQUIRE(run({"spatial", "--preset", "smoke", "--out", dir.string()}).code == 0);
    const auto rows = csv(dir / "spatial_errors.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][0] == "modes");
    CHECK(rows[1][1] == "32");
}

TEST_CASE("an all-divergent cell exits 3 and still leaves a manifest") {
    const auto dir = scratch("diverge");
    write(dir / "d.ini",
          "[study]\nmodes = 8\nsamples = 2\nschemes = AE\nlaws = uniform\ndeltas = 0.05, 0.04, 0.03\n"
          "initial_amplitude = 10000\n");
    const auto r = run({"convergence", "--config", (dir / "d.ini").string(), "--out", dir.string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("divergent") != std::string::npos);
    CHECK(slurp(dir / "manifest.txt").find("status = study-error") != std::string::npos);
    CHECK(fs::exists(dir / "errors.csv"));
}

TEST_CASE("validate passes on a clean build and catches injected faults") {
    const auto ok = run({"validate"});
    CHECK(ok.code == 0);
    for (const char* suite : {"parseval", "coupling", "drift-oracle", "one-sided-lipschitz", "smoothing-ratio", "sandwich"}) {
        CHECK(ok.out.find(std::string("PASS ") + suite) != std::string::npos);
    }

    const auto aliased = run({"validate", "--inject-aliasing"});
    CHECK(aliased.code == 1);
    CHECK(aliased.out.find("FAIL drift-oracle") != std::string::npos);
    CHECK(aliased.out.find("first failure: drift-oracle") != std::string::npos);

    const auto bad_drift = run({"validate", "--inject-drift", "1,0,1,0"});
    CHECK(bad_drift.code == 1);
    CHECK(bad_drift.out.find("a3 < 0") != std::string::npos);
}

TEST_CASE("presets subcommand and argument errors") {
    const auto list = run({"presets"});
    CHECK(list.code == 0);
    CHECK(list.out.find("desk-trace-class") != std::string::npos);
    const auto show = run({"presets", "--show", "smoke"});
    CHECK(show.out.find("name = smoke") != std::string::npos);
    CHECK(run({"presets", "--show", "nope"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"convergence", "--threads", "many"}).code == 2);
}
