#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sac/config.hpp"
#include "sac/csv.hpp"
#include "sac/validate.hpp"

#ifndef SAC_VERSION
#define SAC_VERSION "0.0.0"
#endif

namespace sac::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config_path;
    std::string preset;
    std::string out_dir = "sac-out";
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
    bool paper_literal_fallback = false;
    std::optional<std::uint32_t> path_index;
};

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

/// Collects run metadata and writes manifest.txt when it goes out of scope, whatever the outcome.
class Manifest {
public:
    Manifest(fs::path dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)), start_(timestamp()) {}
    Manifest(const Manifest&) = delete;
    Manifest& operator=(const Manifest&) = delete;
    ~Manifest() {
        try {
            write();
        } catch (...) {
        }
    }

    void set_config(const StudyConfig& cfg) { config_ = cfg; }
    void add_output(const std::string& name) { outputs_.push_back(name); }
    void note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }
    void status(std::string s) { status_ = std::move(s); }

private:
    void write() const {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        std::ofstream os(dir_ / "manifest.txt");
        os << "[manifest]\n"
           << "artifact = sac\n"
           << "version = " << SAC_VERSION << '\n'
           << "command = " << command_ << '\n'
           << "status = " << status_ << '\n'
           << "started = " << start_ << '\n'
           << "finished = " << timestamp() << '\n';
        if (config_) os << "seed = " << config_->seed << '\n';
        for (const auto& o : outputs_) os << "output = " << (dir_ / o).string() << '\n';
        for (const auto& [k, v] : notes_) os << k << " = " << v << '\n';
        os << '\n';
        if (config_) os << to_config_text(*config_);
    }

    fs::path dir_;
    std::string command_;
    std::string start_;
    std::string status_ = "incomplete";
    std::optional<StudyConfig> config_;
    std::vector<std::string> outputs_;
    std::vector<std::pair<std::string, std::string>> notes_;
};

StudyConfig resolve(const Common& c) {
    if (!c.config_path.empty() && !c.preset.empty()) throw ConfigError("use either --config or --preset, not both");
    StudyConfig cfg = !c.config_path.empty() ? load_config(c.config_path)
                      : !c.preset.empty()    ? load_preset(c.preset)
                                             : load_preset("smoke");
    if (c.seed) cfg.seed = *c.seed;
    if (c.paper_literal_fallback) cfg.paper_literal_fallback = true;
    if (c.path_index) cfg.trace.path = *c.path_index;
    validate(cfg);
    return cfg;
}

template <typename Fn>
void emit(Manifest& manifest, const fs::path& dir, const std::string& name, Fn&& write) {
    fs::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os) throw StudyError("cannot write " + (dir / name).string());
    write(os);
    manifest.add_output(name);
}

std::string fmt(double v) { return format_double(v); }

int convergence(const Common& c, std::ostream& out, std::ostream& err) {
    Manifest manifest(c.out_dir, "convergence");
    try {
        const StudyConfig cfg = resolve(c);
        manifest.set_config(cfg);
        const StudyResult result = convergence_study(cfg, c.threads);
        const fs::path dir = c.out_dir;
        emit(manifest, dir, "errors.csv", [&](std::ostream& os) { write_errors_csv(os, result); });
        emit(manifest, dir, "slopes.csv", [&](std::ostream& os) { write_slopes_csv(os, result.slopes); });
        emit(manifest, dir, "slopes_delta.csv", [&](std::ostream& os) { write_slopes_csv(os, result.slopes_delta); });
        emit(manifest, dir, "step_slopes.csv", [&](std::ostream& os) { write_slopes_csv(os, result.step_slopes); });

        for (const auto& s : result.slopes) {
            out << to_string(s.scheme) << ' ' << s.law << ": slope " << fmt(s.fit.slope) << " (r^2 "
                << fmt(s.fit.r_squared) << ")\n";
        }
        const auto& st = result.stability;
        out << "max ||X|| " << fmt(st.max_norm_l2) << ", max ||X||_E " << fmt(st.max_norm_sup) << ", "
            << st.divergent << " divergent samples, " << st.exceedances << " ceiling exceedances\n";
        manifest.note("max_norm_l2", fmt(st.max_norm_l2));
        manifest.note("max_norm_sup", fmt(st.max_norm_sup));
        manifest.note("divergent_samples", std::to_string(st.divergent));
        manifest.note("ceiling_exceedances", std::to_string(st.exceedances));
        manifest.note("coupling_checks", std::to_string(result.coupling_checks));
        for (const auto& d : result.divergences) {
            err << "divergent: " << d << '\n';
        }
        bool empty_cell = false;
        for (const auto& r : result.rows) empty_cell = empty_cell || !std::isfinite(r.rms_error);
        if (empty_cell) {
            manifest.status("study-error");
            err << "error: at least one cell has no non-divergent samples\n";
            return kStudyError;
        }
        manifest.status("ok");
        return kOk;
    } catch (const ConfigError& e) {
        manifest.status("config-error");
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        manifest.status("study-error");
        err << "study error: " << e.what() << '\n';
        return kStudyError;
    }
}

int trace(const Common& c, std::ostream& out, std::ostream& err) {
    Manifest manifest(c.out_dir, "trace");
    try {
        const StudyConfig cfg = resolve(c);
        manifest.set_config(cfg);
        const TraceResult result = trace_run(cfg);
        emit(manifest, c.out_dir, "trace.csv", [&](std::ostream& os) { write_trace_csv(os, result, cfg.trace.path); });
        out << to_string(cfg.trace.scheme) << ' ' << result.law << " delta " << fmt(cfg.trace.delta) << ": "
            << result.records.size() << " steps\n";
        if (result.failure) {
            manifest.status("study-error");
            err << "study error: " << *result.failure << '\n';
            return kStudyError;
        }
        manifest.status("ok");
        return kOk;
    } catch (const ConfigError& e) {
        manifest.status("config-error");
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        manifest.status("study-error");
        err << "study error: " << e.what() << '\n';
        return kStudyError;
    }
}

int spatial(const Common& c, std::ostream& out, std::ostream& err) {
    Manifest manifest(c.out_dir, "spatial");
    try {
        const StudyConfig cfg = resolve(c);
        manifest.set_config(cfg);
        const SpatialResult result = spatial_study(cfg, c.threads);
        emit(manifest, c.out_dir, "spatial_errors.csv", [&](std::ostream& os) { write_spatial_csv(os, result); });
        for (const auto& r : result.rows) out << "N = " << r.modes << ": rms " << fmt(r.rms_error) << '\n';
        out << "spatial slope " << fmt(result.fit.slope) << " (r^2 " << fmt(result.fit.r_squared) << ")\n";
        manifest.note("spatial_slope", fmt(result.fit.slope));
        manifest.note("spatial_r_squared", fmt(result.fit.r_squared));
        manifest.note("coupling_checks", std::to_string(result.coupling_checks));
        for (const auto& r : result.rows) {
            if (!std::isfinite(r.rms_error)) {
                manifest.status("study-error");
                err << "error: N = " << r.modes << " has no non-divergent samples\n";
                return kStudyError;
            }
        }
        manifest.status("ok");
        return kOk;
    } catch (const ConfigError& e) {
        manifest.status("config-error");
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        manifest.status("study-error");
        err << "study error: " << e.what() << '\n';
        return kStudyError;
    }
}

int validate_cmd(const ValidateOptions& options, std::ostream& out) {
    bool all = true;
    std::string first;
    for (const auto& s : run_validation(options)) {
        out << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.cases << " cases)";
        if (!s.passed) out << ": " << s.first_failure;
        out << '\n';
        if (!s.passed && all) first = s.name + ": " + s.first_failure;
        all = all && s.passed;
    }
    if (!all) {
        out << "first failure: " << first << '\n';
        return kInvariantFailure;
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive time-stepping solver for the stochastic Allen-Cahn equation", "sac"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SAC_VERSION);

    Common common;
    const auto add_common = [&common](CLI::App* sub, bool threads) {
        sub->add_option("--config", common.config_path, "Study config file");
        sub->add_option("--preset", common.preset, "Built-in preset name");
        sub->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", common.seed, "Override the config seed");
        if (threads) sub->add_option("--threads", common.threads, "Worker threads (0 = hardware)");
        sub->add_flag("--paper-literal-fallback", common.paper_literal_fallback,
                      "Hybrid fallback steps take tau_min even near T");
    };
    auto* conv = app.add_subcommand("convergence", "Strong-error sweep; writes errors.csv and slopes.csv");
    add_common(conv, true);
    auto* tr = app.add_subcommand("trace", "Timestep trace of one path; writes trace.csv");
    add_common(tr, false);
    tr->add_option("--path-index", common.path_index, "Path to trace");
    auto* sp = app.add_subcommand("spatial", "Spatial-error sweep; writes spatial_errors.csv");
    add_common(sp, true);

    ValidateOptions vopts;
    bool inject_aliasing = false;
    std::vector<double> inject_drift;
    auto* val = app.add_subcommand("validate", "Run the invariant suites");
    val->add_option("--seed", vopts.seed, "Seed for the random cases");
    val->add_flag("--inject-aliasing", inject_aliasing)->group("");
    val->add_option("--inject-drift", inject_drift)->expected(4)->delimiter(',')->group("");

    auto* presets = app.add_subcommand("presets", "List built-in presets, or print one with --show");
    std::string show;
    presets->add_option("--show", show, "Preset to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    if (*conv) return convergence(common, out, err);
    if (*tr) return trace(common, out, err);
    if (*sp) return spatial(common, out, err);
    if (*val) {
        if (inject_aliasing) vopts.drift_grid = 16;
        if (!inject_drift.empty()) {
            vopts.drift = DriftCoefficients{inject_drift[0], inject_drift[1], inject_drift[2], inject_drift[3]};
        }
        return validate_cmd(vopts, out);
    }
    if (show.empty()) {
        for (const auto& n : preset_names()) out << n << '\n';
        return kOk;
    }
    try {
        out << preset_text(show);
        return kOk;
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace sac::cli
