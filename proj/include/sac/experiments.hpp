#ifndef SAC_EXPERIMENTS_HPP
#define SAC_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sac/schemes.hpp"

namespace sac {

struct DriftCoefficients {
    double a3 = -1.0;
    double a2 = 0.0;
    double a1 = 1.0;
    double a0 = 0.0;

    CubicDrift<double> make() const { return CubicDrift<double>(a3, a2, a1, a0); }
};

/// A timestep law in a study. A numbered type k picks au_k for AE/ATEU and aa_k for ATEA
/// (types 4-6 have no aa variant); an explicit family is used as is by every scheme.
struct LawChoice {
    std::optional<int> type;
    std::optional<TimestepFamily> family;

    static LawChoice of_type(int k) { return LawChoice{k, std::nullopt}; }
    static LawChoice of_family(TimestepFamily f) { return LawChoice{std::nullopt, f}; }

    std::string label() const;
    TimestepFamily resolve(SchemeType scheme) const;
};

std::optional<LawChoice> parse_law_choice(std::string_view text);

struct InitialDatum {
    /// Coefficient of e_mode; amplitude 0 starts from the zero field.
    Index mode = 1;
    double amplitude = 1.0;
};

struct TraceSettings {
    SchemeType scheme = SchemeType::ATEU;
    LawChoice law = LawChoice::of_type(1);
    double delta = 1.0 / 128;
    std::uint32_t path = 0;
};

struct SpatialSettings {
    std::vector<Index> modes{16, 32, 64, 128};
    Index reference_modes = 512;
    double delta = 1.0 / 128;
    /// TE with h = delta T, or AE with the uniform law; both keep one partition for every N.
    SchemeType scheme = SchemeType::TE;
};

struct StudyConfig {
    std::string name = "custom";
    NoiseKind noise_kind = NoiseKind::TraceClass;
    double noise_beta = 1.0;
    double noise_amplitude = 1.0;
    DriftCoefficients drift{};
    std::vector<SchemeType> schemes{SchemeType::TE, SchemeType::ATEU, SchemeType::ATEA};
    std::vector<LawChoice> laws{LawChoice::of_type(1), LawChoice::of_type(2), LawChoice::of_type(3)};
    std::vector<double> deltas{0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    Index modes = 256;
    double horizon = 1.0;
    std::size_t samples = 100;
    std::uint64_t seed = 20240601;
    int refinement = 3;
    InitialDatum initial{};
    double phi = 1.0;
    double zeta = 1.0;
    double xi = 10.0;
    double q0 = 1.0;
    double tau_min = 0.2;
    bool norm_of_projected_drift = false;
    bool paper_literal_fallback = false;
    /// Reuse one set of Brownian paths for every delta level.
    bool share_paths = false;
    double stability_ceiling = 1e3;
    std::size_t max_steps = 10'000'000;
    TraceSettings trace{};
    SpatialSettings spatial{};
};

/// Throws ConfigError naming the first violated constraint.
void validate(const StudyConfig& cfg);

NoiseSpec noise_spec(const StudyConfig& cfg, Index modes);
NoiseSpec noise_spec(const StudyConfig& cfg);
SpectralField<double> initial_state(const StudyConfig& cfg, Index modes);
TimestepLaw make_law(const StudyConfig& cfg, TimestepFamily family, double delta);
/// Scheme for one cell; `te_step` is only read for TE.
Scheme make_scheme(const StudyConfig& cfg, SchemeType type, const LawChoice& law, double delta, double te_step = 0.0);
/// Noise family shared by every cell at this delta (or by all cells when paths are shared).
std::uint64_t noise_family(const StudyConfig& cfg, double delta);

struct SampleResult {
    std::uint32_t path = 0;
    bool divergent = false;
    double error = 0.0;
    std::size_t steps = 0;
    std::size_t coupling_checks = 0;
    double max_norm_l2 = 0.0;
    double max_norm_sup = 0.0;
    std::string failure;
};

/// Runs the coarse path and its r-fold refinement on one Brownian path and returns
/// ||X_ref(T) - X(T)||. A blow-up on either trajectory yields a divergent sample.
SampleResult coupled_error_sample(const StudyConfig& cfg, const Scheme& scheme, double delta, std::uint32_t path);

double rms_error(std::span<const double> errors);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log(error) against log(1 / cost).
FitResult fit_order(std::span<const std::pair<double, double>> points);

double spearman(std::span<const double> x, std::span<const double> y);

struct StabilityReport {
    double ceiling = 1e3;
    double max_norm_l2 = 0.0;
    double max_norm_sup = 0.0;
    std::size_t exceedances = 0;
    std::size_t divergent = 0;

    bool stable() const { return exceedances == 0 && divergent == 0; }
};

class StabilityMonitor {
public:
    explicit StabilityMonitor(double ceiling = 1e3) { report_.ceiling = ceiling; }

    void observe(std::span<const StepRecord> records);
    void observe(const SampleResult& sample);
    void merge(const StabilityReport& other);
    const StabilityReport& report() const { return report_; }

private:
    StabilityReport report_;
};

StabilityReport stability_monitor(std::span<const std::vector<StepRecord>> trajectories, double ceiling = 1e3);

struct ErrorRow {
    SchemeType scheme;
    std::string law;
    double delta;
    double mean_steps;
    double rms_error;
    double cpu_seconds;
    std::size_t divergent_samples;
    std::size_t samples;
    std::size_t max_steps;
    /// Coarse steps over every sample, divergent ones included.
    std::size_t total_steps;
    std::size_t coupling_checks;
    /// Paths whose step count exceeded the uniform-low-bound count for a min-capped law.
    std::size_t step_bound_violations;
    double step_bound;
    double uniform_step;
};

struct SlopeRow {
    SchemeType scheme;
    std::string law;
    FitResult fit;
};

/// Spearman correlation of (delta, rms error) over one cell's rows.
struct TrendRow {
    SchemeType scheme;
    std::string law;
    double rho;
};

struct StudyResult {
    std::vector<ErrorRow> rows;
    std::vector<SlopeRow> slopes;
    std::vector<SlopeRow> slopes_delta;
    std::vector<SlopeRow> step_slopes;
    std::vector<TrendRow> trends;
    StabilityReport stability;
    std::size_t coupling_checks = 0;
    std::vector<std::string> divergences;

    const ErrorRow* find(SchemeType scheme, const std::string& law, double delta) const;
};

/// Full sweep over schemes x laws x deltas; paths run on `threads` workers (0 = hardware).
StudyResult convergence_study(const StudyConfig& cfg, std::size_t threads = 0);

struct SpatialRow {
    Index modes;
    double rms_error;
    std::size_t divergent_samples;
    std::size_t samples;
    double cpu_seconds;
};

struct SpatialResult {
    Index reference_modes;
    double delta;
    std::vector<SpatialRow> rows;
    /// Order in N: least squares of log(error) against log(1 / N).
    FitResult fit;
    std::size_t coupling_checks = 0;
    StabilityReport stability;
};

SpatialResult spatial_study(const StudyConfig& cfg, std::size_t threads = 0);

struct TraceResult {
    Scheme scheme;
    std::string law;
    std::vector<StepRecord> records;
    std::optional<std::string> failure;
};

/// One path of the trace cell; TE runs with h = delta T.
TraceResult trace_run(const StudyConfig& cfg);

}  // namespace sac

#endif  // SAC_EXPERIMENTS_HPP
