#include "sac/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace sac {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = count;
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

std::string describe(SchemeType scheme, const std::string& law, double delta) {
    return std::string(to_string(scheme)) + "/" + law + "/delta=" + std::to_string(delta);
}

}  // namespace

std::string LawChoice::label() const {
    if (type) return "type" + std::to_string(*type);
    return family ? to_string(*family) : "uniform";
}

TimestepFamily LawChoice::resolve(SchemeType scheme) const {
    if (family) return *family;
    const bool aa = scheme == SchemeType::ATEA;
    switch (type.value_or(0)) {
        case 1: return aa ? TimestepFamily::AA1 : TimestepFamily::AU1;
        case 2: return aa ? TimestepFamily::AA2 : TimestepFamily::AU2;
        case 3: return aa ? TimestepFamily::AA3 : TimestepFamily::AU3;
        case 4: return TimestepFamily::AU4;
        case 5: return TimestepFamily::AU5;
        case 6: return TimestepFamily::AU6;
        default: throw ConfigError("law type must be 1..6");
    }
}

std::optional<LawChoice> parse_law_choice(std::string_view text) {
    if (text.size() == 5 && text.starts_with("type") && text[4] >= '1' && text[4] <= '6') {
        return LawChoice::of_type(text[4] - '0');
    }
    if (text.size() == 1 && text[0] >= '1' && text[0] <= '6') return LawChoice::of_type(text[0] - '0');
    if (auto f = parse_timestep_family(text)) return LawChoice::of_family(*f);
    return std::nullopt;
}

void validate(const StudyConfig& cfg) {
    if (cfg.samples < 2) throw ConfigError("samples must be at least 2");
    if (cfg.deltas.empty()) throw ConfigError("at least one delta is required");
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
        if (!(cfg.deltas[i] > 0.0 && cfg.deltas[i] <= 1.0)) throw ConfigError("every delta must lie in (0, 1]");
        if (i > 0 && !(cfg.deltas[i] < cfg.deltas[i - 1])) throw ConfigError("deltas must be strictly decreasing");
    }
    if (cfg.refinement < 2) throw ConfigError("error studies need refinement r >= 2");
    if (cfg.modes < 1) throw ConfigError("modes must be positive");
    if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (cfg.schemes.empty()) throw ConfigError("at least one scheme is required");
    if (cfg.laws.empty()) throw ConfigError("at least one law is required");
    if (cfg.initial.mode < 1 || cfg.initial.mode > cfg.modes) throw ConfigError("initial mode outside 1..modes");
    if (!(cfg.phi > 0.0)) throw ConfigError("phi must be positive");
    if (!(cfg.tau_min > 0.0)) throw ConfigError("tau_min must be positive");
    if (!(cfg.xi > 0.0) || cfg.zeta < 0.0) throw ConfigError("low-bound parameters need xi > 0 and zeta >= 0");
    if (!(cfg.noise_amplitude >= 0.0)) throw ConfigError("noise amplitude must be non-negative");
    if (!(cfg.stability_ceiling > 0.0)) throw ConfigError("stability ceiling must be positive");
    for (const auto& law : cfg.laws) {
        if (!law.type && !law.family) throw ConfigError("empty law entry");
        if (law.type && (*law.type < 1 || *law.type > 6)) throw ConfigError("law type must be 1..6");
    }
    const auto& sp = cfg.spatial;
    if (sp.scheme != SchemeType::TE && sp.scheme != SchemeType::AE) {
        throw ConfigError("spatial study needs scheme TE or AE");
    }
    if (!(sp.delta > 0.0 && sp.delta <= 1.0)) throw ConfigError("spatial delta must lie in (0, 1]");
    for (Index n : sp.modes) {
        if (n < 1 || n >= sp.reference_modes) throw ConfigError("spatial modes must lie in 1..reference_modes-1");
    }
    if (!(cfg.trace.delta > 0.0 && cfg.trace.delta <= 1.0)) throw ConfigError("trace delta must lie in (0, 1]");
    try {
        cfg.drift.make();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("drift: ") + e.what());
    }
}

NoiseSpec noise_spec(const StudyConfig& cfg, Index modes) {
    return NoiseSpec{cfg.noise_kind, modes, cfg.noise_beta, cfg.noise_amplitude};
}

NoiseSpec noise_spec(const StudyConfig& cfg) { return noise_spec(cfg, cfg.modes); }

SpectralField<double> initial_state(const StudyConfig& cfg, Index modes) {
    if (cfg.initial.amplitude == 0.0 || cfg.initial.mode > modes) return SpectralField<double>::zero(modes);
    return SpectralField<double>::basis(modes, cfg.initial.mode, cfg.initial.amplitude);
}

TimestepLaw make_law(const StudyConfig& cfg, TimestepFamily family, double delta) {
    TimestepLaw law;
    law.family = family;
    law.delta = delta;
    law.phi = cfg.phi;
    law.horizon = cfg.horizon;
    law.zeta = cfg.zeta;
    law.xi = cfg.xi;
    law.q0 = cfg.q0;
    law.tau_min = cfg.tau_min;
    law.norm_of_projected_drift = cfg.norm_of_projected_drift;
    return law;
}

Scheme make_scheme(const StudyConfig& cfg, SchemeType type, const LawChoice& law, double delta, double te_step) {
    if (type == SchemeType::TE) return Scheme::tamed(te_step > 0.0 ? te_step : delta * cfg.horizon);
    return Scheme::adaptive(type, make_law(cfg, law.resolve(type), delta), cfg.paper_literal_fallback);
}

std::uint64_t noise_family(const StudyConfig& cfg, double delta) {
    return cfg.share_paths ? 0 : std::bit_cast<std::uint64_t>(delta);
}

SampleResult coupled_error_sample(const StudyConfig& cfg, const Scheme& scheme, double delta, std::uint32_t path) {
    if (cfg.refinement < 2) throw DomainError("coupled error samples need refinement r >= 2");
    const NoiseSpec noise = noise_spec(cfg);
    const CubicDrift<double> drift = cfg.drift.make();
    NoiseStream stream(cfg.seed, noise_family(cfg, delta), path);
    IntegrateOptions options;
    options.max_steps = cfg.max_steps;

    SampleResult out;
    out.path = path;
    const auto track = [&out](std::span<const StepRecord> records) {
        for (const auto& r : records) {
            out.max_norm_l2 = std::max(out.max_norm_l2, r.norm_l2);
            out.max_norm_sup = std::max(out.max_norm_sup, r.norm_sup);
        }
    };
    try {
        const auto run = integrate(scheme, initial_state(cfg, cfg.modes), cfg.horizon, stream, noise, drift,
                                   cfg.refinement, options);
        out.steps = run.steps();
        out.coupling_checks = run.coupling_checks;
        out.error = l2_norm(*run.reference - run.final_state);
        track(run.records);
        out.max_norm_l2 = std::max(out.max_norm_l2, l2_norm(run.final_state));
        out.max_norm_sup = std::max(out.max_norm_sup, sup_norm(run.final_state));
    } catch (const BlowUpError& e) {
        out.divergent = true;
        out.failure = e.what();
        out.steps = e.records().size();
        track(e.records());
        out.max_norm_sup = std::numeric_limits<double>::infinity();
    } catch (const RunawayPartitionError& e) {
        out.divergent = true;
        out.failure = e.what();
        out.steps = cfg.max_steps;
    }
    return out;
}

double rms_error(std::span<const double> errors) {
    if (errors.empty()) throw StudyError("no non-divergent samples to aggregate");
    double sum = 0.0;
    for (double e : errors) sum += e * e;
    return std::sqrt(sum / static_cast<double>(errors.size()));
}

FitResult fit_order(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw DomainError("order fits need at least 3 points");
    std::vector<double> x, y;
    for (const auto& [cost, error] : points) {
        if (!(cost > 0.0) || !(error > 0.0)) throw DomainError("order fits need positive cost and error");
        x.push_back(-std::log(cost));
        y.push_back(std::log(error));
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("order fits need at least two distinct costs");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    return fit;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = mid;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("spearman needs two equal-length samples of size >= 2");
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

void StabilityMonitor::observe(std::span<const StepRecord> records) {
    for (const auto& r : records) {
        report_.max_norm_l2 = std::max(report_.max_norm_l2, r.norm_l2);
        report_.max_norm_sup = std::max(report_.max_norm_sup, r.norm_sup);
        if (!(r.norm_sup < report_.ceiling)) ++report_.exceedances;
    }
}

void StabilityMonitor::observe(const SampleResult& sample) {
    report_.max_norm_l2 = std::max(report_.max_norm_l2, sample.max_norm_l2);
    report_.max_norm_sup = std::max(report_.max_norm_sup, sample.max_norm_sup);
    if (!(sample.max_norm_sup < report_.ceiling)) ++report_.exceedances;
    if (sample.divergent) ++report_.divergent;
}

void StabilityMonitor::merge(const StabilityReport& other) {
    report_.max_norm_l2 = std::max(report_.max_norm_l2, other.max_norm_l2);
    report_.max_norm_sup = std::max(report_.max_norm_sup, other.max_norm_sup);
    report_.exceedances += other.exceedances;
    report_.divergent += other.divergent;
}

StabilityReport stability_monitor(std::span<const std::vector<StepRecord>> trajectories, double ceiling) {
    StabilityMonitor monitor(ceiling);
    for (const auto& t : trajectories) monitor.observe(t);
    return monitor.report();
}

const ErrorRow* StudyResult::find(SchemeType scheme, const std::string& law, double delta) const {
    for (const auto& r : rows) {
        if (r.scheme == scheme && r.law == law && r.delta == delta) return &r;
    }
    return nullptr;
}

namespace {

ErrorRow run_cell(const StudyConfig& cfg, SchemeType type, const LawChoice& law, double delta, double te_step,
                  std::size_t threads, StudyResult& result, StabilityMonitor& monitor) {
    const Scheme scheme = make_scheme(cfg, type, law, delta, te_step);
    const auto start = Clock::now();
    std::vector<SampleResult> samples(cfg.samples);
    parallel_for(cfg.samples, threads, [&](std::size_t i) {
        samples[i] = coupled_error_sample(cfg, scheme, delta, static_cast<std::uint32_t>(i));
    });
    const double elapsed = seconds_since(start);

    const bool bounded = type != SchemeType::TE && is_min_capped(scheme.law.family);
    const double bound = bounded ? step_count_bound_uniform(delta, cfg.horizon, cfg.tau_min)
                                 : std::numeric_limits<double>::quiet_NaN();
    ErrorRow row{type, law.label(), delta, 0.0, 0.0, elapsed, 0, cfg.samples, 0, 0, 0, 0, bound,
                 type == SchemeType::TE ? scheme.uniform_step : std::numeric_limits<double>::quiet_NaN()};
    std::vector<double> errors;
    double step_sum = 0.0;
    for (const auto& s : samples) {
        monitor.observe(s);
        row.coupling_checks += s.coupling_checks;
        row.max_steps = std::max(row.max_steps, s.steps);
        row.total_steps += s.steps;
        if (bounded && static_cast<double>(s.steps) > bound) ++row.step_bound_violations;
        if (s.divergent) {
            ++row.divergent_samples;
            result.divergences.push_back(describe(type, row.law, delta) + "/path=" + std::to_string(s.path) + ": " +
                                         s.failure);
            continue;
        }
        errors.push_back(s.error);
        step_sum += static_cast<double>(s.steps);
    }
    if (errors.empty()) {
        row.rms_error = std::numeric_limits<double>::quiet_NaN();
        row.mean_steps = std::numeric_limits<double>::quiet_NaN();
        result.divergences.push_back(describe(type, row.law, delta) + ": all samples divergent");
    } else {
        row.rms_error = rms_error(errors);
        row.mean_steps = step_sum / static_cast<double>(errors.size());
    }
    result.coupling_checks += row.coupling_checks;
    return row;
}

template <typename Project>
std::optional<FitResult> fit_cell(const std::vector<const ErrorRow*>& rows, Project project) {
    std::vector<std::pair<double, double>> points;
    for (const ErrorRow* r : rows) {
        const auto p = project(*r);
        if (std::isfinite(p.first) && std::isfinite(p.second) && p.first > 0.0 && p.second > 0.0) points.push_back(p);
    }
    if (points.size() < 3) return std::nullopt;
    try {
        return fit_order(points);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

}  // namespace

StudyResult convergence_study(const StudyConfig& cfg, std::size_t threads) {
    validate(cfg);
    StudyResult result;
    StabilityMonitor monitor(cfg.stability_ceiling);

    std::vector<SchemeType> order;
    for (SchemeType s : cfg.schemes) {
        if (s != SchemeType::TE) order.push_back(s);
    }
    const bool has_te = std::find(cfg.schemes.begin(), cfg.schemes.end(), SchemeType::TE) != cfg.schemes.end();

    const auto rank = [&](SchemeType s) {
        return static_cast<int>(std::find(cfg.schemes.begin(), cfg.schemes.end(), s) - cfg.schemes.begin());
    };
    std::vector<ErrorRow> rows;
    for (const auto& law : cfg.laws) {
        for (SchemeType s : order) {
            for (double delta : cfg.deltas) rows.push_back(run_cell(cfg, s, law, delta, 0.0, threads, result, monitor));
        }
    }
    if (has_te) {
        for (const auto& law : cfg.laws) {
            for (double delta : cfg.deltas) {
                // Matched cost: TE takes as many uniform steps as the adaptive cells of this law needed on average.
                double sum = 0.0;
                std::size_t count = 0;
                for (const auto& r : rows) {
                    if (r.law == law.label() && r.delta == delta && std::isfinite(r.mean_steps)) {
                        sum += r.mean_steps;
                        ++count;
                    }
                }
                const double h =
                    count == 0 ? delta * cfg.horizon
                               : cfg.horizon / std::max(1.0, std::round(sum / static_cast<double>(count)));
                rows.push_back(run_cell(cfg, SchemeType::TE, law, delta, h, threads, result, monitor));
            }
        }
    }

    // Report in configuration order: law, then scheme as listed, then delta.
    std::stable_sort(rows.begin(), rows.end(), [&](const ErrorRow& a, const ErrorRow& b) {
        const auto la = std::find_if(cfg.laws.begin(), cfg.laws.end(), [&](const LawChoice& l) { return l.label() == a.law; });
        const auto lb = std::find_if(cfg.laws.begin(), cfg.laws.end(), [&](const LawChoice& l) { return l.label() == b.law; });
        if (la != lb) return la < lb;
        return rank(a.scheme) < rank(b.scheme);
    });
    result.rows = std::move(rows);
    result.stability = monitor.report();

    for (const auto& law : cfg.laws) {
        for (SchemeType s : cfg.schemes) {
            std::vector<const ErrorRow*> cell;
            for (const auto& r : result.rows) {
                if (r.scheme == s && r.law == law.label()) cell.push_back(&r);
            }
            if (auto f = fit_cell(cell, [](const ErrorRow& r) { return std::pair{r.mean_steps, r.rms_error}; })) {
                result.slopes.push_back({s, law.label(), *f});
            }
            if (auto f = fit_cell(cell, [](const ErrorRow& r) { return std::pair{1.0 / r.delta, r.rms_error}; })) {
                result.slopes_delta.push_back({s, law.label(), *f});
            }
            if (auto f = fit_cell(cell, [](const ErrorRow& r) { return std::pair{r.delta, r.mean_steps}; })) {
                result.step_slopes.push_back({s, law.label(), *f});
            }
            std::vector<double> d, e;
            for (const ErrorRow* r : cell) {
                if (std::isfinite(r->rms_error)) {
                    d.push_back(r->delta);
                    e.push_back(r->rms_error);
                }
            }
            if (d.size() >= 2) result.trends.push_back({s, law.label(), spearman(d, e)});
        }
    }
    return result;
}

SpatialResult spatial_study(const StudyConfig& cfg, std::size_t threads) {
    validate(cfg);
    const auto& sp = cfg.spatial;
    const CubicDrift<double> drift = cfg.drift.make();
    const double h = sp.delta * cfg.horizon;
    const std::size_t levels = sp.modes.size();
    const Index nref = sp.reference_modes;
    const NoiseSpec ref_noise = noise_spec(cfg, nref);

    struct PathOutcome {
        std::vector<double> errors;
        std::vector<double> seconds;
        bool divergent = false;
        std::size_t coupling = 0;
        double max_l2 = 0.0, max_sup = 0.0;
    };
    std::vector<PathOutcome> paths(cfg.samples);

    const auto step = [&](const SpectralField<double>& x, double tau, const Vector<double>& dw) {
        return sp.scheme == SchemeType::TE ? tamed_step(x, tau, dw, drift) : ae_step(x, tau, dw, drift);
    };

    parallel_for(cfg.samples, threads, [&](std::size_t p) {
        PathOutcome& out = paths[p];
        out.errors.assign(levels, 0.0);
        out.seconds.assign(levels, 0.0);
        const auto path = static_cast<std::uint32_t>(p);
        NoiseStream ref_stream(cfg.seed, noise_family(cfg, sp.delta), path);
        std::vector<NoiseStream> streams(levels, ref_stream);
        SpectralField<double> ref = initial_state(cfg, nref);
        std::vector<SpectralField<double>> coarse;
        for (Index n : sp.modes) coarse.push_back(initial_state(cfg, n));

        double t = 0.0;
        std::size_t count = 0;
        try {
            while (t < cfg.horizon) {
                if (++count > cfg.max_steps) throw RunawayPartitionError(cfg.max_steps, t);
                double tau = h;
                bool last = false;
                if (t + tau >= cfg.horizon * (1.0 - 1e-12)) {
                    tau = cfg.horizon - t;
                    last = true;
                }
                const auto inc = sample_refined_increment<double>(ref_stream, ref_noise, tau, 1);
                ref = step(ref, tau, inc.coarse);
                out.max_l2 = std::max(out.max_l2, l2_norm(ref));
                for (std::size_t k = 0; k < levels; ++k) {
                    const auto start = Clock::now();
                    const auto own = sample_refined_increment<double>(streams[k], noise_spec(cfg, sp.modes[k]), tau, 1);
                    if (!(own.coarse.array() == inc.coarse.head(sp.modes[k]).array()).all()) {
                        throw std::logic_error("truncated noise differs from the reference noise");
                    }
                    ++out.coupling;
                    coarse[k] = step(coarse[k], tau, own.coarse);
                    out.seconds[k] += seconds_since(start);
                }
                t = last ? cfg.horizon : t + tau;
            }
            out.max_sup = sup_norm(ref);
            for (std::size_t k = 0; k < levels; ++k) {
                const Vector<double> head = ref.coeffs().head(sp.modes[k]) - coarse[k].coeffs();
                const Index tail = nref - sp.modes[k];
                out.errors[k] = std::sqrt(head.squaredNorm() + ref.coeffs().tail(tail).squaredNorm());
            }
        } catch (const NonFiniteError&) {
            out.divergent = true;
        } catch (const RunawayPartitionError&) {
            out.divergent = true;
        }
    });

    SpatialResult result{nref, sp.delta, {}, {}, 0, {}};
    StabilityMonitor monitor(cfg.stability_ceiling);
    for (const auto& p : paths) {
        result.coupling_checks += p.coupling;
        SampleResult s;
        s.divergent = p.divergent;
        s.max_norm_l2 = p.max_l2;
        s.max_norm_sup = p.divergent ? std::numeric_limits<double>::infinity() : p.max_sup;
        monitor.observe(s);
    }
    result.stability = monitor.report();
    std::vector<std::pair<double, double>> points;
    for (std::size_t k = 0; k < levels; ++k) {
        std::vector<double> errors;
        double seconds = 0.0;
        std::size_t divergent = 0;
        for (const auto& p : paths) {
            seconds += p.seconds[k];
            if (p.divergent) {
                ++divergent;
            } else {
                errors.push_back(p.errors[k]);
            }
        }
        const double rms = errors.empty() ? std::numeric_limits<double>::quiet_NaN() : rms_error(errors);
        result.rows.push_back({sp.modes[k], rms, divergent, cfg.samples, seconds});
        if (std::isfinite(rms) && rms > 0.0) points.emplace_back(static_cast<double>(sp.modes[k]), rms);
    }
    if (points.size() >= 3) result.fit = fit_order(points);
    return result;
}

TraceResult trace_run(const StudyConfig& cfg) {
    validate(cfg);
    const auto& tr = cfg.trace;
    TraceResult out{make_scheme(cfg, tr.scheme, tr.law, tr.delta), tr.law.label(), {}, std::nullopt};
    NoiseStream stream(cfg.seed, noise_family(cfg, tr.delta), tr.path);
    IntegrateOptions options;
    options.max_steps = cfg.max_steps;
    try {
        out.records = integrate(out.scheme, initial_state(cfg, cfg.modes), cfg.horizon, stream, noise_spec(cfg),
                                cfg.drift.make(), 1, options)
                          .records;
    } catch (const BlowUpError& e) {
        out.records = e.records();
        out.failure = e.what();
    } catch (const RunawayPartitionError& e) {
        out.failure = e.what();
    }
    return out;
}

}  // namespace sac
