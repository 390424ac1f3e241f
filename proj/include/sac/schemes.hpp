#ifndef SAC_SCHEMES_HPP
#define SAC_SCHEMES_HPP

// Exponential-integrator time stepping for dX + AX dt = F(X) dt + dW:
//
//   AE    X' = S(tau)(X + tau F^N(X) + dW),             tau = tau^delta(X)
//   TE    X' = S(h)(X + h F^N(X) / (1 + h ||F^N(X)||) + dW)
//   ATEU  AE step when tau^delta(X) >= tau_min, TE step of length tau_fb otherwise
//   ATEA  AE step when tau^delta(X) >= (zeta ||X||^q0 + xi)^{-1}, TE step otherwise
//
// The integrator clamps the last step so the partition ends exactly at T, and can
// advance a reference path alongside that splits every step into r substeps driven
// by the fine increments whose sum is the coarse one.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sac/errors.hpp"
#include "sac/noise.hpp"
#include "sac/nonlinearity.hpp"
#include "sac/spectral.hpp"
#include "sac/timestep.hpp"

namespace sac {

enum class SchemeType { AE, TE, ATEU, ATEA };

inline const char* to_string(SchemeType s) {
    switch (s) {
        case SchemeType::AE: return "AE";
        case SchemeType::TE: return "TE";
        case SchemeType::ATEU: return "ATEU";
        case SchemeType::ATEA: return "ATEA";
    }
    return "?";
}

inline std::optional<SchemeType> parse_scheme_type(std::string_view s) {
    for (auto t : {SchemeType::AE, SchemeType::TE, SchemeType::ATEU, SchemeType::ATEA}) {
        if (s == to_string(t)) return t;
    }
    return std::nullopt;
}

struct Scheme {
    SchemeType type = SchemeType::AE;
    /// Used by AE, ATEU and ATEA.
    TimestepLaw law{};
    /// Step length h of TE.
    double uniform_step = 0.0;
    /// Fallback steps of length tau_min verbatim instead of min(tau_min, delta T).
    bool paper_literal_fallback = false;

    static Scheme adaptive(SchemeType type, TimestepLaw law, bool paper_literal = false) {
        return Scheme{type, law, 0.0, paper_literal};
    }
    static Scheme tamed(double h) { return Scheme{SchemeType::TE, TimestepLaw{}, h, false}; }

    double fallback_length() const {
        return paper_literal_fallback ? law.tau_min : std::min(law.tau_min, law.delta * law.horizon);
    }

    /// Threshold below which a hybrid scheme falls back to a tamed step.
    double low_bound(double norm_l2) const {
        switch (type) {
            case SchemeType::ATEU: return law.tau_min;
            case SchemeType::ATEA: return 1.0 / (law.zeta * std::pow(norm_l2, law.q0) + law.xi);
            default: return 0.0;
        }
    }
};

enum class StepBranch { Adaptive, TamedFallback, FinalClamp, Uniform };

inline const char* to_string(StepBranch b) {
    switch (b) {
        case StepBranch::Adaptive: return "adaptive";
        case StepBranch::TamedFallback: return "tamed-fallback";
        case StepBranch::FinalClamp: return "final-clamp";
        case StepBranch::Uniform: return "uniform";
    }
    return "?";
}

/// Which update formula a step applies.
enum class UpdateKind { Exponential, Tamed };

struct StepRecord {
    double t;
    double tau;
    StepBranch branch;
    UpdateKind update;
    double norm_l2;
    double norm_sup;
    double norm_drift;
    /// tau^delta(X_m) before any fallback or clamp (NaN for TE).
    double proposed_tau;
    /// Hybrid low bound at X_m (NaN when the scheme has none).
    double low_bound;
};

/// Non-finite state on a path; carries the records up to the failing step.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, double norm_sup, std::vector<StepRecord> records)
        : std::runtime_error("trajectory blew up at t = " + std::to_string(t) +
                             " (||X||_E = " + std::to_string(norm_sup) + ")"),
          t_(t), norm_sup_(norm_sup), records_(std::move(records)) {}

    double time() const noexcept { return t_; }
    double norm_sup() const noexcept { return norm_sup_; }
    const std::vector<StepRecord>& records() const noexcept { return records_; }

private:
    double t_;
    double norm_sup_;
    std::vector<StepRecord> records_;
};

namespace detail {

template <typename Scalar>
SpectralField<Scalar> exponential_update(const SpectralField<Scalar>& x, const SpectralField<Scalar>& drift_n,
                                         Scalar tau, const Vector<Scalar>& dw) {
    Vector<Scalar> v = x.coeffs() + tau * drift_n.coeffs() + dw;
    const Vector<Scalar> lambda = OperatorSpectrum<Scalar>::eigenvalues(x.modes());
    v.array() *= (-tau * lambda.array()).exp();
    if (!v.allFinite()) throw NonFiniteError("non-finite update");
    return SpectralField<Scalar>(std::move(v));
}

template <typename Scalar>
SpectralField<Scalar> tamed_update(const SpectralField<Scalar>& x, const SpectralField<Scalar>& drift_n,
                                   Scalar drift_n_norm, Scalar tau, const Vector<Scalar>& dw) {
    const Scalar scale = tau / (Scalar(1) + drift_n_norm * tau);
    Vector<Scalar> v = x.coeffs() + scale * drift_n.coeffs() + dw;
    const Vector<Scalar> lambda = OperatorSpectrum<Scalar>::eigenvalues(x.modes());
    v.array() *= (-tau * lambda.array()).exp();
    if (!v.allFinite()) throw NonFiniteError("non-finite update");
    return SpectralField<Scalar>(std::move(v));
}

template <typename Scalar>
void require_increment_size(const SpectralField<Scalar>& x, const Vector<Scalar>& dw) {
    if (dw.size() != x.modes()) {
        throw DimensionError("increment has " + std::to_string(dw.size()) + " modes, state has " +
                             std::to_string(x.modes()));
    }
}

}  // namespace detail

/// S(tau)(X + tau F^N(X) + dW).
template <typename Scalar>
SpectralField<Scalar> ae_step(const SpectralField<Scalar>& x, Scalar tau, const Vector<Scalar>& dw,
                              const CubicDrift<Scalar>& drift) {
    if (!(tau > Scalar(0))) throw DomainError("ae_step needs tau > 0");
    detail::require_increment_size(x, dw);
    return detail::exponential_update(x, apply_drift(drift, x), tau, dw);
}

/// S(tau)(X + tau F^N(X) / (1 + tau ||F^N(X)||) + dW).
template <typename Scalar>
SpectralField<Scalar> tamed_step(const SpectralField<Scalar>& x, Scalar tau, const Vector<Scalar>& dw,
                                 const CubicDrift<Scalar>& drift) {
    if (!(tau > Scalar(0))) throw DomainError("tamed_step needs tau > 0");
    detail::require_increment_size(x, dw);
    const auto fn = apply_drift(drift, x);
    return detail::tamed_update(x, fn, l2_norm(fn), tau, dw);
}

/// Length, branch and update formula of the step a scheme takes from a state.
struct StepPlan {
    double tau;
    StepBranch branch;
    UpdateKind update;
    double proposed_tau;
    double low_bound;
};

template <typename Scalar>
StepPlan plan_step(const Scheme& scheme, const StateDiagnostics<Scalar>& d) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    switch (scheme.type) {
        case SchemeType::TE:
            return {scheme.uniform_step, StepBranch::Uniform, UpdateKind::Tamed, nan, nan};
        case SchemeType::AE: {
            const double tau = static_cast<double>(timestep_from(scheme.law, d));
            return {tau, StepBranch::Adaptive, UpdateKind::Exponential, tau, nan};
        }
        case SchemeType::ATEU:
        case SchemeType::ATEA: {
            const double tau = static_cast<double>(timestep_from(scheme.law, d));
            const double bound = scheme.low_bound(static_cast<double>(d.norm_l2));
            // ">=": a tie takes the adaptive branch.
            if (tau >= bound) return {tau, StepBranch::Adaptive, UpdateKind::Exponential, tau, bound};
            return {scheme.fallback_length(), StepBranch::TamedFallback, UpdateKind::Tamed, tau, bound};
        }
    }
    return {nan, StepBranch::Adaptive, UpdateKind::Exponential, nan, nan};
}

template <typename Scalar>
SpectralField<Scalar> apply_update(UpdateKind kind, const SpectralField<Scalar>& x, const StateDiagnostics<Scalar>& d,
                                   Scalar tau, const Vector<Scalar>& dw) {
    return kind == UpdateKind::Exponential ? detail::exponential_update(x, d.drift, tau, dw)
                                           : detail::tamed_update(x, d.drift, d.norm_drift_projected, tau, dw);
}

/// One step of ATEU/ATEA from X at time t (no final clamp), consuming one increment of the
/// stream over the step length actually taken.
template <typename Scalar>
std::pair<SpectralField<Scalar>, StepRecord> hybrid_step(const Scheme& scheme, const SpectralField<Scalar>& x,
                                                         NoiseStream& stream, const NoiseSpec& noise,
                                                         const CubicDrift<Scalar>& drift, double t = 0.0) {
    if (scheme.type != SchemeType::ATEU && scheme.type != SchemeType::ATEA) {
        throw DomainError("hybrid_step needs an ATEU or ATEA scheme");
    }
    const auto d = diagnose(drift, x);
    const StepPlan plan = plan_step(scheme, d);
    const auto inc = sample_refined_increment<Scalar>(stream, noise, plan.tau, 1);
    detail::require_increment_size(x, inc.coarse);
    StepRecord rec{t, plan.tau, plan.branch, plan.update, static_cast<double>(d.norm_l2),
                   static_cast<double>(d.norm_sup), static_cast<double>(detail::law_drift_norm(scheme.law, d)),
                   plan.proposed_tau, plan.low_bound};
    try {
        return {apply_update(plan.update, x, d, Scalar(plan.tau), inc.coarse), rec};
    } catch (const NonFiniteError&) {
        throw BlowUpError(t, rec.norm_sup, {rec});
    }
}

struct IntegrateOptions {
    std::size_t max_steps = 10'000'000;
    /// Relative slack under which a step that overshoots T only by rounding is not
    /// reported as a clamp.
    double clamp_tolerance = 1e-12;
};

template <typename Scalar>
struct IntegrationResult {
    SpectralField<Scalar> final_state;
    std::optional<SpectralField<Scalar>> reference;
    std::vector<StepRecord> records;
    /// Steps whose coarse increment was verified to equal the sum of its refinements.
    std::size_t coupling_checks = 0;

    std::size_t steps() const noexcept { return records.size(); }
};

namespace detail {

inline void validate_scheme(const Scheme& scheme) {
    if (scheme.type == SchemeType::TE) {
        if (!(scheme.uniform_step > 0.0)) throw DomainError("TE needs a positive step length");
    } else {
        scheme.law.validate();
    }
}

}  // namespace detail

/// Drives X0 from 0 to exactly T. With refinement r > 1 a reference path is advanced on the
/// same partition, each step split into r equal substeps with the same update formula.
template <typename Scalar>
IntegrationResult<Scalar> integrate(const Scheme& scheme, const SpectralField<Scalar>& x0, double horizon,
                                    NoiseStream& stream, const NoiseSpec& noise, const CubicDrift<Scalar>& drift,
                                    int refinement = 1, const IntegrateOptions& options = {}) {
    if (!(horizon > 0.0)) throw DomainError("integrate needs T > 0");
    if (refinement < 1) throw DomainError("integrate needs r >= 1");
    if (noise.modes != x0.modes()) throw DimensionError("noise and state mode counts differ");
    detail::validate_scheme(scheme);

    SpectralField<Scalar> x = x0;
    std::optional<SpectralField<Scalar>> ref;
    if (refinement > 1) ref = x0;
    std::vector<StepRecord> records;
    std::size_t coupling_checks = 0;
    double t = 0.0;

    while (t < horizon) {
        if (records.size() >= options.max_steps) throw RunawayPartitionError(options.max_steps, t);

        std::optional<StateDiagnostics<Scalar>> d;
        try {
            d = diagnose(drift, x);
        } catch (const NonFiniteError&) {
            throw BlowUpError(t, std::numeric_limits<double>::infinity(), records);
        }
        StepPlan plan = plan_step(scheme, *d);
        if (!(plan.tau > 0.0) || !std::isfinite(plan.tau)) {
            throw DomainError("timestep law returned a non-positive step at t = " + std::to_string(t));
        }

        double tau = plan.tau;
        bool last = false;
        if (t + tau >= horizon * (1.0 - options.clamp_tolerance)) {
            tau = horizon - t;
            last = true;
            if (tau < plan.tau * (1.0 - 1e-9)) plan.branch = StepBranch::FinalClamp;
        }

        const auto inc = sample_refined_increment<Scalar>(stream, noise, tau, refinement);
        if (refinement > 1) {
            if (!coupling_exact(inc)) throw std::logic_error("coarse increment differs from the sum of its refinements");
            ++coupling_checks;
        }

        records.push_back(StepRecord{t, tau, plan.branch, plan.update, static_cast<double>(d->norm_l2),
                                     static_cast<double>(d->norm_sup),
                                     static_cast<double>(detail::law_drift_norm(scheme.law, *d)), plan.proposed_tau,
                                     plan.low_bound});
        try {
            x = apply_update(plan.update, x, *d, Scalar(tau), inc.coarse);
            if (ref) {
                const Scalar sub = Scalar(tau / refinement);
                for (const auto& dw : inc.fine) {
                    const auto dr = diagnose(drift, *ref);
                    ref = apply_update(plan.update, *ref, dr, sub, dw);
                }
            }
        } catch (const NonFiniteError&) {
            throw BlowUpError(t, static_cast<double>(d->norm_sup), records);
        }
        t = last ? horizon : t + tau;
    }
    return IntegrationResult<Scalar>{std::move(x), std::move(ref), std::move(records), coupling_checks};
}

}  // namespace sac

#endif  // SAC_SCHEMES_HPP
