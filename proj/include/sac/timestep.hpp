#ifndef SAC_TIMESTEP_HPP
#define SAC_TIMESTEP_HPP

// State-dependent timestep laws tau^delta(X), evaluated from the current state only.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "sac/errors.hpp"
#include "sac/nonlinearity.hpp"
#include "sac/spectral.hpp"

namespace sac {

/// Norms of one state that the timestep laws and the schemes consume, from a single
/// drift evaluation on the dealiasing grid.
template <typename Scalar>
struct StateDiagnostics {
    Scalar norm_l2;        ///< ||X||
    Scalar norm_sup;       ///< max |u| on the drift grid (oversample factor 4)
    Scalar norm_drift;     ///< ||F(X)||, quadrature of the full image
    Scalar norm_drift_projected;  ///< ||F^N(X)||
    Scalar l4_pow4;        ///< ||X||_{L^4}^4
    Scalar l6_pow6;        ///< ||X||_{L^6}^6
    Scalar inner_x_drift;  ///< <X, F(X)>
    SpectralField<Scalar> drift;  ///< F^N(X)
};

template <typename Scalar>
StateDiagnostics<Scalar> diagnose(const CubicDrift<Scalar>& drift, const SpectralField<Scalar>& x) {
    const auto img = evaluate_drift(drift, x);
    const auto u2 = img.state.values().array().square();
    const Scalar weight = Scalar(1) / Scalar(img.state.size() + 1);
    return StateDiagnostics<Scalar>{
        l2_norm(x),
        img.state.values().cwiseAbs().maxCoeff(),
        image_l2_norm(img),
        l2_norm(img.projected),
        u2.square().sum() * weight,
        (u2 * u2 * u2).sum() * weight,
        image_inner_product(img),
        img.projected,
    };
}

enum class TimestepFamily { AU1, AA1, AU2, AA2, AU3, AA3, AU4, AU5, AU6, Uniform };

inline const char* to_string(TimestepFamily f) {
    switch (f) {
        case TimestepFamily::AU1: return "au1";
        case TimestepFamily::AA1: return "aa1";
        case TimestepFamily::AU2: return "au2";
        case TimestepFamily::AA2: return "aa2";
        case TimestepFamily::AU3: return "au3";
        case TimestepFamily::AA3: return "aa3";
        case TimestepFamily::AU4: return "au4";
        case TimestepFamily::AU5: return "au5";
        case TimestepFamily::AU6: return "au6";
        case TimestepFamily::Uniform: return "uniform";
    }
    return "?";
}

inline std::optional<TimestepFamily> parse_timestep_family(std::string_view s) {
    for (auto f : {TimestepFamily::AU1, TimestepFamily::AA1, TimestepFamily::AU2, TimestepFamily::AA2,
                   TimestepFamily::AU3, TimestepFamily::AA3, TimestepFamily::AU4, TimestepFamily::AU5,
                   TimestepFamily::AU6, TimestepFamily::Uniform}) {
        if (s == to_string(f)) return f;
    }
    return std::nullopt;
}

/// Families of the form min{delta T, ...}.
constexpr bool is_min_capped(TimestepFamily f) {
    return f == TimestepFamily::AU1 || f == TimestepFamily::AA1 || f == TimestepFamily::AU4;
}

struct TimestepLaw {
    TimestepFamily family = TimestepFamily::AU1;
    double delta = 0.25;
    double phi = 1.0;
    double horizon = 1.0;
    // Low-bound parameters for the hybrid schemes.
    double zeta = 1.0;
    double xi = 10.0;
    double q0 = 1.0;
    double tau_min = 0.2;
    /// Feed ||F^N(X)|| instead of ||F(X)|| into the laws.
    bool norm_of_projected_drift = false;

    void validate() const {
        if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("timestep law needs delta in (0, 1]");
        if (!(phi > 0.0)) throw DomainError("timestep law needs phi > 0");
        if (!(horizon > 0.0)) throw DomainError("timestep law needs T > 0");
        if (!(tau_min > 0.0)) throw DomainError("timestep law needs tau_min > 0");
    }
};

/// Offset in the type-6 white-noise law (1/(||F|| + 3))^{4/3}.
inline constexpr double kType6Offset = 3.0;

namespace detail {

template <typename Scalar>
Scalar law_drift_norm(const TimestepLaw& law, const StateDiagnostics<Scalar>& d) {
    return law.norm_of_projected_drift ? d.norm_drift_projected : d.norm_drift;
}

template <typename Scalar>
Scalar ratio_type12(const TimestepLaw& law, const StateDiagnostics<Scalar>& d) {
    return std::pow(d.norm_l2 / (law_drift_norm(law, d) + Scalar(law.phi)), Scalar(4) / Scalar(3));
}

template <typename Scalar>
Scalar ratio_inverse_drift(const TimestepLaw& law, const StateDiagnostics<Scalar>& d, Scalar offset) {
    return std::pow(Scalar(1) / (law_drift_norm(law, d) + offset), Scalar(4) / Scalar(3));
}

template <typename Scalar>
Scalar lp_ratio_type12(const TimestepLaw& law, const StateDiagnostics<Scalar>& d) {
    return Scalar(2) * d.l4_pow4 / (d.l6_pow6 + Scalar(law.phi));
}

template <typename Scalar>
Scalar lp_ratio_type3(const TimestepLaw& law, const StateDiagnostics<Scalar>& d) {
    return d.norm_l2 * d.norm_l2 / (d.l6_pow6 + Scalar(law.phi));
}

}  // namespace detail

/// The unrefined law tau(X) underlying types 1-2 (the quantity both the min-capped and the
/// delta-scaled variants are built from).
template <typename Scalar>
Scalar unrefined_timestep(const TimestepLaw& law, const StateDiagnostics<Scalar>& d) {
    using namespace detail;
    switch (law.family) {
        case TimestepFamily::AU1:
        case TimestepFamily::AU2: return ratio_type12(law, d);
        case TimestepFamily::AA1:
        case TimestepFamily::AA2: return std::min(lp_ratio_type12(law, d), ratio_type12(law, d));
        case TimestepFamily::AU3: return ratio_inverse_drift(law, d, Scalar(law.phi));
        case TimestepFamily::AA3: return std::min(lp_ratio_type3(law, d), ratio_inverse_drift(law, d, Scalar(law.phi)));
        case TimestepFamily::AU4:
        case TimestepFamily::AU5: return ratio_inverse_drift(law, d, Scalar(law.phi));
        case TimestepFamily::AU6: return ratio_inverse_drift(law, d, Scalar(kType6Offset));
        case TimestepFamily::Uniform: return Scalar(law.horizon);
    }
    return Scalar(0);
}

template <typename Scalar>
Scalar timestep_from(const TimestepLaw& law, const StateDiagnostics<Scalar>& d) {
    const Scalar cap = Scalar(law.delta * law.horizon);
    const Scalar delta = Scalar(law.delta);
    if (law.family == TimestepFamily::Uniform) return cap;
    const Scalar base = unrefined_timestep(law, d);
    return is_min_capped(law.family) ? std::min(cap, base) : delta * base;
}

/// tau^delta(X) for the law's family.
template <typename Scalar>
Scalar compute_timestep(const TimestepLaw& law, const SpectralField<Scalar>& x, const CubicDrift<Scalar>& drift) {
    return timestep_from(law, diagnose(drift, x));
}

/// Pathwise bound delta^{-1} T (tau_min^{-1} + T^{-1}) on the number of steps of a law
/// whose steps never fall below delta * min{T, tau_min}.
inline double step_count_bound_uniform(double delta, double horizon, double tau_min) {
    return horizon / delta * (1.0 / tau_min + 1.0 / horizon);
}

/// Pathwise bound delta^{-1} T sup_m (zeta ||X_m||^{q0} + xi + T^{-1}).
inline double step_count_bound_adaptive(double delta, double horizon, double zeta, double xi, double q0,
                                        double sup_norm_l2) {
    return horizon / delta * (zeta * std::pow(sup_norm_l2, q0) + xi + 1.0 / horizon);
}

}  // namespace sac

#endif  // SAC_TIMESTEP_HPP
