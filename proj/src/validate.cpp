#include "sac/validate.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace sac {

namespace {

class Suite {
public:
    explicit Suite(std::string name) { result_.name = std::move(name); }

    void check(bool ok, const std::function<std::string()>& describe) {
        ++result_.cases;
        if (!ok && result_.passed) {
            result_.passed = false;
            result_.first_failure = describe();
        }
    }

    SuiteResult finish() && { return std::move(result_); }
    SuiteResult fail(const std::string& why) && {
        result_.passed = false;
        if (result_.first_failure.empty()) result_.first_failure = why;
        return std::move(result_);
    }

private:
    SuiteResult result_;
};

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

SpectralField<double> random_field(std::mt19937_64& rng, Index modes, double scale) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector<double> c(modes);
    for (Index i = 0; i < modes; ++i) c(i) = scale * g(rng) / static_cast<double>(i + 1);
    return SpectralField<double>(c);
}

CubicDrift<double> chosen_drift(const ValidateOptions& o) {
    return o.drift ? o.drift->make() : CubicDrift<double>::allen_cahn();
}

SuiteResult parseval(const ValidateOptions& o) {
    Suite s("parseval");
    std::mt19937_64 rng(o.seed);
    for (int trial = 0; trial < 1000; ++trial) {
        const Index n = 1 + static_cast<Index>(rng() % 64);
        const auto f = random_field(rng, n, 5.0);
        const double a = l2_norm(f), b = lp_norm(f, 2, 2 * n);
        s.check(std::abs(a - b) <= 1e-10 * a, [&] { return "N = " + std::to_string(n) + ": " + num(a) + " vs " + num(b); });
    }
    return std::move(s).finish();
}

SuiteResult coupling(const ValidateOptions& o) {
    Suite s("coupling");
    const NoiseSpec spec{NoiseKind::TraceClass, 64, 1.0, 1.0};
    NoiseStream stream(o.seed, 0, 0);
    std::mt19937_64 rng(o.seed + 1);
    std::uniform_real_distribution<double> dt(1e-4, 0.25);
    for (int step = 0; step < 500; ++step) {
        const auto inc = sample_refined_increment(stream, spec, dt(rng), 3);
        s.check(coupling_exact(inc), [&] { return "step " + std::to_string(step); });
    }
    return std::move(s).finish();
}

SuiteResult drift_oracle(const ValidateOptions& o) {
    Suite s("drift-oracle");
    try {
        const CubicDrift<double> drift = chosen_drift(o);
        const bool odd = drift.a2() == 0.0 && drift.a0() == 0.0;
        const Index modes = 16;
        const Index grid = o.drift_grid.value_or(dealias_grid_size(modes));
        // (c e_k)^3 = (3/2) c^3 e_k - (1/2) c^3 e_{3k}; checked for odd drifts a3 u^3 + a1 u.
        for (Index k = 1; k <= modes; ++k) {
            const double c = 0.5 + 0.05 * static_cast<double>(k);
            const auto img = evaluate_drift(drift, SpectralField<double>::basis(modes, k, c), grid);
            for (Index i = 1; i <= modes; ++i) {
                double expected = 0.0;
                if (i == k) expected = drift.a1() * c + 1.5 * drift.a3() * c * c * c;
                if (i == 3 * k) expected -= 0.5 * drift.a3() * c * c * c;
                const double got = img.projected(i);
                s.check(!odd || std::abs(got - expected) < 1e-12, [&] {
                    return "mode " + std::to_string(k) + ", coefficient " + std::to_string(i) + ": " + num(got) +
                           " vs " + num(expected);
                });
            }
        }
    } catch (const DomainError& e) {
        return std::move(s).fail(std::string("drift construction: ") + e.what());
    }
    return std::move(s).finish();
}

SuiteResult one_sided_lipschitz(const ValidateOptions& o) {
    Suite s("one-sided-lipschitz");
    try {
        const CubicDrift<double> drift = chosen_drift(o);
        const double bound = drift.one_sided_lipschitz();
        std::mt19937_64 rng(o.seed + 2);
        for (int trial = 0; trial < 1000; ++trial) {
            const Index n = 4 + static_cast<Index>(rng() % 29);
            auto x = random_field(rng, n, 2.0), y = random_field(rng, n, 2.0);
            if (const double m = sup_norm(x); m > 5.0) x = (5.0 / m) * x;
            if (const double m = sup_norm(y); m > 5.0) y = (5.0 / m) * y;
            const auto d = x - y;
            const double d2 = d.coeffs().squaredNorm();
            if (d2 == 0.0) continue;
            const double ratio = d.coeffs().dot((apply_drift(drift, x) - apply_drift(drift, y)).coeffs()) / d2;
            s.check(ratio <= bound + 1e-9, [&] { return "ratio " + num(ratio) + " exceeds " + num(bound); });
        }
    } catch (const DomainError& e) {
        return std::move(s).fail(std::string("drift construction: ") + e.what());
    }
    return std::move(s).finish();
}

SuiteResult smoothing_ratio(const ValidateOptions& o) {
    Suite s("smoothing-ratio");
    std::mt19937_64 rng(o.seed + 3);
    const Index modes = 256;
    const double times[] = {1e-3, 1e-2, 1e-1};
    for (double rho : {0.25, 0.5}) {
        // Cauchy-Schwarz: sup |A^rho S(t) u| <= sqrt(2 sum lambda^{2 rho} e^{-2 lambda t}) ||u||.
        double bound = 0.0;
        for (double t : times) {
            long double acc = 0.0L;
            for (Index i = 1; i <= modes; ++i) {
                const long double lam = OperatorSpectrum<double>::eigenvalue(i);
                acc += std::pow(lam, 2 * rho) * std::exp(-2 * lam * t);
            }
            bound = std::max(bound, static_cast<double>(std::sqrt(2.0L * acc)) /
                                        (std::pow(t, -rho) + std::pow(t, -rho - 0.5)));
        }
        for (int trial = 0; trial < 40; ++trial) {
            auto u = random_field(rng, modes, 1.0);
            u = (1.0 / l2_norm(u)) * u;
            for (double t : times) {
                const double ratio = sup_norm(apply_fractional_power(apply_semigroup(u, t), 2.0 * rho)) /
                                     (std::pow(t, -rho) + std::pow(t, -rho - 0.5));
                s.check(std::isfinite(ratio) && ratio <= bound,
                        [&] { return "rho " + num(rho) + ", t " + num(t) + ": ratio " + num(ratio); });
            }
        }
    }
    return std::move(s).finish();
}

SuiteResult sandwich(const ValidateOptions& o) {
    Suite s("sandwich");
    try {
        const CubicDrift<double> drift = chosen_drift(o);
        std::mt19937_64 rng(o.seed + 4);
        for (int trial = 0; trial < 200; ++trial) {
            const auto x = random_field(rng, 24, 0.2 + 0.5 * (trial % 7));
            const auto d = diagnose(drift, x);
            for (double delta : {0.25, 0.125, 1.0 / 128}) {
                for (auto [capped, scaled] : {std::pair{TimestepFamily::AU1, TimestepFamily::AU2},
                                              std::pair{TimestepFamily::AA1, TimestepFamily::AA2},
                                              std::pair{TimestepFamily::AU4, TimestepFamily::AU5}}) {
                    TimestepLaw lc, ls;
                    lc.family = capped;
                    ls.family = scaled;
                    lc.delta = ls.delta = delta;
                    const double tau = unrefined_timestep(lc, d);
                    const double lo = delta * std::min(lc.horizon, tau), hi = std::min(delta * lc.horizon, tau);
                    for (const auto& law : {lc, ls}) {
                        const double v = timestep_from(law, d);
                        s.check(v >= lo && v <= hi, [&] {
                            return std::string(to_string(law.family)) + ": " + num(v) + " outside [" + num(lo) + ", " +
                                   num(hi) + "]";
                        });
                    }
                }
            }
        }
    } catch (const DomainError& e) {
        return std::move(s).fail(std::string("drift construction: ") + e.what());
    }
    return std::move(s).finish();
}

}  // namespace

std::vector<SuiteResult> run_validation(const ValidateOptions& options) {
    return {parseval(options),        coupling(options),        drift_oracle(options),
            one_sided_lipschitz(options), smoothing_ratio(options), sandwich(options)};
}

}  // namespace sac
