#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sac/nonlinearity.hpp"

using Field = sac::SpectralField<double>;
using Drift = sac::CubicDrift<double>;
using Vec = sac::Vector<double>;

namespace {

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

double u_minus_u3(double u) { return u - u * u * u; }

}  // namespace

TEST_CASE("drift construction enforces a3 < 0") {
    CHECK_THROWS_AS(Drift(1.0, 0.0, 1.0, 0.0), sac::DomainError);
    CHECK_THROWS_AS(Drift(0.0, 0.0, 1.0, 0.0), sac::DomainError);
    CHECK_NOTHROW(Drift(-2.0, 1.0, 0.0, 0.0));
}

TEST_CASE("Allen-Cahn drift of e_1 follows the sin^3 identity") {
    // u = sqrt2 sin(pi x): u^3 = (3/2) e_1 - (1/2) e_3, so F(u) = -1/2 e_1 + 1/2 e_3.
    const Field f = sac::apply_drift(Drift::allen_cahn(), Field::basis(8, 1));
    CHECK(f(1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(f(3) == doctest::Approx(0.5).epsilon(1e-12));
    for (int i : {2, 4, 5, 6, 7, 8}) CHECK(std::abs(f(i)) < 1e-12);
}

TEST_CASE("single-mode drift matches the closed-form expansion for every mode") {
    // (c e_k)^3 = (3/2) c^3 e_k - (1/2) c^3 e_{3k}.
    const int modes = 24;
    for (int k = 1; k <= modes; ++k) {
        const double c = 0.7 + 0.1 * k;
        const Field f = sac::apply_drift(Drift::allen_cahn(), Field::basis(modes, k, c));
        for (int i = 1; i <= modes; ++i) {
            double expected = 0.0;
            if (i == k) expected = c - 1.5 * c * c * c;
            if (i == 3 * k) expected += 0.5 * c * c * c;
            CHECK(std::abs(f(i) - expected) < 1e-12 * std::max(1.0, c * c * c));
        }
    }
}

TEST_CASE("zero field with zero constant term has zero drift") {
    const Field f = sac::apply_drift(Drift::allen_cahn(), Field::zero(16));
    CHECK(f.coeffs().cwiseAbs().maxCoeff() == 0.0);
    CHECK(sac::drift_l2_norm(Drift::allen_cahn(), Field::zero(16)) == 0.0);
    CHECK(sac::inner_product_x_f(Drift::allen_cahn(), Field::zero(16)) == 0.0);
}

TEST_CASE("constant drift projects onto odd modes") {
    // <2, e_i> = 2 sqrt2 (1 - (-1)^i) / (i pi).
    const Drift constant(-1.0, 0.0, 0.0, 2.0);
    const Field f = sac::apply_drift(constant, Field::zero(16));
    for (int i = 1; i <= 16; ++i) {
        const double expected = 2.0 * std::sqrt(2.0) * (1.0 - std::pow(-1.0, i)) / (i * std::numbers::pi);
        CHECK(std::abs(f(i) - expected) < 1e-12);
    }
    CHECK(sac::drift_l2_norm(constant, Field::zero(16)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("quadratic term projects exactly") {
    // Oracle: direct quadrature of <a2 u^2 + a0 + a3 u^3 + a1 u, e_i>.
    const Drift drift(-1.5, 0.8, 0.3, -0.4);
    std::mt19937_64 rng(17);
    const auto c = oracle::random_coeffs(rng, 5, 1.0);
    const Field f = sac::apply_drift(drift, Field(to_vec(c)));
    for (int i = 1; i <= 5; ++i) {
        const double expected = oracle::integrate01([&](double x) {
            const double u = oracle::evaluate(c, x);
            return drift(u) * std::sqrt(2.0) * std::sin(i * std::numbers::pi * x);
        });
        CHECK(f(i) == doctest::Approx(expected).epsilon(1e-9).scale(1e-9));
    }
}

TEST_CASE("drift norm and inner product of e_1 against quadrature") {
    const auto u = [](double x) { return std::sqrt(2.0) * std::sin(std::numbers::pi * x); };
    const double norm2 = oracle::integrate01([&](double x) { return std::pow(u_minus_u3(u(x)), 2); });
    const double inner = oracle::integrate01([&](double x) { return u(x) * u_minus_u3(u(x)); });
    const Field e1 = Field::basis(8, 1);
    CHECK(sac::drift_l2_norm(Drift::allen_cahn(), e1) == doctest::Approx(std::sqrt(norm2)).epsilon(1e-10));
    CHECK(sac::inner_product_x_f(Drift::allen_cahn(), e1) == doctest::Approx(inner).epsilon(1e-10));
    // ||u||^2 - ||u||_{L^4}^4 = 1 - 3/2.
    CHECK(inner == doctest::Approx(-0.5).epsilon(1e-10));
    // The full image of a band-limited field has the same norm as its projection once N >= 3.
    CHECK(sac::drift_l2_norm(Drift::allen_cahn(), e1, true) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("pure cubic drift has non-positive inner product") {
    const Drift cubic(-1.0, 0.0, 0.0, 0.0);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const Field x(to_vec(oracle::random_coeffs(rng, 32, 2.0)));
        const double ip = sac::inner_product_x_f(cubic, x);
        CHECK(ip <= 0.0);
        CHECK(ip == doctest::Approx(-std::pow(sac::lp_norm(x, 4, 127), 4)).epsilon(1e-10));
    }
}

TEST_CASE("one-sided Lipschitz and polynomial growth on random pairs") {
    const Drift drift = Drift::allen_cahn();
    CHECK(drift.one_sided_lipschitz() == 1.0);
    std::mt19937_64 rng(1234);
    double worst_osl = -1e300;
    double worst_growth = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 4 + rng() % 29;
        Vec a = to_vec(oracle::random_coeffs(rng, n, 2.0));
        Vec b = to_vec(oracle::random_coeffs(rng, n, 2.0));
        Field x(a), y(b);
        // Rescale into the ball sup-norm <= 5.
        if (const double s = sac::sup_norm(x); s > 5.0) x = (5.0 / s) * x;
        if (const double s = sac::sup_norm(y); s > 5.0) y = (5.0 / s) * y;
        const Field diff = x - y;
        const double d2 = std::pow(sac::l2_norm(diff), 2);
        if (d2 == 0.0) continue;
        const Field fd = sac::apply_drift(drift, x) - sac::apply_drift(drift, y);
        worst_osl = std::max(worst_osl, diff.coeffs().dot(fd.coeffs()) / d2);

        const auto ix = sac::evaluate_drift(drift, x);
        const auto iy = sac::evaluate_drift(drift, y);
        const double image_diff = std::sqrt((ix.image.values() - iy.image.values()).squaredNorm() /
                                            static_cast<double>(ix.image.size() + 1));
        const double ex = sac::sup_norm(x), ey = sac::sup_norm(y);
        worst_growth = std::max(worst_growth, image_diff / ((1.0 + ex * ex + ey * ey) * std::sqrt(d2)));
    }
    CHECK(worst_osl <= drift.one_sided_lipschitz() + 1e-9);
    // |f(u) - f(v)| <= (1 + 1.5 (u^2 + v^2)) |u - v| <= 1.5 (1 + u^2 + v^2) |u - v|.
    CHECK(worst_growth <= 1.5 + 1e-9);
}

TEST_CASE("aliased grid breaks the trig identity") {
    const auto img = sac::evaluate_drift(Drift::allen_cahn(), Field::basis(4, 2), 4);
    // On M = N points the 3k = 6 mode folds back onto the retained modes.
    const double err = std::abs(img.projected(2) - (1.0 - 1.5));
    const double fold = std::abs(img.projected(4));
    CHECK(std::max(err, fold) > 1e-3);
}

TEST_CASE("non-finite input is a hard error") {
    CHECK_THROWS_AS(Field(Vec::Constant(3, std::nan(""))), sac::NonFiniteError);
}
