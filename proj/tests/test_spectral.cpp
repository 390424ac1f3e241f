#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sac/spectral.hpp"

using sac::GridField;
using sac::SpectralField;
using Field = SpectralField<double>;
using Grid = GridField<double>;
using Vec = sac::Vector<double>;

namespace {

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

TEST_CASE("forward transform of e_1 samples recovers the unit coefficient") {
    Vec values(7);
    for (int k = 1; k <= 7; ++k) values(k - 1) = std::sqrt(2.0) * std::sin(std::numbers::pi * k / 8.0);
    const Field a = sac::forward_transform(Grid(values), 4);
    CHECK(a(1) == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 2; i <= 4; ++i) CHECK(std::abs(a(i)) < 1e-12);
}

TEST_CASE("forward transform of the zero grid is zero") {
    const Field a = sac::forward_transform(Grid(Vec::Zero(9)), 5);
    CHECK(a.coeffs().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forward transform of 2e_1 + 3e_3 matches direct summation") {
    const auto samples = oracle::sine_synthesis({2.0, 0.0, 3.0}, 15);
    const auto expected = oracle::sine_analysis(samples, 4);
    const Field a = sac::forward_transform(Grid(to_vec(samples)), 4);
    for (int i = 0; i < 4; ++i) CHECK(a.coeffs()(i) == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(a(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a(3) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(a(2)) < 1e-12);
    CHECK(std::abs(a(4)) < 1e-12);
}

TEST_CASE("transforms reject grids coarser than the mode count") {
    CHECK_THROWS_AS(sac::forward_transform(Grid(Vec::Zero(3)), 4), sac::DimensionError);
    CHECK_THROWS_AS(sac::inverse_transform(Field::zero(5), 4), sac::DimensionError);
}

TEST_CASE("inverse transform of e_1 on three points") {
    const Grid g = sac::inverse_transform(Field::basis(1, 1), 3);
    CHECK(g.values()(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.values()(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(g.values()(2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sac::inverse_transform(Field::zero(4), 8).values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("synthesis and analysis agree with direct sums and invert each other") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        const std::size_t m = n + rng() % 60;
        const auto c = oracle::random_coeffs(rng, n, 3.0);
        const Field field(to_vec(c));
        const Grid g = sac::inverse_transform(field, static_cast<Eigen::Index>(m));
        const auto direct = oracle::sine_synthesis(c, m);
        for (std::size_t k = 0; k < m; ++k) CHECK(g.values()(k) == doctest::Approx(direct[k]).epsilon(1e-12).scale(1.0));

        const Field back = sac::forward_transform(g, static_cast<Eigen::Index>(n));
        CHECK((back.coeffs() - field.coeffs()).cwiseAbs().maxCoeff() < 1e-12);

        const Grid again = sac::inverse_transform(back, static_cast<Eigen::Index>(m));
        CHECK((again.values() - g.values()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("semigroup examples") {
    const Field e1 = Field::basis(4, 1);
    CHECK(sac::apply_semigroup(e1, 0.0).coeffs() == e1.coeffs());
    const Field s = sac::apply_semigroup(e1, 1.0 / (std::numbers::pi * std::numbers::pi));
    CHECK(s(1) == doctest::Approx(0.3678794411714423).epsilon(1e-14));
    CHECK(s(2) == 0.0);

    Vec c = Vec::Ones(32);
    const Field decayed = sac::apply_semigroup(Field(c), 10.0);
    // exp(-lambda_32 * 10) underflows; the vectorized exp may leave a subnormal.
    CHECK(std::abs(decayed(32)) <= 1e-300);
    CHECK_THROWS_AS(sac::apply_semigroup(e1, -1e-3), sac::DomainError);
}

TEST_CASE("fractional powers") {
    const Field e1 = Field::basis(3, 1);
    CHECK(sac::apply_fractional_power(e1, 0.0).coeffs() == e1.coeffs());
    CHECK(sac::apply_fractional_power(e1, 2.0)(1) == doctest::Approx(std::numbers::pi * std::numbers::pi));
    std::mt19937_64 rng(3);
    const Field f(to_vec(oracle::random_coeffs(rng, 50)));
    const Field round = sac::apply_fractional_power(sac::apply_fractional_power(f, -2.0), 2.0);
    CHECK((round.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("norm examples") {
    Vec c = Vec::Zero(4);
    c << 3.0, 4.0, 0.0, 0.0;
    CHECK(sac::l2_norm(Field(c)) == doctest::Approx(5.0));
    CHECK(sac::sup_norm(Field::basis(1, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(sac::sup_norm(Field::basis(8, 1)) <= std::sqrt(2.0) + 1e-15);
    CHECK(sac::sup_norm(Field::basis(8, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sac::sobolev_norm(Field::basis(5, 1), 1.0) == doctest::Approx(std::numbers::pi));
    CHECK_THROWS_AS(sac::lp_norm(Field::basis(4, 1), 3, 8), sac::UnsupportedNormError);
    CHECK_THROWS_AS(sac::lp_norm(Field::basis(4, 1), 4, 7), sac::DimensionError);
}

TEST_CASE("lp norms match pointwise quadrature") {
    // ||e_1||_{L^4}^4 = 4 int sin^4 = 3/2 and ||e_1||_{L^6}^6 = 8 int sin^6 = 5/2.
    const Field e1 = Field::basis(8, 1);
    CHECK(std::pow(sac::lp_norm(e1, 4, 31), 4) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(std::pow(sac::lp_norm(e1, 6, 31), 6) == doctest::Approx(2.5).epsilon(1e-12));

    std::mt19937_64 rng(11);
    const auto c = oracle::random_coeffs(rng, 6, 2.0);
    const double l4 = oracle::integrate01([&](double x) { return std::pow(oracle::evaluate(c, x), 4); });
    CHECK(std::pow(sac::lp_norm(Field(to_vec(c)), 4, 23), 4) == doctest::Approx(l4).epsilon(1e-9));
}

TEST_CASE("Parseval holds on random band-limited fields") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 64;
        const Field f(to_vec(oracle::random_coeffs(rng, n, 5.0)));
        const double l2 = sac::l2_norm(f);
        const double quad = sac::lp_norm(f, 2, static_cast<Eigen::Index>(2 * n));
        CHECK(std::abs(l2 - quad) <= 1e-10 * l2);
    }
}

TEST_CASE("semigroup property and contraction") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> time(0.0, 0.05);
    for (int trial = 0; trial < 50; ++trial) {
        const Field f(to_vec(oracle::random_coeffs(rng, 32, 2.0)));
        const double t = time(rng), s = time(rng);
        const Field ts = sac::apply_semigroup(sac::apply_semigroup(f, t), s);
        const Field sum = sac::apply_semigroup(f, t + s);
        for (int i = 1; i <= 32; ++i) CHECK(std::abs(ts(i) - sum(i)) <= 1e-12 * std::abs(sum(i)) + 1e-300);
        const Field st = sac::apply_semigroup(f, t);
        CHECK(sac::l2_norm(st) <= sac::l2_norm(f));
        CHECK(sac::sobolev_norm(st, 1.0) <= sac::sobolev_norm(f, 1.0));
        CHECK(sac::sup_norm(st) <= sac::sup_norm(f) + 1e-12);
    }
}

TEST_CASE("semigroup smoothing ratio stays bounded") {
    // sup_x |A^rho S(t) u| <= sqrt(2) (sum_i lambda_i^{2 rho} e^{-2 lambda_i t})^{1/2} ||u|| by
    // Cauchy-Schwarz; maximizing that bound over the sampled t gives a constant C(rho).
    std::mt19937_64 rng(99);
    const int modes = 256;
    for (double rho : {0.25, 0.5}) {
        double bound = 0.0;
        for (double t : {1e-3, 1e-2, 1e-1}) {
            long double acc = 0.0L;
            for (int i = 1; i <= modes; ++i) {
                const long double lam = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> * i * i;
                acc += std::pow(lam, 2 * rho) * std::exp(-2 * lam * t);
            }
            bound = std::max(bound, static_cast<double>(std::sqrt(2.0L * acc)) /
                                        (std::pow(t, -rho) + std::pow(t, -rho - 0.5)));
        }
        double worst = 0.0;
        for (int trial = 0; trial < 40; ++trial) {
            Vec c = to_vec(oracle::random_coeffs(rng, modes));
            c /= c.norm();
            for (double t : {1e-3, 1e-2, 1e-1}) {
                const Field smoothed = sac::apply_fractional_power(sac::apply_semigroup(Field(c), t), 2.0 * rho);
                const double ratio = sac::sup_norm(smoothed) / (std::pow(t, -rho) + std::pow(t, -rho - 0.5));
                worst = std::max(worst, ratio);
            }
        }
        CHECK(std::isfinite(worst));
        CHECK(worst <= bound);
    }
}
