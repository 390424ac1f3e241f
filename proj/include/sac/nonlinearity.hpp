#ifndef SAC_NONLINEARITY_HPP
#define SAC_NONLINEARITY_HPP

// Cubic Nemytskii drift (F u)(x) = f(u(x)), f(u) = a3 u^3 + a2 u^2 + a1 u + a0.
//
// u^3 and u of an N-mode field are sine series with at most 3N modes, so a grid
// with M >= 3N + 1 interior points projects them without aliasing. u^2 and the
// constant have infinite sine expansions but finite cosine ones, and are
// projected through those. All functionals use dealias_grid_size(N) points.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sac/errors.hpp"
#include "sac/spectral.hpp"

namespace sac {

template <typename Scalar>
class CubicDrift {
public:
    CubicDrift(Scalar a3, Scalar a2, Scalar a1, Scalar a0) : a3_(a3), a2_(a2), a1_(a1), a0_(a0) {
        if (!(a3 < Scalar(0))) {
            throw DomainError("CubicDrift needs a3 < 0, got " + std::to_string(static_cast<double>(a3)));
        }
    }

    /// f(u) = u - u^3.
    static CubicDrift allen_cahn() { return CubicDrift(Scalar(-1), Scalar(0), Scalar(1), Scalar(0)); }

    Scalar a3() const noexcept { return a3_; }
    Scalar a2() const noexcept { return a2_; }
    Scalar a1() const noexcept { return a1_; }
    Scalar a0() const noexcept { return a0_; }

    Scalar operator()(Scalar u) const noexcept { return ((a3_ * u + a2_) * u + a1_) * u + a0_; }

    template <typename Derived>
    auto apply(const Eigen::ArrayBase<Derived>& u) const {
        return ((a3_ * u + a2_) * u + a1_) * u + a0_;
    }

    /// sup_u f'(u) = a1 + a2^2 / (3 |a3|), the one-sided Lipschitz constant L0.
    Scalar one_sided_lipschitz() const noexcept { return a1_ + a2_ * a2_ / (Scalar(3) * -a3_); }

private:
    Scalar a3_, a2_, a1_, a0_;
};

/// Grid samples of X and f(X) on one quadrature grid, plus the projection P^N f(X).
/// f(x_0) = f(x_{M+1}) = a0 at the boundary; those samples are implied, not stored.
template <typename Scalar>
struct DriftImage {
    GridField<Scalar> state;
    GridField<Scalar> image;
    SpectralField<Scalar> projected;
    Scalar boundary_value;
};

namespace detail {

// P^N (a2 u^2 + a0) from the exact cosine series of u^2 (modes 0..2N). Each cosine mode
// projects analytically: <cos(m pi x), e_i> = sqrt(2) i (1 - (-1)^{i+m}) / (pi (i^2 - m^2)).
template <typename Scalar>
Vector<Scalar> even_part_projection(Scalar a2, Scalar a0, const GridField<Scalar>& state, Index modes) {
    const Index m_grid = state.size();
    const Index top = std::min<Index>(2 * modes, m_grid + 1);
    Vector<Scalar> cos_coeffs = Vector<Scalar>::Zero(top + 1);
    if (a2 != Scalar(0)) {
        const Vector<Scalar> sums = cosine_sums<Scalar>(state.values().array().square().matrix(), m_grid);
        const Scalar scale = a2 / Scalar(m_grid + 1);
        cos_coeffs(0) = sums(0) * scale;
        for (Index m = 1; m <= top; ++m) cos_coeffs(m) = Scalar(2) * sums(m) * scale;
    }
    cos_coeffs(0) += a0;

    const Scalar pi = std::numbers::pi_v<Scalar>;
    Vector<Scalar> out = Vector<Scalar>::Zero(modes);
    for (Index i = 1; i <= modes; ++i) {
        Scalar acc(0);
        for (Index m = (i + 1) % 2; m <= top; m += 2) {
            acc += cos_coeffs(m) * Scalar(2 * i) / (pi * Scalar(i * i - m * m));
        }
        out(i - 1) = std::numbers::sqrt2_v<Scalar> * acc;
    }
    return out;
}

}  // namespace detail

/// The odd part a3 u^3 + a1 u is resolved exactly by the sine transform when M >= 3N + 1;
/// the even part a2 u^2 + a0 goes through its cosine expansion.
template <typename Scalar>
DriftImage<Scalar> evaluate_drift(const CubicDrift<Scalar>& drift, const SpectralField<Scalar>& x,
                                  Index grid_size) {
    if (!x.coeffs().allFinite()) throw NonFiniteError("drift evaluated on a non-finite field");
    GridField<Scalar> state = inverse_transform(x, grid_size);
    const auto u = state.values().array();
    GridField<Scalar> image(drift.apply(u).matrix());
    if (!image.values().allFinite()) throw NonFiniteError("drift image overflowed");

    const bool has_even_part = drift.a2() != Scalar(0) || drift.a0() != Scalar(0);
    Vector<Scalar> odd = has_even_part ? Vector<Scalar>(((drift.a3() * u.square() + drift.a1()) * u).matrix())
                                       : image.values();
    Vector<Scalar> coeffs = forward_transform(GridField<Scalar>(std::move(odd)), x.modes()).coeffs();
    if (has_even_part) coeffs += detail::even_part_projection(drift.a2(), drift.a0(), state, x.modes());
    return {std::move(state), std::move(image), SpectralField<Scalar>(std::move(coeffs)), drift.a0()};
}

template <typename Scalar>
DriftImage<Scalar> evaluate_drift(const CubicDrift<Scalar>& drift, const SpectralField<Scalar>& x) {
    return evaluate_drift(drift, x, dealias_grid_size(x.modes()));
}

/// ||f(u)|| by trapezoid quadrature on the drift grid (boundary samples equal a0).
template <typename Scalar>
Scalar image_l2_norm(const DriftImage<Scalar>& img) {
    const Scalar interior = img.image.values().squaredNorm();
    const Scalar boundary = img.boundary_value * img.boundary_value;
    return std::sqrt((interior + boundary) / Scalar(img.image.size() + 1));
}

/// <u, f(u)> by quadrature on the drift grid (u vanishes at the boundary).
template <typename Scalar>
Scalar image_inner_product(const DriftImage<Scalar>& img) {
    return img.state.values().dot(img.image.values()) / Scalar(img.state.size() + 1);
}

/// F^N(X) = P^N F(X).
template <typename Scalar>
SpectralField<Scalar> apply_drift(const CubicDrift<Scalar>& drift, const SpectralField<Scalar>& x) {
    return evaluate_drift(drift, x).projected;
}

/// ||F(X)||: quadrature of the full image, or ||P^N F(X)|| when `projected` is set.
template <typename Scalar>
Scalar drift_l2_norm(const CubicDrift<Scalar>& drift, const SpectralField<Scalar>& x, bool projected = false) {
    const auto img = evaluate_drift(drift, x);
    return projected ? l2_norm(img.projected) : image_l2_norm(img);
}

/// <X, F(X)> by grid quadrature.
template <typename Scalar>
Scalar inner_product_x_f(const CubicDrift<Scalar>& drift, const SpectralField<Scalar>& x) {
    return image_inner_product(evaluate_drift(drift, x));
}

}  // namespace sac

#endif  // SAC_NONLINEARITY_HPP
