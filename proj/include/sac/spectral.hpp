#ifndef SAC_SPECTRAL_HPP
#define SAC_SPECTRAL_HPP

// Sine-basis fields on [0, 1] with homogeneous Dirichlet boundary.
//
// A SpectralField holds the coefficients a_1..a_N of
//     u(x) = sum_i a_i e_i(x),   e_i(x) = sqrt(2) sin(i pi x),
// and a GridField holds samples of u at the interior points x_k = k / (M + 1),
// k = 1..M. The Dirichlet operator A is diagonal in this basis with eigenvalues
// lambda_i = pi^2 i^2, so S(t) = exp(-tA) and A^{gamma/2} act mode by mode.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "sac/errors.hpp"

namespace sac {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

template <typename Scalar>
class SpectralField {
public:
    using Coefficients = Vector<Scalar>;

    explicit SpectralField(Coefficients coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.size() < 1) {
            throw DimensionError("SpectralField needs at least one mode");
        }
        if (!coeffs_.allFinite()) {
            throw NonFiniteError("SpectralField coefficients must be finite");
        }
    }

    static SpectralField zero(Index modes) {
        if (modes < 1) throw DimensionError("SpectralField needs at least one mode");
        return SpectralField(Coefficients::Zero(modes));
    }

    /// Unit mass on mode `mode` (1-based), scaled by `amplitude`.
    static SpectralField basis(Index modes, Index mode, Scalar amplitude = Scalar(1)) {
        if (mode < 1 || mode > modes) throw DimensionError("basis mode out of range");
        Coefficients c = Coefficients::Zero(modes);
        c(mode - 1) = amplitude;
        return SpectralField(std::move(c));
    }

    Index modes() const noexcept { return coeffs_.size(); }
    const Coefficients& coeffs() const noexcept { return coeffs_; }

    /// 1-based access to a_i.
    Scalar operator()(Index mode) const { return coeffs_(mode - 1); }

    /// Truncate (P^N) or zero-pad to `modes` coefficients.
    SpectralField resized(Index modes) const {
        if (modes < 1) throw DimensionError("SpectralField needs at least one mode");
        Coefficients c = Coefficients::Zero(modes);
        const Index common = std::min(modes, coeffs_.size());
        c.head(common) = coeffs_.head(common);
        return SpectralField(std::move(c));
    }

    friend SpectralField operator+(const SpectralField& a, const SpectralField& b) {
        require_same_modes(a, b);
        return SpectralField(a.coeffs_ + b.coeffs_);
    }
    friend SpectralField operator-(const SpectralField& a, const SpectralField& b) {
        require_same_modes(a, b);
        return SpectralField(a.coeffs_ - b.coeffs_);
    }
    friend SpectralField operator*(Scalar s, const SpectralField& a) { return SpectralField(s * a.coeffs_); }

private:
    static void require_same_modes(const SpectralField& a, const SpectralField& b) {
        if (a.modes() != b.modes()) throw DimensionError("mode count mismatch");
    }

    Coefficients coeffs_;
};

template <typename Scalar>
class GridField {
public:
    using Values = Vector<Scalar>;

    explicit GridField(Values values) : values_(std::move(values)) {
        if (values_.size() < 1) throw DimensionError("GridField needs at least one interior point");
    }

    Index size() const noexcept { return values_.size(); }
    const Values& values() const noexcept { return values_; }

    /// Interior node x_k = k / (M + 1), k = 1..M.
    Scalar node(Index k) const { return Scalar(k) / Scalar(values_.size() + 1); }

private:
    Values values_;
};

/// Eigenvalues lambda_i = pi^2 i^2 of the Dirichlet operator A.
template <typename Scalar>
class OperatorSpectrum {
public:
    static Scalar eigenvalue(Index mode) {
        const Scalar i = Scalar(mode);
        return std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar> * i * i;
    }

    static Vector<Scalar> eigenvalues(Index modes) {
        Vector<Scalar> lambda(modes);
        for (Index i = 0; i < modes; ++i) lambda(i) = eigenvalue(i + 1);
        return lambda;
    }
};

namespace detail {

// S_j = sum_{k=1}^{M} v_k sin(pi j k / (M + 1)) for j = 1..M, where v has length <= M and
// is zero-padded. Evaluated through a real FFT of the odd extension of length 2(M + 1).
template <typename Scalar>
Vector<Scalar> sine_sums(const Vector<Scalar>& v, Index grid_size) {
    const Index length = 2 * (grid_size + 1);
    thread_local Eigen::FFT<Scalar> fft = [] {
        Eigen::FFT<Scalar> f;
        f.SetFlag(Eigen::FFT<Scalar>::HalfSpectrum);
        return f;
    }();
    thread_local std::vector<Scalar> extended;
    thread_local std::vector<std::complex<Scalar>> spectrum;

    extended.assign(static_cast<std::size_t>(length), Scalar(0));
    for (Index k = 0; k < v.size(); ++k) {
        extended[static_cast<std::size_t>(k + 1)] = v(k);
        extended[static_cast<std::size_t>(length - k - 1)] = -v(k);
    }
    spectrum.resize(static_cast<std::size_t>(length / 2 + 1));
    fft.fwd(spectrum.data(), extended.data(), length);

    Vector<Scalar> out(grid_size);
    for (Index j = 0; j < grid_size; ++j) {
        out(j) = -spectrum[static_cast<std::size_t>(j + 1)].imag() / Scalar(2);
    }
    return out;
}

// C_m = sum_{k=1}^{M} v_k cos(pi m k / (M + 1)) for m = 0..M + 1 (samples at x_0 and
// x_{M+1} taken as zero).
template <typename Scalar>
Vector<Scalar> cosine_sums(const Vector<Scalar>& v, Index grid_size) {
    const Index length = 2 * (grid_size + 1);
    thread_local Eigen::FFT<Scalar> fft = [] {
        Eigen::FFT<Scalar> f;
        f.SetFlag(Eigen::FFT<Scalar>::HalfSpectrum);
        return f;
    }();
    thread_local std::vector<Scalar> extended;
    thread_local std::vector<std::complex<Scalar>> spectrum;

    extended.assign(static_cast<std::size_t>(length), Scalar(0));
    for (Index k = 0; k < v.size(); ++k) {
        extended[static_cast<std::size_t>(k + 1)] = v(k);
        extended[static_cast<std::size_t>(length - k - 1)] = v(k);
    }
    spectrum.resize(static_cast<std::size_t>(length / 2 + 1));
    fft.fwd(spectrum.data(), extended.data(), length);

    Vector<Scalar> out(grid_size + 2);
    for (Index m = 0; m < grid_size + 2; ++m) out(m) = spectrum[static_cast<std::size_t>(m)].real() / Scalar(2);
    return out;
}

}  // namespace detail

/// Discrete sine analysis: a_i = sqrt(2)/(M+1) sum_k u(x_k) sin(i pi x_k), i = 1..N.
template <typename Scalar>
SpectralField<Scalar> forward_transform(const GridField<Scalar>& grid, Index modes) {
    if (modes < 1 || grid.size() < modes) {
        throw DimensionError("forward_transform needs 1 <= N <= M (N = " + std::to_string(modes) +
                             ", M = " + std::to_string(grid.size()) + ")");
    }
    const Index m = grid.size();
    Vector<Scalar> sums = detail::sine_sums<Scalar>(grid.values(), m);
    return SpectralField<Scalar>(sums.head(modes) * (std::numbers::sqrt2_v<Scalar> / Scalar(m + 1)));
}

/// Synthesis u(x_k) = sum_i a_i sqrt(2) sin(i pi x_k) on M interior points.
template <typename Scalar>
GridField<Scalar> inverse_transform(const SpectralField<Scalar>& field, Index grid_size) {
    if (grid_size < field.modes()) {
        throw DimensionError("inverse_transform needs M >= N (N = " + std::to_string(field.modes()) +
                             ", M = " + std::to_string(grid_size) + ")");
    }
    return GridField<Scalar>(detail::sine_sums<Scalar>(field.coeffs(), grid_size) * std::numbers::sqrt2_v<Scalar>);
}

/// S(t) = exp(-tA).
template <typename Scalar>
SpectralField<Scalar> apply_semigroup(const SpectralField<Scalar>& field, Scalar t) {
    if (!(t >= Scalar(0))) throw DomainError("apply_semigroup needs t >= 0");
    const Vector<Scalar> lambda = OperatorSpectrum<Scalar>::eigenvalues(field.modes());
    return SpectralField<Scalar>((-t * lambda.array()).exp().matrix().cwiseProduct(field.coeffs()));
}

/// A^{gamma/2}: a_i -> lambda_i^{gamma/2} a_i. Negative gamma is fine since lambda_1 > 0.
template <typename Scalar>
SpectralField<Scalar> apply_fractional_power(const SpectralField<Scalar>& field, Scalar gamma) {
    const Vector<Scalar> lambda = OperatorSpectrum<Scalar>::eigenvalues(field.modes());
    return SpectralField<Scalar>(lambda.array().pow(gamma / Scalar(2)).matrix().cwiseProduct(field.coeffs()));
}

/// Smallest grid size with M + 1 a multiple of 4N that resolves cubic products exactly
/// (M >= 3N + 1).
inline Index dealias_grid_size(Index modes) { return std::max<Index>(4 * modes - 1, 3 * modes + 1); }

template <typename Scalar>
Scalar l2_norm(const SpectralField<Scalar>& field) {
    return field.coeffs().norm();
}

/// Max |u| over a grid oversampled by `oversample`; a lower bound on the sup norm.
template <typename Scalar>
Scalar sup_norm(const SpectralField<Scalar>& field, Index oversample = 4) {
    if (oversample < 1) throw DomainError("sup_norm oversample factor must be >= 1");
    const Index m = std::max<Index>(field.modes(), oversample * field.modes() - 1);
    return inverse_transform(field, m).values().cwiseAbs().maxCoeff();
}

/// Uniform-grid quadrature (sum_k |u_k|^p / (M + 1))^{1/p} of grid samples.
template <typename Scalar>
Scalar lp_norm(const GridField<Scalar>& grid, int p) {
    if (p != 2 && p != 4 && p != 6) {
        throw UnsupportedNormError("lp_norm supports p in {2, 4, 6}, got " + std::to_string(p));
    }
    const auto a = grid.values().array().abs();
    Scalar sum;
    switch (p) {
        case 2: sum = a.square().sum(); break;
        case 4: sum = a.square().square().sum(); break;
        default: sum = (a.square() * a.square() * a.square()).sum(); break;
    }
    return std::pow(sum / Scalar(grid.size() + 1), Scalar(1) / Scalar(p));
}

template <typename Scalar>
Scalar lp_norm(const SpectralField<Scalar>& field, int p, Index grid_size) {
    if (p != 2 && p != 4 && p != 6) {
        throw UnsupportedNormError("lp_norm supports p in {2, 4, 6}, got " + std::to_string(p));
    }
    if (grid_size < 2 * field.modes()) throw DimensionError("lp_norm needs M >= 2N");
    return lp_norm(inverse_transform(field, grid_size), p);
}

/// ||u||_beta = ||A^{beta/2} u||.
template <typename Scalar>
Scalar sobolev_norm(const SpectralField<Scalar>& field, Scalar beta) {
    return l2_norm(apply_fractional_power(field, beta));
}

}  // namespace sac

#endif  // SAC_SPECTRAL_HPP
