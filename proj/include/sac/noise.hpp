#ifndef SAC_NOISE_HPP
#define SAC_NOISE_HPP

// Q-Wiener increments in the sine basis. Q commutes with A, so
//     W(t) = sum_n sqrt(q_n) beta_n(t) e_n
// and the increment over a step of length dt has independent modes with
// variance q_n dt. Every standard normal is addressed by
// (seed, family, path, step ordinal, substep, mode) so a data-dependent
// partition never shifts the draws of another path.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "sac/errors.hpp"
#include "sac/philox.hpp"
#include "sac/spectral.hpp"

namespace sac {

enum class NoiseKind { TraceClass, White };

inline const char* to_string(NoiseKind kind) {
    return kind == NoiseKind::TraceClass ? "trace-class" : "white";
}

struct NoiseSpec {
    NoiseKind kind = NoiseKind::TraceClass;
    Index modes = 1;
    /// Regularity exponent; reported only (1 for trace-class, some value in (0, 1/2) for white).
    double beta = 1.0;
    /// Multiplies every increment; 0 switches the noise off.
    double amplitude = 1.0;

    /// Eigenvalue q_n of Q (1-based mode).
    double eigenvalue(Index mode) const {
        if (kind == NoiseKind::White) return 1.0;
        const double n = static_cast<double>(mode);
        return 1.0 / (n * n);
    }
};

/// sqrt(q_n dt), the standard deviation of mode n of an increment over dt.
inline double increment_stddev(const NoiseSpec& spec, Index mode, double dt) {
    if (mode < 1 || mode > spec.modes) {
        throw DomainError("increment_stddev: mode " + std::to_string(mode) + " outside 1.." +
                          std::to_string(spec.modes));
    }
    if (!(dt > 0.0)) throw DomainError("increment_stddev needs dt > 0");
    return std::sqrt(spec.eigenvalue(mode) * dt);
}

class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t family, std::uint32_t path)
        : seed_(seed), family_(family), path_(path) {
        const std::uint64_t k = mix64(seed ^ mix64(family));
        key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t family() const noexcept { return family_; }
    std::uint32_t path() const noexcept { return path_; }
    std::uint32_t step() const noexcept { return step_; }

    void advance() noexcept { ++step_; }

    /// Standard normal at (current step, substep, mode), mode 1-based.
    double standard_normal(std::uint32_t substep, Index mode) const noexcept {
        const auto zero_based = static_cast<std::uint64_t>(mode - 1);
        const auto pair = normal_pair(substep, zero_based >> 1);
        return (zero_based & 1u) == 0 ? pair[0] : pair[1];
    }

    /// Modes 2j + 1 and 2j + 2 share one Philox block (Box-Muller on two 53-bit uniforms).
    std::array<double, 2> normal_pair(std::uint32_t substep, std::uint64_t pair_index) const noexcept {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(pair_index), substep, step_, path_};
        const auto w = Philox4x32::generate(ctr, key_);
        constexpr double kScale = 0x1.0p-53;
        const std::uint64_t a = (std::uint64_t{w[0]} << 32 | w[1]) >> 11;
        const std::uint64_t b = (std::uint64_t{w[2]} << 32 | w[3]) >> 11;
        const double u1 = (static_cast<double>(a) + 0.5) * kScale;
        const double u2 = static_cast<double>(b) * kScale;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

private:
    std::uint64_t seed_;
    std::uint64_t family_;
    std::uint32_t path_;
    std::uint32_t step_ = 0;
    Philox4x32::Key key_{};
};

template <typename Scalar>
struct RefinedIncrement {
    std::vector<Vector<Scalar>> fine;
    Vector<Scalar> coarse;
};

/// Draws r independent sub-increments over dt/r each and their sum, then advances the
/// stream to the next step ordinal. The coarse vector is
/// ((fine_1 + fine_2) + fine_3) + ..., never an independent draw.
template <typename Scalar = double>
RefinedIncrement<Scalar> sample_refined_increment(NoiseStream& stream, const NoiseSpec& spec, double dt,
                                                  int refinement) {
    if (!(dt > 0.0)) throw DomainError("sample_refined_increment needs dt > 0");
    if (refinement < 1) throw DomainError("sample_refined_increment needs r >= 1");
    RefinedIncrement<Scalar> out;
    out.fine.reserve(static_cast<std::size_t>(refinement));
    const double sub_dt = dt / refinement;
    Vector<double> stddev(spec.modes);
    for (Index n = 1; n <= spec.modes; ++n) stddev(n - 1) = spec.amplitude * std::sqrt(spec.eigenvalue(n) * sub_dt);

    for (int s = 0; s < refinement; ++s) {
        Vector<Scalar> v(spec.modes);
        for (Index j = 0; 2 * j < spec.modes; ++j) {
            const auto z = stream.normal_pair(static_cast<std::uint32_t>(s), static_cast<std::uint64_t>(j));
            v(2 * j) = static_cast<Scalar>(stddev(2 * j) * z[0]);
            if (2 * j + 1 < spec.modes) v(2 * j + 1) = static_cast<Scalar>(stddev(2 * j + 1) * z[1]);
        }
        out.fine.push_back(std::move(v));
    }
    out.coarse = out.fine.front();
    for (std::size_t s = 1; s < out.fine.size(); ++s) out.coarse += out.fine[s];
    stream.advance();
    return out;
}

/// Bitwise check that coarse equals the left-to-right sum of its refinements.
template <typename Scalar>
bool coupling_exact(const RefinedIncrement<Scalar>& inc) {
    Vector<Scalar> sum = inc.fine.front();
    for (std::size_t s = 1; s < inc.fine.size(); ++s) sum += inc.fine[s];
    return (sum.array() == inc.coarse.array()).all();
}

}  // namespace sac

#endif  // SAC_NOISE_HPP
