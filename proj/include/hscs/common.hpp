#ifndef HSCS_COMMON_HPP
#define HSCS_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hscs {

using Complex = std::complex<double>;

/// Violated precondition or type invariant.
class ContractViolation : public std::invalid_argument {
public:
    explicit ContractViolation(const std::string& what)
        : std::invalid_argument(what) {}
};

/// Numerically rank-deficient system in a least-squares solve.
class RankDeficiencyError : public std::runtime_error {
public:
    RankDeficiencyError(const std::string& what, std::size_t numerical_rank)
        : std::runtime_error(what), numerical_rank_(numerical_rank) {}

    std::size_t numerical_rank() const noexcept { return numerical_rank_; }

private:
    std::size_t numerical_rank_;
};

/// File I/O or malformed-payload failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ContractViolation(msg);
}

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// splitmix64 mixing step, used to derive per-pixel sub-seeds from one
/// global seed: sub_seed = mix_seed(global_seed, pixel_linear_index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace hscs

#endif  // HSCS_COMMON_HPP
