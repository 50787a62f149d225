#ifndef HSCS_SENSING_HPP
#define HSCS_SENSING_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "hscs/linalg.hpp"

namespace hscs {

/// Acquisition-domain pixel: N real spectral samples.
struct Spectrum {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// Compressed pixel: M real measurements.
struct Measurement {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// Unitary DFT transform pair (Psi and its inverse).
struct TransformBasis {
    std::size_t n = 0;
    CMatrix matrix;   // Psi, N x N
    CMatrix inverse;  // Psi^{-1} = Psi^*, N x N
};

/// Random real measurement operator Phi, M x N with M < N.
struct MeasurementMatrix {
    std::size_t m = 0;
    std::size_t n = 0;
    CMatrix matrix;  // real entries embedded as complex
    std::uint64_t seed = 0;
};

/// Dictionary A = Phi * Psi whose columns are the atoms.
struct Dictionary {
    CMatrix matrix;  // M x N
    std::vector<double> atom_norms;

    std::size_t rows() const noexcept { return matrix.rows(); }
    std::size_t cols() const noexcept { return matrix.cols(); }
};

/// Unitary DFT matrix: matrix[j,k] = exp(-2*pi*i*j*k/n)/sqrt(n).
inline TransformBasis build_dft_basis(std::size_t n) {
    require(n >= 2, "build_dft_basis: n must be >= 2");
    TransformBasis basis;
    basis.n = n;
    basis.matrix = CMatrix(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            // reduce j*k mod n before forming the angle
            const std::uint64_t jk = (static_cast<std::uint64_t>(j) * k) % n;
            const double angle =
                -2.0 * std::numbers::pi * static_cast<double>(jk) / n;
            basis.matrix(j, k) = std::polar(scale, angle);
        }
    basis.inverse = conj_transpose(basis.matrix);
    return basis;
}

namespace detail {
/// Gaussian N(0, 1/m) operator without the compression constraint; the
/// m = n case serves uncompressed sanity sweeps.
inline MeasurementMatrix gaussian_operator(std::size_t m, std::size_t n,
                                           std::uint64_t seed) {
    MeasurementMatrix phi;
    phi.m = m;
    phi.n = n;
    phi.seed = seed;
    phi.matrix = CMatrix(m, n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(
        0.0, 1.0 / std::sqrt(static_cast<double>(m)));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            phi.matrix(r, c) = Complex{gauss(rng), 0.0};
    return phi;
}
}  // namespace detail

/// Gaussian measurement matrix with entries N(0, 1/m); a pure function of
/// (m, n, seed).
inline MeasurementMatrix build_measurement_matrix(std::size_t m, std::size_t n,
                                                  std::uint64_t seed) {
    require(m >= 1, "build_measurement_matrix: m must be >= 1");
    require(m < n, "build_measurement_matrix: m must be < n (compression)");
    return detail::gaussian_operator(m, n, seed);
}

inline Dictionary compose_dictionary(const MeasurementMatrix& phi,
                                     const TransformBasis& psi) {
    require(phi.n == psi.n, "compose_dictionary: dimension mismatch");
    Dictionary dict;
    dict.matrix = matmul(phi.matrix, psi.matrix);
    dict.atom_norms.resize(dict.cols());
    for (std::size_t c = 0; c < dict.cols(); ++c) {
        double acc = 0.0;
        for (std::size_t r = 0; r < dict.rows(); ++r)
            acc += std::norm(dict.matrix(r, c));
        dict.atom_norms[c] = std::sqrt(acc);
    }
    return dict;
}

/// y = Phi * f.
inline Measurement compress(const MeasurementMatrix& phi, const Spectrum& f) {
    require(phi.n == f.size(), "compress: dimension mismatch");
    Measurement y;
    y.values.resize(phi.m);
    for (std::size_t r = 0; r < phi.m; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < phi.n; ++c)
            acc += phi.matrix(r, c).real() * f.values[c];
        y.values[r] = acc;
    }
    return y;
}

/// Transform-domain representation x = Psi^{-1} f.
inline CVector analyze(const TransformBasis& psi, const Spectrum& f) {
    require(psi.n == f.size(), "analyze: dimension mismatch");
    CVector fc(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        fc[i] = Complex{f.values[i], 0.0};
    return matvec(psi.inverse, fc);
}

struct SynthesisResult {
    Spectrum spectrum;
    double max_imag = 0.0;
    /// Set when the imaginary residue of Psi*x exceeds 1e-3 of its peak:
    /// x no longer has conjugate symmetry (legitimate for sparsified or
    /// recovered vectors).
    bool symmetry_warning = false;
};

/// f = Re(Psi * x), with the imaginary residue surfaced as a diagnostic.
inline SynthesisResult synthesize(const TransformBasis& psi, const CVector& x) {
    require(psi.n == x.size(), "synthesize: dimension mismatch");
    const CVector fx = matvec(psi.matrix, x);
    SynthesisResult out;
    out.spectrum.values.resize(fx.size());
    double max_abs = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        out.spectrum.values[i] = fx[i].real();
        out.max_imag = std::max(out.max_imag, std::abs(fx[i].imag()));
        max_abs = std::max(max_abs, std::abs(fx[i]));
    }
    out.symmetry_warning = out.max_imag > 1e-3 * max_abs;
    return out;
}

/// M = round(N / compression_factor).
inline std::size_t measurements_from_factor(std::size_t n, double factor) {
    require(factor > 1.0, "compression factor must exceed 1");
    const auto m = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) / factor));
    require(m >= 1 && m < n, "compression factor yields invalid M");
    return m;
}

}  // namespace hscs

#endif  // HSCS_SENSING_HPP
