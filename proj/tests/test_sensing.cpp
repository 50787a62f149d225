#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hscs/sensing.hpp"

using namespace hscs;

namespace {

CVector random_complex(std::size_t len, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(len);
    for (std::size_t i = 0; i < len; ++i)
        v[i] = Complex{gauss(rng), gauss(rng)};
    return v;
}

Spectrum random_spectrum(std::size_t len, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Spectrum f;
    f.values.resize(len);
    for (double& v : f.values) v = gauss(rng);
    return f;
}

double max_abs_entry(const CMatrix& m) {
    double worst = 0.0;
    for (const Complex& z : m.entries())
        worst = std::max(worst, std::abs(z));
    return worst;
}

}  // namespace

TEST_CASE("dft basis n=2 is the scaled Hadamard matrix") {
    const TransformBasis psi = build_dft_basis(2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(psi.matrix(0, 0) - Complex{s, 0.0}) < 1e-15);
    CHECK(std::abs(psi.matrix(0, 1) - Complex{s, 0.0}) < 1e-15);
    CHECK(std::abs(psi.matrix(1, 0) - Complex{s, 0.0}) < 1e-15);
    CHECK(std::abs(psi.matrix(1, 1) - Complex{-s, 0.0}) < 1e-15);

    CHECK_THROWS_AS(build_dft_basis(1), ContractViolation);
}

TEST_CASE("dft basis is unitary") {
    for (std::size_t n : {2, 4, 8, 17, 64}) {
        const TransformBasis psi = build_dft_basis(n);
        CMatrix prod = matmul(psi.matrix, psi.inverse);
        CMatrix gram = matmul(conj_transpose(psi.matrix), psi.matrix);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                const Complex id = r == c ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
                CHECK(std::abs(prod(r, c) - id) < 1e-10);
                CHECK(std::abs(gram(r, c) - id) < 1e-10);
            }
    }
}

TEST_CASE("dft rows 0 and 2 of n=4 are orthogonal") {
    const TransformBasis psi = build_dft_basis(4);
    Complex dot{0.0, 0.0};
    for (std::size_t k = 0; k < 4; ++k)
        dot += psi.matrix(0, k) * std::conj(psi.matrix(2, k));
    CHECK(std::abs(dot) < 1e-12);
}

TEST_CASE("dft preserves the l2 norm") {
    std::mt19937_64 rng(5);
    for (std::size_t n : {8, 64, 224}) {
        const TransformBasis psi = build_dft_basis(n);
        for (int trial = 0; trial < 200; ++trial) {
            CVector x = random_complex(n, rng);
            CHECK(l2_norm(matvec(psi.matrix, x)) ==
                  Catch::Approx(l2_norm(x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("measurement matrix is deterministic and real") {
    const MeasurementMatrix a = build_measurement_matrix(5, 12, 99);
    const MeasurementMatrix b = build_measurement_matrix(5, 12, 99);
    CHECK(a.matrix == b.matrix);
    for (const Complex& z : a.matrix.entries()) CHECK(z.imag() == 0.0);

    CHECK(build_measurement_matrix(1, 2, 0).matrix.rows() == 1);
    CHECK_THROWS_AS(build_measurement_matrix(4, 4, 0), ContractViolation);
}

TEST_CASE("measurement matrix columns concentrate near unit norm") {
    // mean column norm stays in [0.8, 1.2]; band established by a
    // 100-seed Monte-Carlo sweep of N(0, 1/m) ensembles
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const MeasurementMatrix phi = build_measurement_matrix(52, 130, seed);
        double acc = 0.0;
        for (std::size_t c = 0; c < phi.n; ++c) {
            double norm2 = 0.0;
            for (std::size_t r = 0; r < phi.m; ++r)
                norm2 += std::norm(phi.matrix(r, c));
            acc += std::sqrt(norm2);
        }
        const double mean = acc / static_cast<double>(phi.n);
        CHECK(mean > 0.8);
        CHECK(mean < 1.2);
    }
}

TEST_CASE("dictionary composition matches the two-step product") {
    std::mt19937_64 rng(31);
    const TransformBasis psi = build_dft_basis(16);
    const MeasurementMatrix phi = build_measurement_matrix(6, 16, 3);
    const Dictionary dict = compose_dictionary(phi, psi);
    REQUIRE(dict.rows() == 6);
    REQUIRE(dict.cols() == 16);
    for (double norm : dict.atom_norms) CHECK(norm > 0.0);

    for (int trial = 0; trial < 20; ++trial) {
        CVector x = random_complex(16, rng);
        CVector direct = matvec(dict.matrix, x);
        CVector two_step = matvec(phi.matrix, matvec(psi.matrix, x));
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(std::abs(direct[i] - two_step[i]) < 1e-12);
    }

    const TransformBasis psi8 = build_dft_basis(8);
    CHECK_THROWS_AS(compose_dictionary(phi, psi8), ContractViolation);
}

TEST_CASE("row-selector measurement subsamples the dft") {
    const TransformBasis psi = build_dft_basis(8);
    MeasurementMatrix phi;
    phi.m = 3;
    phi.n = 8;
    phi.matrix = CMatrix(3, 8);
    for (std::size_t r = 0; r < 3; ++r) phi.matrix(r, r) = Complex{1.0, 0.0};
    const Dictionary dict = compose_dictionary(phi, psi);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 8; ++c)
            CHECK(std::abs(dict.matrix(r, c) - psi.matrix(r, c)) < 1e-15);
}

TEST_CASE("compress matches the complex matvec route") {
    std::mt19937_64 rng(37);
    const MeasurementMatrix phi = build_measurement_matrix(5, 11, 8);
    const Spectrum f = random_spectrum(11, rng);

    Measurement y = compress(phi, f);
    CVector fc(11);
    for (std::size_t i = 0; i < 11; ++i) fc[i] = Complex{f.values[i], 0.0};
    CVector yc = matvec(phi.matrix, fc);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(y.values[i] - yc[i].real()) < 1e-14);
        CHECK(std::abs(yc[i].imag()) < 1e-14);
    }

    MeasurementMatrix zeros;
    zeros.m = 2;
    zeros.n = 11;
    zeros.matrix = CMatrix(2, 11);
    Measurement y0 = compress(zeros, f);
    CHECK(y0.values == std::vector<double>{0.0, 0.0});

    Spectrum wrong;
    wrong.values.resize(4);
    CHECK_THROWS_AS(compress(phi, wrong), ContractViolation);
}

TEST_CASE("analyze and synthesize are mutual inverses on real spectra") {
    std::mt19937_64 rng(41);
    const TransformBasis psi = build_dft_basis(24);
    for (int trial = 0; trial < 50; ++trial) {
        const Spectrum f = random_spectrum(24, rng);
        const CVector x = analyze(psi, f);
        const SynthesisResult back = synthesize(psi, x);
        CHECK(back.max_imag < 1e-10);
        CHECK_FALSE(back.symmetry_warning);
        for (std::size_t i = 0; i < 24; ++i)
            CHECK(std::abs(back.spectrum.values[i] - f.values[i]) < 1e-10);
    }
}

TEST_CASE("constant spectrum concentrates into the DC bin") {
    const std::size_t n = 16;
    const TransformBasis psi = build_dft_basis(n);
    Spectrum ones;
    ones.values.assign(n, 1.0);
    const CVector x = analyze(psi, ones);
    CHECK(std::abs(x[0] - Complex{std::sqrt(double(n)), 0.0}) < 1e-10);
    for (std::size_t i = 1; i < n; ++i) CHECK(std::abs(x[i]) < 1e-10);

    // and back: a lone unit DC coefficient synthesizes to 1/sqrt(n)
    CVector dc(n);
    dc[0] = Complex{1.0, 0.0};
    const Spectrum f = synthesize(psi, dc).spectrum;
    for (double v : f.values)
        CHECK(v == Catch::Approx(1.0 / std::sqrt(double(n))));
}

TEST_CASE("synthesize flags conjugate-symmetry violations") {
    const TransformBasis psi = build_dft_basis(8);
    CVector x(8);
    x[1] = Complex{1.0, 0.0};  // no conjugate partner at index 7
    CHECK(synthesize(psi, x).symmetry_warning);
}

TEST_CASE("measurement count from compression factor") {
    CHECK(measurements_from_factor(103, 2.5) == 41);
    CHECK(measurements_from_factor(220, 2.5) == 88);
    CHECK(measurements_from_factor(224, 2.5) == 90);
}
