#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "hscs/pipeline.hpp"

using namespace hscs;

namespace {

HsiCube float_exact_cube(std::size_t x, std::size_t y, std::size_t z,
                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    HsiCube cube;
    cube.x_dim = x;
    cube.y_dim = y;
    cube.z_dim = z;
    cube.name = "test";
    cube.data.resize(x * y * z);
    // float-representable values so save/load roundtrips bitwise
    for (double& v : cube.data) v = static_cast<float>(dist(rng));
    return cube;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("cube save/load roundtrip is bitwise") {
    HsiCube cube = float_exact_cube(3, 4, 7, 1);
    TempFile f("hscs_roundtrip.cube");
    save_cube(cube, f.path);
    HsiCube back = load_cube(f.path);
    CHECK(back.x_dim == cube.x_dim);
    CHECK(back.y_dim == cube.y_dim);
    CHECK(back.z_dim == cube.z_dim);
    CHECK(back.name == cube.name);
    CHECK(back.data == cube.data);
}

TEST_CASE("single-pixel cube is valid") {
    HsiCube cube = float_exact_cube(1, 1, 16, 2);
    TempFile f("hscs_single.cube");
    save_cube(cube, f.path);
    CHECK(load_cube(f.path).data == cube.data);
}

TEST_CASE("truncated payload is rejected") {
    HsiCube cube = float_exact_cube(2, 2, 8, 3);
    TempFile f("hscs_trunc.cube");
    save_cube(cube, f.path);
    const auto full = std::filesystem::file_size(f.path);
    std::filesystem::resize_file(f.path, full - 5);
    CHECK_THROWS_AS(load_cube(f.path), IoError);
}

TEST_CASE("trailing bytes after the payload are rejected") {
    HsiCube cube = float_exact_cube(2, 2, 8, 3);
    TempFile f("hscs_trailing.cube");
    save_cube(cube, f.path);
    {
        std::ofstream os(f.path, std::ios::binary | std::ios::app);
        os.write("x", 1);
    }
    CHECK_THROWS_AS(load_cube(f.path), IoError);
}

TEST_CASE("bad magic and nan payloads are rejected") {
    TempFile f("hscs_badmagic.cube");
    {
        std::ofstream os(f.path, std::ios::binary);
        os.write("NOPE", 4);
    }
    CHECK_THROWS_AS(load_cube(f.path), IoError);

    HsiCube cube = float_exact_cube(1, 1, 4, 4);
    TempFile g("hscs_nan.cube");
    save_cube(cube, g.path);
    {
        std::fstream os(g.path,
                        std::ios::binary | std::ios::in | std::ios::out);
        os.seekp(-16, std::ios::end);
        const float nan = std::numeric_limits<float>::quiet_NaN();
        os.write(reinterpret_cast<const char*>(&nan), 4);
    }
    CHECK_THROWS_AS(load_cube(g.path), IoError);
}

TEST_CASE("extract_pixel copies by value") {
    HsiCube cube = float_exact_cube(2, 3, 5, 5);
    Spectrum f = extract_pixel(cube, 1, 2);
    REQUIRE(f.size() == 5);
    const double original = cube.at(1, 2, 0);
    f.values[0] += 100.0;
    CHECK(cube.at(1, 2, 0) == original);

    HsiCube tiny = float_exact_cube(1, 1, 6, 6);
    CHECK(extract_pixel(tiny, 0, 0).values == tiny.data);
    CHECK_THROWS_AS(extract_pixel(cube, 2, 0), ContractViolation);
}

TEST_CASE("phantom pixels have exactly kappa transform coefficients") {
    const std::size_t kappa = 6;
    HsiCube cube = generate_phantom_cube(3, 3, 32, kappa, 11);
    const TransformBasis psi = build_dft_basis(32);
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t y = 0; y < 3; ++y) {
            const CVector coeffs = analyze(psi, extract_pixel(cube, x, y));
            std::size_t nonzero = 0;
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                if (std::abs(coeffs[i]) > 1e-12) ++nonzero;
            CHECK(nonzero == kappa);
        }
}

TEST_CASE("phantom generation is deterministic and bounds-checked") {
    HsiCube a = generate_phantom_cube(2, 2, 16, 4, 7);
    HsiCube b = generate_phantom_cube(2, 2, 16, 4, 7);
    CHECK(a.data == b.data);
    CHECK_THROWS_AS(generate_phantom_cube(2, 2, 16, 17, 7), ContractViolation);

    // kappa = z yields a dense transform vector
    HsiCube dense = generate_phantom_cube(1, 1, 16, 16, 7);
    const CVector coeffs =
        analyze(build_dft_basis(16), extract_pixel(dense, 0, 0));
    for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(coeffs[i]) > 1e-12);
}

TEST_CASE("sparsify_cube with T=0 only pays the transform roundtrip") {
    HsiCube cube = float_exact_cube(2, 2, 16, 13);
    SparsifyCubeResult res = sparsify_cube(cube, 0.0);
    for (std::size_t i = 0; i < cube.data.size(); ++i)
        CHECK(std::abs(res.spf.data[i] - cube.data[i]) < 1e-9);
}

TEST_CASE("sparsify_cube mean SR grows with T") {
    HsiCube cube = float_exact_cube(4, 4, 32, 17);
    double prev_sr = -1.0;
    for (double t : {0.0, 5.0, 20.0, 50.0, 90.0}) {
        SparsifyCubeResult res = sparsify_cube(cube, t);
        CHECK(res.mean_sr >= prev_sr);
        prev_sr = res.mean_sr;
    }
}

TEST_CASE("sparsify_cube kappa map matches a recount") {
    HsiCube cube = float_exact_cube(3, 2, 24, 19);
    const TransformBasis psi = build_dft_basis(24);
    SparsifyCubeResult res = sparsify_cube(cube, 30.0, psi);
    for (std::size_t p = 0; p < cube.pixel_count(); ++p) {
        const CVector coeffs = analyze(
            psi, extract_pixel(cube, p / cube.y_dim, p % cube.y_dim));
        CHECK(res.kappa_map[p] == sparsify(coeffs, 30.0).second.kappa);
    }
}

TEST_CASE("pipeline recovers a planted single pixel near-exactly") {
    const std::size_t n = 64;
    HsiCube cube = generate_phantom_cube(1, 1, n, 8, 21);
    PipelineConfig cfg;
    cfg.threshold_T = 5.0;  // planted moduli are within 2x of the peak
    cfg.compression_factor = 2.5;
    cfg.group_size = 2;
    cfg.seed = 21;
    cfg.threads = 1;
    PipelineResult res = run_pipeline(cube, cfg);
    CHECK(res.report.pixels_failed == 0);
    CHECK(res.report.rec_vs_spf.psnr_db > 120.0);
    CHECK(res.report.rec_vs_spf.ssi == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("pipeline is deterministic and its report is consistent") {
    HsiCube cube = generate_phantom_cube(3, 2, 32, 5, 33);
    PipelineConfig cfg;
    cfg.threshold_T = 10.0;
    cfg.group_size = 2;
    cfg.seed = 9;
    cfg.threads = 2;
    PipelineResult a = run_pipeline(cube, cfg);
    PipelineResult b = run_pipeline(cube, cfg);
    CHECK(a.rec.data == b.rec.data);
    CHECK(a.spf.data == b.spf.data);
    CHECK(a.report.total_J == b.report.total_J);
    CHECK(a.report.mean_sr == b.report.mean_sr);

    std::size_t j = 0;
    for (const PixelDiag& d : a.diags) j += d.iterations;
    CHECK(a.report.total_J == j);
    CHECK(a.report.pixels_recovered + a.report.pixels_failed ==
          cube.pixel_count());
}

TEST_CASE("shared-phi mode reuses one measurement matrix") {
    HsiCube cube = generate_phantom_cube(2, 2, 64, 4, 35);
    PipelineConfig cfg;
    cfg.threshold_T = 10.0;
    cfg.phi_mode = PhiMode::Shared;
    cfg.seed = 5;
    cfg.threads = 1;
    PipelineResult res = run_pipeline(cube, cfg);
    CHECK(res.report.pixels_failed == 0);
    CHECK(res.report.rec_vs_spf.psnr_db > 120.0);
}

TEST_CASE("csv row follows the table column order") {
    CHECK(report_csv_header() ==
          "T,SR,PSNR_spf_or,SSI_spf_or,PSNR_rec_or,SSI_rec_or,"
          "PSNR_rec_spf,SSI_rec_spf,J,t");
    PipelineReport r;
    r.threshold_T = 5.5;
    r.total_J = 42;
    const std::string row = report_csv_row(r);
    CHECK(row.substr(0, 4) == "5.5,");
    CHECK(row.find(",42,") != std::string::npos);
}
