#ifndef HSCS_PIPELINE_HPP
#define HSCS_PIPELINE_HPP

#include <atomic>
#include <chrono>
#include <optional>
#include <thread>

#include "hscs/cube.hpp"
#include "hscs/gomp.hpp"

namespace hscs {

enum class PhiMode { PerPixel, Shared };
enum class KappaMode { FromSparsification, Fixed };

struct PipelineConfig {
    double threshold_T = 0.0;
    double compression_factor = 2.5;
    std::size_t measurements = 0;  // explicit M; 0 derives from the factor
    std::size_t group_size = 2;
    double epsilon = 1e-6;
    bool epsilon_relative = true;
    std::size_t max_iterations = 0;  // 0 = solver default
    PhiMode phi_mode = PhiMode::PerPixel;
    KappaMode kappa_mode = KappaMode::FromSparsification;
    std::size_t fixed_kappa = 15;
    std::uint64_t seed = 0;
    std::size_t threads = 0;  // 0 = hardware concurrency
    double psnr_cap_db = 300.0;

    std::size_t resolve_measurements(std::size_t n) const {
        if (measurements > 0) {
            require(measurements < n, "pipeline: M must be < N");
            return measurements;
        }
        return measurements_from_factor(n, compression_factor);
    }
};

struct PixelDiag {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t kappa = 0;
    std::size_t iterations = 0;
    double final_delta = 0.0;
    double final_residual_norm = 0.0;
    bool converged = false;
    bool failed = false;
    std::string error;
};

struct PipelineReport {
    double threshold_T = 0.0;
    double mean_sr = 0.0;
    std::size_t measurements = 0;
    QualityReport spf_vs_or;
    QualityReport rec_vs_or;
    QualityReport rec_vs_spf;
    std::size_t total_J = 0;
    double total_t_seconds = 0.0;
    std::size_t pixels_recovered = 0;
    std::size_t pixels_failed = 0;
};

struct SparsifyCubeResult {
    HsiCube spf;
    double mean_sr = 0.0;
    std::vector<std::size_t> kappa_map;  // per pixel, linear index x*y_dim+y
};

/// Per-pixel analyze -> threshold (percent-of-peak rule) ->
/// synthesize, yielding the sparsified cube and its kappa/SR statistics.
inline SparsifyCubeResult sparsify_cube(const HsiCube& cube, double threshold_T,
                                        const TransformBasis& psi) {
    require(psi.n == cube.z_dim, "sparsify_cube: basis/cube mismatch");
    SparsifyCubeResult out;
    out.spf = cube;
    out.spf.name = cube.name + "_spf";
    out.kappa_map.resize(cube.pixel_count());
    double sr_acc = 0.0;
    for (std::size_t p = 0; p < cube.pixel_count(); ++p) {
        const std::size_t x = p / cube.y_dim;
        const std::size_t y = p % cube.y_dim;
        const CVector coeffs = analyze(psi, extract_pixel(cube, x, y));
        auto [sparse, rep] = sparsify(coeffs, threshold_T);
        out.kappa_map[p] = rep.kappa;
        sr_acc += rep.sparsity_ratio;
        set_pixel(out.spf, x, y, synthesize(psi, sparse.values).spectrum);
    }
    out.mean_sr = sr_acc / static_cast<double>(cube.pixel_count());
    return out;
}

inline SparsifyCubeResult sparsify_cube(const HsiCube& cube,
                                        double threshold_T) {
    return sparsify_cube(cube, threshold_T, build_dft_basis(cube.z_dim));
}

struct PipelineResult {
    HsiCube spf;
    HsiCube rec;
    PipelineReport report;
    std::vector<PixelDiag> diags;  // one per pixel, linear order
};

/// Full per-pixel protocol: sparsify, compress with a randomized Phi,
/// recover with gOMP, synthesize back, and aggregate quality metrics.
/// Failed pixels are zeroed and enumerated; the run always completes.
inline PipelineResult run_pipeline(const HsiCube& cube,
                                   const PipelineConfig& config) {
    require(cube.z_dim >= 4, "run_pipeline: spectral dimension must be >= 4");
    const std::size_t n = cube.z_dim;
    const std::size_t m = config.resolve_measurements(n);
    const TransformBasis psi = build_dft_basis(n);

    PipelineResult result;
    SparsifyCubeResult spf = sparsify_cube(cube, config.threshold_T, psi);
    result.spf = std::move(spf.spf);
    result.rec = cube;
    result.rec.name = cube.name + "_rec";
    std::fill(result.rec.data.begin(), result.rec.data.end(), 0.0);
    result.diags.resize(cube.pixel_count());

    std::optional<MeasurementMatrix> shared_phi;
    std::optional<Dictionary> shared_dict;
    if (config.phi_mode == PhiMode::Shared) {
        shared_phi = build_measurement_matrix(m, n, config.seed);
        shared_dict = compose_dictionary(*shared_phi, psi);
    }

    auto recover_pixel = [&](std::size_t p) {
        const std::size_t x = p / cube.y_dim;
        const std::size_t y = p % cube.y_dim;
        PixelDiag& diag = result.diags[p];
        diag.x = x;
        diag.y = y;

        std::size_t kappa = config.kappa_mode == KappaMode::Fixed
                                ? config.fixed_kappa
                                : spf.kappa_map[p];
        diag.kappa = kappa;
        const Spectrum f_spf = extract_pixel(result.spf, x, y);
        if (kappa == 0) {
            // all-zero transform vector; nothing to recover
            diag.converged = true;
            return;
        }
        kappa = std::min(kappa, m);  // B must stay tall-or-square

        try {
            MeasurementMatrix phi_local;
            const MeasurementMatrix* phi = nullptr;
            const Dictionary* dict = nullptr;
            Dictionary dict_local;
            if (config.phi_mode == PhiMode::Shared) {
                phi = &*shared_phi;
                dict = &*shared_dict;
            } else {
                phi_local =
                    build_measurement_matrix(m, n, mix_seed(config.seed, p));
                dict_local = compose_dictionary(phi_local, psi);
                phi = &phi_local;
                dict = &dict_local;
            }

            GompConfig gcfg;
            gcfg.kappa = kappa;
            gcfg.group_size = std::min(config.group_size, kappa);
            gcfg.epsilon = config.epsilon;
            gcfg.epsilon_relative = config.epsilon_relative;
            gcfg.max_iterations = config.max_iterations;

            const Measurement y_meas = compress(*phi, f_spf);
            const GompResult solved = gomp_recover(y_meas, *dict, gcfg);
            set_pixel(result.rec, x, y,
                      synthesize(psi, solved.x_hat.values).spectrum);
            diag.iterations = solved.iterations;
            diag.final_delta = solved.final_delta;
            diag.converged = solved.converged;
            diag.final_residual_norm = solved.residual_norm_history.empty()
                                           ? 0.0
                                           : solved.residual_norm_history.back();
        } catch (const std::exception& e) {
            diag.failed = true;
            diag.error = e.what();
            // pixel stays zeroed; the run carries on
        }
    };

    const std::size_t pixel_total = cube.pixel_count();
    std::size_t workers = config.threads > 0
                              ? config.threads
                              : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, pixel_total);

    const auto t0 = std::chrono::steady_clock::now();
    if (workers <= 1) {
        for (std::size_t p = 0; p < pixel_total; ++p) recover_pixel(p);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t p = next.fetch_add(1); p < pixel_total;
                     p = next.fetch_add(1))
                    recover_pixel(p);
            });
        for (auto& th : pool) th.join();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    PipelineReport& report = result.report;
    report.threshold_T = config.threshold_T;
    report.mean_sr = spf.mean_sr;
    report.measurements = m;
    report.total_t_seconds = elapsed;
    for (const PixelDiag& d : result.diags) {
        report.total_J += d.iterations;
        if (d.failed)
            ++report.pixels_failed;
        else
            ++report.pixels_recovered;
    }
    report.spf_vs_or = cube_quality(result.spf, cube, config.psnr_cap_db);
    report.rec_vs_or = cube_quality(result.rec, cube, config.psnr_cap_db);
    report.rec_vs_spf = cube_quality(result.rec, result.spf, config.psnr_cap_db);
    return result;
}

/// CSV row in the accuracy-and-performance table order:
/// T, SR, then PSNR/SSI for spf-vs-or, rec-vs-or, rec-vs-spf, then J, t.
inline std::string report_csv_header() {
    return "T,SR,PSNR_spf_or,SSI_spf_or,PSNR_rec_or,SSI_rec_or,"
           "PSNR_rec_spf,SSI_rec_spf,J,t";
}

inline std::string report_csv_row(const PipelineReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%.6g,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%zu,%.4f",
                  r.threshold_T, r.mean_sr, r.spf_vs_or.psnr_db,
                  r.spf_vs_or.ssi, r.rec_vs_or.psnr_db, r.rec_vs_or.ssi,
                  r.rec_vs_spf.psnr_db, r.rec_vs_spf.ssi, r.total_J,
                  r.total_t_seconds);
    return buf;
}

}  // namespace hscs

#endif  // HSCS_PIPELINE_HPP
