// hscs: hyperspectral compressive-sensing toolkit.
//
// Subcommands: gen-phantom, sparsify, pipeline, metrics, sweep,
// recover-pixel. Machine-readable output goes to stdout or files; progress
// goes to stderr. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 failed-pixel fraction above --max-fail.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "hscs/hscs.hpp"

using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolverFailures = 3;

bool parse_dims(const std::string& spec, std::size_t& x, std::size_t& y,
                std::size_t& z) {
    return std::sscanf(spec.c_str(), "%zux%zux%zu", &x, &y, &z) == 3;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(csv))
        out.push_back(static_cast<std::size_t>(v));
    return out;
}

json quality_to_json(const hscs::QualityReport& q) {
    return {{"psnr_db", q.psnr_db},
            {"ssi", q.ssi},
            {"capped_psnr_bands", q.capped_psnr_bands}};
}

json report_to_json(const hscs::PipelineReport& r,
                    const hscs::PipelineConfig& cfg) {
    return {
        {"config",
         {{"threshold_T", cfg.threshold_T},
          {"compression_factor", cfg.compression_factor},
          {"measurements", r.measurements},
          {"group_size", cfg.group_size},
          {"epsilon", cfg.epsilon},
          {"epsilon_relative", cfg.epsilon_relative},
          {"max_iterations", cfg.max_iterations},
          {"phi_mode",
           cfg.phi_mode == hscs::PhiMode::Shared ? "shared" : "per-pixel"},
          {"kappa_mode", cfg.kappa_mode == hscs::KappaMode::Fixed
                             ? "fixed"
                             : "from-sparsification"},
          {"fixed_kappa", cfg.fixed_kappa},
          {"seed", cfg.seed},
          {"threads", cfg.threads},
          {"psnr_cap_db", cfg.psnr_cap_db}}},
        {"threshold_T", r.threshold_T},
        {"mean_sr", r.mean_sr},
        {"spf_vs_or", quality_to_json(r.spf_vs_or)},
        {"rec_vs_or", quality_to_json(r.rec_vs_or)},
        {"rec_vs_spf", quality_to_json(r.rec_vs_spf)},
        {"total_J", r.total_J},
        {"t_seconds", r.total_t_seconds},
        {"pixels_recovered", r.pixels_recovered},
        {"pixels_failed", r.pixels_failed}};
}

void write_pixel_diag_csv(const std::string& path,
                          const std::vector<hscs::PixelDiag>& diags) {
    std::ofstream os(path);
    if (!os) throw hscs::IoError("cannot open '" + path + "'");
    os << "x,y,kappa,iterations,final_delta,residual_norm,converged,failed\n";
    for (const hscs::PixelDiag& d : diags)
        os << d.x << ',' << d.y << ',' << d.kappa << ',' << d.iterations << ','
           << d.final_delta << ',' << d.final_residual_norm << ','
           << (d.converged ? 1 : 0) << ',' << (d.failed ? 1 : 0) << '\n';
}

int cmd_gen_phantom(const std::string& dims, std::size_t kappa,
                    std::uint64_t seed, const std::string& out) {
    std::size_t x = 0, y = 0, z = 0;
    if (!parse_dims(dims, x, y, z)) {
        std::cerr << "usage error: --dims expects XxYxZ, got '" << dims
                  << "'\n";
        return kExitUsage;
    }
    if (kappa == 0 || kappa > z) {
        std::cerr << "usage error: --kappa must lie in [1, z]\n";
        return kExitUsage;
    }
    hscs::HsiCube cube = hscs::generate_phantom_cube(x, y, z, kappa, seed);
    hscs::save_cube(cube, out);
    std::cerr << "wrote " << out << " (" << x << "x" << y << "x" << z
              << ", kappa=" << kappa << ")\n";
    return kExitOk;
}

int cmd_sparsify(const std::string& in, double threshold, const std::string& out,
                 const std::string& report_path) {
    hscs::HsiCube cube = hscs::load_cube(in);
    hscs::SparsifyCubeResult res = hscs::sparsify_cube(cube, threshold);
    hscs::save_cube(res.spf, out);
    if (!report_path.empty()) {
        json j = {{"threshold_T", threshold}, {"mean_sr", res.mean_sr}};
        std::ofstream(report_path) << j.dump(2) << '\n';
    }
    std::cout << "T=" << threshold << " mean_SR=" << res.mean_sr << "%\n";
    return kExitOk;
}

hscs::PipelineConfig pipeline_config_from_flags(
    double threshold, double compression, std::size_t measurements,
    std::size_t group, std::size_t fixed_kappa, double epsilon,
    bool absolute_epsilon, std::size_t max_iterations, std::uint64_t seed,
    bool shared_phi, std::size_t threads) {
    hscs::PipelineConfig cfg;
    cfg.threshold_T = threshold;
    cfg.compression_factor = compression;
    cfg.measurements = measurements;
    cfg.group_size = group;
    cfg.epsilon = epsilon;
    cfg.epsilon_relative = !absolute_epsilon;
    cfg.max_iterations = max_iterations;
    cfg.seed = seed;
    cfg.phi_mode = shared_phi ? hscs::PhiMode::Shared : hscs::PhiMode::PerPixel;
    cfg.threads = threads;
    if (fixed_kappa > 0) {
        cfg.kappa_mode = hscs::KappaMode::Fixed;
        cfg.fixed_kappa = fixed_kappa;
    }
    return cfg;
}

int cmd_pipeline(const std::string& in, const hscs::PipelineConfig& cfg,
                 double max_fail, const std::string& out_dir,
                 const std::string& diag_path) {
    hscs::HsiCube cube = hscs::load_cube(in);
    hscs::PipelineResult res = hscs::run_pipeline(cube, cfg);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    hscs::save_cube(res.spf, (dir / "I_spf.hscb").string());
    hscs::save_cube(res.rec, (dir / "I_rec.hscb").string());
    std::ofstream((dir / "report.json").string())
        << report_to_json(res.report, cfg).dump(2) << '\n';
    std::ofstream((dir / "report.csv").string())
        << hscs::report_csv_header() << '\n'
        << hscs::report_csv_row(res.report) << '\n';
    if (!diag_path.empty()) write_pixel_diag_csv(diag_path, res.diags);

    std::cout << hscs::report_csv_header() << '\n'
              << hscs::report_csv_row(res.report) << '\n';
    const double rate = res.report.total_t_seconds > 0
                            ? double(cube.pixel_count()) /
                                  res.report.total_t_seconds
                            : 0.0;
    std::cerr << "recovered " << res.report.pixels_recovered << "/"
              << cube.pixel_count() << " pixels in "
              << res.report.total_t_seconds << " s (" << rate << " px/s), J="
              << res.report.total_J << "\n";

    const double fail_fraction =
        double(res.report.pixels_failed) / double(cube.pixel_count());
    if (fail_fraction > max_fail) {
        std::cerr << "failed-pixel fraction " << fail_fraction
                  << " exceeds --max-fail " << max_fail << "\n";
        for (const hscs::PixelDiag& d : res.diags)
            if (d.failed)
                std::cerr << "  pixel (" << d.x << "," << d.y
                          << "): " << d.error << "\n";
        return kExitSolverFailures;
    }
    return kExitOk;
}

int cmd_metrics(const std::string& a_path, const std::string& ref_path) {
    hscs::HsiCube a = hscs::load_cube(a_path);
    hscs::HsiCube ref = hscs::load_cube(ref_path);
    hscs::QualityReport q = hscs::cube_quality(a, ref);
    std::cout << "PSNR " << q.psnr_db << " dB\nSSI " << q.ssi << "\n";
    return kExitOk;
}

int cmd_sweep_grid(std::size_t n, const std::vector<std::size_t>& kappas,
                   const std::vector<std::size_t>& ms, std::size_t group,
                   std::size_t trials, std::uint64_t seed, std::ostream& os) {
    const hscs::TransformBasis psi = hscs::build_dft_basis(n);
    os << "kappa,M,trials,success_rate,mean_J,mean_t\n";
    for (std::size_t kappa : kappas)
        for (std::size_t m : ms) {
            if (m > n || kappa > m) {
                std::cerr << "skipping cell kappa=" << kappa << " M=" << m
                          << " (infeasible)\n";
                continue;
            }
            std::size_t successes = 0;
            double j_acc = 0.0, t_acc = 0.0;
            for (std::size_t trial = 0; trial < trials; ++trial) {
                const std::uint64_t cell_seed =
                    hscs::mix_seed(seed, (kappa * 1000003 + m) * 131 + trial);
                hscs::MeasurementMatrix phi =
                    hscs::detail::gaussian_operator(m, n, cell_seed);
                hscs::Dictionary dict = hscs::compose_dictionary(phi, psi);
                std::mt19937_64 rng(hscs::mix_seed(cell_seed, 1));
                hscs::CVector x0 = hscs::random_symmetric_sparse(n, kappa, rng);
                hscs::Measurement y = hscs::compress(
                    phi, hscs::synthesize(psi, x0).spectrum);
                hscs::GompConfig gcfg;
                gcfg.kappa = kappa;
                gcfg.group_size = std::min(group, kappa);
                hscs::GompResult res = hscs::gomp_recover(y, dict, gcfg);
                hscs::CVector diff(n);
                for (std::size_t i = 0; i < n; ++i)
                    diff[i] = res.x_hat.values[i] - x0[i];
                if (hscs::l2_norm(diff) < 1e-6 * hscs::l2_norm(x0))
                    ++successes;
                j_acc += double(res.iterations);
                t_acc += res.elapsed_seconds;
            }
            os << kappa << ',' << m << ',' << trials << ','
               << double(successes) / double(trials) << ','
               << j_acc / double(trials) << ',' << t_acc / double(trials)
               << '\n';
        }
    return kExitOk;
}

int cmd_sweep_thresholds(const std::string& in,
                         const std::vector<double>& t_list,
                         hscs::PipelineConfig cfg, std::ostream& os) {
    hscs::HsiCube cube = hscs::load_cube(in);
    os << hscs::report_csv_header() << '\n';
    for (double t : t_list) {
        cfg.threshold_T = t;
        hscs::PipelineResult res = hscs::run_pipeline(cube, cfg);
        os << hscs::report_csv_row(res.report) << '\n';
        std::cerr << "T=" << t << " done (J=" << res.report.total_J << ")\n";
    }
    return kExitOk;
}

int cmd_recover_pixel(const std::string& in, std::size_t px, std::size_t py,
                      double threshold, double compression, std::size_t group,
                      std::size_t fixed_kappa, std::uint64_t seed) {
    hscs::HsiCube cube = hscs::load_cube(in);
    if (px >= cube.x_dim || py >= cube.y_dim)
        throw hscs::ContractViolation("pixel coordinates out of range");
    const std::size_t n = cube.z_dim;
    const std::size_t m = hscs::measurements_from_factor(n, compression);
    const hscs::TransformBasis psi = hscs::build_dft_basis(n);
    const hscs::Spectrum f = hscs::extract_pixel(cube, px, py);
    const hscs::CVector x = hscs::analyze(psi, f);
    const hscs::MeasurementMatrix phi = hscs::build_measurement_matrix(
        m, n, hscs::mix_seed(seed, px * cube.y_dim + py));
    const hscs::Dictionary dict = hscs::compose_dictionary(phi, psi);

    auto recover = [&](const hscs::Spectrum& target, std::size_t kappa) {
        hscs::GompConfig gcfg;
        gcfg.kappa = std::min(kappa, m);
        gcfg.group_size = std::min(group, gcfg.kappa);
        return hscs::gomp_recover(hscs::compress(phi, target), dict, gcfg);
    };
    auto print_pair = [&](const std::string& label, const hscs::CVector& a,
                          const hscs::CVector& ref, const hscs::Spectrum& fa,
                          const hscs::Spectrum& fref) {
        std::cout << label << " transform: PSNR " << hscs::psnr_complex(a, ref)
                  << " dB / SSI " << hscs::ssi_complex(a, ref).value
                  << "; acquisition: PSNR " << hscs::psnr(fa.values, fref.values)
                  << " dB / SSI "
                  << hscs::ssi_1d(fa.values, fref.values).value << "\n";
    };

    // compressible-basis recovery at fixed kappa
    hscs::GompResult raw = recover(f, fixed_kappa);
    print_pair("recovered vs original", raw.x_hat.values, x,
               hscs::synthesize(psi, raw.x_hat.values).spectrum, f);

    // sparsified spectrum and its recovery at the sparsification kappa
    auto [xs, rep] = hscs::sparsify(x, threshold);
    const hscs::Spectrum f_spf = hscs::synthesize(psi, xs.values).spectrum;
    print_pair("sparsified vs original (T=" + std::to_string(threshold) + ")",
               xs.values, x, f_spf, f);
    if (rep.kappa > 0) {
        hscs::GompResult spf_rec = recover(f_spf, rep.kappa);
        print_pair("recovered vs sparsified", spf_rec.x_hat.values, xs.values,
                   hscs::synthesize(psi, spf_rec.x_hat.values).spectrum,
                   f_spf);
        std::cout << "kappa=" << rep.kappa << " SR=" << rep.sparsity_ratio
                  << "% iterations=" << spf_rec.iterations << "\n";
    } else {
        std::cout << "kappa=0 (all-zero transform vector), recovery skipped\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperspectral compressive-sensing toolkit (DFT "
                 "sparsification + gOMP recovery)"};
    app.require_subcommand(1);

    // gen-phantom
    std::string gp_dims, gp_out;
    std::size_t gp_kappa = 1;
    std::uint64_t gp_seed = 0;
    CLI::App* gen = app.add_subcommand(
        "gen-phantom", "generate a synthetic cube with planted sparsity");
    gen->add_option("--dims", gp_dims, "cube dimensions XxYxZ")->required();
    gen->add_option("--kappa", gp_kappa, "planted sparsity per pixel")
        ->required();
    gen->add_option("--seed", gp_seed, "RNG seed")->default_val(0);
    gen->add_option("--out", gp_out, "output cube path")->required();

    // sparsify
    std::string sp_in, sp_out, sp_report;
    double sp_t = 0.0;
    CLI::App* spf = app.add_subcommand("sparsify",
                                       "threshold a cube in the DFT domain");
    spf->add_option("--in", sp_in)->required();
    spf->add_option("--T", sp_t, "threshold percent")->required();
    spf->add_option("--out", sp_out)->required();
    spf->add_option("--report", sp_report, "optional JSON report path");

    // shared pipeline-style flags
    struct PipelineFlags {
        std::string in;
        double threshold = 0.0;
        double compression = 2.5;
        std::size_t measurements = 0;
        std::size_t group = 2;
        std::size_t kappa = 0;  // 0 = from sparsification
        double epsilon = 1e-6;
        bool absolute_epsilon = false;
        std::size_t max_iterations = 0;
        std::uint64_t seed = 0;
        bool shared_phi = false;
        std::size_t threads = 0;
    };
    auto add_pipeline_flags = [](CLI::App* cmd, PipelineFlags& f,
                                 bool need_t) {
        cmd->add_option("--in", f.in, "input cube")->required();
        auto* t = cmd->add_option("--T", f.threshold,
                                  "sparsification threshold percent");
        if (need_t) t->required();
        cmd->add_option("--compression", f.compression,
                        "compression factor (M = round(N/factor))");
        cmd->add_option("--measurements", f.measurements,
                        "explicit M (overrides --compression)");
        cmd->add_option("--G", f.group, "atoms per gOMP iteration");
        cmd->add_option("--kappa", f.kappa,
                        "fixed sparsity target (default: per-pixel from "
                        "sparsification)");
        cmd->add_option("--epsilon", f.epsilon, "gOMP stopping threshold");
        cmd->add_flag("--absolute-epsilon", f.absolute_epsilon,
                      "treat --epsilon as absolute, not relative to ||y||");
        cmd->add_option("--max-iterations", f.max_iterations);
        cmd->add_option("--seed", f.seed, "global RNG seed");
        cmd->add_flag("--shared-phi", f.shared_phi,
                      "one measurement matrix for all pixels");
        cmd->add_option("--threads", f.threads,
                        "worker threads (0 = hardware)");
    };

    PipelineFlags pl;
    double pl_max_fail = 0.01;
    std::string pl_out_dir = "hscs_out", pl_diag;
    CLI::App* pipe = app.add_subcommand(
        "pipeline", "sparsify, compress, recover, and report on a cube");
    add_pipeline_flags(pipe, pl, true);
    pipe->add_option("--max-fail", pl_max_fail,
                     "tolerated failed-pixel fraction");
    pipe->add_option("--out-dir", pl_out_dir, "output directory");
    pipe->add_option("--pixel-diag", pl_diag, "per-pixel diagnostics CSV");

    // metrics
    std::string mt_a, mt_ref;
    CLI::App* met = app.add_subcommand("metrics",
                                       "band-averaged PSNR/SSI of two cubes");
    met->add_option("--a", mt_a)->required();
    met->add_option("--ref", mt_ref)->required();

    // sweep
    PipelineFlags sw;
    std::string sw_t_list, sw_kappa_list, sw_m_list, sw_out;
    std::size_t sw_n = 0, sw_trials = 20;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "threshold sweep over a cube, or a (kappa, M) trial grid");
    sweep->add_option("--in", sw.in, "input cube (threshold mode)");
    sweep->add_option("--T-list", sw_t_list, "comma-separated thresholds");
    sweep->add_option("--kappa-list", sw_kappa_list,
                      "comma-separated sparsity levels (grid mode)");
    sweep->add_option("--M-list", sw_m_list,
                      "comma-separated measurement counts (grid mode)");
    sweep->add_option("--N", sw_n, "spectral length (grid mode)");
    sweep->add_option("--trials", sw_trials, "seeded trials per grid cell");
    sweep->add_option("--G", sw.group, "atoms per gOMP iteration");
    sweep->add_option("--compression", sw.compression);
    sweep->add_option("--seed", sw.seed);
    sweep->add_option("--threads", sw.threads);
    sweep->add_option("--out", sw_out, "CSV output path (default stdout)");

    // recover-pixel
    PipelineFlags rp;
    std::size_t rp_x = 0, rp_y = 0;
    CLI::App* rpix = app.add_subcommand(
        "recover-pixel", "single-spectrum debug recovery with metric triads");
    rpix->add_option("--in", rp.in)->required();
    rpix->add_option("--x", rp_x)->required();
    rpix->add_option("--y", rp_y)->required();
    rpix->add_option("--T", rp.threshold)->required();
    rpix->add_option("--compression", rp.compression);
    rpix->add_option("--G", rp.group);
    rpix->add_option("--kappa", rp.kappa, "fixed kappa for the raw recovery")
        ->default_val(15);
    rpix->add_option("--seed", rp.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen_phantom(gp_dims, gp_kappa, gp_seed, gp_out);
        if (spf->parsed()) return cmd_sparsify(sp_in, sp_t, sp_out, sp_report);
        if (pipe->parsed()) {
            hscs::PipelineConfig cfg = pipeline_config_from_flags(
                pl.threshold, pl.compression, pl.measurements, pl.group,
                pl.kappa, pl.epsilon, pl.absolute_epsilon, pl.max_iterations,
                pl.seed, pl.shared_phi, pl.threads);
            return cmd_pipeline(pl.in, cfg, pl_max_fail, pl_out_dir, pl_diag);
        }
        if (met->parsed()) return cmd_metrics(mt_a, mt_ref);
        if (sweep->parsed()) {
            std::ofstream file;
            std::ostream* os = &std::cout;
            if (!sw_out.empty()) {
                file.open(sw_out);
                if (!file) throw hscs::IoError("cannot open '" + sw_out + "'");
                os = &file;
            }
            if (!sw_kappa_list.empty() || !sw_m_list.empty()) {
                if (sw_kappa_list.empty() || sw_m_list.empty() || sw_n == 0) {
                    std::cerr << "usage error: grid mode needs --kappa-list, "
                                 "--M-list, and --N\n";
                    return kExitUsage;
                }
                return cmd_sweep_grid(sw_n, parse_size_list(sw_kappa_list),
                                      parse_size_list(sw_m_list), sw.group,
                                      sw_trials, sw.seed, *os);
            }
            if (sw.in.empty() || sw_t_list.empty()) {
                std::cerr << "usage error: threshold mode needs --in and a "
                             "non-empty --T-list\n";
                return kExitUsage;
            }
            std::vector<double> t_list = parse_double_list(sw_t_list);
            if (t_list.empty()) {
                std::cerr << "usage error: empty --T-list\n";
                return kExitUsage;
            }
            hscs::PipelineConfig cfg = pipeline_config_from_flags(
                0.0, sw.compression, sw.measurements, sw.group, sw.kappa,
                sw.epsilon, sw.absolute_epsilon, sw.max_iterations, sw.seed,
                sw.shared_phi, sw.threads);
            return cmd_sweep_thresholds(sw.in, t_list, cfg, *os);
        }
        if (rpix->parsed())
            return cmd_recover_pixel(rp.in, rp_x, rp_y, rp.threshold,
                                     rp.compression, rp.group, rp.kappa,
                                     rp.seed);
    } catch (const hscs::IoError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const hscs::ContractViolation& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
