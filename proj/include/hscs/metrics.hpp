#ifndef HSCS_METRICS_HPP
#define HSCS_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hscs/common.hpp"
#include "hscs/linalg.hpp"

namespace hscs {

struct SsiParams {
    std::size_t window = 8;     // 2-D window side
    std::size_t window_1d = 11; // 1-D window length
    double k1 = 0.01;
    double k2 = 0.03;
};

struct QualityReport {
    double psnr_db = 0.0;
    double ssi = 0.0;
    std::size_t capped_psnr_bands = 0;  // bands whose PSNR hit the cap
};

inline double mse(std::span<const double> a, std::span<const double> ref) {
    require(a.size() == ref.size() && !a.empty(), "mse: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - ref[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

/// 10*log10(R^2 / MSE) with R = max(ref). MSE = 0 maps to +inf; a
/// degenerate reference (R = 0 with nonzero error) maps to -inf.
inline double psnr(std::span<const double> a, std::span<const double> ref) {
    const double err = mse(a, ref);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    const double r = *std::max_element(ref.begin(), ref.end());
    if (r == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(r * r / err);
}

/// PSNR of complex vectors on the stacked (real, imaginary) representation.
inline double psnr_complex(const CVector& a, const CVector& ref) {
    require(a.size() == ref.size(), "psnr_complex: shape mismatch");
    std::vector<double> sa(2 * a.size()), sr(2 * a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa[i] = a[i].real();
        sa[a.size() + i] = a[i].imag();
        sr[i] = ref[i].real();
        sr[ref.size() + i] = ref[i].imag();
    }
    return psnr(sa, sr);
}

namespace detail {

struct WindowStats {
    double mu_a, mu_b, var_a, var_b, cov;
};

inline double ssim_term(const WindowStats& w, double c1, double c2) {
    return ((2.0 * w.mu_a * w.mu_b + c1) * (2.0 * w.cov + c2)) /
           ((w.mu_a * w.mu_a + w.mu_b * w.mu_b + c1) *
            (w.var_a + w.var_b + c2));
}

/// Mean SSIM over windows enumerated by a caller-supplied walker, clamped
/// to [0, 1]; the raw (unclamped) mean is reported alongside.
template <class WindowWalker>
std::pair<double, double> ssim_mean(std::span<const double> ref, double k1,
                                    double k2, WindowWalker&& walk) {
    double lo = ref[0], hi = ref[0];
    for (double v : ref) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double range = hi - lo;
    if (range <= 0.0) range = 1.0;  // keep the stabilizers positive
    const double c1 = (k1 * range) * (k1 * range);
    const double c2 = (k2 * range) * (k2 * range);

    double acc = 0.0;
    std::size_t count = 0;
    walk([&](const WindowStats& w) {
        acc += ssim_term(w, c1, c2);
        ++count;
    });
    const double raw = acc / static_cast<double>(count);
    return {std::clamp(raw, 0.0, 1.0), raw};
}

inline WindowStats window_stats(std::span<const double> a,
                                std::span<const double> b,
                                std::span<const std::size_t> idx) {
    WindowStats w{0, 0, 0, 0, 0};
    const double inv = 1.0 / static_cast<double>(idx.size());
    for (std::size_t i : idx) {
        w.mu_a += a[i];
        w.mu_b += b[i];
    }
    w.mu_a *= inv;
    w.mu_b *= inv;
    for (std::size_t i : idx) {
        const double da = a[i] - w.mu_a;
        const double db = b[i] - w.mu_b;
        w.var_a += da * da;
        w.var_b += db * db;
        w.cov += da * db;
    }
    w.var_a *= inv;
    w.var_b *= inv;
    w.cov *= inv;
    return w;
}

}  // namespace detail

struct SsiResult {
    double value = 0.0;  // clamped to [0, 1]
    double raw = 0.0;    // unclamped mean SSIM
};

/// Band-wise SSIM with uniform windows, stride 1. Images smaller than the
/// window collapse to one whole-image window.
inline SsiResult ssi(std::span<const double> a, std::span<const double> ref,
                     std::size_t width, std::size_t height,
                     const SsiParams& params = {}) {
    require(a.size() == ref.size() && a.size() == width * height && !a.empty(),
            "ssi: shape mismatch");
    const std::size_t win = params.window;
    const std::size_t wx = std::min(win, width);
    const std::size_t wy = std::min(win, height);

    std::vector<std::size_t> idx(wx * wy);
    auto walk = [&](auto&& visit) {
        for (std::size_t y0 = 0; y0 + wy <= height; ++y0)
            for (std::size_t x0 = 0; x0 + wx <= width; ++x0) {
                std::size_t k = 0;
                for (std::size_t y = y0; y < y0 + wy; ++y)
                    for (std::size_t x = x0; x < x0 + wx; ++x)
                        idx[k++] = y * width + x;
                visit(detail::window_stats(a, ref, idx));
            }
    };
    auto [value, raw] = detail::ssim_mean(ref, params.k1, params.k2, walk);
    return {value, raw};
}

/// SSIM over a sliding 1-D window, for single-spectrum comparisons.
inline SsiResult ssi_1d(std::span<const double> a, std::span<const double> ref,
                        const SsiParams& params = {}) {
    require(a.size() == ref.size() && !a.empty(), "ssi_1d: shape mismatch");
    const std::size_t win = std::min(params.window_1d, a.size());
    std::vector<std::size_t> idx(win);
    auto walk = [&](auto&& visit) {
        for (std::size_t s = 0; s + win <= a.size(); ++s) {
            for (std::size_t k = 0; k < win; ++k) idx[k] = s + k;
            visit(detail::window_stats(a, ref, idx));
        }
    };
    auto [value, raw] = detail::ssim_mean(ref, params.k1, params.k2, walk);
    return {value, raw};
}

/// SSI of complex vectors on the stacked (real, imaginary) representation.
inline SsiResult ssi_complex(const CVector& a, const CVector& ref,
                             const SsiParams& params = {}) {
    require(a.size() == ref.size(), "ssi_complex: shape mismatch");
    std::vector<double> sa(2 * a.size()), sr(2 * a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa[i] = a[i].real();
        sa[a.size() + i] = a[i].imag();
        sr[i] = ref[i].real();
        sr[ref.size() + i] = ref[i].imag();
    }
    return ssi_1d(sa, sr, params);
}

struct PerfReport {
    std::size_t total_iterations_J = 0;
    double recovery_time_t = 0.0;
    std::size_t pixels_recovered = 0;
    std::size_t pixels_failed = 0;
};

}  // namespace hscs

#endif  // HSCS_METRICS_HPP
