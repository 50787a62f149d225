#ifndef HSCS_SPARSIFY_HPP
#define HSCS_SPARSIFY_HPP

#include <cstddef>
#include <utility>

#include "hscs/linalg.hpp"

namespace hscs {

/// Transform-domain vector with tracked sparsity level.
struct SparseVector {
    CVector values;
    std::size_t kappa = 0;  // exact nonzero count
};

struct SparsifyReport {
    double threshold_T = 0.0;    // percent
    std::size_t kappa = 0;       // nonzeros after thresholding
    double sparsity_ratio = 0.0; // percent of zeros
};

/// Number of entries with nonzero modulus.
inline std::size_t sparsity_level(const CVector& x) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != Complex{0.0, 0.0}) ++count;
    return count;
}

/// Percentage of exactly-zero entries.
inline double sparsity_ratio(const CVector& x) {
    if (x.size() == 0) return 100.0;
    const std::size_t zeros = x.size() - sparsity_level(x);
    return 100.0 * static_cast<double>(zeros) / static_cast<double>(x.size());
}

/// Zeroes entries whose modulus is strictly below (T/100)*max(|x|); the
/// strict inequality keeps threshold ties, so the peak always survives.
inline std::pair<SparseVector, SparsifyReport> sparsify(const CVector& x,
                                                        double threshold_T) {
    require(x.size() >= 1, "sparsify: empty vector");
    require(threshold_T >= 0.0 && threshold_T <= 100.0,
            "sparsify: T must lie in [0, 100]");
    double max_mod = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        max_mod = std::max(max_mod, std::abs(x[i]));

    SparseVector out;
    out.values = x;
    const double cutoff = threshold_T / 100.0 * max_mod;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (std::abs(out.values[i]) < cutoff)
            out.values[i] = Complex{0.0, 0.0};
    out.kappa = sparsity_level(out.values);

    SparsifyReport report;
    report.threshold_T = threshold_T;
    report.kappa = out.kappa;
    report.sparsity_ratio = sparsity_ratio(out.values);
    return {std::move(out), report};
}

/// Smallest T (to 1e-6 percent) whose sparsification leaves at most
/// kappa_target nonzeros. kappa(T) is a non-increasing step function, so
/// plain bisection suffices.
inline double calibrate_threshold(const CVector& x, std::size_t kappa_target) {
    const std::size_t nonzeros = sparsity_level(x);
    require(kappa_target >= 1, "calibrate_threshold: target must be >= 1");
    require(kappa_target <= nonzeros,
            "calibrate_threshold: target exceeds nonzero count");

    auto kappa_at = [&](double t) { return sparsify(x, t).second.kappa; };
    if (kappa_at(0.0) <= kappa_target) return 0.0;
    if (kappa_at(100.0) > kappa_target) return 100.0;  // tied maxima

    double lo = 0.0;   // kappa(lo) > target
    double hi = 100.0; // kappa(hi) <= target
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (kappa_at(mid) <= kappa_target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace hscs

#endif  // HSCS_SPARSIFY_HPP
