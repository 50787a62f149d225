#ifndef HSCS_GOMP_HPP
#define HSCS_GOMP_HPP

#include <chrono>
#include <cstddef>
#include <vector>

#include "hscs/linalg.hpp"
#include "hscs/sensing.hpp"
#include "hscs/sparsify.hpp"

namespace hscs {

struct GompConfig {
    std::size_t kappa = 1;       // target sparsity
    std::size_t group_size = 1;  // atoms identified per iteration (G)
    double epsilon = 1e-6;       // stopping threshold on Delta
    bool epsilon_relative = true;  // scale epsilon by ||y||_2
    std::size_t max_iterations = 0;  // 0 -> ceil(kappa/G) + 20
    double zero_input_tol = 1e-12;
    bool record_trace = false;

    std::size_t resolved_max_iterations() const {
        if (max_iterations > 0) return max_iterations;
        return (kappa + group_size - 1) / group_size + 20;
    }

    void validate() const {
        require(kappa >= 1, "gomp: kappa must be >= 1");
        require(group_size >= 1, "gomp: group size must be >= 1");
        require(group_size <= kappa, "gomp: group size must not exceed kappa");
        require(epsilon > 0.0, "gomp: epsilon must be positive");
        require(resolved_max_iterations() >= 1, "gomp: max iterations >= 1");
    }
};

/// Per-iteration snapshot for diagnostics and invariant tests.
struct GompIterationTrace {
    std::vector<std::size_t> support;         // c^i after the union
    CVector estimate;                         // s over the union support
    std::vector<std::size_t> pruned_support;  // q^i
    CVector pruned_estimate;                  // s over q^i
    double residual_norm = 0.0;
    double delta = 0.0;
};

struct GompResult {
    SparseVector x_hat;
    std::size_t iterations = 0;
    bool converged = false;
    double final_delta = 0.0;
    std::vector<double> residual_norm_history;
    double elapsed_seconds = 0.0;
    std::vector<GompIterationTrace> trace;
};

/// Step 1: p = A* r, then the largest-|p| indices outside `exclude`.
/// Returns fewer than g indices when fewer candidates remain.
inline std::vector<std::size_t> step_identify(
    const Dictionary& a, const CVector& r, std::size_t g,
    const std::vector<std::size_t>& exclude) {
    require(r.size() == a.rows(), "step_identify: dimension mismatch");
    const std::size_t n = a.cols();
    std::vector<bool> excluded(n, false);
    for (std::size_t idx : exclude) excluded[idx] = true;

    std::vector<double> mags;
    std::vector<std::size_t> candidates;
    mags.reserve(n);
    candidates.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
        if (excluded[c]) continue;
        Complex dot{0.0, 0.0};
        for (std::size_t row = 0; row < a.rows(); ++row)
            dot += std::conj(a.matrix(row, c)) * r[row];
        mags.push_back(std::abs(dot));
        candidates.push_back(c);
    }
    if (candidates.empty()) return {};
    const std::size_t take = std::min(g, candidates.size());
    std::vector<std::size_t> picked = argmax_k(mags, take);
    std::vector<std::size_t> theta;
    theta.reserve(take);
    for (std::size_t i : picked) theta.push_back(candidates[i]);
    return theta;
}

/// Step 2 (and step 3's re-fit): s = B^+ y over the support columns.
inline CVector step_estimate(const Dictionary& a,
                             const std::vector<std::size_t>& support,
                             const Measurement& y) {
    require(!support.empty(), "step_estimate: empty support");
    require(support.size() <= a.rows(),
            "step_estimate: support larger than measurement count");
    CVector yc(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) yc[i] = Complex{y.values[i], 0.0};
    return least_squares_solve(a.matrix.select_columns(support), yc);
}

/// Step 3: indices of the kappa largest-modulus entries of the scattered
/// candidate, or every nonzero index when fewer than kappa exist.
inline std::vector<std::size_t> step_prune(const CVector& x_candidate,
                                           std::size_t kappa) {
    std::vector<std::size_t> nonzero;
    std::vector<double> mags;
    for (std::size_t i = 0; i < x_candidate.size(); ++i) {
        if (x_candidate[i] == Complex{0.0, 0.0}) continue;
        nonzero.push_back(i);
        mags.push_back(std::abs(x_candidate[i]));
    }
    if (nonzero.size() <= kappa) return nonzero;
    std::vector<std::size_t> picked = argmax_k(mags, kappa);
    std::vector<std::size_t> q;
    q.reserve(kappa);
    for (std::size_t i : picked) q.push_back(nonzero[i]);
    return q;
}

/// Step 4: r = y - A x and Delta = ||r - r_prev||_2.
inline std::pair<CVector, double> step_residual(const Measurement& y,
                                                const Dictionary& a,
                                                const CVector& x,
                                                const CVector& prev_r) {
    require(y.size() == a.rows() && x.size() == a.cols() &&
                prev_r.size() == a.rows(),
            "step_residual: dimension mismatch");
    CVector ax = matvec(a.matrix, x);
    CVector r(y.size());
    CVector diff(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        r[i] = Complex{y.values[i], 0.0} - ax[i];
        diff[i] = r[i] - prev_r[i];
    }
    return {std::move(r), l2_norm(diff)};
}

namespace detail {
inline CVector scatter(const std::vector<std::size_t>& idx, const CVector& s,
                       std::size_t n) {
    CVector x(n);
    for (std::size_t i = 0; i < idx.size(); ++i) x[idx[i]] = s[i];
    return x;
}
}  // namespace detail

/// Generalized OMP: identify G atoms by projection magnitude, least-squares
/// over the accumulated support, prune to the kappa largest with a re-fit,
/// and stop when consecutive residuals differ by less than epsilon.
inline GompResult gomp_recover(const Measurement& y, const Dictionary& a,
                               const GompConfig& config) {
    config.validate();
    require(y.size() == a.rows(), "gomp_recover: dimension mismatch");
    require(a.cols() >= config.kappa,
            "gomp_recover: kappa exceeds dictionary size");

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = a.cols();
    const std::size_t m = a.rows();
    GompResult result;
    result.x_hat.values = CVector(n);
    result.x_hat.kappa = 0;

    CVector y_c(m);
    for (std::size_t i = 0; i < m; ++i) y_c[i] = Complex{y.values[i], 0.0};
    const double y_norm = l2_norm(y_c);
    if (y_norm <= config.zero_input_tol) {
        // zero-input guard: nothing to recover
        result.converged = true;
        return result;
    }

    const double eps = config.epsilon * (config.epsilon_relative ? y_norm : 1.0);
    const std::size_t max_iter = config.resolved_max_iterations();

    CVector r = y_c;
    std::vector<std::size_t> support;  // c^i, grows across iterations
    CVector x(n);
    double delta = 1.0;

    for (std::size_t i = 0; i < max_iter && delta >= eps; ++i) {
        // the support can hold at most M atoms before B turns underdetermined
        if (support.size() >= std::min(m, n)) break;
        const std::size_t g =
            std::min(config.group_size, std::min(m, n) - support.size());
        std::vector<std::size_t> theta = step_identify(a, r, g, support);
        if (theta.empty()) break;
        support.insert(support.end(), theta.begin(), theta.end());
        std::sort(support.begin(), support.end());

        try {
            CVector s_union = step_estimate(a, support, y);
            CVector x_candidate = detail::scatter(support, s_union, n);
            std::vector<std::size_t> q = step_prune(x_candidate, config.kappa);
            CVector s_pruned = step_estimate(a, q, y);
            x = detail::scatter(q, s_pruned, n);

            auto [r_next, d] = step_residual(y, a, x, r);
            r = std::move(r_next);
            delta = d;
            ++result.iterations;
            const double r_norm = l2_norm(r);
            result.residual_norm_history.push_back(r_norm);
            // an exactly-fit residual needs no second pass to observe
            // delta = 0; treat ||r|| below the stopping scale as converged
            if (r_norm < eps) delta = 0.0;
            if (config.record_trace) {
                GompIterationTrace tr;
                tr.support = support;
                tr.estimate = std::move(s_union);
                tr.pruned_support = std::move(q);
                tr.pruned_estimate = std::move(s_pruned);
                tr.residual_norm = result.residual_norm_history.back();
                tr.delta = delta;
                result.trace.push_back(std::move(tr));
            }
        } catch (const RankDeficiencyError& e) {
            std::string msg = std::string(e.what()) + "; support = {";
            for (std::size_t k = 0; k < support.size(); ++k)
                msg += (k ? "," : "") + std::to_string(support[k]);
            msg += "}";
            throw RankDeficiencyError(msg, e.numerical_rank());
        }
    }

    result.final_delta = delta;
    result.converged = delta < eps;
    result.x_hat.values = std::move(x);
    result.x_hat.kappa = sparsity_level(result.x_hat.values);
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return result;
}

}  // namespace hscs

#endif  // HSCS_GOMP_HPP
