#ifndef HSCS_LINALG_HPP
#define HSCS_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "hscs/common.hpp"

namespace hscs {

/// Dense complex vector, the raw carrier for y, p, r, s and x.
class CVector {
public:
    CVector() = default;
    explicit CVector(std::size_t len, Complex fill = Complex{0.0, 0.0})
        : entries_(len, fill) {}
    explicit CVector(std::vector<Complex> entries)
        : entries_(std::move(entries)) {}

    std::size_t size() const noexcept { return entries_.size(); }
    Complex& operator[](std::size_t i) { return entries_[i]; }
    Complex operator[](std::size_t i) const { return entries_[i]; }

    const std::vector<Complex>& entries() const noexcept { return entries_; }
    std::vector<Complex>& entries() noexcept { return entries_; }

    bool all_finite() const {
        return std::all_of(entries_.begin(), entries_.end(), is_finite);
    }

    friend bool operator==(const CVector&, const CVector&) = default;

private:
    std::vector<Complex> entries_;
};

/// Dense row-major complex matrix. Real operators (Phi) are embedded with
/// zero imaginary part.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) {
        return entries_[r * cols_ + c];
    }
    Complex operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    const std::vector<Complex>& entries() const noexcept { return entries_; }

    CVector column(std::size_t c) const {
        CVector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    /// Matrix whose columns are this matrix's columns at the given indices.
    CMatrix select_columns(const std::vector<std::size_t>& idx) const {
        CMatrix out(rows_, idx.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t j = 0; j < idx.size(); ++j)
                out(r, j) = (*this)(r, idx[j]);
        return out;
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
        return m;
    }

    bool all_finite() const {
        return std::all_of(entries_.begin(), entries_.end(), is_finite);
    }

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

inline CMatrix conj_transpose(const CMatrix& m) {
    CMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(c, r) = std::conj(m(r, c));
    return out;
}

inline CVector matvec(const CMatrix& m, const CVector& v) {
    require(m.cols() == v.size(), "matvec: dimension mismatch");
    CVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex acc{0.0, 0.0};
        for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    require(a.cols() == b.rows(), "matmul: dimension mismatch");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < b.cols(); ++c)
                out(r, c) += ark * b(k, c);
        }
    return out;
}

inline double l2_norm(const CVector& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += std::norm(v[i]);
    return std::sqrt(acc);
}

/// Indices of the k largest magnitudes; ties go to the lower index; the
/// result is sorted ascending by index.
inline std::vector<std::size_t> argmax_k(const std::vector<double>& magnitudes,
                                         std::size_t k) {
    require(k >= 1, "argmax_k: k must be >= 1");
    require(k <= magnitudes.size(), "argmax_k: k exceeds vector length");
    std::vector<std::size_t> idx(magnitudes.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // stable partial sort keeps the lowest index first among equal values
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) {
                         return magnitudes[a] > magnitudes[b];
                     });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

namespace detail {

/// In-place Householder QR of a tall m x n matrix (m >= n), also applying
/// the reflections to the right-hand side. On return `a` holds R in its
/// upper triangle.
inline void householder_qr_apply(CMatrix& a, CVector& rhs) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    for (std::size_t k = 0; k < n; ++k) {
        double colnorm = 0.0;
        for (std::size_t r = k; r < m; ++r) colnorm += std::norm(a(r, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm == 0.0) continue;

        // alpha = -exp(i*arg(a_kk)) * ||x||, so v = x - alpha*e1 never cancels
        const Complex akk = a(k, k);
        const Complex phase =
            (std::abs(akk) == 0.0) ? Complex{1.0, 0.0} : akk / std::abs(akk);
        const Complex alpha = -phase * colnorm;

        std::vector<Complex> v(m - k);
        v[0] = akk - alpha;
        for (std::size_t r = k + 1; r < m; ++r) v[r - k] = a(r, k);
        double vnorm2 = 0.0;
        for (const Complex& z : v) vnorm2 += std::norm(z);
        if (vnorm2 == 0.0) continue;

        auto reflect = [&](auto&& get, auto&& set) {
            Complex dot{0.0, 0.0};
            for (std::size_t r = k; r < m; ++r)
                dot += std::conj(v[r - k]) * get(r);
            const Complex scale = 2.0 * dot / vnorm2;
            for (std::size_t r = k; r < m; ++r)
                set(r, get(r) - scale * v[r - k]);
        };

        for (std::size_t c = k; c < n; ++c)
            reflect([&](std::size_t r) { return a(r, c); },
                    [&](std::size_t r, Complex z) { a(r, c) = z; });
        reflect([&](std::size_t r) { return rhs[r]; },
                [&](std::size_t r, Complex z) { rhs[r] = z; });

        a(k, k) = alpha;
        for (std::size_t r = k + 1; r < m; ++r) a(r, k) = Complex{0.0, 0.0};
    }
}

}  // namespace detail

/// Least-squares solution of min ||y - B s||_2 for tall-or-square B via
/// Householder QR. Throws RankDeficiencyError when an R diagonal falls
/// below 1e-12 times the largest diagonal.
inline CVector least_squares_solve(const CMatrix& b, const CVector& y) {
    require(b.cols() >= 1, "least_squares_solve: empty system");
    require(b.cols() <= b.rows(),
            "least_squares_solve: underdetermined system (cols > rows)");
    require(b.rows() == y.size(), "least_squares_solve: dimension mismatch");

    CMatrix r = b;
    CVector z = y;
    detail::householder_qr_apply(r, z);

    const std::size_t n = b.cols();
    double max_diag = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        max_diag = std::max(max_diag, std::abs(r(k, k)));
    const double tol = 1e-12 * max_diag;
    std::size_t rank = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(r(k, k)) > tol) ++rank;
    if (rank < n)
        throw RankDeficiencyError(
            "least_squares_solve: rank-deficient system (numerical rank " +
                std::to_string(rank) + " of " + std::to_string(n) + ")",
            rank);

    CVector s(n);
    for (std::size_t i = n; i-- > 0;) {
        Complex acc = z[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= r(i, j) * s[j];
        s[i] = acc / r(i, i);
    }
    return s;
}

}  // namespace hscs

#endif  // HSCS_LINALG_HPP
