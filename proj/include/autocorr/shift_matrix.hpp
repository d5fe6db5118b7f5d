#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "autocorr/errors.hpp"

namespace autocorr {

// d x n matrix of shift directions, stored row-major.  Column j is the
// direction a_j multiplied by the shift parameter t.
class ShiftMatrix {
public:
    ShiftMatrix(std::size_t d, std::size_t n, std::vector<double> entries)
        : d_(d), n_(n), entries_(std::move(entries)) {
        if (d_ == 0 || n_ == 0) throw DimensionMismatch("shift matrix must be nonempty");
        if (entries_.size() != d_ * n_)
            throw DimensionMismatch("shift matrix entry count does not match d*n");
        for (double e : entries_)
            if (!std::isfinite(e)) throw Error("shift matrix entries must be finite");
    }

    static ShiftMatrix bs() { return ShiftMatrix(1, 2, {0.0, 1.0}); }

    static ShiftMatrix identity(std::size_t n) {
        std::vector<double> e(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
        return ShiftMatrix(n, n, std::move(e));
    }

    std::size_t d() const { return d_; }
    std::size_t n() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> c(d_);
        for (std::size_t i = 0; i < d_; ++i) c[i] = at(i, j);
        return c;
    }

private:
    std::size_t d_;
    std::size_t n_;
    std::vector<double> entries_;
};

// B = [ones; A]: the columns are the lifted directions (1, a_j) in R^{d+1}.
inline std::vector<std::vector<double>> build_B(const ShiftMatrix& A) {
    std::vector<std::vector<double>> B(A.d() + 1, std::vector<double>(A.n()));
    for (std::size_t j = 0; j < A.n(); ++j) {
        B[0][j] = 1.0;
        for (std::size_t i = 0; i < A.d(); ++i) B[i + 1][j] = A.at(i, j);
    }
    return B;
}

namespace detail {

// Numerical rank by one-sided Jacobi orthogonalization of the columns.
// Transposes first when there are more columns than rows; the singular
// values are unchanged.
inline std::size_t numeric_rank(std::size_t rows, std::size_t cols,
                                std::vector<double> a /*row-major*/, double tol) {
    if (cols > rows) {
        std::vector<double> at(rows * cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) at[c * rows + r] = a[r * cols + c];
        std::swap(rows, cols);
        a = std::move(at);
    }
    auto dot = [&](std::size_t p, std::size_t q) {
        double s = 0.0;
        for (std::size_t r = 0; r < rows; ++r) s += a[r * cols + p] * a[r * cols + q];
        return s;
    };
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool converged = true;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                const double app = dot(p, p), aqq = dot(q, q), apq = dot(p, q);
                if (app == 0.0 || aqq == 0.0) continue;
                if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq)) continue;
                converged = false;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t r = 0; r < rows; ++r) {
                    const double xp = a[r * cols + p], xq = a[r * cols + q];
                    a[r * cols + p] = c * xp - s * xq;
                    a[r * cols + q] = s * xp + c * xq;
                }
            }
        }
        if (converged) break;
    }
    std::vector<double> sigma(cols);
    double smax = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        sigma[j] = std::sqrt(dot(j, j));
        smax = std::max(smax, sigma[j]);
    }
    std::size_t rank = 0;
    for (double s : sigma)
        if (s > tol * smax) ++rank;
    return rank;
}

// Determinant of a dense d x d matrix by LU with partial pivoting.
inline double det_lu(std::size_t d, std::vector<double> m) {
    double det = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < d; ++r)
            if (std::abs(m[r * d + k]) > std::abs(m[piv * d + k])) piv = r;
        if (m[piv * d + k] == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t c = 0; c < d; ++c) std::swap(m[k * d + c], m[piv * d + c]);
            det = -det;
        }
        det *= m[k * d + k];
        for (std::size_t r = k + 1; r < d; ++r) {
            const double factor = m[r * d + k] / m[k * d + k];
            for (std::size_t c = k; c < d; ++c) m[r * d + c] -= factor * m[k * d + c];
        }
    }
    return det;
}

}  // namespace detail

struct FinitenessVerdict {
    bool guaranteed_finite = false;
    int rank_of_B = 0;
};

// The functional is guaranteed finite for every integrable f exactly when
// the lifted directions (1, a_j) are linearly independent, i.e. B has full
// column rank.
inline FinitenessVerdict finiteness_check(const ShiftMatrix& A, double tol = 1e-10) {
    const std::size_t rows = A.d() + 1, cols = A.n();
    std::vector<double> flat(rows * cols);
    const auto B = build_B(A);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) flat[r * cols + c] = B[r][c];
    const std::size_t rank = detail::numeric_rank(rows, cols, std::move(flat), tol);
    return FinitenessVerdict{rank == cols, static_cast<int>(rank)};
}

struct BlResult {
    double D = 0.0;
    std::vector<double> lambda;
};

struct BlOptions {
    double rel_tol = 1e-10;
    int max_sweeps = 400;
};

// Transversality constant for n = d+1 directions: minimize
// det(sum_i lambda_i a_i a_i^T) under the gauge prod(lambda) = 1.  The
// objective det(M)/prod(lambda)^{d/n} is scale invariant, so we run
// unconstrained coordinate descent and rescale at the end.  Per coordinate,
// det(M_{-i} + lambda a_i a_i^T) = alpha + beta*lambda is affine (matrix
// determinant lemma), which gives the minimizer in closed form.
inline BlResult bl_constant(const ShiftMatrix& A, const BlOptions& opts = {}) {
    const std::size_t d = A.d(), n = A.n();
    if (n != d + 1)
        throw DimensionMismatch("transversality constant needs n = d + 1 columns");
    for (std::size_t j = 0; j < n; ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < d; ++i)
            if (A.at(i, j) != 0.0) zero = false;
        if (zero) throw ZeroColumn();
    }

    std::vector<double> lambda(n, 1.0);
    const double p = static_cast<double>(d) / static_cast<double>(n);

    auto gram = [&](const std::vector<double>& lam, std::size_t skip) {
        std::vector<double> m(d * d, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == skip) continue;
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c)
                    m[r * d + c] += lam[j] * A.at(r, j) * A.at(c, j);
        }
        return m;
    };
    auto objective = [&](const std::vector<double>& lam) {
        double prod = 1.0;
        for (double l : lam) prod *= l;
        return detail::det_lu(d, gram(lam, n)) / std::pow(prod, p);
    };

    double prev = objective(lambda);
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double> base = gram(lambda, i);
            const double alpha = detail::det_lu(d, base);
            std::vector<double> bumped = base;
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c)
                    bumped[r * d + c] += A.at(r, i) * A.at(c, i);
            const double beta = detail::det_lu(d, bumped) - alpha;
            if (alpha <= 0.0 || beta <= 0.0) continue;  // singular direction, leave as is
            const double cand = p * alpha / ((1.0 - p) * beta);
            if (!std::isfinite(cand)) continue;
            // box the step: when a column subset is rank deficient the
            // objective has infimum zero along a runaway direction, and the
            // returned witness must stay finite, positive and well enough
            // conditioned that det(gram(lambda)) reproduces D
            lambda[i] = std::clamp(cand, 1e-4, 1e4);
        }
        const double cur = objective(lambda);
        if (std::abs(prev - cur) <= opts.rel_tol * std::max(std::abs(prev), 1e-300)) {
            prev = cur;
            break;
        }
        prev = cur;
    }

    double prod = 1.0;
    for (double l : lambda) prod *= l;
    const double scale = std::pow(prod, 1.0 / static_cast<double>(n));
    for (double& l : lambda) l /= scale;
    prod = 1.0;
    for (double l : lambda) prod *= l;

    BlResult out;
    out.lambda = lambda;
    out.D = detail::det_lu(d, gram(lambda, n)) / prod;
    return out;
}

// Upper bound (1/sqrt(D)) on the functional ratio implied by the
// transversality constant.
inline double bl_ratio_bound(double D, double tol = 1e-12) {
    if (D <= tol) throw DegenerateD();
    return 1.0 / std::sqrt(D);
}

inline double bl_ratio_bound(const ShiftMatrix& A, double tol = 1e-12) {
    return bl_ratio_bound(bl_constant(A).D, tol);
}

}  // namespace autocorr
