#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "autocorr/errors.hpp"
#include "autocorr/functional.hpp"
#include "autocorr/grid_function.hpp"
#include "autocorr/shift_matrix.hpp"

namespace autocorr {

// First-variation kernel S(x,t) = sum_j prod_{i != j} f(x + <t, a_i - a_j>).
// For plain autocorrelation this is f(x-t) + f(x+t).
inline double sum_product_S(const GridFunction& f, const ShiftMatrix& A, double x,
                            const ShiftPoint& t) {
    if (t.size() != A.d())
        throw DimensionMismatch("shift point has wrong dimension");
    const std::vector<double> s = detail::scalar_shifts(A, t);
    double sum = 0.0;
    for (std::size_t j = 0; j < A.n(); ++j) {
        double prod = 1.0;
        for (std::size_t i = 0; i < A.n(); ++i) {
            if (i == j) continue;
            prod *= eval_lebesgue(f, x + (s[i] - s[j]));
            if (prod == 0.0) break;
        }
        sum += prod;
    }
    return sum;
}

namespace detail {

// One row of S is piecewise constant in t.  Its value changes only where an
// evaluation point x + t*(a_i - a_j) crosses the cell lattice, so we take
// those crossing times plus the endpoints as primary candidates and the gap
// midpoints (which see the plateau values) as a second pass.  The second
// pass updates on strict improvement only, so reported minimizers prefer
// the crossing times; crossing values are means of the adjacent plateaus
// and never hide an extremum that the midpoints would see.
struct RowCandidates {
    std::vector<double> primary;
    std::vector<double> midpoints;
};

inline RowCandidates row_candidates_1d(const GridFunction& f, const ShiftMatrix& A, double x) {
    RowCandidates out;
    out.primary = {0.0, 1.0};
    const double x0 = f.x0(), h = f.h();
    const double m = static_cast<double>(f.size());
    for (std::size_t i = 0; i < A.n(); ++i) {
        for (std::size_t j = 0; j < A.n(); ++j) {
            if (i == j) continue;
            const double delta = A.at(0, i) - A.at(0, j);
            if (delta == 0.0) continue;
            // lattice index window for 0 < t < 1, padded one cell for roundoff
            const double u0 = (x - x0) / h, u1 = (x + delta - x0) / h;
            const double klo = std::ceil(std::min(u0, u1)) - 1.0;
            const double khi = std::floor(std::max(u0, u1)) + 1.0;
            for (double k = std::max(klo, -1.0); k <= std::min(khi, m + 1.0); k += 1.0) {
                const double t = (x0 + k * h - x) / delta;
                if (t > 0.0 && t < 1.0) out.primary.push_back(t);
            }
        }
    }
    std::sort(out.primary.begin(), out.primary.end());
    out.primary.erase(std::unique(out.primary.begin(), out.primary.end()), out.primary.end());
    for (std::size_t k = 0; k + 1 < out.primary.size(); ++k)
        out.midpoints.push_back(0.5 * (out.primary[k] + out.primary[k + 1]));
    return out;
}

inline std::pair<ShiftPoint, double> row_extremum(const GridFunction& f, const ShiftMatrix& A,
                                                  double x, bool want_min, int resolution) {
    support_hull(f);  // rejects the zero function
    if (A.d() == 1) {
        const RowCandidates cand = row_candidates_1d(f, A, x);
        ShiftPoint arg{cand.primary.front()};
        double best = sum_product_S(f, A, x, {cand.primary.front()});
        auto visit = [&](double t) {
            const double v = sum_product_S(f, A, x, {t});
            if (want_min ? v < best : v > best) {
                best = v;
                arg = {t};
            }
        };
        for (std::size_t k = 1; k < cand.primary.size(); ++k) visit(cand.primary[k]);
        for (double t : cand.midpoints) visit(t);
        return {arg, best};
    }

    // d >= 2: lattice scan plus coordinate descent, as for the functional
    const std::size_t d = A.d();
    if (resolution < 2) throw Error("shift grid needs at least two points per axis");
    double total = 1.0;
    for (std::size_t r = 0; r < d; ++r) {
        total *= static_cast<double>(resolution);
        if (total > 16777216.0) throw TooLarge("shift grid exceeds 2^24 points");
    }
    const double step0 = 1.0 / static_cast<double>(resolution - 1);
    ShiftPoint arg(d, 0.0), t(d, 0.0);
    std::vector<int> idx(d, 0);
    double best = 0.0;
    bool first = true;
    for (;;) {
        for (std::size_t r = 0; r < d; ++r) t[r] = idx[r] * step0;
        const double v = sum_product_S(f, A, x, t);
        if (first || (want_min ? v < best : v > best)) {
            best = v;
            arg = t;
            first = false;
        }
        std::size_t r = d;
        while (r > 0 && ++idx[r - 1] == resolution) idx[--r] = 0;
        if (r == 0) break;
    }
    double step = step0;
    while (step >= 1e-6) {
        bool improved = false;
        for (std::size_t r = 0; r < d; ++r) {
            for (double dir : {-1.0, 1.0}) {
                ShiftPoint c = arg;
                c[r] = std::clamp(arg[r] + dir * step, 0.0, 1.0);
                if (c[r] == arg[r]) continue;
                const double v = sum_product_S(f, A, x, c);
                if (want_min ? v < best : v > best) {
                    best = v;
                    arg = c;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {arg, best};
}

// Largest |<t, a_i - a_j>| over the unit cube and all column pairs: how far
// an evaluation point of S can wander from x.
inline double shift_reach(const ShiftMatrix& A) {
    double reach = 0.0;
    for (std::size_t i = 0; i < A.n(); ++i) {
        for (std::size_t j = i + 1; j < A.n(); ++j) {
            double pos = 0.0, neg = 0.0;
            for (std::size_t r = 0; r < A.d(); ++r) {
                const double d = A.at(r, i) - A.at(r, j);
                pos += std::max(0.0, d);
                neg += std::max(0.0, -d);
            }
            reach = std::max({reach, pos, neg});
        }
    }
    return reach;
}

}  // namespace detail

struct GridRefineTOptions {
    int resolution = 64;
};

inline std::pair<ShiftPoint, double> min_t_S(const GridFunction& f, const ShiftMatrix& A,
                                             double x, const GridRefineTOptions& opts = {}) {
    return detail::row_extremum(f, A, x, true, opts.resolution);
}

inline std::pair<ShiftPoint, double> max_t_S(const GridFunction& f, const ShiftMatrix& A,
                                             double x, const GridRefineTOptions& opts = {}) {
    return detail::row_extremum(f, A, x, false, opts.resolution);
}

struct CheckOptions {
    double x_resolution = 0.0;  // 0 picks h/2
    bool widen_x2 = false;
    int tgrid = 64;  // t lattice per axis when d >= 2
};

struct ExtremalityReport {
    double lhs = 0.0;       // max over x of min over t of S(x,t)
    double rhs1 = 0.0;      // n/|f|_1 times the functional minimum
    double rhs2 = 0.0;      // min over support x of max over t of S(x,t)
    double margin1 = 0.0;   // rhs1 - lhs
    double margin2 = 0.0;   // rhs2 - lhs
    double witness_x1 = 0.0;
    double witness_x2 = 0.0;
    ShiftPoint witness_t1;
    ShiftPoint witness_t2;
    double x_grid_resolution = 0.0;
    TMethod t_method = TMethod::exact_kinks;
    bool has_widened = false;
    double rhs2_widened = 0.0;
    double margin2_widened = 0.0;
    double witness_x2_widened = 0.0;
};

// Evaluate both extremality conditions on a dense x scan.  The max-min scan
// runs over cell-offset points covering the support hull padded by the shift
// reach; the min-max scan runs over the midpoints of the nonzero cells (the
// support side), optionally widened to every cell in the padded hull.
inline ExtremalityReport check_conditions(const GridFunction& f, const ShiftMatrix& A,
                                          const CheckOptions& opts = {}) {
    const SupportHull hull = support_hull(f);
    ExtremalityReport rep;
    const double xres = opts.x_resolution > 0.0 ? opts.x_resolution : 0.5 * f.h();
    rep.x_grid_resolution = xres;
    rep.t_method = A.d() == 1 ? TMethod::exact_kinks : TMethod::grid_refine;
    const GridRefineTOptions topts{opts.tgrid};

    const double reach = detail::shift_reach(A);
    const double lo = hull.a - reach, hi = hull.b + reach;
    const long nx = std::max(1L, static_cast<long>(std::ceil((hi - lo) / xres - 1e-9)));
    bool first = true;
    for (long j = 0; j < nx; ++j) {
        const double x = lo + (static_cast<double>(j) + 0.5) * xres;
        auto [tmin, vmin] = min_t_S(f, A, x, topts);
        if (first || vmin > rep.lhs) {
            rep.lhs = vmin;
            rep.witness_x1 = x;
            rep.witness_t1 = tmin;
            first = false;
        }
    }

    rep.rhs1 = static_cast<double>(A.n()) * min_over_shifts(f, A, {opts.tgrid}).second
               / l1_norm(f);

    first = true;
    for (std::size_t c : hull.nonzero_cells) {
        const double x = f.x0() + (static_cast<double>(c) + 0.5) * f.h();
        auto [tmax, vmax] = max_t_S(f, A, x, topts);
        if (first || vmax < rep.rhs2) {
            rep.rhs2 = vmax;
            rep.witness_x2 = x;
            rep.witness_t2 = tmax;
            first = false;
        }
    }

    rep.margin1 = rep.rhs1 - rep.lhs;
    rep.margin2 = rep.rhs2 - rep.lhs;

    rep.rhs2_widened = rep.rhs2;
    rep.margin2_widened = rep.margin2;
    rep.witness_x2_widened = rep.witness_x2;
    if (opts.widen_x2) {
        rep.has_widened = true;
        const long clo = static_cast<long>(std::floor((lo - f.x0()) / f.h()));
        const long chi = static_cast<long>(std::ceil((hi - f.x0()) / f.h()));
        first = true;
        for (long c = clo; c < chi; ++c) {
            const double x = f.x0() + (static_cast<double>(c) + 0.5) * f.h();
            auto [tmax, vmax] = max_t_S(f, A, x, topts);
            if (first || vmax < rep.rhs2_widened) {
                rep.rhs2_widened = vmax;
                rep.witness_x2_widened = x;
                first = false;
            }
            (void)tmax;
        }
        rep.margin2_widened = rep.rhs2_widened - rep.lhs;
    }
    return rep;
}

struct ShapeSpecialReport {
    ShapeClass shape = ShapeClass::neither;
    double lhs_specialized = 0.0;
    double lhs_general = 0.0;
    double margin1 = 0.0;
    double margin2 = 0.0;
    double t_star = 0.0;
};

// For convex f the row minimum of S sits at t=0, for concave f at t=1, for
// x on the half-spacing lattice inside [a+1, b-1].  This evaluates the
// conditions with that fixed t and reports the general scan value alongside
// so callers can compare the two.
inline ShapeSpecialReport check_shape_specialization(const GridFunction& f, double tol = 0.0) {
    const ShapeClass shape = shape_class(f, tol);
    if (shape != ShapeClass::convex && shape != ShapeClass::concave)
        throw ShapeMismatch("function is neither convex nor concave on its support");
    const ShiftMatrix A = ShiftMatrix::bs();
    const SupportHull hull = support_hull(f);
    const double half = 0.5 * f.h();

    std::vector<double> xs;
    for (long k = static_cast<long>(std::ceil(1.0 / half - 1e-9));; ++k) {
        const double x = hull.a + static_cast<double>(k) * half;
        if (x > hull.b - 1.0 + 1e-12) break;
        xs.push_back(x);
    }
    if (xs.empty())
        throw ShapeMismatch("support is too short to place the unit shifts inside it");

    ShapeSpecialReport rep;
    rep.shape = shape;
    rep.t_star = shape == ShapeClass::convex ? 0.0 : 1.0;
    const double t_other = 1.0 - rep.t_star;

    bool first = true;
    for (double x : xs) {
        const double v = sum_product_S(f, A, x, {rep.t_star});
        if (first || v > rep.lhs_specialized) rep.lhs_specialized = v;
        const double g = min_t_S(f, A, x).second;
        if (first || g > rep.lhs_general) rep.lhs_general = g;
        first = false;
    }

    const double rhs1 = 2.0 * min_over_shifts(f, A).second / l1_norm(f);
    rep.margin1 = rhs1 - rep.lhs_specialized;

    double rhs2 = 0.0;
    first = true;
    for (std::size_t c : hull.nonzero_cells) {
        const double x = f.x0() + (static_cast<double>(c) + 0.5) * f.h();
        const double v = sum_product_S(f, A, x, {t_other});
        if (first || v < rhs2) rhs2 = v;
        first = false;
    }
    rep.margin2 = rhs2 - rep.lhs_specialized;
    return rep;
}

}  // namespace autocorr
