#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "autocorr/errors.hpp"
#include "autocorr/grid_function.hpp"
#include "autocorr/shift_matrix.hpp"

namespace autocorr {

using ShiftPoint = std::vector<double>;

enum class TMethod { exact_kinks, grid_refine };

struct FunctionalReport {
    double min_value = 0.0;
    ShiftPoint argmin_t;
    double max_value = 0.0;
    ShiftPoint argmax_t;
    double l1n = 0.0;
    double ratio = 0.0;
    TMethod method = TMethod::exact_kinks;
};

struct GridRefineOptions {
    int resolution = 64;  // lattice points per t axis before descent
};

namespace detail {

// Exact integral over [wlo, whi] of prod_i f(x + s[i]) dx.  The integrand is
// constant between breakpoints (shifted copies of the cell lattice), so we
// collect the breakpoints, then evaluate the product once per gap at its
// midpoint.
inline double product_integral_window(const GridFunction& f, const std::vector<double>& s,
                                      double wlo, double whi) {
    const std::size_t m = f.size();
    const double x0 = f.x0(), h = f.h();
    double lo = wlo, hi = whi;
    for (double si : s) {
        lo = std::max(lo, x0 - si);
        hi = std::min(hi, x0 + static_cast<double>(m) * h - si);
    }
    if (!(hi > lo)) return 0.0;

    std::vector<double> cuts{lo, hi};
    for (double si : s) {
        const double kmin = std::ceil((lo + si - x0) / h);
        const double kmax = std::floor((hi + si - x0) / h);
        for (double k = kmin; k <= kmax; k += 1.0) {
            const double c = x0 + k * h - si;
            if (c > lo && c < hi) cuts.push_back(c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    for (std::size_t g = 0; g + 1 < cuts.size(); ++g) {
        const double mid = 0.5 * (cuts[g] + cuts[g + 1]);
        double prod = 1.0;
        for (double si : s) {
            const double c = std::floor((mid + si - x0) / h);
            if (c < 0.0 || c >= static_cast<double>(m)) {
                prod = 0.0;
                break;
            }
            prod *= f.values()[static_cast<std::size_t>(c)];
            if (prod == 0.0) break;
        }
        if (prod != 0.0) total += prod * (cuts[g + 1] - cuts[g]);
    }
    return total;
}

inline std::vector<double> scalar_shifts(const ShiftMatrix& A, const ShiftPoint& t) {
    std::vector<double> s(A.n(), 0.0);
    for (std::size_t i = 0; i < A.n(); ++i)
        for (std::size_t r = 0; r < A.d(); ++r) s[i] += t[r] * A.at(r, i);
    return s;
}

// Shift values t in [0,1] where the breakpoint lattices of two columns
// collide: t = k*h/|a_i - a_j|.  The product integral is affine in t between
// consecutive entries, so extrema and averages over [0,1] reduce to this set.
inline std::vector<double> kink_times(const GridFunction& f, const ShiftMatrix& A) {
    std::vector<double> ts{0.0, 1.0};
    for (std::size_t i = 0; i < A.n(); ++i) {
        for (std::size_t j = i + 1; j < A.n(); ++j) {
            const double delta = std::abs(A.at(0, i) - A.at(0, j));
            if (delta == 0.0) continue;
            for (double k = 1.0;; k += 1.0) {
                const double t = k * f.h() / delta;
                if (t >= 1.0) break;
                ts.push_back(t);
            }
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

}  // namespace detail

inline double shifted_product_integral(const GridFunction& f, const ShiftMatrix& A,
                                       const ShiftPoint& t) {
    if (t.size() != A.d())
        throw DimensionMismatch("shift point has wrong dimension");
    const std::vector<double> s = detail::scalar_shifts(A, t);
    return detail::product_integral_window(f, s, -1e300, 1e300);
}

inline std::vector<std::pair<ShiftPoint, double>> correlation_curve(const GridFunction& f,
                                                                    const ShiftMatrix& A,
                                                                    std::size_t samples) {
    if (A.d() != 1)
        throw DimensionMismatch("correlation curve is defined for one shift dimension");
    if (samples < 2) throw Error("correlation curve needs at least two samples");
    std::vector<std::pair<ShiftPoint, double>> out;
    out.reserve(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(samples - 1);
        out.emplace_back(ShiftPoint{t}, shifted_product_integral(f, A, {t}));
    }
    return out;
}

namespace detail {

inline std::pair<ShiftPoint, double> exact_extremum_1d(const GridFunction& f,
                                                       const ShiftMatrix& A, bool want_min) {
    support_hull(f);  // rejects the zero function
    const std::vector<double> ts = kink_times(f, A);
    ShiftPoint arg{ts.front()};
    double best = shifted_product_integral(f, A, {ts.front()});
    for (std::size_t k = 1; k < ts.size(); ++k) {
        const double v = shifted_product_integral(f, A, {ts[k]});
        if (want_min ? v < best : v > best) {
            best = v;
            arg = {ts[k]};
        }
    }
    return {arg, best};
}

inline std::pair<ShiftPoint, double> grid_extremum(const GridFunction& f, const ShiftMatrix& A,
                                                   int resolution, bool want_min) {
    support_hull(f);
    const std::size_t d = A.d();
    if (resolution < 2) throw Error("grid refinement needs at least two points per axis");
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
    // odometer with the last coordinate fastest: lexicographic scan order,
    // so strict improvement keeps the lexicographically smallest argument
    for (;;) {
        for (std::size_t r = 0; r < d; ++r) t[r] = idx[r] * step0;
        const double v = shifted_product_integral(f, A, t);
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
                ShiftPoint cand = arg;
                cand[r] = std::clamp(arg[r] + dir * step, 0.0, 1.0);
                if (cand[r] == arg[r]) continue;
                const double v = shifted_product_integral(f, A, cand);
                if (want_min ? v < best : v > best) {
                    best = v;
                    arg = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {arg, best};
}

}  // namespace detail

inline std::pair<ShiftPoint, double> min_over_shifts(const GridFunction& f, const ShiftMatrix& A,
                                                     const GridRefineOptions& opts = {}) {
    return A.d() == 1 ? detail::exact_extremum_1d(f, A, true)
                      : detail::grid_extremum(f, A, opts.resolution, true);
}

inline std::pair<ShiftPoint, double> max_over_shifts(const GridFunction& f, const ShiftMatrix& A,
                                                     const GridRefineOptions& opts = {}) {
    return A.d() == 1 ? detail::exact_extremum_1d(f, A, false)
                      : detail::grid_extremum(f, A, opts.resolution, false);
}

inline FunctionalReport ratio(const GridFunction& f, const ShiftMatrix& A,
                              const GridRefineOptions& opts = {}) {
    FunctionalReport rep;
    auto mn = min_over_shifts(f, A, opts);
    auto mx = max_over_shifts(f, A, opts);
    rep.min_value = mn.second;
    rep.argmin_t = std::move(mn.first);
    rep.max_value = mx.second;
    rep.argmax_t = std::move(mx.first);
    const double l1 = l1_norm(f);
    double l1n = 1.0;
    for (std::size_t i = 0; i < A.n(); ++i) l1n *= l1;
    rep.l1n = l1n;
    rep.ratio = rep.min_value / l1n;
    rep.method = A.d() == 1 ? TMethod::exact_kinks : TMethod::grid_refine;
    return rep;
}

// Exact integral of the correlation curve over [0,1]: the curve is affine
// between kinks, so the trapezoid rule on the kink set has no error.
inline double averaging_upper_bound(const GridFunction& f, const ShiftMatrix& A) {
    if (A.d() != 1)
        throw DimensionMismatch("averaging bound is defined for one shift dimension");
    support_hull(f);
    const std::vector<double> ts = detail::kink_times(f, A);
    std::vector<double> g(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k)
        g[k] = shifted_product_integral(f, A, {ts[k]});
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k)
        acc += 0.5 * (g[k] + g[k + 1]) * (ts[k + 1] - ts[k]);
    return acc;
}

}  // namespace autocorr
