#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "autocorr/errors.hpp"

namespace autocorr {

// Nonnegative step function on a uniform grid: value values()[k] on the cell
// [x0 + k*h, x0 + (k+1)*h).  The carrier is immutable; perturbations return
// new functions.
class GridFunction {
public:
    GridFunction(double x0, double h, std::vector<double> values)
        : x0_(x0), h_(h), values_(std::move(values)) {
        if (!(h_ > 0.0) || !std::isfinite(h_))
            throw Error("grid spacing must be positive and finite");
        if (!std::isfinite(x0_))
            throw Error("grid origin must be finite");
        if (values_.empty())
            throw Error("a grid function needs at least one cell");
        for (double v : values_)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw Error("cell values must be finite and nonnegative");
    }

    double x0() const { return x0_; }
    double h() const { return h_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

private:
    double x0_;
    double h_;
    std::vector<double> values_;
};

inline double l1_norm(const GridFunction& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return f.h() * s;
}

// Evaluate at a Lebesgue point: the cell value in cell interiors, the mean of
// the two adjacent values on cell boundaries, 0 outside the grid.  Boundary
// hits are detected exactly: x lies on the grid iff x0 + k*h reproduces it
// bitwise for the rounded k.
inline double eval_lebesgue(const GridFunction& f, double x) {
    const double m = static_cast<double>(f.size());
    const double kr = std::round((x - f.x0()) / f.h());
    if (f.x0() + kr * f.h() == x) {
        const long k = static_cast<long>(kr);
        const long mm = static_cast<long>(f.size());
        const double left = (k - 1 >= 0 && k - 1 < mm)
                                ? f.values()[static_cast<std::size_t>(k - 1)] : 0.0;
        const double right = (k >= 0 && k < mm)
                                 ? f.values()[static_cast<std::size_t>(k)] : 0.0;
        return 0.5 * (left + right);
    }
    const double c = std::floor((x - f.x0()) / f.h());
    if (c < 0.0 || c >= m) return 0.0;
    return f.values()[static_cast<std::size_t>(c)];
}

struct SupportHull {
    double a = 0.0;  // left edge of the first nonzero cell
    double b = 0.0;  // right edge of the last nonzero cell
    std::vector<std::size_t> nonzero_cells;
};

inline SupportHull support_hull(const GridFunction& f) {
    SupportHull hull;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (f.values()[k] > 0.0) hull.nonzero_cells.push_back(k);
    if (hull.nonzero_cells.empty()) throw ZeroFunction();
    hull.a = f.x0() + static_cast<double>(hull.nonzero_cells.front()) * f.h();
    hull.b = f.x0() + static_cast<double>(hull.nonzero_cells.back() + 1) * f.h();
    return hull;
}

enum class ShapeClass { convex, concave, neither, degenerate };

// Classify by second differences of the values on the support.  Needs at
// least three nonzero cells with no interior zeros; affine runs count as
// convex.
inline ShapeClass shape_class(const GridFunction& f, double tol) {
    const SupportHull hull = support_hull(f);
    const std::size_t first = hull.nonzero_cells.front();
    const std::size_t last = hull.nonzero_cells.back();
    if (hull.nonzero_cells.size() != last - first + 1)
        return ShapeClass::degenerate;
    if (hull.nonzero_cells.size() < 3)
        return ShapeClass::degenerate;
    bool convex_ok = true, concave_ok = true;
    for (std::size_t k = first + 1; k < last; ++k) {
        const double d2 = f.values()[k + 1] - 2.0 * f.values()[k] + f.values()[k - 1];
        if (d2 < -tol) convex_ok = false;
        if (d2 > tol) concave_ok = false;
    }
    if (convex_ok) return ShapeClass::convex;
    if (concave_ok) return ShapeClass::concave;
    return ShapeClass::neither;
}

namespace detail {

// Cell index of x relative to f's grid; may fall outside [0, size).
inline long cell_index(const GridFunction& f, double x) {
    return static_cast<long>(std::floor((x - f.x0()) / f.h()));
}

// Rebuild f with the grid extended so that cell index j exists, then apply
// delta (in value units) to that cell.
inline GridFunction with_cell_delta(const GridFunction& f, long j, double delta) {
    const long m = static_cast<long>(f.size());
    const long lo = std::min(j, 0L);
    const long hi = std::max(j + 1, m);
    std::vector<double> v(static_cast<std::size_t>(hi - lo), 0.0);
    for (long k = 0; k < m; ++k) v[static_cast<std::size_t>(k - lo)] = f.values()[static_cast<std::size_t>(k)];
    double& cell = v[static_cast<std::size_t>(j - lo)];
    cell = std::max(0.0, cell + delta);
    return GridFunction(f.x0() + static_cast<double>(lo) * f.h(), f.h(), std::move(v));
}

}  // namespace detail

// Raise the cell containing x1 by `height` (value units), extending the grid
// with zero cells when x1 falls outside it.
inline GridFunction add_bump(const GridFunction& f, double x1, double height) {
    if (!(height > 0.0) || !std::isfinite(height)) throw NonpositiveHeight();
    return detail::with_cell_delta(f, detail::cell_index(f, x1), height);
}

// Move `amount` of mass (h times value units) from the cell containing
// from_x2 into the cell containing to_x1.  The L1 norm is preserved.
inline GridFunction move_mass(const GridFunction& f, double from_x2, double to_x1,
                              double amount) {
    if (!(amount > 0.0) || !std::isfinite(amount))
        throw InsufficientMass("move amount must be positive");
    const long j_from = detail::cell_index(f, from_x2);
    const long j_to = detail::cell_index(f, to_x1);
    if (j_from == j_to) throw SameCell();
    const long m = static_cast<long>(f.size());
    const double available =
        (j_from >= 0 && j_from < m) ? f.values()[static_cast<std::size_t>(j_from)] * f.h() : 0.0;
    if (amount > available) throw InsufficientMass();
    const double dv = amount / f.h();
    GridFunction drained = detail::with_cell_delta(f, j_from, -dv);
    // The drain never extends the grid, so j_to keeps its meaning relative
    // to the original origin only if the origin did not move; recompute.
    return detail::with_cell_delta(drained, detail::cell_index(drained, to_x1), dv);
}

// Halve the spacing, repeating every value: an exact resampling of the same
// step function.
inline GridFunction refine_half(const GridFunction& f) {
    std::vector<double> v;
    v.reserve(2 * f.size());
    for (double x : f.values()) {
        v.push_back(x);
        v.push_back(x);
    }
    return GridFunction(f.x0(), 0.5 * f.h(), std::move(v));
}

}  // namespace autocorr
