// Acceptance gate: one line per criterion, nonzero exit if a required
// criterion fails. Run via ctest or directly from the build tree.

#include "autocorr/autocorr.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using autocorr::GridFunction;
using autocorr::ShiftMatrix;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", idx, detail.c_str());
    std::fflush(stdout);
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

GridFunction random_function(oracle::Rng& rng, int max_cells) {
    const int m = 1 + int(rng.uniform() * double(max_cells));
    const double hs[5] = {1.0, 0.5, 0.25, 0.125, 0.0625};
    const double h = hs[int(rng.uniform() * 5.0)];
    std::vector<double> v(std::size_t(m), 0.0);
    for (auto& y : v) y = rng.uniform() < 0.2 ? 0.0 : rng.uniform() * 2.0;
    v[std::size_t(m / 2)] = 0.5 + rng.uniform();
    return GridFunction(-rng.uniform(), h, v);
}

std::vector<GridFunction> shared_corpus() {
    oracle::Rng rng(2024);
    std::vector<GridFunction> fs;
    fs.reserve(200);
    for (int i = 0; i < 200; ++i) fs.push_back(random_function(rng, 64));
    return fs;
}

// independent per-instance reference for unit-step grids under the
// two-shift preset: the curve is affine on [0,1], so only its endpoints
// matter, and both are integer sums
bool ternary_instances_match(int m, std::string& detail) {
    std::vector<double> v(std::size_t(m), 0.0);
    std::vector<double> best_v;
    double best_ref = -1.0;
    int checked = 0;
    const auto A = ShiftMatrix::bs();
    while (true) {
        bool nonzero = false;
        for (double y : v) nonzero = nonzero || y != 0.0;
        if (nonzero) {
            ++checked;
            const double ref = oracle::bs_integer_ratio(v);
            const double lib = autocorr::ratio(GridFunction(0.0, 1.0, v), A).ratio;
            if (lib != ref) {
                detail = "instance ratio mismatch at m=" + std::to_string(m);
                return false;
            }
            if (ref > best_ref) {
                best_ref = ref;
                best_v = v;
            }
        }
        int k = m - 1;
        while (k >= 0 && v[std::size_t(k)] == 2.0) {
            v[std::size_t(k)] = 0.0;
            --k;
        }
        if (k < 0) break;
        v[std::size_t(k)] += 1.0;
    }
    auto [bf, br] = autocorr::brute_force_oracle(A, m, 1.0, {0.0, 1.0, 2.0});
    if (br != best_ref || bf.values() != best_v) {
        detail = "oracle best mismatch at m=" + std::to_string(m);
        return false;
    }
    detail = std::to_string(checked) + " instances at m=" + std::to_string(m);
    return true;
}

GridFunction steep_convex(int m, double c, double base) {
    std::vector<double> v(std::size_t(m), 0.0);
    for (int k = 0; k < m; ++k)
        v[std::size_t(k)] = std::pow(4.0, std::abs(double(k) - c)) / 16.0 + base;
    return GridFunction(0.0, 0.5, v);
}

GridFunction capped_concave(int m, double scale) {
    std::vector<double> v(std::size_t(m), 0.0);
    const double M = double(m - 2) / 2.0;
    double acc = 0.25;
    for (int k = 0; k < m; ++k) {
        v[std::size_t(k)] = scale * acc;
        acc += (M - double(k)) / 8.0;
    }
    return GridFunction(0.0, 0.5, v);
}

}  // namespace

int main() {
    const auto A = ShiftMatrix::bs();
    auto corpus = shared_corpus();

    // 1: averaging dominates the minimum and is itself dominated by half
    //    the squared mass
    {
        auto start = Clock::now();
        bool ok = true;
        for (const auto& f : corpus) {
            const double mn = autocorr::min_over_shifts(f, A).second;
            const double avg = autocorr::averaging_upper_bound(f, A);
            const double half = 0.5 * autocorr::l1_norm(f) * autocorr::l1_norm(f);
            ok = ok && mn <= avg + 1e-12 && avg <= half + 1e-9;
            ok = ok && autocorr::ratio(f, A).ratio <= 0.5 + 1e-9;
        }
        const double dt = seconds_since(start);
        ok = ok && dt < 10.0;
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "min <= average <= mass^2/2 and ratio <= 0.5 on 200 functions (%.2fs)", dt);
        report(1, ok, buf);
    }

    // 3 runs before 2 so its outputs feed the upper-bound sweep
    std::vector<GridFunction> optimizer_outputs;
    double search_ratio = 0.0;
    double search_secs = 0.0;
    {
        auto start = Clock::now();
        autocorr::AscentParams p;
        auto res = autocorr::random_restart_search(A, 16, 64, 1.0 / 16.0, p);
        search_secs = seconds_since(start);
        search_ratio = res.report.ratio;
        optimizer_outputs.push_back(res.best);
    }
    {
        auto [ba, ta] = autocorr::perturb_ascent(GridFunction(0.0, 0.25, std::vector<double>(8, 1.0)),
                                                 A, autocorr::AscentParams{});
        optimizer_outputs.push_back(ba);
        auto [bb, tb] = autocorr::perturb_ascent(GridFunction(0.0, 1.0, {1.0}),
                                                 A, autocorr::AscentParams{});
        optimizer_outputs.push_back(bb);
    }

    // 2: everything stays below the published upper bound
    {
        auto start = Clock::now();
        bool ok = true;
        for (const auto& f : corpus)
            ok = ok && autocorr::ratio(f, A).ratio <= 0.411 + 1e-6;
        for (const auto& f : optimizer_outputs)
            ok = ok && autocorr::ratio(f, A).ratio <= 0.411 + 1e-6;
        const double dt = seconds_since(start);
        ok = ok && dt < 10.0;
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "ratio <= 0.411 on 200 random + %zu optimizer outputs (%.2fs)",
                      optimizer_outputs.size(), dt);
        report(2, ok, buf);
    }

    // 3: the restart search clears 0.30; 0.34 is a stretch marker and 0.37
    //    the frontier reported in the literature
    {
        bool ok = search_ratio >= 0.30 && search_secs < 300.0;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "16-restart search reached %.6f (>= 0.30 required, >= 0.34 stretch %s,"
                      " 0.37 frontier) in %.1fs",
                      search_ratio, search_ratio >= 0.34 ? "met" : "missed", search_secs);
        report(3, ok, buf);
    }

    // 4: analytic baseline
    {
        auto rep = autocorr::ratio(GridFunction(0.0, 1.0, {1, 1}), A);
        bool ok = std::abs(rep.ratio - 0.25) <= 1e-12
                  && std::abs(rep.min_value - 1.0) <= 1e-12
                  && rep.argmin_t.size() == 1
                  && std::abs(rep.argmin_t[0] - 1.0) <= 1e-12;
        report(4, ok, "width-two indicator: ratio 0.25, minimum 1 at t=1");
    }

    // 5: dense sampling brackets the exact minimum within the Lipschitz slack
    {
        auto start = Clock::now();
        oracle::Rng rng(55);
        bool ok = true;
        for (int trial = 0; trial < 50; ++trial) {
            auto f = random_function(rng, 32);
            oracle::Step s{f.x0(), f.h(), f.values()};
            const double exact = autocorr::min_over_shifts(f, A).second;
            const double dense = oracle::dense_min_g(s, {0.0, 1.0}, 100000).value;
            double maxv = 0.0;
            for (double y : f.values()) maxv = std::max(maxv, y);
            const double L = 2.0 * maxv * autocorr::l1_norm(f) / f.h();
            ok = ok && dense >= exact - 1e-12;
            ok = ok && dense - exact <= L / 99999.0 + 1e-12;
        }
        const double dt = seconds_since(start);
        ok = ok && dt < 30.0;
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "50 exact minima within Lipschitz slack of 1e5-point sampling (%.2fs)", dt);
        report(5, ok, buf);
    }

    // 6: rank verdicts against exact rational elimination
    {
        bool ok = true;
        auto check = [&ok](const ShiftMatrix& M, bool finite, int rank) {
            auto v = autocorr::finiteness_check(M);
            auto B = autocorr::build_B(M);
            std::vector<double> flat;
            for (const auto& row : B) flat.insert(flat.end(), row.begin(), row.end());
            const int refrank = oracle::rational_rank(M.d() + 1, M.n(), flat);
            ok = ok && v.guaranteed_finite == finite && v.rank_of_B == rank
                 && refrank == rank;
        };
        check(ShiftMatrix::bs(), true, 2);
        check(ShiftMatrix(1, 2, {0.0, 0.0}), false, 1);
        for (int n : {2, 3, 4}) check(ShiftMatrix::identity(n), true, n);
        report(6, ok, "rank verdicts match rational elimination on the fixed matrices");
    }

    // 7: the first-variation witnesses really are improving directions
    {
        oracle::Rng rng(77);
        int bump_ok = 0, bump_seen = 0, move_ok = 0, move_seen = 0;
        int attempts = 0;
        while ((bump_seen < 20 || move_seen < 20) && attempts < 20000) {
            ++attempts;
            const int m = 6 + int(rng.uniform() * 10.0);
            std::vector<double> v(std::size_t(m), 0.0);
            for (auto& y : v) y = rng.uniform() < 0.25 ? 0.0 : rng.uniform();
            bool nz = false;
            for (double y : v) nz = nz || y > 0.0;
            if (!nz) continue;
            GridFunction f(0.0, 0.25, v);
            auto rep = autocorr::check_conditions(f, A);
            const double before = autocorr::ratio(f, A).ratio;
            if (bump_seen < 20 && rep.margin1 < -0.05) {
                ++bump_seen;
                auto g = autocorr::add_bump(f, rep.witness_x1, 1e-3);
                if (autocorr::ratio(g, A).ratio > before) ++bump_ok;
            } else if (move_seen < 20 && rep.margin2 < -0.05) {
                const double from = autocorr::eval_lebesgue(f, rep.witness_x2);
                if (from * f.h() <= 1e-3 * f.h()) continue;   // not enough mass to move
                ++move_seen;
                auto g = autocorr::move_mass(f, rep.witness_x2, rep.witness_x1, 1e-3 * f.h());
                if (autocorr::ratio(g, A).ratio > before) ++move_ok;
            }
        }
        bool ok = bump_ok == 20 && move_ok == 20;
        char buf[128];
        std::snprintf(buf, sizeof buf, "bump %d/20 and move %d/20 strict improvements",
                      bump_ok, move_ok);
        report(7, ok, buf);
    }

    // 8: the kernel specializes to the two-point sum, bitwise
    {
        oracle::Rng rng(88);
        bool ok = true;
        for (int trial = 0; trial < 10; ++trial) {
            auto f = random_function(rng, 24);
            for (int k = 0; k < 100; ++k) {
                const double x = rng.uniform() * 8.0 - 3.0;
                const double t = rng.uniform();
                const double a = autocorr::sum_product_S(f, A, x, {t});
                const double b = autocorr::eval_lebesgue(f, x - t)
                                 + autocorr::eval_lebesgue(f, x + t);
                ok = ok && a == b;
            }
        }
        report(8, ok, "sum_product_S equals f(x-t)+f(x+t) at 1000 points, exactly");
    }

    // 9: shape-specialized checker agrees with the general one
    {
        bool ok = true;
        int done = 0;
        const int ms[5] = {10, 12, 14, 10, 12};
        const double cs[5] = {4.5, 5.5, 6.5, 5.0, 6.0};
        for (int i = 0; i < 5; ++i)
            for (double base : {0.25, 0.5}) {
                auto f = steep_convex(ms[i], cs[i], base);
                auto r = autocorr::check_shape_specialization(f);
                ok = ok && r.shape == autocorr::ShapeClass::convex
                     && std::abs(r.lhs_specialized - r.lhs_general) <= 1e-9;
                ++done;
            }
        for (int m : {9, 10, 11, 12, 13})
            for (double scale : {1.0, 2.0}) {
                auto f = capped_concave(m, scale);
                auto r = autocorr::check_shape_specialization(f);
                ok = ok && r.shape == autocorr::ShapeClass::concave
                     && std::abs(r.lhs_specialized - r.lhs_general) <= 1e-9;
                ++done;
            }
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "specialized lhs = general lhs on %d convex/concave instances", done);
        report(9, ok && done == 20, buf);
    }

    // 10: exhaustive oracle equals the closed-form enumeration
    {
        bool ok = true;
        std::string detail;
        std::string agg;
        for (int m = 1; m <= 4 && ok; ++m) {
            ok = ternary_instances_match(m, detail);
            agg = detail;
        }
        report(10, ok, ok ? "per-instance and best-ratio agreement, " + agg : agg);
    }

    // 11: weight optimization reproduces the one-dimensional closed form
    {
        oracle::Rng rng(1111);
        bool ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            const double a1 = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + 5.0 * rng.uniform());
            const double a2 = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + 5.0 * rng.uniform());
            auto r = autocorr::bl_constant(ShiftMatrix(1, 2, {a1, a2}));
            const double ref = oracle::bl_closed_form_1x2(a1, a2);
            ok = ok && std::abs(r.D - ref) <= 1e-8 * ref;
        }
        bool threw = false;
        try {
            autocorr::bl_constant(ShiftMatrix(1, 2, {0.0, 1.0}));
        } catch (const autocorr::ZeroColumn&) {
            threw = true;
        }
        ok = ok && threw;
        report(11, ok, "20 random weight optima match 2|a1 a2|; zero column rejected");
    }

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
