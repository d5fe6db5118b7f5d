#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "autocorr/errors.hpp"
#include "autocorr/extremality.hpp"
#include "autocorr/functional.hpp"
#include "autocorr/grid_function.hpp"
#include "autocorr/shift_matrix.hpp"

namespace autocorr {

struct AscentParams {
    double bump_height = 0.25;  // initial proposal size, value units
    double shrink_factor = 0.5;
    int max_iters = 2000;
    int stall_limit = 30;
    double tol = 1e-7;
    std::uint64_t seed = 0;
    int refine_depth = 2;  // grid halvings allowed after stalls
};

struct TraceEntry {
    int iter = 0;
    std::string move;  // "bump", "move" or "refine"
    double x1 = 0.0;
    double x2 = 0.0;
    double height = 0.0;  // value units for bumps, mass for moves
    double ratio = 0.0;
    bool accepted = false;
};
using AscentTrace = std::vector<TraceEntry>;

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double splitmix64_uniform(std::uint64_t& state) {
    return static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
}

struct Proposal {
    bool is_bump = true;
    double x1 = 0.0;      // bump location / move destination
    double x2 = 0.0;      // move source
    double amount = 0.0;  // value units for bumps, mass for moves
};

inline void push_unique(std::vector<double>& v, double x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace detail

inline std::uint64_t restart_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    return detail::splitmix64_next(s);
}

inline GridFunction random_initial(std::size_t m, double h, std::uint64_t seed) {
    std::uint64_t s = seed;
    std::vector<double> v(m);
    for (auto& x : v) x = detail::splitmix64_uniform(s);
    bool nonzero = false;
    for (double x : v) nonzero = nonzero || x > 0.0;
    if (!nonzero) v[0] = 0.5;  // the ascent needs a nonzero start
    return GridFunction(0.0, h, std::move(v));
}

// Deterministic hill climb.  Each iteration first tries the perturbations
// that the violated extremality conditions point at (a bump at the max-min
// witness, then mass moved off the min-max witness); when both conditions
// hold it probes the first variation of the functional minimum directly:
// over the shift values t whose integral is within 2*beta*h of the minimum,
// a bump in cell c helps only if its variation B_c(t) clears n*h*min/|f|_1
// on all of them.  Every proposal is scored by the exact ratio and accepted
// only on strict improvement; stalls shrink beta and eventually halve the
// grid spacing up to refine_depth times.
inline std::pair<GridFunction, AscentTrace> perturb_ascent(const GridFunction& f0,
                                                           const ShiftMatrix& A,
                                                           const AscentParams& params) {
    support_hull(f0);
    if (!finiteness_check(A).guaranteed_finite)
        throw NotGuaranteedFinite();

    GridFunction f = f0;
    AscentTrace trace;
    const double beta0 = params.bump_height;
    double beta = beta0;
    int stall = 0, depth = 0;
    double cur = ratio(f, A).ratio;

    for (int iter = 0; iter < params.max_iters; ++iter) {
        const ExtremalityReport rep = check_conditions(f, A);
        std::vector<detail::Proposal> props;

        if (rep.margin1 < -params.tol) {
            std::vector<double> heights;
            detail::push_unique(heights, beta);
            detail::push_unique(heights, 0.25 * beta);
            for (double mu : heights)
                props.push_back({true, rep.witness_x1, 0.0, mu});
        } else if (rep.margin2 < -params.tol) {
            const long cf = detail::cell_index(f, rep.witness_x2);
            const long ct = detail::cell_index(f, rep.witness_x1);
            if (cf != ct && cf >= 0 && cf < static_cast<long>(f.size())) {
                const double va = f.values()[static_cast<std::size_t>(cf)];
                if (va > 0.0) {
                    std::vector<double> amounts;
                    detail::push_unique(amounts, std::min(beta, va));
                    detail::push_unique(amounts, va);
                    detail::push_unique(amounts, std::min(0.25 * beta, va));
                    for (double mv : amounts)
                        props.push_back({false, rep.witness_x1, rep.witness_x2, mv * f.h()});
                }
            }
        }

        if (props.empty() && A.d() == 1) {
            // sharp probe of the near-minimal shifts
            const SupportHull hull = support_hull(f);
            const double l1 = l1_norm(f), h = f.h(), x0 = f.x0();
            const std::vector<double> ts = detail::kink_times(f, A);
            std::vector<double> g(ts.size());
            double ming = 0.0;
            for (std::size_t k = 0; k < ts.size(); ++k) {
                g[k] = shifted_product_integral(f, A, {ts[k]});
                if (k == 0 || g[k] < ming) ming = g[k];
            }
            const double rhs1 = static_cast<double>(A.n()) * ming / l1;
            std::vector<double> tstar;
            for (std::size_t k = 0; k < ts.size(); ++k)
                if (g[k] <= ming + 2.0 * beta * h) tstar.push_back(ts[k]);

            const long K = static_cast<long>(std::ceil(detail::shift_reach(A) / h - 1e-12));
            const long clo = static_cast<long>(hull.nonzero_cells.front()) - K;
            const long chi = static_cast<long>(hull.nonzero_cells.back()) + K;

            // B[c] = min over the near-minimal shifts of the first variation
            // of g under a unit bump in cell c
            std::vector<std::vector<double>> B(static_cast<std::size_t>(chi - clo + 1));
            for (long c = clo; c <= chi; ++c) {
                auto& row = B[static_cast<std::size_t>(c - clo)];
                row.reserve(tstar.size());
                const double wlo = x0 + static_cast<double>(c) * h;
                const double whi = wlo + h;
                for (double t : tstar) {
                    const std::vector<double> s = detail::scalar_shifts(A, {t});
                    double bc = 0.0;
                    for (std::size_t j = 0; j < A.n(); ++j) {
                        std::vector<double> rel;
                        rel.reserve(A.n() - 1);
                        for (std::size_t i = 0; i < A.n(); ++i)
                            if (i != j) rel.push_back(s[i] - s[j]);
                        bc += detail::product_integral_window(f, rel, wlo, whi);
                    }
                    row.push_back(bc);
                }
            }
            auto minB = [&](long c) {
                const auto& row = B[static_cast<std::size_t>(c - clo)];
                double v = row.empty() ? 0.0 : row[0];
                for (double y : row) v = std::min(v, y);
                return v;
            };

            struct Scored {
                double score;
                long a, b;
            };
            std::vector<Scored> bumps, moves;
            for (long c = clo; c <= chi; ++c) {
                const double sc = minB(c) - h * rhs1;
                if (sc > 0.0) bumps.push_back({sc, c, 0});
            }
            for (std::size_t ai : hull.nonzero_cells) {
                const long a = static_cast<long>(ai);
                for (long c = clo; c <= chi; ++c) {
                    if (c == a) continue;
                    double sc = 0.0;
                    bool first = true;
                    const auto& rc = B[static_cast<std::size_t>(c - clo)];
                    const auto& ra = B[static_cast<std::size_t>(a - clo)];
                    for (std::size_t k = 0; k < rc.size(); ++k) {
                        const double diff = rc[k] - ra[k];
                        if (first || diff < sc) sc = diff;
                        first = false;
                    }
                    if (!first && sc > 0.0) moves.push_back({sc, a, c});
                }
            }
            auto rank = [](std::vector<Scored>& v) {
                std::stable_sort(v.begin(), v.end(), [](const Scored& l, const Scored& r) {
                    if (l.score != r.score) return l.score > r.score;
                    if (l.a != r.a) return l.a < r.a;
                    return l.b < r.b;
                });
                if (v.size() > 4) v.resize(4);
            };
            rank(bumps);
            rank(moves);

            for (const auto& sc : bumps) {
                const double x1 = x0 + (static_cast<double>(sc.a) + 0.5) * h;
                std::vector<double> heights;
                detail::push_unique(heights, beta);
                detail::push_unique(heights, 0.25 * beta);
                for (double mu : heights) props.push_back({true, x1, 0.0, mu});
            }
            for (const auto& sc : moves) {
                const double xf = x0 + (static_cast<double>(sc.a) + 0.5) * h;
                const double xt = x0 + (static_cast<double>(sc.b) + 0.5) * h;
                const double va = f.values()[static_cast<std::size_t>(sc.a)];
                std::vector<double> amounts;
                detail::push_unique(amounts, std::min(beta, va));
                detail::push_unique(amounts, va);
                detail::push_unique(amounts, std::min(0.25 * beta, va));
                for (double mv : amounts) props.push_back({false, xt, xf, mv * h});
            }
        }

        if (props.empty()) break;  // both conditions hold and the probe is flat

        std::optional<GridFunction> best;
        const detail::Proposal* chosen = nullptr;
        double best_r = 0.0;
        bool any = false;
        for (const auto& pr : props) {
            std::optional<GridFunction> cand;
            try {
                cand = pr.is_bump ? add_bump(f, pr.x1, pr.amount)
                                  : move_mass(f, pr.x2, pr.x1, pr.amount);
            } catch (const Error&) {
                continue;
            }
            const double r = ratio(*cand, A).ratio;
            if (!any || r > best_r) {
                best_r = r;
                best = std::move(cand);
                chosen = &pr;
                any = true;
            }
        }
        if (!any) break;

        TraceEntry e;
        e.iter = iter;
        e.move = chosen->is_bump ? "bump" : "move";
        e.x1 = chosen->x1;
        e.x2 = chosen->x2;
        e.height = chosen->amount;
        e.ratio = best_r;
        e.accepted = best_r > cur;
        trace.push_back(e);

        if (e.accepted) {
            f = std::move(*best);
            cur = best_r;
            beta = std::min(2.0 * beta, beta0);
            stall = 0;
        } else {
            beta *= params.shrink_factor;
            ++stall;
            if (stall >= params.stall_limit || beta < params.tol) {
                if (depth < params.refine_depth) {
                    f = refine_half(f);
                    beta = beta0;
                    stall = 0;
                    ++depth;
                    trace.push_back({iter, "refine", 0.0, 0.0, 0.0, cur, false});
                } else {
                    break;
                }
            }
        }
    }
    return {std::move(f), std::move(trace)};
}

struct SearchResult {
    GridFunction best;
    FunctionalReport report;
    std::vector<AscentTrace> traces;
};

inline SearchResult random_restart_search(const ShiftMatrix& A, std::size_t restarts,
                                          std::size_t m, double h, const AscentParams& params) {
    if (restarts == 0) throw Error("need at least one restart");
    if (!finiteness_check(A).guaranteed_finite)
        throw NotGuaranteedFinite();

    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("AUTOCORR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) threads = static_cast<std::size_t>(v);
    }
    threads = std::min(threads, restarts);

    std::vector<std::optional<std::pair<GridFunction, AscentTrace>>> runs(restarts);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= restarts) return;
            try {
                const std::uint64_t si = restart_seed(params.seed, i);
                AscentParams q = params;
                q.seed = si;
                runs[i] = perturb_ascent(random_initial(m, h, si), A, q);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    // index-ordered reduction: ties go to the lowest restart index
    std::size_t best_i = 0;
    double best_r = -1.0;
    for (std::size_t i = 0; i < restarts; ++i) {
        const double r = ratio(runs[i]->first, A).ratio;
        if (r > best_r) {
            best_r = r;
            best_i = i;
        }
    }
    SearchResult out{runs[best_i]->first, ratio(runs[best_i]->first, A), {}};
    out.traces.reserve(restarts);
    for (auto& run : runs) out.traces.push_back(std::move(run->second));
    return out;
}

// Exhaustive search over all assignments of a finite value set to m cells,
// in lexicographic order with the first cell most significant; the first
// maximum wins ties.
inline std::pair<GridFunction, double> brute_force_oracle(const ShiftMatrix& A, std::size_t m,
                                                          double h,
                                                          std::vector<double> value_set) {
    if (m == 0) throw Error("grid needs at least one cell");
    if (value_set.empty()) throw Error("value set is empty");
    std::sort(value_set.begin(), value_set.end());
    value_set.erase(std::unique(value_set.begin(), value_set.end()), value_set.end());
    if (std::pow(static_cast<double>(value_set.size()), static_cast<double>(m)) > 1e6)
        throw TooLarge("value assignment count exceeds 1e6");

    std::optional<GridFunction> best;
    double best_r = -1.0;
    std::vector<std::size_t> idx(m, 0);
    std::vector<double> v(m);
    for (;;) {
        bool all_zero = true;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = value_set[idx[i]];
            all_zero = all_zero && v[i] == 0.0;
        }
        if (!all_zero) {
            GridFunction cand(0.0, h, v);
            const double r = ratio(cand, A).ratio;
            if (r > best_r) {
                best_r = r;
                best = std::move(cand);
            }
        }
        std::size_t pos = m;
        while (pos > 0 && ++idx[pos - 1] == value_set.size()) idx[--pos] = 0;
        if (pos == 0) break;
    }
    if (!best) throw ZeroFunction("value set generates only the zero function");
    return {*best, best_r};
}

}  // namespace autocorr
