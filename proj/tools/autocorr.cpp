// Command line front end: every subcommand reads step functions / shift
// matrices from disk (or a preset), runs one library entry point and prints a
// JSON report to stdout.  Validation problems exit 2, anything unexpected 1.

#include <cstddef>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <autocorr/autocorr.hpp>

namespace {

struct MatrixArgs {
    std::string path;
    std::string preset;
    std::size_t n = 2;
};

void add_matrix_options(CLI::App* sub, MatrixArgs& m) {
    sub->add_option("--matrix", m.path, "shift matrix JSON file");
    sub->add_option("--preset", m.preset, "built-in matrix: bs or identity_n");
    sub->add_option("--n", m.n, "column count for the identity_n preset");
}

autocorr::ShiftMatrix resolve_matrix(const MatrixArgs& m) {
    if (!m.path.empty() && !m.preset.empty())
        throw autocorr::Error("pass either --matrix or --preset, not both");
    if (!m.path.empty()) return autocorr::read_matrix(m.path);
    if (m.preset == "bs") return autocorr::ShiftMatrix::bs();
    if (m.preset == "identity_n") return autocorr::ShiftMatrix::identity(m.n);
    if (m.preset.empty()) throw autocorr::Error("need --matrix or --preset");
    throw autocorr::Error("unknown preset: " + m.preset);
}

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str()) throw autocorr::Error("bad entry in --values: " + tok);
        out.push_back(v);
    }
    if (out.empty()) throw autocorr::Error("--values is empty");
    return out;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"autocorrelation toolkit for nonnegative step functions"};
    app.require_subcommand(1);
    // keep the short -h free: oracle/optimize use --h for the cell width
    app.set_help_flag("--help", "print help and exit");
    app.option_defaults()->ignore_case(false);

    std::string fn_path, out_path, trace_path, values_csv;
    MatrixArgs mat;
    double x = 0.0, xres = 0.0, shape_tol = 0.0, rank_tol = 1e-10;
    std::size_t samples = 101;
    int tgrid = 64;
    bool widen = false;
    std::size_t restarts = 8, opt_m = 64, oracle_m = 0;
    double opt_h = 0.0625, oracle_h = 1.0;
    autocorr::AscentParams params;

    auto* c_eval = app.add_subcommand("eval", "evaluate the step function at a point");
    c_eval->add_option("--function", fn_path)->required();
    c_eval->add_option("--x", x)->required();

    auto* c_curve = app.add_subcommand("curve", "sample the correlation curve to CSV");
    c_curve->add_option("--function", fn_path)->required();
    add_matrix_options(c_curve, mat);
    c_curve->add_option("--samples", samples);
    c_curve->add_option("--out", out_path)->required();

    auto* c_minmax = app.add_subcommand("minmax", "exact extrema of the correlation");
    c_minmax->add_option("--function", fn_path)->required();
    add_matrix_options(c_minmax, mat);
    c_minmax->add_option("--tgrid", tgrid);

    auto* c_ratio = app.add_subcommand("ratio", "normalized minimum of the correlation");
    c_ratio->add_option("--function", fn_path)->required();
    add_matrix_options(c_ratio, mat);
    c_ratio->add_option("--tgrid", tgrid);

    auto* c_extr = app.add_subcommand("extremality", "first-order condition margins");
    c_extr->add_option("--function", fn_path)->required();
    add_matrix_options(c_extr, mat);
    c_extr->add_option("--xres", xres);
    c_extr->add_option("--tgrid", tgrid);
    c_extr->add_flag("--widen-x2", widen);

    auto* c_shape = app.add_subcommand("shape", "convexity class and its shortcut margins");
    c_shape->add_option("--function", fn_path)->required();
    c_shape->add_option("--tol", shape_tol);

    auto* c_rank = app.add_subcommand("rank", "finiteness certificate for a shift matrix");
    add_matrix_options(c_rank, mat);
    c_rank->add_option("--tol", rank_tol);

    auto* c_bl = app.add_subcommand("bl", "transversality constant and ratio bound");
    add_matrix_options(c_bl, mat);

    auto* c_opt = app.add_subcommand("optimize", "random-restart perturbation ascent");
    add_matrix_options(c_opt, mat);
    c_opt->add_option("--restarts", restarts);
    c_opt->add_option("--m", opt_m);
    c_opt->add_option("--h", opt_h);
    c_opt->add_option("--seed", params.seed);
    c_opt->add_option("--bump-height", params.bump_height);
    c_opt->add_option("--shrink", params.shrink_factor);
    c_opt->add_option("--max-iters", params.max_iters);
    c_opt->add_option("--stall", params.stall_limit);
    c_opt->add_option("--tol", params.tol);
    c_opt->add_option("--refine-depth", params.refine_depth);
    c_opt->add_option("--trace", trace_path);

    auto* c_oracle = app.add_subcommand("oracle", "exhaustive search over a finite value set");
    add_matrix_options(c_oracle, mat);
    c_oracle->add_option("--m", oracle_m)->required();
    c_oracle->add_option("--h", oracle_h)->required();
    c_oracle->add_option("--values", values_csv)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_eval)) {
            const auto f = autocorr::read_function(fn_path);
            nlohmann::json j;
            j["x"] = x;
            j["value"] = autocorr::eval_lebesgue(f, x);
            emit(j);
        } else if (app.got_subcommand(c_curve)) {
            const auto f = autocorr::read_function(fn_path);
            const auto A = resolve_matrix(mat);
            if (samples < 2) throw autocorr::Error("--samples must be at least 2");
            const auto curve = autocorr::correlation_curve(f, A, samples);
            autocorr::write_curve_csv(curve, out_path);
            nlohmann::json j;
            j["out"] = out_path;
            j["samples"] = samples;
            emit(j);
        } else if (app.got_subcommand(c_minmax) || app.got_subcommand(c_ratio)) {
            const auto f = autocorr::read_function(fn_path);
            const auto A = resolve_matrix(mat);
            emit(autocorr::functional_report_json(
                autocorr::ratio(f, A, autocorr::GridRefineOptions{tgrid})));
        } else if (app.got_subcommand(c_extr)) {
            const auto f = autocorr::read_function(fn_path);
            const auto A = resolve_matrix(mat);
            autocorr::CheckOptions opts;
            opts.x_resolution = xres;
            opts.widen_x2 = widen;
            opts.tgrid = tgrid;
            emit(autocorr::extremality_report_json(autocorr::check_conditions(f, A, opts)));
        } else if (app.got_subcommand(c_shape)) {
            const auto f = autocorr::read_function(fn_path);
            nlohmann::json j;
            j["shape"] = autocorr::shape_name(autocorr::shape_class(f, shape_tol));
            try {
                const auto s = autocorr::check_shape_specialization(f, shape_tol);
                j["t_star"] = s.t_star;
                j["lhs_specialized"] = s.lhs_specialized;
                j["lhs_general"] = s.lhs_general;
                j["margin1"] = s.margin1;
                j["margin2"] = s.margin2;
            } catch (const autocorr::ShapeMismatch&) {
                // plain classification still gets reported
            }
            emit(j);
        } else if (app.got_subcommand(c_rank)) {
            const auto A = resolve_matrix(mat);
            const auto v = autocorr::finiteness_check(A, rank_tol);
            nlohmann::json j;
            j["verdict"] = v.guaranteed_finite ? "guaranteed_finite" : "not_guaranteed";
            j["rank_of_B"] = v.rank_of_B;
            emit(j);
        } else if (app.got_subcommand(c_bl)) {
            const auto A = resolve_matrix(mat);
            const auto r = autocorr::bl_constant(A);
            nlohmann::json j;
            j["D"] = r.D;
            j["lambda"] = r.lambda;
            j["ratio_bound"] = autocorr::bl_ratio_bound(r.D);
            emit(j);
        } else if (app.got_subcommand(c_opt)) {
            const auto A = resolve_matrix(mat);
            const auto res = autocorr::random_restart_search(A, restarts, opt_m, opt_h, params);
            if (!trace_path.empty()) {
                autocorr::AscentTrace all;
                for (const auto& t : res.traces) all.insert(all.end(), t.begin(), t.end());
                autocorr::write_trace_jsonl(all, trace_path);
            }
            nlohmann::json j;
            j["best_ratio"] = res.report.ratio;
            j["best_function"] = autocorr::function_json(res.best);
            j["min_value"] = res.report.min_value;
            j["l1n"] = res.report.l1n;
            j["method"] = autocorr::method_name(res.report.method);
            j["restarts"] = restarts;
            j["seed"] = params.seed;
            emit(j);
        } else if (app.got_subcommand(c_oracle)) {
            const auto A = resolve_matrix(mat);
            const auto [best, r] =
                autocorr::brute_force_oracle(A, oracle_m, oracle_h, parse_value_list(values_csv));
            nlohmann::json j;
            j["best_ratio"] = r;
            j["best_function"] = autocorr::function_json(best);
            emit(j);
        }
    } catch (const autocorr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
