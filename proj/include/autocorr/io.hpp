#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "autocorr/errors.hpp"
#include "autocorr/extremality.hpp"
#include "autocorr/functional.hpp"
#include "autocorr/grid_function.hpp"
#include "autocorr/optimizer.hpp"
#include "autocorr/shift_matrix.hpp"

namespace autocorr {

namespace detail {

inline std::string slurp_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw Error(std::string("cannot open ") + what + " file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw Error(std::string("missing or non-numeric field \"") + key + "\"");
    return j.at(key).get<double>();
}

}  // namespace detail

// Accepts either the JSON carrier {"x0":..,"h":..,"values":[..]} or a CSV
// with a header line, an "x0,h" line and one value per following line.
inline GridFunction read_function(const std::string& path) {
    const std::string text = detail::slurp_file(path, "function");
    const std::size_t p = text.find_first_not_of(" \t\r\n");
    if (p == std::string::npos) throw Error("function file is empty: " + path);

    if (text[p] == '{') {
        const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) throw Error("function file is not valid JSON: " + path);
        const double x0 = detail::require_number(j, "x0");
        const double h = detail::require_number(j, "h");
        if (!j.contains("values") || !j.at("values").is_array())
            throw Error("missing or non-array field \"values\"");
        std::vector<double> v;
        for (const auto& e : j.at("values")) {
            if (!e.is_number()) throw Error("\"values\" must contain numbers only");
            v.push_back(e.get<double>());
        }
        return GridFunction(x0, h, std::move(v));
    }

    std::istringstream ss(text);
    std::string line;
    std::getline(ss, line);  // header
    if (!std::getline(ss, line)) throw Error("function CSV is missing the x0,h line");
    double x0 = 0.0, h = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf", &x0, &h) != 2)
        throw Error("function CSV needs \"x0,h\" on its second line");
    std::vector<double> v;
    while (std::getline(ss, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        char* end = nullptr;
        const double val = std::strtod(line.c_str(), &end);
        if (end == line.c_str()) throw Error("bad value line in function CSV: " + line);
        v.push_back(val);
    }
    return GridFunction(x0, h, std::move(v));
}

inline nlohmann::json function_json(const GridFunction& f) {
    nlohmann::json j;
    j["x0"] = f.x0();
    j["h"] = f.h();
    j["values"] = f.values();
    return j;
}

inline void write_function_json(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write function file: " + path);
    out << function_json(f).dump(2) << '\n';
}

inline ShiftMatrix read_matrix(const std::string& path) {
    const std::string text = detail::slurp_file(path, "matrix");
    const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error("matrix file is not valid JSON: " + path);
    const auto d = static_cast<std::size_t>(detail::require_number(j, "d"));
    const auto n = static_cast<std::size_t>(detail::require_number(j, "n"));
    if (!j.contains("rows") || !j.at("rows").is_array() || j.at("rows").size() != d)
        throw Error("matrix \"rows\" must be an array of d rows");
    std::vector<double> entries;
    entries.reserve(d * n);
    for (const auto& row : j.at("rows")) {
        if (!row.is_array() || row.size() != n)
            throw Error("each matrix row must hold n numbers");
        for (const auto& e : row) {
            if (!e.is_number()) throw Error("matrix entries must be numbers");
            entries.push_back(e.get<double>());
        }
    }
    return ShiftMatrix(d, n, std::move(entries));
}

inline void write_curve_csv(const std::vector<std::pair<ShiftPoint, double>>& curve,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write curve file: " + path);
    out << "t,g\n";
    char buf[80];
    for (const auto& row : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", row.first.at(0), row.second);
        out << buf;
    }
}

inline void write_trace_jsonl(const AscentTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write trace file: " + path);
    for (const auto& e : trace) {
        nlohmann::json j;
        j["iter"] = e.iter;
        j["move"] = e.move;
        j["x1"] = e.x1;
        j["x2"] = e.x2;
        j["height"] = e.height;
        j["ratio"] = e.ratio;
        j["accepted"] = e.accepted;
        out << j.dump() << '\n';
    }
}

inline const char* method_name(TMethod m) {
    return m == TMethod::exact_kinks ? "exact_kinks" : "grid_refine";
}

inline const char* shape_name(ShapeClass s) {
    switch (s) {
        case ShapeClass::convex: return "convex";
        case ShapeClass::concave: return "concave";
        case ShapeClass::neither: return "neither";
        default: return "degenerate";
    }
}

inline nlohmann::json functional_report_json(const FunctionalReport& r) {
    nlohmann::json j;
    j["min_value"] = r.min_value;
    j["argmin_t"] = r.argmin_t;
    j["max_value"] = r.max_value;
    j["argmax_t"] = r.argmax_t;
    j["l1n"] = r.l1n;
    j["ratio"] = r.ratio;
    j["method"] = method_name(r.method);
    return j;
}

inline nlohmann::json extremality_report_json(const ExtremalityReport& r) {
    nlohmann::json j;
    j["lhs"] = r.lhs;
    j["rhs1"] = r.rhs1;
    j["rhs2"] = r.rhs2;
    j["margin1"] = r.margin1;
    j["margin2"] = r.margin2;
    j["witness_x1"] = r.witness_x1;
    j["witness_x2"] = r.witness_x2;
    j["witness_t1"] = r.witness_t1;
    j["witness_t2"] = r.witness_t2;
    j["x_grid_resolution"] = r.x_grid_resolution;
    j["t_method"] = method_name(r.t_method);
    j["has_widened"] = r.has_widened;
    if (r.has_widened) {
        j["rhs2_widened"] = r.rhs2_widened;
        j["margin2_widened"] = r.margin2_widened;
        j["witness_x2_widened"] = r.witness_x2_widened;
    }
    return j;
}

}  // namespace autocorr
