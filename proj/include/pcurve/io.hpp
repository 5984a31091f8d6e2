#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcurve/analysis.hpp"
#include "pcurve/curve_spec.hpp"
#include "pcurve/error.hpp"
#include "pcurve/schur.hpp"

namespace pcurve {

using json = nlohmann::json;

namespace detail {

inline std::vector<double> number_list(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return {};
    const json& v = j[key];
    if (!v.is_array()) throw CurveError(ErrorCode::InvalidInput, std::string("'") + key + "' must be an array");
    std::vector<double> out;
    for (const json& x : v) {
        if (!x.is_number()) throw CurveError(ErrorCode::InvalidInput, std::string("'") + key + "' holds a non-number");
        out.push_back(x.get<double>());
    }
    return out;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

inline Simplicity simplicity_from(const std::string& s) {
    if (s == "Simple") return Simplicity::Simple;
    if (s == "Tangential") return Simplicity::Tangential;
    if (s == "Multiple") return Simplicity::Multiple;
    throw CurveError(ErrorCode::InvalidInput, "unknown simplicity '" + s + "'");
}

} // namespace detail

inline CurveSpec curve_spec_from_json(const json& j) {
    if (!j.is_object()) throw CurveError(ErrorCode::InvalidInput, "curve spec must be a JSON object");
    CurveSpec spec;
    spec.label = j.value("label", std::string{});
    spec.x_cos = detail::number_list(j, "x_cos");
    spec.x_sin = detail::number_list(j, "x_sin");
    spec.y_cos = detail::number_list(j, "y_cos");
    spec.y_sin = detail::number_list(j, "y_sin");
    if (j.contains("y_const") && !j["y_const"].is_null()) {
        if (!j["y_const"].is_number()) throw CurveError(ErrorCode::InvalidInput, "'y_const' must be a number");
        spec.y_const = j["y_const"].get<double>();
    }
    return spec;
}

inline json to_json(const CurveSpec& spec) {
    return json{{"label", spec.label},     {"x_cos", spec.x_cos}, {"x_sin", spec.x_sin},
                {"y_const", spec.y_const}, {"y_cos", spec.y_cos}, {"y_sin", spec.y_sin}};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CurveError(ErrorCode::InvalidInput, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw CurveError(ErrorCode::InvalidInput, "'" + path + "': " + e.what());
    }
}

inline CurveSpec load_curve_spec(const std::string& path) { return curve_spec_from_json(read_json_file(path)); }

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw CurveError(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << text;
}

inline json to_json(const Crossing& c) {
    return json{{"s1", c.s1},
                {"s2", c.s2},
                {"phi", c.point.phi},
                {"v", c.point.v},
                {"winding", c.winding},
                {"alpha", c.alpha},
                {"simplicity", std::string(to_string(c.simplicity))},
                {"residual", c.residual}};
}

inline Crossing crossing_from_json(const json& j) {
    Crossing c;
    c.s1 = j.at("s1").get<double>();
    c.s2 = j.at("s2").get<double>();
    c.point = {j.at("phi").get<double>(), j.at("v").get<double>()};
    c.winding = j.at("winding").get<int>();
    c.alpha = j.at("alpha").get<double>();
    c.simplicity = detail::simplicity_from(j.at("simplicity").get<std::string>());
    c.residual = j.at("residual").get<double>();
    return c;
}

inline json to_json(const Loop& l) {
    return json{{"a", l.a}, {"b", l.b}, {"length", l.length()},
                {"kind", std::string(to_string(l.kind))}, {"winding", l.winding}};
}

inline Loop loop_from_json(const json& j) {
    Loop l;
    l.a = j.at("a").get<double>();
    l.b = j.at("b").get<double>();
    l.kind = j.at("kind").get<std::string>() == "PlaneLoop" ? LoopKind::PlaneLoop : LoopKind::CylinderLoop;
    l.winding = j.at("winding").get<int>();
    return l;
}

inline std::optional<Loop> optional_loop(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return loop_from_json(j[key]);
}

inline json to_json(const AnalysisReport& r) {
    json crossings = json::array();
    for (const Crossing& c : r.crossings) crossings.push_back(to_json(c));
    auto loop_or_null = [](const std::optional<Loop>& l) { return l ? to_json(*l) : json(nullptr); };
    return json{
        {"label", r.label},
        {"samples", r.samples},
        {"ell", r.ell},
        {"max_curvature", r.max_curvature},
        {"curvature_bound", detail::optional_json(r.curvature_bound)},
        {"turning_multiple", r.turning_multiple},
        {"crossings", crossings},
        {"short_loop", loop_or_null(r.short_loop)},
        {"short_loop_route", r.short_loop_route},
        {"minimal_subloop", loop_or_null(r.minimal_subloop)},
        {"winding_one_subloop", loop_or_null(r.winding_one_subloop)},
        {"oracle_loop_length", detail::optional_json(r.oracle_loop_length)},
        {"prop_a_ok", r.prop_a_ok},
        {"prop_a_margin", r.prop_a_margin},
        {"prop_b_ok", r.prop_b_ok},
        {"prop_b_margin", r.prop_b_margin},
        {"prop_b_status", r.prop_b_status},
        {"prop_c",
         json{{"applicable", r.prop_c.applicable},
              {"segment_start", detail::optional_json(r.prop_c.segment_start)},
              {"crossings_in_segment", r.prop_c.crossings_in_segment},
              {"ok", r.prop_c.ok}}},
        {"loop_total_curvature", detail::optional_json(r.loop_total_curvature)},
        {"loop_corner_angle", detail::optional_json(r.loop_corner_angle)},
        {"loop_closed_total_curvature", detail::optional_json(r.loop_closed_total_curvature)},
        {"loop_max_curvature", detail::optional_json(r.loop_max_curvature)},
        {"loop_schur_product", detail::optional_json(r.loop_schur_product)},
        {"loop_curvature_ok", r.loop_curvature_ok},
        {"ok", r.ok()},
    };
}

inline AnalysisReport report_from_json(const json& j) {
    AnalysisReport r;
    r.label = j.at("label").get<std::string>();
    r.samples = j.at("samples").get<int>();
    r.ell = j.at("ell").get<double>();
    r.max_curvature = j.at("max_curvature").get<double>();
    r.curvature_bound = detail::optional_from<double>(j, "curvature_bound");
    r.turning_multiple = j.at("turning_multiple").get<int>();
    for (const json& c : j.at("crossings")) r.crossings.push_back(crossing_from_json(c));
    r.short_loop = optional_loop(j, "short_loop");
    r.short_loop_route = j.at("short_loop_route").get<std::string>();
    r.minimal_subloop = optional_loop(j, "minimal_subloop");
    r.winding_one_subloop = optional_loop(j, "winding_one_subloop");
    r.oracle_loop_length = detail::optional_from<double>(j, "oracle_loop_length");
    r.prop_a_ok = j.at("prop_a_ok").get<bool>();
    r.prop_a_margin = j.at("prop_a_margin").get<double>();
    r.prop_b_ok = j.at("prop_b_ok").get<bool>();
    r.prop_b_margin = j.at("prop_b_margin").get<double>();
    r.prop_b_status = j.at("prop_b_status").get<std::string>();
    const json& pc = j.at("prop_c");
    r.prop_c.applicable = pc.at("applicable").get<bool>();
    r.prop_c.segment_start = detail::optional_from<double>(pc, "segment_start");
    r.prop_c.crossings_in_segment = pc.at("crossings_in_segment").get<int>();
    r.prop_c.ok = pc.at("ok").get<bool>();
    r.loop_total_curvature = detail::optional_from<double>(j, "loop_total_curvature");
    r.loop_corner_angle = detail::optional_from<double>(j, "loop_corner_angle");
    r.loop_closed_total_curvature = detail::optional_from<double>(j, "loop_closed_total_curvature");
    r.loop_max_curvature = detail::optional_from<double>(j, "loop_max_curvature");
    r.loop_schur_product = detail::optional_from<double>(j, "loop_schur_product");
    r.loop_curvature_ok = j.at("loop_curvature_ok").get<bool>();
    return r;
}

inline CurvatureProfile profile_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), {}, {}};
    CurvatureProfile p;
    p.c0 = j.value("c0", 0.0);
    p.cos_terms = detail::number_list(j, "cos");
    p.sin_terms = detail::number_list(j, "sin");
    return p;
}

inline json to_json(const SchurReport& r) {
    return json{{"length", r.length}, {"s", r.s},           {"chord1", r.chord1}, {"chord2", r.chord2},
                {"margin", r.margin}, {"min_margin", r.min_margin}, {"ok", r.ok}};
}

} // namespace pcurve
