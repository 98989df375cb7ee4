#pragma once

#include "equiloc/cohomology.hpp"
#include "equiloc/fixed_points.hpp"
#include "equiloc/polytope.hpp"
#include "equiloc/rational.hpp"
#include "equiloc/verifier.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace equiloc {
namespace io {

using nlohmann::json;

/// Malformed file or field; maps to exit code 2 in the CLI.
class parse_error : public std::runtime_error {
  public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw parse_error("'" + path + "': " + e.what());
    }
}

/// Exact rational from a JSON token: an integer or a "p/q" / "p" string.
/// Floating-point literals are rejected outright; they have no place in an
/// exact pipeline.
inline Rational rational_from_json(const json& j, const std::string& where) {
    if (j.is_number_float())
        throw parse_error(where + ": floating-point literal " + j.dump() +
                          " rejected; use an integer or a \"p/q\" string");
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw parse_error(where + ": " + e.what());
        }
    }
    throw parse_error(where + ": expected an integer or a rational string, got " + j.dump());
}

inline std::int64_t integer_from_json(const json& j, const std::string& where) {
    if (j.is_number_float())
        throw parse_error(where + ": floating-point literal " + j.dump() + " rejected");
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) {
        Rational r = rational_from_json(j, where);
        if (!r.is_integer()) throw parse_error(where + ": expected an integer, got " + j.dump());
        return detail::to_int64(r.numerator());
    }
    throw parse_error(where + ": expected an integer, got " + j.dump());
}

inline FixedPointSet fixed_points_from_json(const json& j) {
    if (!j.is_object() || !j.contains("points"))
        throw parse_error("fixed-point data: expected an object with a \"points\" array");
    FixedPointSet s;
    if (!j.contains("dim")) throw parse_error("fixed-point data: missing \"dim\"");
    s.dim = static_cast<int>(integer_from_json(j.at("dim"), "dim"));
    const json& pts = j.at("points");
    if (!pts.is_array()) throw parse_error("\"points\" must be an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const json& pj = pts.at(i);
        std::string where = "points[" + std::to_string(i) + "]";
        if (!pj.is_object() || !pj.contains("id") || !pj.contains("H") ||
            !pj.contains("weights"))
            throw parse_error(where + ": expected {\"id\", \"H\", \"weights\"}");
        FixedPointDatum d;
        if (!pj.at("id").is_string()) throw parse_error(where + ".id: expected a string");
        d.id = pj.at("id").get<std::string>();
        d.moment = rational_from_json(pj.at("H"), where + ".H");
        if (!pj.at("weights").is_array())
            throw parse_error(where + ".weights: expected an array");
        for (std::size_t k = 0; k < pj.at("weights").size(); ++k)
            d.weights.push_back(integer_from_json(
                pj.at("weights").at(k), where + ".weights[" + std::to_string(k) + "]"));
        s.points.push_back(std::move(d));
    }
    return s;
}

inline json to_json(const FixedPointSet& s) {
    json pts = json::array();
    for (const auto& p : s.points)
        pts.push_back(json{{"H", p.moment.str()}, {"id", p.id}, {"weights", p.weights}});
    return json{{"dim", s.dim}, {"points", pts}};
}

inline DelzantPolytope polytope_from_json(const json& j) {
    if (!j.is_object() || !j.contains("halfspaces"))
        throw parse_error("polytope: expected an object with a \"halfspaces\" array");
    DelzantPolytope p;
    if (!j.contains("dim")) throw parse_error("polytope: missing \"dim\"");
    p.dim = static_cast<int>(integer_from_json(j.at("dim"), "dim"));
    const json& hs = j.at("halfspaces");
    if (!hs.is_array()) throw parse_error("\"halfspaces\" must be an array");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const json& hj = hs.at(i);
        std::string where = "halfspaces[" + std::to_string(i) + "]";
        if (!hj.is_object() || !hj.contains("normal") || !hj.contains("offset"))
            throw parse_error(where + ": expected {\"normal\", \"offset\"}");
        HalfSpace h;
        if (!hj.at("normal").is_array()) throw parse_error(where + ".normal: expected an array");
        for (std::size_t k = 0; k < hj.at("normal").size(); ++k)
            h.normal.push_back(integer_from_json(
                hj.at("normal").at(k), where + ".normal[" + std::to_string(k) + "]"));
        h.offset = rational_from_json(hj.at("offset"), where + ".offset");
        p.halfspaces.push_back(std::move(h));
    }
    return p;
}

inline json to_json(const DelzantPolytope& p) {
    json hs = json::array();
    for (const auto& h : p.halfspaces)
        hs.push_back(json{{"normal", h.normal}, {"offset", h.offset.str()}});
    return json{{"dim", p.dim}, {"halfspaces", hs}};
}

inline EquivariantClass class_from_json(const json& j) {
    if (!j.is_object() || !j.contains("upow") || !j.contains("coeffs"))
        throw parse_error("class: expected {\"upow\", \"coeffs\"}");
    EquivariantClass c;
    c.upow = static_cast<int>(integer_from_json(j.at("upow"), "upow"));
    if (!j.at("coeffs").is_object()) throw parse_error("class.coeffs: expected an object");
    for (const auto& [id, val] : j.at("coeffs").items())
        c.coeffs[id] = rational_from_json(val, "coeffs[\"" + id + "\"]");
    return c;
}

inline json to_json(const EquivariantClass& c) {
    json coeffs = json::object();
    for (const auto& [id, val] : c.coeffs) coeffs[id] = val.str();
    return json{{"coeffs", coeffs}, {"upow", c.upow}};
}

/// Claimed index-2 tuples plus the combination vector for the contradiction
/// detector: {"classes": [class, ...], "c": ["1", "1", ...]} with "c"
/// optional (defaults to all ones).
struct ClaimedInput {
    std::vector<EquivariantClass> classes;
    RatVector c;
};

inline ClaimedInput claimed_from_json(const json& j) {
    if (!j.is_object() || !j.contains("classes"))
        throw parse_error("claimed input: expected an object with a \"classes\" array");
    ClaimedInput out;
    if (!j.at("classes").is_array()) throw parse_error("\"classes\" must be an array");
    for (const auto& cj : j.at("classes")) out.classes.push_back(class_from_json(cj));
    if (j.contains("c")) {
        if (!j.at("c").is_array()) throw parse_error("\"c\" must be an array");
        for (std::size_t i = 0; i < j.at("c").size(); ++i)
            out.c.push_back(rational_from_json(j.at("c").at(i), "c[" + std::to_string(i) + "]"));
    } else {
        out.c.assign(out.classes.size(), Rational(1));
    }
    return out;
}

inline json to_json(const ClaimedInput& in) {
    json classes = json::array();
    for (const auto& c : in.classes) classes.push_back(to_json(c));
    json cs = json::array();
    for (const auto& r : in.c) cs.push_back(r.str());
    return json{{"c", cs}, {"classes", classes}};
}

/// Input files are discriminated by their top-level key.
struct ParsedInput {
    enum class Kind { polytope, points };
    Kind kind = Kind::points;
    DelzantPolytope polytope;
    FixedPointSet points;
};

inline ParsedInput parse_input(const json& j) {
    ParsedInput in;
    if (j.is_object() && j.contains("halfspaces")) {
        in.kind = ParsedInput::Kind::polytope;
        in.polytope = polytope_from_json(j);
    } else if (j.is_object() && j.contains("points")) {
        in.kind = ParsedInput::Kind::points;
        in.points = fixed_points_from_json(j);
    } else {
        throw parse_error(
            "unrecognized input: expected a \"halfspaces\" (polytope) or \"points\" "
            "(fixed-point data) key");
    }
    return in;
}

inline ParsedInput parse_input_file(const std::string& path) {
    return parse_input(load_json(path));
}

inline json to_json(const CheckResult& c) {
    json j{{"name", c.name}, {"pass", c.pass}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

inline json to_json(const ValidationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return json{{"checks", checks}, {"pass", r.passed()}};
}

inline json to_json(const BettiVector& b) {
    json arr = json::array();
    for (auto x : b.b) arr.push_back(x);
    return arr;
}

inline json to_json(const CanonicalClass& cc) {
    json cert = json::array();
    for (const auto& c : cc.certificate) cert.push_back(to_json(c));
    return json{{"base", cc.base},
                {"certificate", cert},
                {"certified", cc.certified},
                {"class", to_json(cc.cls)},
                {"solve_kind",
                 cc.solve_kind == LinearSolution::Kind::unique ? "unique" : "not_unique"}};
}

inline json to_json(const LocalizationValue& v) {
    return json{{"upow", v.upow}, {"value", v.value.str()}};
}

inline json to_json(const TheoremWitness& w) {
    json rows = json::array();
    for (const auto& row : w.rows) {
        json r = json::array();
        for (const auto& x : row) r.push_back(x.str());
        rows.push_back(r);
    }
    return json{{"betti", to_json(w.betti)},
                {"class_bases", w.class_bases},
                {"index4_points", w.index4_points},
                {"rank_2_to_4", w.rank_2_to_4},
                {"rank_matches_b2", w.rank_matches_b2},
                {"restriction_rows", rows},
                {"unimodal", w.unimodal}};
}

inline json to_json(const ContradictionCertificate& c) {
    auto pairs = [](const std::vector<std::pair<std::string, Rational>>& v) {
        json o = json::object();
        for (const auto& [id, r] : v) o[id] = r.str();
        return o;
    };
    json coeffs = json::array();
    for (const auto& r : c.alpha_coeffs) coeffs.push_back(r.str());
    return json{{"alpha_coeffs", coeffs},
                {"alpha_restrictions", pairs(c.alpha_restrictions)},
                {"beta_restrictions", pairs(c.beta_restrictions)},
                {"localization_terms", pairs(c.localization_terms)},
                {"total", c.total.str()}};
}

inline json to_json(const ContradictionOutcome& o) {
    json checks = json::array();
    for (const auto& c : o.checks) checks.push_back(to_json(c));
    json j{{"checks", checks}, {"contradiction", o.contradiction}, {"message", o.message}};
    if (o.contradiction) j["certificate"] = to_json(o.certificate);
    return j;
}

inline json to_json(const FullReport& r) {
    json stages = json::array();
    for (const auto& s : r.stages) {
        json checks = json::array();
        for (const auto& c : s.checks) checks.push_back(to_json(c));
        json sj{{"checks", checks}, {"pass", s.pass}, {"stage", s.stage}};
        if (!s.error.empty()) sj["error"] = s.error;
        stages.push_back(sj);
    }
    return json{{"betti", to_json(r.betti)},
                {"pass", r.pass},
                {"rank_2_to_4", r.rank_2_to_4},
                {"stages", stages},
                {"unimodal", r.unimodal},
                {"volume", r.volume.str()}};
}

/// Canonical dump: two-space indent, sorted keys (nlohmann objects are
/// std::map-backed), trailing newline.  Byte-identical across runs.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace io
} // namespace equiloc
