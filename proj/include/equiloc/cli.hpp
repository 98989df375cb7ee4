#pragma once

#include "equiloc/class_expr.hpp"
#include "equiloc/cohomology.hpp"
#include "equiloc/io.hpp"
#include "equiloc/toric.hpp"
#include "equiloc/verifier.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace equiloc {
namespace cli {

/// Exit-code contract shared by every command.
constexpr int exit_pass = 0;
constexpr int exit_verification_failure = 1;
constexpr int exit_malformed_input = 2;

struct RunConfig {
    std::string command;
    std::string input_path;
    std::vector<std::int64_t> xi;
    std::string output_path;
    std::map<std::string, std::string> flags;
    bool kernel_retry = false;
};

inline std::vector<std::int64_t> parse_xi(const std::string& s) {
    std::vector<std::int64_t> out;
    std::string cur;
    auto flush = [&] {
        std::string t = detail::trim(cur);
        cur.clear();
        if (t.empty()) throw io::parse_error("--xi: empty component in '" + s + "'");
        try {
            std::size_t used = 0;
            long long v = std::stoll(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            out.push_back(v);
        } catch (const std::exception&) {
            throw io::parse_error("--xi: '" + t + "' is not an integer");
        }
    };
    for (char ch : s) {
        if (ch == ',')
            flush();
        else
            cur += ch;
    }
    flush();
    return out;
}

namespace detail_cli {

inline void emit(const RunConfig& cfg, std::ostream& out, const io::json& j) {
    if (cfg.output_path.empty()) {
        out << io::dump(j);
        return;
    }
    std::ofstream f(cfg.output_path);
    if (!f) throw io::parse_error("cannot open output file '" + cfg.output_path + "'");
    f << io::dump(j);
}

inline std::string flag(const RunConfig& cfg, const std::string& name) {
    auto it = cfg.flags.find(name);
    return it == cfg.flags.end() ? std::string() : it->second;
}

struct Loaded {
    io::ParsedInput input;
    ToricContext ctx;        // valid iff polytope
    bool is_polytope = false;
};

/// Loads the input file and enforces the xi contract: required for polytope
/// inputs, forbidden for abstract fixed-point inputs.
inline Loaded load(const RunConfig& cfg) {
    Loaded l;
    l.input = io::parse_input_file(cfg.input_path);
    l.is_polytope = l.input.kind == io::ParsedInput::Kind::polytope;
    if (l.is_polytope) {
        if (cfg.xi.empty())
            throw io::parse_error("polytope input requires --xi (e.g. --xi 1,2,4,8)");
        l.ctx = make_toric_context(l.input.polytope, CircleSelector{cfg.xi});
    } else if (!cfg.xi.empty()) {
        throw io::parse_error("--xi is only valid for polytope inputs; this file carries "
                              "fixed-point data already");
    }
    return l;
}

inline const FixedPointSet& points_of(const Loaded& l) {
    return l.is_polytope ? l.ctx.points : l.input.points;
}

inline int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
    io::ParsedInput in = io::parse_input_file(cfg.input_path);
    if (in.kind == io::ParsedInput::Kind::polytope)
        emit(cfg, out, io::to_json(in.polytope));
    else
        emit(cfg, out, io::to_json(in.points));
    return exit_pass;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    Loaded l = load(cfg);
    ValidationReport rep = validate(points_of(l));
    emit(cfg, out, io::to_json(rep));
    return rep.passed() ? exit_pass : exit_verification_failure;
}

inline int cmd_integrate(const RunConfig& cfg, std::ostream& out) {
    std::string expr = flag(cfg, "class");
    if (expr.empty()) throw io::parse_error("integrate requires --class <expression>");
    Loaded l = load(cfg);
    ClassEnv env;
    env.points = &points_of(l);
    std::vector<CanonicalClass> canon;
    if (l.is_polytope) {
        env.ctx = &l.ctx;
        if (expr.find("canon:") != std::string::npos) {
            canon = canonical_classes(l.ctx);
            env.canon = &canon;
        }
    }
    EquivariantClass c = eval_class_expr(expr, env);
    LocalizationValue v = integrate(c, *env.points);
    emit(cfg, out, io::to_json(v));
    return exit_pass;
}

inline int cmd_canonical(const RunConfig& cfg, std::ostream& out) {
    Loaded l = load(cfg);
    if (!l.is_polytope)
        throw io::parse_error(
            "canonical requires a polytope input (the flow-up construction is toric)");
    std::vector<CanonicalClass> canon = canonical_classes(l.ctx);
    std::string point = flag(cfg, "point");
    bool all_ok = true;
    for (const auto& cc : canon)
        if (!cc.certified || cc.solve_kind != LinearSolution::Kind::unique) all_ok = false;
    if (!point.empty()) {
        for (const auto& cc : canon)
            if (cc.base == point) {
                emit(cfg, out, io::to_json(cc));
                return cc.certified ? exit_pass : exit_verification_failure;
            }
        throw io::parse_error("no fixed point with id '" + point + "'");
    }
    io::json arr = io::json::array();
    for (const auto& cc : canon) arr.push_back(io::to_json(cc));
    emit(cfg, out, arr);
    return all_ok ? exit_pass : exit_verification_failure;
}

inline int cmd_witness(const RunConfig& cfg, std::ostream& out) {
    Loaded l = load(cfg);
    if (!l.is_polytope)
        throw io::parse_error("witness requires a polytope input");
    if (l.ctx.points.dim != 8)
        throw io::parse_error("witness requires dim-8 data (a 4-dimensional polytope)");
    TheoremWitness w = restriction_rank_2_to_4(canonical_classes(l.ctx), l.ctx.points);
    emit(cfg, out, io::to_json(w));
    return w.rank_matches_b2 && w.unimodal ? exit_pass : exit_verification_failure;
}

inline int cmd_contradict(const RunConfig& cfg, std::ostream& out) {
    Loaded l = load(cfg);
    if (l.is_polytope)
        throw io::parse_error(
            "contradict expects fixed-point data; claimed tuples make no sense for a "
            "polytope, whose classes are computed, not claimed");
    std::string claimed_path = flag(cfg, "claimed");
    if (claimed_path.empty()) throw io::parse_error("contradict requires --claimed <file>");
    io::ClaimedInput claimed = io::claimed_from_json(io::load_json(claimed_path));
    std::string c_flag = flag(cfg, "c");
    if (!c_flag.empty()) {
        claimed.c.clear();
        std::string cur;
        for (char ch : c_flag + ",") {
            if (ch == ',') {
                if (!detail::trim(cur).empty())
                    claimed.c.push_back(Rational::parse(detail::trim(cur)));
                cur.clear();
            } else {
                cur += ch;
            }
        }
    }

    const FixedPointSet& s = l.input.points;
    ContradictionOutcome outcome;
    try {
        outcome = contradiction_certificate(s, claimed.classes, claimed.c);
    } catch (const precondition_error& e) {
        if (!cfg.kernel_retry) throw;
        std::vector<RatVector> kernel = index4_kernel(claimed.classes, s);
        if (kernel.empty()) {
            io::json j{{"contradiction", false},
                       {"kernel_retry", true},
                       {"message",
                        std::string("precondition failed (") + e.what() +
                            ") and the index-4 restriction matrix has trivial kernel; "
                            "no combination vanishes at the index-4 points, so no "
                            "contradiction arises"}};
            emit(cfg, out, j);
            return exit_pass;
        }
        EquivariantClass alpha = zero_class(s, 1);
        for (std::size_t i = 0; i < claimed.classes.size(); ++i)
            for (const auto& [id, val] : claimed.classes[i].coeffs)
                alpha.coeffs[id] += kernel.front()[i] * val;
        outcome = contradiction_certificate(s, {alpha}, {Rational(1)});
        std::string kv = "(";
        for (std::size_t i = 0; i < kernel.front().size(); ++i) {
            if (i) kv += ",";
            kv += kernel.front()[i].str();
        }
        kv += ")";
        outcome.checks.push_back(
            {"kernel_retry", true,
             "claimed classes were recombined with the kernel vector " + kv});
    }
    emit(cfg, out, io::to_json(outcome));
    return outcome.contradiction ? exit_verification_failure : exit_pass;
}

inline int cmd_report(const RunConfig& cfg, std::ostream& out) {
    Loaded l = load(cfg);
    if (!l.is_polytope)
        throw io::parse_error("report requires a polytope input");
    FullReport rep = full_report(l.input.polytope, CircleSelector{cfg.xi});
    emit(cfg, out, io::to_json(rep));
    return rep.pass ? exit_pass : exit_verification_failure;
}

} // namespace detail_cli

/// Dispatches one command.  Exit codes: 0 pass, 1 verification failure
/// (a report was still emitted), 2 malformed input or request.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "ingest") return detail_cli::cmd_ingest(cfg, out);
        if (cfg.command == "validate") return detail_cli::cmd_validate(cfg, out);
        if (cfg.command == "integrate") return detail_cli::cmd_integrate(cfg, out);
        if (cfg.command == "canonical") return detail_cli::cmd_canonical(cfg, out);
        if (cfg.command == "witness") return detail_cli::cmd_witness(cfg, out);
        if (cfg.command == "contradict") return detail_cli::cmd_contradict(cfg, out);
        if (cfg.command == "report") return detail_cli::cmd_report(cfg, out);
        err << "unknown command '" << cfg.command << "'\n";
        return exit_malformed_input;
    } catch (const io::parse_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_malformed_input;
    } catch (const precondition_error& e) {
        err << "precondition violated: " << e.what() << "\n";
        return exit_malformed_input;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_malformed_input;
    } catch (const std::exception& e) {
        err << "verification error: " << e.what() << "\n";
        return exit_verification_failure;
    }
}

} // namespace cli
} // namespace equiloc
