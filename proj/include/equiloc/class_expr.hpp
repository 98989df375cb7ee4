#pragma once

#include "equiloc/cohomology.hpp"
#include "equiloc/toric.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace equiloc {

/// Evaluation environment for CLI class expressions.  points is always set;
/// ctx and canon are only available for polytope inputs (tau:<facet> and
/// canon:<id> need the toric structure).
struct ClassEnv {
    const FixedPointSet* points = nullptr;
    const ToricContext* ctx = nullptr;
    const std::vector<CanonicalClass>* canon = nullptr;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline unsigned parse_exponent(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("class expression: empty exponent");
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw std::invalid_argument("class expression: exponent '" + s +
                                        "' is not a non-negative integer");
    unsigned long v = std::stoul(s);
    if (v > 64) throw std::invalid_argument("class expression: exponent " + s + " too large");
    return static_cast<unsigned>(v);
}

inline EquivariantClass eval_atom(const std::string& atom, const ClassEnv& env) {
    if (atom == "omega") return symplectic_class(*env.points);
    if (atom.rfind("tau:", 0) == 0) {
        if (!env.ctx)
            throw std::invalid_argument(
                "class expression: tau:<facet> requires a polytope input");
        std::string rest = atom.substr(4);
        if (rest.empty()) throw std::invalid_argument("class expression: tau: needs an index");
        for (char ch : rest)
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw std::invalid_argument("class expression: facet index '" + rest +
                                            "' is not a non-negative integer");
        return divisor_class(*env.ctx, std::stoul(rest));
    }
    if (atom.rfind("canon:", 0) == 0) {
        if (!env.canon)
            throw std::invalid_argument(
                "class expression: canon:<point-id> requires a polytope input");
        std::string id = atom.substr(6);
        for (const auto& cc : *env.canon)
            if (cc.base == id) return cc.cls;
        throw std::invalid_argument("class expression: no canonical class with base '" + id +
                                    "'");
    }
    throw std::invalid_argument("class expression: unknown atom '" + atom +
                                "' (expected omega, tau:<facet-index> or canon:<point-id>)");
}

} // namespace detail

/// Grammar: expr := term ('*' term)*, term := atom ('^' uint)?,
/// atom := omega | tau:<facet-index> | canon:<point-id>.
inline EquivariantClass eval_class_expr(const std::string& expr, const ClassEnv& env) {
    if (!env.points) throw std::logic_error("eval_class_expr: no fixed-point set");
    std::vector<std::string> terms;
    std::string cur;
    for (char ch : expr) {
        if (ch == '*') {
            terms.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    terms.push_back(cur);

    EquivariantClass result = identity_class(*env.points);
    bool any = false;
    for (const auto& raw : terms) {
        std::string term = detail::trim(raw);
        if (term.empty()) throw std::invalid_argument("class expression: empty term");
        unsigned exp = 1;
        std::size_t caret = term.find('^');
        if (caret != std::string::npos) {
            exp = detail::parse_exponent(detail::trim(term.substr(caret + 1)));
            term = detail::trim(term.substr(0, caret));
        }
        EquivariantClass atom = detail::eval_atom(term, env);
        result = multiply(result, power(atom, exp));
        any = true;
    }
    if (!any) throw std::invalid_argument("class expression: empty expression");
    return result;
}

} // namespace equiloc
