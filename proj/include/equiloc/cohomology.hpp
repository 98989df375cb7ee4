#pragma once

#include "equiloc/fixed_points.hpp"
#include "equiloc/linalg.hpp"
#include "equiloc/rational.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace equiloc {

/// A homogeneous equivariant cohomology class of degree 2*upow, recorded by
/// its restrictions to the fixed points: the restriction to point F is
/// coeffs[F] * u^upow.  Restriction to fixed points is injective for the
/// actions handled here, so the tuple is the class.
struct EquivariantClass {
    int upow = 0;
    std::map<std::string, Rational> coeffs;

    Rational at(const std::string& id) const {
        auto it = coeffs.find(id);
        return it == coeffs.end() ? Rational(0) : it->second;
    }

    bool operator==(const EquivariantClass& o) const {
        if (upow != o.upow) return false;
        for (const auto& [id, c] : coeffs)
            if (o.at(id) != c) return false;
        for (const auto& [id, c] : o.coeffs)
            if (at(id) != c) return false;
        return true;
    }
    bool operator!=(const EquivariantClass& o) const { return !(*this == o); }
};

/// Result of pushing a class forward to a point: value * u^upow, where
/// upow < 0 never occurs for classes coming from actual cohomology and
/// upow > 0 signals a class of degree above the fundamental class.
struct LocalizationValue {
    Rational value;
    int upow = 0;

    bool operator==(const LocalizationValue& o) const {
        return value == o.value && upow == o.upow;
    }
};

namespace detail {

inline void require_same_support(const EquivariantClass& a, const EquivariantClass& b,
                                 const char* op) {
    for (const auto& [id, c] : a.coeffs)
        if (b.coeffs.find(id) == b.coeffs.end())
            throw std::invalid_argument(std::string(op) + ": point '" + id +
                                        "' is missing from one operand");
    for (const auto& [id, c] : b.coeffs)
        if (a.coeffs.find(id) == a.coeffs.end())
            throw std::invalid_argument(std::string(op) + ": point '" + id +
                                        "' is missing from one operand");
}

inline void require_matches_points(const EquivariantClass& c, const FixedPointSet& s,
                                   const char* op) {
    if (c.coeffs.size() != s.points.size())
        throw std::invalid_argument(std::string(op) +
                                    ": class and fixed-point set have different supports");
    for (const auto& p : s.points)
        if (c.coeffs.find(p.id) == c.coeffs.end())
            throw std::invalid_argument(std::string(op) + ": class has no restriction at '" +
                                        p.id + "'");
}

} // namespace detail

/// The class restricting to 1 at every point (degree 0).
inline EquivariantClass identity_class(const FixedPointSet& s) {
    EquivariantClass c;
    for (const auto& p : s.points) c.coeffs[p.id] = Rational(1);
    return c;
}

/// The class restricting to 0 at every point, in degree 2*upow.
inline EquivariantClass zero_class(const FixedPointSet& s, int upow = 0) {
    EquivariantClass c;
    c.upow = upow;
    for (const auto& p : s.points) c.coeffs[p.id] = Rational(0);
    return c;
}

/// Pointwise product; degrees add.  Both operands must restrict to the same
/// point set.
inline EquivariantClass multiply(const EquivariantClass& a, const EquivariantClass& b) {
    detail::require_same_support(a, b, "multiply");
    EquivariantClass c;
    c.upow = a.upow + b.upow;
    for (const auto& [id, ca] : a.coeffs) c.coeffs[id] = ca * b.at(id);
    return c;
}

/// Sum of classes of equal degree.
inline EquivariantClass add(const EquivariantClass& a, const EquivariantClass& b) {
    detail::require_same_support(a, b, "add");
    if (a.upow != b.upow)
        throw std::invalid_argument("add: classes have different degrees (u^" +
                                    std::to_string(a.upow) + " vs u^" +
                                    std::to_string(b.upow) + ")");
    EquivariantClass c;
    c.upow = a.upow;
    for (const auto& [id, ca] : a.coeffs) c.coeffs[id] = ca + b.at(id);
    return c;
}

inline EquivariantClass scale(const Rational& r, const EquivariantClass& a) {
    EquivariantClass c;
    c.upow = a.upow;
    for (const auto& [id, ca] : a.coeffs) c.coeffs[id] = r * ca;
    return c;
}

inline EquivariantClass power(const EquivariantClass& a, unsigned k) {
    EquivariantClass c;
    c.upow = 0;
    for (const auto& [id, ca] : a.coeffs) c.coeffs[id] = Rational(1);
    EquivariantClass base = a;
    unsigned e = k;
    while (e > 0) {
        if (e & 1u) c = multiply(c, base);
        e >>= 1u;
        if (e > 0) base = multiply(base, base);
    }
    return c;
}

/// The equivariant extension of the symplectic class: restriction H(F) * u at
/// each fixed point.  Demands normalized data (maximum of H at zero) so that
/// the choice of extension is pinned down; renormalize first otherwise.
inline EquivariantClass symplectic_class(const FixedPointSet& s) {
    bool has_zero_max = false;
    const FixedPointDatum* maxp = nullptr;
    for (const auto& p : s.points)
        if (!maxp || p.moment > maxp->moment) maxp = &p;
    has_zero_max = maxp && maxp->moment.is_zero();
    if (!has_zero_max)
        throw std::invalid_argument(
            "symplectic_class: moment map is not normalized (the maximum must be 0); "
            "apply normalize_moment first");
    EquivariantClass c;
    c.upow = 1;
    for (const auto& p : s.points) c.coeffs[p.id] = p.moment;
    return c;
}

/// Localization: the integral of a class over the manifold equals the sum of
/// its restrictions divided by the Euler classes of the fixed points.  For a
/// class of degree 2*upow on a manifold of dimension dim the result carries
/// u^(upow - dim/2); a class of degree below dim must integrate to zero.
inline LocalizationValue integrate(const EquivariantClass& c, const FixedPointSet& s) {
    detail::require_matches_points(c, s, "integrate");
    if (s.dim <= 0 || s.dim % 2 != 0)
        throw std::invalid_argument("integrate: fixed-point set has invalid dimension");
    LocalizationValue out;
    out.upow = c.upow - s.dim / 2;
    out.value = Rational(0);
    for (const auto& p : s.points) out.value += c.at(p.id) / euler_product(p);
    return out;
}

/// Necessary membership test for the integral lattice of actual cohomology
/// classes: every product with powers of u that lands in degree below dim
/// must integrate to zero.  Passing this test does not certify membership,
/// but failing it refutes the class.
struct MembershipReport {
    bool pass = true;
    std::vector<CheckResult> checks;
};

inline MembershipReport membership_necessary(const EquivariantClass& c, const FixedPointSet& s) {
    detail::require_matches_points(c, s, "membership_necessary");
    MembershipReport rep;
    const int half = s.dim / 2;
    if (c.upow >= half) {
        rep.checks.push_back({"degree_at_least_dim", true,
                              "degree 2*" + std::to_string(c.upow) +
                                  " is not below the manifold dimension; nothing to check"});
        return rep;
    }
    EquivariantClass omega = symplectic_class(s);
    EquivariantClass prod = c;
    for (int j = 0; c.upow + j < half; ++j) {
        if (j > 0) prod = multiply(prod, omega);
        LocalizationValue v = integrate(prod, s);
        bool ok = v.value.is_zero();
        rep.checks.push_back({"integral_of_class_times_omega^" + std::to_string(j), ok,
                              "integral " + v.value.str() + " * u^" + std::to_string(v.upow)});
        if (!ok) rep.pass = false;
    }
    return rep;
}

/// A canonical class in the sense of the flow-up construction, together with
/// the properties certified at build time:
///   (1) vanishes at every point with smaller moment value,
///   (2) restricts to the negative Euler product at its base point,
///   (3) vanishes at every other point of index at most the base index.
struct CanonicalClass {
    std::string base;
    EquivariantClass cls;
    std::vector<CheckResult> certificate;
    bool certified = false;
    LinearSolution::Kind solve_kind = LinearSolution::Kind::unique;
};

namespace detail {

inline std::vector<CheckResult> canonical_certificate(const EquivariantClass& c,
                                                      const FixedPointSet& s,
                                                      const FixedPointDatum& base) {
    std::vector<CheckResult> cert;
    bool ok1 = true, ok2 = false, ok3 = true;
    std::string bad1, bad3;
    for (const auto& p : s.points) {
        if (p.moment < base.moment && !c.at(p.id).is_zero()) {
            ok1 = false;
            if (!bad1.empty()) bad1 += ", ";
            bad1 += p.id;
        }
        if (p.id != base.id && index_of(p) <= index_of(base) && !c.at(p.id).is_zero()) {
            ok3 = false;
            if (!bad3.empty()) bad3 += ", ";
            bad3 += p.id;
        }
    }
    Rational want = negative_euler(base);
    ok2 = c.at(base.id) == want;
    cert.push_back({"vanishes_below", ok1,
                    ok1 ? "" : "nonzero at lower points: " + bad1});
    cert.push_back({"normalized_at_base", ok2,
                    "restriction " + c.at(base.id).str() + ", expected " + want.str()});
    cert.push_back({"vanishes_at_lower_index", ok3,
                    ok3 ? "" : "nonzero at points of index <= base: " + bad3});
    return cert;
}

} // namespace detail

/// Turns a flow-up basis (property (1) and (2) holders, one per fixed point)
/// into the canonical classes (adding property (3)).  The base point of each
/// basis class is inferred as its lowest nonzero restriction in moment order,
/// which simultaneously verifies property (1); property (2) and the degree
/// are checked explicitly.  For each base point the correction coefficients
/// solve a square lower-triangular linear system, so the solution exists and
/// is unique; a non-unique outcome is a hard error, not a fallback.
inline std::vector<CanonicalClass> canonical_classes(const std::vector<EquivariantClass>& basis,
                                                     const FixedPointSet& s) {
    if (basis.size() != s.points.size())
        throw std::invalid_argument("canonical_classes: need one flow-up class per fixed point");
    std::vector<std::size_t> order = moment_order(s);
    std::map<std::string, std::size_t> by_base;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        detail::require_matches_points(basis[i], s, "canonical_classes");
        const FixedPointDatum* base = nullptr;
        for (std::size_t oi : order)
            if (!basis[i].at(s.points[oi].id).is_zero()) {
                base = &s.points[oi];
                break;
            }
        if (!base)
            throw std::invalid_argument("canonical_classes: basis class " + std::to_string(i) +
                                        " is identically zero");
        if (basis[i].at(base->id) != negative_euler(*base))
            throw std::invalid_argument(
                "canonical_classes: basis class " + std::to_string(i) + " restricts to " +
                basis[i].at(base->id).str() + " at its base '" + base->id + "', expected " +
                negative_euler(*base).str());
        if (basis[i].upow != index_of(*base) / 2)
            throw std::invalid_argument("canonical_classes: basis class at '" + base->id +
                                        "' has degree u^" + std::to_string(basis[i].upow) +
                                        ", expected half the Morse index");
        if (!by_base.emplace(base->id, i).second)
            throw std::invalid_argument("canonical_classes: two basis classes share the base '" +
                                        base->id + "'");
    }

    std::vector<CanonicalClass> out;
    for (std::size_t oi : order) {
        const FixedPointDatum& basep = s.points[oi];
        const EquivariantClass& start = basis[by_base.at(basep.id)];
        const int k_base = index_of(basep);

        // Points that can still violate property (3): strictly above the base
        // in moment value, of index <= the base index.  Their flow-up classes
        // are the correction directions.
        std::vector<const FixedPointDatum*> wset;
        for (const auto& w : s.points)
            if (w.moment > basep.moment && index_of(w) <= k_base) wset.push_back(&w);
        std::sort(wset.begin(), wset.end(),
                  [](const FixedPointDatum* a, const FixedPointDatum* b) {
                      return a->moment < b->moment;
                  });

        // Unknowns q_w, one per correction point; equations demand that the
        // corrected class vanishes at every w in the set.  The matrix is
        // lower triangular with the nonzero values negative_euler(w) on the
        // diagonal (each flow-up class vanishes at lower points), hence
        // invertible.
        RatMatrix a(wset.size(), RatVector(wset.size(), Rational(0)));
        RatVector rhs(wset.size(), Rational(0));
        for (std::size_t r = 0; r < wset.size(); ++r) {
            const std::string& wid = wset[r]->id;
            rhs[r] = -start.at(wid);
            for (std::size_t cidx = 0; cidx < wset.size(); ++cidx)
                a[r][cidx] = basis[by_base.at(wset[cidx]->id)].at(wid);
        }
        LinearSolution sol = solve_exact(a, rhs);
        if (sol.kind != LinearSolution::Kind::unique)
            throw std::logic_error("canonical_classes: correction system at '" + basep.id +
                                   "' is not uniquely solvable; the flow-up basis is invalid");

        EquivariantClass c = start;
        for (std::size_t cidx = 0; cidx < wset.size(); ++cidx) {
            if (sol.particular[cidx].is_zero()) continue;
            const EquivariantClass& dir = basis[by_base.at(wset[cidx]->id)];
            // dir has degree index(w)/2 <= index(base)/2; the implicit factor
            // u^((k_base - k_w)/2) only shifts the degree, the restriction
            // coefficients are unchanged.
            for (const auto& [id, val] : dir.coeffs)
                c.coeffs[id] += sol.particular[cidx] * val;
        }

        CanonicalClass cc;
        cc.base = basep.id;
        cc.cls = c;
        cc.solve_kind = sol.kind;
        cc.certificate = detail::canonical_certificate(c, s, basep);
        cc.certified = true;
        for (const auto& chk : cc.certificate)
            if (!chk.pass) cc.certified = false;
        out.push_back(std::move(cc));
    }
    return out;
}

} // namespace equiloc
