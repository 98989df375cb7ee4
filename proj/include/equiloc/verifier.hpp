#pragma once

#include "equiloc/cohomology.hpp"
#include "equiloc/fixed_points.hpp"
#include "equiloc/linalg.hpp"
#include "equiloc/poly.hpp"
#include "equiloc/polytope.hpp"
#include "equiloc/rational.hpp"
#include "equiloc/toric.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace equiloc {

/// Raised when a verifier operation is called with inputs violating its
/// documented precondition (as opposed to inputs that are malformed).
class precondition_error : public std::runtime_error {
  public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

/// True iff the Betti vector of an 8-dimensional manifold is unimodal up to
/// the middle, b0 <= b2 <= b4.
inline bool check_unimodality(const BettiVector& b) {
    if (b.b.size() != 5)
        throw std::invalid_argument("check_unimodality: expected 5 Betti numbers (dim 8)");
    return b.b[0] <= b.b[1] && b.b[1] <= b.b[2];
}

/// The witness produced by restriction_rank_2_to_4: the matrix of
/// restrictions of the index-2 canonical classes at the index-4 points,
/// with labels, its exact rank, and the Betti bookkeeping.  On data coming
/// from a genuine manifold the rank equals b2, which forces b2 <= b4.
struct TheoremWitness {
    BettiVector betti;
    std::size_t rank_2_to_4 = 0;
    bool unimodal = false;
    bool rank_matches_b2 = false;
    std::vector<std::string> class_bases;    // row labels, one per index-2 class
    std::vector<std::string> index4_points;  // column labels
    RatMatrix rows;                          // restriction values
};

/// Left-kernel route to the rank: vectors c with sum_i c_i * claimed_i
/// vanishing at every index-4 point.  Shared by the witness and by the
/// kernel-retry path of the contradiction detector.
inline std::vector<RatVector> index4_kernel(const std::vector<EquivariantClass>& classes,
                                            const FixedPointSet& s) {
    std::vector<const FixedPointDatum*> cols;
    for (const auto& p : s.points)
        if (index_of(p) == 4) cols.push_back(&p);
    if (classes.empty()) return {};
    if (cols.empty()) {
        // no constraints at all: the kernel is everything
        std::vector<RatVector> basis;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            RatVector v(classes.size(), Rational(0));
            v[i] = Rational(1);
            basis.push_back(std::move(v));
        }
        return basis;
    }
    // rows of the solve: one per index-4 point; unknowns: one per class
    RatMatrix m(cols.size(), RatVector(classes.size()));
    for (std::size_t r = 0; r < cols.size(); ++r)
        for (std::size_t j = 0; j < classes.size(); ++j)
            m[r][j] = classes[j].at(cols[r]->id);
    return kernel_basis(m);
}

/// Builds the rank witness from the canonical classes (index-2 ones are
/// selected from the list) and the fixed-point data.
inline TheoremWitness restriction_rank_2_to_4(const std::vector<CanonicalClass>& canon,
                                              const FixedPointSet& s) {
    if (s.dim != 8)
        throw std::invalid_argument("restriction_rank_2_to_4: dim 8 data required");

    TheoremWitness w;
    w.betti = betti_from_morse(s);
    w.unimodal = check_unimodality(w.betti);

    std::vector<std::size_t> order = moment_order(s);
    std::vector<const CanonicalClass*> index2;
    for (std::size_t oi : order) {
        const FixedPointDatum& p = s.points[oi];
        if (index_of(p) == 4) w.index4_points.push_back(p.id);
        if (index_of(p) != 2) continue;
        for (const auto& cc : canon)
            if (cc.base == p.id) {
                if (!cc.certified)
                    throw precondition_error(
                        "restriction_rank_2_to_4: canonical class at '" + p.id +
                        "' is not certified");
                index2.push_back(&cc);
            }
    }

    std::vector<EquivariantClass> classes;
    for (const auto* cc : index2) {
        w.class_bases.push_back(cc->base);
        classes.push_back(cc->cls);
        RatVector row;
        for (const auto& id : w.index4_points) row.push_back(cc->cls.at(id));
        w.rows.push_back(std::move(row));
    }

    if (w.index4_points.empty() || classes.empty())
        w.rank_2_to_4 = 0;
    else
        w.rank_2_to_4 = classes.size() - index4_kernel(classes, s).size();
    w.rank_matches_b2 =
        w.betti.b.size() == 5 && w.rank_2_to_4 == static_cast<std::size_t>(w.betti.b[1]);
    return w;
}

/// Exact data behind an inconsistency proof: with alpha = sum c_i claimed_i,
/// beta = alpha^2 * omega restricts at F to (alpha|_F)^2 H(F) u^3.  Since
/// beta has degree 6 < 8, a genuine manifold forces integral zero; a nonzero
/// total therefore certifies that the data is not realizable.
struct ContradictionCertificate {
    RatVector alpha_coeffs;
    std::vector<std::pair<std::string, Rational>> alpha_restrictions;
    std::vector<std::pair<std::string, Rational>> beta_restrictions;
    std::vector<std::pair<std::string, Rational>> localization_terms;
    Rational total;
};

struct ContradictionOutcome {
    bool contradiction = false;
    std::string message;
    std::vector<CheckResult> checks;
    ContradictionCertificate certificate;
};

/// Runs the sign argument on claimed index-2 restriction tuples.  Demands
/// max-normalized data and claimed classes vanishing at every index-4 point
/// (precondition_error otherwise, naming the offending point); emits a
/// certificate iff the localized integral of beta is nonzero.
inline ContradictionOutcome contradiction_certificate(const FixedPointSet& s,
                                                      const std::vector<EquivariantClass>& claimed,
                                                      const RatVector& c) {
    if (s.dim != 8)
        throw std::invalid_argument("contradiction_certificate: dim 8 data required");
    if (claimed.size() != c.size())
        throw std::invalid_argument(
            "contradiction_certificate: coefficient count does not match class count");

    const FixedPointDatum* maxp = nullptr;
    for (const auto& p : s.points)
        if (!maxp || p.moment > maxp->moment) maxp = &p;
    if (!maxp || !maxp->moment.is_zero())
        throw precondition_error(
            "contradiction_certificate: moment map is not normalized (max must be 0)");

    for (std::size_t i = 0; i < claimed.size(); ++i) {
        detail::require_matches_points(claimed[i], s, "contradiction_certificate");
        if (claimed[i].upow != 1)
            throw std::invalid_argument("contradiction_certificate: claimed class " +
                                        std::to_string(i) + " must have upow 1");
        for (const auto& p : s.points)
            if (index_of(p) == 4 && !claimed[i].at(p.id).is_zero())
                throw precondition_error("contradiction_certificate: claimed class " +
                                         std::to_string(i) + " is nonzero at index-4 point '" +
                                         p.id + "' (restriction " + claimed[i].at(p.id).str() +
                                         ")");
    }

    ContradictionOutcome out;
    ContradictionCertificate& cert = out.certificate;
    cert.alpha_coeffs = c;

    // alpha = sum c_i claimed_i; beta = alpha^2 * omega, upow 1+1+1 = 3 < 4,
    // so Remark-2.2-type vanishing is the requirement being tested.
    out.checks.push_back({"beta_degree_below_dim", true, "beta has upow 3 < 4 = dim/2"});

    std::vector<std::size_t> order = moment_order(s);
    cert.total = Rational(0);
    bool min_ok = true;
    std::string min_detail;
    for (std::size_t oi : order) {
        const FixedPointDatum& p = s.points[oi];
        Rational a(0);
        for (std::size_t i = 0; i < claimed.size(); ++i) a += c[i] * claimed[i].at(p.id);
        Rational beta = a * a * p.moment;
        Rational term = beta / euler_product(p);
        cert.alpha_restrictions.emplace_back(p.id, a);
        cert.beta_restrictions.emplace_back(p.id, beta);
        cert.localization_terms.emplace_back(p.id, term);
        cert.total += term;
        int idx = index_of(p);
        if (idx == 0 && !beta.is_zero()) {
            min_ok = false;
            min_detail = "beta restricts to " + beta.str() + " at the minimum '" + p.id + "'";
        }
    }
    out.checks.push_back({"beta_vanishes_at_minimum", min_ok,
                          min_ok ? "" : min_detail + "; the index-2/6 sign argument "
                                                     "does not bound this term"});
    out.checks.push_back({"beta_vanishes_at_maximum", true, "forced by normalization (H = 0)"});
    out.checks.push_back({"beta_vanishes_at_index_4", true, "forced by the precondition"});

    if (cert.total.is_zero()) {
        out.contradiction = false;
        out.message = "no contradiction";
    } else {
        out.contradiction = true;
        out.message = "localized integral of beta is " + cert.total.str() +
                      " but a class of degree 6 on a closed 8-manifold integrates to 0; "
                      "the data is not realizable";
    }
    return out;
}

/// Verifies the sign fact the contradiction argument rests on: at every
/// fixed point of index 2 or 6 the Euler product is negative (an odd count
/// of negative weights forces this).
inline ValidationReport sign_lemma_check(const FixedPointSet& s) {
    if (s.dim != 8)
        throw std::invalid_argument("sign_lemma_check: dim 8 data required");
    ValidationReport rep;
    bool any = false;
    for (const auto& p : s.points) {
        int idx = index_of(p);
        if (idx != 2 && idx != 6) continue;
        any = true;
        Rational prod = euler_product(p);
        Poly e = Poly::monomial(prod, static_cast<std::size_t>(s.dim) / 2);
        rep.checks.push_back({"euler_u4_negative_at_" + p.id, prod.sign() < 0,
                              "index " + std::to_string(idx) + ", e_F = " + e.str()});
    }
    if (!any) rep.checks.push_back({"euler_u4_negative", true, "no index-2 or index-6 points"});
    return rep;
}

/// Betti bookkeeping sanity: reversing the circle direction reverses the
/// Morse indices, so betti(xi) must equal the reverse of betti(-xi), and on
/// genuine data both are palindromic (Poincare duality).
inline ValidationReport duality_check(const DelzantPolytope& p, const CircleSelector& xi) {
    CircleSelector neg;
    for (auto x : xi.xi) neg.xi.push_back(-x);
    FixedPointSet fwd = restrict_to_circle(p, xi);
    FixedPointSet bwd = restrict_to_circle(p, neg);
    BettiVector bf = betti_from_morse(fwd);
    BettiVector bb = betti_from_morse(bwd);

    auto vec_str = [](const BettiVector& b) {
        std::string s = "(";
        for (std::size_t i = 0; i < b.b.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(b.b[i]);
        }
        return s + ")";
    };

    BettiVector rev = bb;
    std::reverse(rev.b.begin(), rev.b.end());
    ValidationReport rep;
    rep.checks.push_back({"betti_reverses_under_negation", bf == rev,
                          "betti(xi) = " + vec_str(bf) + ", betti(-xi) = " + vec_str(bb)});
    BettiVector pal = bf;
    std::reverse(pal.b.begin(), pal.b.end());
    rep.checks.push_back({"betti_palindromic", bf == pal, "betti(xi) = " + vec_str(bf)});
    return rep;
}

/// One stage of the full pipeline; error is set when the stage threw.
struct StageReport {
    std::string stage;
    bool pass = false;
    std::vector<CheckResult> checks;
    std::string error;
};

struct FullReport {
    bool pass = false;
    std::vector<StageReport> stages;
    BettiVector betti;
    std::size_t rank_2_to_4 = 0;
    bool unimodal = false;
    Rational volume;
};

/// Runs the whole pipeline on one polytope and circle choice: restriction,
/// data validation, sign lemma, flow-up basis, canonical classes, membership
/// checks, the localization integral suite (vanishing plus volume identity),
/// the rank witness, and the duality bookkeeping.  A throwing stage is
/// recorded under its stage name and aborts the later stages.
inline FullReport full_report(const DelzantPolytope& p, const CircleSelector& xi) {
    FullReport rep;
    rep.pass = true;

    auto run_stage = [&rep](const std::string& name, auto&& body) -> bool {
        StageReport sr;
        sr.stage = name;
        try {
            sr.checks = body();
            sr.pass = true;
            for (const auto& c : sr.checks)
                if (!c.pass) sr.pass = false;
        } catch (const std::exception& e) {
            sr.pass = false;
            sr.error = e.what();
        }
        if (!sr.pass) rep.pass = false;
        rep.stages.push_back(std::move(sr));
        return rep.stages.back().pass;
    };

    ToricContext ctx;
    bool ok = run_stage("restrict", [&]() -> std::vector<CheckResult> {
        ctx = make_toric_context(p, xi);
        return {{"restriction_built", true,
                 std::to_string(ctx.points.points.size()) + " fixed points, dim " +
                     std::to_string(ctx.points.dim)}};
    });
    if (!ok) return rep;

    run_stage("validate", [&] { return validate(ctx.points).checks; });

    if (ctx.points.dim == 8)
        run_stage("sign_lemma", [&] { return sign_lemma_check(ctx.points).checks; });

    std::vector<EquivariantClass> basis;
    ok = run_stage("flow_up", [&]() -> std::vector<CheckResult> {
        basis = flow_up_basis(ctx);
        return {{"flow_up_basis_built", true, std::to_string(basis.size()) + " classes"}};
    });
    if (!ok) return rep;

    std::vector<CanonicalClass> canon;
    ok = run_stage("canonical", [&]() -> std::vector<CheckResult> {
        canon = canonical_classes(basis, ctx.points);
        std::vector<CheckResult> checks;
        for (const auto& cc : canon) {
            bool unique = cc.solve_kind == LinearSolution::Kind::unique;
            checks.push_back({"solve_unique_at_" + cc.base, unique, ""});
            for (const auto& cert : cc.certificate)
                checks.push_back({cert.name + "_at_" + cc.base, cert.pass, cert.detail});
        }
        return checks;
    });
    if (!ok) return rep;

    run_stage("membership", [&]() -> std::vector<CheckResult> {
        std::vector<CheckResult> checks;
        for (const auto& cc : canon) {
            MembershipReport m = membership_necessary(cc.cls, ctx.points);
            std::string detail;
            for (const auto& row : m.checks)
                if (!row.pass) {
                    if (!detail.empty()) detail += "; ";
                    detail += row.name + ": " + row.detail;
                }
            checks.push_back({"membership_at_" + cc.base, m.pass, detail});
        }
        return checks;
    });

    run_stage("integrate", [&]() -> std::vector<CheckResult> {
        std::vector<CheckResult> checks;
        EquivariantClass omega = symplectic_class(ctx.points);
        const int half = ctx.points.dim / 2;
        for (int k = 0; k < half; ++k) {
            LocalizationValue v = integrate(power(omega, static_cast<unsigned>(k)), ctx.points);
            checks.push_back({"vanishing_omega^" + std::to_string(k), v.value.is_zero(),
                              "integral " + v.value.str() + " * u^" + std::to_string(v.upow)});
        }
        Rational vol = polytope_volume(p, ctx.graph);
        rep.volume = vol;
        Rational nfact(1);
        for (int i = 2; i <= half; ++i) nfact *= Rational(i);
        LocalizationValue top =
            integrate(power(moment_class_raw(ctx), static_cast<unsigned>(half)), ctx.points);
        bool match = top.value == nfact * vol && top.upow == 0;
        checks.push_back({"volume_identity", match,
                          "integral of omega^" + std::to_string(half) + " = " + top.value.str() +
                              ", " + std::to_string(half) + "! * volume = " +
                              (nfact * vol).str()});
        return checks;
    });

    if (ctx.points.dim == 8) {
        run_stage("witness", [&]() -> std::vector<CheckResult> {
            TheoremWitness w = restriction_rank_2_to_4(canon, ctx.points);
            rep.betti = w.betti;
            rep.rank_2_to_4 = w.rank_2_to_4;
            rep.unimodal = w.unimodal;
            std::string bstr = "(";
            for (std::size_t i = 0; i < w.betti.b.size(); ++i) {
                if (i) bstr += ",";
                bstr += std::to_string(w.betti.b[i]);
            }
            bstr += ")";
            return {{"betti_computed", true, bstr},
                    {"unimodal", w.unimodal, ""},
                    {"rank_equals_b2", w.rank_matches_b2,
                     "rank " + std::to_string(w.rank_2_to_4) + ", b2 = " +
                         std::to_string(w.betti.b.size() == 5 ? w.betti.b[1] : -1)}};
        });
    } else {
        run_stage("witness", [&]() -> std::vector<CheckResult> {
            rep.betti = betti_from_morse(ctx.points);
            return {{"betti_computed", true, "rank witness requires dim 8, skipped"}};
        });
    }

    run_stage("duality", [&] { return duality_check(p, xi).checks; });
    return rep;
}

} // namespace equiloc
