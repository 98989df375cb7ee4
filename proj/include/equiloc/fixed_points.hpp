#pragma once

#include "equiloc/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace equiloc {

/// One isolated fixed point of a Hamiltonian circle action: the moment value
/// H(F) and the integer weights of the circle representation on the tangent
/// space.  Weights must be nonzero and there are dim/2 of them.
struct FixedPointDatum {
    std::string id;
    Rational moment;
    std::vector<std::int64_t> weights;
};

/// Fixed-point data of a closed Hamiltonian S^1-manifold of real dimension
/// `dim` with only isolated fixed points.  Plain carrier; validate() reports
/// on the structural invariants instead of enforcing them at construction.
struct FixedPointSet {
    int dim = 0;
    std::vector<FixedPointDatum> points;
};

/// Even Betti numbers b_0, b_2, ..., b_dim.  b[i] holds b_{2i}.
struct BettiVector {
    std::vector<std::int64_t> b;

    friend bool operator==(const BettiVector& x, const BettiVector& y) { return x.b == y.b; }
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::vector<CheckResult> failures() const {
        std::vector<CheckResult> f;
        for (const auto& c : checks)
            if (!c.pass) f.push_back(c);
        return f;
    }
};

/// Morse index of the moment map at the fixed point: twice the number of
/// negative weights.
inline int index_of(const FixedPointDatum& p) {
    int neg = 0;
    for (auto w : p.weights)
        if (w < 0) ++neg;
    return 2 * neg;
}

/// Product of all weights.  The equivariant Euler class of the normal bundle
/// at an isolated fixed point is this value times u^(dim/2).
inline Rational euler_product(const FixedPointDatum& p) {
    BigInt prod = 1;
    for (auto w : p.weights) {
        if (w == 0)
            throw std::invalid_argument("euler_product: zero weight at '" + p.id + "'");
        prod *= w;
    }
    return Rational(std::move(prod));
}

/// Product of the negative weights only; 1 (empty product) at the minimum.
/// This is the scalar part of the Euler class of the negative normal bundle,
/// carried at u-power index/2.
inline Rational negative_euler(const FixedPointDatum& p) {
    BigInt prod = 1;
    for (auto w : p.weights)
        if (w < 0) prod *= w;
    return Rational(std::move(prod));
}

namespace detail {

inline const FixedPointDatum* unique_point_with_index(const FixedPointSet& s, int idx) {
    const FixedPointDatum* found = nullptr;
    for (const auto& p : s.points) {
        if (index_of(p) != idx) continue;
        if (found) return nullptr;
        found = &p;
    }
    return found;
}

} // namespace detail

/// Shifts every moment value by a common constant so that the unique
/// maximum-index point (all weights negative) sits at H = 0.  For data coming
/// from a genuine manifold every other point then has H < 0.
inline FixedPointSet normalize_moment(FixedPointSet s) {
    if (s.dim <= 0 || s.dim % 2 != 0)
        throw std::invalid_argument("normalize_moment: dim must be even and positive");
    const FixedPointDatum* top = detail::unique_point_with_index(s, s.dim);
    if (!top)
        throw std::invalid_argument(
            "normalize_moment: no unique maximum (exactly one point with all weights "
            "negative required)");
    Rational shift = top->moment;
    for (auto& p : s.points) p.moment -= shift;
    return s;
}

/// Runs every structural check plus the localization vanishing identities
///   sum_F H(F)^k / prod(weights(F)) = 0   for k = 0 .. dim/2 - 1,
/// which hold exactly for any closed Hamiltonian S^1-manifold with isolated
/// fixed points.  All failures are reported; nothing throws.
inline ValidationReport validate(const FixedPointSet& s) {
    ValidationReport rep;
    auto check = [&rep](std::string name, bool pass, std::string detail = "") {
        rep.checks.push_back({std::move(name), pass, std::move(detail)});
    };

    bool dim_ok = s.dim > 0 && s.dim % 2 == 0;
    check("dim_even_positive", dim_ok, "dim = " + std::to_string(s.dim));
    check("points_nonempty", !s.points.empty(),
          std::to_string(s.points.size()) + " points");

    bool weights_ok = true;
    std::string weight_detail;
    for (const auto& p : s.points) {
        if (dim_ok && static_cast<int>(p.weights.size()) != s.dim / 2) {
            weights_ok = false;
            weight_detail = "'" + p.id + "' has " + std::to_string(p.weights.size()) +
                            " weights, expected " + std::to_string(s.dim / 2);
            break;
        }
        for (auto w : p.weights)
            if (w == 0) {
                weights_ok = false;
                weight_detail = "zero weight at '" + p.id + "'";
                break;
            }
        if (!weights_ok) break;
    }
    check("weights_nonzero_correct_count", weights_ok, weight_detail);

    {
        std::set<std::string> ids;
        bool distinct = true;
        std::string dup;
        for (const auto& p : s.points)
            if (!ids.insert(p.id).second) {
                distinct = false;
                dup = p.id;
            }
        check("ids_distinct", distinct, distinct ? "" : "duplicate id '" + dup + "'");
    }
    {
        std::set<Rational> values;
        bool distinct = true;
        std::string dup;
        for (const auto& p : s.points)
            if (!values.insert(p.moment).second) {
                distinct = false;
                dup = p.moment.str();
            }
        check("moment_values_distinct", distinct,
              distinct ? "" : "repeated moment value " + dup);
    }

    if (dim_ok && weights_ok) {
        int mins = 0, maxs = 0;
        for (const auto& p : s.points) {
            int idx = index_of(p);
            if (idx == 0) ++mins;
            if (idx == s.dim) ++maxs;
        }
        check("unique_minimum", mins == 1, std::to_string(mins) + " points of index 0");
        check("unique_maximum", maxs == 1,
              std::to_string(maxs) + " points of index " + std::to_string(s.dim));

        for (int k = 0; k < s.dim / 2; ++k) {
            Rational sum(0);
            for (const auto& p : s.points)
                sum += p.moment.pow(static_cast<unsigned>(k)) / euler_product(p);
            check("vanishing_identity_k" + std::to_string(k), sum.is_zero(),
                  sum.is_zero() ? "" : "residual " + sum.str());
        }
    }

    return rep;
}

/// Betti numbers read off the moment map as a perfect Morse function:
/// b_{2i} = number of fixed points of index 2i.
inline BettiVector betti_from_morse(const FixedPointSet& s) {
    if (s.dim <= 0 || s.dim % 2 != 0)
        throw std::invalid_argument("betti_from_morse: dim must be even and positive");
    BettiVector out;
    out.b.assign(static_cast<std::size_t>(s.dim / 2) + 1, 0);
    for (const auto& p : s.points) {
        int idx = index_of(p);
        if (idx < 0 || idx > s.dim)
            throw std::invalid_argument("betti_from_morse: index out of range at '" + p.id + "'");
        ++out.b[static_cast<std::size_t>(idx / 2)];
    }
    return out;
}

/// Points sorted by increasing moment value (strict order required).
inline std::vector<std::size_t> moment_order(const FixedPointSet& s) {
    std::vector<std::size_t> order(s.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s.points[a].moment < s.points[b].moment;
    });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (s.points[order[i - 1]].moment == s.points[order[i]].moment)
            throw std::invalid_argument("moment_order: moment values not distinct");
    return order;
}

inline const FixedPointDatum& point_by_id(const FixedPointSet& s, const std::string& id) {
    for (const auto& p : s.points)
        if (p.id == id) return p;
    throw std::invalid_argument("no fixed point with id '" + id + "'");
}

} // namespace equiloc
