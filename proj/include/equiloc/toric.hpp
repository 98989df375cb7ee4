#pragma once

#include "equiloc/cohomology.hpp"
#include "equiloc/fixed_points.hpp"
#include "equiloc/polytope.hpp"
#include "equiloc/rational.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace equiloc {

/// Everything derived from one polytope and one circle choice, computed once:
/// the vertex graph, the normalized fixed-point data (ids v0, v1, ... in
/// increasing moment order) and the bookkeeping to go back and forth between
/// points and vertices.  raw moment of point i = points.points[i].moment + shift.
struct ToricContext {
    DelzantPolytope polytope;
    CircleSelector xi;
    GKMGraph graph;
    FixedPointSet points;
    Rational shift;
    std::vector<std::size_t> vertex_of;
};

/// Builds the context, enforcing the Delzant conditions (simple + smooth +
/// full-dimensional; bounded and nonempty are enforced by the enumeration)
/// and genericity of xi.
inline ToricContext make_toric_context(const DelzantPolytope& p, const CircleSelector& xi) {
    ToricContext ctx;
    ctx.polytope = p;
    ctx.xi = xi;
    ctx.graph = enumerate_vertices(p);

    ValidationReport delzant = check_delzant(p, ctx.graph);
    if (!delzant.passed()) {
        std::string msg = "polytope rejected:";
        for (const auto& c : delzant.failures()) msg += " [" + c.name + ": " + c.detail + "]";
        throw std::invalid_argument(msg);
    }

    FixedPointSet raw = detail::circle_restriction_raw(ctx.graph, xi, &ctx.vertex_of);
    ctx.points = normalize_moment(raw);
    ctx.shift = raw.points.front().moment - ctx.points.points.front().moment;
    return ctx;
}

/// The moment values before the normalizing shift, keyed like the points.
inline EquivariantClass moment_class_raw(const ToricContext& ctx) {
    EquivariantClass c;
    c.upow = 1;
    for (const auto& p : ctx.points.points) c.coeffs[p.id] = p.moment + ctx.shift;
    return c;
}

/// Equivariant class of the toric divisor above one facet: restriction zero
/// at vertices off the facet, and at a vertex on the facet the weight of the
/// single edge leaving the facet there.
inline EquivariantClass divisor_class(const ToricContext& ctx, std::size_t facet) {
    if (facet >= ctx.polytope.halfspaces.size())
        throw std::invalid_argument("divisor_class: facet index " + std::to_string(facet) +
                                    " out of range");
    EquivariantClass c;
    c.upow = 1;
    for (std::size_t i = 0; i < ctx.points.points.size(); ++i) {
        const GKMVertex& v = ctx.graph.vertices[ctx.vertex_of[i]];
        auto it = std::find(v.active.begin(), v.active.end(), facet);
        if (it == v.active.end()) {
            c.coeffs[ctx.points.points[i].id] = Rational(0);
            continue;
        }
        std::size_t k = static_cast<std::size_t>(it - v.active.begin());
        c.coeffs[ctx.points.points[i].id] =
            Rational(detail::to_int64(detail::dot(v.edges[k], ctx.xi.xi)));
    }
    return c;
}

inline EquivariantClass divisor_class(const DelzantPolytope& p, const CircleSelector& xi,
                                      std::size_t facet) {
    return divisor_class(make_toric_context(p, xi), facet);
}

/// Flow-up basis: for each vertex, the product of the divisor classes of the
/// facets opposite its downward edges.  The class at the i-th point (moment
/// order) restricts to the product of the negative weights at its own vertex,
/// vanishes at every lower vertex, and has upow = index/2.
inline std::vector<EquivariantClass> flow_up_basis(const ToricContext& ctx) {
    std::map<std::size_t, EquivariantClass> divisors;
    std::vector<EquivariantClass> out;
    for (std::size_t i = 0; i < ctx.points.points.size(); ++i) {
        const GKMVertex& v = ctx.graph.vertices[ctx.vertex_of[i]];
        EquivariantClass c = identity_class(ctx.points);
        for (std::size_t k = 0; k < v.edges.size(); ++k) {
            if (detail::dot(v.edges[k], ctx.xi.xi) >= 0) continue;
            std::size_t f = v.active[k];
            auto it = divisors.find(f);
            if (it == divisors.end()) it = divisors.emplace(f, divisor_class(ctx, f)).first;
            c = multiply(c, it->second);
        }
        out.push_back(std::move(c));
    }
    return out;
}

/// The spec'd entry point: s must be the fixed-point data of (p, xi), i.e.
/// agree with restrict_to_circle up to reordering.
inline std::vector<EquivariantClass> flow_up_basis(const DelzantPolytope& p,
                                                   const CircleSelector& xi,
                                                   const FixedPointSet& s) {
    ToricContext ctx = make_toric_context(p, xi);
    if (s.dim != ctx.points.dim || s.points.size() != ctx.points.points.size())
        throw std::invalid_argument("flow_up_basis: fixed-point set does not match the polytope");
    for (const auto& q : s.points) {
        const FixedPointDatum& mine = point_by_id(ctx.points, q.id);
        std::vector<std::int64_t> a = mine.weights, b = q.weights;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (mine.moment != q.moment || a != b)
            throw std::invalid_argument("flow_up_basis: point '" + q.id +
                                        "' disagrees with the polytope restriction");
    }
    return flow_up_basis(ctx);
}

inline std::vector<CanonicalClass> canonical_classes(const ToricContext& ctx) {
    return canonical_classes(flow_up_basis(ctx), ctx.points);
}

} // namespace equiloc
