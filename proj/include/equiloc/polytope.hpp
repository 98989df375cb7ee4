#pragma once

#include "equiloc/fixed_points.hpp"
#include "equiloc/linalg.hpp"
#include "equiloc/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace equiloc {

/// One facet constraint <normal, x> + offset >= 0 with an inward-pointing
/// primitive integer normal.
struct HalfSpace {
    std::vector<std::int64_t> normal;
    Rational offset;
};

/// Half-space description of a moment polytope of dimension <= 4.
/// Boundedness, simplicity and smoothness are verified by enumerate_vertices
/// and check_delzant, not assumed.
struct DelzantPolytope {
    int dim = 0;
    std::vector<HalfSpace> halfspaces;
};

/// Vertex of the polytope together with its combinatorics.  For a simple
/// vertex, edges[k] is the primitive integer direction of the edge obtained
/// by leaving facet active[k] (it points from the vertex into the polytope
/// and stays on every other active facet).
struct GKMVertex {
    RatVector coords;
    std::vector<std::size_t> active;
    std::vector<std::vector<std::int64_t>> edges;
    bool simple = false;
};

struct GKMGraph {
    int dim = 0;
    std::vector<GKMVertex> vertices;
};

/// Direction of the circle subgroup inside the torus.
struct CircleSelector {
    std::vector<std::int64_t> xi;
};

namespace detail {

inline std::int64_t to_int64(const BigInt& x) {
    static const BigInt lo = std::numeric_limits<std::int64_t>::min();
    static const BigInt hi = std::numeric_limits<std::int64_t>::max();
    if (x < lo || x > hi)
        throw std::overflow_error("integer out of 64-bit range: " + x.str());
    return x.convert_to<std::int64_t>();
}

inline Rational dot(const std::vector<std::int64_t>& a, const RatVector& x) {
    Rational r(0);
    for (std::size_t i = 0; i < a.size(); ++i) r += Rational(a[i]) * x[i];
    return r;
}

inline BigInt dot(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    BigInt r = 0;
    for (std::size_t i = 0; i < a.size(); ++i) r += BigInt(a[i]) * b[i];
    return r;
}

inline std::string coords_str(const RatVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
    }
    return s + ")";
}

inline std::string vector_str(const std::vector<std::int64_t>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

/// Clears denominators and divides by the gcd; the sign of the input is kept.
inline std::vector<std::int64_t> primitive_direction(const RatVector& v) {
    BigInt l = 1;
    for (const auto& r : v) l = boost::multiprecision::lcm(l, r.denominator());
    std::vector<BigInt> ints(v.size());
    BigInt g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        ints[i] = v[i].numerator() * (l / v[i].denominator());
        g = boost::multiprecision::gcd(g, ints[i]);
    }
    if (g == 0)
        throw std::invalid_argument("primitive_direction: zero vector");
    std::vector<std::int64_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_int64(ints[i] / g);
    return out;
}

inline bool is_primitive(const std::vector<std::int64_t>& v) {
    BigInt g = 0;
    for (auto x : v) g = boost::multiprecision::gcd(g, BigInt(x));
    return g == 1;
}

/// All k-subsets of {0, ..., m-1} in lexicographic order.
inline void for_each_subset(std::size_t m, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (k > m) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i-- > 0) {
            if (idx[i] != i + m - k) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return;
        }
        if (k == 0) return;
    }
}

/// Directions spanning the null space of the chosen facet normals.
inline std::vector<RatVector> normal_kernel(const DelzantPolytope& p,
                                            const std::vector<std::size_t>& subset) {
    const std::size_t n = static_cast<std::size_t>(p.dim);
    if (subset.empty()) {
        std::vector<RatVector> basis;
        for (std::size_t i = 0; i < n; ++i) {
            RatVector e(n, Rational(0));
            e[i] = Rational(1);
            basis.push_back(std::move(e));
        }
        return basis;
    }
    RatMatrix rows;
    for (std::size_t f : subset) {
        RatVector row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = Rational(p.halfspaces[f].normal[j]);
        rows.push_back(std::move(row));
    }
    return kernel_basis(rows);
}

inline void validate_polytope_input(const DelzantPolytope& p) {
    if (p.dim < 1 || p.dim > 4)
        throw std::invalid_argument("polytope dimension must be between 1 and 4");
    if (p.halfspaces.empty())
        throw std::invalid_argument("polytope has no halfspaces");
    for (std::size_t i = 0; i < p.halfspaces.size(); ++i) {
        const auto& h = p.halfspaces[i];
        if (h.normal.size() != static_cast<std::size_t>(p.dim))
            throw std::invalid_argument("halfspace " + std::to_string(i) +
                                        ": normal length does not match dim");
        if (!is_primitive(h.normal))
            throw std::invalid_argument("halfspace " + std::to_string(i) +
                                        ": normal " + vector_str(h.normal) +
                                        " is not a primitive nonzero vector");
    }
}

} // namespace detail

/// Enumerates all vertices by solving every n-subset of facet equations
/// exactly and keeping the solutions that satisfy the remaining constraints.
/// Edge directions are attached at simple vertices.  Rejects empty and
/// unbounded input (for unbounded input a witness recession direction is
/// named).  Vertices come out sorted lexicographically by coordinates.
inline GKMGraph enumerate_vertices(const DelzantPolytope& p) {
    detail::validate_polytope_input(p);
    const std::size_t n = static_cast<std::size_t>(p.dim);
    const std::size_t m = p.halfspaces.size();

    auto satisfies_all = [&](const RatVector& x) {
        for (const auto& h : p.halfspaces)
            if (detail::dot(h.normal, x) + h.offset < Rational(0)) return false;
        return true;
    };

    std::vector<RatVector> found;
    detail::for_each_subset(m, n, [&](const std::vector<std::size_t>& subset) {
        RatMatrix a;
        RatVector rhs;
        for (std::size_t f : subset) {
            RatVector row(n);
            for (std::size_t j = 0; j < n; ++j)
                row[j] = Rational(p.halfspaces[f].normal[j]);
            a.push_back(std::move(row));
            rhs.push_back(-p.halfspaces[f].offset);
        }
        LinearSolution sol = solve_exact(a, rhs);
        if (sol.kind != LinearSolution::Kind::unique) return;
        if (!satisfies_all(sol.particular)) return;
        if (std::find(found.begin(), found.end(), sol.particular) == found.end())
            found.push_back(sol.particular);
    });

    if (found.empty())
        throw std::invalid_argument(
            "polytope rejected: no vertices (the constraint system is empty or not pointed)");

    std::sort(found.begin(), found.end(), [](const RatVector& a, const RatVector& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (b[i] < a[i]) return false;
        }
        return false;
    });

    // Bounded iff the recession cone is trivial.  Every extreme recession ray
    // lies in the kernel of n-1 independent normals, so testing those
    // directions against all constraints is an exact boundedness certificate.
    detail::for_each_subset(m, n - 1, [&](const std::vector<std::size_t>& subset) {
        std::vector<RatVector> kernel = detail::normal_kernel(p, subset);
        if (kernel.size() != 1) return;
        std::vector<std::int64_t> d = detail::primitive_direction(kernel.front());
        for (int s = 0; s < 2; ++s) {
            bool recedes = true;
            for (const auto& h : p.halfspaces)
                if (detail::dot(h.normal, d) < 0) {
                    recedes = false;
                    break;
                }
            if (recedes)
                throw std::invalid_argument("polytope rejected: unbounded along direction " +
                                            detail::vector_str(d));
            for (auto& x : d) x = -x;
        }
    });

    GKMGraph g;
    g.dim = p.dim;
    for (const auto& x : found) {
        GKMVertex v;
        v.coords = x;
        for (std::size_t f = 0; f < m; ++f)
            if ((detail::dot(p.halfspaces[f].normal, x) + p.halfspaces[f].offset).is_zero())
                v.active.push_back(f);
        v.simple = v.active.size() == n;
        if (v.simple) {
            for (std::size_t k = 0; k < n; ++k) {
                std::vector<std::size_t> others;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != k) others.push_back(v.active[j]);
                std::vector<RatVector> kernel = detail::normal_kernel(p, others);
                if (kernel.size() != 1) {
                    v.simple = false;  // degenerate normals; treated as non-simple
                    v.edges.clear();
                    break;
                }
                std::vector<std::int64_t> d = detail::primitive_direction(kernel.front());
                BigInt side = detail::dot(p.halfspaces[v.active[k]].normal, d);
                if (side == 0) {
                    v.simple = false;
                    v.edges.clear();
                    break;
                }
                if (side < 0)
                    for (auto& e : d) e = -e;
                v.edges.push_back(std::move(d));
            }
        }
        g.vertices.push_back(std::move(v));
    }
    return g;
}

/// Per-vertex simplicity and smoothness report plus a full-dimensionality
/// check.  A polytope passing every check is Delzant: it encodes a smooth
/// compact toric symplectic 2n-manifold.
inline ValidationReport check_delzant(const DelzantPolytope& p, const GKMGraph& g) {
    ValidationReport rep;
    const std::size_t n = static_cast<std::size_t>(p.dim);

    for (const auto& v : g.vertices) {
        std::string label = "vertex" + detail::coords_str(v.coords);
        if (!v.simple) {
            rep.checks.push_back({label + "_simple", false,
                                  "lies on " + std::to_string(v.active.size()) +
                                      " facets, expected " + std::to_string(n)});
            continue;
        }
        rep.checks.push_back({label + "_simple", true, ""});
        RatMatrix edge_mat(n, RatVector(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) edge_mat[i][j] = Rational(v.edges[i][j]);
        Rational d = det(edge_mat);
        bool unimodular = d == Rational(1) || d == Rational(-1);
        rep.checks.push_back({label + "_smooth", unimodular,
                              "edge determinant " + d.str()});
    }

    // Affine span of the vertices must be all of R^n.
    RatMatrix diffs;
    for (std::size_t i = 1; i < g.vertices.size(); ++i) {
        RatVector row(n);
        for (std::size_t j = 0; j < n; ++j)
            row[j] = g.vertices[i].coords[j] - g.vertices[0].coords[j];
        diffs.push_back(std::move(row));
    }
    bool full = !g.vertices.empty() && (n == 0 || (diffs.size() >= n && rank(diffs) == n));
    rep.checks.push_back({"full_dimensional", full,
                          full ? "" : "vertices do not affinely span the ambient space"});
    return rep;
}

inline ValidationReport check_delzant(const DelzantPolytope& p) {
    return check_delzant(p, enumerate_vertices(p));
}

/// True iff no edge direction of the polytope pairs to zero with xi, i.e.
/// the circle chosen by xi has isolated fixed points.
inline bool is_generic(const GKMGraph& g, const CircleSelector& xi) {
    for (const auto& v : g.vertices) {
        if (!v.simple)
            throw std::invalid_argument("is_generic: non-simple vertex at " +
                                        detail::coords_str(v.coords));
        for (const auto& e : v.edges)
            if (detail::dot(e, xi.xi) == 0) return false;
    }
    return true;
}

inline bool is_generic(const DelzantPolytope& p, const CircleSelector& xi) {
    return is_generic(enumerate_vertices(p), xi);
}

namespace detail {

/// Restriction of the torus action to the circle xi, before the moment shift:
/// one fixed point per vertex with weights <edge, xi> and moment <vertex, xi>.
/// Points are sorted by moment value and labelled v0, v1, ... in that order.
inline FixedPointSet circle_restriction_raw(const GKMGraph& g, const CircleSelector& xi,
                                            std::vector<std::size_t>* vertex_of = nullptr) {
    if (xi.xi.size() != static_cast<std::size_t>(g.dim))
        throw std::invalid_argument("restrict_to_circle: xi length does not match dim");
    const std::size_t n = static_cast<std::size_t>(g.dim);

    struct Raw {
        Rational moment;
        std::vector<std::int64_t> weights;
        std::size_t vertex;
    };
    std::vector<Raw> raw;
    for (std::size_t vi = 0; vi < g.vertices.size(); ++vi) {
        const auto& v = g.vertices[vi];
        if (!v.simple)
            throw std::invalid_argument("restrict_to_circle: non-simple vertex at " +
                                        coords_str(v.coords));
        Raw r;
        r.vertex = vi;
        r.moment = Rational(0);
        for (std::size_t j = 0; j < n; ++j) r.moment += Rational(xi.xi[j]) * v.coords[j];
        for (const auto& e : v.edges) {
            BigInt w = dot(e, xi.xi);
            if (w == 0)
                throw std::invalid_argument("restrict_to_circle: xi is not generic, edge " +
                                            vector_str(e) + " at vertex " +
                                            coords_str(v.coords) + " is killed");
            r.weights.push_back(to_int64(w));
        }
        raw.push_back(std::move(r));
    }

    std::sort(raw.begin(), raw.end(),
              [](const Raw& a, const Raw& b) { return a.moment < b.moment; });
    for (std::size_t i = 1; i < raw.size(); ++i)
        if (raw[i - 1].moment == raw[i].moment)
            throw std::invalid_argument(
                "restrict_to_circle: two vertices share the moment value " +
                raw[i].moment.str() + "; choose a more generic xi");

    FixedPointSet s;
    s.dim = 2 * g.dim;
    if (vertex_of) vertex_of->clear();
    for (std::size_t i = 0; i < raw.size(); ++i) {
        FixedPointDatum d;
        d.id = "v" + std::to_string(i);
        d.moment = raw[i].moment;
        d.weights = raw[i].weights;
        s.points.push_back(std::move(d));
        if (vertex_of) vertex_of->push_back(raw[i].vertex);
    }
    return s;
}

} // namespace detail

/// Fixed-point data of the circle action chosen by xi, with the moment map
/// shifted so the maximum sits at zero.
inline FixedPointSet restrict_to_circle(const DelzantPolytope& p, const CircleSelector& xi) {
    GKMGraph g = enumerate_vertices(p);
    return normalize_moment(detail::circle_restriction_raw(g, xi));
}

namespace detail {

/// Recursive cone triangulation of a face (given by the facet subset I and
/// the vertex indices lying on it) into simplices, returned as vertex index
/// lists.  Faces of a simple polytope are simple, so a face of dimension d
/// has facets exactly of dimension d-1, each cut out by one more facet of
/// the polytope.
inline void triangulate_face(const GKMGraph& g, std::size_t n_facets,
                             const std::vector<std::size_t>& face_facets,
                             const std::vector<std::size_t>& face_vertices,
                             std::size_t face_dim,
                             std::vector<std::vector<std::size_t>>& out) {
    if (face_dim == 0) {
        if (face_vertices.size() != 1)
            throw std::logic_error("triangulate_face: zero-dimensional face with " +
                                   std::to_string(face_vertices.size()) + " vertices");
        out.push_back(face_vertices);
        return;
    }
    const std::size_t base = face_vertices.front();
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t f = 0; f < n_facets; ++f) {
        if (std::find(face_facets.begin(), face_facets.end(), f) != face_facets.end())
            continue;
        std::vector<std::size_t> sub;
        for (std::size_t v : face_vertices) {
            const auto& act = g.vertices[v].active;
            if (std::find(act.begin(), act.end(), f) != act.end()) sub.push_back(v);
        }
        if (sub.empty()) continue;
        if (std::find(sub.begin(), sub.end(), base) != sub.end()) continue;
        if (sub.size() < face_dim) continue;  // not a facet of this face
        if (!seen.insert(sub).second) continue;
        std::vector<std::size_t> ff = face_facets;
        ff.push_back(f);
        std::vector<std::vector<std::size_t>> pieces;
        triangulate_face(g, n_facets, ff, sub, face_dim - 1, pieces);
        for (auto& s : pieces) {
            s.push_back(base);
            out.push_back(std::move(s));
        }
    }
}

} // namespace detail

/// Exact Euclidean volume via a cone triangulation over the first vertex,
/// recursing on facets; each simplex contributes |det(edge matrix)| / n!.
/// Deliberately independent of any fixed-point computation.
inline Rational polytope_volume(const DelzantPolytope& p, const GKMGraph& g) {
    const std::size_t n = static_cast<std::size_t>(p.dim);
    for (const auto& v : g.vertices)
        if (!v.simple)
            throw std::invalid_argument("polytope_volume: non-simple vertex at " +
                                        detail::coords_str(v.coords));

    std::vector<std::vector<std::size_t>> simplices;
    detail::triangulate_face(g, p.halfspaces.size(), {},
                             [&] {
                                 std::vector<std::size_t> all(g.vertices.size());
                                 for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
                                 return all;
                             }(),
                             n, simplices);

    Rational nfact(1);
    for (std::size_t i = 2; i <= n; ++i) nfact *= Rational(static_cast<long long>(i));

    Rational vol(0);
    for (const auto& simplex : simplices) {
        // simplex = [w, ..., base]; n+1 vertices of an n-simplex
        if (simplex.size() != n + 1)
            throw std::logic_error("polytope_volume: simplex of wrong size");
        const RatVector& v0 = g.vertices[simplex.back()].coords;
        RatMatrix mat(n, RatVector(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                mat[i][j] = g.vertices[simplex[i]].coords[j] - v0[j];
        vol += det(mat).abs() / nfact;
    }
    return vol;
}

inline Rational polytope_volume(const DelzantPolytope& p) {
    return polytope_volume(p, enumerate_vertices(p));
}

} // namespace equiloc
