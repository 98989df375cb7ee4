#include <doctest.h>

#include <equiloc/polytope.hpp>

#include "test_util.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

using equiloc::CircleSelector;
using equiloc::DelzantPolytope;
using equiloc::Rational;

namespace {

std::vector<Rational> rat_coords(std::vector<int> v) {
    std::vector<Rational> out;
    for (int x : v) out.emplace_back(x);
    return out;
}

DelzantPolytope nonsmooth_triangle() {
    // x >= 0, y >= 0, x + 2y <= 2: simple but not smooth at (0, 1).
    DelzantPolytope p;
    p.dim = 2;
    p.halfspaces = {{{1, 0}, Rational(0)}, {{0, 1}, Rational(0)}, {{-1, -2}, Rational(2)}};
    return p;
}

DelzantPolytope square_pyramid() {
    // Base square |x| <= 1, |y| <= 1 at z = 0, apex (0,0,1): the apex lies on
    // four facets, so the polytope is not simple.
    DelzantPolytope p;
    p.dim = 3;
    p.halfspaces = {
        {{0, 0, 1}, Rational(0)},   {{-1, 0, -1}, Rational(1)}, {{1, 0, -1}, Rational(1)},
        {{0, -1, -1}, Rational(1)}, {{0, 1, -1}, Rational(1)},
    };
    return p;
}

}  // namespace

TEST_CASE("simplex vertex enumeration") {
    auto g = equiloc::enumerate_vertices(testutil::simplex4());
    REQUIRE(g.vertices.size() == 5);
    // Vertices come out in lexicographic order.
    CHECK(g.vertices[0].coords == rat_coords({0, 0, 0, 0}));
    CHECK(g.vertices[1].coords == rat_coords({0, 0, 0, 1}));
    CHECK(g.vertices[2].coords == rat_coords({0, 0, 1, 0}));
    CHECK(g.vertices[3].coords == rat_coords({0, 1, 0, 0}));
    CHECK(g.vertices[4].coords == rat_coords({1, 0, 0, 0}));
    for (const auto& v : g.vertices) {
        CHECK(v.simple);
        CHECK(v.active.size() == 4);
        CHECK(v.edges.size() == 4);
    }

    // At the origin the active facets are the coordinate hyperplanes and the
    // edges point along the positive axes.
    const auto& origin = g.vertices[0];
    CHECK(origin.active == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(origin.edges[0] == std::vector<std::int64_t>{1, 0, 0, 0});
    CHECK(origin.edges[1] == std::vector<std::int64_t>{0, 1, 0, 0});
    CHECK(origin.edges[2] == std::vector<std::int64_t>{0, 0, 1, 0});
    CHECK(origin.edges[3] == std::vector<std::int64_t>{0, 0, 0, 1});
}

TEST_CASE("vertex counts for the bundled polytopes") {
    CHECK(equiloc::enumerate_vertices(testutil::simplex4()).vertices.size() == 5);
    CHECK(equiloc::enumerate_vertices(testutil::cube4()).vertices.size() == 16);
    CHECK(equiloc::enumerate_vertices(testutil::p2xp2()).vertices.size() == 9);
}

TEST_CASE("check_delzant passes on the bundled polytopes") {
    for (const auto& p : testutil::bundled_polytopes()) {
        auto rep = equiloc::check_delzant(p);
        CHECK(rep.passed());
    }
}

TEST_CASE("volumes") {
    CHECK(equiloc::polytope_volume(testutil::simplex4()) == Rational(1, 24));
    CHECK(equiloc::polytope_volume(testutil::cube4()) == Rational(1));
    CHECK(equiloc::polytope_volume(testutil::p2xp2()) == Rational(1, 4));

    // Triangle with vertices (0,0), (2,0), (0,1): area 1.  Volume only needs
    // the polytope to be simple, not smooth.
    CHECK(equiloc::polytope_volume(nonsmooth_triangle()) == Rational(1));
}

TEST_CASE("volume is translation invariant") {
    auto p = testutil::simplex4();
    // Translate by t = (1, -2, 3, 5): offsets become b - <a, t>.
    std::vector<std::int64_t> t = {1, -2, 3, 5};
    for (auto& h : p.halfspaces) {
        std::int64_t shift = 0;
        for (std::size_t i = 0; i < 4; ++i) shift += h.normal[i] * t[i];
        h.offset -= Rational(shift);
    }
    CHECK(equiloc::polytope_volume(p) == Rational(1, 24));
    CHECK(equiloc::check_delzant(p).passed());

    // The normalized circle restriction is unchanged by translation.
    auto a = equiloc::restrict_to_circle(testutil::simplex4(), testutil::xi_main());
    auto b = equiloc::restrict_to_circle(p, testutil::xi_main());
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].id == b.points[i].id);
        CHECK(a.points[i].moment == b.points[i].moment);
        CHECK(a.points[i].weights == b.points[i].weights);
    }
}

TEST_CASE("non-simple polytope is reported and rejected for volume") {
    auto p = square_pyramid();
    auto g = equiloc::enumerate_vertices(p);
    bool saw_nonsimple = false;
    for (const auto& v : g.vertices)
        if (!v.simple) {
            saw_nonsimple = true;
            CHECK(v.coords == rat_coords({0, 0, 1}));
        }
    CHECK(saw_nonsimple);

    auto rep = equiloc::check_delzant(p, g);
    CHECK(!rep.passed());
    bool simple_failure = false;
    for (const auto& c : rep.failures())
        if (c.name.find("_simple") != std::string::npos) simple_failure = true;
    CHECK(simple_failure);

    CHECK_THROWS_AS(equiloc::polytope_volume(p, g), std::invalid_argument);
    CHECK_THROWS_AS(equiloc::is_generic(g, CircleSelector{{1, 2, 3}}),
                    std::invalid_argument);
}

TEST_CASE("non-smooth vertex is reported with its edge determinant") {
    auto rep = equiloc::check_delzant(nonsmooth_triangle());
    CHECK(!rep.passed());
    bool found = false;
    for (const auto& c : rep.failures()) {
        if (c.name != "vertex(0,1)_smooth") continue;
        found = true;
        CHECK(c.detail.find("edge determinant") != std::string::npos);
        // Hand computation: edge directions (2,-1) and (0,-1), determinant -2.
        CHECK(c.detail.find("2") != std::string::npos);
    }
    CHECK(found);
    // The other two vertices are smooth, so they are not among the failures.
    CHECK(rep.failures().size() == 1);
}

TEST_CASE("unbounded polytope is rejected with a witness direction") {
    DelzantPolytope p;
    p.dim = 2;
    p.halfspaces = {{{1, 0}, Rational(0)}, {{0, 1}, Rational(0)}};
    CHECK_THROWS_WITH_AS(equiloc::enumerate_vertices(p),
                         doctest::Contains("unbounded along direction"),
                         std::invalid_argument);
}

TEST_CASE("empty polytope is rejected") {
    DelzantPolytope p;
    p.dim = 1;
    p.halfspaces = {{{1}, Rational(0)}, {{-1}, Rational(-1)}};  // x >= 0 and x <= -1
    CHECK_THROWS_AS(equiloc::enumerate_vertices(p), std::invalid_argument);
}

TEST_CASE("input validation") {
    DelzantPolytope p;
    p.dim = 2;
    p.halfspaces = {{{2, 0}, Rational(0)}, {{0, 1}, Rational(0)}, {{-1, -1}, Rational(1)}};
    // (2, 0) is not primitive.
    CHECK_THROWS_AS(equiloc::enumerate_vertices(p), std::invalid_argument);

    DelzantPolytope q;
    q.dim = 5;  // out of the supported range
    q.halfspaces = {{{1, 0, 0, 0, 0}, Rational(0)}};
    CHECK_THROWS_AS(equiloc::enumerate_vertices(q), std::invalid_argument);

    DelzantPolytope r;
    r.dim = 2;
    r.halfspaces = {{{1, 0, 0}, Rational(0)}};  // normal length mismatch
    CHECK_THROWS_AS(equiloc::enumerate_vertices(r), std::invalid_argument);
}

TEST_CASE("genericity of circle selectors") {
    auto g = equiloc::enumerate_vertices(testutil::simplex4());
    CHECK(equiloc::is_generic(g, testutil::xi_main()));
    CHECK(equiloc::is_generic(g, testutil::xi_alt()));
    // xi = (1,0,0,0) kills the edges parallel to e2, e3, e4.
    CHECK(!equiloc::is_generic(g, CircleSelector{{1, 0, 0, 0}}));
    CHECK_THROWS_AS(
        equiloc::restrict_to_circle(testutil::simplex4(), CircleSelector{{1, 0, 0, 0}}),
        std::invalid_argument);
}

TEST_CASE("tied circle moments are rejected") {
    // On the cube, xi = (1,1,1,1) is generic (no zero pairings) but gives
    // vertices (1,0,0,0) and (0,1,0,0) the same moment value.
    auto g = equiloc::enumerate_vertices(testutil::cube4());
    CircleSelector xi{{1, 1, 1, 1}};
    CHECK(equiloc::is_generic(g, xi));
    CHECK_THROWS_AS(equiloc::restrict_to_circle(testutil::cube4(), xi),
                    std::invalid_argument);
}

TEST_CASE("circle restriction of the simplex matches the frozen oracle") {
    auto s = equiloc::restrict_to_circle(testutil::simplex4(), testutil::xi_main());
    auto oracle = testutil::cp4_points();
    REQUIRE(s.dim == 8);
    REQUIRE(s.points.size() == oracle.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        CHECK(s.points[i].id == oracle.points[i].id);
        CHECK(s.points[i].moment == oracle.points[i].moment);
        // Weight lists are compared as multisets; the library sorts them.
        auto got = s.points[i].weights;
        auto want = oracle.points[i].weights;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        CHECK(got == want);
    }
    CHECK(equiloc::validate(s).passed());
}

TEST_CASE("circle restrictions of all bundled polytopes validate") {
    for (const auto& p : testutil::bundled_polytopes())
        for (const auto& xi : {testutil::xi_main(), testutil::xi_alt()}) {
            auto s = equiloc::restrict_to_circle(p, xi);
            CHECK(equiloc::validate(s).passed());
            CHECK(s.dim == 8);
        }
}

TEST_CASE("Betti numbers of the bundled polytopes") {
    using B = std::vector<std::int64_t>;
    auto betti = [](const DelzantPolytope& p) {
        return equiloc::betti_from_morse(
                   equiloc::restrict_to_circle(p, testutil::xi_main()))
            .b;
    };
    CHECK(betti(testutil::simplex4()) == B{1, 1, 1, 1, 1});
    CHECK(betti(testutil::cube4()) == B{1, 4, 6, 4, 1});
    CHECK(betti(testutil::p2xp2()) == B{1, 2, 3, 2, 1});
}
