#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "shadowlab/errors.hpp"
#include "shadowlab/generators.hpp"
#include "shadowlab/random.hpp"
#include "shadowlab/shadow.hpp"

using namespace shadowlab;

namespace {

std::set<Point2> hull_set(const ShadowPolygon& s) { return {s.points.begin(), s.points.end()}; }

int class_with_plane(const Polytope& p, const Subspace& plane) {
    for (std::size_t c = 0; c < p.classes().size(); ++c)
        if (p.classes()[c].direction_plane == plane) return static_cast<int>(c);
    return -1;
}

} // namespace

TEST_CASE("projection of the cube onto a coordinate plane") {
    auto cube = hypercube(3);
    auto img = project(cube, coordinate_plane(3));
    std::map<Point2, int> hits;
    for (const auto& q : img) ++hits[q];
    CHECK(hits.size() == 4);
    for (const auto& [q, n] : hits) CHECK(n == 2);
    auto s = shadow(cube, coordinate_plane(3));
    CHECK(s.k() == 4);
    for (const auto& f : s.fibers) CHECK(f.size() == 2);
}

TEST_CASE("points of the plane project to themselves") {
    auto w = ProjectionPlane::from_basis(V({1, 2, 0, 1}), V({0, 1, 3, -1}));
    const auto& b = w.basis().basis();
    for (long s = -2; s <= 2; ++s)
        for (long t = -2; t <= 2; ++t) {
            Point2 q = w.coordinates(axpy(scale(b[0], Rat(s)), Rat(t), b[1]));
            CHECK(q == Point2{Rat(s), Rat(t)});
        }
    for (const auto& u : w.complement().basis())
        for (const auto& x : b) CHECK(dot(u, x) == 0);
}

TEST_CASE("hypercube on the degenerate plane") {
    auto h = hypercube(4);
    auto w = fig2_plane();
    auto img = project(h, w);
    // Frame of (e1+e2+e3, 2e3+e4): coordinates solve the 2x2 Gram system.
    // Hand check: e1 -> (1/3)(5,-2)/(14/9)... computed below from the normal equations.
    auto expect = [](const Vec& x) {
        Rat r0 = x[0] + x[1] + x[2], r1 = 2 * x[2] + x[3];
        // Gram [[3,2],[2,5]], inverse (1/11)[[5,-2],[-2,3]].
        return Point2{(5 * r0 - 2 * r1) / 11, (-2 * r0 + 3 * r1) / 11};
    };
    for (int id : {0, 3, 12, 15}) CHECK(img[static_cast<std::size_t>(id)] == expect(h.vertex(id)));
    CHECK(img[15] == Point2{R(9, 11), R(3, 11)});

    auto s = shadow(h, w);
    CHECK(s.k() == 6);
    CHECK(hull_set(s) == oracle::hull_vertices(img));

    auto cert = is_admissible(h, w);
    CHECK_FALSE(cert.admissible);
    int e12 = class_with_plane(h, Subspace::from_basis({unit(4, 0), unit(4, 1)}));
    CHECK(cert.violating_class == e12);

    auto r = degeneration_report(h, w);
    REQUIRE(r.classes.size() == 1);
    CHECK(r.classes[0].class_id == e12);
    CHECK(r.classes[0].projected_rank == 1);
    // Only the x3 = x4 = 0 and x3 = x4 = 1 members reach the boundary.
    int on = 0;
    for (std::size_t i = 0; i < r.classes[0].member_ids.size(); ++i) {
        const auto& ids = h.two_faces()[static_cast<std::size_t>(r.classes[0].member_ids[i])].vertex_ids;
        bool extreme = ids == IdList{0, 1, 2, 3} || ids == IdList{12, 13, 14, 15};
        CHECK(r.classes[0].on_boundary[i] == extreme);
        on += r.classes[0].on_boundary[i];
    }
    CHECK(on == 2);
    CHECK_FALSE(r.condition_i());
    CHECK_FALSE(r.condition_ii());
}

TEST_CASE("perturbed hypercube satisfies (ii) but not (i)") {
    for (Rat eps : {R(1, 100), R(1, 50)}) {
        auto p = perturbed_hypercube(eps);
        auto r = degeneration_report(p, fig2_plane());
        CHECK_FALSE(r.condition_i());
        CHECK(r.condition_ii());
        CHECK(r.classes.size() == 1);
        CHECK(r.classes[0].member_ids.size() == 2);
        CHECK(shadow(p, fig2_plane()).k() == 8);
    }
    auto a = degeneration_report(perturbed_hypercube(R(1, 100)), fig2_plane());
    auto b = degeneration_report(perturbed_hypercube(R(1, 50)), fig2_plane());
    CHECK(a.degenerating_class_ids() == b.degenerating_class_ids());
}

TEST_CASE("cube admissibility") {
    auto cube = hypercube(3);
    auto cert = is_admissible(cube, coordinate_plane(3));
    CHECK_FALSE(cert.admissible);
    int e13 = class_with_plane(cube, Subspace::from_basis({unit(3, 0), unit(3, 2)}));
    CHECK(cert.violating_class == e13);
    auto w = ProjectionPlane::from_basis(V({1, 2, 0}), V({0, 1, 3}));
    // W-perp is spanned by (6,-3,1); the three class determinants are its coordinates.
    CHECK(canonical_direction(w.complement().basis()[0]) == V({6, -3, 1}));
    CHECK(is_admissible(cube, w).admissible);
    CHECK(shadow(cube, w).k() == 6);
    CHECK(degeneration_report(cube, w).classes.empty());
}

TEST_CASE("admissibility agrees with the degeneration report") {
    GridStream rng(41);
    auto h = hypercube(4);
    for (int trial = 0; trial < 60; ++trial) {
        Vec a = rng.vector(4, 2), b = rng.vector(4, 2);
        if (rank_of({a, b}) < 2) continue;
        auto w = ProjectionPlane::from_basis(a, b);
        auto rep = degeneration_report(h, w);
        CHECK(is_admissible(h, w).admissible == rep.condition_i());
        // (i) implies (ii).
        if (rep.condition_i()) CHECK(rep.condition_ii());
    }
}

TEST_CASE("sampling is deterministic and certified") {
    auto cube = hypercube(3);
    auto planes = sample_admissible(cube, 1, 10);
    CHECK(planes.size() == 10);
    for (const auto& w : planes) CHECK(is_admissible(cube, w).admissible);
    auto again = sample_admissible(cube, 1, 10);
    for (std::size_t i = 0; i < planes.size(); ++i) CHECK(planes[i].basis().basis() == again[i].basis().basis());
    auto h = hypercube(4);
    for (const auto& w : sample_admissible(h, 7, 100)) CHECK(shadow(h, w).k() == 8);
    CHECK_THROWS_AS(sample_admissible(cube, 1, 0), ParameterError);
}

TEST_CASE("shadow hull agrees with the brute-force hull oracle") {
    std::vector<Polytope> zoo{hypercube(3), hypercube(4), simplex(4), pn_polytope(make_pn_spec(3)),
                              perturbed_hypercube(R(1, 100)), prism(circle_polygon(5), V({0, 0, 1}))};
    for (const auto& p : zoo) {
        GridStream rng(p.vertices().size());
        for (int trial = 0; trial < 15; ++trial) {
            Vec a = rng.vector(p.dim(), 3), b = rng.vector(p.dim(), 3);
            if (rank_of({a, b}) < 2) continue;
            auto w = ProjectionPlane::from_basis(a, b);
            auto s = shadow(p, w);
            CHECK(hull_set(s) == oracle::hull_vertices(s.images));
        }
    }
}

TEST_CASE("shadow size is invariant under a joint rotation") {
    auto h = hypercube(4);
    Mat skew(4, 4);
    skew(0, 2) = R(1, 3);
    skew(2, 0) = R(-1, 3);
    skew(1, 3) = R(2, 5);
    skew(3, 1) = R(-2, 5);
    Mat q = cayley_orthogonal(skew);
    std::vector<Vec> rotated;
    for (const auto& v : h.vertices()) rotated.push_back(mat_vec(q, v));
    auto hq = Polytope::build(rotated);
    for (const auto& w : sample_admissible(h, 3, 10)) {
        const auto& b = w.basis().basis();
        auto wq = ProjectionPlane::from_basis(mat_vec(q, b[0]), mat_vec(q, b[1]));
        CHECK(shadow(h, w).k() == shadow(hq, wq).k());
    }
    auto w2 = fig2_plane();
    const auto& b = w2.basis().basis();
    CHECK(shadow(hq, ProjectionPlane::from_basis(mat_vec(q, b[0]), mat_vec(q, b[1]))).k() == 6);
}

TEST_CASE("zonotope shadow size") {
    auto w = ProjectionPlane::from_basis(V({1, 2, 0}), V({0, 1, 3}));
    CHECK(zonotope_shadow_size({unit(3, 0), unit(3, 1), unit(3, 2)}, w) == 6);
    CHECK(zonotope_shadow_size({unit(3, 0), unit(3, 1)}, coordinate_plane(3)) == 4);
    CHECK_THROWS_AS(zonotope_shadow_size({unit(3, 0), unit(3, 2)}, coordinate_plane(3)), GeometryError);
    CHECK_THROWS_AS(zonotope_shadow_size({unit(3, 0), V({2, 0, 0})}, w), ParameterError);
    auto spec = random_zonotope_spec(9, 5, 4);
    auto z = zonotope(spec);
    for (const auto& plane : sample_admissible(z, 4, 20)) {
        CHECK(zonotope_shadow_size(spec.generators, plane) == 10);
        CHECK(shadow(z, plane).k() == 10);
    }
}
