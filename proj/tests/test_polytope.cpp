#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "shadowlab/errors.hpp"
#include "shadowlab/generators.hpp"
#include "shadowlab/polytope.hpp"

using namespace shadowlab;

namespace {

std::set<IdList> id_sets(const std::vector<Face>& fs) {
    std::set<IdList> out;
    for (const auto& f : fs) out.insert(f.vertex_ids);
    return out;
}

std::vector<std::size_t> f_vector(const Polytope& p) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < p.dim(); ++k) out.push_back(p.faces(k).size());
    return out;
}

Polytope triangular_prism() { return prism(circle_polygon(3), V({0, 0, 1})); }

} // namespace

TEST_CASE("build validates its input") {
    auto tet = Polytope::build({V({0, 0, 0}), V({1, 0, 0}), V({0, 1, 0}), V({0, 0, 1})});
    CHECK(tet.facets().size() == 4);
    auto cube = hypercube(3).vertices();
    auto with_center = cube;
    with_center.push_back({R(1, 2), R(1, 2), R(1, 2)});
    CHECK_THROWS_AS(Polytope::build(with_center), PolytopeError);
    auto with_edge_midpoint = cube;
    with_edge_midpoint.push_back({R(1, 2), R(0), R(0)});
    CHECK_THROWS_AS(Polytope::build(with_edge_midpoint), PolytopeError);
    auto dup = cube;
    dup.push_back(cube[3]);
    CHECK_THROWS_AS(Polytope::build(dup), PolytopeError);
    CHECK_THROWS_AS(Polytope::build({V({0, 0, 0}), V({1, 0, 0}), V({0, 1, 0}), V({1, 1, 0})}), PolytopeError);
    CHECK_THROWS_AS(Polytope::build({V({0, 0, 0}), V({1, 0, 0}), V({0, 1, 0})}), PolytopeError);
}

TEST_CASE("face counts of cubes and prisms") {
    CHECK(f_vector(hypercube(3)) == std::vector<std::size_t>{8, 12, 6});
    CHECK(f_vector(hypercube(4)) == std::vector<std::size_t>{16, 32, 24, 8});
    auto cube = hypercube(3), tesseract = hypercube(4);
    for (const auto& f : cube.facets()) CHECK(f.vertex_ids.size() == 4);
    for (const auto& f : tesseract.facets()) CHECK(f.vertex_ids.size() == 8);
    CHECK(k_faces(triangular_prism(), 1).size() == 9);
    CHECK(k_faces(hypercube(3), 2).size() == 6);
    CHECK(f_vector(simplex(4)) == std::vector<std::size_t>{5, 10, 10, 5});
    CHECK_THROWS_AS(k_faces(hypercube(3), 3), ParameterError);
}

TEST_CASE("every vertex lies on at least d facets") {
    for (const auto& p : {hypercube(3), hypercube(4), simplex(4), triangular_prism()}) {
        std::vector<int> count(p.vertices().size(), 0);
        for (const auto& f : p.facets())
            for (int v : f.vertex_ids) ++count[static_cast<std::size_t>(v)];
        for (int c : count) CHECK(c >= static_cast<int>(p.dim()));
    }
}

TEST_CASE("parallel classes") {
    auto cube = parallel_classes(hypercube(3));
    CHECK(cube.size() == 3);
    for (const auto& c : cube) CHECK(c.member_ids.size() == 2);
    auto hyper = parallel_classes(hypercube(4));
    CHECK(hyper.size() == 6);
    for (const auto& c : hyper) CHECK(c.member_ids.size() == 4);
    auto pr = triangular_prism();
    std::multiset<std::size_t> sizes;
    for (const auto& c : parallel_classes(pr)) sizes.insert(c.member_ids.size());
    CHECK(sizes == std::multiset<std::size_t>{1, 1, 1, 2});
    // Brute-force span comparison over all pairs.
    const auto& tf = pr.two_faces();
    for (std::size_t i = 0; i < tf.size(); ++i)
        for (std::size_t j = 0; j < tf.size(); ++j)
            CHECK((tf[i].span == tf[j].span) == (pr.class_of(static_cast<int>(i)) == pr.class_of(static_cast<int>(j))));
}

TEST_CASE("classes partition the 2-faces") {
    for (const auto& p : {hypercube(4), triangular_prism(), zonotope(random_zonotope_spec(3, 5, 4))}) {
        std::vector<int> seen(p.two_faces().size(), 0);
        for (const auto& c : p.classes())
            for (int f : c.member_ids) ++seen[static_cast<std::size_t>(f)];
        for (int s : seen) CHECK(s == 1);
    }
}

TEST_CASE("proscribed directions match a brute-force scan over 2-face pairs") {
    auto brute = [](const Polytope& p) {
        std::set<Vec> out;
        const auto& tf = p.two_faces();
        for (std::size_t i = 0; i < tf.size(); ++i)
            for (std::size_t j = 0; j < tf.size(); ++j) {
                if (tf[i].span == tf[j].span) continue;
                // v = a f1 + b f2 lies in the other span iff rank stays 2.
                const auto& a = tf[i].span.basis();
                for (long s = -3; s <= 3; ++s)
                    for (long t = -3; t <= 3; ++t) {
                        Vec v = axpy(scale(a[0], Rat(s)), Rat(t), a[1]);
                        if (!is_zero(v) && tf[j].span.contains(v)) out.insert(canonical_direction(v));
                    }
            }
        return out;
    };
    auto as_set = [](const std::vector<ProscribedDirection>& ds) {
        std::set<Vec> out;
        for (const auto& d : ds) out.insert(d.line);
        return out;
    };
    auto cube = proscribed_directions(hypercube(3));
    CHECK(cube.size() == 3);
    CHECK(as_set(cube) == std::set<Vec>{V({1, 0, 0}), V({0, 1, 0}), V({0, 0, 1})});
    CHECK(as_set(cube) == brute(hypercube(3)));
    CHECK(proscribed_directions(hypercube(4)).size() == 4);
    CHECK(as_set(proscribed_directions(hypercube(4))) == brute(hypercube(4)));
    auto s4 = simplex(4);
    CHECK(proscribed_directions(s4).size() == 10);
    CHECK(as_set(proscribed_directions(s4)) == brute(s4));
    for (const auto& d : proscribed_directions(s4)) {
        const auto& f = s4.two_faces()[static_cast<std::size_t>(d.witness_pair.first)];
        const auto& g = s4.two_faces()[static_cast<std::size_t>(d.witness_pair.second)];
        CHECK(f.span.contains(d.line));
        CHECK(g.span.contains(d.line));
    }
}

TEST_CASE("every 2-face span contains a proscribed direction") {
    for (const auto& p : {hypercube(3), hypercube(4), simplex(4), triangular_prism(), pn_polytope(make_pn_spec(2)),
                          zonotope(random_zonotope_spec(8, 5, 4))}) {
        auto ds = proscribed_directions(p);
        for (const auto& f : p.two_faces()) {
            bool any = false;
            for (const auto& d : ds) any = any || f.span.contains(d.line);
            CHECK(any);
        }
    }
}

TEST_CASE("face enumeration agrees with the brute-force oracle") {
    std::vector<Polytope> zoo{hypercube(3), hypercube(4), simplex(3), simplex(4), triangular_prism(),
                              prism(circle_polygon(5), V({0, 0, 1})), perturbed_hypercube(R(1, 100)),
                              pn_polytope(make_pn_spec(2)), zonotope(random_zonotope_spec(2, 4, 3))};
    for (const auto& p : zoo) {
        CAPTURE(p.label());
        CHECK(id_sets(p.facets()) == oracle::facets(p.vertices()));
        for (std::size_t k = 1; k + 1 < p.dim(); ++k) CHECK(id_sets(p.faces(k)) == oracle::k_faces(p.vertices(), k));
    }
}

TEST_CASE("face cycles run counter-clockwise around each 2-face") {
    auto p = triangular_prism();
    for (std::size_t f = 0; f < p.two_faces().size(); ++f) {
        auto c = face_cycle(p, static_cast<int>(f));
        CHECK(c.vertices.size() == p.two_faces()[f].vertex_ids.size());
        CHECK(c.edges.size() == c.vertices.size());
        for (int e : c.edges) CHECK(e >= 0);
        CHECK(c.vertices[0] == p.two_faces()[f].vertex_ids[0]);
    }
    // Top square of the cube: x3 = 1, canonical basis (e1, e2).
    auto cube = hypercube(3);
    for (std::size_t f = 0; f < cube.two_faces().size(); ++f) {
        if (cube.two_faces()[f].vertex_ids != IdList{4, 5, 6, 7}) continue;
        CHECK(face_cycle(cube, static_cast<int>(f)).vertices == IdList{4, 5, 7, 6});
    }
}
