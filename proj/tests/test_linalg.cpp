#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include "shadowlab/errors.hpp"
#include "shadowlab/linalg.hpp"
#include "shadowlab/random.hpp"

using namespace shadowlab;

TEST_CASE("rationals round-trip through their canonical text form") {
    CHECK(to_string(parse_rat("6/4")) == "3/2");
    CHECK(to_string(parse_rat("-10/5")) == "-2");
    CHECK(to_string(parse_rat("0/7")) == "0");
    CHECK(to_string(parse_rat("+3")) == "3");
    CHECK_THROWS_AS(parse_rat("1/0"), InputError);
    CHECK_THROWS_AS(parse_rat("1.5"), InputError);
    CHECK_THROWS_AS(parse_rat(""), InputError);
    CHECK_THROWS_AS(parse_rat("2/-3"), InputError);
}

TEST_CASE("det on small matrices") {
    CHECK(det(Mat::identity(3)) == 1);
    CHECK(det(Mat::from_rows({V({1, 2, 3}), V({1, 2, 3}), V({0, 1, 5})})) == 0);
    CHECK(det(Mat::from_rows({V({0, 1}), V({-1, 0})})) == 1);
    CHECK(det(Mat(0, 0)) == 1);
    CHECK_THROWS_AS(det(Mat(2, 3)), DimensionError);
}

TEST_CASE("det agrees with the Leibniz expansion and is alternating") {
    GridStream rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
        std::vector<Vec> rows;
        for (std::size_t i = 0; i < n; ++i) {
            Vec r = rng.vector(n, 6);
            for (auto& x : r) x /= Rat(1 + std::labs(rng.integer(3) * rng.integer(3)));
            rows.push_back(r);
        }
        Rat d = det(Mat::from_rows(rows));
        CHECK(d == oracle::det(rows));
        if (n >= 2) {
            std::swap(rows[0], rows[n - 1]);
            CHECK(det(Mat::from_rows(rows)) == -d);
        }
    }
}

TEST_CASE("rank") {
    CHECK(rank(Mat(2, 3)) == 0);
    CHECK(rank(Mat::identity(4)) == 4);
    CHECK(rank(Mat::from_rows({V({1, 2, 3}), V({2, 4, 6})})) == 1);
    GridStream rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Vec> rows;
        for (int i = 0; i < 3; ++i) rows.push_back(rng.vector(4, 2));
        CHECK(rank_of(rows) == oracle::rank(rows));
    }
}

TEST_CASE("kernel vectors are annihilated and count matches rank-nullity") {
    GridStream rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Vec> rows;
        for (int i = 0; i < 3; ++i) rows.push_back(rng.vector(5, 3));
        if (trial % 3 == 0) rows.push_back(add(rows[0], rows[1]));
        Mat m = Mat::from_rows(rows);
        auto k = kernel(m);
        CHECK(k.size() + rank(m) == 5);
        for (const auto& v : k) CHECK(is_zero(mat_vec(m, v)));
        if (!k.empty()) CHECK(rank_of(k) == k.size());
    }
}

TEST_CASE("orth_project") {
    auto s1 = Subspace::from_basis({V({1, 0, 0})});
    CHECK(orth_project(V({1, 1, 0}), s1) == V({1, 0, 0}));
    auto s2 = Subspace::from_basis({V({1, 1, 0}), V({0, 0, 1})});
    CHECK(orth_project(V({1, 2, 3}), s2) == Vec{R(3, 2), R(3, 2), R(3)});
    CHECK(orth_project(V({2, 2, 7}), s2) == V({2, 2, 7}));
    CHECK_THROWS_AS(Subspace::from_basis({V({1, 2}), V({2, 4})}), DegenerateBasisError);
}

TEST_CASE("orth_project is idempotent and self-adjoint") {
    GridStream rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Vec> b{rng.nonzero_vector(4, 5), rng.nonzero_vector(4, 5)};
        if (rank_of(b) < 2) continue;
        auto s = Subspace::from_basis(b);
        Vec u = rng.vector(4, 9), v = rng.vector(4, 9);
        Vec pu = orth_project(u, s);
        CHECK(orth_project(pu, s) == pu);
        CHECK(dot(pu, v) == dot(u, orth_project(v, s)));
        for (const auto& x : b) CHECK(dot(sub(u, pu), x) == 0);
    }
}

TEST_CASE("intersect") {
    auto e = [](std::size_t i) { return unit(4, i); };
    auto a = Subspace::from_basis({e(0), e(1)});
    auto b = Subspace::from_basis({e(1), e(2)});
    auto m = intersect(a, b);
    CHECK(m.dim() == 1);
    CHECK(m.contains(e(1)));
    CHECK(intersect(Subspace::from_basis({e(0)}), Subspace::from_basis({e(1)})).dim() == 0);
    auto c = intersect(Subspace::from_basis({V({1, 1, 0, 0}), e(2)}), Subspace::from_basis({V({1, 1, 0, 0}), e(3)}));
    CHECK(c.dim() == 1);
    CHECK(canonical_direction(c.basis()[0]) == V({1, 1, 0, 0}));
}

TEST_CASE("intersect obeys Grassmann's formula") {
    GridStream rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Vec> x, y;
        std::size_t da = 1 + static_cast<std::size_t>(trial % 3), db = 1 + static_cast<std::size_t>((trial / 3) % 3);
        for (std::size_t i = 0; i < da; ++i) x.push_back(rng.vector(4, 2));
        for (std::size_t i = 0; i < db; ++i) y.push_back(rng.vector(4, 2));
        if (trial % 4 == 0) y[0] = x[0];
        auto a = Subspace::span(x, 4), b = Subspace::span(y, 4);
        auto m = intersect(a, b);
        CHECK(m.dim() == a.dim() + b.dim() - sum(a, b).dim());
        for (const auto& v : m.basis()) {
            CHECK(a.contains(v));
            CHECK(b.contains(v));
        }
    }
}

TEST_CASE("subspace equality ignores the choice of basis") {
    auto a = Subspace::from_basis({V({1, 2, 0}), V({0, 1, 1})});
    auto b = Subspace::from_basis({V({1, 3, 1}), V({2, 3, -1})});
    CHECK(a == b);
    CHECK(a.canonical_basis() == b.canonical_basis());
    CHECK(!(a == Subspace::from_basis({V({1, 0, 0}), V({0, 1, 0})})));
    auto c = a.orthogonal_complement();
    CHECK(c.dim() == 1);
    for (const auto& v : a.basis()) CHECK(dot(v, c.basis()[0]) == 0);
}

TEST_CASE("canonical direction") {
    CHECK(canonical_direction(Vec{R(0), R(-1, 2), R(3, 4)}) == V({0, 2, -3}));
    CHECK(canonical_direction(V({-4, 6})) == V({2, -3}));
    CHECK(canonical_direction(V({4, -6})) == V({2, -3}));
    CHECK_THROWS_AS(canonical_direction(V({0, 0})), DegenerateBasisError);
}

TEST_CASE("cayley transform") {
    CHECK(cayley_orthogonal(Mat(3, 3)) == Mat::identity(3));
    Mat s = Mat::from_rows({V({0, 1}), V({-1, 0})});
    // (I - S)(I + S)^{-1} = [[1,-1],[1,1]] * (1/2)[[1,-1],[1,1]].
    CHECK(cayley_orthogonal(s) == Mat::from_rows({V({0, -1}), V({1, 0})}));
    CHECK(plane_rotation(3, 0, 1, R(1)) == Mat::from_rows({V({0, -1, 0}), V({1, 0, 0}), V({0, 0, 1})}));
    CHECK_THROWS_AS(cayley_orthogonal(Mat::from_rows({V({0, 1}), V({1, 0})})), ParameterError);

    GridStream rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Mat k(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) {
                k(i, j) = ratio(rng.integer(5), 1 + std::labs(rng.integer(4)));
                k(j, i) = -k(i, j);
            }
        Mat q = cayley_orthogonal(k);
        CHECK(multiply(transpose(q), q) == Mat::identity(4));
        CHECK(det(q) == 1);
        Vec u = rng.vector(4, 7), v = rng.vector(4, 7);
        CHECK(dot(mat_vec(q, u), mat_vec(q, v)) == dot(u, v));
    }
}
