#include "shadowlab/generators.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "shadowlab/errors.hpp"
#include "shadowlab/random.hpp"

namespace shadowlab {

Polytope hypercube(std::size_t d) {
    if (d < 2) throw ParameterError("hypercube needs d >= 2");
    std::vector<Vec> v;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        Vec x = zeros(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = (mask >> j) & 1U;
        v.push_back(std::move(x));
    }
    return Polytope::build(std::move(v), d == 3 ? "cube" : "hypercube-" + std::to_string(d));
}

Polytope simplex(std::size_t d) {
    if (d < 2) throw ParameterError("simplex needs d >= 2");
    std::vector<Vec> v{zeros(d)};
    for (std::size_t j = 0; j < d; ++j) v.push_back(unit(d, j));
    return Polytope::build(std::move(v), "simplex-" + std::to_string(d));
}

ProjectionPlane fig2_plane() {
    return ProjectionPlane::from_basis({Rat(1), Rat(1), Rat(1), Rat(0)}, {Rat(0), Rat(0), Rat(2), Rat(1)});
}

ProjectionPlane coordinate_plane(std::size_t d, std::size_t i, std::size_t j) {
    return ProjectionPlane::from_basis(unit(d, i), unit(d, j));
}

Polytope perturbed_hypercube(const Rat& eps) {
    if (eps <= 0 || eps >= ratio(1, 10)) throw ParameterError("perturbed hypercube needs 0 < eps < 1/10");
    std::vector<Vec> v = hypercube(4).vertices();
    // Vertex id = x1 + 2 x2 + 4 x3 + 8 x4.
    v[1 + 4 + 8][3] += eps;   // (1,0,1,1)
    v[2 + 4 + 8][2] -= eps;   // (0,1,1,1)
    v[1][3] -= eps;           // (1,0,0,0)
    v[2][2] += eps;           // (0,1,0,0)
    Polytope p = Polytope::build(std::move(v), "perturbed-hypercube");
    DegenerationReport r = degeneration_report(p, fig2_plane());
    if (!r.condition_ii() || r.condition_i())
        throw ConstructionError("perturbed hypercube self-test failed: expected (ii) to hold and (i) to fail");
    return p;
}

std::vector<Vec> circle_polygon(std::size_t n) {
    if (n < 3) throw ParameterError("polygon needs at least 3 vertices");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rat u = ratio(static_cast<long>(2 * i) - static_cast<long>(n) + 1, 2);
        auto [c, s] = circle_point(u);
        out.push_back({c, s});
    }
    return out;
}

Polytope prism(const std::vector<Vec>& base, const Vec& height) {
    if (height.size() != 3 || height[2] == 0) throw ParameterError("prism height must leave the base plane");
    std::vector<Point2> pts;
    for (const auto& b : base) {
        if (b.size() != 2) throw DimensionError("prism base points must be planar");
        pts.push_back({b[0], b[1]});
    }
    if (convex_hull_2d(pts).size() != base.size()) throw ParameterError("prism base is not strictly convex");
    std::vector<Vec> v;
    for (const auto& b : base) v.push_back({b[0], b[1], Rat(0)});
    for (const auto& b : base) v.push_back({b[0] + height[0], b[1] + height[1], height[2]});
    return Polytope::build(std::move(v), "prism-" + std::to_string(base.size()));
}

Polytope zonotope(const ZonotopeSpec& spec) {
    const auto& g = spec.generators;
    if (g.empty()) throw ParameterError("zonotope needs generators");
    const std::size_t d = g[0].size();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].size() != d) throw DimensionError("generators of different dimensions");
        if (is_zero(g[i])) throw ParameterError("zero generator");
        for (std::size_t j = 0; j < i; ++j)
            if (rank_of({g[i], g[j]}) < 2)
                throw ParameterError("generators " + std::to_string(j) + " and " + std::to_string(i) + " are collinear");
    }
    if (rank_of(g) != d) throw PolytopeError("generators do not span the ambient space");
    std::vector<Vec> sums;
    std::set<Vec> seen;
    for (std::size_t mask = 0; mask < (std::size_t{1} << g.size()); ++mask) {
        Vec x = zeros(d);
        for (std::size_t j = 0; j < g.size(); ++j)
            if ((mask >> j) & 1U) x = add(x, g[j]);
        if (seen.insert(x).second) sums.push_back(std::move(x));
    }
    std::vector<Vec> v;
    for (int id : extreme_point_ids(sums)) v.push_back(sums[static_cast<std::size_t>(id)]);
    return Polytope::build(std::move(v), "zonotope-" + std::to_string(g.size()));
}

ZonotopeSpec random_zonotope_spec(std::uint64_t seed, std::size_t count, std::size_t d, long bound) {
    if (count < d) throw ParameterError("a full-dimensional zonotope needs at least d generators");
    GridStream rng(seed, 0x2070);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        ZonotopeSpec s;
        while (s.generators.size() < count) {
            Vec c = rng.nonzero_vector(d, bound);
            bool ok = true;
            for (const auto& h : s.generators)
                if (rank_of({c, h}) < 2) ok = false;
            if (ok) s.generators.push_back(std::move(c));
        }
        if (rank_of(s.generators) == d) return s;
    }
    throw SamplingError("could not draw spanning generators");
}

bool zonotope_self_test(const Polytope& z, const ZonotopeSpec& spec, std::uint64_t seed, std::size_t count) {
    for (const auto& w : sample_admissible(z, seed, count)) {
        if (shadow(z, w).k() != 2 * spec.generators.size()) return false;
        if (zonotope_shadow_size(spec.generators, w) != shadow(z, w).k()) return false;
    }
    return true;
}

std::vector<Vec> minkowski_vertices(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    std::vector<Vec> sums;
    std::set<Vec> seen;
    for (const auto& x : a)
        for (const auto& y : b) {
            Vec s = add(x, y);
            if (seen.insert(s).second) sums.push_back(std::move(s));
        }
    std::vector<Vec> out;
    for (int id : extreme_point_ids(sums)) out.push_back(sums[static_cast<std::size_t>(id)]);
    return out;
}

std::pair<Rat, Rat> circle_point(const Rat& u) {
    Rat den = 1 + u * u;
    return {(1 - u * u) / den, 2 * u / den};
}

PnSpec make_pn_spec(std::size_t n) { return make_pn_spec(n, n, ratio(1, static_cast<long>(8 * (n + 1)))); }

PnSpec make_pn_spec(std::size_t n, std::size_t m, const Rat& eps) {
    if (n < 2) throw ParameterError("P_n needs n >= 2");
    if (m != n && m != n + 2) throw ParameterError("triangle count must be n or n + 2");
    if (eps <= 0) throw ParameterError("eps must be positive");
    PnSpec s;
    s.n = n;
    s.m = m;
    s.eps = eps;
    // tan(pi/8) ~ 0.414: parameters in [-2/5, 2/5] cover most of [-pi/4, pi/4].
    for (std::size_t i = 0; i <= n + 1; ++i)
        s.params.push_back(ratio(-2, 5) + ratio(4, 5) * ratio(static_cast<long>(i), static_cast<long>(n + 1)));
    return s;
}

namespace {

std::vector<Rat> used_params(const PnSpec& s) {
    if (s.params.size() != s.n + 2) throw ParameterError("P_n spec needs n + 2 parameters");
    for (std::size_t i = 1; i < s.params.size(); ++i)
        if (s.params[i] <= s.params[i - 1]) throw ParameterError("P_n parameters must increase");
    if (s.params.front() < -1 || s.params.back() > 1) throw ParameterError("P_n parameters must lie in [-1, 1]");
    if (s.m == s.n + 2) return s.params;
    if (s.m != s.n) throw ParameterError("triangle count must be n or n + 2");
    return {s.params.begin() + 1, s.params.end() - 1};
}

} // namespace

std::vector<Subspace> pn_planes(const PnSpec& spec) {
    std::vector<Subspace> out;
    for (const Rat& u : used_params(spec)) {
        auto [c, s] = circle_point(u);
        out.push_back(Subspace::from_basis({{c, s, c, s}, {c, s, Rat(-s), c}}));
    }
    return out;
}

Polytope pn_polytope(const PnSpec& spec) {
    auto params = used_params(spec);
    struct Seg {
        Point2 a, b, normal;
    };
    std::vector<Seg> segs;
    std::vector<Vec> v;
    for (const Rat& u : params) {
        auto [c, s] = circle_point(u);
        Vec f1{c, s, c, s}, f2{c, s, Rat(-s), c};
        // Shift so the image segment is centred at the circle point with tangent (c, s).
        Vec t{Rat(-s - c), Rat(c - s), Rat(0), Rat(0)};
        v.push_back(add(t, f1));
        v.push_back(add(t, scale(f2, 1 - spec.eps)));
        v.push_back(add(t, scale(f2, 1 + spec.eps)));
        segs.push_back({{-s - spec.eps * c, c - spec.eps * s}, {-s + spec.eps * c, c + spec.eps * s}, {-s, c}});
    }
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (std::size_t j = 0; j < segs.size(); ++j) {
            if (i == j) continue;
            for (const Point2& q : {segs[j].a, segs[j].b})
                if (q.x * segs[i].normal.x + q.y * segs[i].normal.y >= 1)
                    throw ParameterError("P_n segments overlap: eps too large");
        }
    Polytope p = Polytope::build(std::move(v), "P_" + std::to_string(spec.n));
    if (estranged_degenerations(p, coordinate_plane(4)).size() < spec.n)
        throw ConstructionError("P_n self-test failed: fewer than n estranged degenerating 2-faces");
    return p;
}

Polytope hyperprism_pnd(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (d < 4) throw ParameterError("P_{n,d} needs d >= 4");
    Polytope p = pn_polytope(make_pn_spec(n));
    GridStream rng(seed, 0x7E57);
    for (std::size_t dim = 4; dim < d; ++dim) {
        Vec g = scale(rng.vector(dim + 1, 10), ratio(1, 1000));
        g[dim] += 1;
        std::vector<Vec> v;
        for (const auto& x : p.vertices()) {
            Vec y = x;
            y.push_back(Rat(0));
            v.push_back(std::move(y));
        }
        const std::size_t base = v.size();
        for (std::size_t i = 0; i < base; ++i) v.push_back(add(v[i], g));
        p = Polytope::build(std::move(v), "P_" + std::to_string(n) + "," + std::to_string(dim + 1));
    }
    if (estranged_degenerations(p, coordinate_plane(d)).size() < n)
        throw ConstructionError("P_{n,d} self-test failed for seed " + std::to_string(seed) + "; try another seed");
    return p;
}

IdList estranged_degenerations(const Polytope& p, const ProjectionPlane& w) {
    IdList reps;
    std::vector<const Subspace*> planes;
    for (const auto& c : p.classes()) {
        if (class_determinant(w.complement().basis(), c.direction_plane) != 0) continue;
        reps.push_back(c.member_ids.front());
        planes.push_back(&c.direction_plane);
    }
    const std::size_t n = reps.size();
    std::vector<std::vector<bool>> ok(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) ok[i][j] = ok[j][i] = intersect(*planes[i], *planes[j]).dim() == 0;

    IdList best, cur;
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
        if (cur.size() > best.size()) best = cur;
        for (std::size_t i = from; i < n; ++i) {
            if (cur.size() + (n - i) <= best.size()) return;
            bool fits = true;
            for (int c : cur)
                if (!ok[static_cast<std::size_t>(c)][i]) fits = false;
            if (!fits) continue;
            cur.push_back(static_cast<int>(i));
            grow(i + 1);
            cur.pop_back();
        }
    };
    grow(0);
    IdList out;
    for (int i : best) out.push_back(reps[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace shadowlab
