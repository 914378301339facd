#pragma once

#include <cstdint>
#include <vector>

#include "shadowlab/polytope.hpp"
#include "shadowlab/shadow.hpp"

namespace shadowlab {

Polytope hypercube(std::size_t d);
Polytope simplex(std::size_t d);

// The plane span(e1+e2+e3, 2e3+e4) of the degenerate hypercube projection.
ProjectionPlane fig2_plane();
ProjectionPlane coordinate_plane(std::size_t d, std::size_t i = 0, std::size_t j = 1);

Polytope perturbed_hypercube(const Rat& eps);

// n rational points on the unit circle in counter-clockwise order.
std::vector<Vec> circle_polygon(std::size_t n);
Polytope prism(const std::vector<Vec>& base_polygon_2d, const Vec& height);

struct ZonotopeSpec {
    std::vector<Vec> generators;
};
Polytope zonotope(const ZonotopeSpec& spec);
ZonotopeSpec random_zonotope_spec(std::uint64_t seed, std::size_t count, std::size_t d, long bound = 5);
// Every sampled admissible shadow has 2|G| vertices.
bool zonotope_self_test(const Polytope& z, const ZonotopeSpec& spec, std::uint64_t seed, std::size_t count);

// Extreme points of {a + b}.
std::vector<Vec> minkowski_vertices(const std::vector<Vec>& a, const std::vector<Vec>& b);

struct PnSpec {
    std::size_t n = 2;
    std::size_t m = 2;              // number of triangles: n (interior angles) or n + 2 (all)
    Rat eps;
    std::vector<Rat> params;        // n + 2 increasing Pythagorean parameters
};
PnSpec make_pn_spec(std::size_t n);
PnSpec make_pn_spec(std::size_t n, std::size_t m, const Rat& eps);
// Unit circle point ((1-u^2)/(1+u^2), 2u/(1+u^2)).
std::pair<Rat, Rat> circle_point(const Rat& u);
// Direction planes span(f1, f2) of the triangles actually used.
std::vector<Subspace> pn_planes(const PnSpec& spec);
Polytope pn_polytope(const PnSpec& spec);
Polytope hyperprism_pnd(std::size_t n, std::size_t d, std::uint64_t seed);

// Largest set of pairwise estranged 2-faces that degenerate for w (one per
// class, since parallel faces are never estranged).
IdList estranged_degenerations(const Polytope& p, const ProjectionPlane& w);

} // namespace shadowlab
