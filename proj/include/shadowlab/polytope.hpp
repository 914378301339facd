#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shadowlab/linalg.hpp"

namespace shadowlab {

using IdList = std::vector<int>;

struct Face {
    IdList vertex_ids;  // sorted
    int dim = 0;
    Subspace span{0};   // Span[F], canonical basis
};

struct ParallelClass {
    IdList member_ids;  // 2-face ids
    Subspace direction_plane{0};
};

struct ProscribedDirection {
    Vec line;
    std::pair<int, int> witness_pair;
};

// Point set facet as found by gift-wrapping: ids on an affine functional
// a.x + b that is zero on the facet and positive elsewhere.
struct HullFacet {
    IdList ids;
    Vec normal;
    Rat offset;
};

std::size_t affine_rank(const std::vector<Vec>& points, const IdList& ids);
std::size_t affine_rank(const std::vector<Vec>& points);

// Facets of conv(points). The point set must be full-dimensional.
std::vector<HullFacet> hull_facets(const std::vector<Vec>& points);
// Indices of the points that are vertices of their convex hull.
IdList extreme_point_ids(const std::vector<Vec>& points);

class Polytope {
public:
    static Polytope build(std::vector<Vec> vertices, std::string label = "");

    std::size_t dim() const { return dim_; }
    const std::string& label() const { return label_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const Vec& vertex(int id) const { return vertices_[static_cast<std::size_t>(id)]; }

    const std::vector<Face>& faces(std::size_t k) const { return faces_.at(k); }
    const std::vector<Face>& facets() const { return faces_.at(dim_ - 1); }
    const std::vector<Face>& edges() const { return faces_.at(1); }
    const std::vector<Face>& two_faces() const { return faces_.at(2); }
    const std::vector<HullFacet>& facet_functionals() const { return facet_functionals_; }

    const std::vector<ParallelClass>& classes() const { return classes_; }
    int class_of(int two_face) const { return class_of_[static_cast<std::size_t>(two_face)]; }

    // Edge id joining two vertices, or -1.
    int edge_between(int a, int b) const;
    // Edge ids of a 2-face, in no particular order.
    IdList face_edges(int two_face) const;

private:
    std::size_t dim_ = 0;
    std::string label_;
    std::vector<Vec> vertices_;
    std::vector<std::vector<Face>> faces_;
    std::vector<HullFacet> facet_functionals_;
    std::vector<ParallelClass> classes_;
    std::vector<int> class_of_;
    std::map<std::pair<int, int>, int> edge_index_;
};

std::vector<Face> facets(const Polytope& p);
std::vector<Face> k_faces(const Polytope& p, std::size_t k);
std::vector<ParallelClass> parallel_classes(const Polytope& p);
std::vector<ProscribedDirection> proscribed_directions(const Polytope& p);

// Boundary cycle of a 2-face, counter-clockwise in the frame of its
// canonical span basis (f1, f2). Starts at the smallest vertex id.
struct FaceCycle {
    IdList vertices;
    IdList edges;  // edges[i] joins vertices[i] and vertices[i+1 mod n]
};
FaceCycle face_cycle(const Polytope& p, int two_face);

} // namespace shadowlab
