#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shadowlab/polytope.hpp"

namespace shadowlab {

struct Point2 {
    Rat x, y;
    bool operator==(const Point2&) const = default;
    auto operator<=>(const Point2& o) const {
        if (x != o.x) return x < o.x ? std::strong_ordering::less : std::strong_ordering::greater;
        if (y != o.y) return y < o.y ? std::strong_ordering::less : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
};

// Sign of the turn a -> b -> c.
int orientation(const Point2& a, const Point2& b, const Point2& c);
// c on the closed segment [a, b].
bool on_segment(const Point2& a, const Point2& b, const Point2& c);

class ProjectionPlane {
public:
    explicit ProjectionPlane(Subspace plane);
    static ProjectionPlane from_basis(const Vec& a, const Vec& b);
    static ProjectionPlane from_orthogonal(const Subspace& orthogonal);

    const Subspace& basis() const { return plane_; }
    const Subspace& complement() const { return complement_; }
    std::size_t ambient() const { return plane_.ambient(); }

    // Coordinates of the orthogonal projection of x in the frame of basis().
    Point2 coordinates(const Vec& x) const;

private:
    Subspace plane_;
    Subspace complement_;
    Mat gram_inverse_;
};

std::vector<Point2> project(const Polytope& p, const ProjectionPlane& w);

struct ShadowPolygon {
    IdList hull_vertex_ids;         // smallest vertex id of each fibre, counter-clockwise
    std::vector<IdList> fibers;     // all vertex ids sent to each hull vertex
    std::vector<Point2> points;     // hull vertex images
    std::vector<Point2> images;     // image of every polytope vertex
    std::size_t k() const { return points.size(); }

    // All given vertex images lie on one closed hull edge.
    bool on_boundary(const IdList& vertex_ids) const;
    // Polytope edge (a, b) maps onto a hull edge joining consecutive hull vertices.
    bool is_hull_edge(int a, int b) const;
};

// Convex hull of planar points with collinear points dropped; counter-clockwise,
// starting at the lexicographically smallest point. Returns indices into pts.
std::vector<std::size_t> convex_hull_2d(const std::vector<Point2>& pts);

ShadowPolygon shadow(const Polytope& p, const ProjectionPlane& w);

struct ClassDegeneration {
    int class_id = -1;
    std::size_t projected_rank = 0;
    IdList member_ids;
    std::vector<bool> on_boundary;
};

struct DegenerationReport {
    std::vector<ClassDegeneration> classes;  // only the degenerating ones
    bool condition_i() const { return classes.empty(); }
    bool condition_ii() const;
    IdList degenerating_class_ids() const;
};

DegenerationReport degeneration_report(const Polytope& p, const ProjectionPlane& w);
DegenerationReport degeneration_report(const Polytope& p, const ProjectionPlane& w, const ShadowPolygon& s);

struct AdmissibilityCertificate {
    bool admissible = true;
    std::optional<int> violating_class;
    explicit operator bool() const { return admissible; }
};

// det(W-perp basis | f1 | f2) for one class.
Rat class_determinant(const std::vector<Vec>& orthogonal_basis, const Subspace& class_plane);
AdmissibilityCertificate is_admissible(const Polytope& p, const ProjectionPlane& w);
AdmissibilityCertificate is_admissible_orthogonal(const Polytope& p, const Subspace& orthogonal);

std::vector<ProjectionPlane> sample_admissible(const Polytope& p, std::uint64_t seed, std::size_t count,
                                               long grid_bound = 100);

std::size_t zonotope_shadow_size(const std::vector<Vec>& generators, const ProjectionPlane& w);

} // namespace shadowlab
