#include "shadowlab/shadow.hpp"

#include <algorithm>
#include <map>

#include "shadowlab/errors.hpp"
#include "shadowlab/random.hpp"

namespace shadowlab {

int orientation(const Point2& a, const Point2& b, const Point2& c) {
    Rat cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return sgn(cross);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& c) {
    if (orientation(a, b, c) != 0) return false;
    Rat t = (c.x - a.x) * (b.x - a.x) + (c.y - a.y) * (b.y - a.y);
    Rat len = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    return t >= 0 && t <= len;
}

ProjectionPlane::ProjectionPlane(Subspace plane)
    : plane_(std::move(plane)), complement_(plane_.orthogonal_complement()), gram_inverse_(2, 2) {
    if (plane_.dim() != 2) throw DimensionError("projection plane must be 2-dimensional");
    const auto& b = plane_.basis();
    Mat g(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) g(i, j) = dot(b[i], b[j]);
    gram_inverse_ = inverse(g);
}

ProjectionPlane ProjectionPlane::from_basis(const Vec& a, const Vec& b) {
    return ProjectionPlane(Subspace::from_basis({a, b}));
}

ProjectionPlane ProjectionPlane::from_orthogonal(const Subspace& orthogonal) {
    if (orthogonal.dim() + 2 != orthogonal.ambient())
        throw DimensionError("orthogonal space must have dimension d-2");
    return ProjectionPlane(orthogonal.orthogonal_complement());
}

Point2 ProjectionPlane::coordinates(const Vec& x) const {
    const auto& b = plane_.basis();
    Rat r0 = dot(b[0], x), r1 = dot(b[1], x);
    return {gram_inverse_(0, 0) * r0 + gram_inverse_(0, 1) * r1, gram_inverse_(1, 0) * r0 + gram_inverse_(1, 1) * r1};
}

std::vector<Point2> project(const Polytope& p, const ProjectionPlane& w) {
    if (p.dim() != w.ambient()) throw DimensionError("polytope and plane live in different dimensions");
    std::vector<Point2> out;
    out.reserve(p.vertices().size());
    for (const auto& v : p.vertices()) out.push_back(w.coordinates(v));
    return out;
}

std::vector<std::size_t> convex_hull_2d(const std::vector<Point2>& pts) {
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    idx.erase(std::unique(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a] == pts[b]; }),
              idx.end());
    if (idx.size() < 3) return idx;
    std::vector<std::size_t> hull(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        while (k >= 2 && orientation(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx[i]]) <= 0) --k;
        hull[k++] = idx[i];
    }
    for (std::size_t i = idx.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && orientation(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx[i]]) <= 0) --k;
        hull[k++] = idx[i];
    }
    hull.resize(k - 1);
    return hull;
}

ShadowPolygon shadow(const Polytope& p, const ProjectionPlane& w) {
    ShadowPolygon s;
    s.images = project(p, w);
    std::map<Point2, IdList> fibre_of;
    for (std::size_t i = 0; i < s.images.size(); ++i) fibre_of[s.images[i]].push_back(static_cast<int>(i));
    auto hull = convex_hull_2d(s.images);
    if (hull.size() < 3) throw GeometryError("degenerate shadow: all vertex images are collinear");
    for (auto i : hull) {
        const auto& fibre = fibre_of.at(s.images[i]);
        s.hull_vertex_ids.push_back(fibre.front());
        s.fibers.push_back(fibre);
        s.points.push_back(s.images[i]);
    }
    return s;
}

bool ShadowPolygon::on_boundary(const IdList& vertex_ids) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point2& a = points[i];
        const Point2& b = points[(i + 1) % points.size()];
        bool all = true;
        for (int v : vertex_ids)
            if (!on_segment(a, b, images[static_cast<std::size_t>(v)])) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

bool ShadowPolygon::is_hull_edge(int a, int b) const {
    const Point2& pa = images[static_cast<std::size_t>(a)];
    const Point2& pb = images[static_cast<std::size_t>(b)];
    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& x = points[i];
        const Point2& y = points[(i + 1) % n];
        if ((x == pa && y == pb) || (x == pb && y == pa)) return true;
    }
    return false;
}

bool DegenerationReport::condition_ii() const {
    for (const auto& c : classes)
        for (bool b : c.on_boundary)
            if (b) return false;
    return true;
}

IdList DegenerationReport::degenerating_class_ids() const {
    IdList out;
    for (const auto& c : classes) out.push_back(c.class_id);
    return out;
}

DegenerationReport degeneration_report(const Polytope& p, const ProjectionPlane& w) {
    return degeneration_report(p, w, shadow(p, w));
}

DegenerationReport degeneration_report(const Polytope& p, const ProjectionPlane& w, const ShadowPolygon& s) {
    DegenerationReport r;
    const auto& classes = p.classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& b = classes[c].direction_plane.basis();
        Point2 a0 = w.coordinates(b[0]), a1 = w.coordinates(b[1]);
        std::size_t rk = rank_of({{a0.x, a0.y}, {a1.x, a1.y}});
        if (rk == 2) continue;
        ClassDegeneration cd;
        cd.class_id = static_cast<int>(c);
        cd.projected_rank = rk;
        cd.member_ids = classes[c].member_ids;
        for (int f : cd.member_ids) cd.on_boundary.push_back(s.on_boundary(p.two_faces()[static_cast<std::size_t>(f)].vertex_ids));
        r.classes.push_back(std::move(cd));
    }
    return r;
}

Rat class_determinant(const std::vector<Vec>& orthogonal_basis, const Subspace& class_plane) {
    std::vector<Vec> cols = orthogonal_basis;
    cols.push_back(class_plane.basis()[0]);
    cols.push_back(class_plane.basis()[1]);
    return det(Mat::from_columns(cols));
}

AdmissibilityCertificate is_admissible_orthogonal(const Polytope& p, const Subspace& orthogonal) {
    if (orthogonal.ambient() != p.dim() || orthogonal.dim() + 2 != p.dim())
        throw DimensionError("orthogonal space must have dimension d-2 in the polytope's space");
    const auto& classes = p.classes();
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (class_determinant(orthogonal.basis(), classes[c].direction_plane) == 0)
            return {false, static_cast<int>(c)};
    return {};
}

AdmissibilityCertificate is_admissible(const Polytope& p, const ProjectionPlane& w) {
    return is_admissible_orthogonal(p, w.complement());
}

std::vector<ProjectionPlane> sample_admissible(const Polytope& p, std::uint64_t seed, std::size_t count,
                                               long grid_bound) {
    if (count == 0) throw ParameterError("count must be at least 1");
    if (grid_bound < 1) throw ParameterError("grid bound must be positive");
    GridStream rng(seed, 0x5A4D);
    std::vector<ProjectionPlane> out;
    const std::size_t budget = 1000 * count;
    for (std::size_t attempt = 0; attempt < budget && out.size() < count; ++attempt) {
        Vec a = rng.vector(p.dim(), grid_bound);
        Vec b = rng.vector(p.dim(), grid_bound);
        if (rank_of({a, b}) < 2) continue;
        ProjectionPlane w = ProjectionPlane::from_basis(a, b);
        if (is_admissible(p, w)) out.push_back(std::move(w));
    }
    if (out.size() < count)
        throw SamplingError("rejection budget exhausted after " + std::to_string(budget) + " attempts");
    return out;
}

std::size_t zonotope_shadow_size(const std::vector<Vec>& generators, const ProjectionPlane& w) {
    std::vector<Point2> img;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (rank_of({generators[i], generators[j]}) < 2)
                throw ParameterError("generators " + std::to_string(j) + " and " + std::to_string(i) + " are collinear");
        img.push_back(w.coordinates(generators[i]));
    }
    const Point2 origin{Rat(0), Rat(0)};
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (img[i] == origin) throw GeometryError("inadmissible plane: generator projects to zero");
        for (std::size_t j = 0; j < i; ++j)
            if (orientation(origin, img[i], img[j]) == 0)
                throw GeometryError("inadmissible plane: projected generators " + std::to_string(j) + " and " +
                                    std::to_string(i) + " are collinear");
    }
    return 2 * generators.size();
}

} // namespace shadowlab
