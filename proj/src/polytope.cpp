#include "shadowlab/polytope.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "shadowlab/errors.hpp"

namespace shadowlab {

namespace {

// Affine functional on R^m stored as (a_0..a_{m-1}, b).
Rat eval(const Vec& f, const Vec& x) {
    Rat s = f.back();
    for (std::size_t i = 0; i < x.size(); ++i) s += f[i] * x[i];
    return s;
}

Mat lifted(const std::vector<Vec>& pts, const IdList& ids) {
    const std::size_t m = pts[0].size();
    Mat a(ids.size(), m + 1);
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const Vec& x = pts[static_cast<std::size_t>(ids[r])];
        for (std::size_t j = 0; j < m; ++j) a(r, j) = x[j];
        a(r, m) = 1;
    }
    return a;
}

IdList zero_set(const std::vector<Vec>& pts, const Vec& f) {
    IdList z;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (eval(f, pts[i]) == 0) z.push_back(static_cast<int>(i));
    return z;
}

// A functional vanishing on `ids` that is not a multiple of f.
Vec independent_functional(const std::vector<Vec>& pts, const IdList& ids, const Vec& f) {
    for (Vec& g : kernel(lifted(pts, ids)))
        if (rank_of({f, g}) == 2) return g;
    throw GeometryError("gift-wrapping: no rotation axis (point set not full-dimensional?)");
}

// Rotates g about its zero set until it touches a point outside f's zero set.
Vec rotate_to_support(const std::vector<Vec>& pts, const IdList& on_f, const Vec& f, const Vec& g) {
    std::vector<bool> inside(pts.size(), false);
    for (int i : on_f) inside[static_cast<std::size_t>(i)] = true;
    std::optional<Rat> best;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (inside[i]) continue;
        Rat ratio = eval(g, pts[i]) / eval(f, pts[i]);
        if (!best || ratio < *best) best = ratio;
    }
    if (!best) throw GeometryError("gift-wrapping: every point lies on the current hyperplane");
    return axpy(g, -*best, f);
}

struct LocalFacet {
    IdList ids;
    Vec functional;
};

std::vector<LocalFacet> wrap(const std::vector<Vec>& pts) {
    const std::size_t m = pts[0].size();
    if (m == 1) {
        Rat lo = pts[0][0], hi = pts[0][0];
        for (const auto& x : pts) {
            lo = std::min(lo, x[0]);
            hi = std::max(hi, x[0]);
        }
        Vec f_lo{Rat(1), Rat(-lo)}, f_hi{Rat(-1), hi};
        return {{zero_set(pts, f_lo), f_lo}, {zero_set(pts, f_hi), f_hi}};
    }

    Rat lo = pts[0][0];
    for (const auto& x : pts) lo = std::min(lo, x[0]);
    Vec f = zeros(m + 1);
    f[0] = 1;
    f[m] = -lo;
    IdList z = zero_set(pts, f);
    while (affine_rank(pts, z) + 1 < m) {
        f = rotate_to_support(pts, z, f, independent_functional(pts, z, f));
        z = zero_set(pts, f);
    }

    std::vector<LocalFacet> out;
    std::set<IdList> seen{z};
    std::deque<LocalFacet> queue{{z, f}};
    while (!queue.empty()) {
        LocalFacet cur = std::move(queue.front());
        queue.pop_front();

        // Coordinates that stay injective on the facet's affine hull.
        std::vector<Vec> diffs;
        const Vec& base = pts[static_cast<std::size_t>(cur.ids[0])];
        for (int id : cur.ids) diffs.push_back(sub(pts[static_cast<std::size_t>(id)], base));
        Echelon e = rref(Mat::from_rows(diffs));
        std::vector<Vec> projected;
        for (int id : cur.ids) {
            Vec y;
            for (auto c : e.pivots) y.push_back(pts[static_cast<std::size_t>(id)][c]);
            projected.push_back(std::move(y));
        }

        for (const auto& ridge_local : wrap(projected)) {
            IdList ridge;
            for (int li : ridge_local.ids) ridge.push_back(cur.ids[static_cast<std::size_t>(li)]);
            Vec g = independent_functional(pts, ridge, cur.functional);
            int off_ridge = -1;
            for (int id : cur.ids)
                if (!std::binary_search(ridge.begin(), ridge.end(), id)) {
                    off_ridge = id;
                    break;
                }
            if (eval(g, pts[static_cast<std::size_t>(off_ridge)]) < 0) g = scale(g, -1);
            Vec h = rotate_to_support(pts, cur.ids, cur.functional, g);
            IdList nz = zero_set(pts, h);
            if (seen.insert(nz).second) queue.push_back({nz, h});
        }
        out.push_back(std::move(cur));
    }
    return out;
}

Subspace direction_space(const std::vector<Vec>& pts, const IdList& ids) {
    const std::size_t n = pts[0].size();
    std::vector<Vec> diffs;
    for (std::size_t i = 1; i < ids.size(); ++i)
        diffs.push_back(sub(pts[static_cast<std::size_t>(ids[i])], pts[static_cast<std::size_t>(ids[0])]));
    return Subspace::span(diffs, n);
}

IdList intersection(const IdList& a, const IdList& b) {
    IdList out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace

std::size_t affine_rank(const std::vector<Vec>& points, const IdList& ids) {
    if (ids.size() <= 1) return 0;
    std::vector<Vec> diffs;
    const Vec& base = points[static_cast<std::size_t>(ids[0])];
    for (std::size_t i = 1; i < ids.size(); ++i) diffs.push_back(sub(points[static_cast<std::size_t>(ids[i])], base));
    return rank_of(diffs);
}

std::size_t affine_rank(const std::vector<Vec>& points) {
    IdList all(points.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return affine_rank(points, all);
}

std::vector<HullFacet> hull_facets(const std::vector<Vec>& points) {
    if (points.empty()) throw PolytopeError("empty point set");
    const std::size_t m = points[0].size();
    for (const auto& x : points)
        if (x.size() != m) throw DimensionError("points of different dimensions");
    if (m == 0 || affine_rank(points) != m) throw PolytopeError("point set is not full-dimensional");
    std::vector<HullFacet> out;
    for (auto& lf : wrap(points)) {
        std::sort(lf.ids.begin(), lf.ids.end());
        Vec normal(lf.functional.begin(), lf.functional.end() - 1);
        out.push_back({std::move(lf.ids), std::move(normal), lf.functional.back()});
    }
    std::sort(out.begin(), out.end(), [](const HullFacet& a, const HullFacet& b) { return a.ids < b.ids; });
    return out;
}

static IdList extreme_from_facets(std::size_t count, const std::vector<HullFacet>& fs) {
    IdList out;
    for (std::size_t i = 0; i < count; ++i) {
        std::optional<IdList> meet;
        for (const auto& f : fs) {
            if (!std::binary_search(f.ids.begin(), f.ids.end(), static_cast<int>(i))) continue;
            meet = meet ? intersection(*meet, f.ids) : f.ids;
        }
        if (meet && meet->size() == 1) out.push_back(static_cast<int>(i));
    }
    return out;
}

IdList extreme_point_ids(const std::vector<Vec>& points) {
    return extreme_from_facets(points.size(), hull_facets(points));
}

Polytope Polytope::build(std::vector<Vec> vertices, std::string label) {
    if (vertices.empty()) throw PolytopeError("no vertices");
    const std::size_t d = vertices[0].size();
    if (d == 0) throw PolytopeError("zero-dimensional ambient space");
    for (const auto& v : vertices)
        if (v.size() != d) throw DimensionError("vertices of different dimensions");
    if (vertices.size() < d + 1)
        throw PolytopeError("need at least d+1 vertices, got " + std::to_string(vertices.size()));
    {
        std::vector<std::size_t> order(vertices.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vertices[a] < vertices[b]; });
        for (std::size_t i = 1; i < order.size(); ++i)
            if (vertices[order[i]] == vertices[order[i - 1]])
                throw PolytopeError("duplicate vertex: ids " + std::to_string(order[i - 1]) + " and " +
                                    std::to_string(order[i]));
    }
    if (affine_rank(vertices) != d) throw PolytopeError("vertex set is not full-dimensional");

    Polytope p;
    p.dim_ = d;
    p.label_ = std::move(label);
    p.vertices_ = std::move(vertices);
    p.facet_functionals_ = hull_facets(p.vertices_);

    IdList extreme = extreme_from_facets(p.vertices_.size(), p.facet_functionals_);
    if (extreme.size() != p.vertices_.size()) {
        std::string bad;
        for (std::size_t i = 0, j = 0; i < p.vertices_.size(); ++i) {
            if (j < extreme.size() && extreme[j] == static_cast<int>(i)) {
                ++j;
                continue;
            }
            bad += (bad.empty() ? "" : ", ") + std::to_string(i);
        }
        throw PolytopeError("non-extreme point(s) listed as vertices: " + bad);
    }

    p.faces_.assign(std::max<std::size_t>(d, 3), {});
    for (const auto& hf : p.facet_functionals_) p.faces_[d - 1].push_back({hf.ids, static_cast<int>(d - 1), Subspace(d)});
    for (std::size_t j = d - 1; j >= 2; --j) {
        std::set<IdList> lower;
        for (const auto& g : p.faces_[j]) {
            for (const auto& f : p.faces_[d - 1]) {
                IdList meet = intersection(g.vertex_ids, f.vertex_ids);
                if (meet.size() < 2 || meet.size() == g.vertex_ids.size() || lower.count(meet)) continue;
                if (affine_rank(p.vertices_, meet) == j - 1) lower.insert(meet);
            }
        }
        for (const auto& ids : lower) p.faces_[j - 1].push_back({ids, static_cast<int>(j - 1), Subspace(d)});
    }
    for (std::size_t i = 0; i < p.vertices_.size(); ++i) p.faces_[0].push_back({{static_cast<int>(i)}, 0, Subspace(d)});
    for (std::size_t j = 1; j < d; ++j)
        for (auto& f : p.faces_[j]) f.span = direction_space(p.vertices_, f.vertex_ids);

    for (std::size_t e = 0; e < p.faces_[1].size(); ++e) {
        const auto& ids = p.faces_[1][e].vertex_ids;
        p.edge_index_[{ids[0], ids[1]}] = static_cast<int>(e);
    }

    if (d >= 3) {
        std::map<std::vector<Vec>, int> by_span;
        p.class_of_.assign(p.faces_[2].size(), -1);
        for (std::size_t i = 0; i < p.faces_[2].size(); ++i) {
            const auto& f = p.faces_[2][i];
            auto key = f.span.canonical_basis();
            auto it = by_span.find(key);
            if (it == by_span.end()) {
                it = by_span.emplace(key, static_cast<int>(p.classes_.size())).first;
                p.classes_.push_back({{}, f.span});
            }
            p.classes_[static_cast<std::size_t>(it->second)].member_ids.push_back(static_cast<int>(i));
            p.class_of_[i] = it->second;
        }
    }
    return p;
}

int Polytope::edge_between(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = edge_index_.find({a, b});
    return it == edge_index_.end() ? -1 : it->second;
}

IdList Polytope::face_edges(int two_face) const {
    const auto& ids = faces_.at(2).at(static_cast<std::size_t>(two_face)).vertex_ids;
    IdList out;
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            int e = edge_between(ids[i], ids[j]);
            if (e >= 0) out.push_back(e);
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Face> facets(const Polytope& p) { return p.facets(); }

std::vector<Face> k_faces(const Polytope& p, std::size_t k) {
    if (k >= p.dim()) throw ParameterError("k_faces: k must be below the dimension");
    return p.faces(k);
}

std::vector<ParallelClass> parallel_classes(const Polytope& p) { return p.classes(); }

std::vector<ProscribedDirection> proscribed_directions(const Polytope& p) {
    std::vector<ProscribedDirection> out;
    std::set<Vec> seen;
    const auto& cs = p.classes();
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            Subspace meet = intersect(cs[i].direction_plane, cs[j].direction_plane);
            if (meet.dim() != 1) continue;
            Vec line = canonical_direction(meet.basis()[0]);
            if (seen.insert(line).second) out.push_back({line, {cs[i].member_ids[0], cs[j].member_ids[0]}});
        }
    return out;
}

FaceCycle face_cycle(const Polytope& p, int two_face) {
    const Face& f = p.two_faces().at(static_cast<std::size_t>(two_face));
    const auto& ids = f.vertex_ids;
    std::map<int, IdList> adj;
    for (int e : p.face_edges(two_face)) {
        const auto& ev = p.edges()[static_cast<std::size_t>(e)].vertex_ids;
        adj[ev[0]].push_back(ev[1]);
        adj[ev[1]].push_back(ev[0]);
    }
    FaceCycle c;
    int prev = -1, cur = ids[0];
    do {
        c.vertices.push_back(cur);
        const auto& nb = adj.at(cur);
        if (nb.size() != 2) throw GeometryError("2-face boundary is not a cycle");
        int next = (nb[0] != prev) ? nb[0] : nb[1];
        if (prev == -1) next = std::min(nb[0], nb[1]);
        prev = cur;
        cur = next;
    } while (cur != ids[0] && c.vertices.size() <= ids.size());
    if (c.vertices.size() != ids.size()) throw GeometryError("2-face boundary cycle does not cover its vertices");

    // Orientation from the signed area in coordinates of the canonical span basis.
    const auto b = f.span.canonical_basis();
    Mat gram(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) gram(i, j) = dot(b[i], b[j]);
    Mat ginv = inverse(gram);
    std::vector<std::pair<Rat, Rat>> xy;
    for (int v : c.vertices) {
        Vec r{dot(b[0], p.vertex(v)), dot(b[1], p.vertex(v))};
        Vec q = mat_vec(ginv, r);
        xy.emplace_back(q[0], q[1]);
    }
    Rat area = 0;
    for (std::size_t i = 0; i < xy.size(); ++i) {
        const auto& a = xy[i];
        const auto& n = xy[(i + 1) % xy.size()];
        area += a.first * n.second - a.second * n.first;
    }
    if (area < 0) std::reverse(c.vertices.begin() + 1, c.vertices.end());
    for (std::size_t i = 0; i < c.vertices.size(); ++i)
        c.edges.push_back(p.edge_between(c.vertices[i], c.vertices[(i + 1) % c.vertices.size()]));
    return c;
}

} // namespace shadowlab
