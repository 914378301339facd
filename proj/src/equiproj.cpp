#include "shadowlab/equiproj.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "shadowlab/errors.hpp"
#include "shadowlab/random.hpp"

namespace shadowlab {

namespace {

std::vector<Subspace> arc_witnesses(const Polytope& p, int class_id) {
    const Subspace& plane = p.classes()[static_cast<std::size_t>(class_id)].direction_plane;
    const Vec& f1 = plane.basis()[0];
    const Vec& f2 = plane.basis()[1];
    // Directions s f1 + f2, plus f1 itself as s -> infinity.
    std::set<Rat> critical;
    bool infinity_critical = false;
    for (std::size_t c = 0; c < p.classes().size(); ++c) {
        if (static_cast<int>(c) == class_id) continue;
        Subspace meet = intersect(plane, p.classes()[c].direction_plane);
        if (meet.dim() != 1) continue;
        const Vec& l = meet.basis()[0];
        Mat gram = Mat::from_rows({{dot(f1, f1), dot(f1, f2)}, {dot(f2, f1), dot(f2, f2)}});
        Vec ab = solve(gram, {dot(f1, l), dot(f2, l)});
        if (ab[1] == 0)
            infinity_critical = true;
        else
            critical.insert(ab[0] / ab[1]);
    }
    std::vector<Rat> samples;
    if (critical.empty()) {
        samples.push_back(Rat(0));
    } else {
        samples.push_back(*critical.begin() - 1);
        for (auto it = critical.begin(); std::next(it) != critical.end(); ++it) samples.push_back((*it + *std::next(it)) / 2);
        samples.push_back(*critical.rbegin() + 1);
    }
    std::vector<Subspace> out;
    for (const Rat& s : samples) out.push_back(Subspace::from_basis({axpy(f2, s, f1)}));
    if (!infinity_critical) out.push_back(Subspace::from_basis({f1}));
    return out;
}

std::vector<Subspace> random_witnesses(const Polytope& p, int class_id, std::uint64_t seed, std::size_t budget) {
    const std::size_t d = p.dim();
    const Subspace& plane = p.classes()[static_cast<std::size_t>(class_id)].direction_plane;
    GridStream rng(seed + static_cast<std::uint64_t>(class_id), 0xE9);
    std::vector<Subspace> out;
    for (std::size_t draw = 0; draw < 20 * budget && out.size() < budget; ++draw) {
        long a = rng.integer(5), b = rng.integer(5);
        if (a == 0 && b == 0) continue;
        std::vector<Vec> basis{axpy(scale(plane.basis()[0], Rat(a)), Rat(b), plane.basis()[1])};
        for (std::size_t i = 0; i + 3 < d; ++i) basis.push_back(rng.vector(d, 5));
        if (rank_of(basis) != d - 2) continue;
        Subspace w = Subspace::from_basis(basis);
        if (intersect(w, plane).dim() != 1) continue;
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<Subspace> witnesses_for(const Polytope& p, int class_id, std::uint64_t seed, std::size_t budget) {
    return p.dim() == 3 ? arc_witnesses(p, class_id) : random_witnesses(p, class_id, seed, budget);
}

std::vector<FacePair> candidates(const ParallelClass& c) {
    std::vector<FacePair> out;
    const auto& m = c.member_ids;
    for (std::size_t i = 0; i < m.size(); ++i) {
        out.push_back({m[i], std::nullopt});
        for (std::size_t j = i + 1; j < m.size(); ++j) out.push_back({m[i], m[j]});
    }
    return out;
}

} // namespace

std::optional<VisibilityCertificate> certify_witness(const Polytope& p, int class_id, const Subspace& orthogonal) {
    const std::size_t d = p.dim();
    if (orthogonal.ambient() != d || orthogonal.dim() != d - 2) throw DimensionError("witness must be a (d-2)-space");
    const auto& classes = p.classes();
    const ParallelClass& cls = classes[static_cast<std::size_t>(class_id)];
    if (intersect(orthogonal, cls.direction_plane).dim() != 1) return std::nullopt;
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (static_cast<int>(c) != class_id && class_determinant(orthogonal.basis(), classes[c].direction_plane) == 0)
            return std::nullopt;

    ShadowPolygon s = shadow(p, ProjectionPlane::from_orthogonal(orthogonal));
    IdList on;
    for (int f : cls.member_ids)
        if (s.on_boundary(p.two_faces()[static_cast<std::size_t>(f)].vertex_ids)) on.push_back(f);
    if (on.empty()) return std::nullopt;
    if (on.size() > 2) throw GeometryError("more than two parallel 2-faces on the shadow boundary");

    VisibilityCertificate cert;
    cert.pair = {on[0], on.size() > 1 ? std::optional<int>(on[1]) : std::nullopt};
    cert.class_id = class_id;
    cert.orthogonal = orthogonal;
    ElementaryTransformation et = elementary_transformation(p, on[0], cert.pair.partner, orthogonal);
    cert.fixed_points = et.fixed_points;
    cert.partner_fixed_points = et.partner_fixed_points;
    cert.chains = et.chains;
    cert.partner_chains = et.partner_chains;
    return cert;
}

VisibilitySearch visible_pairs(const Polytope& p, std::uint64_t seed, std::size_t budget) {
    VisibilitySearch out;
    out.exhaustive = p.dim() == 3;
    for (std::size_t c = 0; c < p.classes().size(); ++c) {
        std::map<FacePair, VisibilityCertificate> found;
        for (const auto& w : witnesses_for(p, static_cast<int>(c), seed, budget)) {
            ++out.witnesses_tried;
            auto cert = certify_witness(p, static_cast<int>(c), w);
            if (cert && !found.count(cert->pair)) found.emplace(cert->pair, std::move(*cert));
        }
        for (const auto& cand : candidates(p.classes()[c])) {
            auto it = found.find(cand);
            if (it == found.end())
                out.not_found.push_back(cand);
            else
                out.certificates.push_back(std::move(it->second));
        }
    }
    return out;
}

namespace {

int traversal_sign(const Polytope& p, int from, int to) {
    Vec t = sub(p.vertex(to), p.vertex(from));
    return sign(dot(t, canonical_direction(t)));
}

void orient_face(const Polytope& p, int face, std::optional<int> partner, int dir, std::vector<EdgeTwoFace>& out) {
    FaceCycle cyc = face_cycle(p, face);
    const std::size_t n = cyc.vertices.size();
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({cyc.edges[i], face, partner, dir * traversal_sign(p, cyc.vertices[i], cyc.vertices[(i + 1) % n])});
}

Vec edge_direction(const Polytope& p, int edge) {
    const auto& v = p.edges()[static_cast<std::size_t>(edge)].vertex_ids;
    return canonical_direction(sub(p.vertex(v[1]), p.vertex(v[0])));
}

} // namespace

std::vector<EdgeTwoFace> orient(const Polytope& p, const FacePair& pair, bool flip) {
    std::vector<EdgeTwoFace> out;
    if (!pair.partner) {
        orient_face(p, pair.face, std::nullopt, flip ? -1 : 1, out);
        return out;
    }
    const int a = std::min(pair.face, *pair.partner), b = std::max(pair.face, *pair.partner);
    if (p.class_of(a) != p.class_of(b)) throw PreconditionError("paired 2-faces are not parallel");
    IdList both = p.two_faces()[static_cast<std::size_t>(a)].vertex_ids;
    const auto& vb = p.two_faces()[static_cast<std::size_t>(b)].vertex_ids;
    both.insert(both.end(), vb.begin(), vb.end());
    if (affine_rank(p.vertices(), both) != 3) throw GeometryError("slice through the paired 2-faces is not 3-dimensional");
    orient_face(p, a, b, -1, out);
    orient_face(p, b, a, 1, out);
    return out;
}

std::vector<EdgeTwoFace> edge_two_faces(const Polytope& p, const std::vector<VisibilityCertificate>& certs,
                                        bool flip_singletons) {
    std::vector<EdgeTwoFace> out;
    for (const auto& c : certs) {
        auto part = orient(p, c.pair, flip_singletons);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool compensate(const Polytope& p, const EdgeTwoFace& a, const EdgeTwoFace& b) {
    if (a == b || a.orientation == b.orientation) return false;
    if (!(edge_direction(p, a.edge) == edge_direction(p, b.edge))) return false;
    bool swapped_roles = a.partner && b.partner && a.face == *b.partner && *a.partner == b.face;
    bool same_roles = a.face == b.face && a.partner == b.partner && a.edge != b.edge;
    return swapped_roles || same_roles;
}

CompensationResult compensation_partition(const Polytope& p, const std::vector<EdgeTwoFace>& items) {
    // Only items with the same unordered face pair and edge direction can compensate.
    std::map<std::tuple<int, int, Vec>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& it = items[i];
        int lo = it.partner ? std::min(it.face, *it.partner) : it.face;
        int hi = it.partner ? std::max(it.face, *it.partner) : -1;
        groups[{lo, hi, edge_direction(p, it.edge)}].push_back(i);
    }
    CompensationResult res;
    for (const auto& [key, members] : groups) {
        std::vector<std::pair<std::size_t, std::size_t>> chosen;
        std::vector<bool> used(members.size(), false);
        std::function<bool()> match = [&]() -> bool {
            auto first = std::find(used.begin(), used.end(), false);
            if (first == used.end()) return true;
            std::size_t i = static_cast<std::size_t>(first - used.begin());
            used[i] = true;
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (used[j] || !compensate(p, items[members[i]], items[members[j]])) continue;
                used[j] = true;
                chosen.emplace_back(members[i], members[j]);
                if (match()) return true;
                chosen.pop_back();
                used[j] = false;
            }
            used[i] = false;
            return false;
        };
        if (!match()) {
            res.pairs.clear();
            res.obstruction = members;
            return res;
        }
        res.pairs.insert(res.pairs.end(), chosen.begin(), chosen.end());
    }
    std::sort(res.pairs.begin(), res.pairs.end());
    return res;
}

Verdict is_equiprojective_combinatorial(const Polytope& p, std::uint64_t seed, std::size_t budget) {
    Verdict v;
    v.method = "combinatorial";
    v.search = visible_pairs(p, seed, budget);
    v.items = edge_two_faces(p, v.search.certificates);
    v.pairing = compensation_partition(p, v.items);
    v.equiprojective = v.pairing.ok();
    if (v.equiprojective) {
        v.k = shadow(p, sample_admissible(p, seed, 1).front()).k();
        v.best_effort = !v.search.exhaustive && !v.search.not_found.empty();
    }
    return v;
}

Verdict is_equiprojective_sampled(const Polytope& p, std::uint64_t seed, std::size_t trials) {
    if (trials < 2) throw ParameterError("sampled check needs at least 2 trials");
    Verdict v;
    v.method = "sampled";
    v.trials = trials;
    auto planes = sample_admissible(p, seed, trials);
    std::size_t k0 = shadow(p, planes[0]).k();
    for (std::size_t i = 1; i < planes.size(); ++i) {
        std::size_t k = shadow(p, planes[i]).k();
        if (k != k0) {
            v.counterexample.emplace(planes[0], planes[i]);
            v.counterexample_k = std::make_pair(k0, k);
            return v;
        }
    }
    v.equiprojective = true;
    v.k = k0;
    return v;
}

bool EquivalenceReport::passed() const {
    for (const auto& c : cases) {
        if (!c.matches()) return false;
        if (sampled_k && c.k != *sampled_k) return false;
    }
    return true;
}

namespace {

// Degenerating classes when every degenerate 2-face is strictly inside the shadow, else none.
std::optional<IdList> interior_only(const Polytope& p, const Subspace& orthogonal) {
    DegenerationReport rep = degeneration_report(p, ProjectionPlane::from_orthogonal(orthogonal));
    if (rep.condition_i() || !rep.condition_ii()) return std::nullopt;
    return rep.degenerating_class_ids();
}

std::optional<InteriorCase> examine(const Polytope& p, const Subspace& orthogonal, const IdList& classes,
                                    GridStream& rng) {
    const std::size_t d = p.dim(), k = d - 2;
    for (int c : classes)
        if (intersect(orthogonal, p.classes()[static_cast<std::size_t>(c)].direction_plane).dim() != 1) return std::nullopt;
    for (int attempt = 0; attempt < 64; ++attempt) {
        // Random basis of the witness, then move its first vector along r.
        std::vector<Vec> basis;
        for (std::size_t i = 0; i < k; ++i) {
            Vec b = zeros(d);
            for (const auto& u : orthogonal.basis()) b = axpy(b, Rat(rng.integer(5)), u);
            basis.push_back(std::move(b));
        }
        if (rank_of(basis) != k) continue;
        WalkSegment seg{basis, std::vector<Vec>(k, zeros(d)), Rat(0), Rat(1), "undegenerate"};
        seg.slope[0] = rng.nonzero_vector(d, 5);
        Rat delta = 1;
        bool ok = true;
        for (const auto& cl : p.classes()) {
            AffinePoly a = degeneration_polynomial(seg, cl.direction_plane);
            if (a.linear == 0 && a.constant == 0) {
                ok = false;
                break;
            }
            if (auto r = a.root(); r && *r != 0) delta = std::min(delta, Rat(abs(*r)));
        }
        if (!ok) continue;
        delta /= 2;
        Subspace minus = seg.span_at(-delta), plus = seg.span_at(delta);
        if (!is_admissible_orthogonal(p, minus) || !is_admissible_orthogonal(p, plus)) continue;
        InteriorCase ic;
        ic.orthogonal = orthogonal;
        ic.degenerating_classes = classes;
        ic.k = shadow(p, ProjectionPlane::from_orthogonal(orthogonal)).k();
        ic.k_minus = shadow(p, ProjectionPlane::from_orthogonal(minus)).k();
        ic.k_plus = shadow(p, ProjectionPlane::from_orthogonal(plus)).k();
        return ic;
    }
    throw SearchError("no admissible neighbours found around a degenerate plane");
}

} // namespace

EquivalenceReport definitions_equivalence_check(const Polytope& p, std::uint64_t seed, std::size_t trials,
                                                const std::vector<ProjectionPlane>& extra) {
    EquivalenceReport rep;
    GridStream rng(seed, 0xC0);
    for (const auto& w : extra) {
        auto classes = interior_only(p, w.complement());
        if (!classes) throw PreconditionError("extra plane does not degenerate strictly inside the shadow");
        auto ic = examine(p, w.complement(), *classes, rng);
        if (!ic) throw PreconditionError("extra plane collapses a 2-face to a point");
        rep.cases.push_back(std::move(*ic));
    }
    const std::size_t per_class = std::max<std::size_t>(1, trials / std::max<std::size_t>(1, p.classes().size()));
    for (std::size_t c = 0; c < p.classes().size(); ++c)
        for (const auto& w : witnesses_for(p, static_cast<int>(c), seed, per_class)) {
            auto classes = interior_only(p, w);
            if (!classes) continue;
            if (auto ic = examine(p, w, *classes, rng)) rep.cases.push_back(std::move(*ic));
        }
    Verdict s = is_equiprojective_sampled(p, seed, std::max<std::size_t>(trials, 2));
    if (s.equiprojective) rep.sampled_k = s.k;
    return rep;
}

} // namespace shadowlab
