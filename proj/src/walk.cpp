#include "shadowlab/walk.hpp"

#include <algorithm>
#include <set>

#include "shadowlab/errors.hpp"
#include "shadowlab/random.hpp"

namespace shadowlab {

namespace {

constexpr int kIterationCap = 64;
constexpr int kDrawCap = 1000;
constexpr long kCandidateBound = 10;

Rat det_with(std::vector<Vec> family, const Subspace& plane) {
    family.push_back(plane.basis()[0]);
    family.push_back(plane.basis()[1]);
    return det(Mat::from_columns(family));
}

Rat det_columns(std::vector<Vec> cols) { return det(Mat::from_columns(cols)); }

void require_admissible(const std::vector<Subspace>& planes, const std::vector<Vec>& basis, const char* what) {
    for (std::size_t c = 0; c < planes.size(); ++c)
        if (det_with(basis, planes[c]) == 0)
            throw PreconditionError(std::string(what) + ": start is not admissible (class " + std::to_string(c) +
                                    " degenerates)");
}

std::optional<Vec> eta_of(const Subspace& plane) {
    const Vec& f1 = plane.basis()[0];
    const Vec& f2 = plane.basis()[1];
    Vec eta = axpy(scale(f1, f2[0]), -f1[0], f2);
    if (is_zero(eta)) return std::nullopt;
    return eta;
}

// Pairs of classes whose events share a time, first one found.
std::optional<std::pair<int, int>> first_collision(const std::vector<DegenerationEvent>& events) {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].time == events[i - 1].time) return std::make_pair(events[i - 1].class_id, events[i].class_id);
    return std::nullopt;
}

std::size_t collision_count(const std::vector<DegenerationEvent>& events) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].time == events[i - 1].time) ++n;
    return n;
}

// Half of the smallest positive root over all classes, capped at 1/2.
Rat safe_epsilon(const WalkSegment& seg, const std::vector<Subspace>& planes) {
    Rat best = 1;
    for (const auto& pl : planes) {
        auto r = degeneration_polynomial(seg, pl).root();
        if (r && *r > 0 && *r < best) best = *r;
    }
    return best / 2;
}

Vec normal_in_hyperplane(const std::vector<Vec>& basis, std::size_t d) {
    std::vector<Vec> rows = basis;
    rows.push_back(unit(d, 0));
    auto k = kernel(Mat::from_rows(rows));
    if (k.size() != 1) throw WalkError("start is not a hyperplane of e1-perp");
    return k[0];
}

std::vector<Vec> gamma(const Vec& x, std::size_t d) {
    std::vector<Vec> cols;
    for (std::size_t j = 1; j + 1 < d; ++j) {
        Vec c = unit(d, j);
        c[d - 1] = x[j];
        cols.push_back(std::move(c));
    }
    return cols;
}

std::vector<Vec> gamma_slope(const Vec& x, std::size_t d) {
    std::vector<Vec> cols;
    for (std::size_t j = 1; j + 1 < d; ++j) {
        Vec c = zeros(d);
        c[d - 1] = x[j];
        cols.push_back(std::move(c));
    }
    return cols;
}

std::vector<Vec> zero_family(std::size_t k, std::size_t d) { return std::vector<Vec>(k, zeros(d)); }

std::vector<Vec> rotate_all(const Mat& q, const std::vector<Vec>& vs) {
    std::vector<Vec> out;
    for (const auto& v : vs) out.push_back(mat_vec(q, v));
    return out;
}

} // namespace

std::vector<Vec> WalkSegment::at(const Rat& t) const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < base.size(); ++i) out.push_back(axpy(base[i], t, slope[i]));
    return out;
}

Subspace WalkSegment::span_at(const Rat& t) const {
    auto fam = at(t);
    return Subspace::span(fam, fam.empty() ? 0 : fam[0].size());
}

WalkSegment WalkSegment::reversed() const {
    WalkSegment r;
    Rat shift = t_begin + t_end;
    for (std::size_t i = 0; i < base.size(); ++i) {
        r.base.push_back(axpy(base[i], shift, slope[i]));
        r.slope.push_back(scale(slope[i], -1));
    }
    r.t_begin = t_begin;
    r.t_end = t_end;
    r.kind = kind + "-reversed";
    return r;
}

std::optional<Rat> AffinePoly::root() const {
    if (linear == 0) return std::nullopt;
    return Rat(-constant / linear);
}

WalkFrame make_frame(const Polytope& p, const Mat& q) {
    WalkFrame f;
    f.dim = p.dim();
    bool ok = true;
    for (const auto& c : p.classes()) {
        Subspace plane = Subspace::span(rotate_all(q, c.direction_plane.basis()), p.dim());
        auto eta = eta_of(plane);
        if (!eta || (*eta)[p.dim() - 1] == 0) ok = false;
        if (ok) f.etas.push_back(scale(*eta, 1 / (*eta)[p.dim() - 1]));
        f.planes.push_back(std::move(plane));
    }
    if (!ok) f.etas.clear();
    return f;
}

namespace {

std::size_t violations_a(const std::vector<ProscribedDirection>& dirs, const Mat& q) {
    std::size_t n = 0;
    for (const auto& d : dirs) {
        Rat first = 0;
        for (std::size_t j = 0; j < q.cols(); ++j) first += q(0, j) * d.line[j];
        if (first == 0) ++n;
    }
    return n;
}

std::size_t violations_b(const Polytope& p, const Mat& q) {
    std::size_t n = 0;
    for (const auto& c : p.classes()) {
        auto eta = eta_of(Subspace::span(rotate_all(q, c.direction_plane.basis()), p.dim()));
        if (!eta || (*eta)[p.dim() - 1] == 0) ++n;
    }
    return n;
}

} // namespace

bool reference_conditions_hold(const Polytope& p, const Mat& q) {
    return violations_a(proscribed_directions(p), q) == 0 && violations_b(p, q) == 0;
}

ReferenceIsometry reference_isometry(const Polytope& p) {
    const std::size_t d = p.dim();
    if (d < 3) throw PreconditionError("reference isometry needs d >= 3");
    auto dirs = proscribed_directions(p);
    ReferenceIsometry iso;
    Mat q = Mat::identity(d);

    // Phase A: rotations in the planes (1, j) push proscribed directions off e1-perp.
    std::size_t bad = violations_a(dirs, q);
    for (int iter = 0; bad > 0; ++iter) {
        if (iter >= kIterationCap) throw SearchError("reference isometry: phase A iteration cap reached");
        bool accepted = false;
        for (std::size_t j = 1; j < d && !accepted; ++j)
            for (long den = 2; den <= 40 && !accepted; ++den) {
                Mat cand = multiply(plane_rotation(d, 0, j, ratio(1, den)), q);
                std::size_t now = violations_a(dirs, cand);
                if (now < bad) {
                    q = std::move(cand);
                    bad = now;
                    accepted = true;
                    ++iso.rotations;
                }
            }
        if (!accepted) throw SearchError("reference isometry: no rotation in planes (1, j) reduces violations");
    }

    // Phase B: rotations in the planes (j, d) fix the first coordinate.
    bad = violations_b(p, q);
    for (int iter = 0; bad > 0; ++iter) {
        if (iter >= kIterationCap) throw SearchError("reference isometry: phase B iteration cap reached");
        bool accepted = false;
        for (std::size_t j = 1; j + 1 < d && !accepted; ++j)
            for (long den = 2; den <= 40 && !accepted; ++den) {
                Mat cand = multiply(plane_rotation(d, j, d - 1, ratio(1, den)), q);
                std::size_t now = violations_b(p, cand);
                if (now < bad && violations_a(dirs, cand) == 0) {
                    q = std::move(cand);
                    bad = now;
                    accepted = true;
                    ++iso.rotations;
                }
            }
        if (!accepted) throw SearchError("reference isometry: no rotation in planes (j, d) fixes the eta vectors");
    }

    iso.q = q;
    iso.q_inverse = transpose(q);
    WalkFrame f = make_frame(p, q);
    for (std::size_t c = 0; c < f.etas.size(); ++c) iso.etas.push_back({static_cast<int>(c), f.etas[c]});
    return iso;
}

std::vector<Rat> determinant_polynomial(const WalkSegment& seg, const Subspace& class_plane) {
    const std::size_t n = seg.base.size() + 1;  // degree <= k, so k + 1 nodes
    std::vector<Rat> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = det_with(seg.at(Rat(static_cast<long>(i))), class_plane);
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / Rat(static_cast<long>(j));
    // Newton form at nodes 0..n-1 to monomial coefficients.
    std::vector<Rat> poly{c[n - 1]};
    for (std::size_t j = n - 1; j-- > 0;) {
        std::vector<Rat> next(poly.size() + 1, Rat(0));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= Rat(static_cast<long>(j)) * poly[i];
        }
        next[0] += c[j];
        poly = std::move(next);
    }
    while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
    return poly;
}

AffinePoly degeneration_polynomial(const WalkSegment& seg, const Subspace& class_plane) {
    auto poly = determinant_polynomial(seg, class_plane);
    if (poly.size() > 2) throw WalkError("degeneration polynomial has degree " + std::to_string(poly.size() - 1));
    return {poly[0], poly.size() > 1 ? poly[1] : Rat(0)};
}

std::vector<DegenerationEvent> segment_events(const WalkSegment& seg, const std::vector<Subspace>& planes,
                                              std::size_t index) {
    std::vector<DegenerationEvent> out;
    for (std::size_t c = 0; c < planes.size(); ++c) {
        auto r = degeneration_polynomial(seg, planes[c]).root();
        if (r && *r >= seg.t_begin && *r <= seg.t_end) out.push_back({index, *r, static_cast<int>(c)});
    }
    std::sort(out.begin(), out.end(), [](const DegenerationEvent& a, const DegenerationEvent& b) {
        return a.time != b.time ? a.time < b.time : a.class_id < b.class_id;
    });
    return out;
}

std::vector<WalkSegment> walk_to_hyperplane(const WalkFrame& frame, const Subspace& start, std::uint64_t seed) {
    const std::size_t d = frame.dim, k = d - 2;
    if (start.ambient() != d || start.dim() != k) throw DimensionError("start must be a (d-2)-space");
    if (frame.etas.size() != frame.planes.size()) throw PreconditionError("reference conditions do not hold");
    std::vector<Vec> basis = start.basis();
    require_admissible(frame.planes, basis, "walk_to_hyperplane");

    auto pivot = std::find_if(basis.begin(), basis.end(), [](const Vec& u) { return u[0] != 0; });
    if (pivot == basis.end()) return {};
    std::iter_swap(basis.begin(), pivot);
    for (std::size_t i = 1; i < k; ++i) basis[i] = axpy(basis[i], -basis[i][0] / basis[0][0], basis[0]);

    GridStream rng(seed, 0x6C);
    std::vector<WalkSegment> segs;
    std::pair<int, int> last{-1, -1};
    for (int iter = 0; iter < kIterationCap; ++iter) {
        std::optional<Vec> v;
        for (int draw = 0; draw < kDrawCap && !v; ++draw) {
            Vec c = rng.vector(d, kCandidateBound);
            if (c[0] == 0) continue;
            bool ok = true;
            for (const auto& eta : frame.etas) {
                std::vector<Vec> cols = basis;
                cols.push_back(eta);
                cols.push_back(c);
                if (det_columns(cols) == 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) v = scale(c, basis[0][0] / c[0]);
        }
        if (!v) throw WalkError("walk_to_hyperplane: no admissible direction v found");

        WalkSegment seg{basis, zero_family(k, d), Rat(0), Rat(1), "to-hyperplane"};
        seg.slope[0] = scale(*v, -1);
        auto events = segment_events(seg, frame.planes);
        auto hit = first_collision(events);
        if (!hit) {
            for (const auto& pl : frame.planes)
                if (det_with(seg.at(Rat(1)), pl) == 0) throw WalkError("walk_to_hyperplane: end is not admissible");
            segs.push_back(std::move(seg));
            return segs;
        }
        last = *hit;
        if (k < 2) continue;
        const Subspace& pf = frame.planes[static_cast<std::size_t>(hit->first)];
        const Subspace& pg = frame.planes[static_cast<std::size_t>(hit->second)];
        std::vector<Vec> sf(basis.begin() + 1, basis.end()), sg(basis.begin() + 1, basis.end());
        sf.insert(sf.end(), pf.basis().begin(), pf.basis().end());
        sg.insert(sg.end(), pg.basis().begin(), pg.basis().end());
        if (!(Subspace::span(sf, d) == Subspace::span(sg, d))) continue;

        // Same kernel for both linear forms: move u_2 off span(u_3.., f1, f2, f'1) inside e1-perp.
        std::vector<Vec> fixed(basis.begin() + 2, basis.end());
        fixed.push_back(pf.basis()[0]);
        fixed.push_back(pf.basis()[1]);
        fixed.push_back(pg.basis()[0]);
        std::size_t base_rank = rank_of(fixed);
        std::optional<Vec> w;
        for (int draw = 0; draw < kDrawCap && !w; ++draw) {
            Vec c = rng.vector(d, kCandidateBound);
            c[0] = 0;
            std::vector<Vec> test = fixed;
            test.push_back(c);
            if (rank_of(test) > base_rank) w = c;
        }
        if (!w) throw WalkError("walk_to_hyperplane: no perturbation of u_2 found");
        WalkSegment pert{basis, zero_family(k, d), Rat(0), Rat(1), "perturb-u2"};
        pert.slope[1] = *w;
        pert.t_end = safe_epsilon(pert, frame.planes);
        basis[1] = axpy(basis[1], pert.t_end, *w);
        segs.push_back(std::move(pert));
    }
    throw WalkError("walk_to_hyperplane: classes " + std::to_string(last.first) + " and " +
                    std::to_string(last.second) + " keep degenerating simultaneously");
}

std::vector<WalkSegment> walk_within_hyperplane(const WalkFrame& frame, const Subspace& start, std::uint64_t seed) {
    const std::size_t d = frame.dim, k = d - 2, last_axis = d - 1;
    if (start.ambient() != d || start.dim() != k) throw DimensionError("start must be a (d-2)-space");
    if (frame.etas.size() != frame.planes.size()) throw PreconditionError("reference conditions do not hold");
    for (const auto& u : start.basis())
        if (u[0] != 0) throw PreconditionError("walk_within_hyperplane: start is not inside e1-perp");
    require_admissible(frame.planes, start.basis(), "walk_within_hyperplane");

    std::vector<WalkSegment> segs;
    Vec n = normal_in_hyperplane(start.basis(), d);
    if (n[last_axis] == 0) {
        std::size_t i = last_axis - 1;
        while (n[i] == 0) --i;
        std::vector<Vec> cols;
        for (std::size_t j = 1; j < last_axis; ++j) {
            if (j == i) continue;
            cols.push_back(axpy(unit(d, j), -n[j] / n[i], unit(d, i)));
        }
        cols.push_back(unit(d, last_axis));
        WalkSegment stair{cols, zero_family(k, d), Rat(0), Rat(1), "staircase"};
        stair.slope[k - 1] = unit(d, i);
        stair.t_end = safe_epsilon(stair, frame.planes);
        n = normal_in_hyperplane(stair.at(stair.t_end), d);
        segs.push_back(std::move(stair));
    }
    Vec x = zeros(d);
    for (std::size_t j = 1; j < last_axis; ++j) x[j] = -n[j] / n[last_axis];
    if (is_zero(x)) return segs;

    GridStream rng(seed, 0x7A);
    std::pair<int, int> last{-1, -1};
    for (int iter = 0; iter < kIterationCap; ++iter) {
        WalkSegment fin{gamma(x, d), gamma_slope(scale(x, -1), d), Rat(0), Rat(1), "gamma"};
        auto events = segment_events(fin, frame.planes);
        auto hit = first_collision(events);
        if (!hit) {
            segs.push_back(std::move(fin));
            return segs;
        }
        last = *hit;
        Vec diff = sub(frame.etas[static_cast<std::size_t>(hit->first)], frame.etas[static_cast<std::size_t>(hit->second)]);
        std::optional<Vec> xt;
        for (int draw = 0; draw < kDrawCap && !xt; ++draw) {
            Vec c = rng.vector(d, kCandidateBound);
            c[0] = 0;
            c[last_axis] = 0;
            if (dot(diff, c) != 0) xt = c;
        }
        if (!xt) throw WalkError("walk_within_hyperplane: no separating perturbation found");
        WalkSegment pert{gamma(x, d), gamma_slope(*xt, d), Rat(0), Rat(1), "perturb-x"};
        Rat eps = safe_epsilon(pert, frame.planes);
        const std::size_t before = collision_count(events);
        bool accepted = false;
        for (int h = 0; h < 40 && !accepted; ++h, eps /= 2) {
            Vec moved = axpy(x, eps, *xt);
            WalkSegment trial{gamma(moved, d), gamma_slope(scale(moved, -1), d), Rat(0), Rat(1), "gamma"};
            if (collision_count(segment_events(trial, frame.planes)) < before) {
                pert.t_end = eps;
                x = moved;
                accepted = true;
            }
        }
        if (accepted) segs.push_back(std::move(pert));
    }
    throw WalkError("walk_within_hyperplane: classes " + std::to_string(last.first) + " and " +
                    std::to_string(last.second) + " keep degenerating simultaneously");
}

std::vector<WalkSegment> walk_to_hyperplane(const Polytope& p, const Subspace& start, std::uint64_t seed) {
    WalkFrame f = make_frame(p, Mat::identity(p.dim()));
    if (f.etas.empty() && !p.classes().empty()) throw PreconditionError("polytope does not satisfy the reference conditions");
    return walk_to_hyperplane(f, start, seed);
}

std::vector<WalkSegment> walk_within_hyperplane(const Polytope& p, const Subspace& start, std::uint64_t seed) {
    WalkFrame f = make_frame(p, Mat::identity(p.dim()));
    if (f.etas.empty() && !p.classes().empty()) throw PreconditionError("polytope does not satisfy the reference conditions");
    return walk_within_hyperplane(f, start, seed);
}

namespace {

std::vector<Subspace> class_planes(const Polytope& p) {
    std::vector<Subspace> out;
    for (const auto& c : p.classes()) out.push_back(c.direction_plane);
    return out;
}

} // namespace

WalkPlan full_walk(const Polytope& p, const Subspace& from, const Subspace& to, std::uint64_t seed) {
    const std::size_t d = p.dim();
    if (d < 3) throw PreconditionError("walks need d >= 3");
    for (const Subspace* s : {&from, &to})
        if (s->ambient() != d || s->dim() != d - 2) throw DimensionError("walk endpoints must be (d-2)-spaces");
    if (!is_admissible_orthogonal(p, from)) throw PreconditionError("walk start is not admissible");
    if (!is_admissible_orthogonal(p, to)) throw PreconditionError("walk end is not admissible");

    WalkPlan plan;
    plan.from = from;
    plan.to = to;
    plan.isometry = Mat::identity(d);
    plan.inverse = Mat::identity(d);
    if (from == to) return plan;

    ReferenceIsometry iso = reference_isometry(p);
    plan.isometry = iso.q;
    plan.inverse = iso.q_inverse;
    WalkFrame frame = make_frame(p, iso.q);

    auto half = [&](const Subspace& s, std::uint64_t salt) {
        Subspace rotated = Subspace::from_basis(rotate_all(iso.q, s.basis()));
        auto a = walk_to_hyperplane(frame, rotated, seed + salt);
        Subspace mid = a.empty() ? rotated : a.back().span_at(a.back().t_end);
        auto b = walk_within_hyperplane(frame, Subspace::from_basis(mid.basis()), seed + salt + 1);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    auto out = half(from, 0);
    auto back = half(to, 2);
    for (auto it = back.rbegin(); it != back.rend(); ++it) out.push_back(it->reversed());

    for (auto& seg : out) {
        seg.base = rotate_all(iso.q_inverse, seg.base);
        seg.slope = rotate_all(iso.q_inverse, seg.slope);
    }
    plan.segments = std::move(out);
    auto planes = class_planes(p);
    for (std::size_t i = 0; i < plan.segments.size(); ++i) {
        auto ev = segment_events(plan.segments[i], planes, i);
        plan.events.insert(plan.events.end(), ev.begin(), ev.end());
    }
    WalkCertificate cert = verify_walk(p, plan);
    if (!cert.valid) {
        const auto& v = cert.violations.front();
        throw WalkError("constructed walk failed verification: " + v.kind + " in segment " +
                        std::to_string(v.segment) + " " + v.detail);
    }
    return plan;
}

WalkCertificate verify_walk(const Polytope& p, const WalkPlan& plan) {
    WalkCertificate cert;
    const std::size_t d = p.dim(), k = d - 2;
    auto planes = class_planes(p);
    auto flag = [&](std::string kind, std::size_t seg, std::optional<Rat> t, std::string detail) {
        cert.violations.push_back({std::move(kind), seg, std::move(t), std::move(detail)});
    };

    for (std::size_t i = 0; i < plan.segments.size(); ++i) {
        const WalkSegment& seg = plan.segments[i];
        if (seg.base.size() != k || seg.slope.size() != k) {
            flag("not-free", i, std::nullopt, "family does not have d-2 vectors");
            continue;
        }
        if (seg.t_begin > seg.t_end) {
            flag("empty-range", i, std::nullopt, "t_begin > t_end");
            continue;
        }
        std::vector<DegenerationEvent> events;
        for (std::size_t c = 0; c < planes.size(); ++c) {
            auto poly = determinant_polynomial(seg, planes[c]);
            if (poly.size() > 2) {
                flag("non-affine", i, std::nullopt, "class " + std::to_string(c) + " has degree " +
                                                        std::to_string(poly.size() - 1));
                continue;
            }
            AffinePoly a{poly[0], poly.size() > 1 ? poly[1] : Rat(0)};
            if (a.identically_zero()) {
                flag("identically-degenerate", i, std::nullopt, "class " + std::to_string(c));
                continue;
            }
            auto r = a.root();
            if (r && *r >= seg.t_begin && *r <= seg.t_end) events.push_back({i, *r, static_cast<int>(c)});
        }
        std::sort(events.begin(), events.end(), [](const DegenerationEvent& a, const DegenerationEvent& b) {
            return a.time != b.time ? a.time < b.time : a.class_id < b.class_id;
        });
        for (std::size_t j = 1; j < events.size(); ++j)
            if (events[j].time == events[j - 1].time)
                flag("simultaneous-degeneration", i, events[j].time,
                     "classes " + std::to_string(events[j - 1].class_id) + " and " + std::to_string(events[j].class_id));

        std::vector<Rat> samples{seg.t_begin, seg.t_end};
        Rat prev = seg.t_begin;
        for (const auto& e : events) {
            samples.push_back(e.time);
            samples.push_back((prev + e.time) / 2);
            prev = e.time;
        }
        samples.push_back((prev + seg.t_end) / 2);
        for (const Rat& t : samples)
            if (rank_of(seg.at(t)) != k) flag("not-free", i, t, "family loses rank");
        cert.events.insert(cert.events.end(), events.begin(), events.end());
    }

    for (std::size_t i = 0; i + 1 < plan.segments.size(); ++i) {
        const auto& a = plan.segments[i];
        const auto& b = plan.segments[i + 1];
        if (a.base.size() != k || b.base.size() != k) continue;
        if (!(a.span_at(a.t_end) == b.span_at(b.t_begin)))
            flag("junction-mismatch", i, a.t_end, "span changes between segments " + std::to_string(i) + " and " +
                                                       std::to_string(i + 1));
    }

    if (!plan.segments.empty()) {
        const auto& first = plan.segments.front();
        const auto& last = plan.segments.back();
        if (plan.from && first.base.size() == k && !(first.span_at(first.t_begin) == *plan.from))
            flag("endpoint-mismatch", 0, first.t_begin, "start span differs from the requested one");
        if (plan.to && last.base.size() == k && !(last.span_at(last.t_end) == *plan.to))
            flag("endpoint-mismatch", plan.segments.size() - 1, last.t_end, "end span differs from the requested one");
    } else if (plan.from && plan.to && !(*plan.from == *plan.to)) {
        flag("endpoint-mismatch", 0, std::nullopt, "empty plan between different spaces");
    }

    auto key = [](const DegenerationEvent& e) { return std::make_tuple(e.segment, e.time, e.class_id); };
    std::set<std::tuple<std::size_t, Rat, int>> recorded, found;
    for (const auto& e : plan.events) recorded.insert(key(e));
    for (const auto& e : cert.events) found.insert(key(e));
    if (recorded != found || plan.events.size() != cert.events.size())
        flag("event-log-mismatch", 0, std::nullopt, "recorded events differ from recomputed ones");

    cert.valid = cert.violations.empty();
    return cert;
}

// ---------------------------------------------------------------------------
// Elementary transformations

bool ElementaryTransformation::swapped() const {
    if (visible_after != chains.invisible) return false;
    if (partner_chains && (!partner_visible_after || *partner_visible_after != partner_chains->invisible)) return false;
    return true;
}

bool ElementaryTransformation::balanced() const {
    std::size_t v = chains.visible.size(), i = chains.invisible.size();
    if (partner_chains) {
        v += partner_chains->visible.size();
        i += partner_chains->invisible.size();
    }
    return v == i;
}

namespace {

// u followed by vectors of s that complete it to a basis of s.
std::vector<Vec> complete_basis(const Subspace& s, const Vec& u) {
    std::vector<Vec> out{u};
    for (const auto& b : s.basis()) {
        if (out.size() == s.dim()) break;
        std::vector<Vec> test = out;
        test.push_back(b);
        if (rank_of(test) == test.size()) out.push_back(b);
    }
    if (out.size() != s.dim()) throw GeometryError("cannot complete basis");
    return out;
}

std::pair<int, int> fixed_points_of(const Polytope& p, int face, const ShadowPolygon& s) {
    const auto& ids = p.two_faces()[static_cast<std::size_t>(face)].vertex_ids;
    const Point2& a = s.images[static_cast<std::size_t>(ids[0])];
    const Point2* b = nullptr;
    for (int v : ids)
        if (!(s.images[static_cast<std::size_t>(v)] == a)) b = &s.images[static_cast<std::size_t>(v)];
    if (!b) throw GeometryError("2-face collapses to a point");
    auto param = [&](int v) -> Rat {
        const Point2& q = s.images[static_cast<std::size_t>(v)];
        return (q.x - a.x) * (b->x - a.x) + (q.y - a.y) * (b->y - a.y);
    };
    int lo = ids[0], hi = ids[0];
    for (int v : ids) {
        if (param(v) < param(lo)) lo = v;
        if (param(v) > param(hi)) hi = v;
    }
    int nlo = 0, nhi = 0;
    for (int v : ids) {
        nlo += param(v) == param(lo);
        nhi += param(v) == param(hi);
    }
    if (nlo != 1 || nhi != 1) throw GeometryError("fixed points of a degenerate 2-face are not unique");
    return {lo, hi};
}

std::pair<IdList, IdList> split_chains(const Polytope& p, int face, std::pair<int, int> fp) {
    FaceCycle c = face_cycle(p, face);
    const std::size_t n = c.vertices.size();
    std::size_t i1 = 0, i2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (c.vertices[i] == fp.first) i1 = i;
        if (c.vertices[i] == fp.second) i2 = i;
    }
    IdList a, b;
    for (std::size_t i = i1; i != i2; i = (i + 1) % n) a.push_back(c.edges[i]);
    for (std::size_t i = i2; i != i1; i = (i + 1) % n) b.push_back(c.edges[i]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return {a, b};
}

IdList boundary_edges(const Polytope& p, int face, const ShadowPolygon& s) {
    IdList out;
    for (int e : p.face_edges(face)) {
        const auto& ev = p.edges()[static_cast<std::size_t>(e)].vertex_ids;
        if (s.is_hull_edge(ev[0], ev[1])) out.push_back(e);
    }
    return out;
}

Chains label_chains(const std::pair<IdList, IdList>& split, const IdList& visible) {
    if (visible == split.first) return {split.first, split.second};
    if (visible == split.second) return {split.second, split.first};
    throw GeometryError("edges on the shadow boundary do not form one chain between the fixed points");
}

} // namespace

ElementaryTransformation elementary_transformation(const Polytope& p, int face, std::optional<int> partner,
                                                   const Subspace& orthogonal, const std::optional<Vec>& direction) {
    const std::size_t d = p.dim(), k = d - 2;
    if (orthogonal.ambient() != d || orthogonal.dim() != k) throw DimensionError("witness must be a (d-2)-space");
    const auto& tf = p.two_faces();
    if (face < 0 || static_cast<std::size_t>(face) >= tf.size()) throw ParameterError("no such 2-face");
    const int cls = p.class_of(face);
    if (partner && p.class_of(*partner) != cls) throw PreconditionError("partner is not parallel to the face");

    const Subspace& span_f = tf[static_cast<std::size_t>(face)].span;
    Subspace meet = intersect(orthogonal, span_f);
    if (meet.dim() != 1) throw PreconditionError("witness must meet Span[F] in a line");
    const auto& classes = p.classes();
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (static_cast<int>(c) != cls && class_determinant(orthogonal.basis(), classes[c].direction_plane) == 0)
            throw PreconditionError("another class degenerates at the witness");

    ElementaryTransformation et;
    et.face = face;
    et.partner = partner;
    et.orthogonal = complete_basis(orthogonal, canonical_direction(meet.basis()[0]));
    Subspace comp = sum(orthogonal, span_f).orthogonal_complement();
    if (comp.dim() != 1) throw GeometryError("no valid v: (W-perp + Span[F])-perp is not a line");
    Vec v = canonical_direction(comp.basis()[0]);
    if (direction) {
        if (!comp.contains(*direction) || is_zero(*direction)) throw ParameterError("direction is not in the complement line");
        v = *direction;
    }
    et.direction = v;

    WalkSegment family{et.orthogonal, zero_family(k, d), Rat(0), Rat(1), "elementary"};
    family.slope[0] = v;
    Rat eps = 1;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        AffinePoly a = degeneration_polynomial(family, classes[c].direction_plane);
        if (static_cast<int>(c) == cls) {
            if (a.constant != 0 || a.linear == 0) throw GeometryError("face class does not cross the event transversally");
            continue;
        }
        if (auto r = a.root()) eps = std::min(eps, Rat(abs(*r)));
    }
    et.epsilon = eps / 2;
    et.before = family;
    et.before.t_begin = -et.epsilon;
    et.before.t_end = 0;
    et.before.kind = "elementary-before";
    et.after = family;
    et.after.t_begin = 0;
    et.after.t_end = et.epsilon;
    et.after.kind = "elementary-after";

    ProjectionPlane w0 = ProjectionPlane::from_orthogonal(orthogonal);
    ShadowPolygon s0 = shadow(p, w0);
    if (!s0.on_boundary(tf[static_cast<std::size_t>(face)].vertex_ids))
        throw PreconditionError("face is not on the shadow boundary at the witness");
    if (partner && !s0.on_boundary(tf[static_cast<std::size_t>(*partner)].vertex_ids))
        throw PreconditionError("partner is not on the shadow boundary at the witness");

    // w_2: the direction of W_0 along which u_1's image moves.
    std::vector<Vec> with_v = orthogonal.basis();
    with_v.push_back(v);
    Vec w1 = Subspace::span(with_v, d).orthogonal_complement().basis()[0];
    Subspace w2s = intersect(w0.basis(), Subspace::from_basis({w1}).orthogonal_complement());
    const Vec& w2 = w2s.basis()[0];
    const Vec& u1 = et.orthogonal[0];
    auto sign_at = [&](const Rat& t) {
        Subspace wt = family.span_at(t);
        return sign(dot(sub(u1, orth_project(u1, wt)), w2));
    };
    const Rat half = et.epsilon / 2;
    et.sign_before = sign_at(-half);
    et.sign_after = sign_at(half);

    ShadowPolygon sb = shadow(p, ProjectionPlane::from_orthogonal(family.span_at(-half)));
    ShadowPolygon sa = shadow(p, ProjectionPlane::from_orthogonal(family.span_at(half)));
    et.k_before = sb.k();
    et.k_after = sa.k();

    et.fixed_points = fixed_points_of(p, face, s0);
    et.chains = label_chains(split_chains(p, face, et.fixed_points), boundary_edges(p, face, sb));
    et.visible_after = boundary_edges(p, face, sa);
    if (partner) {
        et.partner_fixed_points = fixed_points_of(p, *partner, s0);
        et.partner_chains = label_chains(split_chains(p, *partner, *et.partner_fixed_points), boundary_edges(p, *partner, sb));
        et.partner_visible_after = boundary_edges(p, *partner, sa);
    }
    return et;
}

ChainSplit chain_split_transformations(const Polytope& p, int face, std::optional<int> partner,
                                       const Subspace& orthogonal, int edge) {
    const std::size_t d = p.dim(), k = d - 2;
    IdList edges = p.face_edges(face);
    if (!std::binary_search(edges.begin(), edges.end(), edge)) throw PreconditionError("edge is not an edge of the face");
    const auto& ev = p.edges()[static_cast<std::size_t>(edge)].vertex_ids;
    Vec e_bar = sub(p.vertex(ev[1]), p.vertex(ev[0]));
    std::optional<Vec> other;
    for (int g : edges) {
        if (g == edge) continue;
        const auto& gv = p.edges()[static_cast<std::size_t>(g)].vertex_ids;
        Vec dir = sub(p.vertex(gv[1]), p.vertex(gv[0]));
        if (rank_of({dir, e_bar}) < 2) throw PreconditionError("face has another edge parallel to e");
        if (!other) other = dir;
    }
    Vec v_bar = axpy(*other, -dot(*other, e_bar) / dot(e_bar, e_bar), e_bar);

    Subspace meet = intersect(orthogonal, p.two_faces()[static_cast<std::size_t>(face)].span);
    if (meet.dim() != 1) throw PreconditionError("witness must meet Span[F] in a line");
    const Vec& u = meet.basis()[0];
    Rat alpha = dot(u, e_bar) / dot(e_bar, e_bar), beta = dot(u, v_bar) / dot(v_bar, v_bar);
    Rat lambda = alpha == 0 ? Rat(1) : Rat(beta / alpha);
    if (lambda == 0) throw PreconditionError("witness direction is the edge direction itself");
    if (lambda < 0) {
        v_bar = scale(v_bar, -1);
        lambda = -lambda;
    }
    std::vector<Vec> rest = complete_basis(orthogonal, u);
    rest.erase(rest.begin());

    // u_1(s) = e_bar + s v_bar; the event of the classes through e sits at s = 0.
    WalkSegment path{{e_bar}, {v_bar}, Rat(0), Rat(1), "chain-split"};
    path.base.insert(path.base.end(), rest.begin(), rest.end());
    path.slope.resize(k, zeros(d));
    Rat eps = lambda;
    const int cls = p.class_of(face);
    for (std::size_t c = 0; c < p.classes().size(); ++c) {
        if (static_cast<int>(c) == cls) continue;
        AffinePoly a = degeneration_polynomial(path, p.classes()[c].direction_plane);
        if (a.identically_zero()) throw GeometryError("class degenerates along the whole split path");
        if (auto r = a.root(); r && *r != 0) eps = std::min(eps, Rat(abs(*r)));
    }
    eps /= 2;

    // Keep (s, t) -> u_1(s) + t v continuous: the canonical u_1 may flip sign with s.
    const Subspace& span_f = p.two_faces()[static_cast<std::size_t>(face)].span;
    Vec v0 = canonical_direction(sum(orthogonal, span_f).orthogonal_complement().basis()[0]);
    auto transform = [&](const Rat& s) {
        auto fam = path.at(s);
        Vec dir = scale(v0, sign(dot(canonical_direction(fam[0]), fam[0])));
        return elementary_transformation(p, face, partner, Subspace::from_basis(fam), dir);
    };
    ChainSplit out{transform(eps), transform(-eps), lambda, eps, {}};
    std::set_symmetric_difference(out.first.chains.visible.begin(), out.first.chains.visible.end(),
                                  out.second.chains.visible.begin(), out.second.chains.visible.end(),
                                  std::back_inserter(out.difference));
    return out;
}

} // namespace shadowlab
