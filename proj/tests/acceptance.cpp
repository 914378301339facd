// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "shadowlab/equiproj.hpp"
#include "shadowlab/generators.hpp"
#include "shadowlab/walk.hpp"

using namespace shadowlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct ZonotopeCase {
    std::size_t d, g;
    std::uint64_t seed;
    ZonotopeSpec spec;
    Polytope p;
};

// d in {3,4,5}, |G| in {max(3,d)..6}: nine shapes cycled over 20 seeds.
const std::vector<ZonotopeCase>& zonotope_cases() {
    static const std::vector<ZonotopeCase> cases = [] {
        std::vector<std::pair<std::size_t, std::size_t>> shapes;
        for (std::size_t d = 3; d <= 5; ++d)
            for (std::size_t g = std::max<std::size_t>(3, d); g <= 6; ++g) shapes.emplace_back(d, g);
        std::vector<ZonotopeCase> out;
        for (std::size_t i = 0; i < 20; ++i) {
            auto [d, g] = shapes[i % shapes.size()];
            std::uint64_t seed = 1000 + i;
            auto spec = random_zonotope_spec(seed, g, d);
            auto p = zonotope(spec);
            out.push_back({d, g, seed, spec, std::move(p)});
        }
        return out;
    }();
    return cases;
}

Polytope triangular_prism() { return prism(circle_polygon(3), Vec{Rat(0), Rat(0), Rat(1)}); }
Polytope pentagonal_prism() { return prism(circle_polygon(5), Vec{Rat(0), Rat(0), Rat(1)}); }

Outcome zonotope_shadows() {
    std::size_t shadows = 0;
    for (const auto& z : zonotope_cases()) {
        for (const auto& w : sample_admissible(z.p, z.seed, 100)) {
            std::size_t k = shadow(z.p, w).k();
            ++shadows;
            if (k != 2 * z.g) {
                std::ostringstream os;
                os << "seed " << z.seed << " d=" << z.d << " |G|=" << z.g << ": shadow with " << k << " vertices";
                return {false, os.str()};
            }
        }
    }
    return {true, "20 zonotopes, " + std::to_string(shadows) + " admissible shadows, all with 2|G| vertices"};
}

Outcome fig2() {
    auto h = hypercube(4);
    auto rep = degeneration_report(h, fig2_plane());
    if (rep.condition_i()) return {false, "plane is admissible"};
    if (rep.classes.size() != 1) return {false, std::to_string(rep.classes.size()) + " degenerating classes"};
    const auto& c = rep.classes[0];
    if (!(h.classes()[static_cast<std::size_t>(c.class_id)].direction_plane == Subspace::span({unit(4, 0), unit(4, 1)}, 4)))
        return {false, "degenerating class is not span{e1,e2}"};
    if (c.member_ids.size() != 4) return {false, std::to_string(c.member_ids.size()) + " faces in the class"};
    std::size_t on = 0;
    for (bool b : c.on_boundary) on += b;
    std::string detail = "one class, span{e1,e2}, 4 faces; " + std::to_string(on) + " of 4 on the shadow boundary (k=" +
                         std::to_string(shadow(h, fig2_plane()).k()) + ")";
    if (on != 4)
        return {false, detail + "; the faces at (x3,x4)=(0,1),(1,0) project strictly inside the hexagon, so the "
                                "\"all 4 on the boundary\" clause cannot hold"};
    return {true, detail};
}

Outcome fig3() {
    auto ph = perturbed_hypercube(ratio(1, 100));
    auto rep = degeneration_report(ph, fig2_plane());
    bool ok = rep.condition_ii() && !rep.condition_i();
    return {ok, "condition (ii) " + std::string(rep.condition_ii() ? "holds" : "fails") + ", condition (i) " +
                    (rep.condition_i() ? "holds" : "fails") + ", " + std::to_string(rep.classes.size()) +
                    " degenerating class(es)"};
}

Outcome walks() {
    std::vector<std::pair<std::string, Polytope>> zoo;
    zoo.emplace_back("cube", hypercube(3));
    zoo.emplace_back("hypercube", hypercube(4));
    zoo.emplace_back("pentagonal prism", pentagonal_prism());
    zoo.emplace_back("zonotope(5,4)", zonotope(random_zonotope_spec(77, 5, 4)));
    zoo.emplace_back("P_4", pn_polytope(make_pn_spec(4)));
    std::size_t plans = 0, events = 0;
    for (const auto& [name, p] : zoo) {
        for (std::uint64_t pair = 0; pair < 20; ++pair) {
            auto ends = sample_admissible(p, 500 + pair, 2);
            WalkPlan plan = full_walk(p, ends[0].complement(), ends[1].complement(), 900 + pair);
            WalkCertificate cert = verify_walk(p, plan);
            if (!cert.valid)
                return {false, name + " pair " + std::to_string(pair) + ": " + cert.violations.front().kind};
            for (const auto& e : cert.events) {
                auto fam = plan.segments[e.segment].at(e.time);
                std::size_t vanishing = 0;
                for (const auto& c : p.classes()) vanishing += class_determinant(fam, c.direction_plane) == 0;
                if (vanishing != 1)
                    return {false, name + ": " + std::to_string(vanishing) + " classes vanish at one event"};
            }
            ++plans;
            events += cert.events.size();
        }
    }
    return {true, std::to_string(plans) + " plans verified, " + std::to_string(events) +
                      " events, each with exactly one vanishing class"};
}

Outcome cross_validation() {
    struct Entry {
        std::string name;
        Polytope p;
        bool yes;
        std::size_t k;
    };
    std::vector<Entry> zoo;
    zoo.push_back({"cube", hypercube(3), true, 6});
    zoo.push_back({"hypercube", hypercube(4), true, 8});
    zoo.push_back({"triangular prism", triangular_prism(), true, 5});
    zoo.push_back({"pentagonal prism", pentagonal_prism(), true, 7});
    zoo.push_back({"tetrahedron", simplex(3), false, 0});
    zoo.push_back({"4-simplex", simplex(4), false, 0});
    for (const auto& z : zonotope_cases())
        zoo.push_back({"zonotope seed " + std::to_string(z.seed), z.p, true, 2 * z.g});
    std::size_t best_effort = 0;
    for (const auto& e : zoo) {
        Verdict comb = is_equiprojective_combinatorial(e.p, 31);
        Verdict samp = is_equiprojective_sampled(e.p, 31, 100);
        best_effort += comb.best_effort;
        if (comb.equiprojective != samp.equiprojective || comb.k != samp.k)
            return {false, e.name + ": combinatorial and sampled verdicts disagree"};
        if (comb.equiprojective != e.yes || (e.yes && *comb.k != e.k))
            return {false, e.name + ": verdict differs from the expected value"};
    }
    return {true, std::to_string(zoo.size()) + " polytopes agree; " + std::to_string(best_effort) +
                      " yes-verdicts in d>=4 rest on a seeded visibility search"};
}

Outcome pn() {
    std::string detail;
    for (std::size_t n = 2; n <= 4; ++n) {
        auto p = pn_polytope(make_pn_spec(n));
        auto est = estranged_degenerations(p, coordinate_plane(4));
        if (est.size() < n) return {false, "P_" + std::to_string(n) + ": only " + std::to_string(est.size())};
        // Independent re-check: the faces degenerate and their direction planes meet only at 0.
        for (std::size_t i = 0; i < est.size(); ++i) {
            const Subspace& si = p.two_faces()[static_cast<std::size_t>(est[i])].span;
            if (intersect(si, coordinate_plane(4).complement()).dim() == 0) return {false, "face does not degenerate"};
            for (std::size_t j = i + 1; j < est.size(); ++j)
                if (intersect(si, p.two_faces()[static_cast<std::size_t>(est[j])].span).dim() != 0)
                    return {false, "faces are not estranged"};
        }
        detail += "P_" + std::to_string(n) + ": " + std::to_string(est.size()) + "; ";
    }
    auto q = hyperprism_pnd(2, 5, 3);
    auto est = estranged_degenerations(q, coordinate_plane(5));
    detail += "P_{2,5} seed 3: " + std::to_string(est.size());
    return {est.size() >= 2, detail};
}

Outcome chain_balance() {
    std::size_t n = 0;
    for (const auto& p : {hypercube(3), triangular_prism()}) {
        for (const auto& cert : visible_pairs(p, 13).certificates) {
            auto et = elementary_transformation(p, cert.pair.face, cert.pair.partner, cert.orthogonal);
            if ((et.k_before == et.k_after) != et.balanced()) return {false, "k change disagrees with chain balance"};
            if (!et.balanced()) return {false, "unbalanced transformation on an equiprojective solid"};
            ++n;
        }
    }
    return {n > 0, std::to_string(n) + " certified transformations, all balanced with constant k"};
}

Outcome chain_split() {
    auto tp = triangular_prism();
    int top = -1, bottom = -1;
    for (std::size_t f = 0; f < tp.two_faces().size(); ++f) {
        if (tp.two_faces()[f].vertex_ids.size() != 3) continue;
        (top < 0 ? top : bottom) = static_cast<int>(f);
    }
    auto w = Subspace::from_basis({Vec{Rat(2), Rat(7), Rat(0)}});
    for (int e : tp.face_edges(top)) {
        auto cs = chain_split_transformations(tp, top, bottom, w, e);
        if (cs.difference != IdList{e}) return {false, "edge " + std::to_string(e) + ": chains differ by more than {e}"};
    }
    return {true, "3 edges, each visible-chain difference is exactly {e}"};
}

Outcome corollary() {
    auto ph = perturbed_hypercube(ratio(1, 100));
    auto a = definitions_equivalence_check(ph, 17, 60, {fig2_plane()});
    auto b = definitions_equivalence_check(hypercube(4), 17, 60);
    std::string detail = "perturbed hypercube: " + std::to_string(a.cases.size()) + " interior-only plane(s), k preserved " +
                         (a.passed() ? "in all" : "NOT in all") + "; hypercube: " +
                         (b.vacuous() ? "vacuous (no interior-only degeneracy exists)" :
                                        std::to_string(b.cases.size()) + " plane(s)");
    return {!a.vacuous() && a.passed() && b.passed(), detail};
}

std::set<IdList> id_sets(const std::vector<Face>& faces) {
    std::set<IdList> out;
    for (const auto& f : faces) out.insert(f.vertex_ids);
    return out;
}

Outcome oracles() {
    std::vector<std::pair<std::string, Polytope>> zoo;
    zoo.emplace_back("cube", hypercube(3));
    zoo.emplace_back("hypercube", hypercube(4));
    zoo.emplace_back("tetrahedron", simplex(3));
    zoo.emplace_back("4-simplex", simplex(4));
    zoo.emplace_back("triangular prism", triangular_prism());
    zoo.emplace_back("pentagonal prism", pentagonal_prism());
    zoo.emplace_back("perturbed hypercube", perturbed_hypercube(ratio(1, 100)));
    for (const auto& z : zonotope_cases())
        if (z.p.vertices().size() <= 20) zoo.emplace_back("zonotope seed " + std::to_string(z.seed), z.p);
    std::size_t hulls = 0;
    for (const auto& [name, p] : zoo) {
        if (p.vertices().size() > 20) continue;
        if (id_sets(p.facets()) != oracle::facets(p.vertices())) return {false, name + ": facets differ"};
        for (std::size_t k = 1; k + 1 < p.dim(); ++k)
            if (id_sets(p.faces(k)) != oracle::k_faces(p.vertices(), k))
                return {false, name + ": " + std::to_string(k) + "-faces differ"};
        std::vector<ProjectionPlane> planes = sample_admissible(p, 3, 5);
        if (p.dim() == 4) planes.push_back(fig2_plane());
        for (const auto& w : planes) {
            ShadowPolygon s = shadow(p, w);
            std::set<Point2> got(s.points.begin(), s.points.end());
            if (got != oracle::hull_vertices(s.images)) return {false, name + ": shadow hull differs"};
            ++hulls;
        }
    }
    return {true, std::to_string(zoo.size()) + " polytopes, faces of every dimension and " + std::to_string(hulls) +
                      " shadow hulls match the brute-force oracles"};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "zonotope shadows have 2|G| vertices", 120, zonotope_shadows},
        {2, "hypercube degenerate projection", 1, fig2},
        {3, "perturbed hypercube: (ii) without (i)", 1, fig3},
        {4, "walks cross one class at a time", 300, walks},
        {5, "combinatorial and sampled verdicts agree", 180, cross_validation},
        {6, "estranged simultaneous degenerations", 30, pn},
        {7, "chain balance across elementary transformations", 60, chain_balance},
        {8, "chain split differs by one edge", 10, chain_split},
        {9, "degeneracy definitions agree", 30, corollary},
        {10, "face lattice and hulls match oracles", 120, oracles},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over the time budget";
        }
        failed += !o.pass;
        std::printf("%s criterion %d: %s (%.2f s, budget %.0f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    secs, c.budget_s, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
