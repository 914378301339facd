#include "shadowlab/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shadowlab/equiproj.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/generators.hpp"
#include "shadowlab/io.hpp"
#include "shadowlab/walk.hpp"

namespace shadowlab::cli {

namespace {

using io::json;

struct Common {
    std::optional<std::uint64_t> seed;
    std::string out;
    bool no_timestamp = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "RNG seed (falls back to SHADOWLAB_SEED, then 0)");
    sub->add_option("--out", c.out, "write the JSON report to this path instead of stdout");
    sub->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp field");
}

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Polytope load_polytope(const std::string& src) { return io::polytope_from(io::load(src)); }

std::vector<Vec> load_basis(const std::string& src, std::size_t d, std::size_t count, const char* what) {
    auto b = io::basis_from(io::load(src), what);
    if (b.size() != count || b[0].size() != d)
        throw InputError(std::string(what) + ": expected " + std::to_string(count) + " vectors in dimension " +
                         std::to_string(d));
    if (rank_of(b) != count) throw InputError(std::string(what) + ": vectors are linearly dependent");
    return b;
}

struct Failure {
    int code;
    std::string message;
};

json run_generate(const std::string& family, std::uint64_t seed, std::size_t dim, std::size_t sides,
                  const std::string& height, const std::string& generators, std::size_t count, long bound,
                  const std::string& eps, std::size_t n, std::optional<std::size_t> m) {
    json extra = json::object();
    auto build = [&]() -> Polytope {
        if (family == "hypercube") return hypercube(dim);
        if (family == "simplex") return simplex(dim);
        if (family == "prism") {
            Vec h = height.empty() ? Vec{Rat(0), Rat(0), Rat(1)} : io::vec_from(io::load(height), "height");
            return prism(circle_polygon(sides), h);
        }
        if (family == "zonotope") {
            ZonotopeSpec spec = generators.empty() ? random_zonotope_spec(seed, count, dim, bound)
                                                   : ZonotopeSpec{io::basis_from(io::load(generators), "generators")};
            extra["generators"] = io::basis_json(spec.generators);
            return zonotope(spec);
        }
        if (family == "perturbed-hypercube") return perturbed_hypercube(parse_rat(eps.empty() ? "1/100" : eps));
        if (family == "pn") {
            PnSpec spec = m || !eps.empty() ? make_pn_spec(n, m.value_or(n), eps.empty() ? make_pn_spec(n).eps : parse_rat(eps))
                                            : make_pn_spec(n);
            extra["pn"] = {{"n", spec.n}, {"m", spec.m}, {"eps", io::rat_json(spec.eps)}};
            return pn_polytope(spec);
        }
        if (family == "pnd") return hyperprism_pnd(n, dim, seed);
        throw InputError("unknown family " + family);
    };
    Polytope p = build();
    json out = io::polytope_json(p);
    out["family"] = family;
    for (auto& [k, v] : extra.items()) out[k] = v;
    return out;
}

json run_shadow(const Polytope& p, const std::string& plane, std::uint64_t seed, std::size_t count, long grid_bound) {
    std::vector<ProjectionPlane> planes;
    if (!plane.empty()) {
        auto b = load_basis(plane, p.dim(), 2, "plane");
        planes.push_back(ProjectionPlane::from_basis(b[0], b[1]));
    } else {
        planes = sample_admissible(p, seed, count, grid_bound);
    }
    json shadows = json::array();
    for (const auto& w : planes) shadows.push_back(io::shadow_json(p, w));
    json out = {{"shadows", shadows}};
    if (shadows.size() == 1) {
        out["k"] = shadows[0]["k"];
        out["hull_vertex_ids"] = shadows[0]["hull_vertex_ids"];
        out["degenerating_classes"] = shadows[0]["degenerating_classes"];
    }
    return out;
}

json run_walk(const Polytope& p, const std::string& from, const std::string& to, std::uint64_t seed) {
    const std::size_t d = p.dim();
    if (d < 3) throw InputError("walks need d >= 3");
    std::vector<ProjectionPlane> sampled;
    if (from.empty() || to.empty()) sampled = sample_admissible(p, seed, 2);
    Subspace a = from.empty() ? sampled[0].complement() : Subspace::from_basis(load_basis(from, d, d - 2, "from"));
    Subspace b = to.empty() ? sampled[1].complement() : Subspace::from_basis(load_basis(to, d, d - 2, "to"));
    WalkPlan plan = full_walk(p, a, b, seed);
    return io::walk_json(p, plan, verify_walk(p, plan));
}

// Figure scenarios with their asserted properties.
json run_repro(const std::string& figure, std::uint64_t seed, std::size_t n, const std::string& eps) {
    json checks = json::array();
    auto check = [&](const std::string& name, bool holds) { checks.push_back({{"name", name}, {"holds", holds}}); };
    json out = {{"figure", figure}};
    if (figure == "fig2") {
        auto h = hypercube(4);
        auto w = fig2_plane();
        auto rep = degeneration_report(h, w);
        check("inadmissible", !rep.condition_i());
        check("single_degenerating_class", rep.classes.size() == 1);
        bool e12 = rep.classes.size() == 1 &&
                   h.classes()[static_cast<std::size_t>(rep.classes[0].class_id)].direction_plane ==
                       Subspace::span({unit(4, 0), unit(4, 1)}, 4);
        check("degenerating_class_is_span_e1_e2", e12);
        out["shadow"] = io::shadow_json(h, w);
    } else if (figure == "fig3") {
        auto ph = perturbed_hypercube(parse_rat(eps.empty() ? "1/100" : eps));
        auto w = fig2_plane();
        auto rep = degeneration_report(ph, w);
        check("condition_ii_holds", rep.condition_ii());
        check("condition_i_fails", !rep.condition_i());
        out["polytope"] = io::polytope_json(ph);
        out["shadow"] = io::shadow_json(ph, w);
    } else if (figure == "fig6") {
        auto spec = make_pn_spec(n);
        auto pn = pn_polytope(spec);
        auto est = estranged_degenerations(pn, coordinate_plane(4));
        check("estranged_degenerations_at_least_n", est.size() >= n);
        out["n"] = n;
        out["estranged_faces"] = est;
        out["polytope"] = io::polytope_json(pn);
    } else if (figure == "fig8") {
        auto h = hypercube(4);
        auto search = visible_pairs(h, seed);
        std::size_t adjacent_certified = 0, opposite_certified = 0;
        for (const auto& c : search.certificates) {
            if (!c.pair.partner) continue;
            IdList both = h.two_faces()[static_cast<std::size_t>(c.pair.face)].vertex_ids;
            const auto& b = h.two_faces()[static_cast<std::size_t>(*c.pair.partner)].vertex_ids;
            both.insert(both.end(), b.begin(), b.end());
            std::sort(both.begin(), both.end());
            bool on_facet = false;
            for (const auto& f : h.facets())
                on_facet = on_facet || std::includes(f.vertex_ids.begin(), f.vertex_ids.end(), both.begin(), both.end());
            ++(on_facet ? adjacent_certified : opposite_certified);
        }
        check("no_pair_on_a_common_facet_certified", adjacent_certified == 0);
        check("opposite_pairs_certified", opposite_certified == 2 * h.classes().size());
        out["certified_pairs"] = search.certificates.size();
        out["candidates_not_found"] = search.not_found.size();
    } else {
        throw InputError("unknown figure " + figure + " (expected fig2, fig3, fig6 or fig8)");
    }
    bool all = true;
    for (const auto& c : checks) all = all && c["holds"].get<bool>();
    out["assertions"] = checks;
    out["holds"] = all;
    return out;
}

int error_code(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
        dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const PolytopeError*>(&e) ||
        dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const DegenerateBasisError*>(&e) ||
        dynamic_cast<const ConstructionError*>(&e))
        return kUsage;
    return kInternal;
}

std::string error_json(const std::string& kind, const std::string& message) {
    json j = {{"schema_version", io::kSchemaVersion}, {"error", {{"kind", kind}, {"message", message}}}};
    return j.dump(2) + "\n";
}

} // namespace

RunResult run(const std::vector<std::string>& args, std::optional<std::string> seed_env) {
    RunResult res;
    CLI::App app{"Exact shadows, Grassmannian walks and equiprojectivity checks for polytopes", "shadowlab"};
    app.require_subcommand(1);

    Common common;
    std::string family, height, generators, eps, polytope, plane, from, to, mode = "both", figure;
    std::size_t dim = 3, sides = 3, count = 1, n = 2, trials = 200, budget = kDefaultWitnessBudget;
    std::optional<std::size_t> m;
    long bound = 5, grid_bound = 100;
    bool equivalence = false;

    auto* gen = app.add_subcommand("generate", "build a polytope from a named family");
    gen->add_option("--family", family, "hypercube|simplex|prism|zonotope|perturbed-hypercube|pn|pnd")
        ->required()
        ->check(CLI::IsMember({"hypercube", "simplex", "prism", "zonotope", "perturbed-hypercube", "pn", "pnd"}));
    gen->add_option("--dim", dim, "ambient dimension");
    gen->add_option("--sides", sides, "prism: sides of the base polygon");
    gen->add_option("--height", height, "prism: height vector as JSON");
    gen->add_option("--generators", generators, "zonotope: generator list as JSON or a file");
    gen->add_option("--count", count, "zonotope: number of random generators");
    gen->add_option("--bound", bound, "zonotope: coordinate bound of random generators");
    gen->add_option("--eps", eps, "perturbed-hypercube, pn: epsilon as p/q");
    gen->add_option("--n", n, "pn, pnd: number of degenerating faces");
    gen->add_option("--m", m, "pn: number of triangles (n or n+2)");
    add_common(gen, common);

    auto* sh = app.add_subcommand("shadow", "project a polytope onto planes");
    sh->add_option("--polytope", polytope, "polytope JSON or file")->required();
    sh->add_option("--plane", plane, "plane basis as JSON or file; sampled when absent");
    sh->add_option("--count", count, "number of sampled admissible planes");
    sh->add_option("--grid-bound", grid_bound, "coordinate bound for sampled planes");
    add_common(sh, common);

    auto* wk = app.add_subcommand("walk", "certified path between admissible orthogonals");
    wk->add_option("--polytope", polytope, "polytope JSON or file")->required();
    wk->add_option("--from", from, "basis of the start (d-2)-space");
    wk->add_option("--to", to, "basis of the end (d-2)-space");
    add_common(wk, common);

    auto* ck = app.add_subcommand("check", "decide equiprojectivity");
    ck->add_option("--polytope", polytope, "polytope JSON or file")->required();
    ck->add_option("--trials", trials, "sampled planes");
    ck->add_option("--mode", mode, "combinatorial|sampled|both")
        ->check(CLI::IsMember({"combinatorial", "sampled", "both"}));
    ck->add_option("--budget", budget, "visibility witnesses per class in d >= 4");
    ck->add_flag("--equivalence", equivalence, "also run the degeneracy-definitions check");
    add_common(ck, common);

    auto* rp = app.add_subcommand("repro", "rebuild a figure scenario and assert its property");
    rp->add_option("figure", figure, "fig2|fig3|fig6|fig8")->required();
    rp->add_option("--n", n, "fig6: number of degenerating faces");
    rp->add_option("--eps", eps, "fig3: perturbation as p/q");
    add_common(rp, common);

    std::vector<const char*> argv{"shadowlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        res.code = app.exit(e, out, err) == 0 ? kDecided : kUsage;
        res.out = out.str();
        res.err = err.str();
        return res;
    }

    std::uint64_t seed = 0;
    if (common.seed) {
        seed = *common.seed;
    } else {
        if (!seed_env) {
            if (const char* s = std::getenv("SHADOWLAB_SEED")) seed_env = s;
        }
        if (seed_env && !seed_env->empty()) {
            try {
                std::size_t pos = 0;
                seed = std::stoull(*seed_env, &pos);
                if (pos != seed_env->size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                res.code = kUsage;
                res.err = error_json("usage", "SHADOWLAB_SEED is not an unsigned integer");
                return res;
            }
        }
    }

    json report;
    try {
        if (gen->parsed()) {
            report = run_generate(family, seed, dim, sides, height, generators, count, bound, eps, n, m);
        } else if (sh->parsed()) {
            report = run_shadow(load_polytope(polytope), plane, seed, count, grid_bound);
        } else if (wk->parsed()) {
            report = run_walk(load_polytope(polytope), from, to, seed);
        } else if (ck->parsed()) {
            Polytope p = load_polytope(polytope);
            report = {{"mode", mode}};
            std::optional<Verdict> comb, samp;
            if (mode != "sampled") comb = is_equiprojective_combinatorial(p, seed, budget);
            if (mode != "combinatorial") samp = is_equiprojective_sampled(p, seed, trials);
            const Verdict& main = comb ? *comb : *samp;
            report["equiprojective"] = main.equiprojective;
            report["k"] = main.k ? json(*main.k) : json(nullptr);
            report["method"] = comb && samp ? "both" : main.method;
            report["best_effort"] = main.best_effort;
            if (comb) report["combinatorial"] = io::verdict_json(p, *comb);
            if (samp) report["sampled"] = io::verdict_json(p, *samp);
            if (comb && samp) {
                bool agree = comb->equiprojective == samp->equiprojective && comb->k == samp->k;
                report["agree"] = agree;
                if (!agree) res.code = comb->best_effort ? kBestEffort : kInternal;
            }
            if (main.best_effort && res.code == kDecided) res.code = kBestEffort;
            if (equivalence) report["equivalence"] = io::equivalence_json(definitions_equivalence_check(p, seed, trials));
        } else if (rp->parsed()) {
            report = run_repro(figure, seed, n, eps);
            if (!report["holds"].get<bool>()) res.code = kInternal;
        }
    } catch (const std::exception& e) {
        res.code = error_code(e);
        res.err = error_json(res.code == kUsage ? "invalid-input" : "internal", e.what());
        return res;
    }

    report["schema_version"] = io::kSchemaVersion;
    report["seed"] = seed;
    report["command"] = app.get_subcommands().front()->get_name();
    if (!common.no_timestamp) report["timestamp"] = utc_now();
    std::string text = report.dump(2) + "\n";
    if (!common.out.empty()) {
        std::ofstream f(common.out);
        if (!f) {
            res.code = kUsage;
            res.err = error_json("usage", "cannot write " + common.out);
            return res;
        }
        f << text;
    } else {
        res.out = std::move(text);
    }
    return res;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    RunResult r = run(args);
    std::cout << r.out;
    std::cerr << r.err;
    return r.code;
}

} // namespace shadowlab::cli
