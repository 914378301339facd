#include "shadowlab/io.hpp"

#include <fstream>
#include <sstream>

#include "shadowlab/errors.hpp"

namespace shadowlab::io {

json rat_json(const Rat& r) { return to_string(r); }

Rat rat_from(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (!j.is_string()) throw InputError(where + ": expected a rational string \"p/q\"");
    try {
        return parse_rat(j.get<std::string>());
    } catch (const InputError& e) {
        throw InputError(where + ": " + e.what());
    }
}

json vec_json(const Vec& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(rat_json(x));
    return out;
}

Vec vec_from(const json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array of rationals");
    Vec v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rat_from(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

json basis_json(const std::vector<Vec>& basis) {
    json out = json::array();
    for (const auto& v : basis) out.push_back(vec_json(v));
    return out;
}

std::vector<Vec> basis_from(const json& j, const std::string& where) {
    const json& arr = j.is_object() && j.contains("basis") ? j.at("basis") : j;
    if (!arr.is_array() || arr.empty()) throw InputError(where + ": expected a non-empty array of vectors");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(vec_from(arr[i], where + "[" + std::to_string(i) + "]"));
    for (const auto& v : out)
        if (v.size() != out[0].size()) throw InputError(where + ": vectors have different lengths");
    return out;
}

void validate_polytope_json(const json& j) {
    if (!j.is_object()) throw InputError("polytope: expected an object");
    if (j.contains("schema_version") && (!j["schema_version"].is_number_integer() || j["schema_version"] != kSchemaVersion))
        throw InputError("polytope.schema_version: unsupported version");
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long>() < 2)
        throw InputError("polytope.dim: expected an integer >= 2");
    if (j.contains("label") && !j["label"].is_string()) throw InputError("polytope.label: expected a string");
    if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
        throw InputError("polytope.vertices: expected a non-empty array");
    const auto d = static_cast<std::size_t>(j["dim"].get<long>());
    const json& vs = j["vertices"];
    for (std::size_t i = 0; i < vs.size(); ++i) {
        std::string where = "polytope.vertices[" + std::to_string(i) + "]";
        if (!vs[i].is_array() || vs[i].size() != d) throw InputError(where + ": expected " + std::to_string(d) + " coordinates");
        for (std::size_t c = 0; c < d; ++c) {
            const json& x = vs[i][c];
            if (!x.is_string()) throw InputError(where + "[" + std::to_string(c) + "]: expected a rational string");
            rat_from(x, where + "[" + std::to_string(c) + "]");
        }
    }
}

json polytope_json(const Polytope& p) {
    return {{"dim", p.dim()}, {"label", p.label()}, {"vertices", basis_json(p.vertices())}};
}

Polytope polytope_from(const json& j) {
    validate_polytope_json(j);
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < j["vertices"].size(); ++i)
        vs.push_back(vec_from(j["vertices"][i], "polytope.vertices[" + std::to_string(i) + "]"));
    return Polytope::build(vs, j.value("label", std::string("polytope")));
}

json plane_json(const ProjectionPlane& w) {
    return {{"basis", basis_json(w.basis().basis())}, {"orthogonal", basis_json(w.complement().basis())}};
}

namespace {

json points_json(const std::vector<Point2>& pts) {
    json out = json::array();
    for (const auto& q : pts) out.push_back({rat_json(q.x), rat_json(q.y)});
    return out;
}

json chains_json(const Chains& c) { return {{"visible", c.visible}, {"invisible", c.invisible}}; }

json pair_json(const FacePair& fp) {
    return {{"face", fp.face}, {"partner", fp.partner ? json(*fp.partner) : json(nullptr)}};
}

} // namespace

json shadow_json(const Polytope& p, const ProjectionPlane& w) {
    ShadowPolygon s = shadow(p, w);
    DegenerationReport rep = degeneration_report(p, w, s);
    json classes = json::array();
    for (const auto& c : rep.classes) {
        json members = json::array();
        for (std::size_t i = 0; i < c.member_ids.size(); ++i)
            members.push_back({{"face", c.member_ids[i]}, {"on_boundary", static_cast<bool>(c.on_boundary[i])}});
        classes.push_back({{"class", c.class_id},
                           {"direction_plane", basis_json(p.classes()[static_cast<std::size_t>(c.class_id)].direction_plane.basis())},
                           {"projected_rank", c.projected_rank},
                           {"members", members}});
    }
    return {{"plane", plane_json(w)},
            {"k", s.k()},
            {"hull_vertex_ids", s.hull_vertex_ids},
            {"fibers", s.fibers},
            {"hull_points", points_json(s.points)},
            {"admissible", rep.condition_i()},
            {"boundary_nondegenerate", rep.condition_ii()},
            {"degenerating_classes", classes}};
}

json walk_json(const Polytope& p, const WalkPlan& plan, const WalkCertificate& cert) {
    json segs = json::array();
    for (const auto& s : plan.segments)
        segs.push_back({{"kind", s.kind},
                        {"t_begin", rat_json(s.t_begin)},
                        {"t_end", rat_json(s.t_end)},
                        {"base", basis_json(s.base)},
                        {"slope", basis_json(s.slope)}});
    json events = json::array();
    for (const auto& e : plan.events)
        events.push_back({{"segment", e.segment}, {"t", rat_json(e.time)}, {"class", e.class_id}});
    json violations = json::array();
    for (const auto& v : cert.violations)
        violations.push_back({{"kind", v.kind},
                              {"segment", v.segment},
                              {"t", v.time ? rat_json(*v.time) : json(nullptr)},
                              {"detail", v.detail}});
    json out = {{"dim", p.dim()},
                {"segments", segs},
                {"events", events},
                {"isometry", basis_json(plan.isometry.row_list())},
                {"valid", cert.valid},
                {"violations", violations}};
    if (plan.from) out["from"] = basis_json(plan.from->basis());
    if (plan.to) out["to"] = basis_json(plan.to->basis());
    return out;
}

json verdict_json(const Polytope& p, const Verdict& v) {
    json out = {{"method", v.method}, {"equiprojective", v.equiprojective}, {"best_effort", v.best_effort}};
    if (v.method == "sampled") out["dim"] = p.dim();
    out["k"] = v.k ? json(*v.k) : json(nullptr);
    if (v.method == "sampled") {
        out["trials"] = v.trials;
        if (v.counterexample) {
            out["counterexample"] = {{"first", plane_json(v.counterexample->first)},
                                     {"second", plane_json(v.counterexample->second)},
                                     {"k_first", v.counterexample_k->first},
                                     {"k_second", v.counterexample_k->second}};
        }
        return out;
    }
    json certs = json::array();
    for (const auto& c : v.search.certificates) {
        json cj = {{"pair", pair_json(c.pair)},
                   {"class", c.class_id},
                   {"witness_orthogonal", basis_json(c.orthogonal.basis())},
                   {"fixed_points", {c.fixed_points.first, c.fixed_points.second}},
                   {"chains", chains_json(c.chains)}};
        if (c.partner_fixed_points) cj["partner_fixed_points"] = {c.partner_fixed_points->first, c.partner_fixed_points->second};
        if (c.partner_chains) cj["partner_chains"] = chains_json(*c.partner_chains);
        certs.push_back(std::move(cj));
    }
    json not_found = json::array();
    for (const auto& fp : v.search.not_found) not_found.push_back(pair_json(fp));
    json items = json::array();
    for (const auto& it : v.items)
        items.push_back({{"edge", it.edge},
                         {"face", it.face},
                         {"partner", it.partner ? json(*it.partner) : json(nullptr)},
                         {"orientation", it.orientation}});
    out["certificates"] = certs;
    out["not_found"] = not_found;
    out["search_exhaustive"] = v.search.exhaustive;
    out["witnesses_tried"] = v.search.witnesses_tried;
    out["edge_two_faces"] = items;
    if (v.pairing.ok()) {
        json pairs = json::array();
        for (const auto& [a, b] : v.pairing.pairs) pairs.push_back({a, b});
        out["pairing"] = pairs;
    } else {
        out["obstruction"] = *v.pairing.obstruction;
    }
    out["dim"] = p.dim();
    return out;
}

json equivalence_json(const EquivalenceReport& r) {
    json cases = json::array();
    for (const auto& c : r.cases)
        cases.push_back({{"orthogonal", basis_json(c.orthogonal.basis())},
                         {"degenerating_classes", c.degenerating_classes},
                         {"k", c.k},
                         {"k_minus", c.k_minus},
                         {"k_plus", c.k_plus},
                         {"matches", c.matches()}});
    return {{"cases", cases},
            {"vacuous", r.vacuous()},
            {"passed", r.passed()},
            {"sampled_k", r.sampled_k ? json(*r.sampled_k) : json(nullptr)}};
}

json load(const std::string& text_or_path) {
    auto first = text_or_path.find_first_not_of(" \t\r\n");
    std::string text;
    if (first != std::string::npos && (text_or_path[first] == '{' || text_or_path[first] == '[')) {
        text = text_or_path;
    } else {
        std::ifstream in(text_or_path);
        if (!in) throw InputError("cannot read " + text_or_path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

} // namespace shadowlab::io
