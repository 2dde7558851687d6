#ifndef KSC_JSON_IO_HPP
#define KSC_JSON_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "correlations.hpp"
#include "diophantine.hpp"
#include "extension.hpp"
#include "ks_decision.hpp"
#include "realization.hpp"
#include "scenario.hpp"

namespace ksc {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(errc::bad_input, std::string("missing field '") + key + "'");
    return j.at(key);
}

inline std::vector<std::string> string_list(const json& j, const char* what) {
    if (!j.is_array()) fail(errc::bad_input, std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) fail(errc::bad_input, std::string(what) + " entries must be strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

inline long positive_int(const json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long>() < 1) fail(errc::bad_input, std::string(what) + " must be a positive integer");
    return j.get<long>();
}

} // namespace detail

// Rationals travel as strings "p/q"; plain integers are accepted on input.
inline json rational_json(const rational& q) { return to_string(q); }

inline rational rational_from(const json& j) {
    if (j.is_number_integer()) return rational(bigint(std::to_string(j.get<long>())));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    fail(errc::bad_input, "rational must be a string \"p/q\" or an integer");
}

inline bigint bigint_from(const json& j) {
    if (j.is_number_integer()) return bigint(std::to_string(j.get<long>()));
    if (j.is_string()) {
        bigint z;
        if (z.set_str(j.get<std::string>(), 10) != 0) fail(errc::bad_input, "not an integer: " + j.dump());
        return z;
    }
    fail(errc::bad_input, "vector coordinates must be integers");
}

// Scenario ---------------------------------------------------------------

inline Scenario scenario_from_json(const json& j) {
    auto atoms = detail::string_list(detail::need(j, "atoms"), "atoms");
    std::vector<std::vector<std::string>> contexts;
    const json& mc = detail::need(j, "max_contexts");
    if (!mc.is_array()) fail(errc::bad_input, "max_contexts must be an array");
    for (const auto& c : mc) contexts.push_back(detail::string_list(c, "context"));
    std::map<std::string, std::vector<std::vector<std::string>>> events;
    if (j.contains("events")) {
        if (!j["events"].is_object()) fail(errc::bad_input, "events must be an object");
        for (const auto& [name, reps] : j["events"].items()) {
            if (!reps.is_array() || reps.empty()) fail(errc::bad_input, "event '" + name + "' needs representatives");
            for (const auto& r : reps) events[name].push_back(detail::string_list(r, "event representative"));
        }
    }
    std::map<std::string, long> dim;
    if (j.contains("dim")) {
        if (!j["dim"].is_object()) fail(errc::bad_input, "dim must be an object");
        for (const auto& [a, v] : j["dim"].items()) dim[a] = detail::positive_int(v, "dim entry");
    }
    long d = j.contains("d") ? detail::positive_int(j["d"], "d") : 0;
    return make_scenario(atoms, contexts, events, dim, d);
}

inline json scenario_json(const Scenario& s) {
    json j;
    j["atoms"] = s.atoms;
    json ctx = json::array();
    for (int i = 0; i < s.num_contexts(); ++i) ctx.push_back(context_labels(s, i));
    j["max_contexts"] = ctx;
    if (!s.events.empty()) j["events"] = event_labels(s);
    if (s.has_dim()) {
        json dim = json::object();
        for (std::size_t a = 0; a < s.atoms.size(); ++a) dim[s.atoms[a]] = s.dim[a];
        j["dim"] = dim;
    }
    if (s.d) j["d"] = s.d;
    return j;
}

inline json extended_json(const ExtendedScenario& e) {
    json j = scenario_json(e.extended);
    j["split_map"] = e.split_map;
    return j;
}

// Graph ------------------------------------------------------------------

struct GraphInput {
    OrthoGraph graph;
    std::vector<VertexSet> cliques; // authoritative context list; maximal cliques if absent
    bool explicit_cliques = false;
};

inline GraphInput graph_from_json(const json& j) {
    auto vertices = detail::string_list(detail::need(j, "vertices"), "vertices");
    std::vector<std::pair<std::string, std::string>> edges;
    const json& e = detail::need(j, "edges");
    if (!e.is_array()) fail(errc::bad_input, "edges must be an array");
    for (const auto& x : e) {
        auto pair = detail::string_list(x, "edge");
        if (pair.size() != 2) fail(errc::bad_input, "an edge has exactly two endpoints");
        edges.emplace_back(pair[0], pair[1]);
    }
    GraphInput in;
    in.graph = make_graph(vertices, edges);
    for (const auto& [a, b] : edges)
        if (in.graph.index(a) < 0 || in.graph.index(b) < 0) fail(errc::bad_input, "edge to unknown vertex");
    if (j.contains("cliques")) {
        in.explicit_cliques = true;
        for (const auto& c : j["cliques"]) {
            VertexSet k;
            for (const auto& l : detail::string_list(c, "clique")) {
                int v = in.graph.index(l);
                if (v < 0) fail(errc::bad_input, "clique names unknown vertex '" + l + "'");
                k.push_back(v);
            }
            std::sort(k.begin(), k.end());
            in.cliques.push_back(k);
        }
    } else {
        in.cliques = maximal_cliques(in.graph);
    }
    return in;
}

inline json graph_json(const OrthoGraph& g) {
    json j;
    j["vertices"] = g.labels;
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({g.labels[u], g.labels[v]});
    j["edges"] = edges;
    return j;
}

inline json vertex_sets_json(const OrthoGraph& g, const std::vector<VertexSet>& sets) {
    json out = json::array();
    for (const auto& k : sets) {
        json l = json::array();
        for (int v : k) l.push_back(g.labels[v]);
        out.push_back(l);
    }
    return out;
}

inline json colouring_json(const OrthoGraph& g, const Colouring& col) {
    json j = json::object();
    for (std::size_t v = 0; v < g.size(); ++v) j[g.labels[v]] = col[v];
    return j;
}

inline Colouring colouring_from_json(const json& j, const OrthoGraph& g) {
    if (!j.is_object()) fail(errc::bad_input, "colouring must map vertices to colours");
    Colouring col(g.size(), -1);
    for (const auto& [l, c] : j.items()) {
        int v = g.index(l);
        if (v < 0) fail(errc::bad_input, "colouring names unknown vertex '" + l + "'");
        if (!c.is_number_integer() || c.get<long>() < 0) fail(errc::bad_input, "colours are nonnegative integers");
        col[v] = static_cast<int>(c.get<long>());
    }
    for (int c : col)
        if (c < 0) fail(errc::bad_input, "colouring misses a vertex");
    return col;
}

inline Valuation valuation_from_json(const json& j, const OrthoGraph& g) {
    Valuation v;
    for (const auto& l : detail::string_list(j, "valuation")) {
        int x = g.index(l);
        if (x < 0) fail(errc::bad_input, "valuation names unknown vertex '" + l + "'");
        v.push_back(x);
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline json valuation_json(const OrthoGraph& g, const Valuation& v) {
    json out = json::array();
    for (int x : v) out.push_back(g.labels[x]);
    return out;
}

// Vectors ----------------------------------------------------------------

inline std::map<std::string, RationalVector> vectors_from_json(const json& j) {
    long d = detail::positive_int(detail::need(j, "d"), "d");
    const json& vs = detail::need(j, "vectors");
    if (!vs.is_object() || vs.empty()) fail(errc::bad_input, "vectors must be a nonempty object");
    std::map<std::string, RationalVector> out;
    for (const auto& [l, v] : vs.items()) {
        if (!v.is_array()) fail(errc::bad_input, "vector '" + l + "' must be an array");
        RationalVector x;
        for (const auto& c : v) x.push_back(bigint_from(c));
        if (static_cast<long>(x.size()) != d) fail(errc::dimension_mismatch, "vector '" + l + "' has the wrong length");
        out[l] = x;
    }
    return out;
}

inline json bigint_json(const bigint& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

inline json vectors_json(const std::map<std::string, RationalVector>& vs, int d) {
    json j;
    j["d"] = d;
    json m = json::object();
    for (const auto& [l, v] : vs) {
        json row = json::array();
        for (const auto& x : v) row.push_back(bigint_json(x));
        m[l] = row;
    }
    j["vectors"] = m;
    return j;
}

// Subspaces are written as their reduced integer row bases.
inline json realisation_json(const Realisation& r) {
    json j;
    j["d"] = r.d;
    json m = json::object();
    for (std::size_t v = 0; v < r.labels.size(); ++v) {
        json rows = json::array();
        for (const auto& b : r.spaces[v].basis) {
            json row = json::array();
            for (const auto& x : b) row.push_back(bigint_json(x));
            rows.push_back(row);
        }
        m[r.labels[v]] = rows;
    }
    j["subspaces"] = m;
    return j;
}

// State, functional, model -----------------------------------------------

inline std::string context_key(const Scenario& s, int i) {
    std::string out;
    for (const auto& l : context_labels(s, i)) out += (out.empty() ? "" : ",") + l;
    return out;
}

namespace detail {

// Per-context maps of rationals, keyed by the comma-joined context atoms. Missing entries are zero.
inline std::vector<std::vector<rational>> per_context_from_json(const json& j, const Scenario& s, bool require_all) {
    if (!j.is_object()) fail(errc::bad_input, "expected an object keyed by context");
    std::map<std::string, int> by_key;
    for (int i = 0; i < s.num_contexts(); ++i) by_key[context_key(s, i)] = i;
    std::vector<std::vector<rational>> out(s.contexts.size());
    for (int i = 0; i < s.num_contexts(); ++i) out[i].assign(s.contexts[i].size(), 0);
    std::vector<char> seen(s.contexts.size(), 0);
    for (const auto& [k, m] : j.items()) {
        auto it = by_key.find(k);
        if (it == by_key.end()) fail(errc::bad_input, "unknown context '" + k + "'");
        const int i = it->second;
        seen[i] = 1;
        if (!m.is_object()) fail(errc::bad_input, "context '" + k + "' must map atoms to values");
        for (const auto& [a, v] : m.items()) {
            int id = s.atom_index(a);
            int p = id < 0 ? -1 : s.position(i, id);
            if (p < 0) fail(errc::bad_input, "atom '" + a + "' is not in context '" + k + "'");
            out[i][p] = rational_from(v);
        }
    }
    if (require_all)
        for (int i = 0; i < s.num_contexts(); ++i)
            if (!seen[i]) fail(errc::bad_input, "missing context '" + context_key(s, i) + "'");
    return out;
}

inline json per_context_json(const std::vector<std::vector<rational>>& v, const Scenario& s, bool sparse) {
    json j = json::object();
    for (int i = 0; i < s.num_contexts(); ++i) {
        json m = json::object();
        for (std::size_t p = 0; p < s.contexts[i].size(); ++p)
            if (!sparse || v[i][p] != 0) m[s.atoms[s.contexts[i][p]]] = rational_json(v[i][p]);
        if (!sparse || !m.empty()) j[context_key(s, i)] = m;
    }
    return j;
}

} // namespace detail

inline State state_from_json(const json& j, const Scenario& s) { return {detail::per_context_from_json(j, s, true)}; }
inline json state_json(const State& st, const Scenario& s) { return detail::per_context_json(st.probs, s, false); }

inline Functional functional_from_json(const json& j, const Scenario& s) {
    return {detail::per_context_from_json(j, s, false)};
}
inline json functional_json(const Functional& f, const Scenario& s) { return detail::per_context_json(f.coeffs, s, true); }

// {"valuations": [[atoms...], ...], "weights": {"<index>": "p/q"}}
inline json model_json(const ClassicalModel& cm, const OrthoGraph& g) {
    json j;
    j["valuations"] = vertex_sets_json(g, cm.valuations);
    json w = json::object();
    for (std::size_t k = 0; k < cm.weights.size(); ++k) w[std::to_string(k)] = rational_json(cm.weights[k]);
    j["weights"] = w;
    return j;
}

inline ClassicalModel model_from_json(const json& j, const OrthoGraph& g) {
    ClassicalModel cm;
    const json& vals = detail::need(j, "valuations");
    if (!vals.is_array()) fail(errc::bad_input, "valuations must be an array");
    for (const auto& v : vals) cm.valuations.push_back(valuation_from_json(v, g));
    cm.weights.assign(cm.valuations.size(), 0);
    const json& w = detail::need(j, "weights");
    if (!w.is_object()) fail(errc::bad_input, "weights must map valuation indices to rationals");
    for (const auto& [k, v] : w.items()) {
        std::size_t idx = 0;
        try {
            std::size_t used = 0;
            idx = std::stoul(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
        } catch (const std::exception&) {
            fail(errc::bad_input, "bad valuation index '" + k + "'");
        }
        if (idx >= cm.valuations.size()) fail(errc::bad_input, "valuation index out of range");
        cm.weights[idx] = rational_from(v);
    }
    return cm;
}

// Dimension functions -----------------------------------------------------

inline json dim_solution_json(const DimSolution& sol, const std::vector<std::string>& names) {
    json j;
    j["d"] = sol.d;
    json dims = json::object();
    for (std::size_t k = 0; k < names.size(); ++k) dims[names[k]] = sol.dims[k];
    j["dims"] = dims;
    return j;
}

inline DimSolution dim_solution_from_json(const json& j, const std::vector<std::string>& names) {
    DimSolution sol;
    sol.d = detail::positive_int(detail::need(j, "d"), "d");
    const json& dims = detail::need(j, "dims");
    for (const auto& n : names) {
        if (!dims.contains(n)) fail(errc::bad_input, "dims misses '" + n + "'");
        sol.dims.push_back(detail::positive_int(dims[n], "dim entry"));
    }
    if (dims.size() != names.size()) fail(errc::bad_input, "dims names unknown vertices");
    return sol;
}

// Connections --------------------------------------------------------------

inline json connection_json(const Scenario& s, const ContextConnection& conn) {
    json j;
    json ctx = json::array();
    for (int i = 0; i < s.num_contexts(); ++i) ctx.push_back(context_labels(s, i));
    j["contexts"] = ctx;
    json maps = json::array();
    for (int i = 0; i < s.num_contexts(); ++i)
        for (int k = i + 1; k < s.num_contexts(); ++k) {
            json m = json::object();
            for (std::size_t p = 0; p < conn.maps[i][k].size(); ++p)
                m[s.atoms[s.contexts[i][p]]] = s.atoms[s.contexts[k][conn.maps[i][k][p]]];
            maps.push_back({{"from", i}, {"to", k}, {"map", m}});
        }
    j["maps"] = maps;
    return j;
}

// Reads only the i<j maps; the reverse directions are filled in as inverses.
inline ContextConnection connection_from_json(const json& j, const Scenario& s) {
    const int m = s.num_contexts();
    ContextConnection conn;
    conn.maps.assign(m, std::vector<std::vector<int>>(m));
    for (int i = 0; i < m; ++i) {
        conn.maps[i][i].resize(s.contexts[i].size());
        for (std::size_t p = 0; p < s.contexts[i].size(); ++p) conn.maps[i][i][p] = static_cast<int>(p);
    }
    for (const auto& e : detail::need(j, "maps")) {
        long i = detail::need(e, "from").get<long>(), k = detail::need(e, "to").get<long>();
        if (i < 0 || k < 0 || i >= m || k >= m || i == k) fail(errc::bad_input, "connection map between unknown contexts");
        std::vector<int> map(s.contexts[i].size(), -1);
        for (const auto& [a, b] : detail::need(e, "map").items()) {
            int pa = s.atom_index(a) < 0 ? -1 : s.position(static_cast<int>(i), s.atom_index(a));
            int pb = !b.is_string() || s.atom_index(b.get<std::string>()) < 0
                         ? -1
                         : s.position(static_cast<int>(k), s.atom_index(b.get<std::string>()));
            if (pa < 0 || pb < 0) fail(errc::bad_input, "connection map names atoms outside its contexts");
            map[pa] = pb;
        }
        if (!is_permutation_map(map, s.contexts[k].size())) fail(errc::bad_input, "connection map is not a bijection");
        std::vector<int> inv(map.size());
        for (std::size_t p = 0; p < map.size(); ++p) inv[map[p]] = static_cast<int>(p);
        conn.maps[i][k] = map;
        conn.maps[k][i] = inv;
    }
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            if (conn.maps[i][k].empty()) fail(errc::bad_input, "connection misses a pair of contexts");
    return conn;
}

// Reports -------------------------------------------------------------------

inline std::string hex64(std::uint64_t x) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k, x >>= 4) out[k] = digits[x & 15];
    return out;
}

inline json verdict_json(const KsVerdict& v) {
    json j;
    j["contextual"] = v.contextual;
    j["d"] = v.d;
    if (v.colouring) {
        j["witness"] = {{"type", "d_colouring"}, {"colouring", colouring_json(extended_graph(v.ext), *v.colouring)}};
    } else {
        j["obstruction"] = {{"type", "exhaustive_search"},
                            {"nodes", v.stats.nodes},
                            {"trace", hex64(v.stats.trace)}};
    }
    return j;
}

inline json report_json(const ClassicalityReport& r) {
    json j;
    j["label"] = classicality_name(r.label);
    j["acyclic"] = r.acyclic;
    j["vorobev"] = r.vorobev;
    j["chi_Gstar"] = r.chi_Gstar;
    j["d"] = r.d;
    json v = verdict_json(r.verdict);
    if (v.contains("witness")) j["witness"] = v["witness"];
    if (v.contains("obstruction")) {
        v["obstruction"]["chi_lower_bound"] = r.chi_Gstar;
        j["obstruction"] = v["obstruction"];
    }
    return j;
}

// Embeddings ------------------------------------------------------------------

inline json embedding_json(const EmbeddingTable& e) {
    json j;
    j["lambda_points"] = e.lambda_points;
    j["event_supports"] = e.event_supports;
    return j;
}

inline EmbeddingTable embedding_from_json(const json& j) {
    EmbeddingTable e;
    e.lambda_points = detail::string_list(detail::need(j, "lambda_points"), "lambda_points");
    const json& sup = detail::need(j, "event_supports");
    if (!sup.is_object()) fail(errc::bad_input, "event_supports must be an object");
    for (const auto& [a, v] : sup.items()) e.event_supports[a] = detail::string_list(v, "support");
    return e;
}

} // namespace ksc

#endif
