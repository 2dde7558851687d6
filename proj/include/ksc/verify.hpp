#ifndef KSC_VERIFY_HPP
#define KSC_VERIFY_HPP

#include <string>

#include "json_io.hpp"

namespace ksc {

// Witness replay. Each bundle carries its own input data and a "kind"; the checks
// re-establish the witness's defining invariants with exact arithmetic only.
struct VerifyResult {
    bool ok = false;
    std::string kind;
    std::string message;
};

inline json correlation_json(const OrthoGraph& g, const Correlation& c) {
    json j = json::object();
    for (std::size_t v = 0; v < g.size(); ++v) j[g.labels[v]] = rational_json(c[v]);
    return j;
}

inline Correlation correlation_from_json(const json& j, const OrthoGraph& g) {
    if (!j.is_object()) fail(errc::bad_input, "correlation must map vertices to weights");
    Correlation c(g.size(), 0);
    for (const auto& [l, w] : j.items()) {
        int v = g.index(l);
        if (v < 0) fail(errc::bad_input, "correlation names unknown vertex '" + l + "'");
        c[v] = rational_from(w);
    }
    return c;
}

inline json graph_bundle(const OrthoGraph& g, const std::vector<VertexSet>& cliques) {
    json j = graph_json(g);
    j["cliques"] = vertex_sets_json(g, cliques);
    return j;
}

// Bundle builders: everything a replay needs, plus the claim itself.

inline json chromatic_bundle(const OrthoGraph& g, const std::vector<VertexSet>& cliques, const ChromaticResult& r) {
    return {{"kind", "chromatic"}, {"graph", graph_bundle(g, cliques)}, {"chi", r.chi}, {"colouring", colouring_json(g, r.colouring)}};
}

inline json d_colouring_bundle(const OrthoGraph& g, const std::vector<VertexSet>& cliques, long d,
                               const std::optional<Colouring>& col) {
    json j = {{"kind", "graph_d_colouring"}, {"graph", graph_bundle(g, cliques)}, {"d", d}};
    j["colouring"] = col ? colouring_json(g, *col) : json(nullptr);
    return j;
}

inline json valuation_bundle(const OrthoGraph& g, const std::vector<VertexSet>& cliques, const std::optional<Valuation>& v) {
    json j = {{"kind", "valuation"}, {"graph", graph_bundle(g, cliques)}};
    j["valuation"] = v ? valuation_json(g, *v) : json(nullptr);
    return j;
}

inline json verdict_bundle(const Scenario& s, const KsVerdict& v) {
    json j = {{"kind", "ks_verdict"}, {"scenario", scenario_json(s)}};
    const json body = verdict_json(v);
    for (const auto& [k, x] : body.items()) j[k] = x;
    return j;
}

inline json report_bundle(const Scenario& s, const ClassicalityReport& r) {
    return {{"kind", "classicality_report"}, {"scenario", scenario_json(s)}, {"report", report_json(r)}};
}

inline json connection_bundle(const Scenario& extended, const ConnectionSearch& res) {
    json j = {{"kind", "flat_connection"}, {"extended", scenario_json(extended)}, {"nodes", res.nodes}, {"cycle_rank", res.cycle_rank}};
    j["connection"] = res.connection ? connection_json(extended, *res.connection) : json(nullptr);
    return j;
}

inline json stab_bundle(const Scenario& s, const State& st, const std::optional<ClassicalModel>& cm) {
    json j = {{"kind", "stab_model"}, {"scenario", scenario_json(s)}, {"state", state_json(st, s)},
              {"no_disturbance", check_no_disturbance(st, s)}};
    j["model"] = cm ? model_json(*cm, orthogonality_graph(s)) : json(nullptr);
    return j;
}

inline json stab_bundle(const OrthoGraph& g, const std::vector<VertexSet>& cliques, const Correlation& c,
                        const std::optional<ClassicalModel>& cm) {
    json j = {{"kind", "stab_model"}, {"graph", graph_bundle(g, cliques)}, {"correlation", correlation_json(g, c)}};
    j["model"] = cm ? model_json(*cm, g) : json(nullptr);
    return j;
}

inline json separating_bundle(const Scenario& s, const std::optional<SeparatingState>& sep) {
    json j = {{"kind", "separating_state"}, {"scenario", scenario_json(s)}};
    if (sep) {
        j["state"] = state_json(sep->state, s);
        j["model"] = model_json(sep->model, orthogonality_graph(s));
        j["scheme"] = sep->scheme;
    } else {
        j["state"] = nullptr;
    }
    return j;
}

inline json functional_bundle(const Scenario& s, const State& st, const Functional& f, const FunctionalValue& fv,
                              bool approx) {
    json j = {{"kind", "functional_value"},
              {"scenario", scenario_json(s)},
              {"state", state_json(st, s)},
              {"functional", functional_json(f, s)},
              {"value", rational_json(fv.value)},
              {"classical_max", rational_json(fv.classical_max)},
              {"violation", fv.value > fv.classical_max},
              {"approx", approx}};
    if (fv.maximizer) j["maximizer"] = valuation_json(orthogonality_graph(s), *fv.maximizer);
    return j;
}

inline json dim_bundle(const OrthoGraph& g, const std::vector<VertexSet>& cliques, const std::optional<DimSolution>& sol) {
    json j = {{"kind", "dim_solution"}, {"graph", graph_bundle(g, cliques)}};
    j["solution"] = sol ? dim_solution_json(*sol, g.labels) : json(nullptr);
    return j;
}

inline json embedding_bundle(const Scenario& s, const EmbeddingTable& e) {
    return {{"kind", "embedding"}, {"scenario", scenario_json(s)}, {"embedding", embedding_json(e)}};
}

inline json completion_bundle(const std::map<std::string, RationalVector>& vs, int d) {
    auto [g0, r0] = graph_from_vectors(vs);
    Completion c = complete(r0);
    return {{"kind", "completion"},
            {"vectors", vectors_json(vs, d)},
            {"graph", graph_bundle(c.graph, c.contexts)},
            {"realisation", realisation_json(c.realisation)},
            {"aliases", c.aliases},
            {"rounds", c.rounds},
            {"unital", is_unital(c.realisation, c.contexts)},
            {"freely_completable", is_freely_completable(g0, r0).ok}};
}

namespace detail {

inline bool weights_are_convex(const ClassicalModel& cm) {
    rational t = 0;
    for (const auto& w : cm.weights) {
        if (w < 0) return false;
        t += w;
    }
    return t == 1;
}

inline VerifyResult verdict(const std::string& kind, bool ok, const std::string& why) {
    return {ok, kind, ok ? "ok" : why};
}

inline VerifyResult verify_d_colouring_of(const std::string& kind, const Scenario& s, const json& colouring) {
    ExtendedScenario ext = maximal_extension(ensure_dims(s));
    OrthoGraph g = extended_graph(ext);
    Colouring col = colouring_from_json(colouring, g);
    return verdict(kind, is_d_colouring(g, ext.extended.contexts, static_cast<int>(ext.extended.d), col),
                   "colouring is not a d-colouring of the extended graph");
}

inline VerifyResult verify_obstruction(const std::string& kind, const Scenario& s, const json& obs) {
    ExtendedScenario ext = maximal_extension(ensure_dims(s));
    SearchStats st;
    auto col = d_colouring(extended_graph(ext), ext.extended.contexts, static_cast<int>(ext.extended.d), &st);
    if (col) return {false, kind, "a d-colouring exists"};
    if (need(obs, "nodes").get<std::uint64_t>() != st.nodes || need(obs, "trace").get<std::string>() != hex64(st.trace))
        return {false, kind, "search trace does not match"};
    return {true, kind, "ok"};
}

} // namespace detail

namespace detail {

inline VerifyResult replay(const json& j, const std::string& kind) {

    if (kind == "chromatic") {
        GraphInput in = graph_from_json(need(j, "graph"));
        Colouring col = colouring_from_json(need(j, "colouring"), in.graph);
        long chi = need(j, "chi").get<long>();
        bool ok = is_proper_colouring(in.graph, col) &&
                  std::all_of(col.begin(), col.end(), [&](int c) { return c < chi; }) &&
                  static_cast<long>(clique_number(in.graph)) <= chi;
        return verdict(kind, ok, "colouring is improper or uses more than chi colours");
    }
    if (kind == "graph_d_colouring") {
        GraphInput in = graph_from_json(need(j, "graph"));
        Colouring col = colouring_from_json(need(j, "colouring"), in.graph);
        int d = static_cast<int>(need(j, "d").get<long>());
        return verdict(kind, is_d_colouring(in.graph, in.cliques, d, col), "not a d-colouring");
    }
    if (kind == "valuation") {
        GraphInput in = graph_from_json(need(j, "graph"));
        Valuation v = valuation_from_json(need(j, "valuation"), in.graph);
        return verdict(kind, is_valuation(in.graph, in.cliques, v), "not a valuation");
    }
    if (kind == "ks_verdict" || kind == "classicality_report") {
        Scenario s = scenario_from_json(need(j, "scenario"));
        const json& body = kind == "ks_verdict" ? j : need(j, "report");
        if (body.contains("witness")) return detail::verify_d_colouring_of(kind, s, need(body["witness"], "colouring"));
        if (body.contains("obstruction")) return detail::verify_obstruction(kind, s, body["obstruction"]);
        return {false, kind, "neither witness nor obstruction"};
    }
    if (kind == "flat_connection") {
        Scenario s = scenario_from_json(need(j, "extended"));
        ContextConnection conn = connection_from_json(need(j, "connection"), s);
        return verdict(kind, verify_connection(s, conn), "connection is not flat or moves shared atoms");
    }
    if (kind == "stab_model" || kind == "separating_state") {
        if (j.contains("scenario")) {
            Scenario s = scenario_from_json(j["scenario"]);
            OrthoGraph g = orthogonality_graph(s);
            State st = state_from_json(need(j, "state"), s);
            ClassicalModel cm = model_from_json(need(j, "model"), g);
            bool ok = detail::weights_are_convex(cm) && reproduces(cm, st, s);
            for (const auto& v : cm.valuations) ok = ok && is_valuation(g, s.contexts, v);
            if (ok && kind == "separating_state") return verdict(kind, is_separating(st, s), "state does not separate events");
            return verdict(kind, ok, "model does not reproduce the state");
        }
        GraphInput in = graph_from_json(need(j, "graph"));
        Correlation c = correlation_from_json(need(j, "correlation"), in.graph);
        ClassicalModel cm = model_from_json(need(j, "model"), in.graph);
        bool ok = detail::weights_are_convex(cm) && reproduces(cm, c);
        for (const auto& v : cm.valuations) ok = ok && is_independent(in.graph, v);
        return verdict(kind, ok, "model does not reproduce the correlation");
    }
    if (kind == "dim_solution") {
        GraphInput in = graph_from_json(need(j, "graph"));
        DimSolution sol = dim_solution_from_json(need(j, "solution"), in.graph.labels);
        bool ok = true;
        for (const auto& c : in.cliques) {
            long t = 0;
            for (int v : c) t += sol.dims[v];
            ok = ok && t == sol.d;
        }
        return verdict(kind, ok, "a clique equation fails");
    }
    if (kind == "embedding") {
        Scenario s = scenario_from_json(need(j, "scenario"));
        return verdict(kind, verify_embedding(s, embedding_from_json(need(j, "embedding"))), "not a classical embedding");
    }
    if (kind == "functional_value") {
        Scenario s = scenario_from_json(need(j, "scenario"));
        State st = state_from_json(need(j, "state"), s);
        Functional f = functional_from_json(need(j, "functional"), s);
        FunctionalValue fv = evaluate_functional(st, f, s);
        bool ok = fv.value == rational_from(need(j, "value")) && fv.classical_max == rational_from(need(j, "classical_max"));
        if (ok && j.contains("maximizer")) {
            Valuation v = valuation_from_json(j["maximizer"], orthogonality_graph(s));
            ok = is_valuation(orthogonality_graph(s), s.contexts, v) && evaluate_on_valuation(f, s, v) == fv.classical_max;
        }
        return verdict(kind, ok, "functional values do not replay");
    }
    if (kind == "completion") {
        auto vs = vectors_from_json(need(j, "vectors"));
        auto [g0, r0] = graph_from_vectors(vs);
        Completion c = complete(r0);
        GraphInput in = graph_from_json(need(j, "graph"));
        bool ok = in.graph.labels == c.graph.labels && in.graph.adj == c.graph.adj && is_unital(c.realisation, c.contexts);
        return verdict(kind, ok, "completion does not replay");
    }
    return {false, kind, "unknown witness kind"};
}

} // namespace detail

// Malformed or absent witnesses fail the replay rather than throwing.
inline VerifyResult verify_bundle(const json& j) {
    std::string kind;
    try {
        kind = detail::need(j, "kind").get<std::string>();
        return detail::replay(j, kind);
    } catch (const error& e) {
        return {false, kind, e.what()};
    } catch (const json::exception& e) {
        return {false, kind, e.what()};
    }
}

} // namespace ksc

#endif
