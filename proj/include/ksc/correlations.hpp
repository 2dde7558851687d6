#ifndef KSC_CORRELATIONS_HPP
#define KSC_CORRELATIONS_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "diophantine.hpp"
#include "extension.hpp"
#include "graph.hpp"
#include "lp.hpp"
#include "rational.hpp"
#include "scenario.hpp"

namespace ksc {

// probs[i][p]: probability of the atom at position p of context i.
struct State {
    std::vector<std::vector<rational>> probs;
};

using Correlation = std::vector<rational>; // weight per graph vertex

struct ClassicalModel {
    std::vector<VertexSet> valuations; // independent sets of the graph the model refers to
    std::vector<rational> weights;     // positive, summing to 1
};

inline bool is_state_shape(const State& st, const Scenario& s) {
    if (st.probs.size() != s.contexts.size()) return false;
    for (int i = 0; i < s.num_contexts(); ++i)
        if (st.probs[i].size() != s.contexts[i].size()) return false;
    return true;
}

inline rational event_value(const State& st, int i, Mask m) {
    rational t = 0;
    for (std::size_t p = 0; p < st.probs[i].size(); ++p)
        if (m >> p & 1) t += st.probs[i][p];
    return t;
}

// Context distributions are normalized and agree on every shared subalgebra.
inline bool check_no_disturbance(const State& st, const Scenario& s) {
    if (!is_state_shape(st, s)) return false;
    for (int i = 0; i < s.num_contexts(); ++i) {
        rational t = 0;
        for (const auto& x : st.probs[i]) {
            if (x < 0) return false;
            t += x;
        }
        if (t != 1) return false;
    }
    for (int i = 0; i < s.num_contexts(); ++i)
        for (int j = i + 1; j < s.num_contexts(); ++j) {
            const auto& ov = s.overlap[i][j];
            for (std::size_t k = 0; k < ov.left.size(); ++k)
                if (event_value(st, i, ov.left[k]) != event_value(st, j, ov.right[k])) return false;
        }
    return true;
}

// Atom weights of a no-disturbance state.
inline Correlation state_weights(const State& st, const Scenario& s) {
    Correlation w(s.atoms.size(), 0);
    for (int i = 0; i < s.num_contexts(); ++i)
        for (std::size_t p = 0; p < s.contexts[i].size(); ++p) w[s.contexts[i][p]] = st.probs[i][p];
    return w;
}

inline Correlation model_weights(const ClassicalModel& cm, std::size_t n) {
    Correlation w(n, 0);
    for (std::size_t k = 0; k < cm.valuations.size(); ++k)
        for (int v : cm.valuations[k]) w[v] += cm.weights[k];
    return w;
}

inline bool reproduces(const ClassicalModel& cm, const Correlation& target) {
    rational t = 0;
    for (const auto& x : cm.weights) {
        if (x <= 0) return false;
        t += x;
    }
    return t == 1 && model_weights(cm, target.size()) == target;
}

inline bool reproduces(const ClassicalModel& cm, const State& st, const Scenario& s) {
    if (!check_no_disturbance(st, s)) return false;
    for (const auto& v : cm.valuations)
        if (!is_valuation(orthogonality_graph(s), s.contexts, v)) return false;
    return reproduces(cm, state_weights(st, s));
}

namespace detail {

inline std::optional<ClassicalModel> mixture_of(const std::vector<VertexSet>& columns, const Correlation& target) {
    const std::size_t n = target.size(), k = columns.size();
    std::vector<std::vector<rational>> a(n + 1, std::vector<rational>(k, 0));
    std::vector<rational> b(n + 1, 0);
    for (std::size_t c = 0; c < k; ++c) {
        for (int v : columns[c]) a[v][c] = 1;
        a[n][c] = 1;
    }
    for (std::size_t v = 0; v < n; ++v) b[v] = target[v];
    b[n] = 1;
    auto x = feasible_point(std::move(a), std::move(b));
    if (!x) return std::nullopt;
    ClassicalModel cm;
    for (std::size_t c = 0; c < k; ++c)
        if ((*x)[c] != 0) cm.valuations.push_back(columns[c]), cm.weights.push_back((*x)[c]);
    return cm;
}

inline std::vector<VertexSet> independent_sets(const OrthoGraph& g, std::size_t cap) {
    const int n = static_cast<int>(g.size());
    std::vector<VertexSet> out;
    VertexSet cur;
    std::function<void(int)> go = [&](int v) {
        if (v == n) {
            if (out.size() == cap) fail(errc::cap_exceeded, "more than " + std::to_string(cap) + " independent sets");
            out.push_back(cur);
            return;
        }
        go(v + 1);
        for (int u : cur)
            if (g.adjacent(u, v)) return;
        cur.push_back(v);
        go(v + 1);
        cur.pop_back();
    };
    go(0);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

inline bool normalized_on(const Correlation& c, const std::vector<VertexSet>& cliques) {
    for (const auto& k : cliques) {
        rational t = 0;
        for (int v : k) t += c[v];
        if (t != 1) return false;
    }
    return true;
}

// Exact convex decomposition of a correlation. Weights normalized on every clique are
// decomposed over valuations; otherwise over all independent sets (STAB).
inline std::optional<ClassicalModel> stab_membership(const Correlation& c, const OrthoGraph& g,
                                                     const std::vector<VertexSet>& cliques,
                                                     std::size_t cap = default_valuation_cap) {
    if (c.size() != g.size()) fail(errc::bad_input, "correlation size does not match the graph");
    for (const auto& x : c)
        if (x < 0 || x > 1) return std::nullopt;
    if (!cliques.empty() && normalized_on(c, cliques)) return detail::mixture_of(enumerate_valuations(g, cliques, cap), c);
    return detail::mixture_of(detail::independent_sets(g, cap), c);
}

// Classical model of a state: a mixture of valuations of the scenario's exclusivity graph.
inline std::optional<ClassicalModel> stab_membership(const State& st, const Scenario& s,
                                                     std::size_t cap = default_valuation_cap) {
    if (!check_no_disturbance(st, s)) return std::nullopt;
    OrthoGraph g = orthogonality_graph(s);
    return detail::mixture_of(enumerate_valuations(g, s.contexts, cap), state_weights(st, s));
}

inline bool qstab_membership(const Correlation& c, const OrthoGraph& g) {
    if (c.size() != g.size()) fail(errc::bad_input, "correlation size does not match the graph");
    for (const auto& x : c)
        if (x < 0 || x > 1) return false;
    for (const auto& k : maximal_cliques(g)) {
        rational t = 0;
        for (int v : k) t += c[v];
        if (t > 1) return false;
    }
    return true;
}

struct ColouringState {
    State base;              // on the base scenario
    State extended;          // on the extended scenario
    ClassicalModel model;    // colour classes, as valuations of G*
    ClassicalModel base_model; // the same mixture, as valuations of the base exclusivity graph
};

// Uniform mixture of the colour classes of a d-colouring of G*.
inline ColouringState classical_state_from_colouring(const ExtendedScenario& ext, const Colouring& col) {
    const Scenario& x = ext.extended;
    const int d = static_cast<int>(x.d);
    if (!is_d_colouring(orthogonality_graph(x), x.contexts, d, col))
        fail(errc::invalid_colouring, "not a d-colouring of the extended graph");
    ColouringState out;
    std::map<VertexSet, rational> base_mix;
    for (int k = 0; k < d; ++k) {
        VertexSet cls, base;
        for (std::size_t v = 0; v < col.size(); ++v)
            if (col[v] == k) cls.push_back(static_cast<int>(v)), base.push_back(ext.origin[v]);
        std::sort(base.begin(), base.end());
        base.erase(std::unique(base.begin(), base.end()), base.end());
        out.model.valuations.push_back(cls);
        out.model.weights.push_back(ratio(1, d));
        base_mix[base] += ratio(1, d);
    }
    for (auto& [v, w] : base_mix) out.base_model.valuations.push_back(v), out.base_model.weights.push_back(w);
    Correlation wx = model_weights(out.model, x.atoms.size());
    for (int i = 0; i < x.num_contexts(); ++i) {
        std::vector<rational> row;
        for (int a : x.contexts[i]) row.push_back(wx[a]);
        out.extended.probs.push_back(row);
    }
    const Scenario& s = ext.base;
    Correlation wb = model_weights(out.base_model, s.atoms.size());
    for (int i = 0; i < s.num_contexts(); ++i) {
        std::vector<rational> row;
        for (int a : s.contexts[i]) row.push_back(wb[a]);
        out.base.probs.push_back(row);
    }
    return out;
}

// Maximally mixed state: every atom gets dim(a)/d.
inline State maximally_mixed_state(const Scenario& s) {
    if (!s.has_dim()) fail(errc::no_dimension_function, "maximally mixed state needs a dimension function");
    State st;
    for (const auto& c : s.contexts) {
        std::vector<rational> row;
        for (int a : c) row.push_back(ratio(s.dim[a], s.d));
        st.probs.push_back(row);
    }
    return st;
}

inline State state_from_model(const ClassicalModel& cm, const Scenario& s) {
    Correlation w = model_weights(cm, s.atoms.size());
    State st;
    for (const auto& c : s.contexts) {
        std::vector<rational> row;
        for (int a : c) row.push_back(w[a]);
        st.probs.push_back(row);
    }
    return st;
}

inline constexpr int max_separation_context = 20;

// Every nonzero event gets a nonzero value, and distinct events get distinct values.
inline bool is_separating(const State& st, const Scenario& s) {
    std::map<EventKey, rational> values;
    for (int i = 0; i < s.num_contexts(); ++i) {
        const int k = static_cast<int>(s.contexts[i].size());
        if (k > max_separation_context) fail(errc::too_large, "context too large for event enumeration");
        for (Mask m = 1; m <= s.full(i); ++m) {
            EventKey key = canonical_key(s, i, m);
            if (m == s.full(i)) key = {-1}; // identity
            if (values.count(key)) continue;
            values.emplace(std::move(key), event_value(st, i, m));
        }
    }
    std::vector<rational> all;
    for (const auto& [k, v] : values) {
        if (v == 0) return false;
        all.push_back(v);
    }
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
}

struct SeparatingState {
    State state;
    ClassicalModel model;
    int scheme = 0; // 0 primes, 1 squared primes, 2 powers of two
};

inline std::vector<bigint> first_primes(std::size_t n) {
    std::vector<bigint> out;
    for (unsigned long x = 2; out.size() < n; ++x) {
        bool prime = true;
        for (unsigned long q = 2; q * q <= x && prime; ++q) prime = x % q != 0;
        if (prime) out.push_back(x);
    }
    return out;
}

// True if some d-colouring of G* has a colour class lying over exactly the atoms of v.
// A hub vertex joined to every piece of an unchosen atom pins one colour to the chosen ones.
inline bool is_colour_class(const ExtendedScenario& ext, const Valuation& v) {
    const Scenario& x = ext.extended;
    OrthoGraph g = orthogonality_graph(x);
    std::vector<char> chosen(x.atoms.size(), 0);
    for (std::size_t a = 0; a < x.atoms.size(); ++a)
        chosen[a] = std::find(v.begin(), v.end(), ext.origin[a]) != v.end();
    const std::size_t hub = g.size();
    g.labels.push_back("\x01hub");
    for (auto& row : g.adj) row.push_back(0);
    g.adj.emplace_back(hub + 1, 0);
    for (std::size_t a = 0; a < hub; ++a)
        if (!chosen[a]) g.adj[a][hub] = g.adj[hub][a] = 1;
    std::vector<VertexSet> cliques;
    for (const auto& c : x.contexts) cliques.push_back(VertexSet(c.begin(), c.end()));
    return d_colouring(g, cliques, static_cast<int>(x.d)).has_value();
}

// Mixes, with generic weights, the valuations that are colour classes of d-colourings of G*.
// Event separation alone is weaker: the Yu-Oh set has separating mixtures of its valuations
// although no d-colouring exists, so the candidate valuations are restricted first.
// A noncontextual scenario can still give None when every colouring paints two distinct
// atoms alike, as when two atoms in dimension 3 are exclusive to the same pair.
// Powers of two give distinct subset sums, so if they fail no such mixture separates the events.
inline std::optional<SeparatingState> separating_classical_state(const Scenario& s,
                                                                 std::size_t cap = default_valuation_cap) {
    OrthoGraph g = orthogonality_graph(s);
    ExtendedScenario ext = maximal_extension(ensure_dims(s));
    std::vector<Valuation> vals;
    for (auto& v : enumerate_valuations(g, s.contexts, cap))
        if (is_colour_class(ext, v)) vals.push_back(std::move(v));
    if (vals.empty()) return std::nullopt;
    auto primes = first_primes(vals.size());
    for (int scheme = 0; scheme < 3; ++scheme) {
        std::vector<bigint> raw(vals.size());
        bigint total = 0;
        for (std::size_t k = 0; k < vals.size(); ++k) {
            if (scheme == 0) raw[k] = primes[k];
            if (scheme == 1) raw[k] = primes[k] * primes[k];
            if (scheme == 2) mpz_ui_pow_ui(raw[k].get_mpz_t(), 2, k);
            total += raw[k];
        }
        SeparatingState out;
        out.scheme = scheme;
        out.model.valuations = vals;
        for (const auto& r : raw) out.model.weights.push_back(ratio(r, total));
        out.state = state_from_model(out.model, s);
        if (is_separating(out.state, s)) return out;
    }
    return std::nullopt;
}

// coeffs[i][p]: coefficient of the atom at position p of context i.
struct Functional {
    std::vector<std::vector<rational>> coeffs;
};

struct FunctionalValue {
    rational value;
    rational classical_max;
    std::optional<Valuation> maximizer;
};

inline rational evaluate(const Functional& f, const State& st) {
    rational t = 0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        for (std::size_t p = 0; p < f.coeffs[i].size(); ++p) t += f.coeffs[i][p] * st.probs[i][p];
    return t;
}

inline rational evaluate_on_valuation(const Functional& f, const Scenario& s, const Valuation& v) {
    rational t = 0;
    for (int i = 0; i < s.num_contexts(); ++i)
        for (std::size_t p = 0; p < s.contexts[i].size(); ++p)
            if (std::binary_search(v.begin(), v.end(), s.contexts[i][p])) t += f.coeffs[i][p];
    return t;
}

inline FunctionalValue evaluate_functional(const State& st, const Functional& f, const Scenario& s,
                                           std::size_t cap = default_valuation_cap) {
    if (!is_state_shape(st, s) || f.coeffs.size() != s.contexts.size())
        fail(errc::bad_input, "functional or state does not match the scenario");
    for (int i = 0; i < s.num_contexts(); ++i)
        if (f.coeffs[i].size() != s.contexts[i].size()) fail(errc::bad_input, "functional does not match the scenario");
    FunctionalValue out;
    out.value = evaluate(f, st);
    auto vals = enumerate_valuations(orthogonality_graph(s), s.contexts, cap);
    for (const auto& v : vals) {
        rational t = evaluate_on_valuation(f, s, v);
        if (!out.maximizer || t > out.classical_max) out.classical_max = t, out.maximizer = v;
    }
    return out;
}

// Same maximum through the exact simplex over the classical polytope.
inline std::optional<rational> classical_max_lp(const Functional& f, const Scenario& s,
                                                std::size_t cap = default_valuation_cap) {
    auto vals = enumerate_valuations(orthogonality_graph(s), s.contexts, cap);
    if (vals.empty()) return std::nullopt;
    std::vector<std::vector<rational>> a(1, std::vector<rational>(vals.size(), 1));
    std::vector<rational> c;
    for (const auto& v : vals) c.push_back(evaluate_on_valuation(f, s, v));
    ExactSimplex lp(std::move(a), {rational(1)});
    return lp.maximize(c);
}

} // namespace ksc

#endif
