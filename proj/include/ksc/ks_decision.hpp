#ifndef KSC_KS_DECISION_HPP
#define KSC_KS_DECISION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diophantine.hpp"
#include "extension.hpp"
#include "graph.hpp"
#include "scenario.hpp"

namespace ksc {

// maps[i][j][p]: position in context j of the image of the atom at position p of context i.
struct ContextConnection {
    std::vector<std::vector<std::vector<int>>> maps;
};

struct ConnectionSearch {
    std::optional<ContextConnection> connection;
    std::uint64_t nodes = 0;
    int tree_edges = 0;
    int cycle_rank = 0; // number of fundamental cycles checked
};

inline constexpr std::uint64_t default_connection_budget = 20000000;

namespace detail {

inline int unit_context_size(const Scenario& s) {
    const std::size_t d = s.d ? static_cast<std::size_t>(s.d) : s.contexts.front().size();
    for (const auto& c : s.contexts)
        if (c.size() != d) fail(errc::clique_size_mismatch, "connection search needs every context to have d atoms");
    if (s.has_dim() && !s.is_maximal()) fail(errc::clique_size_mismatch, "connection search needs unit atoms");
    return static_cast<int>(d);
}

inline bool preserves_blocks(const Overlap& ov, const std::vector<int>& col_i, const std::vector<int>& col_j) {
    for (std::size_t k = 0; k < ov.left.size(); ++k) {
        std::uint64_t a = 0, b = 0;
        for (std::size_t p = 0; p < col_i.size(); ++p)
            if (ov.left[k] >> p & 1) a |= 1ull << col_i[p];
        for (std::size_t q = 0; q < col_j.size(); ++q)
            if (ov.right[k] >> q & 1) b |= 1ull << col_j[q];
        if (a != b) return false;
    }
    return true;
}

inline ContextConnection connection_from_labels(const std::vector<std::vector<int>>& col) {
    const std::size_t m = col.size();
    ContextConnection conn;
    conn.maps.assign(m, std::vector<std::vector<int>>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            std::vector<int> where(col[j].size());
            for (std::size_t q = 0; q < col[j].size(); ++q) where[col[j][q]] = static_cast<int>(q);
            auto& map = conn.maps[i][j];
            for (int c : col[i]) map.push_back(where[c]);
        }
    return conn;
}

} // namespace detail

// Searches for a flat connection on the contexts of a maximal scenario. Contexts are
// gauged along a spanning tree of the nontrivial-overlap graph: a tree edge may permute
// atoms only within the blocks of the shared subalgebra. Every non-tree edge is then a
// fundamental cycle, flat iff the composed map still preserves that edge's blocks.
inline ConnectionSearch flat_connection_search(const ContextCategory& cc,
                                               std::uint64_t budget = default_connection_budget) {
    const Scenario& s = cc.scenario;
    const int d = detail::unit_context_size(s);
    if (d > 64) fail(errc::too_large, "connection search supports d <= 64");
    const int m = s.num_contexts();
    auto linked = [&](int i, int j) { return !s.overlap[i][j].trivial(); };

    std::vector<int> order, parent(m, -1);
    std::vector<char> seen(m, 0);
    ConnectionSearch out;
    int components = 0;
    for (int r = 0; r < m; ++r) {
        if (seen[r]) continue;
        ++components;
        seen[r] = 1;
        std::vector<int> queue{r};
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int i = queue[h];
            order.push_back(i);
            for (int j = 0; j < m; ++j)
                if (!seen[j] && linked(i, j)) seen[j] = 1, parent[j] = i, queue.push_back(j);
        }
    }
    int edges = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) edges += linked(i, j);
    out.tree_edges = m - components;
    out.cycle_rank = edges - out.tree_edges;

    std::vector<int> rank(m);
    for (int k = 0; k < m; ++k) rank[order[k]] = k;
    std::vector<std::vector<int>> col(m);
    bool done = false;

    std::function<void(int)> place = [&](int k) {
        if (k == m) {
            done = true;
            return;
        }
        const int i = order[k];
        if (parent[i] < 0) {
            col[i].resize(d);
            for (int p = 0; p < d; ++p) col[i][p] = p;
            place(k + 1);
            return;
        }
        const int par = parent[i];
        const auto& ov = s.overlap[par][i];
        // colours allowed at each position of context i
        std::vector<std::uint64_t> allowed(d, 0);
        for (std::size_t b = 0; b < ov.left.size(); ++b) {
            std::uint64_t cs = 0;
            for (int p = 0; p < d; ++p)
                if (ov.left[b] >> p & 1) cs |= 1ull << col[par][p];
            for (int q = 0; q < d; ++q)
                if (ov.right[b] >> q & 1) allowed[q] = cs;
        }
        col[i].assign(d, -1);
        std::uint64_t used = 0;
        std::function<void(int)> assign = [&](int q) {
            if (done) return;
            if (++out.nodes > budget) fail(errc::too_large, "connection search exceeded its node budget");
            if (q == d) {
                for (int j = 0; j < m; ++j)
                    if (j != par && rank[j] < k && linked(j, i) && !detail::preserves_blocks(s.overlap[j][i], col[j], col[i]))
                        return;
                place(k + 1);
                return;
            }
            for (int c = 0; c < d && !done; ++c) {
                if (!(allowed[q] >> c & 1) || (used >> c & 1)) continue;
                col[i][q] = c;
                used |= 1ull << c;
                assign(q + 1);
                used &= ~(1ull << c);
            }
        };
        assign(0);
    };
    place(0);
    if (done) out.connection = detail::connection_from_labels(col);
    return out;
}

inline bool is_permutation_map(const std::vector<int>& map, std::size_t n) {
    if (map.size() != n) return false;
    std::vector<char> hit(n, 0);
    for (int x : map) {
        if (x < 0 || static_cast<std::size_t>(x) >= n || hit[x]) return false;
        hit[x] = 1;
    }
    return true;
}

// Replays the defining invariants: bijections, inverse symmetry, identity on every
// shared subalgebra, and trivial holonomy around every triangle of contexts (which,
// with maps on all pairs, gives trivial holonomy around every cycle).
inline bool verify_connection(const Scenario& s, const ContextConnection& conn) {
    const int m = s.num_contexts();
    if (static_cast<int>(conn.maps.size()) != m) return false;
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(conn.maps[i].size()) != m) return false;
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const auto& f = conn.maps[i][j];
            if (s.contexts[i].size() != s.contexts[j].size() || !is_permutation_map(f, s.contexts[j].size()))
                return false;
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const auto &f = conn.maps[i][j], &g = conn.maps[j][i];
            for (std::size_t p = 0; p < f.size(); ++p)
                if (g[f[p]] != static_cast<int>(p)) return false;
            const auto& ov = s.overlap[i][j];
            for (std::size_t b = 0; b < ov.left.size(); ++b) {
                Mask image = 0;
                for (std::size_t p = 0; p < f.size(); ++p)
                    if (ov.left[b] >> p & 1) image |= Mask{1} << f[p];
                if (image != ov.right[b]) return false;
            }
            // shared atoms are fixed
            for (std::size_t p = 0; p < f.size(); ++p)
                if (s.position(j, s.contexts[i][p]) >= 0 && s.contexts[j][f[p]] != s.contexts[i][p]) return false;
        }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                if (i == j || j == k || i == k) continue;
                const auto &f = conn.maps[i][j], &g = conn.maps[j][k], &h = conn.maps[i][k];
                for (std::size_t p = 0; p < f.size(); ++p)
                    if (g[f[p]] != h[p]) return false;
            }
    return true;
}

// Test-mode check: holonomy around every simple cycle of the nontrivial-overlap graph.
inline bool verify_connection_cycles(const Scenario& s, const ContextConnection& conn) {
    const int m = s.num_contexts();
    if (m > 10) fail(errc::too_large, "simple-cycle enumeration limited to 10 contexts");
    bool ok = true;
    std::vector<int> path;
    std::vector<char> on(m, 0);
    std::function<void(int, int)> walk = [&](int start, int v) {
        for (int w = start; w < m && ok; ++w) {
            if (w == v || s.overlap[v][w].trivial()) continue;
            if (w == start && path.size() >= 3) {
                std::vector<int> x(s.contexts[start].size());
                for (std::size_t p = 0; p < x.size(); ++p) x[p] = static_cast<int>(p);
                for (std::size_t t = 0; t < path.size(); ++t) {
                    int a = path[t], b = path[(t + 1) % path.size()];
                    for (auto& p : x) p = conn.maps[a][b][p];
                }
                for (std::size_t p = 0; p < x.size(); ++p)
                    if (x[p] != static_cast<int>(p)) ok = false;
                continue;
            }
            if (on[w] || w < start) continue;
            on[w] = 1;
            path.push_back(w);
            walk(start, w);
            path.pop_back();
            on[w] = 0;
        }
    };
    for (int st = 0; st < m && ok; ++st) {
        path = {st};
        on.assign(m, 0);
        on[st] = 1;
        walk(st, st);
    }
    return ok;
}

// The connection sending each atom to the atom of the same colour.
inline std::optional<ContextConnection> connection_from_colouring(const Scenario& s, const Colouring& col) {
    std::vector<std::vector<int>> labels(s.num_contexts());
    for (int i = 0; i < s.num_contexts(); ++i) {
        for (int a : s.contexts[i]) labels[i].push_back(col.at(a));
        if (!is_permutation_map(labels[i], labels[i].size())) return std::nullopt;
    }
    return detail::connection_from_labels(labels);
}

// Colours each atom by the position in the first context of its image; nullopt if the
// result is not consistent on shared atoms.
inline std::optional<Colouring> colouring_from_connection(const Scenario& s, const ContextConnection& conn) {
    Colouring col(s.atoms.size(), -1);
    for (int i = 0; i < s.num_contexts(); ++i)
        for (std::size_t q = 0; q < s.contexts[i].size(); ++q) {
            int c = i == 0 ? static_cast<int>(q) : conn.maps[i][0][q];
            int a = s.contexts[i][q];
            if (col[a] >= 0 && col[a] != c) return std::nullopt;
            col[a] = c;
        }
    return col;
}

struct KsVerdict {
    bool contextual = false;
    long d = 0;
    ExtendedScenario ext;
    std::optional<Colouring> colouring; // d-colouring of G*, when noncontextual
    SearchStats stats;                   // exhaustive-search certificate, when contextual
};

inline KsVerdict is_ks_contextual(const Scenario& s) {
    KsVerdict v;
    v.ext = maximal_extension(ensure_dims(s));
    v.d = v.ext.extended.d;
    OrthoGraph g = extended_graph(v.ext);
    v.colouring = d_colouring(g, v.ext.extended.contexts, static_cast<int>(v.d), &v.stats);
    v.contextual = !v.colouring.has_value();
    return v;
}

inline bool verify_verdict(const KsVerdict& v) {
    if (v.contextual) return !v.colouring.has_value();
    if (!v.colouring) return false;
    return is_d_colouring(extended_graph(v.ext), v.ext.extended.contexts, static_cast<int>(v.d), *v.colouring);
}

enum class Classicality { fully_classical, ks_noncontextual_nonclassical, ks_contextual };

inline const char* classicality_name(Classicality c) {
    switch (c) {
    case Classicality::fully_classical: return "FULLY_CLASSICAL";
    case Classicality::ks_noncontextual_nonclassical: return "KS_NONCONTEXTUAL_WITH_NONCLASSICAL_CORRELATIONS";
    case Classicality::ks_contextual: return "KS_CONTEXTUAL";
    }
    return "?";
}

struct ClassicalityReport {
    Classicality label = Classicality::ks_contextual;
    bool acyclic = false;
    bool vorobev = false; // every no-disturbance state is classical
    int chi_Gstar = 0;
    long d = 0;
    KsVerdict verdict;
};

inline ClassicalityReport classify(const Scenario& s) {
    ClassicalityReport r;
    r.verdict = is_ks_contextual(s);
    r.d = r.verdict.d;
    r.acyclic = is_acyclic(build_context_category(s));
    r.vorobev = r.acyclic;
    r.chi_Gstar = chromatic_number(extended_graph(r.verdict.ext)).chi;
    if (r.verdict.contextual)
        r.label = Classicality::ks_contextual;
    else
        r.label = r.acyclic ? Classicality::fully_classical : Classicality::ks_noncontextual_nonclassical;
    return r;
}

} // namespace ksc

#endif
