#ifndef KSC_GRAPH_HPP
#define KSC_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace ksc {

// Vertex indices follow the sorted label order, so index order is label order.
struct OrthoGraph {
    std::vector<std::string> labels;
    std::vector<std::vector<char>> adj;

    std::size_t size() const { return labels.size(); }
    bool adjacent(int u, int v) const { return adj[u][v] != 0; }

    int index(const std::string& label) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), label);
        if (it == labels.end() || *it != label) return -1;
        return static_cast<int>(it - labels.begin());
    }

    int at(const std::string& label) const {
        int i = index(label);
        if (i < 0) fail(errc::bad_input, "unknown vertex '" + label + "'");
        return i;
    }

    std::vector<int> neighbours(int v) const {
        std::vector<int> out;
        for (int u = 0; u < static_cast<int>(size()); ++u)
            if (adj[v][u]) out.push_back(u);
        return out;
    }

    int degree(int v) const {
        int k = 0;
        for (char c : adj[v]) k += c;
        return k;
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < static_cast<int>(size()); ++u)
            for (int v = u + 1; v < static_cast<int>(size()); ++v)
                if (adj[u][v]) out.emplace_back(u, v);
        return out;
    }
};

using VertexSet = std::vector<int>; // sorted vertex indices
using Colouring = std::vector<int>; // colour per vertex
using Valuation = VertexSet;        // chosen vertices

inline OrthoGraph make_graph(std::vector<std::string> labels,
                             const std::vector<std::pair<std::string, std::string>>& edges) {
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
        fail(errc::bad_input, "duplicate vertex label");
    OrthoGraph g;
    g.labels = std::move(labels);
    g.adj.assign(g.size(), std::vector<char>(g.size(), 0));
    for (const auto& [a, b] : edges) {
        int u = g.at(a), v = g.at(b);
        if (u == v) fail(errc::bad_input, "self-loop at '" + a + "'");
        if (g.adj[u][v]) fail(errc::bad_input, "repeated edge " + a + "-" + b);
        g.adj[u][v] = g.adj[v][u] = 1;
    }
    return g;
}

inline bool is_clique(const OrthoGraph& g, const VertexSet& c) {
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (!g.adjacent(c[i], c[j])) return false;
    return true;
}

inline bool is_independent(const OrthoGraph& g, const VertexSet& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (g.adjacent(s[i], s[j])) return false;
    return true;
}

namespace detail {

inline void bron_kerbosch(const OrthoGraph& g, VertexSet& r, std::vector<int> p, std::vector<int> x,
                          std::vector<VertexSet>& out) {
    if (p.empty() && x.empty()) {
        VertexSet c = r;
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
        return;
    }
    // Tomita pivot: the vertex of P u X with most neighbours in P.
    int pivot = -1, best = -1;
    for (const auto* set : {&p, &x})
        for (int u : *set) {
            int k = 0;
            for (int v : p) k += g.adjacent(u, v);
            if (k > best) best = k, pivot = u;
        }
    std::vector<int> candidates;
    for (int v : p)
        if (!g.adjacent(pivot, v)) candidates.push_back(v);
    for (int v : candidates) {
        std::vector<int> np, nx;
        for (int u : p)
            if (g.adjacent(u, v)) np.push_back(u);
        for (int u : x)
            if (g.adjacent(u, v)) nx.push_back(u);
        r.push_back(v);
        bron_kerbosch(g, r, std::move(np), std::move(nx), out);
        r.pop_back();
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

} // namespace detail

// All inclusion-maximal cliques, each sorted, listed in lexicographic order.
inline std::vector<VertexSet> maximal_cliques(const OrthoGraph& g) {
    std::vector<VertexSet> out;
    if (g.size() == 0) return out;
    VertexSet r;
    std::vector<int> p(g.size());
    for (int i = 0; i < static_cast<int>(g.size()); ++i) p[i] = i;
    detail::bron_kerbosch(g, r, p, {}, out);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t clique_number(const OrthoGraph& g) {
    std::size_t w = 0;
    for (const auto& c : maximal_cliques(g)) w = std::max(w, c.size());
    return w;
}

// Lex-BFS ordering followed by a perfect-elimination check.
inline bool is_chordal(const OrthoGraph& g) {
    const int n = static_cast<int>(g.size());
    std::vector<std::vector<int>> label(n);
    std::vector<char> done(n, 0);
    std::vector<int> visit;
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v)
            if (!done[v] && (pick < 0 || label[v] > label[pick])) pick = v;
        done[pick] = 1;
        visit.push_back(pick);
        for (int u = 0; u < n; ++u)
            if (!done[u] && g.adjacent(pick, u)) label[u].push_back(n - step);
    }
    // Elimination order is the reverse of the visit order.
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[visit[n - 1 - i]] = i;
    for (int v = 0; v < n; ++v) {
        int parent = -1;
        std::vector<int> later;
        for (int u = 0; u < n; ++u)
            if (g.adjacent(v, u) && pos[u] > pos[v]) {
                later.push_back(u);
                if (parent < 0 || pos[u] < pos[parent]) parent = u;
            }
        for (int u : later)
            if (u != parent && !g.adjacent(parent, u)) return false;
    }
    return true;
}

inline bool is_proper_colouring(const OrthoGraph& g, const Colouring& col) {
    if (col.size() != g.size()) return false;
    for (int c : col)
        if (c < 0) return false;
    for (auto [u, v] : g.edges())
        if (col[u] == col[v]) return false;
    return true;
}

struct ChromaticResult {
    int chi = 0;
    Colouring colouring;
};

// Exact chromatic number: DSATUR branch and bound seeded with a maximum clique.
inline ChromaticResult chromatic_number(const OrthoGraph& g) {
    const int n = static_cast<int>(g.size());
    if (n == 0) fail(errc::bad_input, "chromatic number of an empty graph");
    VertexSet seed;
    for (const auto& c : maximal_cliques(g))
        if (c.size() > seed.size()) seed = c;
    const int lower = static_cast<int>(seed.size());

    Colouring col(n, -1), best_col;
    int best = n + 1;

    auto choose = [&]() {
        int pick = -1, pick_sat = -1, pick_deg = -1;
        for (int v = 0; v < n; ++v) {
            if (col[v] >= 0) continue;
            std::vector<char> seen(n, 0);
            int sat = 0, d = 0;
            for (int u = 0; u < n; ++u) {
                if (!g.adjacent(u, v)) continue;
                if (col[u] >= 0) {
                    if (!seen[col[u]]) seen[col[u]] = 1, ++sat;
                } else {
                    ++d;
                }
            }
            if (sat > pick_sat || (sat == pick_sat && d > pick_deg)) pick = v, pick_sat = sat, pick_deg = d;
        }
        return pick;
    };

    std::function<void(int, int)> search = [&](int coloured, int used) {
        if (best == lower) return;
        if (used >= best) return;
        if (coloured == n) {
            best = used;
            best_col = col;
            return;
        }
        int v = choose();
        for (int c = 0; c <= used && c < best - 1; ++c) {
            bool ok = true;
            for (int u = 0; u < n && ok; ++u)
                if (g.adjacent(u, v) && col[u] == c) ok = false;
            if (!ok) continue;
            col[v] = c;
            search(coloured + 1, std::max(used, c + 1));
            col[v] = -1;
            if (best == lower) return;
        }
    };

    for (int i = 0; i < lower; ++i) col[seed[i]] = i;
    search(lower, lower);
    return {best, best_col};
}

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t trace = 1469598103934665603ull; // FNV-1a over branching decisions

    void record(std::uint64_t a, std::uint64_t b) {
        for (std::uint64_t x : {a, b}) {
            trace ^= x;
            trace *= 1099511628211ull;
        }
    }
};

inline void check_cliques(const OrthoGraph& g, const std::vector<VertexSet>& cliques, std::size_t d) {
    for (const auto& c : cliques) {
        if (c.size() != d)
            fail(errc::clique_size_mismatch, "clique of size " + std::to_string(c.size()) + ", expected " +
                                                 std::to_string(d));
        if (!is_clique(g, c)) fail(errc::clique_size_mismatch, "listed context is not a clique of the graph");
    }
}

inline bool is_d_colouring(const OrthoGraph& g, const std::vector<VertexSet>& cliques, int d, const Colouring& col) {
    if (!is_proper_colouring(g, col)) return false;
    for (int c : col)
        if (c >= d) return false;
    for (const auto& k : cliques) {
        std::vector<char> seen(d, 0);
        for (int v : k) seen[col[v]] = 1;
        if (std::count(seen.begin(), seen.end(), 1) != d) return false;
    }
    return true;
}

// d-colouring in which every listed clique carries all d colours. The clique
// list is authoritative; it is not recomputed from the graph.
inline std::optional<Colouring> d_colouring(const OrthoGraph& g, const std::vector<VertexSet>& cliques, int d,
                                            SearchStats* stats = nullptr) {
    if (d < 1) fail(errc::bad_input, "d must be positive");
    if (d > 64) fail(errc::too_large, "d-colouring supports d <= 64");
    check_cliques(g, cliques, static_cast<std::size_t>(d));
    const int n = static_cast<int>(g.size());
    const std::uint64_t full = d == 64 ? ~0ull : ((1ull << d) - 1);
    std::vector<std::vector<int>> nbrs(n), member(n);
    for (int v = 0; v < n; ++v) nbrs[v] = g.neighbours(v);
    for (int k = 0; k < static_cast<int>(cliques.size()); ++k)
        for (int v : cliques[k]) member[v].push_back(k);

    struct State {
        std::vector<std::uint64_t> dom;
        std::vector<int> col;
    };
    SearchStats local;
    SearchStats& st = stats ? *stats : local;

    // Assign and propagate: neighbour pruning, forced singletons, hidden singles per clique.
    auto propagate = [&](State& s, std::vector<std::pair<int, int>> queue) {
        while (!queue.empty()) {
            auto [v, c] = queue.back();
            queue.pop_back();
            if (s.col[v] >= 0) {
                if (s.col[v] != c) return false;
                continue;
            }
            if (!(s.dom[v] >> c & 1)) return false;
            s.col[v] = c;
            s.dom[v] = 1ull << c;
            for (int u : nbrs[v]) {
                if (s.col[u] >= 0) {
                    if (s.col[u] == c) return false;
                    continue;
                }
                s.dom[u] &= ~(1ull << c);
                if (s.dom[u] == 0) return false;
                if ((s.dom[u] & (s.dom[u] - 1)) == 0) queue.emplace_back(u, std::countr_zero(s.dom[u]));
            }
            if (queue.empty()) {
                for (const auto& k : cliques) {
                    std::uint64_t placed = 0;
                    for (int u : k)
                        if (s.col[u] >= 0) placed |= 1ull << s.col[u];
                    for (int c2 = 0; c2 < d; ++c2) {
                        if (placed >> c2 & 1) continue;
                        int only = -1, count = 0;
                        for (int u : k)
                            if (s.col[u] < 0 && (s.dom[u] >> c2 & 1)) only = u, ++count;
                        if (count == 0) return false;
                        if (count == 1) queue.emplace_back(only, c2);
                    }
                }
            }
        }
        return true;
    };

    State root{std::vector<std::uint64_t>(n, full), std::vector<int>(n, -1)};
    std::vector<std::pair<int, int>> init;
    if (!cliques.empty())
        for (int i = 0; i < d; ++i) init.emplace_back(cliques[0][i], i);
    if (!propagate(root, init)) return std::nullopt;

    std::optional<Colouring> found;
    std::function<void(State&)> search = [&](State& s) {
        ++st.nodes;
        int pick = -1, size = 65;
        for (int v = 0; v < n; ++v)
            if (s.col[v] < 0) {
                int k = std::popcount(s.dom[v]);
                if (k < size) size = k, pick = v;
            }
        if (pick < 0) {
            found = s.col;
            return;
        }
        for (int c = 0; c < d && !found; ++c) {
            if (!(s.dom[pick] >> c & 1)) continue;
            st.record(static_cast<std::uint64_t>(pick), static_cast<std::uint64_t>(c));
            State next = s;
            if (propagate(next, {{pick, c}})) search(next);
        }
    };
    search(root);
    return found;
}

inline bool is_valuation(const OrthoGraph& g, const std::vector<VertexSet>& cliques, const Valuation& val) {
    if (!is_independent(g, val)) return false;
    for (const auto& k : cliques) {
        int hits = 0;
        for (int v : k) hits += std::binary_search(val.begin(), val.end(), v);
        if (hits != 1) return false;
    }
    return true;
}

namespace detail {

// Backtracking over valuations; calls `emit` for each and stops when it returns false.
// Vertices outside every listed clique are never chosen.
inline void valuation_search(const OrthoGraph& g, const std::vector<VertexSet>& cliques,
                             const std::function<bool(const Valuation&)>& emit) {
    const int n = static_cast<int>(g.size());
    std::vector<std::vector<int>> member(n);
    for (int k = 0; k < static_cast<int>(cliques.size()); ++k)
        for (int v : cliques[k]) member[v].push_back(k);
    std::vector<int> state(n, 0); // 0 open, 1 chosen, -1 excluded
    std::vector<int> hit(cliques.size(), 0);
    bool stop = false;

    std::function<void()> search = [&]() {
        int pick = -1, options = n + 1;
        for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
            if (hit[k]) continue;
            int open = 0;
            for (int v : cliques[k]) open += state[v] == 0;
            if (open < options) options = open, pick = k;
        }
        if (pick < 0) {
            Valuation val;
            for (int v = 0; v < n; ++v)
                if (state[v] == 1) val.push_back(v);
            if (!emit(val)) stop = true;
            return;
        }
        if (options == 0) return;
        std::vector<int> excluded_here;
        for (int v : cliques[pick]) {
            if (state[v] != 0) continue;
            std::vector<int> changed;
            state[v] = 1;
            for (int k : member[v]) hit[k] = 1;
            for (int u = 0; u < n; ++u)
                if (state[u] == 0 && g.adjacent(u, v)) state[u] = -1, changed.push_back(u);
            for (int k : member[v])
                for (int u : cliques[k])
                    if (state[u] == 0) state[u] = -1, changed.push_back(u);
            search();
            for (int u : changed) state[u] = 0;
            for (int k : member[v]) hit[k] = 0;
            // Re-derive hits from still-chosen vertices sharing these cliques.
            for (int k : member[v])
                for (int u : cliques[k])
                    if (state[u] == 1 && u != v) hit[k] = 1;
            state[v] = -1;
            excluded_here.push_back(v);
            if (stop) break;
        }
        for (int v : excluded_here) state[v] = 0;
    };
    search();
}

} // namespace detail

inline std::optional<Valuation> ks_colouring(const OrthoGraph& g, const std::vector<VertexSet>& cliques) {
    std::optional<Valuation> out;
    detail::valuation_search(g, cliques, [&](const Valuation& v) {
        out = v;
        return false;
    });
    return out;
}

inline constexpr std::size_t default_valuation_cap = 1000000;

inline std::vector<Valuation> enumerate_valuations(const OrthoGraph& g, const std::vector<VertexSet>& cliques,
                                                   std::size_t cap = default_valuation_cap) {
    std::vector<Valuation> out;
    bool over = false;
    detail::valuation_search(g, cliques, [&](const Valuation& v) {
        if (out.size() == cap) {
            over = true;
            return false;
        }
        out.push_back(v);
        return true;
    });
    if (over) fail(errc::cap_exceeded, "more than " + std::to_string(cap) + " valuations");
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string to_dimacs(const OrthoGraph& g) {
    std::ostringstream os;
    for (std::size_t i = 0; i < g.size(); ++i) os << "c v " << i + 1 << ' ' << g.labels[i] << '\n';
    auto e = g.edges();
    os << "p edge " << g.size() << ' ' << e.size() << '\n';
    for (auto [u, v] : e) os << "e " << u + 1 << ' ' << v + 1 << '\n';
    return os.str();
}

} // namespace ksc

#endif
