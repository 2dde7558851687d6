#ifndef KSC_REALIZATION_HPP
#define KSC_REALIZATION_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "rational.hpp"
#include "scenario.hpp"

namespace ksc {

using RationalVector = std::vector<bigint>; // primitive integer representative of a ray

// Reduced row echelon basis, each row scaled to a primitive integer vector.
struct Subspace {
    std::vector<RationalVector> basis;
    int ambient = 0;

    std::size_t rank() const { return basis.size(); }
    bool operator==(const Subspace& o) const { return ambient == o.ambient && basis == o.basis; }
    bool operator<(const Subspace& o) const { return std::tie(ambient, basis) < std::tie(o.ambient, o.basis); }
};

inline RationalVector canonical_ray(RationalVector v) {
    bigint g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) fail(errc::bad_input, "zero vector");
    auto lead = std::find_if(v.begin(), v.end(), [](const bigint& x) { return x != 0; });
    if (*lead < 0) g = -g;
    for (auto& x : v) x /= g;
    return v;
}

inline bigint dot(const RationalVector& a, const RationalVector& b) {
    bigint t = 0;
    for (std::size_t k = 0; k < a.size(); ++k) t += a[k] * b[k];
    return t;
}

namespace detail {

inline std::vector<std::vector<rational>> rref(std::vector<std::vector<rational>> a, std::size_t cols) {
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t p = row;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[row], a[p]);
        rational inv = 1 / a[row][c];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][c] == 0) continue;
            rational f = a[r][c];
            for (std::size_t k = 0; k < cols; ++k) a[r][k] -= f * a[row][k];
        }
        ++row;
    }
    a.resize(row);
    return a;
}

inline RationalVector primitive(const std::vector<rational>& row) {
    bigint l = 1;
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    RationalVector v;
    for (const auto& x : row) v.push_back(bigint(x * l));
    return canonical_ray(v);
}

} // namespace detail

inline Subspace span(const std::vector<RationalVector>& rows, int ambient) {
    std::vector<std::vector<rational>> a;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != ambient) fail(errc::dimension_mismatch, "vector of the wrong dimension");
        a.emplace_back(r.begin(), r.end());
    }
    Subspace s;
    s.ambient = ambient;
    for (const auto& r : detail::rref(std::move(a), static_cast<std::size_t>(ambient))) s.basis.push_back(detail::primitive(r));
    return s;
}

inline Subspace ray(const RationalVector& v) { return span({v}, static_cast<int>(v.size())); }

inline Subspace orthogonal_complement(const Subspace& s) {
    const auto n = static_cast<std::size_t>(s.ambient);
    std::vector<std::vector<rational>> a;
    for (const auto& r : s.basis) a.emplace_back(r.begin(), r.end());
    a = detail::rref(std::move(a), n);
    std::vector<int> pivot_of(n, -1);
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (a[r][c] != 0) {
                pivot_of[c] = static_cast<int>(r);
                break;
            }
    std::vector<RationalVector> null;
    for (std::size_t f = 0; f < n; ++f) {
        if (pivot_of[f] >= 0) continue;
        std::vector<rational> x(n, 0);
        x[f] = 1;
        for (std::size_t c = 0; c < n; ++c)
            if (pivot_of[c] >= 0) x[c] = -a[pivot_of[c]][f];
        null.push_back(detail::primitive(x));
    }
    return span(null, s.ambient);
}

inline bool orthogonal(const Subspace& a, const Subspace& b) {
    for (const auto& x : a.basis)
        for (const auto& y : b.basis)
            if (dot(x, y) != 0) return false;
    return true;
}

inline Subspace join(const std::vector<const Subspace*>& parts, int ambient) {
    std::vector<RationalVector> rows;
    for (const auto* p : parts) rows.insert(rows.end(), p->basis.begin(), p->basis.end());
    return span(rows, ambient);
}

// Vertex i of the matching graph is realized by spaces[i]; labels are sorted.
struct Realisation {
    int d = 0;
    std::vector<std::string> labels;
    std::vector<Subspace> spaces;
};

// Edge iff the subspaces are orthogonal. Rejects repeated subspaces.
inline OrthoGraph graph_of(const Realisation& r) {
    for (std::size_t i = 0; i < r.spaces.size(); ++i)
        for (std::size_t j = i + 1; j < r.spaces.size(); ++j)
            if (r.spaces[i] == r.spaces[j])
                fail(errc::duplicate_ray, "'" + r.labels[i] + "' and '" + r.labels[j] + "' are the same subspace");
    OrthoGraph g;
    g.labels = r.labels;
    g.adj.assign(r.labels.size(), std::vector<char>(r.labels.size(), 0));
    for (std::size_t i = 0; i < r.spaces.size(); ++i)
        for (std::size_t j = i + 1; j < r.spaces.size(); ++j)
            if (orthogonal(r.spaces[i], r.spaces[j])) g.adj[i][j] = g.adj[j][i] = 1;
    return g;
}

inline Realisation make_realisation(const std::map<std::string, Subspace>& spaces, int d) {
    Realisation r;
    r.d = d;
    for (const auto& [l, s] : spaces) {
        if (s.ambient != d) fail(errc::dimension_mismatch, "subspace '" + l + "' has the wrong ambient dimension");
        if (s.rank() == 0) fail(errc::bad_input, "subspace '" + l + "' is zero");
        r.labels.push_back(l);
        r.spaces.push_back(s);
    }
    return r;
}

inline std::pair<OrthoGraph, Realisation> graph_from_vectors(const std::map<std::string, RationalVector>& vectors) {
    if (vectors.empty()) fail(errc::bad_input, "no vectors");
    const int d = static_cast<int>(vectors.begin()->second.size());
    std::map<std::string, Subspace> spaces;
    for (const auto& [l, v] : vectors) {
        if (static_cast<int>(v.size()) != d) fail(errc::dimension_mismatch, "vector '" + l + "' has the wrong dimension");
        spaces.emplace(l, ray(v));
    }
    Realisation r = make_realisation(spaces, d);
    return {graph_of(r), r};
}

inline std::size_t clique_rank(const Realisation& r, const VertexSet& c) {
    std::size_t t = 0;
    for (int v : c) t += r.spaces[v].rank();
    return t;
}

inline bool is_unital(const Realisation& r, const std::vector<VertexSet>& cliques) {
    for (const auto& c : cliques) {
        for (std::size_t a = 0; a < c.size(); ++a)
            for (std::size_t b = a + 1; b < c.size(); ++b)
                if (!orthogonal(r.spaces[c[a]], r.spaces[c[b]])) return false;
        if (clique_rank(r, c) != static_cast<std::size_t>(r.d)) return false;
    }
    return true;
}

inline std::string completion_label(const OrthoGraph& g, const VertexSet& c) {
    std::vector<std::string> l;
    for (int v : c) l.push_back(g.labels[v]);
    std::sort(l.begin(), l.end());
    std::string out = "cmpl:";
    for (std::size_t k = 0; k < l.size(); ++k) out += (k ? "," : "") + l[k];
    return out;
}

inline Subspace clique_complement(const Realisation& r, const VertexSet& c) {
    std::vector<const Subspace*> parts;
    for (int v : c) parts.push_back(&r.spaces[v]);
    return orthogonal_complement(join(parts, r.d));
}

struct Completion {
    OrthoGraph graph;
    Realisation realisation;
    std::vector<VertexSet> contexts;                     // maximal cliques of the completed graph
    std::map<std::string, std::vector<std::string>> aliases; // complement vertex -> labels of every clique producing it
    int rounds = 0;
};

inline constexpr int default_completion_rounds = 64;

// Adjoins clique complements until every maximal clique resolves the identity.
inline Completion complete(const Realisation& r0, int max_rounds = default_completion_rounds) {
    Completion out;
    std::map<std::string, Subspace> spaces;
    for (std::size_t v = 0; v < r0.labels.size(); ++v) spaces.emplace(r0.labels[v], r0.spaces[v]);
    Realisation r = r0;
    OrthoGraph g = graph_of(r);
    while (true) {
        auto cliques = maximal_cliques(g);
        std::map<Subspace, std::string> existing;
        for (std::size_t v = 0; v < r.spaces.size(); ++v) existing.emplace(r.spaces[v], r.labels[v]);
        bool added = false;
        for (const auto& c : cliques) {
            if (clique_rank(r, c) == static_cast<std::size_t>(r.d)) continue;
            Subspace comp = clique_complement(r, c);
            std::string label = completion_label(g, c);
            auto it = existing.find(comp);
            if (it == existing.end()) {
                it = existing.emplace(comp, label).first;
                spaces.emplace(label, comp);
                added = true;
            }
            out.aliases[it->second].push_back(label);
        }
        if (!added) {
            out.contexts = cliques;
            break;
        }
        if (++out.rounds > max_rounds) fail(errc::non_closing, "completion did not close");
        r = make_realisation(spaces, r0.d);
        g = graph_of(r);
    }
    out.graph = g;
    out.realisation = r;
    return out;
}

struct FreeCompletionCheck {
    bool ok = true;
    std::vector<std::string> clique_a, clique_b; // two deficient cliques sharing a complement
    std::string vertex;                          // or a vertex outside clique_a orthogonal to its complement
};

inline FreeCompletionCheck is_freely_completable(const OrthoGraph& g, const Realisation& r) {
    FreeCompletionCheck out;
    std::vector<VertexSet> deficient;
    std::vector<Subspace> comp;
    for (const auto& c : maximal_cliques(g))
        if (clique_rank(r, c) < static_cast<std::size_t>(r.d)) deficient.push_back(c), comp.push_back(clique_complement(r, c));
    auto names = [&](const VertexSet& c) {
        std::vector<std::string> l;
        for (int v : c) l.push_back(g.labels[v]);
        return l;
    };
    for (std::size_t a = 0; a < deficient.size(); ++a) {
        for (std::size_t b = a + 1; b < deficient.size(); ++b)
            if (comp[a] == comp[b]) {
                out.ok = false;
                out.clique_a = names(deficient[a]);
                out.clique_b = names(deficient[b]);
                return out;
            }
        for (std::size_t v = 0; v < g.size(); ++v)
            if (!std::binary_search(deficient[a].begin(), deficient[a].end(), static_cast<int>(v)) &&
                orthogonal(comp[a], r.spaces[v])) {
                out.ok = false;
                out.clique_a = names(deficient[a]);
                out.vertex = g.labels[v];
                return out;
            }
    }
    return out;
}

// Specker's principle: pairwise compatible triples are jointly compatible.
inline bool check_specker(const Scenario& s) {
    OrthoGraph g = compatibility_graph(s);
    const int n = static_cast<int>(g.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (!g.adjacent(a, b)) continue;
            for (int c = b + 1; c < n; ++c) {
                if (!g.adjacent(a, c) || !g.adjacent(b, c)) continue;
                bool inside = std::any_of(s.contexts.begin(), s.contexts.end(), [&](const std::vector<int>& k) {
                    return std::binary_search(k.begin(), k.end(), a) && std::binary_search(k.begin(), k.end(), b) &&
                           std::binary_search(k.begin(), k.end(), c);
                });
                if (!inside) return false;
            }
        }
    return true;
}

// A scenario whose contexts are the given cliques, all atoms of dimension one.
inline Scenario scenario_from_cliques(const OrthoGraph& g, const std::vector<VertexSet>& cliques) {
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> ctx;
    std::vector<char> used(g.size(), 0);
    for (const auto& c : cliques) {
        std::vector<std::string> l;
        for (int v : c) l.push_back(g.labels[v]), used[v] = 1;
        ctx.push_back(l);
    }
    for (std::size_t v = 0; v < g.size(); ++v)
        if (used[v]) atoms.push_back(g.labels[v]);
    return make_scenario(atoms, ctx);
}

} // namespace ksc

#endif
