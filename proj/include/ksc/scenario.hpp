#ifndef KSC_SCENARIO_HPP
#define KSC_SCENARIO_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace ksc {

using Mask = std::uint64_t; // subset of a context, by local atom position
using EventKey = std::vector<int>; // sorted global atom ids

// C_i and C_j seen from both sides: left[k] in C_i and right[k] in C_j are the same event.
struct Overlap {
    std::vector<Mask> left, right;
    bool trivial() const { return left.size() <= 1; }
};

struct Scenario {
    std::vector<std::string> atoms;                            // sorted labels
    std::vector<std::vector<int>> contexts;                    // sorted atom ids, contexts sorted
    std::map<std::string, std::vector<EventKey>> events;       // declared coarse events
    std::vector<long> dim;                                // per atom, empty if absent
    long d = 0;                                           // 0 if unknown

    std::vector<std::vector<Overlap>> overlap;                 // derived, [i][j]
    std::vector<std::vector<int>> atom_contexts;               // derived

    int num_contexts() const { return static_cast<int>(contexts.size()); }
    bool has_dim() const { return !dim.empty(); }
    Mask full(int i) const {
        int k = static_cast<int>(contexts[i].size());
        return k == 64 ? ~Mask{0} : ((Mask{1} << k) - 1);
    }
    int position(int i, int atom) const {
        const auto& c = contexts[i];
        auto it = std::lower_bound(c.begin(), c.end(), atom);
        return (it != c.end() && *it == atom) ? static_cast<int>(it - c.begin()) : -1;
    }
    int atom_index(const std::string& label) const {
        auto it = std::lower_bound(atoms.begin(), atoms.end(), label);
        if (it == atoms.end() || *it != label) return -1;
        return static_cast<int>(it - atoms.begin());
    }
    EventKey key_of(int i, Mask m) const {
        EventKey k;
        for (int p = 0; p < static_cast<int>(contexts[i].size()); ++p)
            if (m >> p & 1) k.push_back(contexts[i][p]);
        return k;
    }
    std::optional<Mask> mask_of(int i, const EventKey& key) const {
        Mask m = 0;
        for (int a : key) {
            int p = position(i, a);
            if (p < 0) return std::nullopt;
            m |= Mask{1} << p;
        }
        return m;
    }
    bool is_maximal() const {
        if (!has_dim()) return false;
        return std::all_of(dim.begin(), dim.end(), [](long x) { return x == 1; });
    }
};

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    int add() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a), b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

// Is `m` a union of the given blocks? If so, return the union of the paired blocks.
inline std::optional<Mask> carry(Mask m, const std::vector<Mask>& from, const std::vector<Mask>& to) {
    Mask out = 0;
    for (std::size_t k = 0; k < from.size(); ++k) {
        Mask x = m & from[k];
        if (x == from[k])
            out |= to[k];
        else if (x != 0)
            return std::nullopt;
    }
    return out;
}

// Identify events across contexts until stable and record the pairwise overlap algebras.
inline void close_events(Scenario& s) {
    const int m = s.num_contexts();
    std::map<EventKey, int> id_of;
    std::vector<EventKey> keys;
    UnionFind uf;
    bool changed = false;
    auto reg = [&](const EventKey& k) {
        auto it = id_of.find(k);
        if (it != id_of.end()) return it->second;
        int id = uf.add();
        id_of.emplace(k, id);
        keys.push_back(k);
        changed = true;
        return id;
    };
    auto unite = [&](int a, int b) {
        if (uf.unite(a, b)) changed = true;
    };

    int identity = reg(s.contexts[0]);
    for (int i = 0; i < m; ++i) {
        unite(identity, reg(s.contexts[i]));
        for (int a : s.contexts[i]) reg({a});
    }
    for (const auto& [name, decomps] : s.events) {
        int first = reg(decomps.front());
        for (const auto& dk : decomps) unite(first, reg(dk));
    }

    auto classes_in = [&](std::vector<std::map<int, Mask>>& cls) {
        cls.assign(m, {});
        for (std::size_t id = 0; id < keys.size(); ++id) {
            const EventKey& k = keys[id];
            std::vector<int> where = s.atom_contexts[k.front()];
            for (int i : where) {
                auto mk = s.mask_of(i, k);
                if (!mk) continue;
                int root = uf.find(static_cast<int>(id));
                auto [it, fresh] = cls[i].emplace(root, *mk);
                if (!fresh && it->second != *mk)
                    fail(errc::malformed_scenario, "two distinct events of one context are identified");
            }
        }
    };

    auto match = [&](const std::vector<std::map<int, Mask>>& cls, int i, int j) {
        std::vector<Mask> shared_i, shared_j;
        for (const auto& [root, mi] : cls[i]) {
            auto it = cls[j].find(root);
            if (it != cls[j].end()) shared_i.push_back(mi), shared_j.push_back(it->second);
        }
        auto blocks = [&](int c, const std::vector<Mask>& shared) {
            std::map<std::vector<char>, Mask> by_sig;
            for (int p = 0; p < static_cast<int>(s.contexts[c].size()); ++p) {
                std::vector<char> sig(shared.size());
                for (std::size_t k = 0; k < shared.size(); ++k) sig[k] = (shared[k] >> p) & 1;
                by_sig[sig] |= Mask{1} << p;
            }
            return by_sig;
        };
        auto bi = blocks(i, shared_i), bj = blocks(j, shared_j);
        Overlap ov;
        for (const auto& [sig, mi] : bi) {
            auto it = bj.find(sig);
            if (it == bj.end())
                fail(errc::malformed_scenario, "shared events of two contexts are related inconsistently");
            ov.left.push_back(mi);
            ov.right.push_back(it->second);
        }
        if (bi.size() != bj.size())
            fail(errc::malformed_scenario, "shared events of two contexts are related inconsistently");
        return ov;
    };

    std::vector<std::map<int, Mask>> cls;
    do {
        changed = false;
        classes_in(cls);
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                Overlap ov = match(cls, i, j);
                for (std::size_t k = 0; k < ov.left.size(); ++k)
                    unite(reg(s.key_of(i, ov.left[k])), reg(s.key_of(j, ov.right[k])));
                for (const auto& [root, mi] : cls[i])
                    if (auto mj = carry(mi, ov.left, ov.right)) unite(root, reg(s.key_of(j, *mj)));
                for (const auto& [root, mj] : cls[j])
                    if (auto mi = carry(mj, ov.right, ov.left)) unite(root, reg(s.key_of(i, *mi)));
            }
    } while (changed);

    classes_in(cls);
    s.overlap.assign(m, std::vector<Overlap>(m));
    for (int i = 0; i < m; ++i) {
        for (int p = 0; p < static_cast<int>(s.contexts[i].size()); ++p) {
            s.overlap[i][i].left.push_back(Mask{1} << p);
            s.overlap[i][i].right.push_back(Mask{1} << p);
        }
        for (int j = i + 1; j < m; ++j) {
            Overlap ov = match(cls, i, j);
            s.overlap[i][j] = ov;
            s.overlap[j][i] = Overlap{ov.right, ov.left};
        }
    }
}

} // namespace detail

// Validates and canonicalizes a scenario; events and dims are keyed by labels.
inline Scenario make_scenario(std::vector<std::string> atoms, const std::vector<std::vector<std::string>>& contexts,
                              const std::map<std::string, std::vector<std::vector<std::string>>>& events = {},
                              const std::map<std::string, long>& dim = {}, long d = 0) {
    Scenario s;
    std::sort(atoms.begin(), atoms.end());
    if (std::adjacent_find(atoms.begin(), atoms.end()) != atoms.end())
        fail(errc::malformed_scenario, "duplicate atom label");
    for (const auto& a : atoms)
        if (a.empty()) fail(errc::malformed_scenario, "empty atom label");
    s.atoms = std::move(atoms);
    auto idx = [&](const std::string& a) {
        int i = s.atom_index(a);
        if (i < 0) fail(errc::malformed_scenario, "unknown atom '" + a + "'");
        return i;
    };
    auto to_ids = [&](const std::vector<std::string>& labels, const char* what) {
        std::vector<int> ids;
        for (const auto& a : labels) ids.push_back(idx(a));
        std::sort(ids.begin(), ids.end());
        if (ids.empty()) fail(errc::malformed_scenario, std::string("empty ") + what);
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            fail(errc::malformed_scenario, std::string("repeated atom in ") + what);
        return ids;
    };
    for (const auto& c : contexts) {
        auto ids = to_ids(c, "context");
        if (ids.size() > 64) fail(errc::too_large, "contexts are limited to 64 atoms");
        s.contexts.push_back(std::move(ids));
    }
    if (s.contexts.empty()) fail(errc::malformed_scenario, "no maximal contexts");
    std::sort(s.contexts.begin(), s.contexts.end());
    s.atom_contexts.assign(s.atoms.size(), {});
    for (int i = 0; i < s.num_contexts(); ++i)
        for (int a : s.contexts[i]) s.atom_contexts[a].push_back(i);
    for (std::size_t a = 0; a < s.atoms.size(); ++a)
        if (s.atom_contexts[a].empty())
            fail(errc::malformed_scenario, "atom '" + s.atoms[a] + "' lies in no maximal context");
    for (int i = 0; i < s.num_contexts(); ++i)
        for (int j = 0; j < s.num_contexts(); ++j)
            if (i != j && std::includes(s.contexts[j].begin(), s.contexts[j].end(), s.contexts[i].begin(),
                                        s.contexts[i].end()))
                fail(errc::malformed_scenario, "maximal contexts do not form an antichain");

    for (const auto& [name, decomps] : events) {
        if (s.atom_index(name) >= 0) fail(errc::malformed_scenario, "event name '" + name + "' is an atom label");
        if (decomps.empty()) fail(errc::malformed_scenario, "event '" + name + "' has no decomposition");
        std::vector<EventKey> keys;
        for (const auto& dcmp : decomps) {
            EventKey k = to_ids(dcmp, "event decomposition");
            bool inside = false;
            for (int i : s.atom_contexts[k.front()]) {
                auto mk = s.mask_of(i, k);
                if (!mk) continue;
                if (*mk == s.full(i)) fail(errc::malformed_scenario, "event '" + name + "' is the identity");
                inside = true;
            }
            if (!inside) fail(errc::malformed_scenario, "event '" + name + "' is not inside one context");
            keys.push_back(std::move(k));
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        s.events.emplace(name, std::move(keys));
    }

    if (!dim.empty()) {
        s.dim.assign(s.atoms.size(), 0);
        for (const auto& [a, v] : dim) {
            if (v < 1) fail(errc::malformed_scenario, "dimension of '" + a + "' must be positive");
            s.dim[idx(a)] = v;
        }
        for (std::size_t a = 0; a < s.atoms.size(); ++a)
            if (s.dim[a] == 0) fail(errc::malformed_scenario, "missing dimension for '" + s.atoms[a] + "'");
    }
    s.d = d;
    detail::close_events(s);

    for (int i = 0; i < s.num_contexts(); ++i)
        for (int j = 0; j < s.num_contexts(); ++j)
            if (i != j && s.overlap[i][j].left.size() == s.contexts[i].size())
                fail(errc::malformed_scenario, "a maximal context is contained in another");

    if (s.has_dim()) {
        auto sum = [&](int i, Mask mk) {
            long t = 0;
            for (int p = 0; p < static_cast<int>(s.contexts[i].size()); ++p)
                if (mk >> p & 1) t += s.dim[s.contexts[i][p]];
            return t;
        };
        if (s.d == 0) s.d = sum(0, s.full(0));
        for (int i = 0; i < s.num_contexts(); ++i) {
            if (sum(i, s.full(i)) != s.d)
                fail(errc::malformed_scenario, "dimensions of a maximal context do not sum to d");
            for (int j = i + 1; j < s.num_contexts(); ++j) {
                const auto& ov = s.overlap[i][j];
                for (std::size_t k = 0; k < ov.left.size(); ++k)
                    if (sum(i, ov.left[k]) != sum(j, ov.right[k]))
                        fail(errc::malformed_scenario, "dimension function is not additive on shared events");
            }
        }
    }
    return s;
}

inline std::vector<std::string> context_labels(const Scenario& s, int i) {
    std::vector<std::string> out;
    for (int a : s.contexts[i]) out.push_back(s.atoms[a]);
    return out;
}

inline std::map<std::string, long> dim_map(const Scenario& s) {
    std::map<std::string, long> out;
    for (std::size_t a = 0; a < s.dim.size(); ++a) out[s.atoms[a]] = s.dim[a];
    return out;
}

inline std::map<std::string, std::vector<std::vector<std::string>>> event_labels(const Scenario& s) {
    std::map<std::string, std::vector<std::vector<std::string>>> out;
    for (const auto& [name, keys] : s.events)
        for (const auto& k : keys) {
            std::vector<std::string> l;
            for (int a : k) l.push_back(s.atoms[a]);
            out[name].push_back(l);
        }
    return out;
}

inline Scenario with_dims(const Scenario& s, const std::map<std::string, long>& dims, long d) {
    std::vector<std::vector<std::string>> ctx;
    for (int i = 0; i < s.num_contexts(); ++i) ctx.push_back(context_labels(s, i));
    return make_scenario(s.atoms, ctx, event_labels(s), dims, d);
}

// Canonical name of an event given inside context i: the lexicographically least of its
// representations over all contexts containing it.
inline EventKey canonical_key(const Scenario& s, int i, Mask m) {
    EventKey best = s.key_of(i, m);
    for (int j = 0; j < s.num_contexts(); ++j) {
        const auto& ov = s.overlap[i][j];
        if (auto mj = detail::carry(m, ov.left, ov.right)) {
            EventKey k = s.key_of(j, *mj);
            if (k.size() < best.size() || (k.size() == best.size() && k < best)) best = std::move(k);
        }
    }
    return best;
}

inline std::string event_label(const Scenario& s, int i, Mask m) {
    std::set<EventKey> reps{s.key_of(i, m)};
    for (int j = 0; j < s.num_contexts(); ++j) {
        const auto& ov = s.overlap[i][j];
        if (auto mj = detail::carry(m, ov.left, ov.right)) reps.insert(s.key_of(j, *mj));
    }
    for (const auto& [name, keys] : s.events)
        for (const auto& k : keys)
            if (reps.count(k)) return name;
    EventKey k = canonical_key(s, i, m);
    std::string out;
    for (int a : k) out += (out.empty() ? "" : "+") + s.atoms[a];
    return out;
}

// Pairs (u,v) of atoms that are exclusive: co-contextual, or separated by a shared event.
inline OrthoGraph orthogonality_graph(const Scenario& s) {
    OrthoGraph g;
    g.labels = s.atoms;
    g.adj.assign(s.atoms.size(), std::vector<char>(s.atoms.size(), 0));
    for (const auto& c : s.contexts)
        for (int a : c)
            for (int b : c)
                if (a != b) g.adj[a][b] = 1;
    for (int i = 0; i < s.num_contexts(); ++i)
        for (int j = 0; j < s.num_contexts(); ++j) {
            if (i == j) continue;
            const auto& ov = s.overlap[i][j];
            if (ov.trivial()) continue;
            for (std::size_t k = 0; k < ov.left.size(); ++k)
                for (int p = 0; p < static_cast<int>(s.contexts[i].size()); ++p) {
                    if (!(ov.left[k] >> p & 1)) continue;
                    for (int q = 0; q < static_cast<int>(s.contexts[j].size()); ++q) {
                        if (ov.right[k] >> q & 1) continue;
                        int a = s.contexts[i][p], b = s.contexts[j][q];
                        if (a != b) g.adj[a][b] = g.adj[b][a] = 1;
                    }
                }
        }
    return g;
}

// Atoms adjacent iff some maximal context contains both.
inline OrthoGraph compatibility_graph(const Scenario& s) {
    OrthoGraph g;
    g.labels = s.atoms;
    g.adj.assign(s.atoms.size(), std::vector<char>(s.atoms.size(), 0));
    for (const auto& c : s.contexts)
        for (int a : c)
            for (int b : c)
                if (a != b) g.adj[a][b] = 1;
    return g;
}

inline std::vector<VertexSet> context_cliques(const Scenario& s) { return s.contexts; }

// ---------------------------------------------------------------------------
// Context category

struct CtxElement {
    int base = -1;                 // a maximal context containing it; -1 for the least element
    std::vector<Mask> blocks;      // partition of the base context
    std::vector<int> support;      // maximal contexts containing it
    std::vector<EventKey> keys;    // canonical keys of the blocks, sorted; identifies the element

    bool is_least() const { return base < 0; }
    bool operator==(const CtxElement& o) const { return base < 0 ? o.base < 0 : keys == o.keys; }
};

struct ContextCategory {
    Scenario scenario;
    std::vector<CtxElement> elements;
    std::vector<std::vector<char>> leq; // leq[a][b]: element a is a subcontext of element b

    bool has_least() const {
        return std::any_of(elements.begin(), elements.end(), [](const CtxElement& e) { return e.is_least(); });
    }
    std::size_t size() const { return elements.size(); }
};

namespace detail {

inline std::vector<Mask> sorted_blocks(std::vector<Mask> b) {
    b.erase(std::remove(b.begin(), b.end(), Mask{0}), b.end());
    std::sort(b.begin(), b.end());
    return b;
}

// Finest common coarsening.
inline std::vector<Mask> partition_join(const std::vector<Mask>& a, const std::vector<Mask>& b) {
    std::vector<Mask> out = a;
    for (Mask x : b) {
        Mask merged = x;
        std::vector<Mask> rest;
        for (Mask y : out)
            if (y & merged)
                merged |= y;
            else
                rest.push_back(y);
        // A merged block may now touch earlier blocks; repeat until stable.
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<Mask> keep;
            for (Mask y : rest)
                if (y & merged)
                    merged |= y, grew = true;
                else
                    keep.push_back(y);
            rest.swap(keep);
        }
        rest.push_back(merged);
        out.swap(rest);
    }
    return sorted_blocks(out);
}

// Common refinement.
inline std::vector<Mask> partition_meet(const std::vector<Mask>& a, const std::vector<Mask>& b) {
    std::vector<Mask> out;
    for (Mask x : a)
        for (Mask y : b)
            if (x & y) out.push_back(x & y);
    return sorted_blocks(out);
}

inline std::optional<std::vector<Mask>> transport(const Scenario& s, int i, const std::vector<Mask>& blocks, int j) {
    const auto& ov = s.overlap[i][j];
    std::vector<Mask> out;
    for (Mask b : blocks) {
        auto mb = carry(b, ov.left, ov.right);
        if (!mb) return std::nullopt;
        out.push_back(*mb);
    }
    return sorted_blocks(out);
}

inline std::vector<Mask> singletons(const Scenario& s, int i) {
    std::vector<Mask> out;
    for (int p = 0; p < static_cast<int>(s.contexts[i].size()); ++p) out.push_back(Mask{1} << p);
    return out;
}

} // namespace detail

inline CtxElement least_element(const Scenario& s) {
    CtxElement e;
    e.support.resize(s.num_contexts());
    std::iota(e.support.begin(), e.support.end(), 0);
    return e;
}

// Normalizes a subalgebra of context `base` given by a partition.
inline CtxElement make_element(const Scenario& s, int base, std::vector<Mask> blocks) {
    blocks = detail::sorted_blocks(std::move(blocks));
    if (blocks.size() <= 1) return least_element(s);
    CtxElement e;
    for (int j = 0; j < s.num_contexts(); ++j)
        if (detail::transport(s, base, blocks, j)) e.support.push_back(j);
    e.base = e.support.front();
    e.blocks = *detail::transport(s, base, blocks, e.base);
    for (Mask b : e.blocks) e.keys.push_back(canonical_key(s, e.base, b));
    std::sort(e.keys.begin(), e.keys.end());
    return e;
}

inline CtxElement maximal_element(const Scenario& s, int i) { return make_element(s, i, detail::singletons(s, i)); }

inline std::optional<std::vector<Mask>> express_in(const Scenario& s, const CtxElement& e, int j) {
    if (e.is_least()) return std::vector<Mask>{s.full(j)};
    return detail::transport(s, e.base, e.blocks, j);
}

inline CtxElement meet(const Scenario& s, const CtxElement& x, const CtxElement& y) {
    if (x.is_least() || y.is_least()) return least_element(s);
    const int i = x.base, j = y.base;
    auto y_in_i = detail::partition_join(y.blocks, s.overlap[j][i].left);
    auto moved = detail::transport(s, j, y_in_i, i);
    return make_element(s, i, detail::partition_join(x.blocks, *moved));
}

// The subalgebra generated by x and y, when they lie in a common maximal context.
inline std::optional<CtxElement> generated(const Scenario& s, const CtxElement& x, const CtxElement& y) {
    if (x.is_least()) return y;
    if (y.is_least()) return x;
    for (int k : x.support)
        if (std::binary_search(y.support.begin(), y.support.end(), k))
            return make_element(s, k, detail::partition_meet(*express_in(s, x, k), *express_in(s, y, k)));
    return std::nullopt;
}

inline bool contained_in(const Scenario& s, const CtxElement& x, const CtxElement& y) {
    if (x.is_least()) return true;
    if (y.is_least()) return false;
    auto xb = express_in(s, x, y.base);
    if (!xb) return false;
    for (Mask b : *xb)
        if (!detail::carry(b, y.blocks, y.blocks)) return false;
    return true;
}

inline bool event_in(const Scenario& s, int i, Mask m, const CtxElement& e) {
    if (e.is_least()) return m == 0 || m == s.full(i);
    auto mb = detail::carry(m, s.overlap[i][e.base].left, s.overlap[i][e.base].right);
    return mb && detail::carry(*mb, e.blocks, e.blocks).has_value();
}

inline std::vector<std::string> element_labels(const Scenario& s, const CtxElement& e) {
    std::vector<std::string> out;
    if (e.is_least()) return out;
    for (Mask b : e.blocks) out.push_back(event_label(s, e.base, b));
    std::sort(out.begin(), out.end());
    return out;
}

inline ContextCategory category_from(const Scenario& s, std::vector<CtxElement> elems) {
    std::vector<CtxElement> uniq;
    for (auto& e : elems)
        if (std::find(uniq.begin(), uniq.end(), e) == uniq.end()) uniq.push_back(std::move(e));
    std::sort(uniq.begin(), uniq.end(), [](const CtxElement& a, const CtxElement& b) {
        if (a.is_least() != b.is_least()) return b.is_least();
        if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
        if (a.support != b.support) return a.support < b.support;
        return a.keys < b.keys;
    });
    ContextCategory cc{s, std::move(uniq), {}};
    const std::size_t n = cc.elements.size();
    cc.leq.assign(n, std::vector<char>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) cc.leq[a][b] = contained_in(s, cc.elements[a], cc.elements[b]);
    return cc;
}

inline ContextCategory build_context_category(const Scenario& s) {
    std::vector<CtxElement> elems;
    for (int i = 0; i < s.num_contexts(); ++i) elems.push_back(maximal_element(s, i));
    for (std::size_t a = 0; a < elems.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) {
            CtxElement z = meet(s, elems[a], elems[b]);
            if (!z.is_least() && std::find(elems.begin(), elems.end(), z) == elems.end()) elems.push_back(z);
        }
    elems.push_back(least_element(s));
    return category_from(s, std::move(elems));
}

inline std::vector<int> maximal_indices(const ContextCategory& cc) {
    std::vector<int> out;
    for (std::size_t a = 0; a < cc.size(); ++a) {
        bool top = true;
        for (std::size_t b = 0; b < cc.size() && top; ++b)
            if (a != b && cc.leq[a][b] && !cc.leq[b][a]) top = false;
        if (top) out.push_back(static_cast<int>(a));
    }
    return out;
}

inline std::vector<int> minimal_nontrivial_indices(const ContextCategory& cc) {
    std::vector<int> out;
    for (std::size_t a = 0; a < cc.size(); ++a) {
        if (cc.elements[a].is_least()) continue;
        bool bottom = true;
        for (std::size_t b = 0; b < cc.size() && bottom; ++b)
            if (a != b && !cc.elements[b].is_least() && cc.leq[b][a] && !cc.leq[a][b]) bottom = false;
        if (bottom) out.push_back(static_cast<int>(a));
    }
    return out;
}

inline ContextCategory truncate(const ContextCategory& cc) {
    std::vector<CtxElement> keep;
    for (const auto& e : cc.elements)
        if (!e.is_least()) keep.push_back(e);
    return category_from(cc.scenario, std::move(keep));
}

// Elements of the form C ∩ C' for maximal C, C' (C = C' allowed).
inline ContextCategory downward_generated(const ContextCategory& cc) {
    const auto& s = cc.scenario;
    auto top = maximal_indices(cc);
    std::vector<CtxElement> out;
    for (int a : top)
        for (int b : top) {
            CtxElement z = meet(s, cc.elements[a], cc.elements[b]);
            if (z.is_least() && !cc.has_least()) continue;
            out.push_back(std::move(z));
        }
    return category_from(s, std::move(out));
}

// Elements generated by two minimal nontrivial contexts lying in a common maximal context.
inline ContextCategory upward_generated(const ContextCategory& cc) {
    const auto& s = cc.scenario;
    auto low = minimal_nontrivial_indices(cc);
    std::vector<CtxElement> out;
    for (int a : low)
        for (int b : low)
            if (auto z = generated(s, cc.elements[a], cc.elements[b])) out.push_back(std::move(*z));
    if (cc.has_least()) out.push_back(least_element(s));
    return category_from(s, std::move(out));
}

inline bool same_elements(const ContextCategory& a, const ContextCategory& b) {
    if (a.size() != b.size()) return false;
    for (const auto& e : a.elements)
        if (std::find(b.elements.begin(), b.elements.end(), e) == b.elements.end()) return false;
    return true;
}

// The observable algebra whose maximal contexts are the given subalgebras, with every
// identification of the ambient scenario kept as a declared event.
inline Scenario scenario_from_elements(const Scenario& s, std::vector<CtxElement> elems) {
    elems.erase(std::remove_if(elems.begin(), elems.end(), [](const CtxElement& e) { return e.is_least(); }),
                elems.end());
    std::vector<CtxElement> top;
    for (std::size_t a = 0; a < elems.size(); ++a) {
        bool covered = false;
        for (std::size_t b = 0; b < elems.size() && !covered; ++b)
            if (a != b && contained_in(s, elems[a], elems[b]) && !(elems[a] == elems[b])) covered = true;
        if (!covered && std::find(top.begin(), top.end(), elems[a]) == top.end()) top.push_back(elems[a]);
    }
    if (top.empty()) fail(errc::malformed_scenario, "no nontrivial contexts to build a scenario from");

    std::map<std::string, long> dims;
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> contexts;
    auto label_of = [&](int base, Mask b) { return event_label(s, base, b); };
    for (const auto& e : top) {
        std::vector<std::string> c;
        for (Mask b : e.blocks) {
            std::string l = label_of(e.base, b);
            c.push_back(l);
            if (s.has_dim()) {
                long t = 0;
                for (int a : s.key_of(e.base, b)) t += s.dim[a];
                dims[l] = t;
            }
            if (std::find(atoms.begin(), atoms.end(), l) == atoms.end()) atoms.push_back(l);
        }
        contexts.push_back(std::move(c));
    }
    std::map<std::string, std::vector<std::vector<std::string>>> events;
    for (std::size_t a = 0; a < top.size(); ++a)
        for (std::size_t b = a + 1; b < top.size(); ++b) {
            CtxElement z = meet(s, top[a], top[b]);
            if (z.is_least()) continue;
            for (Mask zb : z.blocks) {
                std::string name = "ev:" + label_of(z.base, zb);
                auto& decomps = events[name];
                for (const CtxElement* e : {&top[a], &top[b]}) {
                    Mask here = *detail::carry(zb, s.overlap[z.base][e->base].left, s.overlap[z.base][e->base].right);
                    std::vector<std::string> parts;
                    for (Mask eb : e->blocks)
                        if ((eb & here) == eb) parts.push_back(label_of(e->base, eb));
                    std::sort(parts.begin(), parts.end());
                    if (std::find(decomps.begin(), decomps.end(), parts) == decomps.end()) decomps.push_back(parts);
                }
            }
        }
    // Drop events that are a single shared atom everywhere.
    for (auto it = events.begin(); it != events.end();)
        if (it->second.size() == 1 && it->second.front().size() == 1)
            it = events.erase(it);
        else
            ++it;
    return make_scenario(atoms, contexts, events, dims, s.d);
}

inline Scenario scenario_of(const ContextCategory& cc) { return scenario_from_elements(cc.scenario, cc.elements); }

// Each maximal context is replaced by the subalgebra generated by the minimal
// nontrivial contexts inside it.
inline Scenario coarse_grain(const Scenario& s) {
    ContextCategory cc = build_context_category(s);
    auto low = minimal_nontrivial_indices(cc);
    std::vector<CtxElement> gens;
    for (int i = 0; i < s.num_contexts(); ++i) {
        std::vector<Mask> part{s.full(i)};
        for (int a : low) {
            const auto& e = cc.elements[a];
            if (!std::binary_search(e.support.begin(), e.support.end(), i)) continue;
            part = detail::partition_meet(part, *express_in(s, e, i));
        }
        gens.push_back(make_element(s, i, part));
    }
    return scenario_from_elements(s, gens);
}

// Hypergraph whose vertices are the blocks of nontrivial pairwise overlaps and whose
// hyperedges are the maximal contexts.
struct OverlapHypergraph {
    std::vector<std::string> vertices;
    std::vector<std::vector<int>> edges;
};

inline OverlapHypergraph overlap_hypergraph(const ContextCategory& cc) {
    const auto& s = cc.scenario;
    auto top = maximal_indices(cc);
    struct Vertex {
        EventKey key;
        int ctx;
        Mask mask;
    };
    std::vector<Vertex> verts;
    for (std::size_t a = 0; a < top.size(); ++a)
        for (std::size_t b = a + 1; b < top.size(); ++b) {
            CtxElement z = meet(s, cc.elements[top[a]], cc.elements[top[b]]);
            if (z.is_least()) continue;
            for (Mask m : z.blocks) {
                EventKey k = canonical_key(s, z.base, m);
                if (std::none_of(verts.begin(), verts.end(), [&](const Vertex& v) { return v.key == k; }))
                    verts.push_back({k, z.base, m});
            }
        }
    std::sort(verts.begin(), verts.end(), [](const Vertex& x, const Vertex& y) { return x.key < y.key; });
    OverlapHypergraph h;
    for (const auto& v : verts) h.vertices.push_back(event_label(s, v.ctx, v.mask));
    for (int t : top) {
        std::vector<int> edge;
        for (int v = 0; v < static_cast<int>(verts.size()); ++v)
            if (event_in(s, verts[v].ctx, verts[v].mask, cc.elements[t])) edge.push_back(v);
        h.edges.push_back(std::move(edge));
    }
    return h;
}

// GYO reduction: alpha-acyclic iff ears can be removed down to at most one hyperedge.
inline bool gyo_acyclic(std::vector<std::vector<int>> edges) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<int, int> count;
        for (const auto& e : edges)
            for (int v : e) ++count[v];
        for (auto& e : edges) {
            auto keep = std::remove_if(e.begin(), e.end(), [&](int v) { return count[v] == 1; });
            if (keep != e.end()) e.erase(keep, e.end()), changed = true;
        }
        for (std::size_t a = 0; a < edges.size(); ++a) {
            bool drop = edges[a].empty();
            for (std::size_t b = 0; b < edges.size() && !drop; ++b)
                if (a != b && std::includes(edges[b].begin(), edges[b].end(), edges[a].begin(), edges[a].end()))
                    drop = true;
            if (drop) {
                edges.erase(edges.begin() + static_cast<long>(a));
                changed = true;
                break;
            }
        }
    }
    return edges.size() <= 1;
}

inline bool is_acyclic(const ContextCategory& cc) { return gyo_acyclic(overlap_hypergraph(cc).edges); }

// Graph on shared events, adjacent when some maximal context contains both.
inline OrthoGraph generator_graph(const ContextCategory& cc) {
    auto h = overlap_hypergraph(cc);
    OrthoGraph g;
    std::vector<std::pair<std::string, std::string>> edges;
    std::set<std::pair<int, int>> seen;
    for (const auto& e : h.edges)
        for (int u : e)
            for (int v : e)
                if (u < v && seen.insert({u, v}).second) edges.emplace_back(h.vertices[u], h.vertices[v]);
    auto labels = h.vertices;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return make_graph(labels, edges);
}

} // namespace ksc

#endif
