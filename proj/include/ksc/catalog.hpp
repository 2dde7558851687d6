#ifndef KSC_CATALOG_HPP
#define KSC_CATALOG_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "correlations.hpp"
#include "realization.hpp"
#include "scenario.hpp"

namespace ksc {

// A classical embedding: each atom is sent to a subset of a finite sample space.
struct EmbeddingTable {
    std::vector<std::string> lambda_points;
    std::map<std::string, std::vector<std::string>> event_supports;
};

// Supports partition the sample space in every context, are nonempty and pairwise
// distinct, and every shared event gets the same support from each context.
inline bool verify_embedding(const Scenario& s, const EmbeddingTable& e) {
    std::set<std::string> lambda(e.lambda_points.begin(), e.lambda_points.end());
    if (lambda.size() != e.lambda_points.size() || lambda.empty()) return false;
    std::vector<std::set<std::string>> sup(s.atoms.size());
    for (std::size_t a = 0; a < s.atoms.size(); ++a) {
        auto it = e.event_supports.find(s.atoms[a]);
        if (it == e.event_supports.end()) return false;
        sup[a].insert(it->second.begin(), it->second.end());
        if (sup[a].empty() || sup[a].size() != it->second.size()) return false;
        for (const auto& x : sup[a])
            if (!lambda.count(x)) return false;
    }
    for (std::size_t a = 0; a < sup.size(); ++a)
        for (std::size_t b = a + 1; b < sup.size(); ++b)
            if (sup[a] == sup[b]) return false;
    auto support = [&](int i, Mask m) {
        std::set<std::string> out;
        for (std::size_t p = 0; p < s.contexts[i].size(); ++p)
            if (m >> p & 1) out.insert(sup[s.contexts[i][p]].begin(), sup[s.contexts[i][p]].end());
        return out;
    };
    for (int i = 0; i < s.num_contexts(); ++i) {
        std::size_t total = 0;
        for (int a : s.contexts[i]) total += sup[a].size();
        if (total != lambda.size() || support(i, s.full(i)) != lambda) return false;
    }
    for (int i = 0; i < s.num_contexts(); ++i)
        for (int j = i + 1; j < s.num_contexts(); ++j) {
            const auto& ov = s.overlap[i][j];
            for (std::size_t k = 0; k < ov.left.size(); ++k)
                if (support(i, ov.left[k]) != support(j, ov.right[k])) return false;
        }
    return true;
}

inline std::string chsh_atom(int x, int a, int y, int b) {
    return "A" + std::to_string(x) + (a ? "-" : "+") + "B" + std::to_string(y) + (b ? "-" : "+");
}

// Outcomes (0 for +1, 1 for -1) of the two settings encoded by a point of {-2,-1,1,2}.
inline int chsh_outcome(int point, int setting) {
    if (setting == 0) return point < 0 ? 1 : 0;
    return (point == -2 || point == 2) ? 1 : 0;
}

inline Scenario chsh_scenario() {
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> ctx;
    std::map<std::string, std::vector<std::vector<std::string>>> events;
    std::map<std::string, long> dims;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            std::vector<std::string> c;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) c.push_back(chsh_atom(x, a, y, b));
            for (const auto& l : c) atoms.push_back(l), dims[l] = 1;
            ctx.push_back(c);
        }
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            std::string an = "A" + std::to_string(x) + (a ? "-" : "+"), bn = "B" + std::to_string(x) + (a ? "-" : "+");
            for (int y = 0; y < 2; ++y) {
                events[an].push_back({chsh_atom(x, a, y, 0), chsh_atom(x, a, y, 1)});
                events[bn].push_back({chsh_atom(y, 0, x, a), chsh_atom(y, 1, x, a)});
            }
        }
    return make_scenario(atoms, ctx, events, dims, 4);
}

inline EmbeddingTable chsh_embedding() {
    const int pts[4] = {-2, -1, 1, 2};
    EmbeddingTable e;
    for (int i : pts)
        for (int j : pts) e.lambda_points.push_back(std::to_string(i) + "," + std::to_string(j));
    for (int i : pts)
        for (int j : pts)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    e.event_supports[chsh_atom(x, chsh_outcome(i, x), y, chsh_outcome(j, y))].push_back(
                        std::to_string(i) + "," + std::to_string(j));
    return e;
}

inline std::pair<Scenario, EmbeddingTable> chsh() { return {chsh_scenario(), chsh_embedding()}; }

// Each context keeps A_x=+1 resolved into the two product atoms and merges A_x=-1 into
// one atom of dimension two.
inline Scenario chsh_coarse() {
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> ctx;
    std::map<std::string, std::vector<std::vector<std::string>>> events;
    std::map<std::string, long> dims;
    for (int x = 0; x < 2; ++x) {
        std::string minus = "A" + std::to_string(x) + "-";
        atoms.push_back(minus);
        dims[minus] = 2;
        for (int y = 0; y < 2; ++y) {
            std::vector<std::string> c{minus, chsh_atom(x, 0, y, 0), chsh_atom(x, 0, y, 1)};
            for (int b = 0; b < 2; ++b) atoms.push_back(chsh_atom(x, 0, y, b)), dims[chsh_atom(x, 0, y, b)] = 1;
            ctx.push_back(c);
        }
    }
    return make_scenario(atoms, ctx, events, dims, 4);
}

inline int chsh_context(const Scenario& s, int x, int y) {
    int a = s.atom_index(chsh_atom(x, 0, y, 0));
    return s.atom_contexts.at(a).front();
}

// PR box: perfectly correlated outputs except for settings (1,1).
inline State pr_box(const Scenario& s) {
    State st;
    st.probs.assign(s.num_contexts(), {});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int i = chsh_context(s, x, y);
            for (int a : s.contexts[i]) {
                const std::string& l = s.atoms[a];
                bool same = (l[2] == l[5]);
                bool wins = (x == 1 && y == 1) ? !same : same;
                st.probs[i].push_back(wins ? rational(1, 2) : rational(0));
            }
        }
    return st;
}

// Coefficient one on the winning outcomes of each context.
inline Functional chsh_functional(const Scenario& s) {
    Functional f;
    f.coeffs.assign(s.num_contexts(), {});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int i = chsh_context(s, x, y);
            for (int a : s.contexts[i]) {
                const std::string& l = s.atoms[a];
                bool same = (l[2] == l[5]);
                bool wins = (x == 1 && y == 1) ? !same : same;
                f.coeffs[i].push_back(wins ? rational(1) : rational(0));
            }
        }
    return f;
}

// The quantum optimum wins each context with probability cos^2(pi/8), which is
// irrational; this state rounds it to 853/1000.
struct ApproxState {
    State state;
    bool approx = true;
};

inline ApproxState tsirelson_approx(const Scenario& s) {
    ApproxState out;
    Functional f = chsh_functional(s);
    out.state.probs.assign(s.num_contexts(), {});
    for (int i = 0; i < s.num_contexts(); ++i)
        for (const auto& c : f.coeffs[i]) out.state.probs[i].push_back(c == 1 ? rational(853, 2000) : rational(147, 2000));
    return out;
}

inline std::map<std::string, RationalVector> yu_oh(int variant) {
    if (variant != 13 && variant != 15) fail(errc::bad_input, "Yu-Oh variant must be 13 or 15");
    auto v = [](long a, long b, long c) { return RationalVector{a, b, c}; };
    std::map<std::string, RationalVector> out{
        {"z1", v(1, 0, 0)},  {"z2", v(0, 1, 0)},  {"z3", v(0, 0, 1)},  {"y1+", v(0, 1, 1)}, {"y2+", v(1, 0, 1)},
        {"y3+", v(1, 1, 0)}, {"y1-", v(0, 1, -1)}, {"y2-", v(1, 0, -1)}, {"y3-", v(1, -1, 0)}, {"h1", v(-1, 1, 1)},
        {"h2", v(1, -1, 1)}, {"h3", v(1, 1, -1)},
    };
    if (variant == 13) {
        out.emplace("h0", v(1, 1, 1));
    } else {
        out.emplace("x01", v(-2, 1, 1));
        out.emplace("x02", v(1, -2, 1));
        out.emplace("x03", v(1, 1, -2));
    }
    return out;
}

// Scenario whose contexts are the maximal cliques of the completed 13-vector graph.
inline Scenario yu_oh_completed() {
    auto [g, r] = graph_from_vectors(yu_oh(13));
    Completion c = complete(r);
    return scenario_from_cliques(c.graph, c.contexts);
}

// Contexts C_0..C_{n-1} of d atoms; C_i and C_{i+1} share overlap_sizes[i] atoms, and no
// other pair shares any. Each context keeps at least one atom of its own.
inline Scenario n_cycle(int n, int d, std::vector<int> overlap_sizes = {}) {
    if (n < 3 || d < 2) fail(errc::invalid_overlap, "n-cycles need n >= 3 and d >= 2");
    if (overlap_sizes.empty()) overlap_sizes.assign(n, 1);
    if (static_cast<int>(overlap_sizes.size()) != n) fail(errc::invalid_overlap, "need one overlap size per edge");
    for (int i = 0; i < n; ++i) {
        int prev = overlap_sizes[(i + n - 1) % n], next = overlap_sizes[i];
        if (next < 0 || next > d - 2) fail(errc::invalid_overlap, "overlap sizes must lie in [0, d-2]");
        if (prev + next > d - 1) fail(errc::invalid_overlap, "adjacent overlaps leave no room in a context");
    }
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> ctx(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < overlap_sizes[i]; ++k) {
            std::string l = "o" + std::to_string(i) + "_" + std::to_string(k);
            atoms.push_back(l);
            ctx[i].push_back(l);
            ctx[(i + 1) % n].push_back(l);
        }
    for (int i = 0; i < n; ++i) {
        int local = d - static_cast<int>(ctx[i].size());
        for (int k = 0; k < local; ++k) {
            std::string l = "l" + std::to_string(i) + "_" + std::to_string(k);
            atoms.push_back(l);
            ctx[i].push_back(l);
        }
    }
    std::map<std::string, long> dims;
    for (const auto& a : atoms) dims[a] = 1;
    return make_scenario(atoms, ctx, {}, dims, d);
}

// Dichotomic observables X_0..X_{n-1}; context i measures X_i and X_{i+1} jointly.
inline Scenario n_cycle_dichotomic(int n) {
    if (n < 3) fail(errc::invalid_overlap, "n-cycles need n >= 3");
    auto atom = [](int i, int a, int j, int b) {
        return "X" + std::to_string(i) + (a ? "-" : "+") + "X" + std::to_string(j) + (b ? "-" : "+");
    };
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> ctx;
    std::map<std::string, std::vector<std::vector<std::string>>> events;
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        std::vector<std::string> c;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) c.push_back(atom(i, a, j, b)), atoms.push_back(atom(i, a, j, b));
        ctx.push_back(c);
        for (int a = 0; a < 2; ++a) {
            events["X" + std::to_string(i) + (a ? "-" : "+")].push_back({atom(i, a, j, 0), atom(i, a, j, 1)});
            events["X" + std::to_string(j) + (a ? "-" : "+")].push_back({atom(i, 0, j, a), atom(i, 1, j, a)});
        }
    }
    std::map<std::string, long> dims;
    for (const auto& a : atoms) dims[a] = 1;
    return make_scenario(atoms, ctx, events, dims, 4);
}

// Deterministic draws: std::mt19937_64 is fully specified, the standard distributions are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    int below(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }
    template <class T> void shuffle(std::vector<T>& v) {
        for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[static_cast<std::size_t>(below(static_cast<int>(k)))]);
    }

private:
    std::mt19937_64 gen_;
};

// k contexts of d fresh atoms each; no two contexts share anything.
inline Scenario acyclic_random(int k, int d, std::uint64_t seed) {
    if (k < 1 || d < 1) fail(errc::bad_input, "need k >= 1 and d >= 1");
    Rng rng(seed);
    std::vector<int> ids(static_cast<std::size_t>(k * d));
    for (std::size_t t = 0; t < ids.size(); ++t) ids[t] = static_cast<int>(t);
    rng.shuffle(ids);
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> ctx(k);
    std::map<std::string, long> dims;
    for (int i = 0; i < k; ++i)
        for (int p = 0; p < d; ++p) {
            std::string l = "m" + std::to_string(ids[static_cast<std::size_t>(i * d + p)]);
            atoms.push_back(l);
            ctx[i].push_back(l);
            dims[l] = 1;
        }
    return make_scenario(atoms, ctx, {}, dims, d);
}

struct RandomOptions {
    int min_contexts = 2, max_contexts = 5;
    int min_d = 2, max_d = 4;
};

// Maximal scenario: each new context reuses a random set of existing atoms and is
// topped up with fresh ones.
inline Scenario random_maximal_scenario(Rng& rng, const RandomOptions& o = {}) {
    for (;;) {
        const int d = rng.between(o.min_d, o.max_d), m = rng.between(o.min_contexts, o.max_contexts);
        std::vector<std::string> atoms;
        std::vector<std::vector<std::string>> ctx;
        for (int i = 0; i < m; ++i) {
            std::vector<std::string> c;
            int reuse = atoms.empty() ? 0 : rng.between(0, std::min<int>(d, static_cast<int>(atoms.size())));
            std::vector<std::string> pool = atoms;
            rng.shuffle(pool);
            c.assign(pool.begin(), pool.begin() + reuse);
            while (static_cast<int>(c.size()) < d) {
                atoms.push_back("a" + std::to_string(atoms.size()));
                c.push_back(atoms.back());
            }
            ctx.push_back(c);
        }
        std::map<std::string, long> dims;
        for (const auto& a : atoms) dims[a] = 1;
        try {
            return make_scenario(atoms, ctx, {}, dims, d);
        } catch (const error&) {
            // duplicate or nested contexts; draw again
        }
    }
}

// Like random_maximal_scenario, then two atoms local to one context are merged into one
// atom of dimension two wherever possible.
inline Scenario random_coarse_scenario(Rng& rng, const RandomOptions& o = {}) {
    RandomOptions o2 = o;
    o2.min_d = std::max(3, o.min_d);
    o2.max_d = std::max(o2.min_d, o.max_d);
    for (;;) {
        Scenario s = random_maximal_scenario(rng, o2);
        std::vector<std::vector<std::string>> ctx;
        std::map<std::string, long> dims;
        bool merged = false;
        for (int i = 0; i < s.num_contexts(); ++i) {
            std::vector<std::string> c, local;
            for (int a : s.contexts[i])
                (s.atom_contexts[a].size() == 1 ? local : c).push_back(s.atoms[a]);
            if (local.size() >= 2 && rng.below(2) == 0) {
                std::string l = local[0] + "|" + local[1];
                c.push_back(l);
                dims[l] = 2;
                local.erase(local.begin(), local.begin() + 2);
                merged = true;
            }
            for (const auto& l : local) c.push_back(l);
            for (const auto& l : c)
                if (!dims.count(l)) dims[l] = 1;
            ctx.push_back(c);
        }
        if (!merged) continue;
        std::vector<std::string> atoms;
        for (const auto& [l, _] : dims) atoms.push_back(l);
        try {
            return make_scenario(atoms, ctx, {}, dims, s.d);
        } catch (const error&) {
        }
    }
}

// Tree-structured scenario: each new context shares atoms with exactly one earlier context
// and keeps at least one atom of its own, so the context category is acyclic.
inline Scenario random_chordal_scenario(Rng& rng, const RandomOptions& o = {}) {
    for (;;) {
        const int d = rng.between(o.min_d, o.max_d), m = rng.between(o.min_contexts, o.max_contexts);
        std::vector<std::string> atoms;
        std::vector<std::vector<std::string>> ctx;
        for (int i = 0; i < m; ++i) {
            std::vector<std::string> c;
            if (i > 0) {
                std::vector<std::string> pool = ctx[static_cast<std::size_t>(rng.below(i))];
                rng.shuffle(pool);
                int reuse = rng.between(0, d - 1);
                c.assign(pool.begin(), pool.begin() + reuse);
            }
            while (static_cast<int>(c.size()) < d) {
                atoms.push_back("t" + std::to_string(atoms.size()));
                c.push_back(atoms.back());
            }
            ctx.push_back(c);
        }
        std::map<std::string, long> dims;
        for (const auto& a : atoms) dims[a] = 1;
        try {
            return make_scenario(atoms, ctx, {}, dims, d);
        } catch (const error&) {
        }
    }
}

// Random no-disturbance state on a scenario whose contexts share only atoms, filled
// context by context. Contexts are taken in running-intersection order where possible
// (the already fixed atoms of the next context all lie in one filled context), which
// always succeeds on acyclic scenarios; otherwise fails with bad_input if the fixed atoms
// of a context cannot be completed.
inline State random_state(const Scenario& s, Rng& rng, int denominator = 60) {
    for (const auto& [name, keys] : s.events)
        if (!keys.empty()) fail(errc::bad_input, "random_state supports atom overlaps only");
    std::vector<std::optional<rational>> w(s.atoms.size());
    const int m = s.num_contexts();
    std::vector<int> order;
    std::vector<char> filled(m, 0), fixed_atom(s.atoms.size(), 0);
    auto fits = [&](int i) {
        std::vector<int> fixed;
        for (int a : s.contexts[i])
            if (fixed_atom[a]) fixed.push_back(a);
        for (int j : order)
            if (std::includes(s.contexts[j].begin(), s.contexts[j].end(), fixed.begin(), fixed.end())) return true;
        return fixed.empty();
    };
    while (static_cast<int>(order.size()) < m) {
        int next = -1, fallback = -1;
        for (int i = 0; i < m && next < 0; ++i) {
            if (filled[i]) continue;
            bool touches = std::any_of(s.contexts[i].begin(), s.contexts[i].end(), [&](int a) { return fixed_atom[a] != 0; });
            if (fallback < 0) fallback = i;
            if ((touches || order.empty()) && fits(i)) next = i;
        }
        if (next < 0) {
            for (int i = 0; i < m && next < 0; ++i)
                if (!filled[i] && fits(i)) next = i;
        }
        if (next < 0) next = fallback;
        filled[next] = 1;
        order.push_back(next);
        for (int a : s.contexts[next]) fixed_atom[a] = 1;
    }
    for (int i : order) {
        rational fixed = 0;
        std::vector<int> open;
        for (int a : s.contexts[i])
            if (w[a])
                fixed += *w[a];
            else
                open.push_back(a);
        if (fixed > 1 || (open.empty() && fixed != 1)) fail(errc::bad_input, "state cannot be completed");
        if (open.empty()) continue;
        std::vector<long> raw;
        long total = 0;
        for (std::size_t k = 0; k < open.size(); ++k) raw.push_back(rng.between(0, denominator)), total += raw.back();
        if (total == 0) raw[0] = total = 1;
        for (std::size_t k = 0; k < open.size(); ++k) {
            w[open[k]] = (1 - fixed) * ratio(raw[k], total);
        }
    }
    State st;
    for (const auto& c : s.contexts) {
        std::vector<rational> row;
        for (int a : c) row.push_back(*w[a]);
        st.probs.push_back(row);
    }
    return st;
}

inline std::vector<std::string> catalog_names() {
    return {"chsh",           "chsh_coarse",     "chsh_embedding",  "chsh_pr_box",        "chsh_functional",
            "chsh_tsirelson", "yu_oh13",         "yu_oh15",         "yu_oh_completed",    "ncycle5_3",
            "ncycle5_dichotomic"};
}

} // namespace ksc

#endif
