#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include <ksc/catalog.hpp>
#include <ksc/scenario.hpp>

using namespace ksc;

namespace {

// Alpha-acyclic iff the 2-section is chordal and every maximal clique of it lies in
// one hyperedge. Both halves are checked by subset enumeration.
bool conformal_chordal(const std::vector<std::vector<int>>& edges) {
    std::set<int> verts;
    for (const auto& e : edges) verts.insert(e.begin(), e.end());
    std::vector<int> vs(verts.begin(), verts.end());
    const int n = static_cast<int>(vs.size());
    if (n > 16) throw std::runtime_error("oracle too large");
    auto covered = [&](int a, int b) {
        return std::any_of(edges.begin(), edges.end(), [&](const std::vector<int>& e) {
            return std::count(e.begin(), e.end(), a) && std::count(e.begin(), e.end(), b);
        });
    };
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) adj[u][v] = u != v && covered(vs[u], vs[v]);
    for (unsigned m = 1; m < (1u << n); ++m) {
        std::vector<int> s;
        for (int v = 0; v < n; ++v)
            if (m >> v & 1) s.push_back(v);
        bool clique = true;
        for (int a : s)
            for (int b : s)
                if (a != b && !adj[a][b]) clique = false;
        if (clique) {
            bool maximal = true;
            for (int v = 0; v < n && maximal; ++v) {
                if (m >> v & 1) continue;
                if (std::all_of(s.begin(), s.end(), [&](int a) { return adj[a][v] != 0; })) maximal = false;
            }
            bool inside = std::any_of(edges.begin(), edges.end(), [&](const std::vector<int>& e) {
                return std::all_of(s.begin(), s.end(), [&](int a) { return std::count(e.begin(), e.end(), vs[a]) > 0; });
            });
            if (maximal && !inside) return false;
            continue;
        }
        if (s.size() < 4) continue;
        bool cycle = true;
        for (int a : s) {
            int deg = 0;
            for (int b : s) deg += adj[a][b];
            if (deg != 2) cycle = false;
        }
        if (!cycle) continue;
        std::vector<int> seen{s[0]};
        for (std::size_t h = 0; h < seen.size(); ++h)
            for (int b : s)
                if (adj[seen[h]][b] && std::find(seen.begin(), seen.end(), b) == seen.end()) seen.push_back(b);
        if (seen.size() == s.size()) return false;
    }
    return true;
}

Scenario small(const std::vector<std::vector<std::string>>& ctx) {
    std::set<std::string> atoms;
    for (const auto& c : ctx) atoms.insert(c.begin(), c.end());
    return make_scenario({atoms.begin(), atoms.end()}, ctx);
}

} // namespace

TEST(Scenario, Canonicalization) {
    Scenario s = small({{"c", "a", "d"}, {"b", "a", "e"}});
    EXPECT_EQ(s.atoms, (std::vector<std::string>{"a", "b", "c", "d", "e"}));
    EXPECT_EQ(s.contexts, (std::vector<std::vector<int>>{{0, 1, 4}, {0, 2, 3}}));
    EXPECT_FALSE(s.overlap[0][1].trivial());
    EXPECT_EQ(s.atom_contexts[0].size(), 2u);
}

TEST(Scenario, MalformedInputs) {
    // {a,b} and {a,c} force b and c to be the same event, so one context contains the other
    EXPECT_THROW(small({{"a", "b"}, {"a", "c"}}), error);
    auto code = [](auto f) {
        try {
            f();
        } catch (const error& e) {
            return e.code();
        }
        return errc::bad_input;
    };
    EXPECT_EQ(code([] { make_scenario({"a", "a"}, {{"a"}}); }), errc::malformed_scenario);
    EXPECT_EQ(code([] { make_scenario({"a"}, {{"a", "z"}}); }), errc::malformed_scenario);
    EXPECT_EQ(code([] { make_scenario({"a"}, {{}}); }), errc::malformed_scenario);
    EXPECT_EQ(code([] { make_scenario({"a", "b"}, {{"a", "a"}}); }), errc::malformed_scenario);
}

TEST(Scenario, ChshCategory) {
    Scenario s = chsh_scenario();
    ContextCategory cc = build_context_category(s);
    // four maximal contexts, four single-party subcontexts, and the least element
    EXPECT_EQ(cc.size(), 9u);
    EXPECT_EQ(maximal_indices(cc).size(), 4u);
    EXPECT_EQ(minimal_nontrivial_indices(cc).size(), 4u);
    EXPECT_TRUE(cc.has_least());
    ContextCategory t = truncate(cc);
    EXPECT_EQ(t.size(), 8u);
    EXPECT_FALSE(t.has_least());
    EXPECT_FALSE(is_acyclic(cc));
    EXPECT_FALSE(is_chordal(generator_graph(cc)));
}

TEST(Scenario, SingleContextIsAChain) {
    ContextCategory cc = build_context_category(small({{"a", "b", "c"}}));
    EXPECT_EQ(cc.size(), 2u);
    EXPECT_EQ(truncate(cc).size(), 1u);
    EXPECT_TRUE(is_acyclic(cc));
}

TEST(Scenario, NCycleCategory) {
    for (int n = 3; n <= 7; ++n) {
        ContextCategory cc = build_context_category(n_cycle(n, 3));
        EXPECT_EQ(cc.size(), static_cast<std::size_t>(2 * n + 1)) << n;
        EXPECT_FALSE(is_acyclic(cc)) << n;
    }
}

TEST(Scenario, OrderIsAPartialOrder) {
    ContextCategory cc = build_context_category(chsh_scenario());
    const std::size_t n = cc.size();
    for (std::size_t a = 0; a < n; ++a) {
        EXPECT_TRUE(cc.leq[a][a]);
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b) {
                EXPECT_FALSE(cc.leq[a][b] && cc.leq[b][a]);
            }
            for (std::size_t c = 0; c < n; ++c)
                if (cc.leq[a][b] && cc.leq[b][c]) {
                    EXPECT_TRUE(cc.leq[a][c]);
                }
        }
    }
}

TEST(Scenario, ClosedUnderIntersection) {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        Scenario s = random_maximal_scenario(rng);
        ContextCategory cc = build_context_category(s);
        for (const auto& x : cc.elements)
            for (const auto& y : cc.elements) {
                CtxElement z = meet(s, x, y);
                ASSERT_TRUE(std::find(cc.elements.begin(), cc.elements.end(), z) != cc.elements.end());
                ASSERT_TRUE(contained_in(s, z, x));
                ASSERT_TRUE(contained_in(s, z, y));
            }
    }
}

TEST(Scenario, ReductionsAreIdempotentSubcategories) {
    Rng rng(8);
    std::vector<Scenario> cases = {chsh_scenario(), chsh_coarse(), n_cycle(5, 3), yu_oh_completed()};
    for (int k = 0; k < 20; ++k) cases.push_back(random_maximal_scenario(rng));
    for (int k = 0; k < 10; ++k) cases.push_back(random_coarse_scenario(rng));
    auto inside = [](const ContextCategory& sub, const ContextCategory& cc) {
        return std::all_of(sub.elements.begin(), sub.elements.end(), [&](const CtxElement& e) {
            return std::find(cc.elements.begin(), cc.elements.end(), e) != cc.elements.end();
        });
    };
    for (const auto& s : cases) {
        ContextCategory cc = build_context_category(s);
        ContextCategory down = downward_generated(cc), up = upward_generated(cc);
        EXPECT_TRUE(inside(down, cc));
        for (const auto& e : up.elements)
            EXPECT_TRUE(e.is_least() || std::any_of(cc.elements.begin(), cc.elements.end(), [&](const CtxElement& m) {
                return contained_in(s, e, m);
            }));
        for (int k : minimal_nontrivial_indices(cc))
            EXPECT_NE(std::find(up.elements.begin(), up.elements.end(), cc.elements[k]), up.elements.end());
        EXPECT_TRUE(same_elements(downward_generated(down), down));
        EXPECT_TRUE(same_elements(upward_generated(up), up));
        EXPECT_EQ(maximal_indices(down).size(), maximal_indices(cc).size());
    }
}

TEST(Scenario, ReductionsFixCatalogCategories) {
    // every subcontext here is an intersection of two maximal contexts and a join of two minimal ones
    for (const auto& s : {chsh_scenario(), n_cycle(5, 3), yu_oh_completed()}) {
        ContextCategory cc = build_context_category(s);
        EXPECT_TRUE(same_elements(downward_generated(cc), cc));
        EXPECT_TRUE(same_elements(upward_generated(cc), cc));
    }
    // the coarse variant has maximal contexts that no pair of minimal ones generates
    ContextCategory coarse = build_context_category(chsh_coarse());
    EXPECT_TRUE(same_elements(downward_generated(coarse), coarse));
    EXPECT_LT(upward_generated(coarse).size(), coarse.size());
}

TEST(Scenario, CompatibilityGraph) {
    Scenario s = small({{"a", "b", "c"}, {"c", "d", "e"}, {"f", "g"}});
    OrthoGraph g = compatibility_graph(s);
    EXPECT_EQ(g.size(), 7u);
    EXPECT_EQ(g.edges().size(), 7u);
    for (const auto& c : s.contexts) EXPECT_TRUE(is_clique(g, c));

    Scenario yo = yu_oh_completed();
    OrthoGraph gy = compatibility_graph(yo);
    EXPECT_EQ(gy.size(), 25u);
    EXPECT_EQ(yo.contexts.size(), 16u);
    // two orthogonal bases in dimension 3 share at most one ray, so no edge is counted twice
    EXPECT_EQ(gy.edges().size(), 48u);
}

TEST(Scenario, GyoMatchesConformalChordalOnRandomHypergraphs) {
    std::mt19937_64 gen(17);
    int acyclic = 0;
    for (int trial = 0; trial < 400; ++trial) {
        int m = 1 + static_cast<int>(gen() % 6), n = 2 + static_cast<int>(gen() % 7);
        std::vector<std::vector<int>> edges(m);
        for (auto& e : edges) {
            for (int v = 0; v < n; ++v)
                if (gen() % 3 == 0) e.push_back(v);
            if (e.empty()) e.push_back(static_cast<int>(gen() % n));
        }
        bool got = gyo_acyclic(edges);
        ASSERT_EQ(got, conformal_chordal(edges)) << "trial " << trial;
        acyclic += got;
    }
    EXPECT_GT(acyclic, 40);
    EXPECT_LT(acyclic, 390);
}

TEST(Scenario, AcyclicityMatchesOracleOnScenarios) {
    Rng rng(4);
    RandomOptions o;
    o.max_contexts = 6;
    for (int trial = 0; trial < 60; ++trial) {
        Scenario s = trial % 2 ? random_maximal_scenario(rng, o) : random_chordal_scenario(rng, o);
        ContextCategory cc = build_context_category(s);
        auto h = overlap_hypergraph(cc);
        if (h.vertices.size() > 16) continue;
        ASSERT_EQ(is_acyclic(cc), conformal_chordal(h.edges)) << "trial " << trial;
        if (trial % 2 == 0) {
            ASSERT_TRUE(is_acyclic(cc));
        }
    }
    EXPECT_TRUE(is_acyclic(build_context_category(acyclic_random(4, 3, 1))));
}

TEST(Scenario, TriangleOnACommonAtomIsAcyclic) {
    // three contexts through one atom: every cycle passes through a single shared event
    EXPECT_TRUE(is_acyclic(build_context_category(small({{"x", "a", "a2"}, {"x", "b", "b2"}, {"x", "c", "c2"}}))));
    EXPECT_FALSE(is_acyclic(build_context_category(small({{"p", "q", "a", "a2"}, {"q", "r", "b", "b2"}, {"r", "p", "c", "c2"}}))));
}

TEST(Scenario, CoarseGrainKeepsDimensions) {
    Scenario s = chsh_coarse();
    ASSERT_TRUE(s.has_dim());
    Scenario c = coarse_grain(s);
    EXPECT_TRUE(c.has_dim());
    for (int i = 0; i < c.num_contexts(); ++i) {
        long total = 0;
        for (int a : c.contexts[i]) total += c.dim[a];
        EXPECT_EQ(total, c.d);
    }
}
