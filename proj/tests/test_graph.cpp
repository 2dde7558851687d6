#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include <ksc/graph.hpp>

using namespace ksc;

namespace {

OrthoGraph random_graph(std::mt19937_64& gen, int n, int percent) {
    std::vector<std::string> labels;
    for (int v = 0; v < n; ++v) labels.push_back("v" + std::string(1, static_cast<char>('a' + v)));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (static_cast<int>(gen() % 100) < percent) edges.emplace_back(labels[u], labels[v]);
    return make_graph(labels, edges);
}

OrthoGraph complete_graph(int n) {
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int v = 0; v < n; ++v) labels.push_back("k" + std::to_string(v));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(labels[u], labels[v]);
    return make_graph(labels, edges);
}

OrthoGraph cycle_graph(int n) {
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int v = 0; v < n; ++v) labels.push_back("c" + std::to_string(v));
    for (int v = 0; v < n; ++v) edges.emplace_back(labels[v], labels[(v + 1) % n]);
    return make_graph(labels, edges);
}

// Plain backtracking in index order, no ordering heuristics.
bool colourable(const OrthoGraph& g, int k, std::vector<int>& col, int v) {
    if (v == static_cast<int>(g.size())) return true;
    for (int c = 0; c < k; ++c) {
        bool ok = true;
        for (int u = 0; u < v && ok; ++u)
            if (g.adjacent(u, v) && col[u] == c) ok = false;
        if (!ok) continue;
        col[v] = c;
        if (colourable(g, k, col, v + 1)) return true;
    }
    return false;
}

int brute_chi(const OrthoGraph& g) {
    std::vector<int> col(g.size(), -1);
    int k = 1;
    while (!colourable(g, k, col, 0)) ++k;
    return k;
}

VertexSet members(unsigned mask, int n) {
    VertexSet s;
    for (int v = 0; v < n; ++v)
        if (mask >> v & 1) s.push_back(v);
    return s;
}

std::set<VertexSet> brute_maximal_cliques(const OrthoGraph& g) {
    const int n = static_cast<int>(g.size());
    std::set<VertexSet> out;
    for (unsigned m = 1; m < (1u << n); ++m) {
        VertexSet s = members(m, n);
        if (!is_clique(g, s)) continue;
        bool maximal = true;
        for (int v = 0; v < n && maximal; ++v) {
            if (m >> v & 1) continue;
            VertexSet t = s;
            t.push_back(v);
            std::sort(t.begin(), t.end());
            if (is_clique(g, t)) maximal = false;
        }
        if (maximal) out.insert(s);
    }
    return out;
}

// Chordal iff no induced subgraph on >= 4 vertices is a cycle.
bool brute_chordal(const OrthoGraph& g) {
    const int n = static_cast<int>(g.size());
    for (unsigned m = 1; m < (1u << n); ++m) {
        VertexSet s = members(m, n);
        if (s.size() < 4) continue;
        bool two_regular = true;
        for (int v : s) {
            int deg = 0;
            for (int u : s) deg += g.adjacent(u, v);
            if (deg != 2) two_regular = false;
        }
        if (!two_regular) continue;
        // connected?
        std::vector<int> seen{s[0]};
        for (std::size_t h = 0; h < seen.size(); ++h)
            for (int u : s)
                if (g.adjacent(seen[h], u) && std::find(seen.begin(), seen.end(), u) == seen.end()) seen.push_back(u);
        if (seen.size() == s.size()) return false;
    }
    return true;
}

std::vector<Valuation> brute_valuations(const OrthoGraph& g, const std::vector<VertexSet>& cliques) {
    const int n = static_cast<int>(g.size());
    std::vector<Valuation> out;
    for (unsigned m = 0; m < (1u << n); ++m) {
        VertexSet s = members(m, n);
        if (!is_independent(g, s)) continue;
        bool hits = std::all_of(cliques.begin(), cliques.end(), [&](const VertexSet& c) {
            return std::count_if(c.begin(), c.end(), [&](int v) { return m >> v & 1; }) == 1;
        });
        if (hits) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Graph, LabelsSortedAndValidated) {
    OrthoGraph g = make_graph({"b", "a", "c"}, {{"a", "c"}});
    EXPECT_EQ(g.labels, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_TRUE(g.adjacent(0, 2));
    EXPECT_FALSE(g.adjacent(0, 1));
    EXPECT_THROW(make_graph({"a", "a"}, {}), error);
    EXPECT_THROW(make_graph({"a"}, {{"a", "a"}}), error);
    EXPECT_THROW(make_graph({"a", "b"}, {{"a", "b"}, {"b", "a"}}), error);
    EXPECT_THROW(make_graph({"a"}, {{"a", "z"}}), error);
}

TEST(Graph, CompleteAndOddCycle) {
    for (int n = 1; n <= 7; ++n) {
        auto r = chromatic_number(complete_graph(n));
        EXPECT_EQ(r.chi, n);
        EXPECT_TRUE(is_proper_colouring(complete_graph(n), r.colouring));
    }
    EXPECT_EQ(chromatic_number(cycle_graph(5)).chi, 3);
    EXPECT_EQ(chromatic_number(cycle_graph(6)).chi, 2);
    EXPECT_EQ(maximal_cliques(cycle_graph(5)).size(), 5u);
    EXPECT_EQ(clique_number(cycle_graph(5)), 2u);
    EXPECT_THROW(chromatic_number(OrthoGraph{}), error);
}

TEST(Graph, ChromaticNumberMatchesBruteForce) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + static_cast<int>(gen() % 12);
        int p = 20 + static_cast<int>(gen() % 70);
        OrthoGraph g = random_graph(gen, n, p);
        auto r = chromatic_number(g);
        ASSERT_EQ(r.chi, brute_chi(g)) << "trial " << trial;
        ASSERT_TRUE(is_proper_colouring(g, r.colouring));
        ASSERT_LT(*std::max_element(r.colouring.begin(), r.colouring.end()), r.chi);
        ASSERT_GE(static_cast<std::size_t>(r.chi), clique_number(g));
    }
}

TEST(Graph, ChromaticNumberIsDeterministic) {
    std::mt19937_64 gen(11);
    OrthoGraph g = random_graph(gen, 12, 50);
    auto a = chromatic_number(g), b = chromatic_number(g);
    EXPECT_EQ(a.chi, b.chi);
    EXPECT_EQ(a.colouring, b.colouring);
}

TEST(Graph, MaximalCliquesMatchBruteForce) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 150; ++trial) {
        OrthoGraph g = random_graph(gen, 1 + static_cast<int>(gen() % 10), 20 + static_cast<int>(gen() % 70));
        auto found = maximal_cliques(g);
        std::set<VertexSet> got(found.begin(), found.end());
        ASSERT_EQ(got.size(), found.size()) << "duplicate clique";
        ASSERT_EQ(got, brute_maximal_cliques(g)) << "trial " << trial;
    }
}

TEST(Graph, ChordalityMatchesBruteForce) {
    std::mt19937_64 gen(5);
    int chordal = 0;
    for (int trial = 0; trial < 200; ++trial) {
        OrthoGraph g = random_graph(gen, 1 + static_cast<int>(gen() % 10), 20 + static_cast<int>(gen() % 70));
        bool c = is_chordal(g);
        ASSERT_EQ(c, brute_chordal(g)) << "trial " << trial;
        chordal += c;
    }
    EXPECT_GT(chordal, 10);
    EXPECT_LT(chordal, 190);
    EXPECT_FALSE(is_chordal(cycle_graph(4)));
    EXPECT_TRUE(is_chordal(complete_graph(6)));
}

TEST(Graph, DColouringUsesAllColoursOnListedCliques) {
    OrthoGraph k3 = complete_graph(3);
    auto col = d_colouring(k3, {{0, 1, 2}}, 3);
    ASSERT_TRUE(col);
    EXPECT_TRUE(is_d_colouring(k3, {{0, 1, 2}}, 3, *col));
    EXPECT_FALSE(d_colouring(k3, {{0, 1, 2}}, 3, nullptr) == std::nullopt);
    EXPECT_THROW(d_colouring(k3, {{0, 1}}, 3), error);
    EXPECT_THROW(d_colouring(k3, {{0, 1, 2}}, 0), error);
    try {
        d_colouring(k3, {{0, 1}}, 3);
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::clique_size_mismatch);
    }
}

TEST(Graph, ColourClassesAreValuations) {
    // Two triangles sharing a vertex, plus a pendant edge.
    OrthoGraph g = make_graph({"a", "b", "c", "d", "e"},
                              {{"a", "b"}, {"a", "c"}, {"b", "c"}, {"c", "d"}, {"c", "e"}, {"d", "e"}});
    std::vector<VertexSet> cliques = {{0, 1, 2}, {2, 3, 4}};
    auto col = d_colouring(g, cliques, 3);
    ASSERT_TRUE(col);
    for (int c = 0; c < 3; ++c) {
        Valuation v;
        for (int x = 0; x < 5; ++x)
            if ((*col)[x] == c) v.push_back(x);
        EXPECT_TRUE(is_valuation(g, cliques, v));
    }
}

TEST(Graph, OddCoverHasNoValuation) {
    OrthoGraph g = complete_graph(3);
    std::vector<VertexSet> edges = {{0, 1}, {1, 2}, {0, 2}};
    EXPECT_FALSE(ks_colouring(g, edges));
    EXPECT_TRUE(enumerate_valuations(g, edges).empty());
    EXPECT_EQ(enumerate_valuations(g, {{0, 1, 2}}).size(), 3u);
}

TEST(Graph, ValuationsMatchBruteForce) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 150; ++trial) {
        OrthoGraph g = random_graph(gen, 1 + static_cast<int>(gen() % 11), 30 + static_cast<int>(gen() % 60));
        auto cliques = maximal_cliques(g);
        auto vals = enumerate_valuations(g, cliques);
        ASSERT_EQ(vals, brute_valuations(g, cliques)) << "trial " << trial;
        for (const auto& v : vals) ASSERT_TRUE(is_valuation(g, cliques, v));
        ASSERT_EQ(ks_colouring(g, cliques).has_value(), !vals.empty());
    }
}

TEST(Graph, ValuationCap) {
    // Four disjoint edges: 16 valuations.
    OrthoGraph g = make_graph({"a", "b", "c", "d", "e", "f", "g", "h"},
                              {{"a", "b"}, {"c", "d"}, {"e", "f"}, {"g", "h"}});
    auto cliques = maximal_cliques(g);
    EXPECT_EQ(enumerate_valuations(g, cliques).size(), 16u);
    try {
        enumerate_valuations(g, cliques, 10);
        FAIL() << "cap not enforced";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::cap_exceeded);
    }
}

TEST(Graph, Dimacs) {
    std::string text = to_dimacs(cycle_graph(4));
    EXPECT_NE(text.find("p edge 4 4"), std::string::npos);
    EXPECT_NE(text.find("c v 1 c0\n"), std::string::npos);
    std::size_t edges = 0;
    for (std::size_t p = text.find("\ne "); p != std::string::npos; p = text.find("\ne ", p + 1)) ++edges;
    EXPECT_EQ(edges, 4u);
}
