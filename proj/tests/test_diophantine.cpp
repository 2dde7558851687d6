#include <gtest/gtest.h>

#include <random>

#include <ksc/catalog.hpp>
#include <ksc/correlations.hpp>
#include <ksc/diophantine.hpp>
#include <ksc/lp.hpp>

using namespace ksc;

namespace {

OrthoGraph complete_graph(int n) {
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int v = 0; v < n; ++v) labels.push_back("k" + std::to_string(v));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(labels[u], labels[v]);
    return make_graph(labels, edges);
}

OrthoGraph random_graph(std::mt19937_64& gen, int n, int percent) {
    std::vector<std::string> labels;
    for (int v = 0; v < n; ++v) labels.push_back("v" + std::to_string(v));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (static_cast<int>(gen() % 100) < percent) edges.emplace_back(labels[u], labels[v]);
    return make_graph(labels, edges);
}

bool satisfies(const DimSolution& s, const std::vector<VertexSet>& cliques) {
    if (std::any_of(s.dims.begin(), s.dims.end(), [](long x) { return x < 1; })) return false;
    return std::all_of(cliques.begin(), cliques.end(), [&](const VertexSet& c) {
        long t = 0;
        for (int v : c) t += s.dims[v];
        return t == s.d;
    });
}

// Is there a strictly positive rational weighting summing to one on every clique?
// Scale-free form: x_v >= 1 and every clique sums to the same t.
bool positive_state_exists(std::size_t n, const std::vector<VertexSet>& cliques) {
    const std::size_t cols = 2 * n + 1; // x, slack, t
    std::vector<std::vector<rational>> a;
    std::vector<rational> b;
    for (const auto& c : cliques) {
        std::vector<rational> row(cols, 0);
        for (int v : c) row[v] = 1;
        row[2 * n] = -1;
        a.push_back(row);
        b.push_back(0);
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<rational> row(cols, 0);
        row[v] = 1;
        row[n + v] = -1;
        a.push_back(row);
        b.push_back(1);
    }
    return feasible_point(a, b).has_value();
}

std::size_t rational_rank(const IntMatrix& m) {
    if (m.empty()) return 0;
    std::vector<std::vector<rational>> a;
    for (const auto& r : m) {
        std::vector<rational> row;
        for (const auto& x : r) row.emplace_back(x);
        a.push_back(row);
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < a[0].size() && rank < a.size(); ++c) {
        std::size_t p = rank;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = 0; r < a.size(); ++r)
            if (r != rank && a[r][c] != 0) {
                rational f = a[r][c] / a[rank][c];
                for (std::size_t k = 0; k < a[r].size(); ++k) a[r][k] -= f * a[rank][k];
            }
        ++rank;
    }
    return rank;
}

} // namespace

TEST(Diophantine, CompleteGraphs) {
    for (int n = 1; n <= 6; ++n) {
        OrthoGraph g = complete_graph(n);
        DimSolution s = solve_dimension_function(g, maximal_cliques(g), default_d_max);
        EXPECT_EQ(s.d, n);
        EXPECT_EQ(s.dims, std::vector<long>(n, 1));
    }
    OrthoGraph k3 = complete_graph(3);
    EXPECT_EQ(all_dimension_functions(k3, maximal_cliques(k3), 3).size(), 1u);
}

TEST(Diophantine, YuOhCompleted) {
    Scenario yo = yu_oh_completed();
    OrthoGraph g = orthogonality_graph(yo);
    DimSolution s = solve_dimension_function(g, yo.contexts, default_d_max);
    EXPECT_EQ(s.d, 3);
    EXPECT_EQ(s.dims, std::vector<long>(g.size(), 1));
    EXPECT_TRUE(all_dimension_functions(g, yo.contexts, 2).empty());
}

TEST(Diophantine, ForcedZero) {
    OrthoGraph g = complete_graph(3);
    std::vector<VertexSet> cliques = {{0, 1}, {0, 1, 2}};
    EXPECT_EQ(forced_zero(clique_system(g, cliques)), std::vector<std::string>{"k2"});
    try {
        solve_dimension_function(g, cliques, default_d_max);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::no_solution_up_to);
    }
    EXPECT_FALSE(positive_state_exists(3, cliques));
}

TEST(Diophantine, CoarseGadgetHasTwoSolutions) {
    // a 3-atom context next to a coarse-grained one {p1, p2}
    OrthoGraph g = make_graph({"a", "b", "c", "p1", "p2"}, {{"a", "b"}, {"a", "c"}, {"b", "c"}, {"p1", "p2"}});
    auto cliques = maximal_cliques(g);
    auto all = all_dimension_functions(g, cliques, 3);
    ASSERT_EQ(all.size(), 2u);
    EXPECT_EQ(all[0].dims, (std::vector<long>{1, 1, 1, 1, 2}));
    EXPECT_EQ(all[1].dims, (std::vector<long>{1, 1, 1, 2, 1}));
    DimSolution best = solve_dimension_function(g, cliques, default_d_max);
    EXPECT_EQ(best.d, 3);
    EXPECT_EQ(best.dims, all[0].dims);
    try {
        all_dimension_functions(g, cliques, 3, 1);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::cap_exceeded);
    }
}

TEST(Diophantine, EmptySystemIsVacuous) {
    OrthoGraph g = make_graph({"a"}, {});
    auto all = all_dimension_functions(g, {}, 1);
    ASSERT_EQ(all.size(), 1u);
    EXPECT_EQ(all[0].dims, std::vector<long>{1});
}

TEST(Diophantine, MinimalAndExactOnRandomGraphs) {
    std::mt19937_64 gen(23);
    int solvable = 0, unsolvable = 0;
    for (int trial = 0; trial < 150; ++trial) {
        OrthoGraph g = random_graph(gen, 2 + static_cast<int>(gen() % 7), 25 + static_cast<int>(gen() % 60));
        auto cliques = maximal_cliques(g);
        bool state = positive_state_exists(g.size(), cliques);
        std::optional<DimSolution> s;
        try {
            s = solve_dimension_function(g, cliques, 24);
        } catch (const error& e) {
            ASSERT_EQ(e.code(), errc::no_solution_up_to);
        }
        ASSERT_EQ(s.has_value(), state) << "trial " << trial;
        if (!s) {
            ++unsolvable;
            continue;
        }
        ++solvable;
        ASSERT_TRUE(satisfies(*s, cliques));
        for (long d = static_cast<long>(clique_number(g)); d < s->d; ++d)
            ASSERT_TRUE(all_dimension_functions(g, cliques, d).empty()) << "trial " << trial << " d " << d;
        // lexicographically least at that d
        auto all = all_dimension_functions(g, cliques, s->d);
        ASSERT_FALSE(all.empty());
        for (const auto& t : all) ASSERT_TRUE(satisfies(t, cliques));
        ASSERT_EQ(std::min_element(all.begin(), all.end(), [](const DimSolution& x, const DimSolution& y) {
                      return x.dims < y.dims;
                  })->dims,
                  s->dims);
    }
    EXPECT_GT(solvable, 20);
    EXPECT_GT(unsolvable, 5);
}

TEST(Diophantine, SolutionGivesTheMaximallyMixedState) {
    Rng rng(15);
    for (int k = 0; k < 30; ++k) {
        Scenario s = ensure_dims(random_coarse_scenario(rng));
        State st = maximally_mixed_state(s);
        EXPECT_TRUE(check_no_disturbance(st, s));
        for (const auto& row : st.probs)
            for (const auto& p : row) EXPECT_GT(p, 0);
    }
}

TEST(Diophantine, HermiteNormalForm) {
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + gen() % 5, cols = 1 + gen() % 6;
        IntMatrix a(rows, std::vector<bigint>(cols));
        for (auto& r : a)
            for (auto& x : r) x = static_cast<long>(gen() % 11) - 5;
        IntMatrix h = hermite_normal_form(a);
        ASSERT_EQ(h.size(), rational_rank(a));
        ASSERT_EQ(hermite_normal_form(h), h);
        // the form is a lattice invariant: unimodular row operations do not change it
        IntMatrix b = a;
        for (int op = 0; op < 10 && rows > 1; ++op) {
            std::size_t i = gen() % rows, j = gen() % rows;
            if (i == j) continue;
            long f = static_cast<long>(gen() % 7) - 3;
            for (std::size_t c = 0; c < cols; ++c) b[i][c] += f * b[j][c];
            if (gen() % 2) std::swap(b[i], b[j]);
        }
        ASSERT_EQ(hermite_normal_form(b), h);
        std::size_t last = 0;
        for (std::size_t r = 0; r < h.size(); ++r) {
            std::size_t p = 0;
            while (h[r][p] == 0) ++p;
            ASSERT_GT(h[r][p], 0);
            if (r > 0) {
                ASSERT_GT(p, last);
            }
            for (std::size_t q = 0; q < r; ++q) {
                ASSERT_GE(h[q][p], 0);
                ASSERT_LT(h[q][p], h[r][p]);
            }
            last = p;
        }
    }
}
