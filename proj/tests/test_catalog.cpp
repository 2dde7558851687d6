#include <gtest/gtest.h>

#include <set>

#include <ksc/catalog.hpp>
#include <ksc/correlations.hpp>
#include <ksc/ks_decision.hpp>

using namespace ksc;

namespace {

errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    return errc::bad_input;
}

std::size_t shared(const Scenario& s, int i, int j) {
    std::size_t n = 0;
    for (int a : s.contexts[i]) n += std::binary_search(s.contexts[j].begin(), s.contexts[j].end(), a);
    return n;
}

} // namespace

TEST(Catalog, ChshEmbedding) {
    auto [s, e] = chsh();
    EXPECT_EQ(e.lambda_points.size(), 16u);
    EXPECT_TRUE(verify_embedding(s, e));
    // each sample point picks one atom per context: a valuation
    OrthoGraph g = orthogonality_graph(s);
    std::set<Valuation> seen;
    for (const auto& pt : e.lambda_points) {
        Valuation v;
        for (const auto& [atom, sup] : e.event_supports)
            if (std::find(sup.begin(), sup.end(), pt) != sup.end()) v.push_back(g.at(atom));
        std::sort(v.begin(), v.end());
        EXPECT_TRUE(is_valuation(g, s.contexts, v)) << pt;
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 16u);
}

TEST(Catalog, EmbeddingMutationsAreCaught) {
    auto [s, e] = chsh();
    EmbeddingTable dropped = e;
    dropped.lambda_points.pop_back();
    EXPECT_FALSE(verify_embedding(s, dropped));

    EmbeddingTable moved = e;
    auto& sup = moved.event_supports.begin()->second;
    std::string pt = sup.back();
    sup.pop_back();
    EXPECT_FALSE(verify_embedding(s, moved));
    auto other = std::next(moved.event_supports.begin());
    other->second.push_back(pt);
    EXPECT_FALSE(verify_embedding(s, moved));

    EmbeddingTable missing = e;
    missing.event_supports.erase(missing.event_supports.begin());
    EXPECT_FALSE(verify_embedding(s, missing));

    EmbeddingTable stray = e;
    stray.event_supports.begin()->second.push_back("9,9");
    EXPECT_FALSE(verify_embedding(s, stray));
}

TEST(Catalog, ChshShapes) {
    Scenario s = chsh_scenario();
    EXPECT_EQ(s.num_contexts(), 4);
    EXPECT_EQ(s.atoms.size(), 16u);
    EXPECT_EQ(s.d, 4);
    for (const auto& c : s.contexts) EXPECT_EQ(c.size(), 4u);
    // neighbouring contexts share the marginal events of one party, not atoms
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) EXPECT_EQ(shared(s, i, j), 0u);
    EXPECT_FALSE(s.overlap[chsh_context(s, 0, 0)][chsh_context(s, 0, 1)].trivial());
    EXPECT_FALSE(s.overlap[chsh_context(s, 0, 0)][chsh_context(s, 1, 0)].trivial());
    EXPECT_TRUE(s.overlap[chsh_context(s, 0, 0)][chsh_context(s, 1, 1)].trivial());

    Scenario c = chsh_coarse();
    EXPECT_EQ(c.num_contexts(), 4);
    EXPECT_EQ(c.d, 4);
    for (const auto& ctx : c.contexts) {
        long total = 0;
        for (int a : ctx) total += c.dim[a];
        EXPECT_EQ(total, 4);
    }
}

TEST(Catalog, PrBoxAndTsirelson) {
    Scenario s = chsh_scenario();
    State pr = pr_box(s);
    EXPECT_TRUE(check_no_disturbance(pr, s));
    for (const auto& row : pr.probs) {
        int half = 0;
        for (const auto& x : row) {
            EXPECT_TRUE(x == 0 || x == ratio(1, 2));
            half += x == ratio(1, 2);
        }
        EXPECT_EQ(half, 2);
    }
    ApproxState t = tsirelson_approx(s);
    EXPECT_TRUE(t.approx);
    for (const auto& row : t.state.probs)
        for (const auto& x : row) EXPECT_TRUE(x == ratio(853, 2000) || x == ratio(147, 2000));
}

TEST(Catalog, YuOhVectors) {
    for (int variant : {13, 15}) {
        auto vs = yu_oh(variant);
        ASSERT_EQ(vs.size(), static_cast<std::size_t>(variant));
        std::set<RationalVector> rays;
        for (const auto& [l, v] : vs) {
            ASSERT_EQ(v.size(), 3u);
            for (const auto& x : v) EXPECT_TRUE(x >= -2 && x <= 2);
            rays.insert(canonical_ray(v));
        }
        EXPECT_EQ(rays.size(), vs.size());
    }
    EXPECT_TRUE(yu_oh(13).count("h0"));
    EXPECT_FALSE(yu_oh(15).count("h0"));
    EXPECT_EQ(code_of([] { yu_oh(14); }), errc::bad_input);
    Scenario yo = yu_oh_completed();
    EXPECT_EQ(ensure_dims(yo).d, 3);
    for (const auto& c : yo.contexts) EXPECT_EQ(c.size(), 3u);
}

TEST(Catalog, NCycleOverlaps) {
    for (int n = 3; n <= 7; ++n)
        for (int d = 3; d <= 5; ++d) {
            std::vector<int> sizes(n);
            for (int i = 0; i < n; ++i) sizes[i] = (i % 2) ? 0 : 1 + (d > 4);
            if (n % 2) sizes[n - 1] = 0;
            Scenario s = n_cycle(n, d, sizes);
            ASSERT_EQ(s.num_contexts(), n);
            for (const auto& c : s.contexts) ASSERT_EQ(static_cast<int>(c.size()), d);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    std::size_t want = 0;
                    if (j == (i + 1) % n) want = sizes[i];
                    if (i == (j + 1) % n) want = sizes[j];
                    ASSERT_EQ(shared(s, i, j), want) << n << " " << d << " " << i << " " << j;
                }
        }
    EXPECT_EQ(n_cycle(5, 3).atoms.size(), 10u);
    EXPECT_EQ(code_of([] { n_cycle(2, 3); }), errc::invalid_overlap);
    EXPECT_EQ(code_of([] { n_cycle(4, 3, {2, 0, 0, 0}); }), errc::invalid_overlap);
    EXPECT_EQ(code_of([] { n_cycle(4, 4, {2, 2, 0, 0}); }), errc::invalid_overlap);
    EXPECT_EQ(code_of([] { n_cycle(4, 3, {1, 1}); }), errc::invalid_overlap);
    EXPECT_EQ(code_of([] { n_cycle(4, 3, {-1, 1, 1, 1}); }), errc::invalid_overlap);
}

TEST(Catalog, DichotomicCycle) {
    for (int n = 3; n <= 6; ++n) {
        Scenario s = n_cycle_dichotomic(n);
        EXPECT_EQ(s.num_contexts(), n);
        EXPECT_EQ(s.atoms.size(), static_cast<std::size_t>(4 * n));
        EXPECT_EQ(s.events.size(), static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) EXPECT_FALSE(s.overlap[i][(i + 1) % n].trivial());
        EXPECT_FALSE(is_ks_contextual(s).contextual);
    }
    EXPECT_EQ(code_of([] { n_cycle_dichotomic(2); }), errc::invalid_overlap);
}

TEST(Catalog, AcyclicRandomIsFullyClassical) {
    for (int k = 1; k <= 5; ++k)
        for (int d = 2; d <= 4; ++d) {
            Scenario s = acyclic_random(k, d, static_cast<std::uint64_t>(k * 10 + d));
            ASSERT_EQ(s.atoms.size(), static_cast<std::size_t>(k * d));
            ClassicalityReport r = classify(s);
            ASSERT_EQ(r.label, Classicality::fully_classical);
            ASSERT_EQ(r.chi_Gstar, d);
            Scenario again = acyclic_random(k, d, static_cast<std::uint64_t>(k * 10 + d));
            ASSERT_EQ(again.atoms, s.atoms);
            ASSERT_EQ(again.contexts, s.contexts);
        }
    EXPECT_EQ(code_of([] { acyclic_random(0, 3, 1); }), errc::bad_input);
}

TEST(Catalog, RandomGenerators) {
    Rng a(8), b(8);
    for (int k = 0; k < 30; ++k) {
        Scenario x = random_maximal_scenario(a), y = random_maximal_scenario(b);
        ASSERT_EQ(x.contexts, y.contexts);
        ASSERT_TRUE(x.is_maximal());
        Scenario c = random_chordal_scenario(a);
        random_chordal_scenario(b);
        ASSERT_TRUE(is_acyclic(build_context_category(ensure_dims(c))));
        Scenario coarse = random_coarse_scenario(a);
        random_coarse_scenario(b);
        ASSERT_NO_THROW(ensure_dims(coarse));
    }
}

TEST(Catalog, RandomStatesAreNonDisturbing) {
    Rng rng(12);
    for (int k = 0; k < 60; ++k) {
        Scenario s = random_chordal_scenario(rng);
        State st = random_state(s, rng);
        ASSERT_TRUE(check_no_disturbance(st, s));
        for (const auto& row : st.probs)
            for (const auto& x : row) ASSERT_GE(x, 0);
    }
    // on a cycle the last context may be overfull; then the draw is refused, never wrong
    int drawn = 0, refused = 0;
    for (int k = 0; k < 60; ++k) {
        Scenario s = n_cycle(3 + k % 4, 3 + k % 2);
        try {
            ASSERT_TRUE(check_no_disturbance(random_state(s, rng), s));
            ++drawn;
        } catch (const error& e) {
            ASSERT_EQ(e.code(), errc::bad_input);
            ++refused;
        }
    }
    EXPECT_GT(drawn, 0);
    EXPECT_EQ(code_of([] {
                  Rng r(1);
                  random_state(n_cycle_dichotomic(4), r);
              }),
              errc::bad_input);
}

TEST(Catalog, Names) {
    auto names = catalog_names();
    std::set<std::string> unique(names.begin(), names.end());
    EXPECT_EQ(unique.size(), names.size());
    for (const char* n : {"chsh", "yu_oh13", "yu_oh_completed", "ncycle5_3"}) EXPECT_TRUE(unique.count(n)) << n;
}
