// Built with -mgeneral-regs-only: any float or double reaching code generation in the
// core headers breaks the build. Running it exercises the same paths end to end.

#include <cstdio>

#include <ksc/catalog.hpp>
#include <ksc/correlations.hpp>
#include <ksc/diophantine.hpp>
#include <ksc/extension.hpp>
#include <ksc/graph.hpp>
#include <ksc/ks_decision.hpp>
#include <ksc/lp.hpp>
#include <ksc/realization.hpp>
#include <ksc/scenario.hpp>

using namespace ksc;

namespace {

int bad = 0;

void check(bool ok, const char* what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what);
    if (!ok) ++bad;
}

} // namespace

int main() {
    auto [g13, r13] = graph_from_vectors(yu_oh(13));
    auto [g15, r15] = graph_from_vectors(yu_oh(15));
    check(chromatic_number(g13).chi == 4 && chromatic_number(g15).chi == 3, "Yu-Oh chromatic numbers");
    Completion c = complete(r13);
    check(c.graph.size() == 25 && c.contexts.size() == 16 && is_unital(c.realisation, c.contexts), "Yu-Oh completion");
    check(is_freely_completable(g13, r13).ok, "Yu-Oh free completion");

    Scenario yo = yu_oh_completed();
    KsVerdict v = is_ks_contextual(yo);
    check(v.contextual && verify_verdict(v), "Yu-Oh contextual");
    check(ks_colouring(orthogonality_graph(yo), yo.contexts).has_value(), "Yu-Oh valuation");
    check(!separating_classical_state(yo), "Yu-Oh has no separating state");

    auto [s, e] = chsh();
    check(verify_embedding(s, e), "CHSH embedding");
    ClassicalityReport r = classify(s);
    check(r.label == Classicality::ks_noncontextual_nonclassical, "CHSH label");
    State pr = pr_box(s);
    check(check_no_disturbance(pr, s) && !stab_membership(pr, s), "PR box outside STAB");
    FunctionalValue fv = evaluate_functional(pr, chsh_functional(s), s);
    check(fv.value == 4 && fv.classical_max == 3, "CHSH functional");
    auto lp = classical_max_lp(chsh_functional(s), s);
    check(lp && *lp == 3, "CHSH functional by simplex");
    auto sep = separating_classical_state(s);
    check(sep && is_separating(sep->state, s) && reproduces(sep->model, sep->state, s), "CHSH separating state");

    for (int n = 3; n <= 7; ++n) {
        Scenario cyc = n_cycle(n, 3);
        auto fs = flat_connection_search(build_context_category(cyc));
        check(fs.connection && verify_connection(cyc, *fs.connection) && !is_ks_contextual(cyc).contextual, "n-cycle");
    }

    Rng rng(99);
    for (int k = 0; k < 10; ++k) {
        Scenario t = random_chordal_scenario(rng);
        State st = random_state(t, rng);
        auto cm = stab_membership(st, t);
        check(cm && reproduces(*cm, st, t), "chordal state classical");
    }

    OrthoGraph yg = orthogonality_graph(yo);
    DimSolution sol = solve_dimension_function(yg, yo.contexts, default_d_max);
    check(sol.d == 3, "Yu-Oh dimension function");
    Scenario coarse = chsh_coarse();
    check(!is_ks_contextual(coarse).contextual, "coarse CHSH noncontextual");
    auto cc = build_context_category(coarse);
    check(same_elements(downward_generated(cc), cc) && !is_ks_contextual(scenario_of(upward_generated(cc))).contextual,
          "coarse CHSH reductions");
    return bad == 0 ? 0 : 1;
}
