// ksc: command-line front end. JSON in, JSON out; see README for the formats.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <string>

#include <CLI11.hpp>

#include <ksc/ksc.hpp>

namespace {

using ksc::json;

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_negative = 2; // contextual, infeasible, not a member
constexpr int exit_usage = 64;

json read_json(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) ksc::fail(ksc::errc::bad_input, "cannot open '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        ksc::fail(ksc::errc::bad_input, std::string("invalid JSON in '") + path + "': " + e.what());
    }
}

bool pretty = false;

void print_table(const json& j, const std::string& prefix) {
    for (const auto& [k, v] : j.items()) {
        std::string key = prefix.empty() ? k : prefix + "." + k;
        if (v.is_object() && v.size() <= 8 && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); }))
            print_table(v, key);
        else if (v.is_primitive())
            std::cout << std::left << std::setw(28) << key << ' ' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        else
            std::cout << std::left << std::setw(28) << key << ' ' << '[' << v.size() << " entries]\n";
    }
}

void emit(const json& j) {
    if (pretty && j.is_object())
        print_table(j, "");
    else
        std::cout << j.dump() << '\n';
}

// Anything that describes a scenario: Scenario JSON, a graph (contexts = its clique list), or a
// vector file (contexts = maximal cliques of the completion).
ksc::Scenario scenario_input(const json& j) {
    if (j.contains("atoms")) return ksc::scenario_from_json(j);
    if (j.contains("vertices")) {
        auto in = ksc::graph_from_json(j);
        return ksc::scenario_from_cliques(in.graph, in.cliques);
    }
    if (j.contains("vectors")) {
        auto [g, r] = ksc::graph_from_vectors(ksc::vectors_from_json(j));
        ksc::Completion c = ksc::complete(r);
        return ksc::scenario_from_cliques(c.graph, c.contexts);
    }
    ksc::fail(ksc::errc::bad_input, "expected a scenario, graph or vector file");
}

// Graph plus authoritative clique list. Vectors give the raw orthogonality graph (no completion).
ksc::GraphInput graph_input(const json& j) {
    if (j.contains("vertices")) return ksc::graph_from_json(j);
    if (j.contains("vectors")) {
        ksc::GraphInput in;
        in.graph = ksc::graph_from_vectors(ksc::vectors_from_json(j)).first;
        in.cliques = ksc::maximal_cliques(in.graph);
        return in;
    }
    if (j.contains("atoms")) {
        ksc::Scenario s = ksc::scenario_from_json(j);
        ksc::GraphInput in;
        in.graph = ksc::orthogonality_graph(s);
        in.cliques = s.contexts;
        in.explicit_cliques = true;
        return in;
    }
    ksc::fail(ksc::errc::bad_input, "expected a graph, scenario or vector file");
}

json state_input(const json& j) { return j.contains("state") && j.size() <= 2 ? j["state"] : j; }

json catalog_entry(const std::string& name) {
    using namespace ksc;
    if (name == "chsh") return scenario_json(chsh_scenario());
    if (name == "chsh_coarse") return scenario_json(chsh_coarse());
    if (name == "chsh_embedding")
        return embedding_bundle(chsh_scenario(), chsh_embedding());
    if (name == "chsh_pr_box") return state_json(pr_box(chsh_scenario()), chsh_scenario());
    if (name == "chsh_functional") return functional_json(chsh_functional(chsh_scenario()), chsh_scenario());
    if (name == "chsh_tsirelson") {
        Scenario s = chsh_scenario();
        ApproxState a = tsirelson_approx(s);
        return {{"approx", a.approx}, {"state", state_json(a.state, s)}};
    }
    if (name == "yu_oh13") return vectors_json(yu_oh(13), 3);
    if (name == "yu_oh15") return vectors_json(yu_oh(15), 3);
    if (name == "yu_oh_completed") return scenario_json(yu_oh_completed());
    if (name == "ncycle5_3") return scenario_json(n_cycle(5, 3));
    if (name == "ncycle5_dichotomic") return scenario_json(n_cycle_dichotomic(5));
    fail(errc::bad_input, "unknown catalog entry '" + name + "'");
}

json schemas() {
    return json::parse(R"({
  "rational": {"oneOf": [{"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"}, {"type": "integer"}]},
  "scenario": {
    "type": "object", "required": ["atoms", "max_contexts"],
    "properties": {
      "atoms": {"type": "array", "items": {"type": "string"}},
      "max_contexts": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
      "events": {"type": "object", "description": "coarse event name -> its atom decompositions, one per context",
                 "additionalProperties": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}},
      "dim": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}},
      "d": {"type": "integer", "minimum": 1}}},
  "graph": {
    "type": "object", "required": ["vertices", "edges"],
    "properties": {
      "vertices": {"type": "array", "items": {"type": "string"}},
      "edges": {"type": "array", "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}},
      "cliques": {"type": "array", "description": "authoritative context list; maximal cliques when absent",
                  "items": {"type": "array", "items": {"type": "string"}}}}},
  "vectors": {
    "type": "object", "required": ["d", "vectors"],
    "properties": {
      "d": {"type": "integer", "minimum": 1},
      "vectors": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": ["integer", "string"]}}}}},
  "state": {"type": "object", "description": "comma-joined context atoms -> atom -> rational",
            "additionalProperties": {"type": "object", "additionalProperties": {"$ref": "#/rational"}}},
  "functional": {"type": "object", "description": "sparse; same keys as state",
                 "additionalProperties": {"type": "object", "additionalProperties": {"$ref": "#/rational"}}},
  "correlation": {"type": "object", "additionalProperties": {"$ref": "#/rational"}},
  "classical_model": {
    "type": "object", "required": ["valuations", "weights"],
    "properties": {
      "valuations": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
      "weights": {"type": "object", "description": "valuation index -> weight", "additionalProperties": {"$ref": "#/rational"}}}},
  "dim_solution": {
    "type": "object", "required": ["d", "dims"],
    "properties": {"d": {"type": "integer"}, "dims": {"type": "object", "additionalProperties": {"type": "integer"}}}},
  "classicality_report": {
    "type": "object", "required": ["label", "acyclic", "chi_Gstar", "d"],
    "properties": {
      "label": {"enum": ["FULLY_CLASSICAL", "KS_NONCONTEXTUAL_WITH_NONCLASSICAL_CORRELATIONS", "KS_CONTEXTUAL"]},
      "acyclic": {"type": "boolean"}, "vorobev": {"type": "boolean"},
      "chi_Gstar": {"type": "integer"}, "d": {"type": "integer"},
      "witness": {"type": "object"}, "obstruction": {"type": "object"}}}
})");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ksc: exact Kochen-Specker contextuality toolkit"};
    app.require_subcommand(0, 1);
    bool schema = false;
    app.add_flag("--pretty", pretty, "human-readable table instead of JSON");
    app.add_flag("--schema", schema, "print JSON schemas of the file formats and exit");

    std::string input, state_path, functional_path, correlation_path, name;
    long d = 0, d_max = ksc::default_d_max;
    std::size_t cap = ksc::default_valuation_cap;
    std::uint64_t budget = ksc::default_connection_budget;
    bool all = false, ks = false, dimacs = false;

    auto* analyze = app.add_subcommand("analyze", "classicality report of a scenario");
    auto* chromatic = app.add_subcommand("chromatic", "exact chromatic number with a witness colouring");
    auto* color = app.add_subcommand("color", "d-colouring (or KS-colouring with --ks) over the context cliques");
    auto* ks_check = app.add_subcommand("ks-check", "KS verdict through d-colouring of the maximal extension");
    auto* conn = app.add_subcommand("connection-check", "flat context connection search on the maximal extension");
    auto* acyclic = app.add_subcommand("acyclic", "acyclicity of the context category");
    auto* complete = app.add_subcommand("complete", "faithful completion of a vector realisation");
    auto* extend = app.add_subcommand("extend", "maximal extension of a scenario");
    auto* dimfn = app.add_subcommand("dimfn", "dimension functions of a graph or scenario");
    auto* stab = app.add_subcommand("stab-check", "classical model for a state or correlation");
    auto* qstab = app.add_subcommand("qstab-check", "clique inequalities for a correlation");
    auto* separate = app.add_subcommand("separate", "classical state separating all events");
    auto* functional = app.add_subcommand("functional", "value and classical maximum of a linear functional");
    auto* catalog = app.add_subcommand("catalog", "built-in scenarios");
    auto* verify = app.add_subcommand("verify", "replay a witness bundle");
    auto* cat_list = catalog->add_subcommand("list", "list catalog entries");
    auto* cat_export = catalog->add_subcommand("export", "write a catalog entry");
    catalog->require_subcommand(1);
    cat_export->add_option("name", name, "entry name")->required();
    (void)cat_list;

    for (auto* sc : {analyze, chromatic, color, ks_check, conn, acyclic, complete, extend, dimfn, stab, qstab, separate,
                     functional, verify})
        sc->add_option("input", input, "input file, '-' for stdin")->required();
    color->add_option("--d", d, "number of colours");
    color->add_flag("--ks", ks, "search for a KS-colouring (valuation) instead");
    chromatic->add_flag("--dimacs", dimacs, "print the graph in DIMACS format instead");
    conn->add_option("--budget", budget, "search node budget")->check(CLI::PositiveNumber);
    dimfn->add_option("--d-max", d_max, "largest d tried")->check(CLI::PositiveNumber);
    dimfn->add_flag("--all", all, "enumerate every solution at --d");
    dimfn->add_option("--d", d, "fixed d for --all");
    dimfn->add_option("--cap", cap, "enumeration cap")->check(CLI::PositiveNumber);
    stab->add_option("--state", state_path, "state file (scenario input)");
    stab->add_option("--correlation", correlation_path, "correlation file (graph input)");
    stab->add_option("--cap", cap, "valuation cap")->check(CLI::PositiveNumber);
    qstab->add_option("--correlation", correlation_path, "correlation file")->required();
    separate->add_option("--cap", cap, "valuation cap")->check(CLI::PositiveNumber);
    functional->add_option("--state", state_path, "state file")->required();
    functional->add_option("--functional", functional_path, "functional file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (schema) {
            emit(schemas());
            return exit_ok;
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return exit_usage;
        }
        if (*analyze) {
            ksc::Scenario s = ksc::ensure_dims(scenario_input(read_json(input)));
            ksc::ClassicalityReport r = ksc::classify(s);
            emit(pretty ? ksc::report_json(r) : ksc::report_bundle(s, r));
            return r.verdict.contextual ? exit_negative : exit_ok;
        }
        if (*chromatic) {
            auto in = graph_input(read_json(input));
            if (dimacs) {
                std::cout << ksc::to_dimacs(in.graph);
                return exit_ok;
            }
            emit(ksc::chromatic_bundle(in.graph, in.cliques, ksc::chromatic_number(in.graph)));
            return exit_ok;
        }
        if (*color) {
            auto in = graph_input(read_json(input));
            if (ks) {
                auto v = ksc::ks_colouring(in.graph, in.cliques);
                emit(ksc::valuation_bundle(in.graph, in.cliques, v));
                return v ? exit_ok : exit_negative;
            }
            if (d < 1) ksc::fail(ksc::errc::bad_input, "color needs --d or --ks");
            auto col = ksc::d_colouring(in.graph, in.cliques, static_cast<int>(d));
            emit(ksc::d_colouring_bundle(in.graph, in.cliques, d, col));
            return col ? exit_ok : exit_negative;
        }
        if (*ks_check) {
            ksc::Scenario s = ksc::ensure_dims(scenario_input(read_json(input)));
            ksc::KsVerdict v = ksc::is_ks_contextual(s);
            emit(ksc::verdict_bundle(s, v));
            return v.contextual ? exit_negative : exit_ok;
        }
        if (*conn) {
            ksc::Scenario s = ksc::ensure_dims(scenario_input(read_json(input)));
            ksc::ExtendedScenario ext = ksc::maximal_extension(s);
            ksc::ConnectionSearch res = ksc::flat_connection_search(ksc::build_context_category(ext.extended), budget);
            emit(ksc::connection_bundle(ext.extended, res));
            return res.connection ? exit_ok : exit_negative;
        }
        if (*acyclic) {
            ksc::Scenario s = scenario_input(read_json(input));
            auto cc = ksc::build_context_category(s);
            emit({{"acyclic", ksc::is_acyclic(cc)}, {"context_category_size", cc.elements.size()}});
            return exit_ok;
        }
        if (*complete) {
            json in = read_json(input);
            emit(ksc::completion_bundle(ksc::vectors_from_json(in), static_cast<int>(in["d"].get<long>())));
            return exit_ok;
        }
        if (*extend) {
            ksc::Scenario s = ksc::ensure_dims(scenario_input(read_json(input)));
            emit(ksc::extended_json(ksc::maximal_extension(s)));
            return exit_ok;
        }
        if (*dimfn) {
            auto in = graph_input(read_json(input));
            if (all) {
                if (d < 1) ksc::fail(ksc::errc::bad_input, "--all needs --d");
                json sols = json::array();
                for (const auto& sol : ksc::all_dimension_functions(in.graph, in.cliques, d, cap))
                    sols.push_back(ksc::dim_solution_json(sol, in.graph.labels));
                emit({{"graph", ksc::graph_bundle(in.graph, in.cliques)}, {"d", d}, {"solutions", sols}});
                return sols.empty() ? exit_negative : exit_ok;
            }
            try {
                emit(ksc::dim_bundle(in.graph, in.cliques, ksc::solve_dimension_function(in.graph, in.cliques, d_max)));
                return exit_ok;
            } catch (const ksc::error& e) {
                if (e.code() != ksc::errc::no_solution_up_to) throw;
                json out = ksc::dim_bundle(in.graph, in.cliques, std::nullopt);
                out["error"] = e.what();
                emit(out);
                return exit_negative;
            }
        }
        if (*stab) {
            json in = read_json(input);
            if (!correlation_path.empty()) {
                auto gi = graph_input(in);
                ksc::Correlation c = ksc::correlation_from_json(read_json(correlation_path), gi.graph);
                auto cm = ksc::stab_membership(c, gi.graph, gi.cliques, cap);
                emit(ksc::stab_bundle(gi.graph, gi.cliques, c, cm));
                return cm ? exit_ok : exit_negative;
            }
            if (state_path.empty()) ksc::fail(ksc::errc::bad_input, "stab-check needs --state or --correlation");
            ksc::Scenario s = scenario_input(in);
            ksc::State st = ksc::state_from_json(state_input(read_json(state_path)), s);
            auto cm = ksc::stab_membership(st, s, cap);
            emit(ksc::stab_bundle(s, st, cm));
            return cm ? exit_ok : exit_negative;
        }
        if (*qstab) {
            auto gi = graph_input(read_json(input));
            ksc::Correlation c = ksc::correlation_from_json(read_json(correlation_path), gi.graph);
            bool ok = ksc::qstab_membership(c, gi.graph);
            emit({{"member", ok}});
            return ok ? exit_ok : exit_negative;
        }
        if (*separate) {
            ksc::Scenario s = scenario_input(read_json(input));
            auto sep = ksc::separating_classical_state(s, cap);
            emit(ksc::separating_bundle(s, sep));
            return sep ? exit_ok : exit_negative;
        }
        if (*functional) {
            ksc::Scenario s = scenario_input(read_json(input));
            json sj = read_json(state_path);
            bool approx = sj.contains("approx") && sj["approx"].is_boolean() && sj["approx"].get<bool>();
            ksc::State st = ksc::state_from_json(state_input(sj), s);
            ksc::Functional f = ksc::functional_from_json(read_json(functional_path), s);
            emit(ksc::functional_bundle(s, st, f, ksc::evaluate_functional(st, f, s), approx));
            return exit_ok;
        }
        if (*catalog) {
            if (*cat_export) {
                emit(catalog_entry(name));
            } else {
                emit(ksc::catalog_names());
            }
            return exit_ok;
        }
        if (*verify) {
            ksc::VerifyResult r = ksc::verify_bundle(read_json(input));
            emit({{"kind", r.kind}, {"ok", r.ok}, {"message", r.message}});
            return r.ok ? exit_ok : exit_negative;
        }
    } catch (const ksc::error& e) {
        std::cerr << "ksc: " << e.what() << '\n';
        return exit_error;
    } catch (const json::exception& e) {
        std::cerr << "ksc: bad JSON: " << e.what() << '\n';
        return exit_error;
    }
    return exit_usage;
}
