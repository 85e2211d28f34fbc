#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "causal_affects/embedding.hpp"
#include "causal_affects/independence.hpp"
#include "causal_affects/inference_rules.hpp"
#include "causal_affects/io.hpp"
#include "causal_affects/loop_analysis.hpp"
#include "causal_affects/poset.hpp"
#include "recipes.hpp"

using namespace causal_affects;
using io::Json;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;

struct Options {
    std::string model, affects, poset, embedding;
    int max = 2;
    std::string mode;
    std::vector<std::string> require;
    std::size_t cap = 0;
    int jobs = 1;
    bool dot = false;
    bool extended = false;
    bool faithful = false;
    bool update = false;
    std::vector<std::string> x, y, z, w, assignments;
    std::string dims = "1+1";
    int extent = 1;
    int k = 3;
    std::string recipe;
    std::string policy = "support-sensitive";
    std::string recipes_dir = CAUSAL_AFFECTS_RECIPE_DIR;
};

StructuralModel load_model(const Options& o) { return io::model_from_json(io::read_json_file(o.model), o.model); }
AffectsSet load_affects(const Options& o) { return io::affects_from_json(io::read_json_file(o.affects), o.affects); }
Poset load_poset(const Options& o) { return io::poset_from_json(io::read_json_file(o.poset), o.poset); }

void emit(const Json& j) { std::cout << io::dump(j); }

EnumerationBounds bounds(const Options& o) { return {o.max, o.max, o.max, o.max}; }

NodeSet model_nodes(const CausalStructure& s, const std::vector<std::string>& names) {
    NodeSet out = 0;
    for (const auto& n : names) out |= bit(s.find(n));
    return out;
}

std::map<NodeId, int> parse_assignments(const CausalStructure& s, const std::vector<std::string>& items) {
    std::map<NodeId, int> out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidInput, "intervention must look like NAME=VALUE: " + item);
        int value = 0;
        try {
            value = std::stoi(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, "intervention value is not an integer: " + item);
        }
        out[s.find(item.substr(0, eq))] = value;
    }
    return out;
}

void emit_graph(const CauseGraph& g, bool dot) {
    if (dot) std::cout << to_dot(g);
    else emit(io::cause_graph_to_json(g));
}

int run_recipe_command(const Options& o) {
    Json actual = run_recipe(o.recipes_dir, o.recipe);
    std::string expected_path = o.recipes_dir + "/" + o.recipe + "/expected.json";
    if (o.update) {
        std::ofstream(expected_path) << actual.dump(2) << "\n";
        emit(actual);
        return 0;
    }
    Json expected = io::read_json_file(expected_path);
    auto diffs = diff_reports(expected, actual);
    emit({{"recipe", o.recipe}, {"match", diffs.empty()}, {"mismatches", diffs}, {"report", actual}});
    return diffs.empty() ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affects relations, causal loops and poset embeddings"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--jobs", o.jobs, "worker cap (runs single threaded)")->check(CLI::PositiveNumber);

    auto group = [&](const char* name, const char* help) {
        auto* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        return g;
    };
    auto model_opt = [&](CLI::App* c) { c->add_option("--model", o.model, "model JSON")->required()->check(CLI::ExistingFile); };
    auto affects_opt = [&](CLI::App* c) {
        c->add_option("--affects", o.affects, "affects set JSON")->required()->check(CLI::ExistingFile);
    };
    auto poset_opt = [&](CLI::App* c) { c->add_option("--poset", o.poset, "poset JSON")->required()->check(CLI::ExistingFile); };
    auto max_opt = [&](CLI::App* c) { c->add_option("--max", o.max, "bound on |X|, |Y|, |Z| and |W|")->check(CLI::Range(1, 64)); };
    auto policy_opt = [&](CLI::App* c) {
        c->add_option("--context-policy", o.policy, "treatment of conditioning values possible under one side only")
            ->check(CLI::IsMember({"support-sensitive", "both-positive"}));
    };
    auto cap_opt = [&](CLI::App* c, std::size_t def) {
        o.cap = def;
        c->add_option("--cap", o.cap, "search cap")->check(CLI::PositiveNumber);
    };

    auto* model = group("model", "structural models");
    auto* model_solve = model->add_subcommand("solve", "observed distribution");
    model_opt(model_solve);
    auto* model_intervene = model->add_subcommand("intervene", "post-intervention distribution");
    model_opt(model_intervene);
    model_intervene->add_option("--do", o.assignments, "NAME=VALUE")->required();

    auto* indep = group("indep", "d-separation and independence");
    auto* dsep = indep->add_subcommand("dsep", "d-separation query");
    model_opt(dsep);
    dsep->add_option("--x", o.x)->required()->delimiter(',');
    dsep->add_option("--y", o.y)->required()->delimiter(',');
    dsep->add_option("--z", o.z)->delimiter(',');
    auto* compat = indep->add_subcommand("compat", "Markov compatibility of the model's own distribution");
    model_opt(compat);
    compat->add_flag("--faithful", o.faithful, "also require every independence to be a d-separation");

    auto* affects = group("affects", "affects relations");
    auto* enumerate = affects->add_subcommand("enumerate", "complete set within bounds");
    model_opt(enumerate);
    max_opt(enumerate);
    policy_opt(enumerate);
    auto* classify = affects->add_subcommand("classify", "decide and classify one relation");
    model_opt(classify);
    policy_opt(classify);
    classify->add_option("--x", o.x)->required()->delimiter(',');
    classify->add_option("--y", o.y)->required()->delimiter(',');
    classify->add_option("--z", o.z)->delimiter(',');
    classify->add_option("--w", o.w)->delimiter(',');

    auto* infer = group("infer", "causal inference");
    auto* causes = infer->add_subcommand("causes", "disjunctive causes");
    affects_opt(causes);
    auto* verify = infer->add_subcommand("verify", "check every rule on a model");
    model_opt(verify);
    max_opt(verify);
    policy_opt(verify);

    auto* graph = group("graph", "cause graphs");
    auto* pot = graph->add_subcommand("pot-cause", "potential cause graph");
    auto* loop = graph->add_subcommand("loop", "loop graph");
    for (auto* c : {pot, loop}) {
        affects_opt(c);
        c->add_flag("--extended", o.extended, "add do-set arrows");
        c->add_flag("--dot", o.dot, "DOT output");
    }

    auto* acl = group("acl", "affects causal loops");
    auto* detect = acl->add_subcommand("detect", "loop presence");
    affects_opt(detect);
    o.mode = "both";
    detect->add_option("--mode", o.mode)->check(CLI::IsMember({"loop-graph", "oracle", "both"}));
    cap_opt(detect, 1'000'000);
    auto* acl_classify = acl->add_subcommand("classify", "chains and loop classes");
    affects_opt(acl_classify);

    auto* poset = group("poset", "partial orders");
    auto* validate = poset->add_subcommand("validate", "closure and Hasse covers");
    poset_opt(validate);
    validate->add_flag("--dot", o.dot, "Hasse diagram as DOT");
    auto* pclassify = poset->add_subcommand("classify", "lattice and spacetime properties");
    poset_opt(pclassify);
    pclassify->add_option("--k", o.k, "bounded set size")->check(CLI::Range(2, 20));
    cap_opt(pclassify, 5'000'000);
    auto* grid = poset->add_subcommand("grid", "discrete Minkowski grid");
    grid->add_option("--dims", o.dims)->check(CLI::IsMember({"1+1", "2+1"}));
    grid->add_option("--extent", o.extent)->required();
    grid->add_flag("--dot", o.dot, "Hasse diagram as DOT");

    auto* embed = group("embed", "embeddings into posets");
    auto* check = embed->add_subcommand("check", "report on one embedding");
    auto* search = embed->add_subcommand("search", "all embeddings meeting requirements");
    for (auto* c : {check, search}) {
        affects_opt(c);
        poset_opt(c);
        c->add_option("--mode", o.mode)->check(CLI::IsMember({"irreducible", "strong-indecreasable", "indecreasable"}));
    }
    check->add_option("--embedding", o.embedding)->required()->check(CLI::ExistingFile);
    search->add_option("--require", o.require)
        ->delimiter(',')
        ->check(CLI::IsMember({"support-stable", "minimum-stable", "non-degenerate", "non-trivial"}));
    cap_opt(search, 10'000'000);

    auto* recipe = group("recipe", "worked examples");
    auto* recipe_run = recipe->add_subcommand("run", "run a recipe and compare with its expected report");
    recipe_run->add_option("name", o.recipe)->required()->check(CLI::IsMember(recipe_names()));
    recipe_run->add_option("--recipes-dir", o.recipes_dir)->check(CLI::ExistingDirectory);
    recipe_run->add_flag("--update", o.update, "rewrite expected.json from this run");
    recipe->add_subcommand("list", "recipe names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    std::string embed_mode = o.mode == "both" ? "irreducible" : o.mode;
    try {
        if (model_solve->parsed()) {
            StructuralModel m = load_model(o);
            emit(io::distribution_to_json(m, solve_observed_distribution(m)));
        } else if (model_intervene->parsed()) {
            StructuralModel m = load_model(o);
            emit(io::distribution_to_json(
                m, post_intervention_distribution(m, parse_assignments(m.structure(), o.assignments))));
        } else if (dsep->parsed()) {
            StructuralModel m = load_model(o);
            const auto& s = m.structure();
            SeparationQuery q{model_nodes(s, o.x), model_nodes(s, o.y), model_nodes(s, o.z)};
            emit({{"d_separated", d_separated(s, q)}, {"cyclic", s.is_cyclic()}});
        } else if (compat->parsed()) {
            StructuralModel m = load_model(o);
            auto mode = o.faithful ? IndependenceMode::Faithful : IndependenceMode::Compatible;
            emit(io::compatibility_to_json(m, compatibility_report(m.structure(), solve_observed_distribution(m), mode)));
        } else if (enumerate->parsed()) {
            emit(io::affects_to_json(enumerate_affects(load_model(o), bounds(o), parse_context_policy(o.policy))));
        } else if (classify->parsed()) {
            StructuralModel m = load_model(o);
            AffectsEngine engine(m, parse_context_policy(o.policy));
            AffectsSet fmt;
            fmt.universe = engine.universe();
            AffectsRelation r{fmt.set_of(o.x), fmt.set_of(o.y), fmt.set_of(o.z), fmt.set_of(o.w)};
            check_relation(r);
            Json out{{"relation", fmt.format(r)}, {"holds", engine.holds(r)}};
            if (engine.holds(r)) {
                ClassifyResult c = engine.classify(r);
                out["reducible"] = c.reducible;
                out["indecreasable"] = c.indecreasable;
                out["strong"] = c.strongly_indecreasable;
            }
            emit(out);
        } else if (causes->parsed()) {
            AffectsSet s = load_affects(o);
            emit(io::causes_to_json(s, infer_causes(s)));
        } else if (verify->parsed()) {
            StructuralModel m = load_model(o);
            AffectsEngine engine(m, parse_context_policy(o.policy));
            emit(io::verification_to_json(verify_rules_on_model(engine, m, bounds(o))));
        } else if (pot->parsed()) {
            emit_graph(build_potential_cause_graph(load_affects(o), o.extended).graph, o.dot);
        } else if (loop->parsed()) {
            emit_graph(build_loop_graph(build_potential_cause_graph(load_affects(o), o.extended).graph), o.dot);
        } else if (detect->parsed()) {
            AffectsSet s = load_affects(o);
            DetectMode mode = o.mode == "loop-graph" ? DetectMode::LoopGraph
                              : o.mode == "oracle"   ? DetectMode::Oracle
                                                     : DetectMode::Both;
            emit(io::acl_detection_to_json(s, detect_acl(s, mode, o.cap)));
        } else if (acl_classify->parsed()) {
            AffectsSet s = load_affects(o);
            emit(io::chains_to_json(s, find_affects_chains_and_classify(s)));
        } else if (validate->parsed()) {
            Poset p = load_poset(o);
            if (o.dot) {
                std::cout << hasse_dot(p);
            } else {
                Json covers = Json::array();
                for (auto [a, b] : p.covers()) covers.push_back({p.label(a), p.label(b)});
                Json out = io::poset_to_json(p);
                out["covers"] = covers;
                emit(out);
            }
        } else if (pclassify->parsed()) {
            Poset p = load_poset(o);
            emit(io::poset_classification_to_json(p, classify_poset(p, o.k, o.cap)));
        } else if (grid->parsed()) {
            Poset p = generate_minkowski_grid(o.dims == "1+1" ? GridDims::OnePlusOne : GridDims::TwoPlusOne, o.extent);
            if (o.dot) std::cout << hasse_dot(p);
            else emit(io::poset_to_json(p));
        } else if (check->parsed()) {
            AffectsSet s = load_affects(o);
            Poset p = load_poset(o);
            auto map = io::embedding_map_from_json(io::read_json_file(o.embedding), o.embedding);
            emit(io::embedding_report_to_json(s, check_embedding(s, p, make_embedding(s, p, map),
                                                                 parse_compat_mode(embed_mode))));
        } else if (search->parsed()) {
            AffectsSet s = load_affects(o);
            Poset p = load_poset(o);
            SearchRequirements req;
            req.mode = parse_compat_mode(embed_mode);
            for (const auto& r : o.require) {
                if (r == "support-stable") req.support_stable = true;
                if (r == "minimum-stable") req.minimum_stable = true;
                if (r == "non-degenerate") req.non_degenerate = true;
                if (r == "non-trivial") req.non_trivial = true;
            }
            auto found = search_embeddings(s, p, req, o.cap);
            for (const auto& e : found) emit(io::embedding_to_json(s, p, e));
            emit({{"summary", {{"count", found.size()}, {"mode", compat_mode_name(req.mode)}, {"require", o.require}}}});
        } else if (recipe_run->parsed()) {
            return run_recipe_command(o);
        } else {
            emit({{"recipes", recipe_names()}});
        }
    } catch (const Error& e) {
        std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
        return e.code() == ErrorCode::CapExceeded ? kExitCap : kExitInvalid;
    }
    return 0;
}
