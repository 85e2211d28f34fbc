#include "recipes.hpp"

#include <algorithm>
#include <filesystem>

#include "causal_affects/inference_rules.hpp"
#include "causal_affects/loop_analysis.hpp"

namespace causal_affects {

namespace fs = std::filesystem;
using io::Json;

const std::vector<std::string>& recipe_names() {
    static const std::vector<std::string> names{"otp",  "jamming", "ex-iv4", "ex-iv7", "hcl",   "acl3",
                                                "acl5", "acl6a",   "acl7",   "acl11",  "acl12", "noacl"};
    return names;
}

namespace {

Json model_pipeline(const StructuralModel& model, int max) {
    EnumerationBounds b{max, max, max, max};
    AffectsEngine engine(model);
    AffectsSet set = enumerate_affects(engine, b);
    Json out;
    out["distribution"] = io::distribution_to_json(model, solve_observed_distribution(model));
    out["affects"] = io::affects_to_json(set);
    out["causes"] = io::causes_to_json(set, infer_causes(set));
    out["rule_violations"] = verify_rules_on_model(engine, model, b).violations.size();
    return out;
}

Json queries_pipeline(const StructuralModel& model, const Json& queries, const std::string& source) {
    AffectsEngine engine(model);
    AffectsSet fmt;
    fmt.universe = engine.universe();
    Json out = Json::array();
    for (const auto& q : queries.at("relations")) {
        AffectsRelation r = io::relation_from_json(fmt, q, source);
        Json e{{"relation", fmt.format(r)}, {"holds", engine.holds(r)}};
        if (engine.holds(r)) {
            ClassifyResult c = engine.classify(r);
            e["reducible"] = c.reducible;
            e["indecreasable"] = c.indecreasable;
            e["strong"] = c.strongly_indecreasable;
        }
        out.push_back(e);
    }
    return out;
}

Json affects_pipeline(const AffectsSet& set) {
    Json out;
    out["causes"] = io::causes_to_json(set, infer_causes(set));
    out["potential_graph"] = io::cause_graph_to_json(build_potential_cause_graph(set, false).graph);
    GraphBuild ext = build_potential_cause_graph(set, true);
    out["extended_graph"] = io::cause_graph_to_json(ext.graph);
    out["extended_loop_graph"] = io::cause_graph_to_json(build_loop_graph(ext.graph));
    out["detection"] = io::acl_detection_to_json(set, detect_acl(set, DetectMode::Both));
    ChainAnalysis chains = find_affects_chains_and_classify(set);
    Json classes = Json::array();
    for (const auto& m : chains.classes) classes.push_back(m.name);
    out["acl_classes"] = classes;
    return out;
}

}  // namespace

Json run_recipe(const std::string& recipes_dir, const std::string& name) {
    const auto& names = recipe_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw Error(ErrorCode::InvalidInput, "unknown recipe " + name);
    fs::path dir = fs::path(recipes_dir) / name;
    auto file = [&](const char* f) { return (dir / f).string(); };
    auto has = [&](const char* f) { return fs::exists(dir / f); };
    Json out;
    if (has("model.json")) {
        StructuralModel model = io::model_from_json(io::read_json_file(file("model.json")), file("model.json"));
        out["model"] = model_pipeline(model, 2);
        if (has("queries.json"))
            out["queries"] = queries_pipeline(model, io::read_json_file(file("queries.json")), file("queries.json"));
    }
    if (has("inconsistent.json")) {
        try {
            StructuralModel bad =
                io::model_from_json(io::read_json_file(file("inconsistent.json")), file("inconsistent.json"));
            solve_observed_distribution(bad);
            out["inconsistent"] = "solved";
        } catch (const Error& e) {
            out["inconsistent"] = error_code_name(e.code());
        }
    }
    std::optional<AffectsSet> set;
    if (has("affects.json")) {
        set = io::affects_from_json(io::read_json_file(file("affects.json")), file("affects.json"));
        out["affects"] = affects_pipeline(*set);
    }
    if (has("poset.json")) {
        Poset p = io::poset_from_json(io::read_json_file(file("poset.json")), file("poset.json"));
        out["poset"] = io::poset_classification_to_json(p, classify_poset(p));
        if (set && has("embedding.json")) {
            Embedding e = make_embedding(
                *set, p, io::embedding_map_from_json(io::read_json_file(file("embedding.json")), file("embedding.json")));
            out["embedding"] = io::embedding_report_to_json(*set, check_embedding(*set, p, e, CompatMode::Irreducible));
        }
    }
    return out;
}

std::vector<std::string> diff_reports(const Json& expected, const Json& actual, const std::string& path) {
    std::vector<std::string> out;
    std::string here = path.empty() ? "/" : path;
    if (expected.is_number() && actual.is_number()) return expected == actual ? out : std::vector<std::string>{here};
    if (expected.type() != actual.type()) return {here};
    if (expected.is_object()) {
        for (const auto& [k, v] : expected.items()) {
            if (!actual.contains(k)) out.push_back(path + "/" + k + " (missing)");
            else for (auto& d : diff_reports(v, actual.at(k), path + "/" + k)) out.push_back(d);
        }
        for (const auto& [k, v] : actual.items())
            if (!expected.contains(k)) out.push_back(path + "/" + k + " (unexpected)");
        return out;
    }
    if (expected.is_array()) {
        if (expected.size() != actual.size()) return {here + " (length)"};
        for (std::size_t i = 0; i < expected.size(); ++i)
            for (auto& d : diff_reports(expected[i], actual[i], path + "/" + std::to_string(i))) out.push_back(d);
        return out;
    }
    if (expected != actual) out.push_back(here);
    return out;
}

}  // namespace causal_affects
