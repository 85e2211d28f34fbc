#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "causal_affects/affects_engine.hpp"
#include "causal_affects/core_model.hpp"
#include "causal_affects/embedding.hpp"
#include "causal_affects/independence.hpp"
#include "causal_affects/inference_rules.hpp"
#include "causal_affects/loop_analysis.hpp"
#include "causal_affects/poset.hpp"

namespace causal_affects::io {

using Json = nlohmann::json;

// Schema and parse errors are InvalidInput with messages "<source>: <json path>: <problem>".
Json read_json_file(const std::string& path);
Json parse_json(const std::string& text, const std::string& source);

// Compact, key-sorted, newline terminated.
std::string dump(const Json& j);

// {"nodes":[{"name","cardinality","observed","parents":[...],"mechanism":{"kind","table"}}]}
// Table rows are lists of probabilities ("1/2" strings or integers); a deterministic table
// may list one output value per row instead.
StructuralModel model_from_json(const Json& j, const std::string& source);
Json model_to_json(const StructuralModel& model);

// {"present":[{"X","Y","Z","W","irreducible","indecreasable","strong"}],"absent":[...]}
// plus an optional "nodes" list fixing the universe; otherwise names are taken in order of
// first appearance.
AffectsSet affects_from_json(const Json& j, const std::string& source);
Json affects_to_json(const AffectsSet& set);
Json relation_to_json(const AffectsSet& set, const AffectsRelation& r);
AffectsRelation relation_from_json(const AffectsSet& set, const Json& j, const std::string& source);

// {"elements":[...],"relations":[[a,b],...]}
Poset poset_from_json(const Json& j, const std::string& source);
Json poset_to_json(const Poset& p);

// {"map":{rv: element}}
std::map<std::string, std::string> embedding_map_from_json(const Json& j, const std::string& source);
Json embedding_to_json(const AffectsSet& set, const Poset& p, const Embedding& e);

Json distribution_to_json(const StructuralModel& model, const JointDistribution& dist);
Json compatibility_to_json(const StructuralModel& model, const CompatibilityReport& rep);
Json causes_to_json(const AffectsSet& set, const std::vector<DisjunctiveCause>& causes);
Json verification_to_json(const VerificationReport& rep);
Json cause_graph_to_json(const CauseGraph& g);
Json acl_detection_to_json(const AffectsSet& set, const AclDetection& d);
Json chains_to_json(const AffectsSet& set, const ChainAnalysis& c);
Json poset_classification_to_json(const Poset& p, const PosetClassification& c);
Json embedding_report_to_json(const AffectsSet& set, const EmbeddingReport& r);
Json point_set_to_json(const Poset& p, const PointSet& s);

}  // namespace causal_affects::io
