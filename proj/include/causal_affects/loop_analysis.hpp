#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "causal_affects/affects_engine.hpp"

namespace causal_affects {

// source potentially causes target, as one member of the family (source, index):
// source causes at least one element of index.
struct IndexedArrow {
    int source = 0;
    int target = 0;
    NodeSet index = 0;

    auto operator<=>(const IndexedArrow&) const = default;
};

struct CauseGraph {
    std::vector<std::string> universe;
    NodeSet nodes = 0;
    std::vector<IndexedArrow> arrows;  // sorted, unique

    bool empty() const { return nodes == 0; }
};

struct GraphBuild {
    CauseGraph graph;
    std::vector<std::string> warnings;
    bool used_absences = false;  // extended arrows were added
};

// Presence graph from irreducible relations; extended adds the do-set arrows witnessed by
// absences or indecreasability flags. Relations flagged reducible are skipped with a
// warning; multi-source relations without an irreducibility flag raise UnflaggedRelation.
GraphBuild build_potential_cause_graph(const AffectsSet& affects, bool extended);

// Prunes childless nodes with their arrow families, then parentless nodes. With rng the
// childless node removed at each step is chosen at random.
CauseGraph build_loop_graph(const CauseGraph& g, std::mt19937_64* rng = nullptr);

struct OracleResult {
    bool acyclic_resolution = false;
    std::vector<std::pair<int, int>> witness;  // edges of the first acyclic resolution
    std::size_t visited = 0;
};

// Backtracking over one chosen target per (relation, source) pair. Throws CapExceeded
// once more than cap search nodes are visited.
OracleResult resolution_oracle(const AffectsSet& affects, std::size_t cap = 1'000'000);

enum class DetectMode { LoopGraph, Oracle, Both };

struct AclDetection {
    bool acl_present = false;
    std::optional<bool> agree;
    std::optional<CauseGraph> loop_graph;
    std::optional<OracleResult> oracle;
    std::string extended_verdict;  // "acl", "no-acl" or "unknown"
    std::vector<std::string> warnings;
};

AclDetection detect_acl(const AffectsSet& affects, DetectMode mode, std::size_t cap = 1'000'000);

// "acl" when the extended loop graph is non-empty, "unknown" when it is empty but absence
// arrows were used, "no-acl" otherwise.
std::string extended_verdict(const AffectsSet& affects);

struct AffectsChain {
    std::vector<AffectsRelation> relations;
    NodeSet from = 0;
    NodeSet to = 0;
    bool closed = false;
};

struct AclMatch {
    std::string name;
    std::vector<AffectsRelation> witness;
};

struct ChainAnalysis {
    std::vector<AffectsChain> chains;
    bool truncated = false;
    std::vector<AclMatch> classes;
};

// Chains and ACL classes over the simple irreducible relations (empty do-set and
// conditioning set).
ChainAnalysis find_affects_chains_and_classify(const AffectsSet& affects, std::size_t chain_cap = 10'000);

std::string to_dot(const CauseGraph& g);

}  // namespace causal_affects
