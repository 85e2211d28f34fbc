#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "causal_affects/affects_engine.hpp"
#include "causal_affects/core_model.hpp"

namespace causal_affects {

constexpr std::uint64_t kDefaultSeed = 1234567;

// CAUSAL_AFFECTS_SEED when set to an unsigned integer, fallback otherwise.
std::uint64_t seed_from_env(std::uint64_t fallback = kDefaultSeed);

using EdgeList = std::vector<std::pair<int, int>>;

// Every labelled DAG on n nodes (543 for n = 4), edges sorted.
std::vector<EdgeList> enumerate_dags(int n);

// Binary observed nodes "V0".."Vn-1": random positive rational priors on roots and
// deterministic tables that depend on every parent.
StructuralModel random_deterministic_model(int n, const EdgeList& edges, std::mt19937_64& rng);

// models_per_dag models for every DAG on 1..max_nodes nodes, in DAG enumeration order.
std::vector<StructuralModel> deterministic_model_corpus(int max_nodes, int models_per_dag, std::uint64_t seed);

// Zeroth-order relations over nodes "A".."F", all flagged irreducible, no absences.
AffectsSet random_irreducible_affects(int max_nodes, int max_relations, std::mt19937_64& rng);

}  // namespace causal_affects
