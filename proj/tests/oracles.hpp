#pragma once

// Brute-force reference implementations, written straight from the definitions and sharing
// no code paths with the library beyond its data types.

#include <map>
#include <optional>
#include <vector>

#include "causal_affects/affects_engine.hpp"
#include "causal_affects/core_model.hpp"
#include "causal_affects/poset.hpp"

namespace oracle {

using namespace causal_affects;

// Joint over all nodes of an acyclic model by the product of mechanism rows, with the
// intervened nodes forced. Keys are full assignments in node order.
std::map<std::vector<int>, Rational> product_joint(const StructuralModel& model, const std::map<NodeId, int>& forced);

// Affects relation by its definition; node sets hold model node ids.
bool affects(const StructuralModel& model, NodeSet x, NodeSet y, NodeSet z, NodeSet w, ContextPolicy policy);

// Moralized ancestral graph criterion; acyclic structures only.
bool d_separated(const CausalStructure& s, NodeSet x, NodeSet y, NodeSet z);

// True iff one choice of target per (relation, source) gives an acyclic digraph; every
// resolution is built in full.
bool has_acyclic_resolution(const AffectsSet& affects);

std::optional<int> join(const Poset& p, int a, int b);
std::optional<int> meet(const Poset& p, int a, int b);
PointSet support_future(const Poset& p, const PointSet& s);
PointSet minimal(const Poset& p, const PointSet& m);
// Union of all inclusion-minimal subsets of s with the same support future, checking every subset.
PointSet span(const Poset& p, const PointSet& s);
std::vector<PointSet> subsets(const Poset& p, const PointSet& s);

}  // namespace oracle
