#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causal_affects/errors.hpp"
#include "causal_affects/node_set.hpp"
#include "causal_affects/rational.hpp"

namespace causal_affects {

using NodeId = int;

struct Node {
    std::string name;
    int cardinality = 2;
    bool observed = true;
};

class CausalStructure {
public:
    CausalStructure() = default;

    // Validates names, cardinalities and edges. Cycles are allowed, self-loops are not.
    static CausalStructure create(std::vector<Node> nodes,
                                  const std::vector<std::pair<NodeId, NodeId>>& edges);

    int size() const { return static_cast<int>(nodes_.size()); }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<Node>& nodes() const { return nodes_; }
    NodeId find(const std::string& name) const;  // throws UnknownNode
    std::optional<NodeId> try_find(const std::string& name) const;

    // Parents in declaration order; this order keys mechanism tables.
    const std::vector<NodeId>& parent_list(NodeId id) const { return parents_.at(id); }
    NodeSet parents(NodeId id) const;
    NodeSet children(NodeId id) const;
    NodeSet ancestors(NodeId id) const;    // may contain id itself on a cycle
    NodeSet descendants(NodeId id) const;  // may contain id itself on a cycle
    bool is_exogenous(NodeId id) const { return parents_.at(id).empty(); }
    bool has_edge(NodeId from, NodeId to) const { return contains(children_mask_.at(from), to); }
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    bool is_cyclic() const;
    // Strongly connected components in a topological order of the condensation.
    std::vector<std::vector<NodeId>> components() const;

    NodeSet observed_nodes() const;
    std::vector<std::string> names(NodeSet s) const;

    // Same nodes, with the incoming edges of every node in targets removed.
    CausalStructure without_incoming(NodeSet targets) const;

private:
    void check_id(NodeId id) const;

    std::vector<Node> nodes_;
    std::vector<std::vector<NodeId>> parents_;
    std::vector<NodeSet> children_mask_;
};

enum class StructureQuery { Parents, Children, Ancestors, Descendants, Exogenous };

// For Exogenous the result is a one-bit answer: bit 0 set means true.
NodeSet structure_query(const CausalStructure& s, NodeId node, StructureQuery kind);

enum class MechanismKind { Exogenous, Deterministic, Stochastic };

struct Mechanism {
    MechanismKind kind = MechanismKind::Exogenous;
    // One row per parent assignment (first parent is the most significant digit),
    // each row a distribution over the node's outcomes.
    std::vector<std::vector<Rational>> table;

    static Mechanism point(int cardinality, int value);
    bool is_zero_one() const;
};

class StructuralModel {
public:
    StructuralModel() = default;

    static StructuralModel create(CausalStructure structure, std::vector<Mechanism> mechanisms);

    const CausalStructure& structure() const { return structure_; }
    const Mechanism& mechanism(NodeId id) const { return mechanisms_.at(id); }
    const std::vector<Mechanism>& mechanisms() const { return mechanisms_; }

    // Row index of node id given a full or partial assignment covering its parents.
    int row_index(NodeId id, const std::vector<int>& values) const;

    // do(targets = values): incoming edges removed, mechanisms replaced by point masses.
    StructuralModel intervene(const std::map<NodeId, int>& assignment) const;

private:
    CausalStructure structure_;
    std::vector<Mechanism> mechanisms_;
};

class JointDistribution {
public:
    JointDistribution() = default;
    JointDistribution(std::vector<NodeId> scope, std::vector<int> cards);

    const std::vector<NodeId>& scope() const { return scope_; }
    const std::vector<int>& cards() const { return cards_; }
    const std::vector<Rational>& probabilities() const { return probs_; }
    std::vector<Rational>& probabilities() { return probs_; }
    std::size_t size() const { return probs_.size(); }

    // Mixed-radix index; the first scope node is the most significant digit.
    std::size_t index(const std::vector<int>& values) const;
    std::vector<int> values(std::size_t index) const;
    const Rational& at(const std::vector<int>& values) const { return probs_[index(values)]; }

    Rational total() const;
    // Marginal over the given sub-scope, which must list nodes of this scope.
    JointDistribution marginal(const std::vector<NodeId>& sub) const;
    // Probability that every listed node takes the given value.
    Rational probability(const std::map<NodeId, int>& event) const;

    bool operator==(const JointDistribution& other) const = default;

private:
    std::vector<NodeId> scope_;
    std::vector<int> cards_;
    std::vector<Rational> probs_;
};

using Assignment = std::map<NodeId, int>;

// Joint over all nodes (hidden included), in node order.
JointDistribution solve_full_distribution(const StructuralModel& model);
// Joint over observed nodes, in node order.
JointDistribution solve_observed_distribution(const StructuralModel& model);
JointDistribution post_intervention_distribution(const StructuralModel& model, const Assignment& assignment);

}  // namespace causal_affects
