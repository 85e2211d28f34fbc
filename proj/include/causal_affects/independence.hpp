#pragma once

#include <vector>

#include "causal_affects/core_model.hpp"

namespace causal_affects {

struct SeparationQuery {
    NodeSet x = 0;
    NodeSet y = 0;
    NodeSet z = 0;
};

// d-separation by enumeration of simple undirected paths; valid on cyclic graphs too.
bool d_separated(const CausalStructure& structure, const SeparationQuery& q);

// X independent of Y given Z under dist, checked on every z with P(z) > 0.
// Masks use the node ids of dist's scope.
bool conditionally_independent(const JointDistribution& dist, NodeSet x, NodeSet y, NodeSet z);

enum class IndependenceMode { Compatible, Faithful };

struct CompatibilityReport {
    bool holds = true;
    bool cyclic = false;  // d-separation may be non-maximal on cyclic inputs
    std::vector<SeparationQuery> violations;
};

CompatibilityReport compatibility_report(const CausalStructure& structure, const JointDistribution& dist,
                                         IndependenceMode mode);

}  // namespace causal_affects
