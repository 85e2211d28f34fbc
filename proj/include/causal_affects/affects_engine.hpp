#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causal_affects/core_model.hpp"

namespace causal_affects {

// X affects Y given {do(Z), W}. Masks index into the universe of the owning AffectsSet
// (or, for an engine, into the model's observed nodes in declaration order).
struct AffectsRelation {
    NodeSet x = 0;
    NodeSet y = 0;
    NodeSet z = 0;
    NodeSet w = 0;

    auto operator<=>(const AffectsRelation&) const = default;

    bool well_formed() const {
        return x != 0 && y != 0 && !(x & y) && !(x & z) && !(x & w) && !(y & z) && !(y & w) && !(z & w);
    }
    NodeSet all() const { return x | y | z | w; }
};

// Throws IllFormedRelation when not well formed.
void check_relation(const AffectsRelation& r);

struct RelationFlags {
    std::optional<bool> irreducible;
    std::optional<bool> indecreasable;
    std::optional<bool> strong;
};

struct PresentRelation {
    AffectsRelation rel;
    RelationFlags flags;
};

struct AffectsSet {
    std::vector<std::string> universe;
    std::vector<PresentRelation> present;
    std::vector<AffectsRelation> absent;

    int index_of(const std::string& name) const;  // throws UnknownNode
    NodeSet set_of(const std::vector<std::string>& names) const;
    std::vector<std::string> names(NodeSet s) const;
    std::string format(const AffectsRelation& r) const;
    bool is_absent(const AffectsRelation& r) const;
    const PresentRelation* find_present(const AffectsRelation& r) const;

    // Fills flags implied by shape (zeroth order relations are indecreasable and not
    // strongly so) and rejects contradictions; also checks present/absent disjointness.
    void normalize();
};

struct EnumerationBounds {
    int max_x = 2;
    int max_y = 2;
    int max_z = 2;
    int max_w = 2;
};

struct ClassifyResult {
    bool reducible = false;
    bool indecreasable = false;
    bool strongly_indecreasable = false;
};

// How a conditioning value w that is possible under only one of the two compared
// interventions is treated. BothPositive skips it; SupportSensitive counts it as a difference,
// so that the conditional distributions are compared together with their definedness.
enum class ContextPolicy { BothPositive, SupportSensitive };

const char* context_policy_name(ContextPolicy p);  // "both-positive", "support-sensitive"
ContextPolicy parse_context_policy(const std::string& name);

// Decides affects relations over the observed nodes of one model, caching every
// post-intervention distribution and every decided relation.
class AffectsEngine {
public:
    explicit AffectsEngine(const StructuralModel& model, ContextPolicy policy = ContextPolicy::SupportSensitive);

    ContextPolicy policy() const { return policy_; }

    const std::vector<std::string>& universe() const { return universe_; }
    NodeSet universe_mask() const { return universe_.size() == 64 ? ~NodeSet{0} : bit(static_cast<int>(universe_.size())) - 1; }

    bool holds(const AffectsRelation& r);
    ClassifyResult classify(const AffectsRelation& r);  // throws RelationNotPresent

    // Post-intervention joint over observed nodes for do(target = values), values listed
    // in increasing universe index order.
    const JointDistribution& intervened(NodeSet target, const std::vector<int>& values);

    int cardinality(int universe_index) const { return cards_[universe_index]; }

private:
    bool decide(const AffectsRelation& r);

    StructuralModel model_;
    ContextPolicy policy_;
    std::vector<std::string> universe_;
    std::vector<NodeId> model_id_;
    std::vector<int> cards_;
    std::map<std::pair<NodeSet, std::vector<int>>, JointDistribution> dist_cache_;
    std::map<AffectsRelation, bool> memo_;
};

bool affects_holds(const StructuralModel& model, const AffectsRelation& r,
                   ContextPolicy policy = ContextPolicy::SupportSensitive);
ClassifyResult classify_relation(const StructuralModel& model, const AffectsRelation& r,
                                 ContextPolicy policy = ContextPolicy::SupportSensitive);

// Every well-formed relation over universe indices 0..n-1 within the bounds, in relation_order.
std::vector<AffectsRelation> candidate_relations(int n, const EnumerationBounds& bounds);

// Every well-formed relation within the bounds, split into present and absent.
AffectsSet enumerate_affects(AffectsEngine& engine, const EnumerationBounds& bounds);
AffectsSet enumerate_affects(const StructuralModel& model, const EnumerationBounds& bounds,
                             ContextPolicy policy = ContextPolicy::SupportSensitive);

// (X, Y, {}, W) -> (X, Y u W, {}, {}); throws RuleShapeMismatch when Z is non-empty.
AffectsRelation conditionality_transform(const AffectsRelation& r);

// Canonical order used for every listing: sizes first, then masks.
bool relation_order(const AffectsRelation& a, const AffectsRelation& b);

}  // namespace causal_affects
