#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causal_affects/affects_engine.hpp"

namespace causal_affects {

// source is a cause of at least one member of targets.
struct DisjunctiveCause {
    int source = 0;
    NodeSet targets = 0;

    auto operator<=>(const DisjunctiveCause&) const = default;
};

enum class RuleId { ZO, AffectsToHo, HoTransfer, HoSwitch, ConditionalSplit, ReducibleDescent };

const char* rule_name(RuleId rule);
RuleId parse_rule(const std::string& name);  // throws InvalidInput

// For HO_SWITCH an alternative marked irreducible is irreducible whenever it holds. For
// REDUCIBLE_DESCENT all alternatives are marked and at least one of them holds irreducibly.
struct Alternative {
    AffectsRelation rel;
    bool irreducible = false;
};

// Meaning of split per rule:
//   ZO, HO_TRANSFER      non-empty Z1 within Z (Z2 = Z minus Z1)
//   AFFECTS_TO_HO        non-empty proper subset Z1 of X (the premise is (X minus Z1) Z1 -> Y)
//   HO_SWITCH            a single element e_Z of Z
//   CONDITIONAL_SPLIT    non-empty proper subset W of Y, premise needs an empty W
//   REDUCIBLE_DESCENT    ignored; premise needs |X| >= 2
// Throws RuleShapeMismatch when r or split does not fit.
std::vector<Alternative> apply_transformation_rule(RuleId rule, const AffectsRelation& r, NodeSet split);

// Absences the rule needs besides the premise (HO_SWITCH: X -/-> Y | {do(Z minus e_Z), W}).
std::vector<AffectsRelation> required_absences(RuleId rule, const AffectsRelation& r, NodeSet split);

// Causes implied by irreducible relations and by absence witnesses or indecreasability
// flags, with subsumed entries removed. Throws InconsistentFlags.
std::vector<DisjunctiveCause> infer_causes(const AffectsSet& affects);

struct RuleViolation {
    std::string rule;
    AffectsRelation premise;
    NodeSet split = 0;
    std::string detail;
};

struct VerificationReport {
    std::vector<std::string> universe;
    std::vector<RuleViolation> violations;
    std::map<std::string, std::size_t> instances;  // premises checked per rule
};

// Checks every transformation rule, the conditional-split equivalence and the cause
// soundness statements on all relations within bounds.
VerificationReport verify_rules_on_model(const StructuralModel& model, const EnumerationBounds& bounds);
VerificationReport verify_rules_on_model(AffectsEngine& engine, const StructuralModel& model,
                                         const EnumerationBounds& bounds);

// Edges X -> Y read off as X affects Y under do(all other observed nodes); universe indices.
std::vector<std::pair<int, int>> discover_structure(const StructuralModel& model);
std::vector<std::pair<int, int>> discover_structure(AffectsEngine& engine);

}  // namespace causal_affects
