#include <gtest/gtest.h>

#include <algorithm>

#include "causal_affects/corpus.hpp"
#include "causal_affects/inference_rules.hpp"
#include "test_support.hpp"

using namespace causal_affects;
using test_support::recipe_model;

namespace {

bool has_cause(const std::vector<DisjunctiveCause>& causes, int source, NodeSet targets) {
    return std::find(causes.begin(), causes.end(), DisjunctiveCause{source, targets}) != causes.end();
}

int rule_violations(const VerificationReport& r, const std::string& rule) {
    return static_cast<int>(std::count_if(r.violations.begin(), r.violations.end(),
                                          [&](const RuleViolation& v) { return v.rule == rule; }));
}

}  // namespace

TEST(Rules, NamesRoundTrip) {
    for (auto id : {RuleId::ZO, RuleId::AffectsToHo, RuleId::HoTransfer, RuleId::HoSwitch, RuleId::ConditionalSplit,
                    RuleId::ReducibleDescent})
        EXPECT_EQ(parse_rule(rule_name(id)), id);
    EXPECT_THROW(parse_rule("NOPE"), Error);
}

TEST(Rules, ZeroOrderSplit) {
    AffectsRelation r{bit(0), bit(1), bit(2) | bit(3), 0};
    auto alts = apply_transformation_rule(RuleId::ZO, r, bit(2));
    ASSERT_EQ(alts.size(), 2u);
    EXPECT_EQ(alts[0].rel, (AffectsRelation{bit(2), bit(1), bit(3), 0}));
    EXPECT_EQ(alts[1].rel, (AffectsRelation{bit(0) | bit(2), bit(1), bit(3), 0}));
}

TEST(Rules, AffectsToHigherOrder) {
    AffectsRelation r{bit(0) | bit(1), bit(2), 0, bit(3)};
    auto alts = apply_transformation_rule(RuleId::AffectsToHo, r, bit(0));
    ASSERT_EQ(alts.size(), 2u);
    EXPECT_EQ(alts[0].rel, (AffectsRelation{bit(1), bit(2), bit(0), bit(3)}));
    EXPECT_EQ(alts[1].rel, (AffectsRelation{bit(0), bit(2), 0, bit(3)}));
    EXPECT_THROW(apply_transformation_rule(RuleId::AffectsToHo, r, r.x), Error);
}

TEST(Rules, HoTransferHasThreeAlternatives) {
    AffectsRelation r{bit(0), bit(1), bit(2), 0};
    auto alts = apply_transformation_rule(RuleId::HoTransfer, r, bit(2));
    ASSERT_EQ(alts.size(), 3u);
    EXPECT_EQ(alts[0].rel, (AffectsRelation{bit(0), bit(1), 0, 0}));
    EXPECT_EQ(alts[1].rel, (AffectsRelation{bit(2), bit(1), 0, 0}));
    EXPECT_EQ(alts[2].rel, (AffectsRelation{bit(2), bit(1), bit(0), 0}));
}

TEST(Rules, HoSwitchMarksIrreducibleAndNeedsAbsence) {
    AffectsRelation r{bit(0), bit(1), bit(2) | bit(3), bit(4)};
    auto alts = apply_transformation_rule(RuleId::HoSwitch, r, bit(2));
    ASSERT_EQ(alts.size(), 2u);
    EXPECT_TRUE(alts[0].irreducible && alts[1].irreducible);
    EXPECT_EQ(alts[1].rel, (AffectsRelation{bit(2), bit(1), bit(3) | bit(0), bit(4)}));
    auto abs = required_absences(RuleId::HoSwitch, r, bit(2));
    ASSERT_EQ(abs.size(), 1u);
    EXPECT_EQ(abs[0], (AffectsRelation{bit(0), bit(1), bit(3), bit(4)}));
    EXPECT_THROW(apply_transformation_rule(RuleId::HoSwitch, r, bit(2) | bit(3)), Error);
    EXPECT_TRUE(required_absences(RuleId::ZO, r, bit(2)).empty());
}

TEST(Rules, ConditionalSplitShape) {
    AffectsRelation r{bit(0), bit(1) | bit(2), 0, 0};
    auto alts = apply_transformation_rule(RuleId::ConditionalSplit, r, bit(2));
    ASSERT_EQ(alts.size(), 2u);
    EXPECT_EQ(alts[0].rel, (AffectsRelation{bit(0), bit(1), 0, bit(2)}));
    EXPECT_EQ(alts[1].rel, (AffectsRelation{bit(0), bit(2), 0, 0}));
    EXPECT_THROW(apply_transformation_rule(RuleId::ConditionalSplit, {bit(0), bit(1) | bit(2), 0, bit(3)}, bit(2)),
                 Error);
}

TEST(Rules, ReducibleDescentListsProperSubsets) {
    AffectsRelation r{bit(0) | bit(1) | bit(2), bit(3), 0, 0};
    auto alts = apply_transformation_rule(RuleId::ReducibleDescent, r, 0);
    EXPECT_EQ(alts.size(), 6u);
    for (const auto& a : alts) EXPECT_TRUE(a.irreducible);
    EXPECT_THROW(apply_transformation_rule(RuleId::ReducibleDescent, {bit(0), bit(3), 0, 0}, 0), Error);
}

TEST(Causes, OtpOnlyDirectCauses) {
    auto m = recipe_model("otp");
    auto set = enumerate_affects(m, {2, 2, 2, 2});
    auto causes = infer_causes(set);
    int M = set.index_of("M"), K = set.index_of("K"), Mp = set.index_of("M'");
    EXPECT_EQ(causes.size(), 2u);
    EXPECT_TRUE(has_cause(causes, M, bit(Mp)));
    EXPECT_TRUE(has_cause(causes, K, bit(Mp)));
}

TEST(Causes, AbsenceWitnessGivesCause) {
    // B -> D | do(C) present and B -> D absent: C causes D.
    AffectsSet s;
    s.universe = {"B", "C", "D"};
    s.present.push_back({{bit(0), bit(2), bit(1), 0}, {true, {}, {}}});
    s.absent.push_back({bit(0), bit(2), 0, 0});
    auto causes = infer_causes(s);
    EXPECT_TRUE(has_cause(causes, 1, bit(2)));
    EXPECT_TRUE(has_cause(causes, 0, bit(2)));
    s.absent.clear();
    EXPECT_FALSE(has_cause(infer_causes(s), 1, bit(2)));
}

TEST(Causes, SubsumedDisjunctionsRemoved) {
    AffectsSet s;
    s.universe = {"A", "B", "C"};
    s.present.push_back({{bit(0), bit(1), 0, 0}, {}});
    s.present.push_back({{bit(0), bit(1) | bit(2), 0, 0}, {}});
    auto causes = infer_causes(s);
    ASSERT_EQ(causes.size(), 1u);
    EXPECT_EQ(causes[0].targets, bit(1));
}

TEST(Causes, ChainWithCancellingPath) {
    auto m = recipe_model("ex-iv4");
    auto set = enumerate_affects(m, {2, 2, 2, 2});
    auto causes = infer_causes(set);
    int B = set.index_of("B"), C = set.index_of("C"), D = set.index_of("D");
    EXPECT_TRUE(has_cause(causes, C, bit(D)));
    EXPECT_TRUE(has_cause(causes, B, bit(D)));
}

TEST(Verify, RecipeModelsHaveNoViolations) {
    for (const char* name : {"otp", "jamming", "ex-iv4", "ex-iv7"}) {
        auto report = verify_rules_on_model(recipe_model(name), {2, 2, 2, 2});
        EXPECT_TRUE(report.violations.empty()) << name;
        EXPECT_FALSE(report.instances.empty());
    }
}

TEST(Verify, BothPositivePolicyBreaksOnlyAffectsToHo) {
    auto m = recipe_model("ex-iv4");
    AffectsEngine e(m, ContextPolicy::BothPositive);
    auto report = verify_rules_on_model(e, m, {2, 2, 2, 2});
    EXPECT_GT(rule_violations(report, "AFFECTS_TO_HO"), 0);
}

TEST(Property, InferredCausesAreAncestors) {
    auto corpus = deterministic_model_corpus(4, 1, seed_from_env());
    for (const auto& m : corpus) {
        auto set = enumerate_affects(m, {2, 2, 2, 2});
        for (const auto& c : infer_causes(set)) {
            // Universe order equals node order: every corpus node is observed.
            ASSERT_NE(m.structure().descendants(c.source) & c.targets, 0u);
        }
    }
}

TEST(Property, DiscoveryRecoversEdges) {
    auto corpus = deterministic_model_corpus(3, 2, seed_from_env());
    for (const auto& m : corpus) {
        auto found = discover_structure(m);
        ASSERT_EQ(found, m.structure().edges());
    }
}
