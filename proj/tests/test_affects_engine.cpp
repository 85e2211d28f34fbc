#include <gtest/gtest.h>

#include "causal_affects/corpus.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace causal_affects;
using test_support::recipe_model;

namespace {

AffectsRelation rel(const AffectsEngine& e, std::vector<std::string> x, std::vector<std::string> y,
                    std::vector<std::string> z = {}, std::vector<std::string> w = {}) {
    AffectsSet u;
    u.universe = e.universe();
    return {u.set_of(x), u.set_of(y), u.set_of(z), u.set_of(w)};
}

// Universe index masks to model node ids.
NodeSet to_model(const StructuralModel& m, NodeSet s) {
    NodeSet out = 0;
    int k = 0;
    for (int i = 0; i < m.structure().size(); ++i) {
        if (!m.structure().node(i).observed) continue;
        if (contains(s, k)) out |= bit(i);
        ++k;
    }
    return out;
}

}  // namespace

TEST(Affects, Otp) {
    auto m = recipe_model("otp");
    AffectsEngine e(m);
    EXPECT_FALSE(e.holds(rel(e, {"M"}, {"M'"})));
    EXPECT_FALSE(e.holds(rel(e, {"K"}, {"M'"})));
    EXPECT_TRUE(e.holds(rel(e, {"M", "K"}, {"M'"})));
    EXPECT_TRUE(e.holds(rel(e, {"M"}, {"M'"}, {"K"})));
    EXPECT_TRUE(e.holds(rel(e, {"M"}, {"M'"}, {}, {"K"})));
    EXPECT_FALSE(e.holds(rel(e, {"M'"}, {"M"})));
    auto c = e.classify(rel(e, {"M", "K"}, {"M'"}));
    EXPECT_FALSE(c.reducible);
    auto d = e.classify(rel(e, {"M"}, {"M'"}, {"K"}));
    EXPECT_TRUE(d.indecreasable);
    EXPECT_TRUE(d.strongly_indecreasable);
}

TEST(Affects, JammingOnlyJointInfluence) {
    auto m = recipe_model("jamming");
    AffectsEngine e(m);
    EXPECT_TRUE(e.holds(rel(e, {"B"}, {"A", "C"})));
    EXPECT_FALSE(e.holds(rel(e, {"B"}, {"A"})));
    EXPECT_FALSE(e.holds(rel(e, {"B"}, {"C"})));
    EXPECT_TRUE(e.holds(rel(e, {"B"}, {"C"}, {}, {"A"})));
    EXPECT_TRUE(e.holds(rel(e, {"B"}, {"A"}, {}, {"C"})));
    EXPECT_FALSE(e.holds(rel(e, {"A"}, {"C"})));
}

TEST(Affects, ChainWithCancellingPath) {
    auto m = recipe_model("ex-iv4");
    AffectsEngine e(m);
    auto cd = rel(e, {"C"}, {"D"});
    ASSERT_TRUE(e.holds(cd));
    EXPECT_TRUE(e.classify(cd).indecreasable);
    EXPECT_FALSE(e.classify(cd).strongly_indecreasable);
    EXPECT_FALSE(e.holds(rel(e, {"B", "C"}, {"D"})));
    auto bdc = rel(e, {"B"}, {"D"}, {"C"});
    ASSERT_TRUE(e.holds(bdc));
    auto c = e.classify(bdc);
    EXPECT_FALSE(c.reducible);
    EXPECT_TRUE(c.indecreasable);
    EXPECT_TRUE(c.strongly_indecreasable);
    EXPECT_FALSE(e.holds(rel(e, {"B"}, {"D"})));
}

TEST(Affects, HiddenNodesAreOutsideTheUniverse) {
    auto m = recipe_model("jamming");
    AffectsEngine e(m);
    EXPECT_EQ(e.universe(), (std::vector<std::string>{"B", "A", "C"}));
    EXPECT_THROW(e.holds({bit(0), bit(5), 0, 0}), Error);
    EXPECT_THROW(e.holds({bit(0), bit(0), 0, 0}), Error);
    EXPECT_THROW(e.holds({0, bit(1), 0, 0}), Error);
}

TEST(Affects, ClassifyAbsentRelationThrows) {
    auto m = recipe_model("otp");
    AffectsEngine e(m);
    try {
        e.classify(rel(e, {"M"}, {"M'"}));
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::RelationNotPresent);
    }
}

TEST(Affects, PolicyNames) {
    EXPECT_EQ(parse_context_policy("both-positive"), ContextPolicy::BothPositive);
    EXPECT_EQ(parse_context_policy("support-sensitive"), ContextPolicy::SupportSensitive);
    EXPECT_STREQ(context_policy_name(ContextPolicy::BothPositive), "both-positive");
    EXPECT_THROW(parse_context_policy("other"), Error);
}

TEST(Affects, PoliciesDifferOnlyOnOneSidedContexts) {
    // The ex-iv4 model with Z1 = A: AB -> D | C holds under both policies, B -> D | {do(A), C} only
    // when a context that is impossible on one side counts as a difference.
    auto m = recipe_model("ex-iv4");
    AffectsEngine strict(m, ContextPolicy::BothPositive), sensitive(m, ContextPolicy::SupportSensitive);
    auto r = rel(strict, {"B"}, {"D"}, {"A"}, {"C"});
    EXPECT_NE(strict.holds(r), sensitive.holds(r));
    auto unconditional = rel(strict, {"B"}, {"D"}, {"C"});
    EXPECT_EQ(strict.holds(unconditional), sensitive.holds(unconditional));
}

TEST(ConditionalityTransform, Shape) {
    AffectsRelation r{bit(0), bit(1), 0, bit(2)};
    auto t = conditionality_transform(r);
    EXPECT_EQ(t.x, bit(0));
    EXPECT_EQ(t.y, bit(1) | bit(2));
    EXPECT_EQ(t.w, 0u);
    EXPECT_THROW(conditionality_transform({bit(0), bit(1), bit(2), 0}), Error);
}

TEST(Candidates, BoundsAndOrder) {
    auto all = candidate_relations(3, {1, 1, 1, 1});
    for (const auto& r : all) {
        EXPECT_TRUE(r.well_formed());
        EXPECT_EQ(set_size(r.x), 1);
        EXPECT_EQ(set_size(r.y), 1);
    }
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end(), relation_order));
    // 3 * 2 ordered (x, y) pairs, the third node in none, Z or W.
    EXPECT_EQ(all.size(), 18u);
    EXPECT_THROW(candidate_relations(3, {0, 1, 1, 1}), Error);
}

TEST(AffectsSet, NormalizeFillsAndRejects) {
    AffectsSet s;
    s.universe = {"A", "B", "C"};
    s.present.push_back({{bit(0), bit(1), 0, 0}, {}});
    s.normalize();
    EXPECT_EQ(s.present[0].flags.irreducible, true);
    EXPECT_EQ(s.present[0].flags.indecreasable, true);
    EXPECT_EQ(s.present[0].flags.strong, false);

    AffectsSet bad = s;
    bad.present[0].flags = {true, true, true};
    EXPECT_THROW(bad.normalize(), Error);

    AffectsSet reducible_single;
    reducible_single.universe = {"A", "B"};
    reducible_single.present.push_back({{bit(0), bit(1), 0, 0}, {false, {}, {}}});
    EXPECT_THROW(reducible_single.normalize(), Error);

    AffectsSet both = s;
    both.absent.push_back({bit(0), bit(1), 0, 0});
    EXPECT_THROW(both.normalize(), Error);
}

// The engine against a definition-level oracle that rebuilds every joint by brute force.
TEST(Property, EngineMatchesOracle) {
    auto corpus = deterministic_model_corpus(3, 2, seed_from_env());
    auto extra = deterministic_model_corpus(4, 1, seed_from_env() + 1);
    for (std::size_t i = 0; i < extra.size(); i += 7) corpus.push_back(extra[i]);
    std::size_t checked = 0;
    for (auto policy : {ContextPolicy::BothPositive, ContextPolicy::SupportSensitive}) {
        for (const auto& m : corpus) {
            AffectsEngine e(m, policy);
            for (const auto& r : candidate_relations(static_cast<int>(e.universe().size()), {2, 2, 2, 2})) {
                bool lib = e.holds(r);
                bool ref = oracle::affects(m, to_model(m, r.x), to_model(m, r.y), to_model(m, r.z),
                                           to_model(m, r.w), policy);
                ASSERT_EQ(lib, ref) << "policy " << context_policy_name(policy);
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 1000u);
}

TEST(Property, ClassificationInvariants) {
    auto corpus = deterministic_model_corpus(3, 2, seed_from_env());
    for (const auto& m : corpus) {
        auto s = enumerate_affects(m, {2, 2, 2, 2});
        s.normalize();
        for (const auto& p : s.present) {
            if (*p.flags.strong) ASSERT_TRUE(*p.flags.indecreasable);
            if (p.rel.z == 0) ASSERT_FALSE(*p.flags.strong);
            if (set_size(p.rel.x) == 1) ASSERT_TRUE(*p.flags.irreducible);
        }
    }
}

// X affects Y with no do-set or conditioning only if some x reaches some y by a directed path.
TEST(Property, ZeroOrderNeedsADirectedPath) {
    auto corpus = deterministic_model_corpus(4, 1, seed_from_env());
    for (const auto& m : corpus) {
        const auto& st = m.structure();
        auto s = enumerate_affects(m, {2, 2, 0, 0});
        for (const auto& p : s.present) {
            bool reach = false;
            for (int x : members(p.rel.x))
                if (st.descendants(x) & p.rel.y) reach = true;
            ASSERT_TRUE(reach);
        }
    }
}

TEST(Property, EnumerationIsDeterministic) {
    auto m = recipe_model("ex-iv4");
    auto a = enumerate_affects(m, {2, 2, 2, 2});
    auto b = enumerate_affects(m, {2, 2, 2, 2});
    ASSERT_EQ(a.present.size(), b.present.size());
    for (std::size_t i = 0; i < a.present.size(); ++i) EXPECT_EQ(a.present[i].rel, b.present[i].rel);
    EXPECT_EQ(a.absent, b.absent);
}
