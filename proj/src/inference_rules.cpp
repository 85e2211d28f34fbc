#include "causal_affects/inference_rules.hpp"

#include <algorithm>

namespace causal_affects {

namespace {

struct RuleEntry {
    RuleId id;
    const char* name;
};

constexpr RuleEntry kRules[] = {
    {RuleId::ZO, "ZO"},
    {RuleId::AffectsToHo, "AFFECTS_TO_HO"},
    {RuleId::HoTransfer, "HO_TRANSFER"},
    {RuleId::HoSwitch, "HO_SWITCH"},
    {RuleId::ConditionalSplit, "CONDITIONAL_SPLIT"},
    {RuleId::ReducibleDescent, "REDUCIBLE_DESCENT"},
};

void shape(bool ok, RuleId rule, const char* what) {
    if (!ok) throw Error(ErrorCode::RuleShapeMismatch, std::string(rule_name(rule)) + ": " + what);
}

}  // namespace

const char* rule_name(RuleId rule) {
    for (const auto& e : kRules)
        if (e.id == rule) return e.name;
    return "?";
}

RuleId parse_rule(const std::string& name) {
    for (const auto& e : kRules)
        if (name == e.name) return e.id;
    throw Error(ErrorCode::InvalidInput, "unknown rule " + name);
}

std::vector<Alternative> apply_transformation_rule(RuleId rule, const AffectsRelation& r, NodeSet split) {
    check_relation(r);
    switch (rule) {
        case RuleId::ZO: {
            shape(split != 0 && is_subset(split, r.z), rule, "split must be a non-empty subset of Z");
            NodeSet z2 = r.z & ~split;
            return {{{split, r.y, z2, r.w}, false}, {{r.x | split, r.y, z2, r.w}, false}};
        }
        case RuleId::AffectsToHo: {
            shape(split != 0 && is_subset(split, r.x) && split != r.x, rule,
                  "split must be a non-empty proper subset of X");
            NodeSet x = r.x & ~split;
            return {{{x, r.y, r.z | split, r.w}, false}, {{split, r.y, r.z, r.w}, false}};
        }
        case RuleId::HoTransfer: {
            shape(split != 0 && is_subset(split, r.z), rule, "split must be a non-empty subset of Z");
            NodeSet z2 = r.z & ~split;
            return {{{r.x, r.y, z2, r.w}, false},
                    {{split, r.y, z2, r.w}, false},
                    {{split, r.y, z2 | r.x, r.w}, false}};
        }
        case RuleId::HoSwitch: {
            shape(set_size(split) == 1 && is_subset(split, r.z), rule, "split must be one element of Z");
            NodeSet rest = r.z & ~split;
            return {{{split, r.y, rest, r.w}, true}, {{split, r.y, rest | r.x, r.w}, true}};
        }
        case RuleId::ConditionalSplit: {
            shape(r.w == 0, rule, "premise must have an empty W");
            shape(split != 0 && is_subset(split, r.y) && split != r.y, rule,
                  "split must be a non-empty proper subset of Y");
            return {{{r.x, r.y & ~split, r.z, split}, false}, {{r.x, split, r.z, 0}, false}};
        }
        case RuleId::ReducibleDescent: {
            shape(set_size(r.x) >= 2, rule, "premise needs at least two sources");
            std::vector<Alternative> out;
            for_each_subset(r.x, [&](NodeSet s) {
                if (s != 0 && s != r.x) out.push_back({{s, r.y, r.z, r.w}, true});
            });
            std::sort(out.begin(), out.end(),
                      [](const Alternative& a, const Alternative& b) { return relation_order(a.rel, b.rel); });
            return out;
        }
    }
    throw Error(ErrorCode::InvalidInput, "unknown rule");
}

std::vector<AffectsRelation> required_absences(RuleId rule, const AffectsRelation& r, NodeSet split) {
    if (rule != RuleId::HoSwitch) return {};
    apply_transformation_rule(rule, r, split);
    return {{r.x, r.y, r.z & ~split, r.w}};
}

std::vector<DisjunctiveCause> infer_causes(const AffectsSet& affects) {
    AffectsSet set = affects;
    set.normalize();
    std::vector<DisjunctiveCause> raw;
    for (const auto& p : set.present) {
        const auto& r = p.rel;
        NodeSet targets = r.y | r.w;
        if (p.flags.irreducible.value_or(false))
            for (int e : members(r.x)) raw.push_back({e, targets});
        for (int e : members(r.z)) {
            bool witnessed = p.flags.indecreasable.value_or(false) || set.is_absent({r.x, r.y, r.z & ~bit(e), r.w});
            if (witnessed) raw.push_back({e, targets});
        }
    }
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    std::vector<DisjunctiveCause> out;
    for (const auto& c : raw) {
        bool subsumed = std::any_of(raw.begin(), raw.end(), [&](const DisjunctiveCause& d) {
            return d.source == c.source && d.targets != c.targets && is_subset(d.targets, c.targets);
        });
        if (!subsumed) out.push_back(c);
    }
    return out;
}

namespace {

class Verifier {
public:
    Verifier(AffectsEngine& engine, const StructuralModel& model) : engine_(engine), model_(model) {
        fmt_.universe = engine.universe();
        const auto& s = model.structure();
        for (int i = 0; i < s.size(); ++i)
            if (s.node(i).observed) ids_.push_back(i);
        report_.universe = fmt_.universe;
    }

    void check_present(const AffectsRelation& r) {
        for_each_subset(r.z, [&](NodeSet z1) {
            if (z1 == 0) return;
            rule(RuleId::ZO, r, z1);
            rule(RuleId::HoTransfer, r, z1);
        });
        if (set_size(r.x) >= 2) {
            for_each_subset(r.x, [&](NodeSet z1) {
                if (z1 != 0 && z1 != r.x) rule(RuleId::AffectsToHo, r, z1);
            });
        }
        for (int e : members(r.z)) {
            bool absent = true;
            for (const auto& a : required_absences(RuleId::HoSwitch, r, bit(e)))
                absent = absent && !engine_.holds(a);
            if (absent) rule(RuleId::HoSwitch, r, bit(e));
        }
        ClassifyResult c = engine_.classify(r);
        if (c.reducible) rule(RuleId::ReducibleDescent, r, 0);
        if (r.w != 0) {
            AffectsRelation merged{r.x, r.y | r.w, r.z, 0};
            count("MERGE_PRESENT");
            if (!engine_.holds(merged)) violation("MERGE_PRESENT", r, 0, "merged relation " + fmt_.format(merged) + " absent");
            if (!c.reducible) {
                count("MERGE_IRREDUCIBLE");
                if (engine_.classify(merged).reducible)
                    violation("MERGE_IRREDUCIBLE", r, 0, "merged relation " + fmt_.format(merged) + " reducible");
            }
        }
        NodeSet targets = r.y | r.w;
        count("CAUSE_IV3");
        bool any = false;
        for (int e : members(r.x)) any = any || causes(e, targets);
        if (!any) violation("CAUSE_IV3", r, 0, "no source reaches Y or W");
        if (!c.reducible) {
            count("CAUSE_IRREDUCIBLE");
            for (int e : members(r.x))
                if (!causes(e, targets)) violation("CAUSE_IRREDUCIBLE", r, bit(e), fmt_.universe[e] + " reaches no target");
        }
        for (int e : members(r.z)) {
            if (engine_.holds({r.x, r.y, r.z & ~bit(e), r.w})) continue;
            count("CAUSE_HO");
            if (!causes(e, targets)) violation("CAUSE_HO", r, bit(e), fmt_.universe[e] + " reaches no target");
        }
    }

    void check_split(const AffectsRelation& r) {
        if (r.w != 0 || set_size(r.y) < 2) return;
        bool lhs = engine_.holds(r);
        for_each_subset(r.y, [&](NodeSet w) {
            if (w == 0 || w == r.y) return;
            count("SPLIT_EQUIVALENCE");
            bool rhs = engine_.holds({r.x, r.y & ~w, r.z, w}) || engine_.holds({r.x, w, r.z, 0});
            if (lhs != rhs)
                violation("SPLIT_EQUIVALENCE", r, w, lhs ? "no disjunct holds" : "disjunct holds without the premise");
        });
    }

    VerificationReport take() { return std::move(report_); }

private:
    void rule(RuleId id, const AffectsRelation& r, NodeSet split) {
        count(rule_name(id));
        auto alts = apply_transformation_rule(id, r, split);
        bool any = false;
        if (id == RuleId::ReducibleDescent) {
            for (const auto& a : alts) any = any || (engine_.holds(a.rel) && !engine_.classify(a.rel).reducible);
            if (!any) violation(rule_name(id), r, split, "no proper subset affects Y irreducibly");
            return;
        }
        for (const auto& a : alts) {
            if (!engine_.holds(a.rel)) continue;
            any = true;
            if (a.irreducible && engine_.classify(a.rel).reducible)
                violation(rule_name(id), r, split, fmt_.format(a.rel) + " holds but is reducible");
        }
        if (!any) violation(rule_name(id), r, split, "no alternative holds");
    }

    bool causes(int e, NodeSet targets) const {
        NodeSet desc = model_.structure().descendants(ids_[e]);
        for (int t : members(targets))
            if (contains(desc, ids_[t])) return true;
        return false;
    }

    void count(const std::string& name) { ++report_.instances[name]; }

    void violation(const std::string& name, const AffectsRelation& r, NodeSet split, const std::string& detail) {
        report_.violations.push_back({name, r, split, fmt_.format(r) + ": " + detail});
    }

    AffectsEngine& engine_;
    const StructuralModel& model_;
    AffectsSet fmt_;
    std::vector<NodeId> ids_;
    VerificationReport report_;
};

}  // namespace

VerificationReport verify_rules_on_model(AffectsEngine& engine, const StructuralModel& model,
                                         const EnumerationBounds& bounds) {
    Verifier v(engine, model);
    for (const auto& r : candidate_relations(static_cast<int>(engine.universe().size()), bounds)) {
        if (engine.holds(r)) v.check_present(r);
        v.check_split(r);
    }
    return v.take();
}

VerificationReport verify_rules_on_model(const StructuralModel& model, const EnumerationBounds& bounds) {
    AffectsEngine engine(model);
    return verify_rules_on_model(engine, model, bounds);
}

std::vector<std::pair<int, int>> discover_structure(AffectsEngine& engine) {
    int n = static_cast<int>(engine.universe().size());
    NodeSet all = engine.universe_mask();
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && engine.holds({bit(a), bit(b), all & ~bit(a) & ~bit(b), 0})) edges.emplace_back(a, b);
    return edges;
}

std::vector<std::pair<int, int>> discover_structure(const StructuralModel& model) {
    AffectsEngine engine(model);
    return discover_structure(engine);
}

}  // namespace causal_affects
