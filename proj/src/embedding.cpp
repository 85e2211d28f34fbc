#include "causal_affects/embedding.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace causal_affects {

namespace {

struct ModeEntry {
    CompatMode mode;
    const char* name;
};

constexpr ModeEntry kModes[] = {
    {CompatMode::Irreducible, "irreducible"},
    {CompatMode::StrongIndecreasable, "strong-indecreasable"},
    {CompatMode::Indecreasable, "indecreasable"},
};

struct FlaggedRelation {
    AffectsRelation rel;
    bool irreducible = false;
    bool indecreasable = false;
    bool strong = false;
};

// Per-relation verdicts; every field depends only on the points of the relation's RVs.
struct Local {
    bool irreducible_ok = true;
    bool strong_ok = true;
    bool indecreasable_ok = true;
    bool stable = true;
    bool minimum_stable = true;
    bool trivial = false;
    bool meaningless = false;
};

class Checker {
public:
    Checker(const AffectsSet& affects, const Poset& poset) : poset_(poset) {
        AffectsSet set = affects;
        set.normalize();
        n_ = static_cast<int>(set.universe.size());
        for (const auto& p : set.present)
            relations_.push_back({p.rel, p.flags.irreducible.value_or(false), p.flags.indecreasable.value_or(false),
                                  p.flags.strong.value_or(false)});
    }

    int rv_count() const { return n_; }
    const std::vector<FlaggedRelation>& relations() const { return relations_; }

    PointSet region(NodeSet s, const std::vector<int>& point) const {
        PointSet out = poset_.full_set();
        for (int i : members(s)) out &= poset_.future(point[i]);
        return out;
    }

    Local evaluate(const FlaggedRelation& f, const std::vector<int>& point) const {
        const auto& r = f.rel;
        Local l;
        PointSet rx = region(r.x, point);
        PointSet ryzw = region(r.y | r.z | r.w, point);
        l.meaningless = ryzw.none();
        bool forward = ryzw.is_subset_of(rx);
        l.irreducible_ok = !f.irreducible || forward;
        bool backward = region(r.y | r.w | r.x, point).is_subset_of(region(r.z, point));
        l.strong_ok = l.irreducible_ok && (!f.strong || backward);
        l.indecreasable_ok = l.irreducible_ok && (!f.indecreasable || backward);
        l.stable = ryzw.is_proper_subset_of(rx);
        l.minimum_stable = ryzw.is_subset_of(rx - poset_.minimal(rx));
        l.trivial = set_size(r.x) == 1 && set_size(r.y) == 1 && r.z == 0 && r.w == 0 &&
                    point[std::countr_zero(r.x)] == point[std::countr_zero(r.y)];
        return l;
    }

private:
    const Poset& poset_;
    int n_ = 0;
    std::vector<FlaggedRelation> relations_;
};

bool mode_ok(const Local& l, CompatMode mode) {
    switch (mode) {
        case CompatMode::Irreducible: return l.irreducible_ok;
        case CompatMode::StrongIndecreasable: return l.strong_ok;
        case CompatMode::Indecreasable: return l.indecreasable_ok;
    }
    return false;
}

bool satisfies(const Local& l, const SearchRequirements& req) {
    return mode_ok(l, req.mode) && (!req.support_stable || l.stable) && (!req.minimum_stable || l.minimum_stable) &&
           (!req.non_trivial || !l.trivial);
}

void check_points(const Poset& poset, const Embedding& emb, int n) {
    if (static_cast<int>(emb.point.size()) != n)
        throw Error(ErrorCode::UnknownNode, "embedding covers " + std::to_string(emb.point.size()) + " of " +
                                                std::to_string(n) + " RVs");
    for (int p : emb.point)
        if (p < 0 || p >= poset.size()) throw Error(ErrorCode::UnknownNode, "embedding point outside the poset");
}

}  // namespace

const char* compat_mode_name(CompatMode mode) {
    for (const auto& e : kModes)
        if (e.mode == mode) return e.name;
    return "?";
}

CompatMode parse_compat_mode(const std::string& name) {
    for (const auto& e : kModes)
        if (name == e.name) return e.mode;
    throw Error(ErrorCode::InvalidInput, "unknown compatibility mode " + name);
}

Embedding make_embedding(const AffectsSet& affects, const Poset& poset,
                         const std::map<std::string, std::string>& ordering) {
    Embedding emb;
    for (const auto& rv : affects.universe) {
        auto it = ordering.find(rv);
        if (it == ordering.end()) throw Error(ErrorCode::UnknownNode, "RV " + rv + " is not embedded");
        emb.point.push_back(poset.index_of(it->second));
    }
    for (const auto& [rv, point] : ordering)
        if (std::find(affects.universe.begin(), affects.universe.end(), rv) == affects.universe.end())
            throw Error(ErrorCode::UnknownNode, "embedding names unknown RV " + rv);
    return emb;
}

EmbeddingReport check_embedding(const AffectsSet& affects, const Poset& poset, const Embedding& emb,
                                CompatMode mode) {
    Checker checker(affects, poset);
    check_points(poset, emb, checker.rv_count());
    EmbeddingReport rep;
    rep.mode = mode;
    for (const auto& f : checker.relations()) {
        Local l = checker.evaluate(f, emb.point);
        auto record = [&](ModeVerdict& v, bool ok) {
            if (ok) return;
            v.compatible = false;
            v.violations.push_back(f.rel);
        };
        record(rep.irreducible, l.irreducible_ok);
        record(rep.strong_indecreasable, l.strong_ok);
        record(rep.indecreasable, l.indecreasable_ok);
        rep.support_stable = rep.support_stable && l.stable;
        rep.minimum_stable = rep.minimum_stable && l.minimum_stable;
        rep.trivial = rep.trivial || l.trivial;
        if (l.meaningless) rep.meaningless.push_back(f.rel);
    }
    if ((rep.indecreasable.compatible && !rep.strong_indecreasable.compatible) ||
        (rep.strong_indecreasable.compatible && !rep.irreducible.compatible))
        throw std::logic_error("compatibility modes out of order");
    std::set<int> distinct(emb.point.begin(), emb.point.end());
    rep.degenerate = distinct.size() != emb.point.size();
    switch (mode) {
        case CompatMode::Irreducible: rep.compat = rep.irreducible.compatible; break;
        case CompatMode::StrongIndecreasable: rep.compat = rep.strong_indecreasable.compatible; break;
        case CompatMode::Indecreasable: rep.compat = rep.indecreasable.compatible; break;
    }
    return rep;
}

std::vector<Embedding> search_embeddings(const AffectsSet& affects, const Poset& poset,
                                         const SearchRequirements& require, std::size_t cap) {
    Checker checker(affects, poset);
    int n = checker.rv_count();
    std::size_t space = 1;
    for (int i = 0; i < n; ++i) {
        if (poset.size() != 0 && space > cap / static_cast<std::size_t>(poset.size()))
            throw Error(ErrorCode::CapExceeded, "embedding search space exceeds " + std::to_string(cap));
        space *= static_cast<std::size_t>(poset.size());
    }
    if (space > cap) throw Error(ErrorCode::CapExceeded, "embedding search space exceeds " + std::to_string(cap));

    // Relations are checked as soon as their highest RV is placed.
    std::vector<std::vector<const FlaggedRelation*>> due(n);
    for (const auto& f : checker.relations()) due[63 - std::countl_zero(f.rel.all())].push_back(&f);

    std::vector<Embedding> out;
    std::vector<int> point(n, 0);
    std::vector<bool> used(poset.size(), false);
    auto place = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            out.push_back({point});
            return;
        }
        for (int p = 0; p < poset.size(); ++p) {
            if (require.non_degenerate && used[p]) continue;
            point[depth] = p;
            bool ok = std::all_of(due[depth].begin(), due[depth].end(), [&](const FlaggedRelation* f) {
                return satisfies(checker.evaluate(*f, point), require);
            });
            if (!ok) continue;
            used[p] = true;
            self(self, depth + 1);
            used[p] = false;
        }
    };
    place(place, 0);
    return out;
}

AffectsSet reduce_ho_relations(const AffectsSet& affects) {
    AffectsSet in = affects;
    in.normalize();
    AffectsSet out;
    out.universe = in.universe;
    std::set<AffectsRelation> seen;
    for (const auto& p : in.present) {
        if (!p.flags.irreducible.value_or(false) || !p.flags.indecreasable.value_or(false))
            throw Error(ErrorCode::UnflaggedRelation,
                        in.format(p.rel) + " must be flagged irreducible and indecreasable");
        AffectsRelation r{p.rel.x | p.rel.z, p.rel.y | p.rel.w, 0, 0};
        if (!seen.insert(r).second) continue;
        PresentRelation q;
        q.rel = r;
        q.flags.irreducible = true;
        q.flags.indecreasable = true;
        q.flags.strong = false;
        out.present.push_back(q);
    }
    std::sort(out.present.begin(), out.present.end(), [](const PresentRelation& a, const PresentRelation& b) {
        return relation_order(a.rel, b.rel);
    });
    return out;
}

}  // namespace causal_affects
