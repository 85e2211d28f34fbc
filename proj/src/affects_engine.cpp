#include "causal_affects/affects_engine.hpp"

#include <algorithm>
#include <tuple>

namespace causal_affects {

void check_relation(const AffectsRelation& r) {
    if (r.x == 0) throw Error(ErrorCode::IllFormedRelation, "affects relation with empty X");
    if (r.y == 0) throw Error(ErrorCode::IllFormedRelation, "affects relation with empty Y");
    if (!r.well_formed()) throw Error(ErrorCode::IllFormedRelation, "affects relation sets overlap");
}

int AffectsSet::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (universe[i] == name) return static_cast<int>(i);
    throw Error(ErrorCode::UnknownNode, "unknown node " + name);
}

NodeSet AffectsSet::set_of(const std::vector<std::string>& names) const {
    NodeSet s = 0;
    for (const auto& n : names) s |= bit(index_of(n));
    return s;
}

std::vector<std::string> AffectsSet::names(NodeSet s) const {
    std::vector<std::string> out;
    for (int i : members(s)) out.push_back(universe.at(i));
    return out;
}

std::string AffectsSet::format(const AffectsRelation& r) const {
    auto join = [&](NodeSet s) {
        std::string out;
        for (const auto& n : names(s)) out += (out.empty() ? "" : ",") + n;
        return out;
    };
    std::string out = join(r.x) + " -> " + join(r.y);
    if (r.z || r.w) {
        out += " | ";
        if (r.z) out += "do(" + join(r.z) + ")";
        if (r.z && r.w) out += ", ";
        if (r.w) out += join(r.w);
    }
    return out;
}

bool AffectsSet::is_absent(const AffectsRelation& r) const {
    return std::find(absent.begin(), absent.end(), r) != absent.end();
}

const PresentRelation* AffectsSet::find_present(const AffectsRelation& r) const {
    for (const auto& p : present)
        if (p.rel == r) return &p;
    return nullptr;
}

void AffectsSet::normalize() {
    NodeSet all = universe.size() >= 64 ? ~NodeSet{0} : bit(static_cast<int>(universe.size())) - 1;
    for (auto& p : present) {
        check_relation(p.rel);
        if (!is_subset(p.rel.all(), all)) throw Error(ErrorCode::UnknownNode, "relation outside the universe");
        auto& f = p.flags;
        if (set_size(p.rel.x) == 1) {
            if (f.irreducible == false)
                throw Error(ErrorCode::InconsistentFlags, format(p.rel) + ": single-source relation flagged reducible");
            f.irreducible = true;
        }
        if (p.rel.z == 0) {
            if (f.strong == true)
                throw Error(ErrorCode::InconsistentFlags,
                            format(p.rel) + ": relation without do-set cannot be strongly indecreasable");
            if (f.indecreasable == false)
                throw Error(ErrorCode::InconsistentFlags,
                            format(p.rel) + ": relation without do-set is always indecreasable");
            f.indecreasable = true;
            f.strong = false;
        }
        if (f.strong == true && f.indecreasable == false)
            throw Error(ErrorCode::InconsistentFlags, format(p.rel) + ": strong but not indecreasable");
        if (f.strong == true) f.indecreasable = true;
    }
    for (const auto& a : absent) {
        check_relation(a);
        if (!is_subset(a.all(), all)) throw Error(ErrorCode::UnknownNode, "relation outside the universe");
        if (find_present(a)) throw Error(ErrorCode::InvalidInput, format(a) + " is both present and absent");
    }
}

bool relation_order(const AffectsRelation& a, const AffectsRelation& b) {
    auto key = [](const AffectsRelation& r) {
        return std::make_tuple(set_size(r.x), set_size(r.y), set_size(r.z), set_size(r.w), r.x, r.y, r.z, r.w);
    };
    return key(a) < key(b);
}

const char* context_policy_name(ContextPolicy p) {
    return p == ContextPolicy::BothPositive ? "both-positive" : "support-sensitive";
}

ContextPolicy parse_context_policy(const std::string& name) {
    if (name == "both-positive") return ContextPolicy::BothPositive;
    if (name == "support-sensitive") return ContextPolicy::SupportSensitive;
    throw Error(ErrorCode::InvalidInput, "unknown context policy " + name);
}

AffectsEngine::AffectsEngine(const StructuralModel& model, ContextPolicy policy) : model_(model), policy_(policy) {
    const auto& s = model_.structure();
    for (int i = 0; i < s.size(); ++i) {
        if (!s.node(i).observed) continue;
        universe_.push_back(s.node(i).name);
        model_id_.push_back(i);
        cards_.push_back(s.node(i).cardinality);
    }
}

const JointDistribution& AffectsEngine::intervened(NodeSet target, const std::vector<int>& values) {
    auto key = std::make_pair(target, values);
    auto it = dist_cache_.find(key);
    if (it != dist_cache_.end()) return it->second;
    Assignment a;
    auto idx = members(target);
    for (std::size_t k = 0; k < idx.size(); ++k) a[model_id_.at(idx[k])] = values.at(k);
    auto [pos, inserted] = dist_cache_.emplace(key, post_intervention_distribution(model_, a));
    (void)inserted;
    return pos->second;
}

namespace {

// Odometer over the joint values of the listed universe indices.
bool advance(std::vector<int>& digits, const std::vector<int>& idx, const std::vector<int>& cards) {
    for (std::size_t k = digits.size(); k-- > 0;) {
        if (++digits[k] < cards[idx[k]]) return true;
        digits[k] = 0;
    }
    return false;
}

// Joint table of (Y, W) as a flat [iy * nw + iw] array.
std::vector<Rational> yw_table(const JointDistribution& d, const std::vector<int>& ys, const std::vector<int>& ws,
                               const std::vector<int>& cards, std::size_t nw) {
    std::size_t ny = 1;
    for (int y : ys) ny *= cards[y];
    std::vector<Rational> out(ny * nw, Rational(0));
    const auto& p = d.probabilities();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        auto v = d.values(i);
        std::size_t iy = 0, iw = 0;
        for (int y : ys) iy = iy * cards[y] + v[y];
        for (int w : ws) iw = iw * cards[w] + v[w];
        out[iy * nw + iw] += p[i];
    }
    return out;
}

}  // namespace

bool AffectsEngine::decide(const AffectsRelation& r) {
    auto xs = members(r.x), ys = members(r.y), zs = members(r.z), ws = members(r.w);
    std::size_t nw = 1, ny = 1;
    for (int w : ws) nw *= cards_[w];
    for (int y : ys) ny *= cards_[y];
    auto xz = members(r.x | r.z);
    std::vector<int> zv(zs.size(), 0);
    do {
        const auto base = yw_table(intervened(r.z, zv), ys, ws, cards_, nw);
        std::vector<Rational> base_w(nw, Rational(0));
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t iw = 0; iw < nw; ++iw) base_w[iw] += base[iy * nw + iw];
        std::vector<int> xv(xs.size(), 0);
        do {
            std::vector<int> joint(xz.size());
            for (std::size_t k = 0; k < xz.size(); ++k) {
                int node = xz[k];
                auto xi = std::find(xs.begin(), xs.end(), node);
                joint[k] = xi != xs.end() ? xv[xi - xs.begin()] : zv[std::find(zs.begin(), zs.end(), node) - zs.begin()];
            }
            const auto act = yw_table(intervened(r.x | r.z, joint), ys, ws, cards_, nw);
            for (std::size_t iw = 0; iw < nw; ++iw) {
                Rational act_w = 0;
                for (std::size_t iy = 0; iy < ny; ++iy) act_w += act[iy * nw + iw];
                if (act_w == 0 && base_w[iw] == 0) continue;
                if (act_w == 0 || base_w[iw] == 0) {
                    if (policy_ == ContextPolicy::SupportSensitive) return true;
                    continue;
                }
                for (std::size_t iy = 0; iy < ny; ++iy)
                    if (act[iy * nw + iw] * base_w[iw] != base[iy * nw + iw] * act_w) return true;
            }
        } while (advance(xv, xs, cards_));
    } while (advance(zv, zs, cards_));
    return false;
}

bool AffectsEngine::holds(const AffectsRelation& r) {
    check_relation(r);
    if (!is_subset(r.all(), universe_mask()))
        throw Error(ErrorCode::IllFormedRelation, "relation references nodes outside the observed set");
    auto it = memo_.find(r);
    if (it != memo_.end()) return it->second;
    bool h = decide(r);
    memo_.emplace(r, h);
    return h;
}

ClassifyResult AffectsEngine::classify(const AffectsRelation& r) {
    if (!holds(r)) throw Error(ErrorCode::RelationNotPresent, "relation does not hold in the model");
    ClassifyResult c;
    for_each_subset(r.x, [&](NodeSet s) {
        if (c.reducible || s == 0 || s == r.x) return;
        if (!holds({s, r.y, r.z | (r.x & ~s), r.w})) c.reducible = true;
    });
    c.indecreasable = true;
    for (int e : members(r.z))
        if (holds({r.x, r.y, r.z & ~bit(e), r.w})) c.indecreasable = false;
    c.strongly_indecreasable = c.indecreasable && (r.z == 0 ? false : !holds({r.x, r.y, 0, r.w}));
    return c;
}

bool affects_holds(const StructuralModel& model, const AffectsRelation& r, ContextPolicy policy) {
    AffectsEngine engine(model, policy);
    return engine.holds(r);
}

ClassifyResult classify_relation(const StructuralModel& model, const AffectsRelation& r, ContextPolicy policy) {
    AffectsEngine engine(model, policy);
    return engine.classify(r);
}

std::vector<AffectsRelation> candidate_relations(int n, const EnumerationBounds& bounds) {
    if (bounds.max_x < 1 || bounds.max_y < 1)
        throw Error(ErrorCode::InvalidInput, "enumeration bounds for X and Y must be at least 1");
    std::vector<AffectsRelation> all;
    std::vector<int> role(n, 0);
    while (true) {
        AffectsRelation r;
        for (int i = 0; i < n; ++i) {
            if (role[i] == 1) r.x |= bit(i);
            if (role[i] == 2) r.y |= bit(i);
            if (role[i] == 3) r.z |= bit(i);
            if (role[i] == 4) r.w |= bit(i);
        }
        if (r.x && r.y && set_size(r.x) <= bounds.max_x && set_size(r.y) <= bounds.max_y &&
            set_size(r.z) <= bounds.max_z && set_size(r.w) <= bounds.max_w)
            all.push_back(r);
        int k = 0;
        while (k < n && ++role[k] == 5) role[k++] = 0;
        if (k == n) break;
    }
    std::sort(all.begin(), all.end(), relation_order);
    return all;
}

AffectsSet enumerate_affects(AffectsEngine& engine, const EnumerationBounds& bounds) {
    AffectsSet out;
    out.universe = engine.universe();
    for (const auto& r : candidate_relations(static_cast<int>(out.universe.size()), bounds)) {
        if (engine.holds(r)) {
            auto c = engine.classify(r);
            out.present.push_back({r, {!c.reducible, c.indecreasable, c.strongly_indecreasable}});
        } else {
            out.absent.push_back(r);
        }
    }
    return out;
}

AffectsSet enumerate_affects(const StructuralModel& model, const EnumerationBounds& bounds, ContextPolicy policy) {
    AffectsEngine engine(model, policy);
    return enumerate_affects(engine, bounds);
}

AffectsRelation conditionality_transform(const AffectsRelation& r) {
    check_relation(r);
    if (r.z != 0) throw Error(ErrorCode::RuleShapeMismatch, "conditionality transform needs an empty do-set");
    return {r.x, r.y | r.w, 0, 0};
}

}  // namespace causal_affects
