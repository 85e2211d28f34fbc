#include "causal_affects/loop_analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace causal_affects {

namespace {

NodeSet universe_mask(const AffectsSet& a) {
    return a.universe.size() >= 64 ? ~NodeSet{0} : bit(static_cast<int>(a.universe.size())) - 1;
}

// Irreducible present relations; reducible ones are reported, unflagged ones rejected.
std::vector<AffectsRelation> irreducible_relations(const AffectsSet& set, std::vector<std::string>* warnings) {
    std::vector<AffectsRelation> out;
    for (const auto& p : set.present) {
        if (!p.flags.irreducible.has_value())
            throw Error(ErrorCode::UnflaggedRelation, set.format(p.rel) + " has no irreducibility flag");
        if (*p.flags.irreducible) {
            out.push_back(p.rel);
        } else if (warnings) {
            warnings->push_back("ignoring reducible relation " + set.format(p.rel));
        }
    }
    std::sort(out.begin(), out.end(), relation_order);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void add_family(std::vector<IndexedArrow>& arrows, int source, NodeSet index) {
    for (int t : members(index)) arrows.push_back({source, t, index});
}

}  // namespace

GraphBuild build_potential_cause_graph(const AffectsSet& affects, bool extended) {
    AffectsSet set = affects;
    set.normalize();
    GraphBuild out;
    out.graph.universe = set.universe;
    out.graph.nodes = universe_mask(set);
    std::vector<IndexedArrow> arrows;
    for (const auto& r : irreducible_relations(set, &out.warnings))
        for (int e : members(r.x)) add_family(arrows, e, r.y | r.w);
    if (extended) {
        for (const auto& p : set.present) {
            const auto& r = p.rel;
            for (int e : members(r.z)) {
                bool witnessed =
                    p.flags.indecreasable.value_or(false) || set.is_absent({r.x, r.y, r.z & ~bit(e), r.w});
                if (!witnessed) continue;
                add_family(arrows, e, r.y | r.w);
                out.used_absences = true;
            }
        }
    }
    std::sort(arrows.begin(), arrows.end());
    arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
    // A family is redundant when the same source has a family on a strict subset.
    std::map<int, std::set<NodeSet>> families;
    for (const auto& a : arrows) families[a.source].insert(a.index);
    for (const auto& a : arrows) {
        bool redundant = false;
        for (NodeSet other : families[a.source])
            if (other != a.index && is_subset(other, a.index)) redundant = true;
        if (!redundant) out.graph.arrows.push_back(a);
    }
    return out;
}

CauseGraph build_loop_graph(const CauseGraph& g, std::mt19937_64* rng) {
    NodeSet alive = g.nodes;
    std::vector<bool> live(g.arrows.size(), true);
    auto has_child = [&](int v) {
        for (std::size_t i = 0; i < g.arrows.size(); ++i)
            if (live[i] && g.arrows[i].source == v) return true;
        return false;
    };
    auto has_parent = [&](int v) {
        for (std::size_t i = 0; i < g.arrows.size(); ++i)
            if (live[i] && g.arrows[i].target == v) return true;
        return false;
    };
    while (true) {
        std::vector<int> childless;
        for (int v : members(alive))
            if (!has_child(v)) childless.push_back(v);
        if (childless.empty()) break;
        int v = childless.front();
        if (rng) v = childless[std::uniform_int_distribution<std::size_t>(0, childless.size() - 1)(*rng)];
        alive &= ~bit(v);
        for (std::size_t i = 0; i < g.arrows.size(); ++i) {
            if (!live[i] || g.arrows[i].target != v) continue;
            for (std::size_t j = 0; j < g.arrows.size(); ++j)
                if (g.arrows[j].source == g.arrows[i].source && g.arrows[j].index == g.arrows[i].index)
                    live[j] = false;
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v : members(alive)) {
            if (has_parent(v)) continue;
            alive &= ~bit(v);
            for (std::size_t i = 0; i < g.arrows.size(); ++i)
                if (g.arrows[i].source == v) live[i] = false;
            changed = true;
        }
    }
    CauseGraph out;
    out.universe = g.universe;
    out.nodes = alive;
    for (std::size_t i = 0; i < g.arrows.size(); ++i)
        if (live[i]) out.arrows.push_back(g.arrows[i]);
    return out;
}

namespace {

class ResolutionSearch {
public:
    ResolutionSearch(std::vector<std::pair<int, std::vector<int>>> families, int n, std::size_t cap)
        : families_(std::move(families)), count_(n, std::vector<int>(n, 0)), cap_(cap) {}

    OracleResult run() {
        OracleResult out;
        out.acyclic_resolution = solve(0);
        out.visited = visited_;
        if (out.acyclic_resolution) out.witness = witness_;
        return out;
    }

private:
    bool reaches(int from, int to) const {
        std::vector<bool> seen(count_.size(), false);
        std::vector<int> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == to) return true;
            for (std::size_t w = 0; w < count_.size(); ++w)
                if (count_[v][w] > 0 && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(static_cast<int>(w));
                }
        }
        return false;
    }

    bool solve(std::size_t i) {
        if (++visited_ > cap_) throw Error(ErrorCode::CapExceeded, "resolution search exceeded its cap");
        if (i == families_.size()) {
            witness_.clear();
            for (std::size_t a = 0; a < count_.size(); ++a)
                for (std::size_t b = 0; b < count_.size(); ++b)
                    if (count_[a][b] > 0) witness_.emplace_back(static_cast<int>(a), static_cast<int>(b));
            return true;
        }
        const auto& [s, targets] = families_[i];
        // An edge already chosen satisfies this family without adding anything.
        for (int t : targets)
            if (count_[s][t] > 0) return solve(i + 1);
        for (int t : targets) {
            if (reaches(t, s)) continue;
            ++count_[s][t];
            if (solve(i + 1)) return true;
            --count_[s][t];
        }
        return false;
    }

    std::vector<std::pair<int, std::vector<int>>> families_;
    std::vector<std::vector<int>> count_;
    std::size_t cap_;
    std::size_t visited_ = 0;
    std::vector<std::pair<int, int>> witness_;
};

}  // namespace

OracleResult resolution_oracle(const AffectsSet& affects, std::size_t cap) {
    AffectsSet set = affects;
    set.normalize();
    std::vector<std::pair<int, std::vector<int>>> families;
    for (const auto& r : irreducible_relations(set, nullptr))
        for (int e : members(r.x)) families.emplace_back(e, members(r.y | r.w));
    return ResolutionSearch(std::move(families), static_cast<int>(set.universe.size()), cap).run();
}

std::string extended_verdict(const AffectsSet& affects) {
    GraphBuild ext = build_potential_cause_graph(affects, true);
    if (!build_loop_graph(ext.graph).empty()) return "acl";
    return ext.used_absences ? "unknown" : "no-acl";
}

AclDetection detect_acl(const AffectsSet& affects, DetectMode mode, std::size_t cap) {
    AclDetection out;
    if (mode != DetectMode::Oracle) {
        GraphBuild pot = build_potential_cause_graph(affects, false);
        out.warnings = pot.warnings;
        out.loop_graph = build_loop_graph(pot.graph);
        out.acl_present = !out.loop_graph->empty();
    }
    if (mode != DetectMode::LoopGraph) {
        out.oracle = resolution_oracle(affects, cap);
        bool oracle_acl = !out.oracle->acyclic_resolution;
        if (mode == DetectMode::Both) out.agree = oracle_acl == out.acl_present;
        else out.acl_present = oracle_acl;
    }
    out.extended_verdict = extended_verdict(affects);
    return out;
}

namespace {

// Relation graph over simple irreducible relations: r -> r' iff Y(r) within X(r').
struct RelationGraph {
    std::vector<AffectsRelation> rels;
    std::vector<std::vector<int>> next;

    explicit RelationGraph(std::vector<AffectsRelation> r) : rels(std::move(r)), next(rels.size()) {
        for (std::size_t a = 0; a < rels.size(); ++a)
            for (std::size_t b = 0; b < rels.size(); ++b)
                if (a != b && is_subset(rels[a].y, rels[b].x)) next[a].push_back(static_cast<int>(b));
    }

    // Shortest path from start to goal (inclusive), restricted to allowed nodes; empty if none.
    std::vector<int> path(int start, int goal, const std::vector<bool>& allowed, bool nonempty) const {
        std::vector<int> prev(rels.size(), -2);
        std::deque<int> queue;
        if (!nonempty) {
            if (start == goal) return {start};
            prev[start] = -1;
            queue.push_back(start);
        } else {
            for (int w : next[start])
                if (allowed[w] && prev[w] == -2) {
                    prev[w] = start;
                    queue.push_back(w);
                }
        }
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            if (v == goal) break;
            for (int w : next[v])
                if (allowed[w] && prev[w] == -2) {
                    prev[w] = v;
                    queue.push_back(w);
                }
        }
        if (prev[goal] == -2) return {};
        std::vector<int> out{goal};
        int v = prev[goal];
        while (v != start && v >= 0) {
            out.push_back(v);
            v = prev[v];
        }
        if (nonempty || start != goal) out.push_back(start);
        std::reverse(out.begin(), out.end());
        return out;
    }

    std::vector<AffectsRelation> pick(const std::vector<int>& idx) const {
        std::vector<AffectsRelation> out;
        for (int i : idx) out.push_back(rels[i]);
        return out;
    }
};

std::optional<std::vector<int>> find_cycle(const RelationGraph& g, const std::vector<bool>& allowed) {
    for (std::size_t r = 0; r < g.rels.size(); ++r) {
        if (!allowed[r]) continue;
        auto p = g.path(static_cast<int>(r), static_cast<int>(r), allowed, true);
        if (!p.empty()) {
            p.pop_back();  // the start repeats at the end
            return p;
        }
    }
    return std::nullopt;
}

}  // namespace

ChainAnalysis find_affects_chains_and_classify(const AffectsSet& affects, std::size_t chain_cap) {
    AffectsSet set = affects;
    set.normalize();
    std::vector<AffectsRelation> simple;
    for (const auto& r : irreducible_relations(set, nullptr))
        if (r.z == 0 && r.w == 0) simple.push_back(r);
    RelationGraph g(simple);
    ChainAnalysis out;
    std::size_t m = simple.size();

    std::vector<int> path;
    std::vector<bool> on_path(m, false);
    auto dfs = [&](auto&& self, int v) -> void {
        if (out.truncated) return;
        if (out.chains.size() >= chain_cap) {
            out.truncated = true;
            return;
        }
        path.push_back(v);
        on_path[v] = true;
        AffectsChain c;
        c.relations = g.pick(path);
        c.closed = path.size() >= 2 && is_subset(simple[v].y, simple[path.front()].x);
        c.from = c.closed ? simple[v].y : simple[path.front()].x;
        c.to = simple[v].y;
        out.chains.push_back(std::move(c));
        for (int w : g.next[v])
            if (!on_path[w]) self(self, w);
        on_path[v] = false;
        path.pop_back();
    };
    for (std::size_t r = 0; r < m; ++r) dfs(dfs, static_cast<int>(r));

    std::vector<bool> all(m, true);
    std::vector<bool> singles(m, false);
    for (std::size_t r = 0; r < m; ++r) singles[r] = set_size(simple[r].x) == 1 && set_size(simple[r].y) == 1;
    if (auto c = find_cycle(g, singles)) out.classes.push_back({"ACL2a", g.pick(*c)});

    for (std::size_t a = 0; a < m; ++a) {
        bool found = false;
        for (std::size_t b = a + 1; b < m && !found; ++b) {
            const auto &r = simple[a], &s = simple[b];
            if (set_size(r.y) == 1 && set_size(s.y) == 1 && (r.x & s.x) == 0 && is_subset(s.y, r.x) &&
                is_subset(r.y, s.x)) {
                out.classes.push_back({"ACL3", {r, s}});
                found = true;
            }
        }
        if (found) break;
    }

    if (auto c = find_cycle(g, all)) out.classes.push_back({"ACL5", g.pick(*c)});

    // ACL6a: a chain from S1 = X(r1) to S2 = Y(rm) whose every element returns to S1.
    bool acl6a = false;
    for (std::size_t r1 = 0; r1 < m && !acl6a; ++r1) {
        NodeSet s1 = simple[r1].x;
        NodeSet good = s1;
        std::map<int, int> reason;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t k = 0; k < m; ++k) {
                if (!is_subset(simple[k].y, good)) continue;
                for (int e : members(simple[k].x & ~good)) {
                    good |= bit(e);
                    reason[e] = static_cast<int>(k);
                    grew = true;
                }
            }
        }
        for (std::size_t rm = 0; rm < m && !acl6a; ++rm) {
            if (!is_subset(simple[rm].y, good)) continue;
            auto trunk = g.path(static_cast<int>(r1), static_cast<int>(rm), all, false);
            if (trunk.empty()) continue;
            std::vector<int> used = trunk;
            std::vector<int> todo = members(simple[rm].y & ~s1);
            NodeSet done = 0;
            while (!todo.empty()) {
                int e = todo.back();
                todo.pop_back();
                if (contains(done, e)) continue;
                done |= bit(e);
                int k = reason.at(e);
                if (std::find(used.begin(), used.end(), k) == used.end()) used.push_back(k);
                for (int t : members(simple[k].y & ~s1)) todo.push_back(t);
            }
            out.classes.push_back({"ACL6a", g.pick(used)});
            acl6a = true;
        }
    }
    return out;
}

std::string to_dot(const CauseGraph& g) {
    auto join = [&](NodeSet s) {
        std::string out;
        for (int i : members(s)) out += (out.empty() ? "" : ",") + g.universe.at(i);
        return out;
    };
    std::string out = "digraph {\n";
    for (int v : members(g.nodes)) out += "  \"" + g.universe.at(v) + "\";\n";
    for (const auto& a : g.arrows)
        out += "  \"" + g.universe.at(a.source) + "\" -> \"" + g.universe.at(a.target) + "\" [label=\"" +
               join(a.index) + "\"];\n";
    out += "}\n";
    return out;
}

}  // namespace causal_affects
