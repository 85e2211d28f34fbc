#include "causal_affects/core_model.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace causal_affects {

namespace {

Error invalid(const std::string& msg) { return Error(ErrorCode::InvalidInput, msg); }

}  // namespace

CausalStructure CausalStructure::create(std::vector<Node> nodes,
                                        const std::vector<std::pair<NodeId, NodeId>>& edges) {
    if (nodes.size() > static_cast<std::size_t>(kMaxNodes))
        throw invalid("at most 64 nodes are supported");
    std::set<std::string> seen;
    for (const auto& n : nodes) {
        if (n.name.empty()) throw invalid("node with empty name");
        if (n.cardinality < 1) throw invalid("node " + n.name + ": cardinality must be >= 1");
        if (!seen.insert(n.name).second) throw invalid("duplicate node name " + n.name);
    }
    CausalStructure s;
    s.nodes_ = std::move(nodes);
    s.parents_.assign(s.nodes_.size(), {});
    s.children_mask_.assign(s.nodes_.size(), 0);
    for (auto [from, to] : edges) {
        s.check_id(from);
        s.check_id(to);
        if (from == to) throw invalid("self-loop on " + s.nodes_[from].name);
        if (s.has_edge(from, to))
            throw invalid("duplicate edge " + s.nodes_[from].name + " -> " + s.nodes_[to].name);
        s.parents_[to].push_back(from);
        s.children_mask_[from] |= bit(to);
    }
    return s;
}

void CausalStructure::check_id(NodeId id) const {
    if (id < 0 || id >= size()) throw Error(ErrorCode::UnknownNode, "unknown node id " + std::to_string(id));
}

NodeId CausalStructure::find(const std::string& name) const {
    if (auto id = try_find(name)) return *id;
    throw Error(ErrorCode::UnknownNode, "unknown node " + name);
}

std::optional<NodeId> CausalStructure::try_find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (nodes_[i].name == name) return i;
    return std::nullopt;
}

NodeSet CausalStructure::parents(NodeId id) const {
    check_id(id);
    NodeSet out = 0;
    for (NodeId p : parents_[id]) out |= bit(p);
    return out;
}

NodeSet CausalStructure::children(NodeId id) const {
    check_id(id);
    return children_mask_[id];
}

NodeSet CausalStructure::ancestors(NodeId id) const {
    check_id(id);
    NodeSet out = 0;
    std::vector<NodeId> stack(parents_[id].begin(), parents_[id].end());
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        if (contains(out, v)) continue;
        out |= bit(v);
        for (NodeId p : parents_[v]) stack.push_back(p);
    }
    return out;
}

NodeSet CausalStructure::descendants(NodeId id) const {
    check_id(id);
    NodeSet out = 0;
    NodeSet frontier = children_mask_[id];
    while (frontier != 0) {
        NodeSet next = 0;
        for (int v : members(frontier)) {
            if (contains(out, v)) continue;
            out |= bit(v);
            next |= children_mask_[v];
        }
        frontier = next & ~out;
    }
    return out;
}

std::vector<std::pair<NodeId, NodeId>> CausalStructure::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (int to = 0; to < size(); ++to)
        for (NodeId from : parents_[to]) out.emplace_back(from, to);
    std::sort(out.begin(), out.end());
    return out;
}

bool CausalStructure::is_cyclic() const {
    for (int i = 0; i < size(); ++i)
        if (contains(descendants(i), i)) return true;
    return false;
}

std::vector<std::vector<NodeId>> CausalStructure::components() const {
    // Tarjan; components come out sinks first, so reverse at the end.
    int n = size();
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    std::vector<std::vector<NodeId>> out;
    int counter = 0;
    std::function<void(NodeId)> visit = [&](NodeId v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (int w : members(children_mask_[v])) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<NodeId> comp;
            NodeId w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0) visit(v);
    std::reverse(out.begin(), out.end());
    return out;
}

NodeSet CausalStructure::observed_nodes() const {
    NodeSet out = 0;
    for (int i = 0; i < size(); ++i)
        if (nodes_[i].observed) out |= bit(i);
    return out;
}

std::vector<std::string> CausalStructure::names(NodeSet s) const {
    std::vector<std::string> out;
    for (int i : members(s)) out.push_back(nodes_.at(i).name);
    return out;
}

CausalStructure CausalStructure::without_incoming(NodeSet targets) const {
    CausalStructure s = *this;
    for (int t : members(targets)) {
        check_id(t);
        for (NodeId p : s.parents_[t]) s.children_mask_[p] &= ~bit(t);
        s.parents_[t].clear();
    }
    return s;
}

NodeSet structure_query(const CausalStructure& s, NodeId node, StructureQuery kind) {
    switch (kind) {
        case StructureQuery::Parents: return s.parents(node);
        case StructureQuery::Children: return s.children(node);
        case StructureQuery::Ancestors: return s.ancestors(node);
        case StructureQuery::Descendants: return s.descendants(node);
        case StructureQuery::Exogenous: return s.parents(node) == 0 ? 1 : 0;
    }
    return 0;
}

Mechanism Mechanism::point(int cardinality, int value) {
    Mechanism m;
    m.kind = MechanismKind::Exogenous;
    m.table.assign(1, std::vector<Rational>(cardinality, Rational(0)));
    m.table[0][value] = 1;
    return m;
}

bool Mechanism::is_zero_one() const {
    for (const auto& row : table)
        for (const auto& p : row)
            if (p != 0 && p != 1) return false;
    return true;
}

StructuralModel StructuralModel::create(CausalStructure structure, std::vector<Mechanism> mechanisms) {
    if (static_cast<int>(mechanisms.size()) != structure.size())
        throw invalid("one mechanism per node is required");
    for (int id = 0; id < structure.size(); ++id) {
        const Node& node = structure.node(id);
        const Mechanism& m = mechanisms[id];
        const auto& parents = structure.parent_list(id);
        if (m.kind == MechanismKind::Exogenous && !parents.empty())
            throw invalid("node " + node.name + ": exogenous mechanism on a node with parents");
        std::size_t rows = 1;
        for (NodeId p : parents) rows *= static_cast<std::size_t>(structure.node(p).cardinality);
        if (m.table.size() != rows)
            throw invalid("node " + node.name + ": table has " + std::to_string(m.table.size()) +
                          " rows, expected " + std::to_string(rows));
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& row = m.table[r];
            if (static_cast<int>(row.size()) != node.cardinality)
                throw invalid("node " + node.name + ": row " + std::to_string(r) + " has wrong length");
            Rational sum = 0;
            for (const auto& p : row) {
                if (p < 0) throw invalid("node " + node.name + ": negative probability");
                sum += p;
            }
            if (sum != 1)
                throw invalid("node " + node.name + ": row " + std::to_string(r) + " sums to " +
                              rational_to_string(sum));
        }
        if (m.kind == MechanismKind::Deterministic && !m.is_zero_one())
            throw invalid("node " + node.name + ": deterministic table with non 0/1 entry");
        // Each parent must matter: some pair of rows differing only in that parent differs.
        std::size_t stride = 1;
        for (int k = static_cast<int>(parents.size()) - 1; k >= 0; --k) {
            int card = structure.node(parents[k]).cardinality;
            bool matters = false;
            for (std::size_t r = 0; r < rows && !matters; ++r) {
                std::size_t digit = (r / stride) % card;
                if (digit != 0) continue;
                for (int v = 1; v < card && !matters; ++v)
                    if (m.table[r] != m.table[r + v * stride]) matters = true;
            }
            if (!matters)
                throw invalid("node " + node.name + ": mechanism does not depend on parent " +
                              structure.node(parents[k]).name);
            stride *= card;
        }
    }
    StructuralModel model;
    model.structure_ = std::move(structure);
    model.mechanisms_ = std::move(mechanisms);
    return model;
}

int StructuralModel::row_index(NodeId id, const std::vector<int>& values) const {
    int row = 0;
    for (NodeId p : structure_.parent_list(id)) row = row * structure_.node(p).cardinality + values[p];
    return row;
}

StructuralModel StructuralModel::intervene(const std::map<NodeId, int>& assignment) const {
    NodeSet targets = 0;
    std::vector<Mechanism> mechs = mechanisms_;
    for (auto [id, value] : assignment) {
        if (id < 0 || id >= structure_.size())
            throw Error(ErrorCode::UnknownNode, "unknown intervention target " + std::to_string(id));
        const Node& node = structure_.node(id);
        if (value < 0 || value >= node.cardinality)
            throw invalid("intervention value out of range for " + node.name);
        targets |= bit(id);
        mechs[id] = Mechanism::point(node.cardinality, value);
    }
    StructuralModel out;
    out.structure_ = structure_.without_incoming(targets);
    out.mechanisms_ = std::move(mechs);
    return out;
}

JointDistribution::JointDistribution(std::vector<NodeId> scope, std::vector<int> cards)
    : scope_(std::move(scope)), cards_(std::move(cards)) {
    std::size_t total = 1;
    for (int c : cards_) total *= static_cast<std::size_t>(c);
    probs_.assign(total, Rational(0));
}

std::size_t JointDistribution::index(const std::vector<int>& values) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cards_.size(); ++i) idx = idx * cards_[i] + values[i];
    return idx;
}

std::vector<int> JointDistribution::values(std::size_t index) const {
    std::vector<int> out(cards_.size());
    for (std::size_t i = cards_.size(); i-- > 0;) {
        out[i] = static_cast<int>(index % cards_[i]);
        index /= cards_[i];
    }
    return out;
}

Rational JointDistribution::total() const {
    Rational sum = 0;
    for (const auto& p : probs_) sum += p;
    return sum;
}

JointDistribution JointDistribution::marginal(const std::vector<NodeId>& sub) const {
    std::vector<int> pos;
    std::vector<int> sub_cards;
    for (NodeId id : sub) {
        auto it = std::find(scope_.begin(), scope_.end(), id);
        if (it == scope_.end()) throw invalid("marginal over a node outside the scope");
        pos.push_back(static_cast<int>(it - scope_.begin()));
        sub_cards.push_back(cards_[pos.back()]);
    }
    JointDistribution out(sub, sub_cards);
    std::vector<int> sub_values(sub.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] == 0) continue;
        auto v = values(i);
        for (std::size_t k = 0; k < pos.size(); ++k) sub_values[k] = v[pos[k]];
        out.probs_[out.index(sub_values)] += probs_[i];
    }
    return out;
}

Rational JointDistribution::probability(const std::map<NodeId, int>& event) const {
    std::vector<std::pair<int, int>> checks;
    for (auto [id, value] : event) {
        auto it = std::find(scope_.begin(), scope_.end(), id);
        if (it == scope_.end()) throw invalid("event on a node outside the scope");
        checks.emplace_back(static_cast<int>(it - scope_.begin()), value);
    }
    Rational sum = 0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] == 0) continue;
        auto v = values(i);
        bool ok = true;
        for (auto [p, value] : checks) ok = ok && v[p] == value;
        if (ok) sum += probs_[i];
    }
    return sum;
}

namespace {

int deterministic_outcome(const std::vector<Rational>& row) {
    for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] == 1) return static_cast<int>(i);
    return -1;
}

class Solver {
public:
    explicit Solver(const StructuralModel& model)
        : model_(model), s_(model.structure()), comps_(s_.components()) {
        for (const auto& comp : comps_) {
            if (comp.size() < 2) continue;
            for (NodeId v : comp)
                if (!model_.mechanism(v).is_zero_one())
                    throw Error(ErrorCode::UnsupportedCyclicStochastic,
                                "node " + s_.node(v).name + " lies on a cycle but has a stochastic mechanism");
        }
        std::vector<NodeId> scope;
        std::vector<int> cards;
        for (int i = 0; i < s_.size(); ++i) {
            scope.push_back(i);
            cards.push_back(s_.node(i).cardinality);
        }
        out_ = JointDistribution(scope, cards);
        values_.assign(s_.size(), -1);
    }

    JointDistribution run() {
        recurse(0, Rational(1));
        return std::move(out_);
    }

private:
    void recurse(std::size_t c, const Rational& weight) {
        if (c == comps_.size()) {
            out_.probabilities()[out_.index(values_)] += weight;
            return;
        }
        const auto& comp = comps_[c];
        if (comp.size() == 1) {
            NodeId v = comp[0];
            const auto& row = model_.mechanism(v).table[model_.row_index(v, values_)];
            for (int a = 0; a < static_cast<int>(row.size()); ++a) {
                if (row[a] == 0) continue;
                values_[v] = a;
                recurse(c + 1, weight * row[a]);
            }
            values_[v] = -1;
            return;
        }
        // Cyclic component: enumerate fixed points of the deterministic equations.
        std::vector<std::vector<int>> solutions;
        std::vector<int> digits(comp.size(), 0);
        do {
            for (std::size_t k = 0; k < comp.size(); ++k) values_[comp[k]] = digits[k];
            bool ok = true;
            for (NodeId v : comp) {
                const auto& row = model_.mechanism(v).table[model_.row_index(v, values_)];
                if (deterministic_outcome(row) != values_[v]) {
                    ok = false;
                    break;
                }
            }
            if (ok) solutions.push_back(digits);
        } while (advance(digits, comp));
        if (solutions.empty()) {
            std::string context;
            for (int i = 0; i < s_.size(); ++i) {
                bool in_comp = std::find(comp.begin(), comp.end(), i) != comp.end();
                if (values_[i] >= 0 && !in_comp)
                    context += " " + s_.node(i).name + "=" + std::to_string(values_[i]);
            }
            throw Error(ErrorCode::InconsistentModel,
                        "no solution for the cycle through " + s_.node(comp[0]).name +
                            (context.empty() ? std::string() : " given" + context));
        }
        Rational share = weight / Rational(static_cast<long>(solutions.size()));
        for (const auto& sol : solutions) {
            for (std::size_t k = 0; k < comp.size(); ++k) values_[comp[k]] = sol[k];
            recurse(c + 1, share);
        }
        for (NodeId v : comp) values_[v] = -1;
    }

    bool advance(std::vector<int>& digits, const std::vector<NodeId>& comp) const {
        for (std::size_t k = digits.size(); k-- > 0;) {
            if (++digits[k] < s_.node(comp[k]).cardinality) return true;
            digits[k] = 0;
        }
        return false;
    }

    const StructuralModel& model_;
    const CausalStructure& s_;
    std::vector<std::vector<NodeId>> comps_;
    JointDistribution out_;
    std::vector<int> values_;
};

}  // namespace

JointDistribution solve_full_distribution(const StructuralModel& model) {
    return Solver(model).run();
}

JointDistribution solve_observed_distribution(const StructuralModel& model) {
    JointDistribution full = solve_full_distribution(model);
    std::vector<NodeId> observed = members(model.structure().observed_nodes());
    if (static_cast<int>(observed.size()) == model.structure().size()) return full;
    return full.marginal(observed);
}

JointDistribution post_intervention_distribution(const StructuralModel& model, const Assignment& assignment) {
    for (const auto& entry : assignment) {
        NodeId id = entry.first;
        if (id < 0 || id >= model.structure().size())
            throw Error(ErrorCode::UnknownNode, "unknown intervention target " + std::to_string(id));
        const Node& node = model.structure().node(id);
        if (!node.observed) throw invalid("intervention on unobserved node " + node.name);
    }
    return solve_observed_distribution(model.intervene(assignment));
}

}  // namespace causal_affects
