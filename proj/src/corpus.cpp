#include "causal_affects/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

namespace causal_affects {

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* text = std::getenv("CAUSAL_AFFECTS_SEED");
    if (text == nullptr || *text == '\0') return fallback;
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(text, &used);
        if (used == std::string(text).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidInput, std::string("CAUSAL_AFFECTS_SEED is not an unsigned integer: ") + text);
}

std::vector<EdgeList> enumerate_dags(int n) {
    if (n < 0 || n > 6) throw Error(ErrorCode::InvalidInput, "DAG enumeration supports up to 6 nodes");
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    std::size_t total = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;
    std::vector<EdgeList> out;
    for (std::size_t code = 0; code < total; ++code) {
        EdgeList edges;
        std::size_t c = code;
        for (auto [a, b] : pairs) {
            int choice = static_cast<int>(c % 3);
            c /= 3;
            if (choice == 1) edges.emplace_back(a, b);
            if (choice == 2) edges.emplace_back(b, a);
        }
        // Kahn's algorithm.
        std::vector<int> indeg(n, 0);
        for (auto [a, b] : edges) ++indeg[b];
        std::vector<int> ready;
        for (int v = 0; v < n; ++v)
            if (indeg[v] == 0) ready.push_back(v);
        int seen = 0;
        while (!ready.empty()) {
            int v = ready.back();
            ready.pop_back();
            ++seen;
            for (auto [a, b] : edges)
                if (a == v && --indeg[b] == 0) ready.push_back(b);
        }
        if (seen != n) continue;
        std::sort(edges.begin(), edges.end());
        out.push_back(edges);
    }
    return out;
}

StructuralModel random_deterministic_model(int n, const EdgeList& edges, std::mt19937_64& rng) {
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back({"V" + std::to_string(i), 2, true});
    // Parents in increasing id order, so edge order follows the target's parent list.
    EdgeList ordered = edges;
    std::sort(ordered.begin(), ordered.end(), [](auto a, auto b) { return std::pair(a.second, a.first) < std::pair(b.second, b.first); });
    CausalStructure s = CausalStructure::create(nodes, ordered);
    std::uniform_int_distribution<int> weight(1, 9);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<Mechanism> mechs;
    for (int i = 0; i < n; ++i) {
        Mechanism m;
        std::size_t k = s.parent_list(i).size();
        if (k == 0) {
            m.kind = MechanismKind::Exogenous;
            int a = weight(rng), b = weight(rng);
            Rational p(a, a + b);
            p.canonicalize();
            m.table = {{p, 1 - p}};
            mechs.push_back(m);
            continue;
        }
        m.kind = MechanismKind::Deterministic;
        std::size_t rows = std::size_t{1} << k;
        while (true) {
            std::vector<int> out(rows);
            for (auto& v : out) v = coin(rng);
            bool every_parent = true;
            for (std::size_t bitpos = 0; bitpos < k && every_parent; ++bitpos) {
                bool matters = false;
                for (std::size_t r = 0; r < rows; ++r)
                    if (out[r] != out[r ^ (std::size_t{1} << bitpos)]) matters = true;
                every_parent = matters;
            }
            if (!every_parent) continue;
            m.table.clear();
            for (int v : out) m.table.push_back(v == 0 ? std::vector<Rational>{1, 0} : std::vector<Rational>{0, 1});
            break;
        }
        mechs.push_back(m);
    }
    return StructuralModel::create(s, mechs);
}

std::vector<StructuralModel> deterministic_model_corpus(int max_nodes, int models_per_dag, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<StructuralModel> out;
    for (int n = 1; n <= max_nodes; ++n)
        for (const auto& dag : enumerate_dags(n))
            for (int k = 0; k < models_per_dag; ++k) out.push_back(random_deterministic_model(n, dag, rng));
    return out;
}

AffectsSet random_irreducible_affects(int max_nodes, int max_relations, std::mt19937_64& rng) {
    if (max_nodes < 2 || max_nodes > 26 || max_relations < 1)
        throw Error(ErrorCode::InvalidInput, "random affects sets need 2..26 nodes and at least one relation");
    int n = std::uniform_int_distribution<int>(2, max_nodes)(rng);
    int count = std::uniform_int_distribution<int>(1, max_relations)(rng);
    AffectsSet set;
    for (int i = 0; i < n; ++i) set.universe.push_back(std::string(1, static_cast<char>('A' + i)));
    std::uniform_int_distribution<int> role(0, 2);  // 0 none, 1 source, 2 target
    std::set<AffectsRelation> seen;
    for (int attempts = 0; static_cast<int>(set.present.size()) < count && attempts < 1000; ++attempts) {
        AffectsRelation r;
        for (int i = 0; i < n; ++i) {
            int k = role(rng);
            if (k == 1) r.x |= bit(i);
            if (k == 2) r.y |= bit(i);
        }
        if (r.x == 0 || r.y == 0 || !seen.insert(r).second) continue;
        PresentRelation p;
        p.rel = r;
        p.flags.irreducible = true;
        set.present.push_back(p);
    }
    set.normalize();
    return set;
}

}  // namespace causal_affects
