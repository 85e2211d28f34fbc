#include "causal_affects/independence.hpp"

#include <algorithm>
#include <tuple>

namespace causal_affects {

namespace {

constexpr unsigned kInto = 1;   // last edge points into the current vertex
constexpr unsigned kOutOf = 2;  // last edge points away from the current vertex

struct PathSearch {
    const CausalStructure& s;
    NodeSet z;
    std::vector<bool> collider_open;

    bool open_through(NodeId v, unsigned last, bool next_into_v) const {
        bool collider = last == kInto && next_into_v;
        if (collider) return collider_open[v];
        return !contains(z, v);
    }

    bool reach(NodeId v, unsigned dirs, NodeSet visited, NodeId target) const {
        if (v == target) return true;
        NodeSet nbrs = (s.children(v) | s.parents(v)) & ~visited;
        for (int w : members(nbrs)) {
            unsigned next = 0;
            for (unsigned d : {kInto, kOutOf}) {
                if (!(dirs & d)) continue;
                if (s.has_edge(v, w) && open_through(v, d, false)) next |= kInto;
                if (s.has_edge(w, v) && open_through(v, d, true)) next |= kOutOf;
            }
            if (next != 0 && reach(w, next, visited | bit(w), target)) return true;
        }
        return false;
    }
};

}  // namespace

bool d_separated(const CausalStructure& structure, const SeparationQuery& q) {
    if (q.x == 0 || q.y == 0) throw Error(ErrorCode::InvalidInput, "d-separation query needs non-empty x and y");
    if ((q.x & q.y) || (q.x & q.z) || (q.y & q.z))
        throw Error(ErrorCode::InvalidInput, "d-separation query sets overlap");
    NodeSet all = structure.size() == 64 ? ~NodeSet{0} : bit(structure.size()) - 1;
    if (!is_subset(q.x | q.y | q.z, all)) throw Error(ErrorCode::UnknownNode, "query references unknown nodes");
    PathSearch search{structure, q.z, {}};
    search.collider_open.resize(structure.size());
    for (int v = 0; v < structure.size(); ++v)
        search.collider_open[v] = contains(q.z, v) || (structure.descendants(v) & q.z) != 0;
    for (int a : members(q.x)) {
        for (int b : members(q.y)) {
            // The first edge has no predecessor; both orientations start unblocked.
            NodeSet nbrs = structure.children(a) | structure.parents(a);
            for (int w : members(nbrs)) {
                unsigned dirs = 0;
                if (structure.has_edge(a, w)) dirs |= kInto;
                if (structure.has_edge(w, a)) dirs |= kOutOf;
                if (search.reach(w, dirs, bit(a) | bit(w), b)) return false;
            }
        }
    }
    return true;
}

bool conditionally_independent(const JointDistribution& dist, NodeSet x, NodeSet y, NodeSet z) {
    std::vector<NodeId> xs = members(x), ys = members(y), zs = members(z);
    std::vector<NodeId> scope;
    scope.insert(scope.end(), xs.begin(), xs.end());
    scope.insert(scope.end(), ys.begin(), ys.end());
    scope.insert(scope.end(), zs.begin(), zs.end());
    JointDistribution m = dist.marginal(scope);
    std::size_t nx = 1, ny = 1, nz = 1;
    for (std::size_t i = 0; i < xs.size(); ++i) nx *= m.cards()[i];
    for (std::size_t i = 0; i < ys.size(); ++i) ny *= m.cards()[xs.size() + i];
    for (std::size_t i = 0; i < zs.size(); ++i) nz *= m.cards()[xs.size() + ys.size() + i];
    const auto& p = m.probabilities();
    auto at = [&](std::size_t ix, std::size_t iy, std::size_t iz) -> const Rational& {
        return p[(ix * ny + iy) * nz + iz];
    };
    for (std::size_t iz = 0; iz < nz; ++iz) {
        Rational pz = 0;
        std::vector<Rational> px(nx, Rational(0)), py(ny, Rational(0));
        for (std::size_t ix = 0; ix < nx; ++ix)
            for (std::size_t iy = 0; iy < ny; ++iy) {
                const Rational& v = at(ix, iy, iz);
                pz += v;
                px[ix] += v;
                py[iy] += v;
            }
        if (pz == 0) continue;
        for (std::size_t ix = 0; ix < nx; ++ix)
            for (std::size_t iy = 0; iy < ny; ++iy)
                if (at(ix, iy, iz) * pz != px[ix] * py[iy]) return false;
    }
    return true;
}

CompatibilityReport compatibility_report(const CausalStructure& structure, const JointDistribution& dist,
                                         IndependenceMode mode) {
    std::vector<NodeId> observed = members(structure.observed_nodes());
    if (dist.scope() != observed)
        throw Error(ErrorCode::InvalidInput, "distribution scope does not match the observed nodes");
    CompatibilityReport report;
    report.cyclic = structure.is_cyclic();
    NodeSet obs = structure.observed_nodes();
    for_each_subset(obs, [&](NodeSet x) {
        if (x == 0) return;
        NodeSet rest = obs & ~x;
        for_each_subset(rest, [&](NodeSet y) {
            if (y == 0) return;
            // Each unordered {x, y} pair once.
            if (std::countr_zero(y) < std::countr_zero(x)) return;
            for_each_subset(rest & ~y, [&](NodeSet z) {
                bool sep = d_separated(structure, {x, y, z});
                bool indep = conditionally_independent(dist, x, y, z);
                bool bad = mode == IndependenceMode::Compatible ? (sep && !indep) : (sep != indep);
                if (bad) report.violations.push_back({x, y, z});
            });
        });
    });
    auto key = [&](const SeparationQuery& q) {
        return std::make_tuple(structure.names(q.x), structure.names(q.y), structure.names(q.z));
    };
    std::sort(report.violations.begin(), report.violations.end(),
              [&](const SeparationQuery& a, const SeparationQuery& b) { return key(a) < key(b); });
    report.holds = report.violations.empty();
    return report;
}

}  // namespace causal_affects
