#include "causal_affects/poset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace causal_affects {

std::vector<int> to_indices(const PointSet& s) {
    std::vector<int> out;
    for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i)) out.push_back(static_cast<int>(i));
    return out;
}

Poset Poset::from_closed(std::vector<std::string> labels, std::vector<PointSet> up) {
    Poset p;
    std::size_t n = labels.size();
    p.labels_ = std::move(labels);
    p.up_ = std::move(up);
    p.down_.assign(n, PointSet(n));
    for (std::size_t a = 0; a < n; ++a)
        for (auto b = p.up_[a].find_first(); b != PointSet::npos; b = p.up_[a].find_next(b)) p.down_[b].set(a);
    return p;
}

Poset Poset::create(std::vector<std::string> elements,
                    const std::vector<std::pair<std::string, std::string>>& relations) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (!index.emplace(elements[i], static_cast<int>(i)).second)
            throw Error(ErrorCode::InvalidInput, "duplicate poset element " + elements[i]);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [a, b] : relations) {
        auto ia = index.find(a), ib = index.find(b);
        if (ia == index.end()) throw Error(ErrorCode::UnknownNode, "unknown poset element " + a);
        if (ib == index.end()) throw Error(ErrorCode::UnknownNode, "unknown poset element " + b);
        pairs.emplace_back(ia->second, ib->second);
    }
    return from_pairs(std::move(elements), pairs);
}

Poset Poset::from_pairs(std::vector<std::string> elements, const std::vector<std::pair<int, int>>& relations) {
    int n = static_cast<int>(elements.size());
    std::vector<std::vector<int>> succ(n);
    for (const auto& [a, b] : relations) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw Error(ErrorCode::UnknownNode, "poset relation out of range");
        if (a == b) throw Error(ErrorCode::CycleDetected, "cycle: " + elements[a] + " < " + elements[a]);
        succ[a].push_back(b);
    }
    // Depth-first search; a grey successor closes a cycle.
    std::vector<int> color(n, 0), order, stack_path;
    auto visit = [&](auto&& self, int v) -> void {
        color[v] = 1;
        stack_path.push_back(v);
        for (int w : succ[v]) {
            if (color[w] == 1) {
                auto it = std::find(stack_path.begin(), stack_path.end(), w);
                std::string msg = "cycle:";
                for (; it != stack_path.end(); ++it) msg += " " + elements[*it] + " <";
                msg += " " + elements[w];
                throw Error(ErrorCode::CycleDetected, msg);
            }
            if (color[w] == 0) self(self, w);
        }
        stack_path.pop_back();
        color[v] = 2;
        order.push_back(v);
    };
    for (int v = 0; v < n; ++v)
        if (color[v] == 0) visit(visit, v);
    // order lists every node after all of its successors.
    std::vector<PointSet> up(n, PointSet(n));
    for (int v : order)
        for (int w : succ[v]) {
            up[v] |= up[w];
            up[v].set(w);
        }
    return from_closed(std::move(elements), std::move(up));
}

int Poset::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    throw Error(ErrorCode::UnknownNode, "unknown poset element " + label);
}

PointSet Poset::singleton(int a) const {
    PointSet s = empty_set();
    s.set(a);
    return s;
}

PointSet Poset::points(const std::vector<int>& idx) const {
    PointSet s = empty_set();
    for (int i : idx) s.set(i);
    return s;
}

PointSet Poset::future(int a) const {
    PointSet s = up_.at(a);
    s.set(a);
    return s;
}

PointSet Poset::past(int a) const {
    PointSet s = down_.at(a);
    s.set(a);
    return s;
}

PointSet Poset::support_future(const PointSet& s) const {
    PointSet out = full_set();
    for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i)) {
        bool self = out.test(i);
        out &= up_[i];
        out.set(i, self);
    }
    return out;
}

PointSet Poset::minimal(const PointSet& m) const {
    PointSet out = empty_set();
    for (auto x = m.find_first(); x != PointSet::npos; x = m.find_next(x))
        if (!down_[x].intersects(m)) out.set(x);
    return out;
}

std::vector<std::pair<int, int>> Poset::covers() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < size(); ++a)
        for (int b : to_indices(up_[a]))
            if (!up_[a].intersects(down_[b])) out.emplace_back(a, b);
    return out;
}

std::vector<std::pair<int, int>> Poset::relations() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < size(); ++a)
        for (int b : to_indices(up_[a])) out.emplace_back(a, b);
    return out;
}

std::optional<int> Poset::join(int a, int b) const {
    PointSet m = minimal(future(a) & future(b));
    if (m.count() != 1) return std::nullopt;
    return static_cast<int>(m.find_first());
}

std::optional<int> Poset::meet(int a, int b) const {
    PointSet common = past(a) & past(b);
    // Maximal elements of the common lower bounds.
    PointSet top = empty_set();
    for (int x : to_indices(common))
        if (!up_[x].intersects(common)) top.set(x);
    if (top.count() != 1) return std::nullopt;
    return static_cast<int>(top.find_first());
}

PointSet Poset::span(const PointSet& s) const {
    std::vector<int> idx = to_indices(s);
    if (idx.size() > 20) throw Error(ErrorCode::InvalidInput, "span is limited to 20 points");
    PointSet target = support_future(s);
    std::size_t subsets = std::size_t{1} << idx.size();
    std::vector<bool> same(subsets, false);
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        PointSet sub = empty_set();
        for (std::size_t k = 0; k < idx.size(); ++k)
            if (mask >> k & 1U) sub.set(idx[k]);
        same[mask] = support_future(sub) == target;
    }
    PointSet out = empty_set();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        if (!same[mask]) continue;
        // Support futures shrink as sets grow, so checking immediate subsets suffices.
        bool minimal_subset = true;
        for (std::size_t k = 0; k < idx.size(); ++k)
            if ((mask >> k & 1U) && same[mask & ~(std::size_t{1} << k)]) minimal_subset = false;
        if (!minimal_subset) continue;
        for (std::size_t k = 0; k < idx.size(); ++k)
            if (mask >> k & 1U) out.set(idx[k]);
    }
    return out;
}

namespace {

// Calls f on every point set of size lo..hi, in lexicographic order of index lists.
template <typename F>
bool for_each_point_set(const Poset& p, int lo, int hi, F&& f) {
    int n = p.size();
    for (int size = lo; size <= std::min(hi, n); ++size) {
        std::vector<int> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            if (!f(p.points(idx))) return false;
            int k = size - 1;
            while (k >= 0 && idx[k] == n - size + k) --k;
            if (k < 0) break;
            ++idx[k];
            for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return true;
}

std::vector<PointSet> point_sets(const Poset& p, int lo, int hi) {
    std::vector<PointSet> out;
    for_each_point_set(p, lo, hi, [&](const PointSet& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

BoundedFlag holds() {
    BoundedFlag f;
    f.holds = true;
    return f;
}

BoundedFlag fails(std::vector<PointSet> witness) {
    BoundedFlag f;
    f.holds = false;
    f.counterexample = std::move(witness);
    return f;
}

BoundedFlag unknown() { return BoundedFlag{}; }

}  // namespace

BoundedFlag check_conical(const Poset& p, int k, std::size_t cap) {
    std::map<PointSet, std::pair<PointSet, PointSet>> seen;  // support future -> (set, span)
    std::size_t work = 0;
    BoundedFlag out = holds();
    bool finished = for_each_point_set(p, 0, k, [&](const PointSet& s) {
        if (++work > cap) return false;
        PointSet f = p.support_future(s);
        PointSet sp = p.span(s);
        auto [it, fresh] = seen.emplace(f, std::make_pair(s, sp));
        if (!fresh && it->second.second != sp) {
            out = fails({it->second.first, s});
            return false;
        }
        return true;
    });
    if (!finished && out.holds == true) return unknown();
    return out;
}

BoundedFlag check_location_symmetric(const Poset& p, int k, std::size_t cap) {
    std::vector<PointSet> nonempty = point_sets(p, 1, k);
    std::vector<PointSet> futures;
    for (const auto& s : nonempty) futures.push_back(p.support_future(s));
    std::map<PointSet, std::size_t> position;
    for (std::size_t i = 0; i < nonempty.size(); ++i) position[nonempty[i]] = i;
    // Two non-empty subsets of a and b with a common support future.
    auto shared_location = [&](const PointSet& a, const PointSet& b) {
        std::set<PointSet> fa;
        for_each_point_set(p, 1, static_cast<int>(a.count()), [&](const PointSet& s) {
            if (s.is_subset_of(a)) fa.insert(p.support_future(s));
            return true;
        });
        bool found = false;
        for_each_point_set(p, 1, static_cast<int>(b.count()), [&](const PointSet& s) {
            if (s.is_subset_of(b) && fa.count(p.support_future(s))) found = true;
            return !found;
        });
        return found;
    };
    std::size_t work = 0;
    for (const auto& x : nonempty) {
        PointSet fx = p.support_future(x);
        for (std::size_t i = 0; i < nonempty.size(); ++i) {
            const PointSet& y1 = nonempty[i];
            if (x.intersects(y1)) continue;
            PointSet f1 = fx & futures[i];
            // Y2 empty.
            if (++work > cap) return unknown();
            if (f1 == fx && !fx.is_subset_of(futures[i])) return fails({x, y1, p.empty_set()});
            for (std::size_t j = i + 1; j < nonempty.size(); ++j) {
                const PointSet& y2 = nonempty[j];
                if (x.intersects(y2) || y1.intersects(y2)) continue;
                if (++work > cap) return unknown();
                if (f1 != (fx & futures[j])) continue;
                if (fx.is_subset_of(futures[i] & futures[j])) continue;
                if (!shared_location(y1, y2)) return fails({x, y1, y2});
            }
        }
    }
    return holds();
}

BoundedFlag check_union_property(const Poset& p, int k, std::size_t cap) {
    std::size_t work = 0;
    BoundedFlag out = holds();
    bool finished = for_each_point_set(p, 1, k, [&](const PointSet& x) {
        PointSet fx = p.support_future(x);
        PointSet sp = p.span(x);
        PointSet cover = p.empty_set();
        for (int i : to_indices(sp)) cover |= p.future(i);
        for (int y = 0; y < p.size(); ++y) {
            if (++work > cap) return false;
            if (x.test(y)) continue;
            PointSet fy = p.future(y);
            if (!fx.is_subset_of(fy)) continue;
            if (fy.is_proper_subset_of(cover)) {
                out = fails({x, p.singleton(y)});
                return false;
            }
        }
        return true;
    });
    if (!finished && out.holds == true) return unknown();
    return out;
}

PosetClassification classify_poset(const Poset& p, int k, std::size_t cap) {
    if (k < 2) throw Error(ErrorCode::InvalidInput, "bounded set size must be at least 2");
    PosetClassification c;
    c.k = k;
    c.join_semilattice = holds();
    c.meet_semilattice = holds();
    c.join_free = holds();
    c.meet_free = holds();
    for (int a = 0; a < p.size(); ++a) {
        for (int b = a + 1; b < p.size(); ++b) {
            auto j = p.join(a, b);
            auto m = p.meet(a, b);
            bool comparable = p.less(a, b) || p.less(b, a);
            std::vector<PointSet> pair{p.singleton(a), p.singleton(b)};
            if (!j && c.join_semilattice.holds == true) c.join_semilattice = fails(pair);
            if (!m && c.meet_semilattice.holds == true) c.meet_semilattice = fails(pair);
            if (j && !comparable && c.join_free.holds == true) c.join_free = fails({pair[0], pair[1], p.singleton(*j)});
            if (m && !comparable && c.meet_free.holds == true) c.meet_free = fails({pair[0], pair[1], p.singleton(*m)});
        }
    }
    if (c.join_semilattice.holds == false) c.lattice = c.join_semilattice;
    else if (c.meet_semilattice.holds == false) c.lattice = c.meet_semilattice;
    else c.lattice = holds();
    c.conical = check_conical(p, k, cap);
    c.location_symmetric = check_location_symmetric(p, k, cap);
    c.union_property = check_union_property(p, k, cap);
    return c;
}

Poset generate_minkowski_grid(GridDims dims, int extent) {
    if (extent < 1) throw Error(ErrorCode::InvalidInput, "grid extent must be at least 1");
    int space = dims == GridDims::OnePlusOne ? 1 : 2;
    long long side = 2LL * extent + 1;
    long long count = side;
    for (int d = 0; d < space; ++d) count *= side;
    if (extent > kMaxGridPoints || count > kMaxGridPoints)
        throw Error(ErrorCode::InvalidInput, "grid extent " + std::to_string(extent) + " exceeds the point limit");
    std::vector<std::vector<int>> coords;
    std::vector<int> c(space + 1, -extent);
    while (true) {
        coords.push_back(c);
        int k = space;
        while (k >= 0 && c[k] == extent) c[k--] = -extent;
        if (k < 0) break;
        ++c[k];
    }
    std::size_t n = coords.size();
    std::vector<std::string> labels;
    for (const auto& pt : coords) {
        std::string l = "(";
        for (std::size_t i = 0; i < pt.size(); ++i) l += (i ? "," : "") + std::to_string(pt[i]);
        labels.push_back(l + ")");
    }
    std::vector<PointSet> up(n, PointSet(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            long long dt = coords[b][0] - coords[a][0];
            if (dt <= 0) continue;
            long long dx2 = 0;
            for (int d = 1; d <= space; ++d) {
                long long dx = coords[b][d] - coords[a][d];
                dx2 += dx * dx;
            }
            if (dt * dt >= dx2) up[a].set(b);
        }
    return Poset::from_closed(std::move(labels), std::move(up));
}

std::vector<Poset> enumerate_posets(int n) {
    if (n < 0 || n > 6) throw Error(ErrorCode::InvalidInput, "poset enumeration supports up to 6 elements");
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) slots.emplace_back(a, b);
    std::vector<int> perm(n);
    std::set<std::vector<bool>> seen;
    std::vector<Poset> out;
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    // Every poset has a linear extension, so orders with a < b only along index order suffice.
    for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
        std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (mask >> s & 1U) lt[slots[s].first][slots[s].second] = true;
        bool transitive = true;
        for (int a = 0; a < n && transitive; ++a)
            for (int b = 0; b < n && transitive; ++b)
                for (int c = 0; c < n && transitive; ++c)
                    if (lt[a][b] && lt[b][c] && !lt[a][c]) transitive = false;
        if (!transitive) continue;
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<bool> best;
        do {
            std::vector<bool> code(n * n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) code[perm[a] * n + perm[b]] = lt[a][b];
            if (best.empty() || code < best) best = code;
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!seen.insert(best).second) continue;
        std::vector<std::pair<int, int>> rel;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (lt[a][b]) rel.emplace_back(a, b);
        out.push_back(Poset::from_pairs(labels, rel));
    }
    return out;
}

std::string hasse_dot(const Poset& p) {
    std::string out = "digraph {\n  rankdir=BT;\n";
    for (const auto& l : p.labels()) out += "  \"" + l + "\";\n";
    for (const auto& [a, b] : p.covers()) out += "  \"" + p.label(a) + "\" -> \"" + p.label(b) + "\";\n";
    out += "}\n";
    return out;
}

}  // namespace causal_affects
