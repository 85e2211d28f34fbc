#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causal_affects/errors.hpp"

namespace causal_affects {

using PointSet = boost::dynamic_bitset<>;

enum class GridDims { OnePlusOne, TwoPlusOne };

// Finite strict partial order, stored transitively closed.
class Poset {
public:
    Poset() = default;

    // Closes the relation transitively; a cycle raises CycleDetected naming its elements.
    static Poset create(std::vector<std::string> elements,
                        const std::vector<std::pair<std::string, std::string>>& relations);
    static Poset from_pairs(std::vector<std::string> elements, const std::vector<std::pair<int, int>>& relations);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_.at(i); }
    int index_of(const std::string& label) const;  // throws UnknownNode

    bool less(int a, int b) const { return up_[a][b]; }
    bool leq(int a, int b) const { return a == b || up_[a][b]; }

    PointSet empty_set() const { return PointSet(labels_.size()); }
    PointSet full_set() const { return ~empty_set(); }
    PointSet singleton(int a) const;
    PointSet points(const std::vector<int>& idx) const;

    PointSet future(int a) const;  // inclusive
    const PointSet& exclusive_future(int a) const { return up_.at(a); }
    PointSet past(int a) const;  // inclusive
    // Intersection of inclusive futures; the whole poset for the empty set.
    PointSet support_future(const PointSet& s) const;
    PointSet minimal(const PointSet& m) const;
    std::vector<std::pair<int, int>> covers() const;
    std::vector<std::pair<int, int>> relations() const;
    std::optional<int> join(int a, int b) const;
    std::optional<int> meet(int a, int b) const;
    // Union of the inclusion-minimal subsets with the same support future; |s| <= 20.
    PointSet span(const PointSet& s) const;

private:
    // up[a] must already be the strict future of a in a transitively closed order.
    static Poset from_closed(std::vector<std::string> labels, std::vector<PointSet> up);
    friend Poset generate_minkowski_grid(GridDims dims, int extent);

    std::vector<std::string> labels_;
    std::vector<PointSet> up_;    // strict futures
    std::vector<PointSet> down_;  // strict pasts
};

std::vector<int> to_indices(const PointSet& s);

struct BoundedFlag {
    std::optional<bool> holds;  // empty when the check exceeded its cap
    std::vector<PointSet> counterexample;
};

struct PosetClassification {
    int k = 3;
    BoundedFlag join_semilattice;
    BoundedFlag meet_semilattice;
    BoundedFlag lattice;
    BoundedFlag join_free;
    BoundedFlag meet_free;
    BoundedFlag conical;
    BoundedFlag location_symmetric;
    BoundedFlag union_property;
};

// Lattice flags are exact; conicality, location symmetry and the union property are
// checked over point sets of size at most k. Throws InvalidInput for k < 2.
PosetClassification classify_poset(const Poset& p, int k = 3, std::size_t cap = 5'000'000);

// Bounded checks on their own, for callers that need only one of them.
BoundedFlag check_conical(const Poset& p, int k, std::size_t cap = 5'000'000);
BoundedFlag check_location_symmetric(const Poset& p, int k, std::size_t cap = 5'000'000);
BoundedFlag check_union_property(const Poset& p, int k, std::size_t cap = 5'000'000);

constexpr int kMaxGridPoints = 4096;

// Integer points with every coordinate in [-extent, extent], ordered by the light cone.
Poset generate_minkowski_grid(GridDims dims, int extent);

// All posets on n unlabeled elements, one representative each, labels "0".."n-1".
std::vector<Poset> enumerate_posets(int n);

std::string hasse_dot(const Poset& p);

}  // namespace causal_affects
