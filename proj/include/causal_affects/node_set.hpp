#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace causal_affects {

// Bitmask over node indices; bit i set means node i is a member.
using NodeSet = std::uint64_t;

constexpr int kMaxNodes = 64;

inline NodeSet bit(int i) { return NodeSet{1} << i; }
inline int set_size(NodeSet s) { return std::popcount(s); }
inline bool contains(NodeSet s, int i) { return (s >> i) & 1U; }
inline bool is_subset(NodeSet a, NodeSet b) { return (a & ~b) == 0; }

inline std::vector<int> members(NodeSet s) {
    std::vector<int> out;
    while (s != 0) {
        out.push_back(std::countr_zero(s));
        s &= s - 1;
    }
    return out;
}

// Calls f(sub) for every subset of s, including 0 and s itself.
template <typename F>
void for_each_subset(NodeSet s, F&& f) {
    NodeSet sub = 0;
    while (true) {
        f(sub);
        if (sub == s) break;
        sub = (sub - s) & s;
    }
}

}  // namespace causal_affects
