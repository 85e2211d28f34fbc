#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "causal_affects/affects_engine.hpp"
#include "causal_affects/poset.hpp"

namespace causal_affects {

enum class CompatMode { Irreducible, StrongIndecreasable, Indecreasable };

const char* compat_mode_name(CompatMode mode);  // "irreducible", "strong-indecreasable", "indecreasable"
CompatMode parse_compat_mode(const std::string& name);

// point[i] is the poset element of universe entry i.
struct Embedding {
    std::vector<int> point;

    auto operator<=>(const Embedding&) const = default;
};

// Throws UnknownNode when an RV is missing from the map or a label is not in the poset.
Embedding make_embedding(const AffectsSet& affects, const Poset& poset,
                         const std::map<std::string, std::string>& ordering);

struct ModeVerdict {
    bool compatible = true;
    std::vector<AffectsRelation> violations;
};

struct EmbeddingReport {
    CompatMode mode = CompatMode::Irreducible;
    bool compat = true;  // verdict of mode
    ModeVerdict irreducible;
    ModeVerdict strong_indecreasable;
    ModeVerdict indecreasable;
    bool support_stable = true;
    bool minimum_stable = true;
    bool degenerate = false;
    bool trivial = false;
    std::vector<AffectsRelation> meaningless;  // empty accessible region of Y, Z and W
};

// Flags are taken from the normalized set; a missing flag counts as false.
EmbeddingReport check_embedding(const AffectsSet& affects, const Poset& poset, const Embedding& emb,
                                CompatMode mode);

struct SearchRequirements {
    CompatMode mode = CompatMode::Irreducible;
    bool support_stable = false;
    bool minimum_stable = false;
    bool non_degenerate = false;
    bool non_trivial = false;
};

// Every satisfying embedding in lexicographic order of point vectors. Throws CapExceeded
// when |poset|^|universe| exceeds cap.
std::vector<Embedding> search_embeddings(const AffectsSet& affects, const Poset& poset,
                                         const SearchRequirements& require, std::size_t cap = 10'000'000);

// (X, Y, Z, W) -> (X u Z, Y u W, {}, {}) for relations flagged irreducible and indecreasable;
// any other present relation raises UnflaggedRelation. Absences are dropped.
AffectsSet reduce_ho_relations(const AffectsSet& affects);

}  // namespace causal_affects
