#pragma once

#include <optional>
#include <set>
#include <vector>

#include "slicecov/pdg.hpp"

namespace slicecov {

struct SliceCriterion {
    int node = kEntryNode;
    VariableId variable;
    friend auto operator<=>(const SliceCriterion&, const SliceCriterion&) = default;
};

/// Body nodes reaching `node` backward over data and control edges,
/// transitively, the seed included. The virtual entry node never appears in
/// the result. Throws std::invalid_argument for an unknown id.
std::set<int> backward_slice(const Pdg& pdg, int node);

/// Body nodes reachable forward from `node`. A seed of kEntryNode slices
/// from the parameter definitions: only entry's data edges are followed
/// (entry's control edges merely anchor top-level statements).
std::set<int> forward_slice(const Pdg& pdg, int node);

/// Forward slice from a (node, variable) criterion; at the entry node only
/// the criterion variable's definition is followed.
std::set<int> forward_slice(const Pdg& pdg, const SliceCriterion& criterion);

/// Union of one backward and one forward slice of the same variable.
struct UnionSlice {
    VariableId variable;
    SliceCriterion seed_backward;
    std::optional<SliceCriterion> seed_forward;
    std::set<int> nodes;
};

struct SliceProfile {
    VariableId variable;
    std::vector<UnionSlice> slices; // backward seeds in descending source order

    bool empty() const { return slices.empty(); }
};

/// Iterative union-slice construction for one variable: backward slice from
/// the last uncovered reference, forward slice from the first definition
/// found inside it (the entry definition for parameters), repeated until
/// every reference and definition of the variable lies in some union slice.
/// Definitions left over once all references are covered (dead stores) seed
/// their own backward and forward slices. A variable that never occurs and
/// is not a parameter yields an empty profile.
SliceProfile slice_profile(const Pdg& pdg, VariableId variable);

/// Profiles for every method variable, in declaration order.
std::vector<SliceProfile> all_profiles(const Pdg& pdg);

} // namespace slicecov
