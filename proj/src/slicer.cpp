#include "slicecov/slicer.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace slicecov {

namespace {

struct Adjacency {
    // index = node id + 1 (entry first)
    std::vector<std::vector<int>> data;
    std::vector<std::vector<int>> control;
};

Adjacency forward_adjacency(const Pdg& pdg) {
    Adjacency adj;
    adj.data.resize(pdg.body_nodes.size() + 1);
    adj.control.resize(pdg.body_nodes.size() + 1);
    for (const auto& [from, to, var] : pdg.data_edges)
        adj.data[static_cast<std::size_t>(from + 1)].push_back(to);
    for (const auto& [from, to] : pdg.control_edges)
        adj.control[static_cast<std::size_t>(from + 1)].push_back(to);
    return adj;
}

Adjacency backward_adjacency(const Pdg& pdg) {
    Adjacency adj;
    adj.data.resize(pdg.body_nodes.size() + 1);
    adj.control.resize(pdg.body_nodes.size() + 1);
    for (const auto& [from, to, var] : pdg.data_edges)
        adj.data[static_cast<std::size_t>(to + 1)].push_back(from);
    for (const auto& [from, to] : pdg.control_edges)
        adj.control[static_cast<std::size_t>(to + 1)].push_back(from);
    return adj;
}

void check_node(const Pdg& pdg, int node, bool allow_entry) {
    if (node == kEntryNode && allow_entry) return;
    if (node < 0 || node >= pdg.method_length())
        throw std::invalid_argument("unknown node id " + std::to_string(node) + " in method '" +
                                    pdg.method + "'");
}

// Closure over data + control edges. Entry may seed the walk but never
// appears in the result; entry's control fan-out to top-level statements is
// structural, so only its data edges (the parameter definitions) are
// followed, and those optionally filtered to one variable.
std::set<int> closure(const Pdg& pdg, const Adjacency& adj, int seed,
                      const std::optional<VariableId>& entry_var) {
    std::set<int> visited;
    std::deque<int> work{seed};
    while (!work.empty()) {
        int n = work.front();
        work.pop_front();
        if (n != kEntryNode && !visited.insert(n).second) continue;
        if (n == kEntryNode) {
            if (!entry_var) continue; // reached entry mid-walk: stop
            for (const auto& [from, to, var] : pdg.data_edges)
                if (from == kEntryNode && var == *entry_var) work.push_back(to);
            continue;
        }
        const auto idx = static_cast<std::size_t>(n + 1);
        for (int m : adj.data[idx]) work.push_back(m);
        for (int m : adj.control[idx]) work.push_back(m);
    }
    return visited;
}

std::set<int> entry_forward(const Pdg& pdg, const Adjacency& adj,
                            std::optional<VariableId> filter) {
    std::set<int> visited;
    std::deque<int> work;
    for (const auto& [from, to, var] : pdg.data_edges)
        if (from == kEntryNode && (!filter || var == *filter)) work.push_back(to);
    while (!work.empty()) {
        int n = work.front();
        work.pop_front();
        if (!visited.insert(n).second) continue;
        const auto idx = static_cast<std::size_t>(n + 1);
        for (int m : adj.data[idx]) work.push_back(m);
        for (int m : adj.control[idx]) work.push_back(m);
    }
    return visited;
}

} // namespace

std::set<int> backward_slice(const Pdg& pdg, int node) {
    check_node(pdg, node, /*allow_entry=*/false);
    return closure(pdg, backward_adjacency(pdg), node, std::nullopt);
}

std::set<int> forward_slice(const Pdg& pdg, int node) {
    check_node(pdg, node, /*allow_entry=*/true);
    Adjacency adj = forward_adjacency(pdg);
    if (node == kEntryNode) return entry_forward(pdg, adj, std::nullopt);
    return closure(pdg, adj, node, std::nullopt);
}

std::set<int> forward_slice(const Pdg& pdg, const SliceCriterion& criterion) {
    check_node(pdg, criterion.node, /*allow_entry=*/true);
    Adjacency adj = forward_adjacency(pdg);
    if (criterion.node == kEntryNode) return entry_forward(pdg, adj, criterion.variable);
    return closure(pdg, adj, criterion.node, std::nullopt);
}

SliceProfile slice_profile(const Pdg& pdg, VariableId variable) {
    SliceProfile profile;
    profile.variable = variable;

    const bool is_param =
        std::find(pdg.entry_defs.begin(), pdg.entry_defs.end(), variable) != pdg.entry_defs.end();

    // Body node ids are assigned in source order, so id order is source
    // order, for-header clauses included.
    std::vector<int> refs, defs;
    for (const PdgNode& n : pdg.body_nodes) {
        if (n.uses.count(variable)) refs.push_back(n.id);
        if (n.defs.count(variable)) defs.push_back(n.id);
    }
    if (refs.empty() && defs.empty() && !is_param) return profile; // never occurs

    Adjacency fwd = forward_adjacency(pdg);
    Adjacency bwd = backward_adjacency(pdg);

    std::set<int> covered_refs, covered_defs;
    bool entry_def_covered = !is_param;

    auto mark_covered = [&](const std::set<int>& nodes) {
        for (int r : refs)
            if (nodes.count(r)) covered_refs.insert(r);
        for (int d : defs)
            if (nodes.count(d)) covered_defs.insert(d);
    };

    auto make_slice = [&](int backward_seed, std::optional<int> forward_seed) {
        UnionSlice slice;
        slice.variable = variable;
        slice.seed_backward = {backward_seed, variable};
        std::set<int> nodes = backward_seed == kEntryNode
                                  ? std::set<int>{}
                                  : closure(pdg, bwd, backward_seed, std::nullopt);
        if (forward_seed) {
            slice.seed_forward = SliceCriterion{*forward_seed, variable};
            std::set<int> f = *forward_seed == kEntryNode
                                  ? entry_forward(pdg, fwd, variable)
                                  : closure(pdg, fwd, *forward_seed, std::nullopt);
            nodes.insert(f.begin(), f.end());
            if (*forward_seed == kEntryNode) entry_def_covered = true;
        }
        slice.nodes = std::move(nodes);
        mark_covered(slice.nodes);
        profile.slices.push_back(std::move(slice));
    };

    // Pass 1: backward from the last uncovered reference, forward from the
    // first definition inside that backward slice (entry def for parameters).
    while (true) {
        std::optional<int> seed;
        for (auto it = refs.rbegin(); it != refs.rend(); ++it)
            if (!covered_refs.count(*it)) { seed = *it; break; }
        if (!seed) break;

        std::set<int> back = closure(pdg, bwd, *seed, std::nullopt);
        std::optional<int> forward_seed;
        if (is_param) {
            forward_seed = kEntryNode; // the parameter binding is its first definition
        } else {
            for (int d : defs)
                if (back.count(d)) { forward_seed = d; break; }
        }
        make_slice(*seed, forward_seed);
    }

    // Pass 2: leftover definitions (dead stores) seed both directions,
    // latest first.
    for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
        if (covered_defs.count(*it)) continue;
        make_slice(*it, *it);
    }
    if (!entry_def_covered) make_slice(kEntryNode, kEntryNode);

    // Descending source order of the backward seed; the entry-seeded slice
    // (unreferenced parameter) sorts last.
    std::stable_sort(profile.slices.begin(), profile.slices.end(),
                     [](const UnionSlice& a, const UnionSlice& b) {
                         return a.seed_backward.node > b.seed_backward.node;
                     });
    return profile;
}

std::vector<SliceProfile> all_profiles(const Pdg& pdg) {
    std::vector<SliceProfile> profiles;
    profiles.reserve(pdg.variables.size());
    for (const VariableInfo& v : pdg.variables) profiles.push_back(slice_profile(pdg, v.id));
    return profiles;
}

} // namespace slicecov
