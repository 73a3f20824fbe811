#pragma once

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "slicecov/ast.hpp"
#include "slicecov/resolve.hpp"

namespace slicecov {

// Node granularity: one node per simple statement, declaration, assignment,
// output, call or return; one per if/while predicate; three per for header
// (init, cond, update). Blocks and the method signature contribute none.
// Parameter definitions live on a virtual entry node that is excluded from
// the body node list and from every node count.

enum class NodeKind {
    DeclDef,
    Assign,
    PredicateIf,
    PredicateWhile,
    ForInit,
    ForCond,
    ForUpdate,
    Output,
    CallStmt,
    Return,
};

const char* to_string(NodeKind kind);

struct PdgNode {
    int id = -1;
    NodeKind kind = NodeKind::Assign;
    Span span;
    std::set<VariableId> defs;
    std::set<VariableId> uses;
    bool weak_def = false; // array-element write: def does not kill
};

constexpr int kEntryNode = -1;
constexpr int kExitNode = -2;

/// Intraprocedural control-flow graph over the future PDG body nodes plus
/// virtual entry/exit.
struct Cfg {
    std::string method;
    std::vector<PdgNode> nodes;         // ordered by source position
    std::vector<VariableId> entry_defs; // parameters
    std::vector<VariableInfo> variables;

    // successor lists; index = node id + 2 (exit, entry, then body nodes)
    std::vector<std::vector<int>> succ;

    const std::vector<int>& successors(int node) const { return succ.at(static_cast<std::size_t>(node + 2)); }
};

struct DefSite {
    int node = kEntryNode; // kEntryNode for parameter definitions
    VariableId var;
    friend auto operator<=>(const DefSite&, const DefSite&) = default;
};

/// Classic forward may-analysis fixpoint. Kills are strong for scalar
/// variables and absent for array-element writes.
struct ReachingDefinitions {
    std::vector<DefSite> sites;
    std::vector<std::set<int>> in;  // site indices, per body node
    std::vector<std::set<int>> out;

    /// Def-use chains: (def node, use node, variable).
    std::set<std::tuple<int, int, VariableId>> def_use_edges(const Cfg& cfg) const;
};

struct Pdg {
    std::string method;
    std::vector<PdgNode> body_nodes;    // |body_nodes| == method length |M|
    std::vector<VariableId> entry_defs; // parameters
    std::vector<VariableInfo> variables;
    std::set<std::tuple<int, int, VariableId>> data_edges; // from (may be entry), to, var
    std::set<std::pair<int, int>> control_edges;           // predicate or entry -> node

    int method_length() const { return static_cast<int>(body_nodes.size()); }
    const PdgNode& node(int id) const { return body_nodes.at(static_cast<std::size_t>(id)); }
    const VariableInfo& var(VariableId id) const { return variables.at(static_cast<std::size_t>(id.value)); }
};

Cfg build_cfg(const MethodDecl& method, const MethodSymbols& symbols);
ReachingDefinitions reaching_definitions(const Cfg& cfg);
Pdg build_pdg(const MethodDecl& method, const MethodSymbols& symbols);

/// Graphviz export: nodes labeled "id:kind:line", solid data edges labeled
/// with the variable, dashed control edges.
std::string to_dot(const Pdg& pdg);
std::string to_json_string(const Pdg& pdg); // nodes, defs, uses, edges

} // namespace slicecov
