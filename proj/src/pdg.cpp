#include "slicecov/pdg.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <nlohmann/json.hpp>

namespace slicecov {

namespace {

using json = nlohmann::ordered_json;

/// Collects the VariableIds read by an expression tree.
void collect_uses(const Expr& e, const MethodSymbols& symbols, std::set<VariableId>& out) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, VarRef> || std::is_same_v<T, ArrayLen>) {
                out.insert(symbols.use_sites.at(&e));
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                out.insert(symbols.use_sites.at(&e));
                collect_uses(*node.index, symbols, out);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                collect_uses(*node.operand, symbols, out);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                collect_uses(*node.lhs, symbols, out);
                collect_uses(*node.rhs, symbols, out);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                for (const ExprPtr& arg : node.args) collect_uses(*arg, symbols, out);
            }
        },
        e.node);
}

class CfgBuilder {
public:
    CfgBuilder(const MethodDecl& method, const MethodSymbols& symbols)
        : method_(method), symbols_(symbols) {}

    Cfg build() {
        Cfg cfg;
        cfg.method = method_.name;
        cfg.variables = symbols_.variables;
        for (const VariableInfo& v : symbols_.variables)
            if (v.is_param) cfg.entry_defs.push_back(v.id);

        std::vector<int> frontier{kEntryNode};
        for (const StmtPtr& s : method_.body) frontier = wire(*s, frontier, kEntryNode);
        for (int n : frontier) edge(n, kExitNode);
        if (nodes_.empty()) edge(kEntryNode, kExitNode);

        cfg.nodes = std::move(nodes_);
        cfg.succ.resize(cfg.nodes.size() + 2);
        for (auto [from, to] : edges_) {
            auto& list = cfg.succ[static_cast<std::size_t>(from + 2)];
            if (std::find(list.begin(), list.end(), to) == list.end()) list.push_back(to);
        }
        for (auto& list : cfg.succ) std::sort(list.begin(), list.end());
        return cfg;
    }

    std::set<std::pair<int, int>> take_control_edges() { return std::move(control_edges_); }

private:
    int add_node(NodeKind kind, const Span& span, int control_parent) {
        PdgNode node;
        node.id = static_cast<int>(nodes_.size());
        node.kind = kind;
        node.span = span;
        nodes_.push_back(std::move(node));
        control_edges_.emplace(control_parent, nodes_.back().id);
        return nodes_.back().id;
    }

    void edge(int from, int to) { edges_.emplace_back(from, to); }
    void connect(const std::vector<int>& sources, int to) {
        for (int s : sources) edge(s, to);
    }

    std::set<VariableId> uses_of(const Expr& e) {
        std::set<VariableId> uses;
        collect_uses(e, symbols_, uses);
        return uses;
    }

    // Creates the nodes for one statement (source order) and wires the CFG.
    // `frontier` holds the nodes whose control flow falls into this
    // statement; returns the fall-through frontier after it.
    std::vector<int> wire(const Stmt& stmt, std::vector<int> frontier, int parent) {
        return std::visit(
            [&](const auto& node) -> std::vector<int> {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    int n = add_node(NodeKind::DeclDef, stmt.span, parent);
                    nodes_[static_cast<std::size_t>(n)].defs.insert(symbols_.def_sites.at(&stmt));
                    if (node.init) nodes_[static_cast<std::size_t>(n)].uses = uses_of(*node.init);
                    connect(frontier, n);
                    return {n};
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    int n = add_node(NodeKind::Assign, stmt.span, parent);
                    fill_assign(nodes_[static_cast<std::size_t>(n)], stmt, node);
                    connect(frontier, n);
                    return {n};
                } else if constexpr (std::is_same_v<T, IncDecStmt>) {
                    int n = add_node(NodeKind::Assign, stmt.span, parent);
                    VariableId id = symbols_.def_sites.at(&stmt);
                    nodes_[static_cast<std::size_t>(n)].defs.insert(id);
                    nodes_[static_cast<std::size_t>(n)].uses.insert(id);
                    connect(frontier, n);
                    return {n};
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    int c = add_node(NodeKind::PredicateIf, node.cond.span, parent);
                    nodes_[static_cast<std::size_t>(c)].uses = uses_of(node.cond);
                    connect(frontier, c);
                    std::vector<int> out = wire(*node.then_branch, {c}, c);
                    if (node.else_branch) {
                        std::vector<int> other = wire(*node.else_branch, {c}, c);
                        out.insert(out.end(), other.begin(), other.end());
                    } else {
                        out.push_back(c);
                    }
                    return out;
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    int c = add_node(NodeKind::PredicateWhile, node.cond.span, parent);
                    nodes_[static_cast<std::size_t>(c)].uses = uses_of(node.cond);
                    connect(frontier, c);
                    std::vector<int> body_out = wire(*node.body, {c}, c);
                    connect(body_out, c); // back edge
                    return {c};
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    int i = wire_header_clause(*node.init, NodeKind::ForInit, parent);
                    int c = add_node(NodeKind::ForCond, node.cond.span, parent);
                    nodes_[static_cast<std::size_t>(c)].uses = uses_of(node.cond);
                    int u = wire_header_clause(*node.update, NodeKind::ForUpdate, c);
                    connect(frontier, i);
                    edge(i, c);
                    std::vector<int> body_out = wire(*node.body, {c}, c);
                    connect(body_out, u);
                    edge(u, c); // back edge
                    return {c};
                } else if constexpr (std::is_same_v<T, CallStmtNode>) {
                    NodeKind kind = node.call.qualifier == "out" ? NodeKind::Output
                                                                 : NodeKind::CallStmt;
                    int n = add_node(kind, stmt.span, parent);
                    for (const ExprPtr& arg : node.call.args) {
                        std::set<VariableId> uses = uses_of(*arg);
                        nodes_[static_cast<std::size_t>(n)].uses.insert(uses.begin(), uses.end());
                    }
                    connect(frontier, n);
                    return {n};
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    int n = add_node(NodeKind::Return, stmt.span, parent);
                    if (node.value) nodes_[static_cast<std::size_t>(n)].uses = uses_of(*node.value);
                    connect(frontier, n);
                    edge(n, kExitNode);
                    return {}; // no fall-through
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    for (const StmtPtr& inner : node.statements)
                        frontier = wire(*inner, std::move(frontier), parent);
                    return frontier;
                }
            },
            stmt.node);
    }

    // for-header init/update clause: one node, no CFG wiring here
    int wire_header_clause(const Stmt& clause, NodeKind kind, int parent) {
        int n = add_node(kind, clause.span, parent);
        PdgNode& pn = nodes_[static_cast<std::size_t>(n)];
        if (const auto* decl = std::get_if<VarDeclStmt>(&clause.node)) {
            pn.defs.insert(symbols_.def_sites.at(&clause));
            if (decl->init) pn.uses = uses_of(*decl->init);
        } else if (const auto* assign = std::get_if<AssignStmt>(&clause.node)) {
            fill_assign(pn, clause, *assign);
        } else {
            const auto& incdec = std::get<IncDecStmt>(clause.node);
            (void)incdec;
            VariableId id = symbols_.def_sites.at(&clause);
            pn.defs.insert(id);
            pn.uses.insert(id);
        }
        return n;
    }

    void fill_assign(PdgNode& pn, const Stmt& stmt, const AssignStmt& assign) {
        VariableId target = symbols_.def_sites.at(&stmt);
        pn.defs.insert(target);
        if (assign.target.index) {
            // array-element write: weak def, reads the array and the index
            pn.weak_def = true;
            pn.uses.insert(target);
            std::set<VariableId> idx = uses_of(*assign.target.index);
            pn.uses.insert(idx.begin(), idx.end());
        }
        if (assign.op != AssignOp::Set) pn.uses.insert(target);
        std::set<VariableId> rhs = uses_of(assign.value);
        pn.uses.insert(rhs.begin(), rhs.end());
    }

    const MethodDecl& method_;
    const MethodSymbols& symbols_;
    std::vector<PdgNode> nodes_;
    std::vector<std::pair<int, int>> edges_;
    std::set<std::pair<int, int>> control_edges_;
};

std::vector<std::vector<int>> predecessors(const Cfg& cfg) {
    std::vector<std::vector<int>> pred(cfg.nodes.size() + 2);
    for (std::size_t i = 0; i < cfg.succ.size(); ++i)
        for (int to : cfg.succ[i]) pred[static_cast<std::size_t>(to + 2)].push_back(static_cast<int>(i) - 2);
    return pred;
}

} // namespace

Cfg build_cfg(const MethodDecl& method, const MethodSymbols& symbols) {
    return CfgBuilder(method, symbols).build();
}

ReachingDefinitions reaching_definitions(const Cfg& cfg) {
    ReachingDefinitions rd;
    // definition sites: parameters on entry first, then body defs
    for (VariableId v : cfg.entry_defs) rd.sites.push_back({kEntryNode, v});
    for (const PdgNode& n : cfg.nodes)
        for (VariableId v : n.defs) rd.sites.push_back({n.id, v});

    const std::size_t node_count = cfg.nodes.size();
    std::vector<std::set<int>> gen(node_count), kill(node_count);
    for (std::size_t s = 0; s < rd.sites.size(); ++s) {
        const DefSite& site = rd.sites[s];
        if (site.node == kEntryNode) continue;
        gen[static_cast<std::size_t>(site.node)].insert(static_cast<int>(s));
    }
    for (const PdgNode& n : cfg.nodes) {
        if (n.weak_def) continue; // array-element writes kill nothing
        for (std::size_t s = 0; s < rd.sites.size(); ++s)
            if (n.defs.count(rd.sites[s].var)) kill[static_cast<std::size_t>(n.id)].insert(static_cast<int>(s));
    }

    std::set<int> entry_out;
    for (std::size_t s = 0; s < rd.sites.size(); ++s)
        if (rd.sites[s].node == kEntryNode) entry_out.insert(static_cast<int>(s));

    rd.in.assign(node_count, {});
    rd.out.assign(node_count, {});
    auto pred = predecessors(cfg);

    std::deque<int> worklist;
    for (const PdgNode& n : cfg.nodes) worklist.push_back(n.id);
    while (!worklist.empty()) {
        int id = worklist.front();
        worklist.pop_front();
        auto idx = static_cast<std::size_t>(id);
        std::set<int> in;
        for (int p : pred[idx + 2]) {
            if (p == kExitNode) continue;
            const std::set<int>& src =
                p == kEntryNode ? entry_out : rd.out[static_cast<std::size_t>(p)];
            in.insert(src.begin(), src.end());
        }
        std::set<int> out = gen[idx];
        for (int s : in)
            if (!kill[idx].count(s)) out.insert(s);
        if (in != rd.in[idx] || out != rd.out[idx]) {
            bool out_changed = out != rd.out[idx];
            rd.in[idx] = std::move(in);
            rd.out[idx] = std::move(out);
            if (out_changed)
                for (int s : cfg.successors(id))
                    if (s >= 0) worklist.push_back(s);
        }
    }
    return rd;
}

std::set<std::tuple<int, int, VariableId>> ReachingDefinitions::def_use_edges(const Cfg& cfg) const {
    std::set<std::tuple<int, int, VariableId>> edges;
    for (const PdgNode& n : cfg.nodes) {
        for (int s : in[static_cast<std::size_t>(n.id)]) {
            const DefSite& site = sites[static_cast<std::size_t>(s)];
            if (n.uses.count(site.var)) edges.emplace(site.node, n.id, site.var);
        }
    }
    return edges;
}

Pdg build_pdg(const MethodDecl& method, const MethodSymbols& symbols) {
    CfgBuilder builder(method, symbols);
    Cfg cfg = builder.build();
    ReachingDefinitions rd = reaching_definitions(cfg);

    Pdg pdg;
    pdg.method = cfg.method;
    pdg.entry_defs = cfg.entry_defs;
    pdg.variables = cfg.variables;
    pdg.data_edges = rd.def_use_edges(cfg);
    pdg.control_edges = builder.take_control_edges();
    pdg.body_nodes = std::move(cfg.nodes);
    return pdg;
}

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::DeclDef: return "decl-def";
        case NodeKind::Assign: return "assign";
        case NodeKind::PredicateIf: return "predicate-if";
        case NodeKind::PredicateWhile: return "predicate-while";
        case NodeKind::ForInit: return "for-init";
        case NodeKind::ForCond: return "for-cond";
        case NodeKind::ForUpdate: return "for-update";
        case NodeKind::Output: return "output";
        case NodeKind::CallStmt: return "call-stmt";
        case NodeKind::Return: return "return";
    }
    return "?";
}

std::string to_dot(const Pdg& pdg) {
    std::ostringstream out;
    out << "digraph \"" << pdg.method << "\" {\n";
    out << "  rankdir=TB;\n";
    out << "  entry [shape=box, label=\"entry\"];\n";
    for (const PdgNode& n : pdg.body_nodes)
        out << "  n" << n.id << " [label=\"" << n.id << ":" << to_string(n.kind) << ":"
            << n.span.line << "\"];\n";
    auto name = [](int id) { return id == kEntryNode ? std::string("entry") : "n" + std::to_string(id); };
    for (const auto& [from, to, var] : pdg.data_edges)
        out << "  " << name(from) << " -> " << name(to) << " [label=\"" << pdg.var(var).name
            << "\"];\n";
    for (const auto& [from, to] : pdg.control_edges)
        out << "  " << name(from) << " -> " << name(to) << " [style=dashed];\n";
    out << "}\n";
    return out.str();
}

std::string to_json_string(const Pdg& pdg) {
    json j;
    j["method"] = pdg.method;
    j["method_length"] = pdg.method_length();
    json entry = json::array();
    for (VariableId v : pdg.entry_defs) entry.push_back(pdg.var(v).name);
    j["entry_defs"] = entry;
    json nodes = json::array();
    for (const PdgNode& n : pdg.body_nodes) {
        json node;
        node["id"] = n.id;
        node["kind"] = to_string(n.kind);
        node["line"] = n.span.line;
        json defs = json::array(), uses = json::array();
        for (VariableId v : n.defs) defs.push_back(pdg.var(v).name);
        for (VariableId v : n.uses) uses.push_back(pdg.var(v).name);
        node["defs"] = defs;
        node["uses"] = uses;
        nodes.push_back(std::move(node));
    }
    j["nodes"] = nodes;
    json data = json::array();
    for (const auto& [from, to, var] : pdg.data_edges)
        data.push_back(json::array({from, to, pdg.var(var).name}));
    j["data_edges"] = data;
    json control = json::array();
    for (const auto& [from, to] : pdg.control_edges) control.push_back(json::array({from, to}));
    j["control_edges"] = control;
    return j.dump(2) + "\n";
}

} // namespace slicecov
