#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "slicecov/ast.hpp"
#include "slicecov/source.hpp"

namespace slicecov {

/// Dense per-method variable index. Parameters come first, in declaration
/// order, then locals in source order.
struct VariableId {
    int value = -1;
    friend auto operator<=>(const VariableId&, const VariableId&) = default;
};

struct VariableInfo {
    VariableId id;
    std::string name;
    bool is_param = false;
    Span decl_span;
};

enum class CallKind {
    Output,  // out.println / out.print: output statement using its arguments
    Builtin, // other qualified calls (Math.pow, ...): pure opaque functions
    Opaque,  // unqualified unknown helper (hexString, ...): pure opaque
};

struct MethodSymbols {
    std::vector<VariableInfo> variables; // index == VariableId::value
    // Identifier occurrences, keyed by the AST node carrying the name:
    // Expr* for VarRef/IndexExpr/ArrayLen reads, Stmt* for decl/assign/incdec
    // targets (the LValue of an AssignStmt hangs off its Stmt).
    std::unordered_map<const Expr*, VariableId> use_sites;
    std::unordered_map<const Stmt*, VariableId> def_sites;
    std::vector<std::pair<std::string, CallKind>> calls; // distinct, sorted by name

    const VariableInfo& info(VariableId id) const { return variables.at(static_cast<std::size_t>(id.value)); }
    std::optional<VariableId> find(const std::string& name) const;
};

struct ResolvedProgram {
    CompilationUnit unit;
    std::vector<MethodSymbols> methods; // parallel to unit.methods
};

struct ResolveResult {
    std::optional<ResolvedProgram> program;
    DiagnosticList diagnostics;
};

/// Bind every identifier occurrence to a VariableId or classify it as a call
/// target. Errors: use before declaration, assignment to an undeclared name,
/// redeclaration of a name visible in an enclosing scope of the same method.
ResolveResult resolve(CompilationUnit unit);

/// True iff the source both parses and resolves. Total and deterministic.
bool compilable(const SourceText& src);

} // namespace slicecov
