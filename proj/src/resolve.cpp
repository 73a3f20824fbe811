#include "slicecov/resolve.hpp"

#include <algorithm>
#include <map>

#include "slicecov/parser.hpp"

namespace slicecov {

namespace {

class MethodResolver {
public:
    MethodResolver(const MethodDecl& method, MethodSymbols& out, DiagnosticList& diags)
        : method_(method), out_(out), diags_(diags) {}

    void run() {
        scopes_.emplace_back(); // method scope: parameters
        for (const Param& p : method_.params) declare(p.name, p.span, /*is_param=*/true);
        scopes_.emplace_back(); // body scope
        for (const StmtPtr& s : method_.body) resolve_stmt(*s);
        scopes_.clear();
        std::sort(calls_.begin(), calls_.end());
        calls_.erase(std::unique(calls_.begin(), calls_.end()), calls_.end());
        out_.calls = std::move(calls_);
    }

private:
    void error(const Span& span, const std::string& msg) {
        diags_.push_back({Diagnostic::Severity::Error, span, msg});
    }

    VariableId declare(const std::string& name, const Span& span, bool is_param) {
        for (const auto& scope : scopes_) {
            auto it = scope.find(name);
            if (it != scope.end()) {
                error(span, "duplicate declaration of '" + name + "' in method '" +
                                method_.name + "'");
                return it->second;
            }
        }
        VariableId id{static_cast<int>(out_.variables.size())};
        out_.variables.push_back({id, name, is_param, span});
        scopes_.back().emplace(name, id);
        return id;
    }

    std::optional<VariableId> lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return found->second;
        }
        return std::nullopt;
    }

    void resolve_named_use(const Expr& site, const std::string& name, const Span& span) {
        if (auto id = lookup(name)) {
            out_.use_sites.emplace(&site, *id);
        } else {
            error(span, "unresolved variable '" + name + "'");
        }
    }

    void resolve_expr(const Expr& e) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarRef>) {
                    resolve_named_use(e, node.name, e.span);
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    resolve_named_use(e, node.array, e.span);
                    resolve_expr(*node.index);
                } else if constexpr (std::is_same_v<T, ArrayLen>) {
                    resolve_named_use(e, node.array, e.span);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    resolve_expr(*node.operand);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    resolve_expr(*node.lhs);
                    resolve_expr(*node.rhs);
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    record_call(node);
                    for (const ExprPtr& arg : node.args) resolve_expr(*arg);
                }
            },
            e.node);
    }

    void record_call(const CallExpr& call) {
        CallKind kind;
        if (call.qualifier == "out") kind = CallKind::Output;
        else if (!call.qualifier.empty()) kind = CallKind::Builtin;
        else kind = CallKind::Opaque;
        std::string name = call.qualifier.empty() ? call.name : call.qualifier + "." + call.name;
        calls_.emplace_back(std::move(name), kind);
    }

    void resolve_stmt(const Stmt& stmt) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDeclStmt>) {
                    // initializer first: `int x = x;` must not see x
                    if (node.init) resolve_expr(*node.init);
                    out_.def_sites.emplace(&stmt, declare(node.name, stmt.span, false));
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    if (auto id = lookup(node.target.name)) out_.def_sites.emplace(&stmt, *id);
                    else error(node.target.span, "unresolved variable '" + node.target.name + "'");
                    if (node.target.index) resolve_expr(*node.target.index);
                    resolve_expr(node.value);
                } else if constexpr (std::is_same_v<T, IncDecStmt>) {
                    if (auto id = lookup(node.name)) out_.def_sites.emplace(&stmt, *id);
                    else error(stmt.span, "unresolved variable '" + node.name + "'");
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    resolve_expr(node.cond);
                    resolve_branch(*node.then_branch);
                    if (node.else_branch) resolve_branch(*node.else_branch);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    resolve_expr(node.cond);
                    resolve_branch(*node.body);
                } else if constexpr (std::is_same_v<T, ForStmt>) {
                    scopes_.emplace_back(); // loop variable scope
                    resolve_stmt(*node.init);
                    resolve_expr(node.cond);
                    resolve_stmt(*node.update);
                    resolve_branch(*node.body);
                    scopes_.pop_back();
                } else if constexpr (std::is_same_v<T, CallStmtNode>) {
                    record_call(node.call);
                    for (const ExprPtr& arg : node.call.args) resolve_expr(*arg);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    if (node.value) resolve_expr(*node.value);
                } else if constexpr (std::is_same_v<T, BlockStmt>) {
                    scopes_.emplace_back();
                    for (const StmtPtr& inner : node.statements) resolve_stmt(*inner);
                    scopes_.pop_back();
                }
            },
            stmt.node);
    }

    // non-block branch bodies still get their own scope
    void resolve_branch(const Stmt& body) {
        if (std::holds_alternative<BlockStmt>(body.node)) {
            resolve_stmt(body);
        } else {
            scopes_.emplace_back();
            resolve_stmt(body);
            scopes_.pop_back();
        }
    }

    const MethodDecl& method_;
    MethodSymbols& out_;
    DiagnosticList& diags_;
    std::vector<std::map<std::string, VariableId>> scopes_;
    std::vector<std::pair<std::string, CallKind>> calls_;
};

} // namespace

std::optional<VariableId> MethodSymbols::find(const std::string& name) const {
    for (const VariableInfo& v : variables)
        if (v.name == name) return v.id;
    return std::nullopt;
}

ResolveResult resolve(CompilationUnit unit) {
    ResolveResult result;
    std::vector<MethodSymbols> methods(unit.methods.size());
    for (std::size_t i = 0; i < unit.methods.size(); ++i) {
        // pairwise-distinct parameter names
        const MethodDecl& m = unit.methods[i];
        for (std::size_t a = 0; a < m.params.size(); ++a)
            for (std::size_t b = a + 1; b < m.params.size(); ++b)
                if (m.params[a].name == m.params[b].name)
                    result.diagnostics.push_back(
                        {Diagnostic::Severity::Error, m.params[b].span,
                         "duplicate parameter '" + m.params[b].name + "'"});
        MethodResolver(m, methods[i], result.diagnostics).run();
    }
    if (result.diagnostics.empty())
        result.program = ResolvedProgram{std::move(unit), std::move(methods)};
    return result;
}

bool compilable(const SourceText& src) {
    ParseResult parsed = parse(src);
    if (!parsed.unit) return false;
    return resolve(std::move(*parsed.unit)).program.has_value();
}

} // namespace slicecov
