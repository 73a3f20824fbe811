#include "slicecov/ast.hpp"

#include <sstream>

namespace slicecov {

namespace {

int precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Eq:
        case BinaryOp::Ne: return 3;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return 4;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 5;
        case BinaryOp::Mul:
        case BinaryOp::Div:
        case BinaryOp::Mod: return 6;
    }
    return 0;
}

class Printer {
public:
    std::string print(const CompilationUnit& unit) {
        if (unit.class_name) {
            out_ << "class " << *unit.class_name << " {\n";
            ++indent_;
        }
        bool first = true;
        for (const MethodDecl& m : unit.methods) {
            if (!first) out_ << "\n";
            first = false;
            print_method(m);
        }
        if (unit.class_name) {
            --indent_;
            out_ << "}\n";
        }
        return out_.str();
    }

    std::string print_expression(const Expr& e) {
        print_expr(e, 0);
        return out_.str();
    }

private:
    void line_start() {
        for (int i = 0; i < indent_; ++i) out_ << "    ";
    }

    void print_type(const TypeName& t) {
        out_ << t.base;
        for (int i = 0; i < t.array_dims; ++i) out_ << "[]";
    }

    void print_method(const MethodDecl& m) {
        line_start();
        print_type(m.return_type);
        out_ << " " << m.name << "(";
        for (std::size_t i = 0; i < m.params.size(); ++i) {
            if (i) out_ << ", ";
            print_type(m.params[i].type);
            out_ << " " << m.params[i].name;
        }
        out_ << ") {\n";
        ++indent_;
        for (const StmtPtr& s : m.body) print_stmt(*s);
        --indent_;
        line_start();
        out_ << "}\n";
    }

    void print_stmt(const Stmt& stmt) {
        std::visit([&](const auto& node) { print_node(node); }, stmt.node);
    }

    void print_node(const VarDeclStmt& s) {
        line_start();
        print_decl_head(s);
        out_ << ";\n";
    }
    void print_decl_head(const VarDeclStmt& s) {
        print_type(s.type);
        out_ << " " << s.name;
        if (s.init) {
            out_ << " = ";
            print_expr(*s.init, 0);
        }
    }
    void print_node(const AssignStmt& s) {
        line_start();
        print_assign_head(s);
        out_ << ";\n";
    }
    void print_assign_head(const AssignStmt& s) {
        out_ << s.target.name;
        if (s.target.index) {
            out_ << "[";
            print_expr(*s.target.index, 0);
            out_ << "]";
        }
        out_ << " " << to_string(s.op) << " ";
        print_expr(s.value, 0);
    }
    void print_node(const IncDecStmt& s) {
        line_start();
        print_incdec_head(s);
        out_ << ";\n";
    }
    void print_incdec_head(const IncDecStmt& s) {
        const char* op = s.increment ? "++" : "--";
        if (s.prefix) out_ << op << s.name;
        else out_ << s.name << op;
    }
    void print_node(const IfStmt& s) {
        line_start();
        out_ << "if (";
        print_expr(s.cond, 0);
        out_ << ")";
        print_branch(*s.then_branch);
        if (s.else_branch) {
            line_start();
            out_ << "else";
            print_branch(*s.else_branch);
        }
    }
    void print_node(const WhileStmt& s) {
        line_start();
        out_ << "while (";
        print_expr(s.cond, 0);
        out_ << ")";
        print_branch(*s.body);
    }
    void print_node(const ForStmt& s) {
        line_start();
        out_ << "for (";
        if (const auto* decl = std::get_if<VarDeclStmt>(&s.init->node)) print_decl_head(*decl);
        else print_assign_head(std::get<AssignStmt>(s.init->node));
        out_ << "; ";
        print_expr(s.cond, 0);
        out_ << "; ";
        if (const auto* assign = std::get_if<AssignStmt>(&s.update->node)) print_assign_head(*assign);
        else print_incdec_head(std::get<IncDecStmt>(s.update->node));
        out_ << ")";
        print_branch(*s.body);
    }
    void print_branch(const Stmt& body) {
        out_ << "\n";
        ++indent_;
        print_stmt(body);
        --indent_;
    }
    void print_node(const CallStmtNode& s) {
        line_start();
        print_call(s.call);
        out_ << ";\n";
    }
    void print_node(const ReturnStmt& s) {
        line_start();
        out_ << "return";
        if (s.value) {
            out_ << " ";
            print_expr(*s.value, 0);
        }
        out_ << ";\n";
    }
    void print_node(const BlockStmt& s) {
        line_start();
        out_ << "{\n";
        ++indent_;
        for (const StmtPtr& inner : s.statements) print_stmt(*inner);
        --indent_;
        line_start();
        out_ << "}\n";
    }

    void print_call(const CallExpr& c) {
        if (!c.qualifier.empty()) out_ << c.qualifier << ".";
        out_ << c.name << "(";
        for (std::size_t i = 0; i < c.args.size(); ++i) {
            if (i) out_ << ", ";
            print_expr(*c.args[i], 0);
        }
        out_ << ")";
    }

    // min_prec: parenthesize any binary expression binding looser than the
    // context. All binary operators are left-associative.
    void print_expr(const Expr& e, int min_prec) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, IntLit>) out_ << node.lexeme;
                else if constexpr (std::is_same_v<T, DoubleLit>) out_ << node.lexeme;
                else if constexpr (std::is_same_v<T, BoolLit>) out_ << (node.value ? "true" : "false");
                else if constexpr (std::is_same_v<T, StringLit>) out_ << '"' << node.lexeme << '"';
                else if constexpr (std::is_same_v<T, VarRef>) out_ << node.name;
                else if constexpr (std::is_same_v<T, IndexExpr>) {
                    out_ << node.array << "[";
                    print_expr(*node.index, 0);
                    out_ << "]";
                } else if constexpr (std::is_same_v<T, ArrayLen>) {
                    out_ << node.array << ".length";
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    out_ << (node.op == UnaryOp::Neg ? "-" : "!");
                    // parenthesize compound operands; "--x" would lex as a
                    // decrement, so nested unaries need parens too
                    bool parens = std::holds_alternative<BinaryExpr>(node.operand->node) ||
                                  std::holds_alternative<UnaryExpr>(node.operand->node);
                    if (parens) out_ << "(";
                    print_expr(*node.operand, 0);
                    if (parens) out_ << ")";
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    int prec = precedence(node.op);
                    bool parens = prec < min_prec;
                    if (parens) out_ << "(";
                    print_expr(*node.lhs, prec);
                    out_ << " " << to_string(node.op) << " ";
                    print_expr(*node.rhs, prec + 1);
                    if (parens) out_ << ")";
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    print_call(node);
                }
            },
            e.node);
    }

    std::ostringstream out_;
    int indent_ = 0;
};

bool expr_equal(const Expr& a, const Expr& b);
bool stmt_equal(const Stmt& a, const Stmt& b);

bool expr_list_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!expr_equal(*a[i], *b[i])) return false;
    return true;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& na) {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, IntLit>) return na.lexeme == nb.lexeme;
            else if constexpr (std::is_same_v<T, DoubleLit>) return na.lexeme == nb.lexeme;
            else if constexpr (std::is_same_v<T, BoolLit>) return na.value == nb.value;
            else if constexpr (std::is_same_v<T, StringLit>) return na.lexeme == nb.lexeme;
            else if constexpr (std::is_same_v<T, VarRef>) return na.name == nb.name;
            else if constexpr (std::is_same_v<T, IndexExpr>)
                return na.array == nb.array && expr_equal(*na.index, *nb.index);
            else if constexpr (std::is_same_v<T, ArrayLen>) return na.array == nb.array;
            else if constexpr (std::is_same_v<T, UnaryExpr>)
                return na.op == nb.op && expr_equal(*na.operand, *nb.operand);
            else if constexpr (std::is_same_v<T, BinaryExpr>)
                return na.op == nb.op && expr_equal(*na.lhs, *nb.lhs) && expr_equal(*na.rhs, *nb.rhs);
            else if constexpr (std::is_same_v<T, CallExpr>)
                return na.qualifier == nb.qualifier && na.name == nb.name &&
                       expr_list_equal(na.args, nb.args);
        },
        a.node);
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& na) {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, VarDeclStmt>) {
                if (!(na.type == nb.type) || na.name != nb.name) return false;
                if (na.init.has_value() != nb.init.has_value()) return false;
                return !na.init || expr_equal(*na.init, *nb.init);
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
                if (na.op != nb.op || na.target.name != nb.target.name) return false;
                bool ai = na.target.index != nullptr, bi = nb.target.index != nullptr;
                if (ai != bi) return false;
                if (ai && !expr_equal(*na.target.index, *nb.target.index)) return false;
                return expr_equal(na.value, nb.value);
            } else if constexpr (std::is_same_v<T, IncDecStmt>) {
                return na.name == nb.name && na.increment == nb.increment && na.prefix == nb.prefix;
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                if (!expr_equal(na.cond, nb.cond)) return false;
                if (!stmt_equal(*na.then_branch, *nb.then_branch)) return false;
                bool ae = na.else_branch != nullptr, be = nb.else_branch != nullptr;
                if (ae != be) return false;
                return !ae || stmt_equal(*na.else_branch, *nb.else_branch);
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                return expr_equal(na.cond, nb.cond) && stmt_equal(*na.body, *nb.body);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                return stmt_equal(*na.init, *nb.init) && expr_equal(na.cond, nb.cond) &&
                       stmt_equal(*na.update, *nb.update) && stmt_equal(*na.body, *nb.body);
            } else if constexpr (std::is_same_v<T, CallStmtNode>) {
                return na.call.qualifier == nb.call.qualifier && na.call.name == nb.call.name &&
                       expr_list_equal(na.call.args, nb.call.args);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                if (na.value.has_value() != nb.value.has_value()) return false;
                return !na.value || expr_equal(*na.value, *nb.value);
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                if (na.statements.size() != nb.statements.size()) return false;
                for (std::size_t i = 0; i < na.statements.size(); ++i)
                    if (!stmt_equal(*na.statements[i], *nb.statements[i])) return false;
                return true;
            }
        },
        a.node);
}

int count_stmt(const Stmt& stmt) {
    return 1 + std::visit(
                   [](const auto& node) -> int {
                       using T = std::decay_t<decltype(node)>;
                       if constexpr (std::is_same_v<T, IfStmt>) {
                           int n = count_stmt(*node.then_branch);
                           if (node.else_branch) n += count_stmt(*node.else_branch);
                           return n;
                       } else if constexpr (std::is_same_v<T, WhileStmt>) {
                           return count_stmt(*node.body);
                       } else if constexpr (std::is_same_v<T, ForStmt>) {
                           // header clauses belong to the for statement
                           return count_stmt(*node.body);
                       } else if constexpr (std::is_same_v<T, BlockStmt>) {
                           int n = 0;
                           for (const StmtPtr& s : node.statements) n += count_stmt(*s);
                           return n;
                       } else {
                           return 0;
                       }
                   },
                   stmt.node);
}

} // namespace

std::string pretty_print(const CompilationUnit& unit) { return Printer().print(unit); }

std::string pretty_print(const Expr& expr) { return Printer().print_expression(expr); }

bool structurally_equal(const CompilationUnit& a, const CompilationUnit& b) {
    if (a.class_name != b.class_name) return false;
    if (a.methods.size() != b.methods.size()) return false;
    for (std::size_t i = 0; i < a.methods.size(); ++i) {
        const MethodDecl& ma = a.methods[i];
        const MethodDecl& mb = b.methods[i];
        if (ma.name != mb.name || !(ma.return_type == mb.return_type)) return false;
        if (ma.params.size() != mb.params.size()) return false;
        for (std::size_t j = 0; j < ma.params.size(); ++j)
            if (ma.params[j].name != mb.params[j].name || !(ma.params[j].type == mb.params[j].type))
                return false;
        if (ma.body.size() != mb.body.size()) return false;
        for (std::size_t j = 0; j < ma.body.size(); ++j)
            if (!stmt_equal(*ma.body[j], *mb.body[j])) return false;
    }
    return true;
}

int statement_count(const MethodDecl& method) {
    int n = 0;
    for (const StmtPtr& s : method.body) n += count_stmt(*s);
    return n;
}

const char* to_string(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Mod: return "%";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::And: return "&&";
        case BinaryOp::Or: return "||";
    }
    return "?";
}

const char* to_string(AssignOp op) {
    switch (op) {
        case AssignOp::Set: return "=";
        case AssignOp::Add: return "+=";
        case AssignOp::Sub: return "-=";
        case AssignOp::Mul: return "*=";
        case AssignOp::Div: return "/=";
        case AssignOp::Mod: return "%=";
    }
    return "?";
}

} // namespace slicecov
