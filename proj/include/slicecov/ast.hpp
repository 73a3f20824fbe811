#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slicecov/source.hpp"

namespace slicecov {

// AST for the mini imperative language (".mj"). A subset of Java surface
// syntax: one optional class wrapper, methods, scalar/array locals,
// structured control flow, qualified builtin calls (out.println, Math.pow)
// and opaque helper calls. No fields, no objects, no type checking.

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinaryOp {
    Add, Sub, Mul, Div, Mod,
    Lt, Le, Gt, Ge, Eq, Ne,
    And, Or,
};

enum class UnaryOp { Neg, Not };

// Literal lexemes are kept verbatim so pretty-printing round-trips exactly.
struct IntLit { std::string lexeme; };
struct DoubleLit { std::string lexeme; };
struct BoolLit { bool value = false; };
struct StringLit { std::string lexeme; }; // raw source between the quotes
struct VarRef { std::string name; };
struct IndexExpr { std::string array; ExprPtr index; };
struct ArrayLen { std::string array; };
struct UnaryExpr { UnaryOp op; ExprPtr operand; };
struct BinaryExpr { BinaryOp op; ExprPtr lhs; ExprPtr rhs; };
struct CallExpr {
    std::string qualifier; // empty for unqualified calls
    std::string name;
    std::vector<ExprPtr> args;
};

struct Expr {
    Span span;
    std::variant<IntLit, DoubleLit, BoolLit, StringLit, VarRef, IndexExpr,
                 ArrayLen, UnaryExpr, BinaryExpr, CallExpr> node;
};

struct TypeName {
    std::string base;   // int, double, boolean, String, void
    int array_dims = 0; // int[] -> 1
    friend bool operator==(const TypeName&, const TypeName&) = default;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

enum class AssignOp { Set, Add, Sub, Mul, Div, Mod }; // =, +=, -=, *=, /=, %=

/// Assignment target: a variable, or one array element (`a[i] = ...`).
struct LValue {
    std::string name;
    ExprPtr index; // null for plain variables
    Span span;
};

struct VarDeclStmt { TypeName type; std::string name; std::optional<Expr> init; };
struct AssignStmt { AssignOp op; LValue target; Expr value; };
struct IncDecStmt { std::string name; bool increment = true; bool prefix = false; };
struct IfStmt { Expr cond; StmtPtr then_branch; StmtPtr else_branch; };
struct WhileStmt { Expr cond; StmtPtr body; };

/// All three for-header clauses are mandatory; degenerate headers are
/// rejected at parse time so the loop always maps to init/cond/update nodes.
struct ForStmt {
    StmtPtr init;   // VarDeclStmt or AssignStmt
    Expr cond;
    StmtPtr update; // AssignStmt or IncDecStmt
    StmtPtr body;
};

struct CallStmtNode { CallExpr call; Span call_span; };
struct ReturnStmt { std::optional<Expr> value; };
struct BlockStmt { std::vector<StmtPtr> statements; };

struct Stmt {
    Span span;
    std::variant<VarDeclStmt, AssignStmt, IncDecStmt, IfStmt, WhileStmt,
                 ForStmt, CallStmtNode, ReturnStmt, BlockStmt> node;
};

struct Param {
    TypeName type;
    std::string name;
    Span span;
};

struct MethodDecl {
    TypeName return_type;
    std::string name;
    std::vector<Param> params;
    std::vector<StmtPtr> body;
    Span span;
};

struct CompilationUnit {
    std::vector<MethodDecl> methods;
    std::optional<std::string> class_name; // wrapper is parsed and discarded
};

/// Canonical source form; parse(pretty_print(u)) is structurally equal to u.
std::string pretty_print(const CompilationUnit& unit);
std::string pretty_print(const Expr& expr);

/// Structural equality, ignoring spans.
bool structurally_equal(const CompilationUnit& a, const CompilationUnit& b);

/// Number of Stmt nodes in a method body, nested statements and blocks
/// included.
int statement_count(const MethodDecl& method);

const char* to_string(BinaryOp op);
const char* to_string(AssignOp op);

} // namespace slicecov
