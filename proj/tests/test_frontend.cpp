#include <doctest.h>

#include <algorithm>

#include "slicecov/parser.hpp"
#include "slicecov/resolve.hpp"
#include "test_common.hpp"

using namespace slicecov;
using namespace slicecov::testsupport;

namespace {

int line_count(const std::string& text) {
    return static_cast<int>(std::count(text.begin(), text.end(), '\n')) + 1;
}

void check_expr_spans(const Expr& e, int lines);

void check_span(const Span& span, int lines) {
    CHECK(span.line >= 1);
    CHECK(span.line <= lines);
    CHECK(span.end_line <= lines + 1);
    CHECK(span.col >= 1);
}

void check_stmt_spans(const Stmt& stmt, int lines) {
    check_span(stmt.span, lines);
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, VarDeclStmt>) {
                if (node.init) check_expr_spans(*node.init, lines);
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
                if (node.target.index) check_expr_spans(*node.target.index, lines);
                check_expr_spans(node.value, lines);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                check_expr_spans(node.cond, lines);
                check_stmt_spans(*node.then_branch, lines);
                if (node.else_branch) check_stmt_spans(*node.else_branch, lines);
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                check_expr_spans(node.cond, lines);
                check_stmt_spans(*node.body, lines);
            } else if constexpr (std::is_same_v<T, ForStmt>) {
                check_stmt_spans(*node.init, lines);
                check_expr_spans(node.cond, lines);
                check_stmt_spans(*node.update, lines);
                check_stmt_spans(*node.body, lines);
            } else if constexpr (std::is_same_v<T, CallStmtNode>) {
                for (const ExprPtr& a : node.call.args) check_expr_spans(*a, lines);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                if (node.value) check_expr_spans(*node.value, lines);
            } else if constexpr (std::is_same_v<T, BlockStmt>) {
                for (const StmtPtr& s : node.statements) check_stmt_spans(*s, lines);
            }
        },
        stmt.node);
}

void check_expr_spans(const Expr& e, int lines) {
    check_span(e.span, lines);
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IndexExpr>) check_expr_spans(*node.index, lines);
            else if constexpr (std::is_same_v<T, UnaryExpr>) check_expr_spans(*node.operand, lines);
            else if constexpr (std::is_same_v<T, BinaryExpr>) {
                check_expr_spans(*node.lhs, lines);
                check_expr_spans(*node.rhs, lines);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                for (const ExprPtr& a : node.args) check_expr_spans(*a, lines);
            }
        },
        e.node);
}

} // namespace

TEST_CASE("parses the professional fixture") {
    std::string src = read_fixture("professional.mj");
    ParseResult result = parse({src, "professional.mj"});
    REQUIRE(result.unit.has_value());
    REQUIRE(result.unit->methods.size() == 1);
    const MethodDecl& m = result.unit->methods[0];
    CHECK(m.name == "convertBinArr");
    REQUIRE(m.params.size() == 1);
    CHECK(m.params[0].name == "bN");
    CHECK(m.params[0].type.base == "int");
    CHECK(m.params[0].type.array_dims == 1);
    CHECK(m.body.size() == 5);          // decl, decl, for, print, print
    CHECK(statement_count(m) == 8);     // nested statements and block included
}

TEST_CASE("parses an empty method") {
    ParseResult result = parse({"void f(){}", "t"});
    REQUIRE(result.unit.has_value());
    REQUIRE(result.unit->methods.size() == 1);
    CHECK(result.unit->methods[0].body.empty());
}

TEST_CASE("parses and discards a class wrapper") {
    ParseResult result = parse({"public class Conv { void f() { int a = 0; } }", "t"});
    REQUIRE(result.unit.has_value());
    CHECK(result.unit->class_name == "Conv");
    CHECK(result.unit->methods.size() == 1);
}

TEST_CASE("reports a positioned syntax error and stops") {
    ParseResult result = parse({"void f(){ int x = ; }", "t"});
    CHECK(!result.unit.has_value());
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].span.line == 1);
    CHECK(result.diagnostics[0].span.col > 1);
}

TEST_CASE("reports lexical errors with positions") {
    ParseResult result = parse({"void f(){\n  int a = 1 & 2;\n}", "t"});
    CHECK(!result.unit.has_value());
    REQUIRE(!result.diagnostics.empty());
    CHECK(result.diagnostics[0].span.line == 2);
}

TEST_CASE("rejects degenerate for headers") {
    CHECK(!parse({"void f(){ for (; true; x++) {} }", "t"}).unit.has_value());
    CHECK(!parse({"void f(){ for (int i = 0; ; i++) {} }", "t"}).unit.has_value());
    CHECK(!parse({"void f(){ for (int i = 0; i < 3; ) {} }", "t"}).unit.has_value());
}

TEST_CASE("pretty-print round-trips every fixture") {
    for (const char* name : {"professional.mj", "undergrad.mj", "undergrad_noline3.mj"}) {
        CAPTURE(name);
        ParseResult first = parse({read_fixture(name), name});
        REQUIRE(first.unit.has_value());
        std::string printed = pretty_print(*first.unit);
        ParseResult second = parse({printed, "printed"});
        REQUIRE(second.unit.has_value());
        CHECK(structurally_equal(*first.unit, *second.unit));
    }
}

TEST_CASE("pretty-print round-trips operator nesting") {
    const char* snippets[] = {
        "void f(){ int a = 1 + 2 * 3; }",
        "void f(){ int a = (1 + 2) * 3; }",
        "void f(){ int a = 1 - (2 - 3); }",
        "void f(){ int a = -(1 + 2); }",
        "void f(){ boolean b = !(1 < 2) || 3 >= 4 && true; }",
        "void f(int[] a){ int b = a[1 + 2] + a.length; }",
        "void f(){ int a = 0; a %= hexString(a / 2, \"x\\ny\"); }",
        "void f(){ double d = 2.50; out.println(d, -d); }",
        "void f(){ int a = 0; if (a == 1) a++; else --a; }",
        "void f(){ int a = 0; while (a < 9) { a += 1; return; } }",
        "void f(){ for (int i = 9; i > 0; i -= 2) out.println(i); }",
    };
    for (const char* src : snippets) {
        CAPTURE(src);
        ParseResult first = parse({src, "t"});
        REQUIRE(first.unit.has_value());
        ParseResult second = parse({pretty_print(*first.unit), "printed"});
        REQUIRE(second.unit.has_value());
        CHECK(structurally_equal(*first.unit, *second.unit));
    }
}

TEST_CASE("every AST span stays inside the source bounds") {
    for (const char* name : {"professional.mj", "undergrad.mj", "undergrad_noline3.mj"}) {
        std::string src = read_fixture(name);
        ParseResult result = parse({src, name});
        REQUIRE(result.unit.has_value());
        int lines = line_count(src);
        for (const MethodDecl& m : result.unit->methods)
            for (const StmtPtr& s : m.body) check_stmt_spans(*s, lines);
    }
}

TEST_CASE("resolves the undergraduate fixture's variables") {
    ResolvedProgram program = load_fixture("undergrad.mj");
    const MethodSymbols& symbols = program.methods[0];
    REQUIRE(symbols.variables.size() == 6);
    CHECK(symbols.variables[0].name == "bN");
    CHECK(symbols.variables[0].is_param);
    CHECK(symbols.variables[1].name == "dec");
    CHECK(symbols.variables[2].name == "hex");
    CHECK(symbols.variables[3].name == "hD1");
    CHECK(symbols.variables[4].name == "hD2");
    CHECK(symbols.variables[5].name == "i");
    CHECK(!symbols.variables[5].is_param);
}

TEST_CASE("classifies call targets") {
    ResolvedProgram program = load_fixture("undergrad.mj");
    const auto& calls = program.methods[0].calls;
    auto find = [&](const std::string& name) -> const CallKind* {
        for (const auto& [n, k] : calls)
            if (n == name) return &k;
        return nullptr;
    };
    REQUIRE(find("Math.pow"));
    CHECK(*find("Math.pow") == CallKind::Builtin);
    REQUIRE(find("hexString"));
    CHECK(*find("hexString") == CallKind::Opaque);
    REQUIRE(find("out.println"));
    CHECK(*find("out.println") == CallKind::Output);
}

TEST_CASE("rejects duplicate declarations in the same method") {
    ParseResult parsed = parse({"void f(){ int a = 0; int a = 1; }", "t"});
    REQUIRE(parsed.unit.has_value());
    ResolveResult result = resolve(std::move(*parsed.unit));
    CHECK(!result.program.has_value());
    REQUIRE(!result.diagnostics.empty());
    CHECK(result.diagnostics[0].message.find("duplicate") != std::string::npos);
}

TEST_CASE("rejects shadowing in a nested scope") {
    ParseResult parsed = parse({"void f(){ int a = 0; if (a < 1) { int a = 2; } }", "t"});
    REQUIRE(parsed.unit.has_value());
    CHECK(!resolve(std::move(*parsed.unit)).program.has_value());
}

TEST_CASE("rejects unresolved variables") {
    ParseResult parsed = parse({"void f(){ x = 1; }", "t"});
    REQUIRE(parsed.unit.has_value());
    ResolveResult result = resolve(std::move(*parsed.unit));
    CHECK(!result.program.has_value());
    REQUIRE(!result.diagnostics.empty());
    CHECK(result.diagnostics[0].message.find("unresolved") != std::string::npos);
}

TEST_CASE("rejects use before declaration") {
    ParseResult parsed = parse({"void f(){ a = 1; int a = 0; }", "t"});
    REQUIRE(parsed.unit.has_value());
    CHECK(!resolve(std::move(*parsed.unit)).program.has_value());
}

TEST_CASE("rejects duplicate parameters") {
    ParseResult parsed = parse({"void f(int a, int a){}", "t"});
    REQUIRE(parsed.unit.has_value());
    CHECK(!resolve(std::move(*parsed.unit)).program.has_value());
}

TEST_CASE("loop variables go out of scope after the loop") {
    ParseResult parsed =
        parse({"void f(){ for (int i = 0; i < 3; i++) { } out.println(i); }", "t"});
    REQUIRE(parsed.unit.has_value());
    CHECK(!resolve(std::move(*parsed.unit)).program.has_value());
}

TEST_CASE("accepts unknown helper calls as opaque") {
    CHECK(compilable({"void f(){ int a = 0; a = hexString(a) + Integer.toHexString(a); }", "t"}));
}

TEST_CASE("compilable is a total predicate") {
    CHECK(compilable({read_fixture("professional.mj"), "professional.mj"}));
    CHECK(!compilable({"", "empty"}));

    std::string broken = read_fixture("undergrad.mj");
    broken.erase(broken.find_last_of('}'), 1);
    CHECK(!compilable({broken, "broken"}));

    // deterministic over repeated calls
    for (int i = 0; i < 3; ++i) CHECK(compilable({read_fixture("undergrad.mj"), "u"}));
}
