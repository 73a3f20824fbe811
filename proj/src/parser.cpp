#include "slicecov/parser.hpp"

#include <utility>

#include "slicecov/lexer.hpp"

namespace slicecov {

namespace {

// Unwinds to parse() on the first syntax error.
struct ParseAbort {};

class Parser {
public:
    Parser(std::vector<Token> tokens, DiagnosticList& diags)
        : tokens_(std::move(tokens)), diags_(diags) {}

    CompilationUnit parse_unit() {
        CompilationUnit unit;
        skip_modifiers();
        if (check(TokenKind::KwClass)) {
            advance();
            unit.class_name = expect(TokenKind::Identifier, "class name").text;
            expect(TokenKind::LBrace, "'{' after class name");
            while (!check(TokenKind::RBrace) && !check(TokenKind::EndOfFile))
                unit.methods.push_back(parse_method());
            expect(TokenKind::RBrace, "'}' closing class body");
        } else {
            while (!check(TokenKind::EndOfFile)) unit.methods.push_back(parse_method());
        }
        expect(TokenKind::EndOfFile, "end of input");
        if (unit.methods.empty()) error(peek().span, "expected at least one method");
        return unit;
    }

private:
    // -- token helpers -------------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool check(TokenKind kind) const { return peek().kind == kind; }
    const Token& advance() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool match(TokenKind kind) {
        if (!check(kind)) return false;
        advance();
        return true;
    }
    const Token& expect(TokenKind kind, const std::string& what) {
        if (!check(kind))
            error(peek().span, "expected " + what + ", found " + describe(peek()));
        return advance();
    }
    [[noreturn]] void error(const Span& span, const std::string& message) {
        diags_.push_back({Diagnostic::Severity::Error, span, message});
        throw ParseAbort{};
    }
    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::Identifier) return "identifier '" + t.text + "'";
        return to_string(t.kind);
    }
    void skip_modifiers() {
        while (check(TokenKind::KwPublic) || check(TokenKind::KwPrivate) ||
               check(TokenKind::KwStatic))
            advance();
    }

    static Span merge(const Span& a, const Span& b) {
        return {a.line, a.col, b.end_line, b.end_col};
    }

    // -- declarations --------------------------------------------------------

    bool at_type() const {
        switch (peek().kind) {
            case TokenKind::KwVoid:
            case TokenKind::KwInt:
            case TokenKind::KwDouble:
            case TokenKind::KwBoolean:
            case TokenKind::KwString:
                return true;
            default:
                return false;
        }
    }

    TypeName parse_type() {
        if (!at_type()) error(peek().span, "expected a type, found " + describe(peek()));
        TypeName type;
        type.base = advance().text;
        while (check(TokenKind::LBracket) && peek(1).kind == TokenKind::RBracket) {
            advance();
            advance();
            ++type.array_dims;
        }
        return type;
    }

    MethodDecl parse_method() {
        skip_modifiers();
        MethodDecl method;
        Span start = peek().span;
        method.return_type = parse_type();
        method.name = expect(TokenKind::Identifier, "method name").text;
        expect(TokenKind::LParen, "'(' after method name");
        if (!check(TokenKind::RParen)) {
            do {
                Param p;
                Span pstart = peek().span;
                p.type = parse_type();
                const Token& name = expect(TokenKind::Identifier, "parameter name");
                p.name = name.text;
                p.span = merge(pstart, name.span);
                method.params.push_back(std::move(p));
            } while (match(TokenKind::Comma));
        }
        expect(TokenKind::RParen, "')' after parameters");
        const Token& open = expect(TokenKind::LBrace, "'{' starting method body");
        while (!check(TokenKind::RBrace) && !check(TokenKind::EndOfFile))
            method.body.push_back(parse_statement());
        const Token& close = expect(TokenKind::RBrace, "'}' closing method body");
        method.span = merge(start, close.span);
        (void)open;
        return method;
    }

    // -- statements ----------------------------------------------------------

    StmtPtr parse_statement() {
        if (at_type()) return parse_var_decl();
        switch (peek().kind) {
            case TokenKind::LBrace: return parse_block();
            case TokenKind::KwIf: return parse_if();
            case TokenKind::KwWhile: return parse_while();
            case TokenKind::KwFor: return parse_for();
            case TokenKind::KwReturn: return parse_return();
            case TokenKind::PlusPlus:
            case TokenKind::MinusMinus: {
                StmtPtr stmt = parse_incdec_prefix();
                finish_simple(*stmt);
                return stmt;
            }
            case TokenKind::Identifier: {
                StmtPtr stmt = parse_assign_call_or_incdec();
                finish_simple(*stmt);
                return stmt;
            }
            default:
                error(peek().span, "expected a statement, found " + describe(peek()));
        }
    }

    void finish_simple(Stmt& stmt) {
        const Token& semi = expect(TokenKind::Semicolon, "';' after statement");
        stmt.span = merge(stmt.span, semi.span);
    }

    StmtPtr parse_var_decl() {
        Span start = peek().span;
        VarDeclStmt decl;
        decl.type = parse_type();
        if (decl.type.base == "void")
            error(start, "'void' is not a variable type");
        const Token& name = expect(TokenKind::Identifier, "variable name");
        decl.name = name.text;
        Span end = name.span;
        if (match(TokenKind::Assign)) {
            decl.init = parse_expr();
            end = decl.init->span;
        }
        auto stmt = std::make_unique<Stmt>(Stmt{merge(start, end), std::move(decl)});
        finish_simple(*stmt);
        return stmt;
    }

    // Declaration or assignment without the trailing ';' (for-header init).
    StmtPtr parse_for_init() {
        Span start = peek().span;
        if (at_type()) {
            VarDeclStmt decl;
            decl.type = parse_type();
            if (decl.type.base == "void") error(start, "'void' is not a variable type");
            const Token& name = expect(TokenKind::Identifier, "variable name");
            decl.name = name.text;
            expect(TokenKind::Assign, "'=' in for-loop initializer");
            decl.init = parse_expr();
            Span end = decl.init->span;
            return std::make_unique<Stmt>(Stmt{merge(start, end), std::move(decl)});
        }
        if (check(TokenKind::Identifier)) {
            StmtPtr stmt = parse_assign_call_or_incdec();
            if (!std::holds_alternative<AssignStmt>(stmt->node))
                error(stmt->span, "for-loop initializer must declare or assign a variable");
            return stmt;
        }
        error(peek().span, "for-loop initializer is required");
    }

    StmtPtr parse_for_update() {
        Span start = peek().span;
        if (check(TokenKind::PlusPlus) || check(TokenKind::MinusMinus))
            return parse_incdec_prefix();
        if (check(TokenKind::Identifier)) {
            StmtPtr stmt = parse_assign_call_or_incdec();
            if (std::holds_alternative<CallStmtNode>(stmt->node))
                error(stmt->span, "for-loop update must assign a variable");
            return stmt;
        }
        error(start, "for-loop update is required");
    }

    StmtPtr parse_incdec_prefix() {
        Span start = peek().span;
        bool increment = advance().kind == TokenKind::PlusPlus;
        const Token& name = expect(TokenKind::Identifier, "variable after prefix operator");
        return std::make_unique<Stmt>(
            Stmt{merge(start, name.span), IncDecStmt{name.text, increment, true}});
    }

    // identifier ... : assignment (plain or indexed), postfix ++/--, or call.
    StmtPtr parse_assign_call_or_incdec() {
        const Token& name = advance();
        Span start = name.span;

        if (check(TokenKind::PlusPlus) || check(TokenKind::MinusMinus)) {
            bool increment = advance().kind == TokenKind::PlusPlus;
            return std::make_unique<Stmt>(
                Stmt{merge(start, tokens_[pos_ - 1].span), IncDecStmt{name.text, increment, false}});
        }
        if (check(TokenKind::LParen)) {
            CallExpr call = parse_call_args("", name.text);
            Span span = merge(start, tokens_[pos_ - 1].span);
            return std::make_unique<Stmt>(Stmt{span, CallStmtNode{std::move(call), span}});
        }
        if (check(TokenKind::Dot)) {
            advance();
            const Token& member = expect(TokenKind::Identifier, "method name after '.'");
            CallExpr call = parse_call_args(name.text, member.text);
            Span span = merge(start, tokens_[pos_ - 1].span);
            return std::make_unique<Stmt>(Stmt{span, CallStmtNode{std::move(call), span}});
        }

        LValue target;
        target.name = name.text;
        target.span = name.span;
        if (match(TokenKind::LBracket)) {
            Expr idx = parse_expr();
            const Token& rb = expect(TokenKind::RBracket, "']' after index");
            target.index = std::make_unique<Expr>(std::move(idx));
            target.span = merge(name.span, rb.span);
        }
        AssignOp op;
        switch (peek().kind) {
            case TokenKind::Assign: op = AssignOp::Set; break;
            case TokenKind::PlusAssign: op = AssignOp::Add; break;
            case TokenKind::MinusAssign: op = AssignOp::Sub; break;
            case TokenKind::StarAssign: op = AssignOp::Mul; break;
            case TokenKind::SlashAssign: op = AssignOp::Div; break;
            case TokenKind::PercentAssign: op = AssignOp::Mod; break;
            default:
                error(peek().span, "expected an assignment operator, found " + describe(peek()));
        }
        advance();
        Expr value = parse_expr();
        Span span = merge(start, value.span);
        return std::make_unique<Stmt>(
            Stmt{span, AssignStmt{op, std::move(target), std::move(value)}});
    }

    StmtPtr parse_block() {
        Span start = peek().span;
        expect(TokenKind::LBrace, "'{'");
        BlockStmt block;
        while (!check(TokenKind::RBrace) && !check(TokenKind::EndOfFile))
            block.statements.push_back(parse_statement());
        const Token& close = expect(TokenKind::RBrace, "'}'");
        return std::make_unique<Stmt>(Stmt{merge(start, close.span), std::move(block)});
    }

    StmtPtr parse_if() {
        Span start = advance().span; // if
        expect(TokenKind::LParen, "'(' after 'if'");
        Expr cond = parse_expr();
        expect(TokenKind::RParen, "')' after condition");
        StmtPtr then_branch = parse_statement();
        StmtPtr else_branch;
        Span end = then_branch->span;
        if (match(TokenKind::KwElse)) {
            else_branch = parse_statement();
            end = else_branch->span;
        }
        return std::make_unique<Stmt>(Stmt{
            merge(start, end),
            IfStmt{std::move(cond), std::move(then_branch), std::move(else_branch)}});
    }

    StmtPtr parse_while() {
        Span start = advance().span; // while
        expect(TokenKind::LParen, "'(' after 'while'");
        Expr cond = parse_expr();
        expect(TokenKind::RParen, "')' after condition");
        StmtPtr body = parse_statement();
        Span end = body->span;
        return std::make_unique<Stmt>(
            Stmt{merge(start, end), WhileStmt{std::move(cond), std::move(body)}});
    }

    StmtPtr parse_for() {
        Span start = advance().span; // for
        expect(TokenKind::LParen, "'(' after 'for'");
        StmtPtr init = parse_for_init();
        expect(TokenKind::Semicolon, "';' after for-loop initializer");
        if (check(TokenKind::Semicolon))
            error(peek().span, "for-loop condition is required");
        Expr cond = parse_expr();
        expect(TokenKind::Semicolon, "';' after for-loop condition");
        if (check(TokenKind::RParen))
            error(peek().span, "for-loop update is required");
        StmtPtr update = parse_for_update();
        expect(TokenKind::RParen, "')' after for-loop header");
        StmtPtr body = parse_statement();
        Span end = body->span;
        return std::make_unique<Stmt>(Stmt{
            merge(start, end),
            ForStmt{std::move(init), std::move(cond), std::move(update), std::move(body)}});
    }

    StmtPtr parse_return() {
        Span start = advance().span; // return
        ReturnStmt ret;
        Span end = start;
        if (!check(TokenKind::Semicolon)) {
            ret.value = parse_expr();
            end = ret.value->span;
        }
        auto stmt = std::make_unique<Stmt>(Stmt{merge(start, end), std::move(ret)});
        finish_simple(*stmt);
        return stmt;
    }

    // -- expressions ---------------------------------------------------------

    Expr parse_expr() { return parse_or(); }

    Expr parse_or() {
        Expr lhs = parse_and();
        while (check(TokenKind::OrOr)) {
            advance();
            Expr rhs = parse_and();
            lhs = make_binary(BinaryOp::Or, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parse_and() {
        Expr lhs = parse_equality();
        while (check(TokenKind::AndAnd)) {
            advance();
            Expr rhs = parse_equality();
            lhs = make_binary(BinaryOp::And, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parse_equality() {
        Expr lhs = parse_relational();
        while (check(TokenKind::EqEq) || check(TokenKind::NotEq)) {
            BinaryOp op = advance().kind == TokenKind::EqEq ? BinaryOp::Eq : BinaryOp::Ne;
            Expr rhs = parse_relational();
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parse_relational() {
        Expr lhs = parse_additive();
        while (true) {
            BinaryOp op;
            switch (peek().kind) {
                case TokenKind::Lt: op = BinaryOp::Lt; break;
                case TokenKind::Le: op = BinaryOp::Le; break;
                case TokenKind::Gt: op = BinaryOp::Gt; break;
                case TokenKind::Ge: op = BinaryOp::Ge; break;
                default: return lhs;
            }
            advance();
            Expr rhs = parse_additive();
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
    }

    Expr parse_additive() {
        Expr lhs = parse_multiplicative();
        while (check(TokenKind::Plus) || check(TokenKind::Minus)) {
            BinaryOp op = advance().kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
            Expr rhs = parse_multiplicative();
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expr parse_multiplicative() {
        Expr lhs = parse_unary();
        while (true) {
            BinaryOp op;
            switch (peek().kind) {
                case TokenKind::Star: op = BinaryOp::Mul; break;
                case TokenKind::Slash: op = BinaryOp::Div; break;
                case TokenKind::Percent: op = BinaryOp::Mod; break;
                default: return lhs;
            }
            advance();
            Expr rhs = parse_unary();
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
    }

    Expr parse_unary() {
        if (check(TokenKind::Minus) || check(TokenKind::Not)) {
            Span start = peek().span;
            UnaryOp op = advance().kind == TokenKind::Minus ? UnaryOp::Neg : UnaryOp::Not;
            Expr operand = parse_unary();
            Span span = merge(start, operand.span);
            return Expr{span, UnaryExpr{op, std::make_unique<Expr>(std::move(operand))}};
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token& tok = peek();
        switch (tok.kind) {
            case TokenKind::IntLiteral: advance(); return Expr{tok.span, IntLit{tok.text}};
            case TokenKind::DoubleLiteral: advance(); return Expr{tok.span, DoubleLit{tok.text}};
            case TokenKind::StringLiteral: advance(); return Expr{tok.span, StringLit{tok.text}};
            case TokenKind::KwTrue: advance(); return Expr{tok.span, BoolLit{true}};
            case TokenKind::KwFalse: advance(); return Expr{tok.span, BoolLit{false}};
            case TokenKind::LParen: {
                advance();
                Expr inner = parse_expr();
                expect(TokenKind::RParen, "')'");
                return inner; // grouping is not materialized
            }
            case TokenKind::Identifier: return parse_identifier_expr();
            default:
                error(tok.span, "expected an expression, found " + describe(tok));
        }
    }

    Expr parse_identifier_expr() {
        const Token& name = advance();
        Span start = name.span;
        if (check(TokenKind::LParen)) {
            CallExpr call = parse_call_args("", name.text);
            return Expr{merge(start, tokens_[pos_ - 1].span), std::move(call)};
        }
        if (check(TokenKind::Dot)) {
            advance();
            const Token& member = expect(TokenKind::Identifier, "member name after '.'");
            if (member.text == "length" && !check(TokenKind::LParen))
                return Expr{merge(start, member.span), ArrayLen{name.text}};
            CallExpr call = parse_call_args(name.text, member.text);
            return Expr{merge(start, tokens_[pos_ - 1].span), std::move(call)};
        }
        if (check(TokenKind::LBracket)) {
            advance();
            Expr idx = parse_expr();
            const Token& rb = expect(TokenKind::RBracket, "']' after index");
            return Expr{merge(start, rb.span),
                        IndexExpr{name.text, std::make_unique<Expr>(std::move(idx))}};
        }
        return Expr{start, VarRef{name.text}};
    }

    CallExpr parse_call_args(std::string qualifier, std::string name) {
        CallExpr call;
        call.qualifier = std::move(qualifier);
        call.name = std::move(name);
        expect(TokenKind::LParen, "'(' starting argument list");
        if (!check(TokenKind::RParen)) {
            do {
                call.args.push_back(std::make_unique<Expr>(parse_expr()));
            } while (match(TokenKind::Comma));
        }
        expect(TokenKind::RParen, "')' closing argument list");
        return call;
    }

    Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
        Span span = merge(lhs.span, rhs.span);
        return Expr{span, BinaryExpr{op, std::make_unique<Expr>(std::move(lhs)),
                                     std::make_unique<Expr>(std::move(rhs))}};
    }

    std::vector<Token> tokens_;
    DiagnosticList& diags_;
    std::size_t pos_ = 0;
};

} // namespace

ParseResult parse(const SourceText& src) {
    ParseResult result;
    LexResult lexed = lex(src);
    if (!lexed.diagnostics.empty()) {
        result.diagnostics = std::move(lexed.diagnostics);
        return result;
    }
    Parser parser(std::move(lexed.tokens), result.diagnostics);
    try {
        result.unit = parser.parse_unit();
    } catch (const ParseAbort&) {
        result.unit.reset();
    }
    return result;
}

} // namespace slicecov
