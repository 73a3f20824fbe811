#include "slicecov/lexer.hpp"

#include <cctype>
#include <map>

namespace slicecov {

namespace {

const std::map<std::string, TokenKind> kKeywords = {
    {"class", TokenKind::KwClass},     {"void", TokenKind::KwVoid},
    {"int", TokenKind::KwInt},         {"double", TokenKind::KwDouble},
    {"boolean", TokenKind::KwBoolean}, {"String", TokenKind::KwString},
    {"if", TokenKind::KwIf},           {"else", TokenKind::KwElse},
    {"while", TokenKind::KwWhile},     {"for", TokenKind::KwFor},
    {"return", TokenKind::KwReturn},   {"true", TokenKind::KwTrue},
    {"false", TokenKind::KwFalse},     {"public", TokenKind::KwPublic},
    {"private", TokenKind::KwPrivate}, {"static", TokenKind::KwStatic},
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    LexResult run() {
        LexResult result;
        while (true) {
            skip_trivia();
            if (at_end()) break;
            Token tok = next_token(result.diagnostics);
            if (!result.diagnostics.empty()) {
                result.tokens.push_back(make_eof());
                return result;
            }
            result.tokens.push_back(std::move(tok));
        }
        result.tokens.push_back(make_eof());
        return result;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
        return c;
    }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    Token make_eof() const { return Token{TokenKind::EndOfFile, "", {line_, col_, line_, col_}}; }

    Token next_token(DiagnosticList& diags) {
        int start_line = line_, start_col = col_;
        std::size_t start = pos_;
        char c = advance();

        auto finish = [&](TokenKind kind) {
            return Token{kind, text_.substr(start, pos_ - start),
                         {start_line, start_col, line_, col_}};
        };
        auto error = [&](const std::string& msg) {
            diags.push_back({Diagnostic::Severity::Error,
                             {start_line, start_col, line_, col_}, msg});
            return make_eof();
        };

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
            std::string word = text_.substr(start, pos_ - start);
            auto it = kKeywords.find(word);
            Token tok = finish(it != kKeywords.end() ? it->second : TokenKind::Identifier);
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
            bool is_double = false;
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                is_double = true;
                advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
            }
            return finish(is_double ? TokenKind::DoubleLiteral : TokenKind::IntLiteral);
        }
        if (c == '"') {
            while (!at_end() && peek() != '"' && peek() != '\n') {
                if (peek() == '\\') advance(); // keep escapes verbatim
                if (!at_end()) advance();
            }
            if (at_end() || peek() != '"') return error("unterminated string literal");
            advance();
            Token tok = finish(TokenKind::StringLiteral);
            tok.text = tok.text.substr(1, tok.text.size() - 2); // strip quotes
            return tok;
        }

        switch (c) {
            case '(': return finish(TokenKind::LParen);
            case ')': return finish(TokenKind::RParen);
            case '{': return finish(TokenKind::LBrace);
            case '}': return finish(TokenKind::RBrace);
            case '[': return finish(TokenKind::LBracket);
            case ']': return finish(TokenKind::RBracket);
            case ';': return finish(TokenKind::Semicolon);
            case ',': return finish(TokenKind::Comma);
            case '.': return finish(TokenKind::Dot);
            case '+':
                if (peek() == '+') { advance(); return finish(TokenKind::PlusPlus); }
                if (peek() == '=') { advance(); return finish(TokenKind::PlusAssign); }
                return finish(TokenKind::Plus);
            case '-':
                if (peek() == '-') { advance(); return finish(TokenKind::MinusMinus); }
                if (peek() == '=') { advance(); return finish(TokenKind::MinusAssign); }
                return finish(TokenKind::Minus);
            case '*':
                if (peek() == '=') { advance(); return finish(TokenKind::StarAssign); }
                return finish(TokenKind::Star);
            case '/':
                if (peek() == '=') { advance(); return finish(TokenKind::SlashAssign); }
                return finish(TokenKind::Slash);
            case '%':
                if (peek() == '=') { advance(); return finish(TokenKind::PercentAssign); }
                return finish(TokenKind::Percent);
            case '<':
                if (peek() == '=') { advance(); return finish(TokenKind::Le); }
                return finish(TokenKind::Lt);
            case '>':
                if (peek() == '=') { advance(); return finish(TokenKind::Ge); }
                return finish(TokenKind::Gt);
            case '=':
                if (peek() == '=') { advance(); return finish(TokenKind::EqEq); }
                return finish(TokenKind::Assign);
            case '!':
                if (peek() == '=') { advance(); return finish(TokenKind::NotEq); }
                return finish(TokenKind::Not);
            case '&':
                if (peek() == '&') { advance(); return finish(TokenKind::AndAnd); }
                return error("stray '&'; did you mean '&&'?");
            case '|':
                if (peek() == '|') { advance(); return finish(TokenKind::OrOr); }
                return error("stray '|'; did you mean '||'?");
            default:
                return error(std::string("unexpected character '") + c + "'");
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace

LexResult lex(const SourceText& src) { return Lexer(src.content).run(); }

const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "identifier";
        case TokenKind::IntLiteral: return "integer literal";
        case TokenKind::DoubleLiteral: return "double literal";
        case TokenKind::StringLiteral: return "string literal";
        case TokenKind::KwClass: return "'class'";
        case TokenKind::KwVoid: return "'void'";
        case TokenKind::KwInt: return "'int'";
        case TokenKind::KwDouble: return "'double'";
        case TokenKind::KwBoolean: return "'boolean'";
        case TokenKind::KwString: return "'String'";
        case TokenKind::KwIf: return "'if'";
        case TokenKind::KwElse: return "'else'";
        case TokenKind::KwWhile: return "'while'";
        case TokenKind::KwFor: return "'for'";
        case TokenKind::KwReturn: return "'return'";
        case TokenKind::KwTrue: return "'true'";
        case TokenKind::KwFalse: return "'false'";
        case TokenKind::KwPublic: return "'public'";
        case TokenKind::KwPrivate: return "'private'";
        case TokenKind::KwStatic: return "'static'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Comma: return "','";
        case TokenKind::Dot: return "'.'";
        case TokenKind::Assign: return "'='";
        case TokenKind::PlusAssign: return "'+='";
        case TokenKind::MinusAssign: return "'-='";
        case TokenKind::StarAssign: return "'*='";
        case TokenKind::SlashAssign: return "'/='";
        case TokenKind::PercentAssign: return "'%='";
        case TokenKind::PlusPlus: return "'++'";
        case TokenKind::MinusMinus: return "'--'";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::Percent: return "'%'";
        case TokenKind::Lt: return "'<'";
        case TokenKind::Le: return "'<='";
        case TokenKind::Gt: return "'>'";
        case TokenKind::Ge: return "'>='";
        case TokenKind::EqEq: return "'=='";
        case TokenKind::NotEq: return "'!='";
        case TokenKind::AndAnd: return "'&&'";
        case TokenKind::OrOr: return "'||'";
        case TokenKind::Not: return "'!'";
        case TokenKind::EndOfFile: return "end of input";
    }
    return "?";
}

std::string format_diagnostic(const Diagnostic& d, const std::string& origin) {
    std::string out = origin.empty() ? "" : origin + ":";
    out += std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ": ";
    out += d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ";
    out += d.message;
    return out;
}

} // namespace slicecov
