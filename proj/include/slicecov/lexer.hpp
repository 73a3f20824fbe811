#pragma once

#include <string>
#include <vector>

#include "slicecov/source.hpp"

namespace slicecov {

enum class TokenKind {
    Identifier,
    IntLiteral,
    DoubleLiteral,
    StringLiteral,
    // keywords
    KwClass, KwVoid, KwInt, KwDouble, KwBoolean, KwString,
    KwIf, KwElse, KwWhile, KwFor, KwReturn, KwTrue, KwFalse,
    KwPublic, KwPrivate, KwStatic, // modifiers, accepted and ignored
    // punctuation / operators
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Semicolon, Comma, Dot,
    Assign, PlusAssign, MinusAssign, StarAssign, SlashAssign, PercentAssign,
    PlusPlus, MinusMinus,
    Plus, Minus, Star, Slash, Percent,
    Lt, Le, Gt, Ge, EqEq, NotEq,
    AndAnd, OrOr, Not,
    EndOfFile,
};

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string text;
    Span span;
};

struct LexResult {
    std::vector<Token> tokens; // always terminated by EndOfFile
    DiagnosticList diagnostics;
};

LexResult lex(const SourceText& src);

const char* to_string(TokenKind kind);

} // namespace slicecov
