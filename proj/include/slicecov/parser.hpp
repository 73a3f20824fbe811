#pragma once

#include <optional>

#include "slicecov/ast.hpp"
#include "slicecov/source.hpp"

namespace slicecov {

struct ParseResult {
    std::optional<CompilationUnit> unit; // set iff diagnostics is empty
    DiagnosticList diagnostics;
};

/// Lex and parse. Stops at the first lexical or syntax error; the result
/// then carries at least one positioned diagnostic. Never throws for bad
/// input.
ParseResult parse(const SourceText& src);

} // namespace slicecov
