#pragma once

#include <string>
#include <vector>

namespace slicecov {

/// A program version as fed to the frontend. `origin` is a file path or a
/// sequence index label, used only for diagnostics.
struct SourceText {
    std::string content;
    std::string origin;
};

/// Half-open source range, 1-based line/column.
struct Span {
    int line = 0;
    int col = 0;
    int end_line = 0;
    int end_col = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    Span span;
    std::string message;
};

using DiagnosticList = std::vector<Diagnostic>;

std::string format_diagnostic(const Diagnostic& d, const std::string& origin);

} // namespace slicecov
