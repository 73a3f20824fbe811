#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slicecov/cohesion.hpp"
#include "slicecov/source.hpp"

namespace slicecov {

/// One recorded snapshot of a program under construction.
struct VersionEvent {
    long long seq = 0;
    long long ts_ms = -1; // -1 when the stream carries no timestamps
    SourceText source;
};

struct IngestResult {
    std::vector<VersionEvent> events; // sorted by seq
    std::vector<std::string> warnings;
};

/// Reads a version stream: either a directory of NNNN.mj files (lexicographic
/// order is sequence order) or a .jsonl file with one
/// {"seq":int,"ts_ms":int,"source":string} event per line. Malformed lines
/// are reported with their line number and skipped. Throws std::runtime_error
/// for an unreadable path or a stream with zero parseable events.
IngestResult ingest(const std::filesystem::path& path);

/// Keeps compilable versions, then drops versions byte-identical to their
/// kept predecessor. Idempotent.
std::vector<VersionEvent> compile_filter(const std::vector<VersionEvent>& events);

struct TracePoint {
    int version_index = 0; // position in the compilable subsequence
    int method_length = 0;
    std::vector<std::pair<std::string, Rational>> coverage; // declaration order
    Rational intersection_ratio;
};

struct MetricTrace {
    std::string method;
    std::vector<TracePoint> points;
    std::vector<std::string> warnings;
};

/// Per-version cohesion series over an already-filtered compilable sequence.
/// Point k carries exactly the values analyze() yields on version k alone.
/// Without `method`, every version must contain exactly one method.
MetricTrace compute_trace(const std::vector<VersionEvent>& versions,
                          const std::optional<std::string>& method = std::nullopt);

/// Long-format CSV: header version_index,method,kind,name,value with kind in
/// {coverage, intersection, method_length}; LF endings; rows ordered by
/// version, then kind, then declaration order.
std::string emit_csv(const MetricTrace& trace);

std::string trace_to_json_string(const MetricTrace& trace);

/// Deterministic SVG: one polyline per variable plus one for the method
/// slice intersection, markers on every point, value axis 0..1. Throws
/// std::invalid_argument for an empty trace.
std::string render_svg(const MetricTrace& trace);

} // namespace slicecov
