#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

#include "slicecov/trace.hpp"
#include "test_common.hpp"

using namespace slicecov;
using namespace slicecov::testsupport;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("slicecov_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

VersionEvent event(long long seq, const std::string& source) {
    return {seq, -1, {source, "seq-" + std::to_string(seq)}};
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) break;
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

} // namespace

TEST_CASE("ingests a directory of numbered snapshots") {
    TempDir dir;
    write(dir.path / "0000.mj", "void f(){}\n");
    write(dir.path / "0001.mj", "void f(){ int a = 0; }\n");
    IngestResult result = ingest(dir.path);
    REQUIRE(result.events.size() == 2);
    CHECK(result.events[0].seq == 0);
    CHECK(result.events[1].seq == 1);
    CHECK(result.events[1].source.content == "void f(){ int a = 0; }\n");
    CHECK(result.warnings.empty());
}

TEST_CASE("ingests jsonl and skips malformed lines with a warning") {
    TempDir dir;
    fs::path file = dir.path / "events.jsonl";
    write(file,
          "{\"seq\": 0, \"ts_ms\": 1, \"source\": \"void f(){}\"}\n"
          "{\"seq\": 1, \"ts_ms\": 2, \"source\": \"void f(){ int a = 0; }\"}\n"
          "{not json at all\n"
          "{\"seq\": 2, \"ts_ms\": 3, \"source\": \"void f(){ int a = 1; }\"}\n"
          "{\"seq\": 3, \"ts_ms\": 4, \"source\": \"void f(){ int a = 2; }\"}\n");
    IngestResult result = ingest(file);
    CHECK(result.events.size() == 4);
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("line 3") != std::string::npos);
}

TEST_CASE("ingest fails for unreadable paths and empty streams") {
    CHECK_THROWS_AS(ingest("no/such/path.jsonl"), std::runtime_error);
    TempDir dir;
    fs::path file = dir.path / "bad.jsonl";
    write(file, "{broken\n{also broken\n");
    CHECK_THROWS_AS(ingest(file), std::runtime_error);
}

TEST_CASE("compile filter keeps compilable versions and drops byte-identical repeats") {
    std::vector<VersionEvent> events{
        event(0, "void f(){ int a = 0; }"),
        event(1, "void f(){ int a = "), // broken
        event(2, "void f(){ int a = 1; }"),
        event(3, "void f(){ int a = 1; }"), // identical to its kept predecessor
        event(4, "void f(){ int a = 2; }"),
    };
    std::vector<VersionEvent> kept = compile_filter(events);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].seq == 0);
    CHECK(kept[1].seq == 2);
    CHECK(kept[2].seq == 4);

    // idempotence
    std::vector<VersionEvent> again = compile_filter(kept);
    REQUIRE(again.size() == kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
        CHECK(again[i].source.content == kept[i].source.content);
}

TEST_CASE("professional construction sequence ends in the recorded end version") {
    IngestResult result = ingest(fixture_path("trace_professional.jsonl"));
    CHECK(result.events.size() == 12);
    CHECK(result.events.back().source.content == read_fixture("professional.mj"));

    std::vector<VersionEvent> kept = compile_filter(result.events);
    CHECK(kept.size() == 9); // three broken drafts injected

    MetricTrace trace = compute_trace(kept);
    CHECK(trace.method == "convertBinArr");
    REQUIRE(trace.points.size() == 9);
    CHECK(trace.points.back().intersection_ratio == Rational(8, 9));
}

TEST_CASE("undergraduate construction sequence stays non-cohesive") {
    std::vector<VersionEvent> kept =
        compile_filter(ingest(fixture_path("trace_undergrad.jsonl")).events);
    CHECK(kept.size() == 8);
    MetricTrace trace = compute_trace(kept);
    REQUIRE(!trace.points.empty());
    CHECK(trace.points.back().intersection_ratio == Rational(0, 1));
    int zeros = 0;
    for (const TracePoint& p : trace.points)
        if (p.intersection_ratio == Rational(0, 1)) ++zeros;
    CHECK(zeros * 2 > static_cast<int>(trace.points.size())); // zero at most points
}

TEST_CASE("a single-version trace equals the standalone analysis") {
    std::vector<VersionEvent> versions{event(0, read_fixture("professional.mj"))};
    MetricTrace trace = compute_trace(versions);
    REQUIRE(trace.points.size() == 1);
    ResolvedProgram program = load_fixture("professional.mj");
    CohesionReport report = analyze(program)[0];
    const TracePoint& p = trace.points[0];
    CHECK(p.method_length == report.method_length);
    CHECK(p.intersection_ratio == report.intersection_ratio);
    REQUIRE(p.coverage.size() == report.variables.size());
    for (std::size_t i = 0; i < p.coverage.size(); ++i) {
        CHECK(p.coverage[i].first == report.variables[i].name);
        CHECK(p.coverage[i].second == *report.variables[i].coverage);
    }
}

TEST_CASE("multi-method versions require an explicit method name") {
    std::vector<VersionEvent> versions{event(0, "void f(){} void g(){}")};
    CHECK_THROWS_AS(compute_trace(versions), std::invalid_argument);
    MetricTrace trace = compute_trace(versions, std::string("g"));
    CHECK(trace.points.size() == 1);
}

TEST_CASE("a method that never appears yields an empty trace with a warning") {
    std::vector<VersionEvent> versions{event(0, "void f(){ int a = 0; }")};
    MetricTrace trace = compute_trace(versions, std::string("h"));
    CHECK(trace.points.empty());
    CHECK(!trace.warnings.empty());
}

TEST_CASE("csv uses the long format with deterministic row order") {
    std::vector<VersionEvent> versions{event(0, "void f(){ int a = 0; int b = 2; }")};
    MetricTrace trace = compute_trace(versions);
    std::string csv = emit_csv(trace);
    std::vector<std::string> lines = csv_lines(csv);
    REQUIRE(lines.size() == 5); // header + 2 coverage + intersection + length
    CHECK(lines[0] == "version_index,method,kind,name,value");
    CHECK(lines[1] == "0,f,coverage,a,0.50");
    CHECK(lines[2] == "0,f,coverage,b,0.50");
    CHECK(lines[3] == "0,f,intersection,,0.00");
    CHECK(lines[4] == "0,f,method_length,,2");
}

TEST_CASE("empty traces emit only the csv header") {
    MetricTrace trace;
    trace.method = "f";
    CHECK(emit_csv(trace) == "version_index,method,kind,name,value\n");
}

TEST_CASE("csv re-parses to the exact trace values") {
    std::vector<VersionEvent> kept =
        compile_filter(ingest(fixture_path("trace_professional.jsonl")).events);
    MetricTrace trace = compute_trace(kept);
    std::string csv = emit_csv(trace);
    std::vector<std::string> lines = csv_lines(csv);
    REQUIRE(!lines.empty());

    std::size_t row = 1;
    for (const TracePoint& p : trace.points) {
        std::string prefix = std::to_string(p.version_index) + "," + trace.method + ",";
        for (const auto& [name, value] : p.coverage) {
            REQUIRE(row < lines.size());
            CHECK(lines[row++] == prefix + "coverage," + name + "," + value.to_decimal_string(2));
        }
        CHECK(lines[row++] == prefix + "intersection,," + p.intersection_ratio.to_decimal_string(2));
        CHECK(lines[row++] == prefix + "method_length,," + std::to_string(p.method_length));
    }
    CHECK(row == lines.size());

    // and the final intersection row carries the end-version value
    CHECK(lines[lines.size() - 2].find(",intersection,,0.89") != std::string::npos);
}

TEST_CASE("trace json serializes exact rationals") {
    std::vector<VersionEvent> kept =
        compile_filter(ingest(fixture_path("trace_professional.jsonl")).events);
    MetricTrace trace = compute_trace(kept);
    nlohmann::json j = nlohmann::json::parse(trace_to_json_string(trace));
    REQUIRE(j.is_array());
    CHECK(j.back()["intersection"]["rational"] == "8/9");
    CHECK(j.back()["method_length"] == 9);
    CHECK(j[0]["version_index"] == 0);
}

TEST_CASE("svg plots the intersection at the documented height") {
    std::vector<VersionEvent> kept =
        compile_filter(ingest(fixture_path("trace_professional.jsonl")).events);
    MetricTrace trace = compute_trace(kept);
    std::string svg = render_svg(trace);

    // read the value axis from the tick marks
    std::regex tick_re("<line class=\"ytick\" data-value=\"([0-9.]+)\" x1=\"[0-9.]+\" "
                       "y1=\"([0-9.]+)\"");
    double y0 = -1, y1 = -1;
    for (std::sregex_iterator it(svg.begin(), svg.end(), tick_re), end; it != end; ++it) {
        if ((*it)[1] == "0.00") y0 = std::stod((*it)[2]);
        if ((*it)[1] == "1.00") y1 = std::stod((*it)[2]);
    }
    REQUIRE(y0 > 0);
    REQUIRE(y1 > 0);

    std::regex line_re("<polyline class=\"series\" data-name=\"intersection\"[^>]*points=\"([^\"]+)\"");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, line_re));
    std::string points = m[1];
    std::size_t last_comma = points.rfind(',');
    double final_y = std::stod(points.substr(last_comma + 1));
    double expected = y0 + (8.0 / 9.0) * (y1 - y0);
    CHECK(final_y == doctest::Approx(expected).epsilon(0.001));
}

TEST_CASE("a one-point trace renders markers without line segments") {
    std::vector<VersionEvent> versions{event(0, "void f(){ int a = 0; }")};
    MetricTrace trace = compute_trace(versions);
    std::string svg = render_svg(trace);
    CHECK(svg.find("<polyline class=\"series\"") == std::string::npos);
    CHECK(svg.find("<circle class=\"marker\"") != std::string::npos);
}

TEST_CASE("a renamed variable becomes a separate series") {
    std::vector<VersionEvent> versions{
        event(0, "void f(){ int x = 0; out.println(x); }"),
        event(1, "void f(){ int x = 1; out.println(x); }"),
        event(2, "void f(){ int y = 1; out.println(y); }"),
        event(3, "void f(){ int y = 2; out.println(y); }"),
    };
    MetricTrace trace = compute_trace(versions);
    std::string svg = render_svg(trace);
    std::regex series_re("<polyline class=\"series\" data-name=\"([a-z]+)\"");
    std::set<std::string> names;
    for (std::sregex_iterator it(svg.begin(), svg.end(), series_re), end; it != end; ++it)
        names.insert((*it)[1]);
    CHECK(names == std::set<std::string>{"x", "y", "intersection"});
}

TEST_CASE("plotting an empty trace fails") {
    MetricTrace trace;
    CHECK_THROWS_AS(render_svg(trace), std::invalid_argument);
}
