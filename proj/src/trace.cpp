#include "slicecov/trace.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "slicecov/parser.hpp"

namespace slicecov {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

IngestResult ingest_directory(const std::filesystem::path& dir) {
    IngestResult result;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".mj")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    if (files.empty()) throw std::runtime_error("no .mj files in " + dir.string());

    bool numeric_stems = std::all_of(files.begin(), files.end(), [](const auto& f) {
        std::string stem = f.stem().string();
        return !stem.empty() && std::all_of(stem.begin(), stem.end(),
                                            [](unsigned char c) { return std::isdigit(c); });
    });
    long long index = 0;
    for (const auto& f : files) {
        VersionEvent ev;
        ev.seq = numeric_stems ? std::stoll(f.stem().string()) : index;
        ev.ts_ms = -1;
        ev.source = {read_file(f), f.filename().string()};
        result.events.push_back(std::move(ev));
        ++index;
    }
    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const VersionEvent& a, const VersionEvent& b) { return a.seq < b.seq; });
    return result;
}

IngestResult ingest_jsonl(const std::filesystem::path& file) {
    IngestResult result;
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object() || !j.contains("seq") || !j.contains("source") ||
            !j["seq"].is_number_integer() || !j["source"].is_string()) {
            result.warnings.push_back("line " + std::to_string(line_no) +
                                      ": malformed event, skipped");
            continue;
        }
        VersionEvent ev;
        ev.seq = j["seq"].get<long long>();
        ev.ts_ms = j.contains("ts_ms") && j["ts_ms"].is_number_integer()
                       ? j["ts_ms"].get<long long>()
                       : -1;
        ev.source = {j["source"].get<std::string>(),
                     file.filename().string() + "#" + std::to_string(ev.seq)};
        result.events.push_back(std::move(ev));
    }
    if (result.events.empty())
        throw std::runtime_error("no parseable events in " + file.string());
    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const VersionEvent& a, const VersionEvent& b) { return a.seq < b.seq; });
    return result;
}

json ratio_json(const Rational& r) {
    json j;
    j["rational"] = r.to_rational_string();
    j["decimal"] = std::stod(r.to_decimal_string(2));
    return j;
}

} // namespace

IngestResult ingest(const std::filesystem::path& path) {
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec)) return ingest_directory(path);
    if (std::filesystem::is_regular_file(path, ec)) return ingest_jsonl(path);
    throw std::runtime_error("cannot read " + path.string());
}

std::vector<VersionEvent> compile_filter(const std::vector<VersionEvent>& events) {
    std::vector<VersionEvent> kept;
    for (const VersionEvent& ev : events) {
        if (!compilable(ev.source)) continue;
        if (!kept.empty() && kept.back().source.content == ev.source.content) continue;
        kept.push_back(ev);
    }
    return kept;
}

MetricTrace compute_trace(const std::vector<VersionEvent>& versions,
                          const std::optional<std::string>& method) {
    MetricTrace trace;
    if (method) trace.method = *method;

    int index = -1;
    for (const VersionEvent& ev : versions) {
        ++index;
        ParseResult parsed = parse(ev.source);
        if (!parsed.unit) {
            trace.warnings.push_back("version " + std::to_string(index) +
                                     " (seq " + std::to_string(ev.seq) + ") does not parse; skipped");
            continue;
        }
        ResolveResult resolved = resolve(std::move(*parsed.unit));
        if (!resolved.program) {
            trace.warnings.push_back("version " + std::to_string(index) +
                                     " (seq " + std::to_string(ev.seq) + ") does not resolve; skipped");
            continue;
        }
        const ResolvedProgram& program = *resolved.program;

        std::string target;
        if (method) {
            target = *method;
        } else {
            if (program.unit.methods.size() != 1)
                throw std::invalid_argument(
                    "version with " + std::to_string(program.unit.methods.size()) +
                    " methods; a method name is required");
            target = program.unit.methods.front().name;
            if (trace.method.empty()) trace.method = target;
            else if (trace.method != target)
                throw std::invalid_argument("method name changes across versions ('" +
                                            trace.method + "' vs '" + target +
                                            "'); a method name is required");
        }

        bool present = std::any_of(program.unit.methods.begin(), program.unit.methods.end(),
                                   [&](const MethodDecl& m) { return m.name == target; });
        if (!present) {
            trace.warnings.push_back("version " + std::to_string(index) + " (seq " +
                                     std::to_string(ev.seq) + ") lacks method '" + target + "'");
            continue;
        }

        std::vector<CohesionReport> reports = analyze(program, target);
        const CohesionReport& report = reports.front();
        TracePoint point;
        point.version_index = index;
        point.method_length = report.method_length;
        for (const VariableReport& v : report.variables)
            if (v.coverage) point.coverage.emplace_back(v.name, *v.coverage);
        point.intersection_ratio = report.intersection_ratio;
        trace.points.push_back(std::move(point));
    }
    if (trace.points.empty())
        trace.warnings.push_back("no version contains the requested method; empty trace");
    return trace;
}

std::string emit_csv(const MetricTrace& trace) {
    std::ostringstream out;
    out << "version_index,method,kind,name,value\n";
    for (const TracePoint& p : trace.points) {
        for (const auto& [name, cov] : p.coverage)
            out << p.version_index << "," << trace.method << ",coverage," << name << ","
                << cov.to_decimal_string(2) << "\n";
        out << p.version_index << "," << trace.method << ",intersection,,"
            << p.intersection_ratio.to_decimal_string(2) << "\n";
        out << p.version_index << "," << trace.method << ",method_length,,"
            << p.method_length << "\n";
    }
    return out.str();
}

std::string trace_to_json_string(const MetricTrace& trace) {
    json points = json::array();
    for (const TracePoint& p : trace.points) {
        json jp;
        jp["version_index"] = p.version_index;
        jp["method"] = trace.method;
        jp["method_length"] = p.method_length;
        json cov;
        for (const auto& [name, r] : p.coverage) cov[name] = ratio_json(r);
        jp["coverage"] = cov.is_null() ? json::object() : cov;
        jp["intersection"] = ratio_json(p.intersection_ratio);
        points.push_back(std::move(jp));
    }
    return points.dump(2) + "\n";
}

} // namespace slicecov
