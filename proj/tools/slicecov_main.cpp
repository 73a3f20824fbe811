// slicecov: slice-based cohesion metrics for mini-Java programs and
// program-construction traces.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "slicecov/cohesion.hpp"
#include "slicecov/parser.hpp"
#include "slicecov/pdg.hpp"
#include "slicecov/slicer.hpp"
#include "slicecov/trace.hpp"

namespace {

using namespace slicecov;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitAnalysis = 1; // diagnostics, unknown method/variable
constexpr int kExitUsage = 2;    // bad flags, unreadable/unwritable files

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SourceText read_source(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return {buf.str(), path};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << content;
    if (!out) throw UsageError("cannot write " + path);
}

ResolvedProgram load_program(const std::string& path) {
    SourceText src = read_source(path);
    ParseResult parsed = parse(src);
    if (!parsed.unit) {
        for (const Diagnostic& d : parsed.diagnostics)
            std::cerr << format_diagnostic(d, src.origin) << "\n";
        throw AnalysisError("parse failed for " + path);
    }
    ResolveResult resolved = resolve(std::move(*parsed.unit));
    if (!resolved.program) {
        for (const Diagnostic& d : resolved.diagnostics)
            std::cerr << format_diagnostic(d, src.origin) << "\n";
        throw AnalysisError("name resolution failed for " + path);
    }
    return std::move(*resolved.program);
}

// --method defaults to the sole method of the file.
std::size_t select_method(const ResolvedProgram& program, const std::optional<std::string>& name) {
    if (name) {
        for (std::size_t i = 0; i < program.unit.methods.size(); ++i)
            if (program.unit.methods[i].name == *name) return i;
        throw AnalysisError("method '" + *name + "' not found");
    }
    if (program.unit.methods.size() == 1) return 0;
    throw AnalysisError("file has " + std::to_string(program.unit.methods.size()) +
                        " methods; pass --method NAME");
}

int run_parse(const std::string& file) {
    SourceText src = read_source(file);
    ParseResult parsed = parse(src);
    if (!parsed.unit) {
        for (const Diagnostic& d : parsed.diagnostics)
            std::cerr << format_diagnostic(d, src.origin) << "\n";
        return kExitAnalysis;
    }
    const CompilationUnit& unit = *parsed.unit;
    std::cout << "parsed " << file << ": " << unit.methods.size()
              << (unit.methods.size() == 1 ? " method" : " methods");
    if (unit.class_name) std::cout << " (class " << *unit.class_name << ")";
    std::cout << "\n";
    for (const MethodDecl& m : unit.methods)
        std::cout << "method " << m.name << " params=" << m.params.size()
                  << " statements=" << statement_count(m) << "\n";
    return kExitOk;
}

int run_pdg(const std::string& file, const std::optional<std::string>& method,
            const std::string& format) {
    ResolvedProgram program = load_program(file);
    std::size_t i = select_method(program, method);
    Pdg pdg = build_pdg(program.unit.methods[i], program.methods[i]);
    std::cout << (format == "json" ? to_json_string(pdg) : to_dot(pdg));
    return kExitOk;
}

void print_nodes_table(const Pdg& pdg, const std::set<int>& nodes) {
    for (int id : nodes) {
        const PdgNode& n = pdg.node(id);
        std::cout << "node " << id << " " << to_string(n.kind) << " line " << n.span.line << "\n";
    }
}

json nodes_json(const Pdg& pdg, const std::set<int>& nodes) {
    json arr = json::array();
    for (int id : nodes) {
        json e;
        e["id"] = id;
        e["line"] = pdg.node(id).span.line;
        arr.push_back(std::move(e));
    }
    return arr;
}

json criterion_json(const Pdg& pdg, const SliceCriterion& c) {
    json j;
    j["node"] = c.node;
    j["line"] = c.node == kEntryNode ? 0 : pdg.node(c.node).span.line;
    return j;
}

std::string criterion_text(const Pdg& pdg, const SliceCriterion& c) {
    if (c.node == kEntryNode) return "entry";
    return "node " + std::to_string(c.node) + " (line " +
           std::to_string(pdg.node(c.node).span.line) + ")";
}

int run_slice(const std::string& file, const std::optional<std::string>& method,
              const std::string& var, const std::string& direction, int line,
              const std::string& format) {
    ResolvedProgram program = load_program(file);
    std::size_t mi = select_method(program, method);
    Pdg pdg = build_pdg(program.unit.methods[mi], program.methods[mi]);

    std::optional<VariableId> vid = program.methods[mi].find(var);
    if (!vid) throw AnalysisError("variable '" + var + "' not found in method '" + pdg.method + "'");

    if (direction.empty()) {
        // full union-slice profile, seeds chosen by the iterative procedure
        SliceProfile profile = slice_profile(pdg, *vid);
        if (format == "json") {
            json j;
            j["method"] = pdg.method;
            j["variable"] = var;
            json slices = json::array();
            for (const UnionSlice& s : profile.slices) {
                json js;
                js["backward_seed"] = criterion_json(pdg, s.seed_backward);
                js["forward_seed"] =
                    s.seed_forward ? criterion_json(pdg, *s.seed_forward) : json(nullptr);
                js["nodes"] = nodes_json(pdg, s.nodes);
                slices.push_back(std::move(js));
            }
            j["slices"] = slices;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "method " << pdg.method << "\nvariable " << var << "\n";
            int k = 0;
            for (const UnionSlice& s : profile.slices) {
                std::cout << "slice " << ++k << " of " << profile.slices.size()
                          << ": backward seed " << criterion_text(pdg, s.seed_backward);
                if (s.seed_forward)
                    std::cout << ", forward seed " << criterion_text(pdg, *s.seed_forward);
                std::cout << ", " << s.nodes.size() << " nodes\n";
                print_nodes_table(pdg, s.nodes);
            }
        }
        return kExitOk;
    }

    // single slice from an explicit or default criterion
    int seed = kEntryNode;
    if (line > 0) {
        for (const PdgNode& n : pdg.body_nodes)
            if (n.span.line == line && (n.defs.count(*vid) || n.uses.count(*vid))) {
                seed = n.id;
                break;
            }
        if (seed == kEntryNode)
            throw AnalysisError("variable '" + var + "' does not occur on line " +
                                std::to_string(line));
    } else if (direction == "back") {
        for (const PdgNode& n : pdg.body_nodes)
            if (n.uses.count(*vid) || n.defs.count(*vid)) seed = n.id; // last occurrence
        if (seed == kEntryNode)
            throw AnalysisError("variable '" + var + "' never occurs in the method body");
    } else {
        // first definition; a parameter's first definition is the entry node
        bool is_param = program.methods[mi].info(*vid).is_param;
        if (!is_param) {
            for (const PdgNode& n : pdg.body_nodes)
                if (n.defs.count(*vid)) { seed = n.id; break; }
            if (seed == kEntryNode)
                throw AnalysisError("variable '" + var + "' is never defined");
        }
    }

    std::set<int> nodes = direction == "back"
                              ? backward_slice(pdg, seed)
                              : forward_slice(pdg, SliceCriterion{seed, *vid});
    if (format == "json") {
        json j;
        j["method"] = pdg.method;
        j["variable"] = var;
        j["direction"] = direction;
        j["seed"] = criterion_json(pdg, SliceCriterion{seed, *vid});
        j["nodes"] = nodes_json(pdg, nodes);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "method " << pdg.method << "\n"
                  << (direction == "back" ? "backward" : "forward") << " slice from "
                  << criterion_text(pdg, SliceCriterion{seed, *vid}) << ", variable " << var
                  << ", " << nodes.size() << " nodes\n";
        print_nodes_table(pdg, nodes);
    }
    return kExitOk;
}

int run_metrics(const std::string& file, const std::optional<std::string>& method,
                const std::string& format, const std::string& intersection, bool outputs_only) {
    ResolvedProgram program = load_program(file);
    AnalyzeOptions options;
    options.intersection_mode =
        intersection == "merged" ? IntersectionMode::Merged : IntersectionMode::PerSlice;
    options.outputs_only = outputs_only;

    std::vector<CohesionReport> reports;
    try {
        reports = analyze(program, method, options);
    } catch (const std::invalid_argument& e) {
        throw AnalysisError(e.what());
    }
    if (format == "json") {
        if (reports.size() == 1) {
            std::cout << report_to_json_string(reports.front());
        } else {
            std::string out = "[\n";
            for (std::size_t i = 0; i < reports.size(); ++i) {
                std::string one = report_to_json_string(reports[i]);
                one.pop_back(); // trailing newline
                out += one;
                if (i + 1 < reports.size()) out += ",";
                out += "\n";
            }
            out += "]\n";
            std::cout << out;
        }
    } else {
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i) std::cout << "\n";
            std::cout << report_to_table(reports[i]);
        }
    }
    return kExitOk;
}

int run_trace(const std::string& path, const std::optional<std::string>& method,
              const std::string& out_csv, const std::string& out_json,
              const std::string& out_svg) {
    IngestResult ingested;
    try {
        ingested = ingest(path);
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        if (msg.rfind("cannot read", 0) == 0) throw UsageError(msg);
        throw AnalysisError(msg);
    }
    for (const std::string& w : ingested.warnings) std::cerr << "warning: " << w << "\n";

    std::vector<VersionEvent> versions = compile_filter(ingested.events);
    MetricTrace trace;
    try {
        trace = compute_trace(versions, method);
    } catch (const std::invalid_argument& e) {
        throw AnalysisError(e.what());
    }
    for (const std::string& w : trace.warnings) std::cerr << "warning: " << w << "\n";

    write_file(out_csv, emit_csv(trace));
    if (!out_json.empty()) write_file(out_json, trace_to_json_string(trace));
    if (!out_svg.empty()) {
        if (trace.points.empty()) throw AnalysisError("empty trace; nothing to plot");
        write_file(out_svg, render_svg(trace));
    }
    std::cerr << "trace: " << ingested.events.size() << " events, " << versions.size()
              << " compilable versions, " << trace.points.size() << " points\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slice-based cohesion metrics for .mj programs and construction traces\n"
                 "exit codes: 0 success, 1 analysis error, 2 usage error"};
    app.require_subcommand(1);

    std::string file, path, var, out_csv, out_json, out_svg;
    std::optional<std::string> method;
    std::string format_pdg = "dot", format_metrics = "table", format_slice = "table";
    std::string direction, intersection = "per-slice";
    bool outputs_only = false;
    int line = 0;

    CLI::App* cmd_parse = app.add_subcommand("parse", "parse a file and print an AST summary");
    cmd_parse->add_option("file", file, "source file (.mj)")->required();

    CLI::App* cmd_pdg = app.add_subcommand("pdg", "print a method's program dependence graph");
    cmd_pdg->add_option("file", file)->required();
    cmd_pdg->add_option("--method", method, "method name (defaults to the sole method)");
    cmd_pdg->add_option("--format", format_pdg)->check(CLI::IsMember({"dot", "json"}));

    CLI::App* cmd_slice = app.add_subcommand("slice", "print union slices or a directional slice");
    cmd_slice->add_option("file", file)->required();
    cmd_slice->add_option("--method", method);
    cmd_slice->add_option("--var", var, "slicing variable")->required();
    CLI::Option* dir_opt =
        cmd_slice->add_option("--direction", direction)->check(CLI::IsMember({"back", "fwd"}));
    cmd_slice->add_option("--line", line, "criterion line (default: union-slice seeds)")
        ->needs(dir_opt);
    cmd_slice->add_option("--format", format_slice)->check(CLI::IsMember({"table", "json"}));

    CLI::App* cmd_metrics = app.add_subcommand("metrics", "cohesion report for a file");
    cmd_metrics->add_option("file", file)->required();
    cmd_metrics->add_option("--method", method);
    cmd_metrics->add_option("--format", format_metrics)->check(CLI::IsMember({"json", "table"}));
    cmd_metrics->add_option("--intersection", intersection)
        ->check(CLI::IsMember({"per-slice", "merged"}));
    cmd_metrics->add_flag("--outputs-only", outputs_only,
                          "restrict to printed/returned variables");

    CLI::App* cmd_trace = app.add_subcommand("trace", "cohesion time series over a version stream");
    cmd_trace->add_option("path", path, ".mj directory or .jsonl event stream")->required();
    cmd_trace->add_option("--method", method);
    cmd_trace->add_option("--out", out_csv, "CSV output path")->required();
    cmd_trace->add_option("--json", out_json, "JSON output path");
    cmd_trace->add_option("--plot", out_svg, "SVG output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        if (cmd_parse->parsed()) return run_parse(file);
        if (cmd_pdg->parsed()) return run_pdg(file, method, format_pdg);
        if (cmd_slice->parsed())
            return run_slice(file, method, var, direction, line, format_slice);
        if (cmd_metrics->parsed())
            return run_metrics(file, method, format_metrics, intersection, outputs_only);
        if (cmd_trace->parsed()) return run_trace(path, method, out_csv, out_json, out_svg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const AnalysisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    }
    return kExitUsage;
}
