// Acceptance suite: fixture-level checks for the recorded programs plus the
// randomized oracle, trace-compositionality, and CLI determinism gates.
// Prints one line per criterion; exits non-zero if any fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "slicecov/cohesion.hpp"
#include "slicecov/trace.hpp"
#include "support/testgen.hpp"
#include "test_common.hpp"

using namespace slicecov;
using namespace slicecov::testsupport;
namespace fs = std::filesystem;

namespace {

struct Checker {
    std::vector<std::string> failures;
    void require(bool cond, const std::string& message) {
        if (!cond) failures.push_back(message);
    }
};

struct FixtureAnalysis {
    ResolvedProgram program;
    CohesionReport report;
    double elapsed_ms;
};

FixtureAnalysis analyze_fixture(const std::string& name) {
    ResolvedProgram program = load_fixture(name);
    auto start = std::chrono::steady_clock::now();
    CohesionReport report = analyze(program)[0];
    auto stop = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return {std::move(program), std::move(report), ms};
}

const VariableReport& variable_of(const CohesionReport& r, const std::string& name) {
    for (const VariableReport& v : r.variables)
        if (v.name == name) return v;
    throw std::runtime_error("variable " + name + " missing from report");
}

void criterion_professional(Checker& c) {
    FixtureAnalysis a = analyze_fixture("professional.mj");
    c.require(a.report.method_length == 9,
              "method_length is " + std::to_string(a.report.method_length) + ", want 9");
    c.require(a.report.intersection_ratio == Rational(8, 9),
              "intersection is " + a.report.intersection_ratio.to_rational_string() +
                  ", want 8/9 exactly");
    // the single excluded node must be the declaration of sum
    Pdg pdg = build_pdg(a.program.unit.methods[0], a.program.methods[0]);
    std::set<int> missing;
    for (const PdgNode& n : pdg.body_nodes)
        if (!a.report.intersection_nodes.count(n.id)) missing.insert(n.id);
    c.require(missing.size() == 1, "expected exactly one excluded node");
    if (missing.size() == 1) {
        const PdgNode& n = pdg.node(*missing.begin());
        bool is_sum_decl = n.kind == NodeKind::DeclDef && n.defs.size() == 1 &&
                           pdg.var(*n.defs.begin()).name == "sum";
        c.require(is_sum_decl, "excluded node is not the declaration of sum");
    }
    c.require(a.report.cohesive, "professional fixture must be cohesive");
    c.require(a.elapsed_ms < 1000.0, "analysis took >= 1s");
}

void criterion_undergrad(Checker& c) {
    FixtureAnalysis a = analyze_fixture("undergrad.mj");
    c.require(a.report.method_length == 16,
              "method_length is " + std::to_string(a.report.method_length) + ", want 16");
    c.require(a.report.intersection_ratio == Rational(0, 1),
              "intersection is " + a.report.intersection_ratio.to_rational_string() +
                  ", want 0 exactly");
    Pdg pdg = build_pdg(a.program.unit.methods[0], a.program.methods[0]);
    std::optional<VariableId> hex;
    for (const VariableInfo& v : pdg.variables)
        if (v.name == "hex") hex = v.id;
    c.require(hex.has_value(), "variable hex missing");
    if (hex) {
        SliceProfile profile = slice_profile(pdg, *hex);
        c.require(profile.slices.size() >= 2, "hex profile must contain >= 2 union slices");
        int line3_node = -1;
        for (const PdgNode& n : pdg.body_nodes)
            if (n.span.line == 3 && n.defs.count(*hex)) line3_node = n.id;
        c.require(line3_node >= 0, "no hex definition on line 3");
        bool has_singleton = false;
        for (const UnionSlice& s : profile.slices)
            has_singleton |= s.nodes == std::set<int>{line3_node};
        c.require(has_singleton, "no union slice equals the singleton line-3 node");
    }
    c.require(a.elapsed_ms < 1000.0, "analysis took >= 1s");
}

void criterion_noline3(Checker& c) {
    FixtureAnalysis a = analyze_fixture("undergrad_noline3.mj");
    c.require(a.report.intersection_ratio == Rational(4, 15),
              "intersection is " + a.report.intersection_ratio.to_rational_string() +
                  ", want 4/15");
    c.require(a.report.intersection_ratio.to_decimal_string(2) == "0.27",
              "intersection displays as " + a.report.intersection_ratio.to_decimal_string(2) +
                  ", want 0.27");
    const Rational half(1, 2);
    c.require(*variable_of(a.report, "hD1").coverage > half, "Coverage(hD1) must exceed 0.5");
    c.require(*variable_of(a.report, "hD2").coverage > half, "Coverage(hD2) must exceed 0.5");
    Rational dec = *variable_of(a.report, "dec").coverage;
    c.require(Rational(40, 100) <= dec && dec <= Rational(60, 100),
              "Coverage(dec) = " + dec.to_decimal_string(2) + " outside [0.40, 0.60]");
}

void criterion_loop_nodes(Checker& c) {
    for (const char* name : {"professional.mj", "undergrad.mj", "undergrad_noline3.mj"}) {
        ResolvedProgram program = load_fixture(name);
        for (std::size_t i = 0; i < program.unit.methods.size(); ++i) {
            const MethodDecl& m = program.unit.methods[i];
            int fors = count_for_statements(m);
            if (fors == 0) continue;
            Pdg pdg = build_pdg(m, program.methods[i]);
            int inits = 0, conds = 0, updates = 0;
            for (const PdgNode& n : pdg.body_nodes) {
                if (n.kind == NodeKind::ForInit) ++inits;
                if (n.kind == NodeKind::ForCond) ++conds;
                if (n.kind == NodeKind::ForUpdate) ++updates;
            }
            c.require(inits == fors && conds == fors && updates == fors,
                      std::string(name) + ": for header must contribute exactly 3 nodes");
            // header nodes are adjacent: init, cond, update
            for (const PdgNode& n : pdg.body_nodes)
                if (n.kind == NodeKind::ForInit) {
                    c.require(pdg.node(n.id + 1).kind == NodeKind::ForCond &&
                                  pdg.node(n.id + 2).kind == NodeKind::ForUpdate,
                              std::string(name) + ": header nodes must be init, cond, update");
                }
        }
    }
}

constexpr int kCorpusSize = 55;

void criterion_slice_oracle(Checker& c) {
    int mismatches = 0, programs = 0;
    for (unsigned seed = 1; seed <= kCorpusSize; ++seed) {
        std::mt19937 rng(seed);
        std::string source = generate_program(rng, 15);
        ResolvedProgram program = load(source, "gen");
        Pdg pdg = build_pdg(program.unit.methods[0], program.methods[0]);
        ++programs;
        ClosureOracle oracle(pdg);
        for (const PdgNode& n : pdg.body_nodes) {
            if (backward_slice(pdg, n.id) != oracle.backward(n.id)) ++mismatches;
            if (forward_slice(pdg, n.id) != oracle.forward(n.id)) ++mismatches;
        }
    }
    c.require(programs >= 50, "corpus has fewer than 50 programs");
    c.require(mismatches == 0,
              std::to_string(mismatches) + " slices disagree with the closure oracle");
}

void criterion_metric_inequalities(Checker& c) {
    int violations = 0;
    Rational one(1, 1), zero(0, 1);
    for (unsigned seed = 1; seed <= kCorpusSize; ++seed) {
        std::mt19937 rng(seed);
        std::string source = generate_program(rng, 15);
        ResolvedProgram program = load(source, "gen");
        Pdg pdg = build_pdg(program.unit.methods[0], program.methods[0]);
        auto profiles = all_profiles(pdg);
        auto metrics = method_metrics(pdg, profiles);
        if (!metrics) continue;
        if (!(zero <= metrics->tightness)) ++violations;
        if (!(metrics->tightness <= metrics->min_coverage)) ++violations;
        if (!(metrics->min_coverage <= metrics->coverage_avg)) ++violations;
        if (!(metrics->coverage_avg <= metrics->max_coverage)) ++violations;
        if (!(metrics->max_coverage <= one)) ++violations;
        if (!(metrics->tightness <= metrics->overlap)) ++violations;
        if (!(metrics->overlap <= one)) ++violations;
    }
    c.require(violations == 0, std::to_string(violations) + " inequality violations");
}

void criterion_trace_compositionality(Checker& c) {
    const std::string sig = "void acc(int n) {\n";
    auto mj = [&](std::initializer_list<const char*> lines) {
        std::string out = sig;
        for (const char* l : lines) out += std::string("    ") + l + "\n";
        return out + "}\n";
    };
    std::vector<std::string> versions = {
        sig + "}\n",
        mj({"int total = 0;"}),
        mj({"int total = 0;", "int step ="}), // broken
        mj({"int total = 0;", "int step = 1;"}),
        mj({"int total = 0;", "int step = 1;", "while (total < n) {", "    total += step;", "}"}),
        mj({"int total = 0;", "int step = 1;", "while (total < n { total += step; }"}), // broken
        mj({"int total = 0;", "int step = 1;",
            "while (total < n) {", "    total += step;", "    step += 1;", "}"}),
        mj({"int total = 0;", "int step = 1;",
            "while (total < n) {", "    total += step;", "    step += 1;", "}",
            "out.println(total);"}),
        mj({"int total = 0;", "int step = 1;",
            "while (total < n) {", "    total += step;", "    step += 1;", "}",
            "out.println(total)"}), // broken
        mj({"int total = 0;", "int step = 1;",
            "while (total < n) {", "    total += step;", "    step += 1;", "}",
            "out.println(total);", "out.println(step);"}),
    };
    std::vector<VersionEvent> events;
    for (std::size_t i = 0; i < versions.size(); ++i)
        events.push_back({static_cast<long long>(i), -1, {versions[i], "v" + std::to_string(i)}});

    std::vector<VersionEvent> kept = compile_filter(events);
    std::set<long long> kept_seqs;
    for (const VersionEvent& ev : kept) kept_seqs.insert(ev.seq);
    c.require(kept.size() == 7, "compile filter must keep exactly the 7 parsing versions");
    c.require(kept_seqs == std::set<long long>{0, 1, 3, 4, 6, 7, 9},
              "compile filter kept the wrong versions");

    MetricTrace trace = compute_trace(kept);
    c.require(trace.points.size() == kept.size(), "one trace point per compilable version");
    for (std::size_t k = 0; k < trace.points.size() && k < kept.size(); ++k) {
        ResolvedProgram program = load(kept[k].source.content, "vk");
        CohesionReport report = analyze(program)[0];
        const TracePoint& p = trace.points[k];
        bool match = p.method_length == report.method_length &&
                     p.intersection_ratio == report.intersection_ratio;
        std::vector<std::pair<std::string, Rational>> expected;
        for (const VariableReport& v : report.variables)
            if (v.coverage) expected.emplace_back(v.name, *v.coverage);
        match = match && p.coverage == expected;
        // the emitted rows must match byte for byte
        MetricTrace alone;
        alone.method = trace.method;
        TracePoint copy;
        copy.version_index = p.version_index;
        copy.method_length = report.method_length;
        copy.coverage = expected;
        copy.intersection_ratio = report.intersection_ratio;
        alone.points.push_back(copy);
        MetricTrace just_p;
        just_p.method = trace.method;
        just_p.points.push_back(p);
        match = match && emit_csv(just_p) == emit_csv(alone) &&
                trace_to_json_string(just_p) == trace_to_json_string(alone);
        c.require(match, "trace point " + std::to_string(k) + " differs from standalone analysis");
    }
}

// -- criterion 8: CLI determinism --------------------------------------------

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("missing output file " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliRun {
    int exit_code = -1;
    std::string stdout_bytes;
    std::map<std::string, std::string> outputs; // relative name -> bytes
};

CliRun run_cli(const std::string& args, const fs::path& work, const std::vector<std::string>& outs) {
    fs::create_directories(work);
    fs::path out_file = work / "stdout.txt";
    fs::path err_file = work / "stderr.txt";
    std::string cmd = std::string("\"") + SLICECOV_CLI_PATH + "\" " + args + " > \"" +
                      out_file.string() + "\" 2> \"" + err_file.string() + "\"";
    int status = std::system(cmd.c_str());
    CliRun run;
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    run.stdout_bytes = read_bytes(out_file);
    for (const std::string& name : outs) run.outputs[name] = read_bytes(work / name);
    return run;
}

void criterion_determinism(Checker& c) {
    const std::string F = SLICECOV_FIXTURE_DIR;
    fs::path base = fs::temp_directory_path() /
                    ("slicecov_accept_" + std::to_string(::getpid()));
    std::error_code ec;
    fs::remove_all(base, ec);

    struct Command {
        std::string args;          // {OUT} placeholders resolve inside the run dir
        std::vector<std::string> outputs;
    };
    std::vector<Command> commands = {
        {"parse \"" + F + "/professional.mj\"", {}},
        {"parse \"" + F + "/undergrad.mj\"", {}},
        {"parse \"" + F + "/undergrad_noline3.mj\"", {}},
        {"pdg \"" + F + "/professional.mj\" --format dot", {}},
        {"pdg \"" + F + "/professional.mj\" --format json", {}},
        {"pdg \"" + F + "/undergrad.mj\" --format dot", {}},
        {"pdg \"" + F + "/undergrad.mj\" --format json", {}},
        {"pdg \"" + F + "/undergrad_noline3.mj\" --format json", {}},
        {"slice \"" + F + "/professional.mj\" --var mul", {}},
        {"slice \"" + F + "/professional.mj\" --var sum --direction back", {}},
        {"slice \"" + F + "/professional.mj\" --var bN --direction fwd", {}},
        {"slice \"" + F + "/undergrad.mj\" --var hex --format json", {}},
        {"slice \"" + F + "/undergrad.mj\" --var dec --direction back --line 14", {}},
        {"metrics \"" + F + "/professional.mj\" --format table", {}},
        {"metrics \"" + F + "/professional.mj\" --format json", {}},
        {"metrics \"" + F + "/undergrad.mj\" --format table", {}},
        {"metrics \"" + F + "/undergrad.mj\" --format json --intersection merged", {}},
        {"metrics \"" + F + "/undergrad_noline3.mj\" --format table", {}},
        {"metrics \"" + F + "/undergrad_noline3.mj\" --format json", {}},
        {"metrics \"" + F + "/professional.mj\" --outputs-only --format json", {}},
        {"trace \"" + F + "/trace_professional.jsonl\" --out {OUT}/p.csv --json {OUT}/p.json "
         "--plot {OUT}/p.svg",
         {"p.csv", "p.json", "p.svg"}},
        {"trace \"" + F + "/trace_undergrad.jsonl\" --out {OUT}/u.csv --json {OUT}/u.json "
         "--plot {OUT}/u.svg",
         {"u.csv", "u.json", "u.svg"}},
        {"trace \"" + F + "/trace_minimal\" --out {OUT}/m.csv", {"m.csv"}},
    };

    for (std::size_t i = 0; i < commands.size(); ++i) {
        const Command& cmd = commands[i];
        CliRun runs[2];
        for (int r = 0; r < 2; ++r) {
            fs::path work = base / ("cmd" + std::to_string(i) + "_run" + std::to_string(r));
            std::string args = cmd.args;
            std::string placeholder = "{OUT}";
            for (std::size_t pos; (pos = args.find(placeholder)) != std::string::npos;)
                args.replace(pos, placeholder.size(), work.string());
            runs[r] = run_cli(args, work, cmd.outputs);
        }
        c.require(runs[0].exit_code == 0,
                  "command " + std::to_string(i) + " exited with " +
                      std::to_string(runs[0].exit_code) + ": " + cmd.args);
        c.require(runs[0].exit_code == runs[1].exit_code,
                  "command " + std::to_string(i) + " exit codes differ");
        c.require(runs[0].stdout_bytes == runs[1].stdout_bytes,
                  "command " + std::to_string(i) + " stdout differs between runs");
        c.require(runs[0].outputs == runs[1].outputs,
                  "command " + std::to_string(i) + " output files differ between runs");
    }
    fs::remove_all(base, ec);
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Checker&)> fn;
    };
    std::vector<Criterion> criteria = {
        {1, "professional fixture: |M| = 9, intersection 8/9, sum declaration excluded, cohesive",
         criterion_professional},
        {2, "undergraduate fixture: |M| = 16, intersection 0, hex has a singleton dead-store slice",
         criterion_undergrad},
        {3, "undergraduate fixture without the dead initializer: 4/15 shown as 0.27, data coverage",
         criterion_noline3},
        {4, "every for header contributes exactly three PDG nodes", criterion_loop_nodes},
        {5, "slices match the transitive-closure oracle on 55 random methods",
         criterion_slice_oracle},
        {6, "metric inequalities hold across the random corpus", criterion_metric_inequalities},
        {7, "trace points bit-match standalone analyses; the filter drops non-parsing versions",
         criterion_trace_compositionality},
        {8, "repeated CLI runs are byte-identical on every fixture", criterion_determinism},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        Checker checker;
        std::string error;
        try {
            criterion.fn(checker);
        } catch (const std::exception& e) {
            error = e.what();
        }
        bool ok = error.empty() && checker.failures.empty();
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion.id << ": "
                  << criterion.title << "\n";
        if (!ok) {
            ++failed;
            if (!error.empty()) std::cout << "     error: " << error << "\n";
            for (const std::string& f : checker.failures) std::cout << "     " << f << "\n";
        }
    }
    if (failed == 0) std::cout << "all " << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
