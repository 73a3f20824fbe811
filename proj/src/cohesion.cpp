#include "slicecov/cohesion.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "slicecov/pdg.hpp"

namespace slicecov {

namespace {

using json = nlohmann::ordered_json;

std::set<int> merged_nodes(const SliceProfile& profile) {
    std::set<int> merged;
    for (const UnionSlice& s : profile.slices) merged.insert(s.nodes.begin(), s.nodes.end());
    return merged;
}

std::set<int> intersect(const std::set<int>& a, const std::set<int>& b) {
    std::set<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

json ratio_json(const Rational& r) {
    json j;
    j["rational"] = r.to_rational_string();
    j["decimal"] = std::stod(r.to_decimal_string(2));
    return j;
}

} // namespace

const char* to_string(IntersectionMode mode) {
    return mode == IntersectionMode::PerSlice ? "per-slice" : "merged";
}

std::optional<Rational> coverage(const Pdg& pdg, const SliceProfile& profile) {
    if (profile.slices.empty() || pdg.method_length() == 0) return std::nullopt;
    std::int64_t total = 0;
    for (const UnionSlice& s : profile.slices) total += static_cast<std::int64_t>(s.nodes.size());
    return Rational(total,
                    static_cast<std::int64_t>(profile.slices.size()) * pdg.method_length());
}

std::pair<std::set<int>, Rational> method_intersection(const Pdg& pdg,
                                                       const std::vector<SliceProfile>& profiles,
                                                       IntersectionMode mode) {
    bool first = true;
    std::set<int> acc;
    for (const SliceProfile& p : profiles) {
        if (p.slices.empty()) continue; // variable never occurs
        if (mode == IntersectionMode::PerSlice) {
            for (const UnionSlice& s : p.slices) {
                acc = first ? s.nodes : intersect(acc, s.nodes);
                first = false;
            }
        } else {
            std::set<int> merged = merged_nodes(p);
            acc = first ? std::move(merged) : intersect(acc, merged);
            first = false;
        }
    }
    if (first || pdg.method_length() == 0) return {std::move(acc), Rational(0, 1)};
    return {acc, Rational(static_cast<std::int64_t>(acc.size()), pdg.method_length())};
}

std::optional<MethodMetrics> method_metrics(const Pdg& pdg,
                                            const std::vector<SliceProfile>& profiles) {
    if (pdg.method_length() == 0) return std::nullopt;
    std::vector<std::set<int>> merged;
    for (const SliceProfile& p : profiles)
        if (!p.slices.empty()) merged.push_back(merged_nodes(p));
    if (merged.empty()) return std::nullopt;

    const std::int64_t m = pdg.method_length();
    const std::int64_t k = static_cast<std::int64_t>(merged.size());

    std::set<int> common = merged.front();
    for (std::size_t i = 1; i < merged.size(); ++i) common = intersect(common, merged[i]);

    MethodMetrics metrics;
    std::int64_t total = 0;
    Rational min_cov(1, 1), max_cov(0, 1);
    Rational overlap_sum(0, 1);
    for (const std::set<int>& s : merged) {
        auto size = static_cast<std::int64_t>(s.size());
        total += size;
        Rational cov(size, m);
        min_cov = std::min(min_cov, cov);
        max_cov = std::max(max_cov, cov);
        // an empty merged slice contributes 0 (its intersection share is empty)
        if (size > 0)
            overlap_sum = overlap_sum + Rational(static_cast<std::int64_t>(common.size()), size);
    }
    metrics.coverage_avg = Rational(total, k * m);
    metrics.min_coverage = min_cov;
    metrics.max_coverage = max_cov;
    metrics.tightness = Rational(static_cast<std::int64_t>(common.size()), m);
    metrics.overlap = overlap_sum / Rational::integer(k);
    return metrics;
}

std::vector<CohesionReport> analyze(const ResolvedProgram& program,
                                    const std::optional<std::string>& method,
                                    const AnalyzeOptions& options) {
    std::vector<CohesionReport> reports;
    bool found = false;
    for (std::size_t i = 0; i < program.unit.methods.size(); ++i) {
        const MethodDecl& decl = program.unit.methods[i];
        if (method && decl.name != *method) continue;
        found = true;

        Pdg pdg = build_pdg(decl, program.methods[i]);

        std::set<VariableId> selected;
        if (options.outputs_only) {
            for (const PdgNode& n : pdg.body_nodes)
                if (n.kind == NodeKind::Output || n.kind == NodeKind::Return)
                    selected.insert(n.uses.begin(), n.uses.end());
        }

        std::vector<const VariableInfo*> vars;
        std::vector<SliceProfile> profiles;
        for (const VariableInfo& v : pdg.variables) {
            if (options.outputs_only && !selected.count(v.id)) continue;
            vars.push_back(&v);
            profiles.push_back(slice_profile(pdg, v.id));
        }

        CohesionReport report;
        report.method = decl.name;
        report.method_length = pdg.method_length();
        report.intersection_mode = options.intersection_mode;
        for (std::size_t j = 0; j < vars.size(); ++j) {
            VariableReport vr;
            vr.name = vars[j]->name;
            vr.profile_size = static_cast<int>(profiles[j].slices.size());
            vr.coverage = coverage(pdg, profiles[j]);
            vr.merged_nodes = merged_nodes(profiles[j]);
            report.variables.push_back(std::move(vr));
        }
        auto [nodes, ratio] = method_intersection(pdg, profiles, options.intersection_mode);
        report.intersection_nodes = std::move(nodes);
        report.intersection_ratio = ratio;
        report.cohesive = ratio > Rational(1, 2);
        report.metrics = method_metrics(pdg, profiles);
        reports.push_back(std::move(report));
    }
    if (method && !found)
        throw std::invalid_argument("method '" + *method + "' not found");
    return reports;
}

std::string report_to_json_string(const CohesionReport& report) {
    json j;
    j["method"] = report.method;
    j["method_length"] = report.method_length;
    json vars = json::array();
    for (const VariableReport& v : report.variables) {
        json jv;
        jv["name"] = v.name;
        jv["profile_size"] = v.profile_size;
        jv["coverage"] = v.coverage ? ratio_json(*v.coverage) : json(nullptr);
        jv["slice_nodes"] = json(v.merged_nodes);
        vars.push_back(std::move(jv));
    }
    j["variables"] = vars;
    json inter;
    inter["mode"] = to_string(report.intersection_mode);
    inter["nodes"] = json(report.intersection_nodes);
    inter["ratio"] = ratio_json(report.intersection_ratio);
    j["intersection"] = inter;
    if (report.metrics) {
        json m;
        m["coverage_avg"] = ratio_json(report.metrics->coverage_avg);
        m["min_coverage"] = ratio_json(report.metrics->min_coverage);
        m["max_coverage"] = ratio_json(report.metrics->max_coverage);
        m["overlap"] = ratio_json(report.metrics->overlap);
        m["tightness"] = ratio_json(report.metrics->tightness);
        j["metrics"] = m;
    } else {
        j["metrics"] = nullptr;
    }
    j["cohesive"] = report.cohesive;
    return j.dump(2) + "\n";
}

std::string report_to_table(const CohesionReport& report) {
    std::ostringstream out;
    out << "method " << report.method << "\n";
    out << "method_length " << report.method_length << "\n";
    for (const VariableReport& v : report.variables) {
        out << "variable " << v.name << " slices=" << v.profile_size
            << " merged=" << v.merged_nodes.size() << " coverage ";
        if (v.coverage)
            out << v.coverage->to_rational_string() << " " << v.coverage->to_decimal_string(2);
        else
            out << "n/a";
        out << "\n";
    }
    if (report.metrics) {
        auto row = [&](const char* name, const Rational& r) {
            out << name << " " << r.to_rational_string() << " " << r.to_decimal_string(2) << "\n";
        };
        row("coverage_avg", report.metrics->coverage_avg);
        row("min_coverage", report.metrics->min_coverage);
        row("max_coverage", report.metrics->max_coverage);
        row("overlap", report.metrics->overlap);
        row("tightness", report.metrics->tightness);
    } else {
        out << "metrics unavailable\n";
    }
    out << "intersection " << report.intersection_ratio.to_rational_string() << " "
        << report.intersection_ratio.to_decimal_string(2)
        << " cohesive=" << (report.cohesive ? "yes" : "no") << "\n";
    return out.str();
}

} // namespace slicecov
