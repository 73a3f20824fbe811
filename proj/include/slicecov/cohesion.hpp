#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slicecov/rational.hpp"
#include "slicecov/resolve.hpp"
#include "slicecov/slicer.hpp"

namespace slicecov {

enum class IntersectionMode {
    PerSlice, // intersect every union slice of every variable (default)
    Merged,   // merge each variable's slices first, then intersect
};

const char* to_string(IntersectionMode mode);

struct VariableReport {
    std::string name;
    int profile_size = 0;                  // number of union slices
    std::optional<Rational> coverage;      // unset when |M| == 0 or profile empty
    std::set<int> merged_nodes;            // union of the profile's slices
};

/// Ott-Thuss method-level metrics over each variable's merged union slice.
struct MethodMetrics {
    Rational coverage_avg;
    Rational min_coverage;
    Rational max_coverage;
    Rational overlap;
    Rational tightness;
};

struct CohesionReport {
    std::string method;
    int method_length = 0;
    std::vector<VariableReport> variables; // declaration order
    IntersectionMode intersection_mode = IntersectionMode::PerSlice;
    std::set<int> intersection_nodes;
    Rational intersection_ratio;           // 0 when undefined (|M| == 0)
    bool cohesive = false;                 // intersection_ratio > 1/2
    std::optional<MethodMetrics> metrics;  // unset when no eligible variable
};

/// Coverage(M, v): average union-slice size over the profile, divided by the
/// method length. Unset for an empty profile or an empty method.
std::optional<Rational> coverage(const Pdg& pdg, const SliceProfile& profile);

/// Relative method slice intersection. Variables with empty profiles are
/// excluded; with no slices at all the intersection is empty with ratio 0.
std::pair<std::set<int>, Rational> method_intersection(const Pdg& pdg,
                                                       const std::vector<SliceProfile>& profiles,
                                                       IntersectionMode mode);

std::optional<MethodMetrics> method_metrics(const Pdg& pdg,
                                            const std::vector<SliceProfile>& profiles);

struct AnalyzeOptions {
    IntersectionMode intersection_mode = IntersectionMode::PerSlice;
    bool outputs_only = false; // restrict to printed/returned variables
};

/// Full per-method pipeline: PDG, slice profiles, coverage, intersection,
/// method metrics. With `method` set, only that method is analyzed; an
/// unknown name throws std::invalid_argument.
std::vector<CohesionReport> analyze(const ResolvedProgram& program,
                                    const std::optional<std::string>& method = std::nullopt,
                                    const AnalyzeOptions& options = {});

std::string report_to_json_string(const CohesionReport& report);
std::string report_to_table(const CohesionReport& report);

} // namespace slicecov
