#pragma once

#include <string>

#include "defsched/epsilon.hpp"
#include "defsched/ga.hpp"
#include "defsched/model.hpp"
#include "defsched/pareto.hpp"

namespace defsched {

/// Orchestration of the monolithic baseline, the two-stage decomposition,
/// the case-study variant, and seeded sweeps.

enum class Method { MonolithicEps, DecompNsga2, DecompNsga3, DecompCaseStudy };

const char* method_name(Method method);

struct RunConfig {
    Method method = Method::MonolithicEps;
    GaParams ga;
    GridPolicy mono_grid = GridPolicy::Unit;
    GridPolicy stage2_grid = GridPolicy::Unit;  // stage-2 pairs Z3 (primary) with Z4 bounded
    Obj mono_primary = Obj::Z1;
    Obj stage2_primary = Obj::Z3;
    double time_limit_seconds = 120.0;       // per ε-constraint iteration
    double init_time_limit_seconds = 120.0;  // per initialization solve
    bool keep_all_generations = false;
    bool skipping_enabled = true;
    std::vector<double> relink_probabilities;  // V (case-study path relinking)
    int relink_repetitions = 1;                // n_h
    std::vector<std::uint64_t> sweep_seeds;    // master seeds for sweep()
    int threads = 1;                           // stage-2 drivers per config

    void validate() const;
};

struct MethodResult {
    FrontArchive front;                   // merged 4-objective front (Z1, Z2, Z3, Z4)
    std::vector<FullSolution> solutions;  // payload id -> solution
    InitReport init;
    double init_seconds = 0.0;
    double stage1_seconds = 0.0;
    double stage2_seconds = 0.0;
    int configs_evaluated = 0;    // distinct partial solutions sent to stage 2
    int stage2_solves = 0;        // ε iterations optimised (total)
    long long total_solutions = 0;  // feasible solutions found before merging
    bool all_optimal = true;
    double hypervolume = 0.0;  // normalized against the init minima point
    /// ε iteration ledger CSV; per-config sections for the decomposition.
    std::string iteration_ledger;
};

/// Count of front entries not dominated by any baseline entry.
long long count_not_dominated_by(const FrontArchive& front, const FrontArchive& baseline);

/// Initialization (Z1..Z4 over the monolithic problem) followed by the
/// augmented ε-constraint on the monolithic problem.
MethodResult run_monolithic(const Instance& inst, const RunConfig& cfg);

/// Initialization → stage-1 GA on (Z1, Z2, Z5) → n_f-front filter and config
/// dedup → per-config stage-2 ε-constraint on (Z3, Z4) → per-solution
/// 4-objective vectors → merge. Configs with no feasible schedule under the
/// bounds contribute nothing and are never fatal.
MethodResult run_decomposition(const Instance& inst, const RunConfig& cfg);

MethodResult run_method(const Instance& inst, const RunConfig& cfg);

/// Path-relinking style initial population: the seeds plus n_h non-uniform
/// crossovers per unordered seed pair and probability v ∈ V.
std::vector<CommitteeConfig> adapted_initialisation(const Instance& inst,
                                                    std::span<const CommitteeConfig> seeds,
                                                    const std::vector<double>& probabilities,
                                                    int repetitions, Rng& rng);

struct ComparisonRow {
    std::string method;
    int mutation_percent = 0;
    std::string fronts_kept;  // "1" or "all"
    int runs = 1;
    double init_seconds = 0.0;
    double stage1_seconds = 0.0;
    double stage2_seconds = 0.0;
    double hypervolume = 0.0;
    double n0_vs_baseline = 0.0;  // mean count not dominated by the baseline front
    double n0 = 0.0;              // mean merged-front size
    double solutions = 0.0;       // mean pre-merge solution count
    bool has_baseline = false;
};

ComparisonRow summarize(const MethodResult& result, const RunConfig& cfg,
                        const FrontArchive* baseline);

/// Runs the configured method once per sweep seed and averages the report
/// columns. Deterministic for a fixed seed list.
ComparisonRow sweep(const Instance& inst, const RunConfig& cfg, const FrontArchive* baseline);

std::string comparison_csv_header();
std::string comparison_csv_row(const ComparisonRow& row);

}  // namespace defsched
