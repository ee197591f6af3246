#pragma once

#include <span>

#include "defsched/model.hpp"
#include "defsched/pareto.hpp"
#include "defsched/search.hpp"

namespace defsched {

/// The augmented ε-constraint driver and the initialization phase that
/// establishes per-objective bounds and seed solutions.

struct InfeasibleInstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridDimension {
    Obj objective;
    long long min = 0;
    long long max = 0;
    long long increment = 1;  // ε', positive integer
};

/// Bounded-objective lattice, dimensions in ascending objective-id order.
struct EpsilonGrid {
    std::vector<GridDimension> dims;
    void validate() const;
};

enum class GridPolicy { Unit, Tenth };

struct InitReport {
    ObjectiveSet objectives;
    ObjectiveVector z_min;  // aligned with objectives
    ObjectiveVector z_max;
    std::vector<FullSolution> seeds;  // one per objective, in set order
    std::vector<SolveStatus> statuses;
    double big_m = 0.0;
    double seconds = 0.0;

    long long min_of(Obj o) const;
    long long max_of(Obj o) const;
};

/// One exact solve per objective, maximizing it plus the sum of the others
/// divided by M (chosen from coarse analytic ranges so the perturbation stays
/// below 1). z_max_i is the value achieved when maximizing i; z_min_i the
/// minimum i took across all the solves. Throws InfeasibleInstanceError when
/// the instance admits no solution at all.
InitReport initialisation_phase(const Instance& inst, const ObjectiveSet& objectives,
                                ProblemKind kind, double time_limit_seconds = 120.0,
                                const CommitteeConfig* fixed_config = nullptr);

/// M = 1 + Σ coarse analytic ranges of the active objectives.
double analytic_big_m(const Instance& inst, const ObjectiveSet& objectives);

/// True per-objective minima over the feasible region, one exact minimization
/// solve per objective. The payoff-table minimum can sit above parts of the
/// front when three or more objectives interact; grids built from these
/// floors cover the whole front. Entries are empty when the solve timed out
/// before finding anything.
std::vector<std::optional<long long>> objective_floors(const Instance& inst,
                                                       const ObjectiveSet& objectives,
                                                       ProblemKind kind,
                                                       double time_limit_seconds = 120.0,
                                                       const CommitteeConfig* fixed_config = nullptr);

/// Grid over the non-primary objectives; lower ends taken from `floors` when
/// given (falling back to the payoff minima), upper ends from the report.
EpsilonGrid make_grid(const InitReport& report, Obj primary, GridPolicy policy,
                      const std::vector<std::optional<long long>>* floors = nullptr);

/// A feasible result remembered for skip decisions: the bounded-objective
/// values it achieved and the ε it was solved under (both aligned with the
/// grid dimensions).
struct FoundRecord {
    std::vector<long long> bounded_values;
    std::vector<long long> solved_at;
};

/// False (skip) when some previously found record is provably optimal here —
/// it was solved under ε̄ ≤ ε and still satisfies ε — or when a previously
/// infeasible bound vector ε̄ ≤ ε exists (tightening bounds cannot restore
/// feasibility).
bool not_skip(std::span<const long long> epsilon, std::span<const FoundRecord> found,
              std::span<const std::vector<long long>> infeasible);

struct EpsilonIteration {
    std::vector<long long> epsilon;  // aligned with grid dims
    bool skipped = false;
    SolveStatus status = SolveStatus::Infeasible;  // meaningful when not skipped
    ObjectiveVector z;                             // present when a solution was found
    double seconds = 0.0;
};

struct EpsilonRun {
    FrontArchive front;                   // rank-0 filter of everything found
    std::vector<FullSolution> solutions;  // payload ids index this list
    std::vector<ObjectiveVector> solution_vectors;
    std::vector<SolveStatus> solution_statuses;
    std::vector<EpsilonIteration> iterations;
    ObjectiveSet active;  // primary + bounded, ascending id
    int solves = 0;       // iterations actually optimised
    bool all_optimal = true;
};

/// Walks the ε lattice from min to max by ε' per bounded objective (nested,
/// ascending id), applying not_skip, solving with the augmented objective,
/// and collecting feasible results. Timeouts are carried per iteration and
/// never fatal.
EpsilonRun augmented_epsilon_constraint(const Instance& inst, ProblemKind kind,
                                        const EpsilonGrid& grid, Obj primary,
                                        double time_limit_seconds,
                                        const CommitteeConfig* fixed_config = nullptr,
                                        bool skipping_enabled = true);

/// Iteration ledger as CSV (ε vector, skipped, status, seconds, objectives).
std::string iteration_ledger_csv(const EpsilonRun& run, const EpsilonGrid& grid);

}  // namespace defsched
