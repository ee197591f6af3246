#pragma once

#include <map>
#include <optional>

#include "defsched/model.hpp"

namespace defsched {

/// Exact single-objective backend: maximizes one augmented objective subject
/// to ε lower bounds on the others, for the full problem or for a fixed
/// committee configuration.

enum class ProblemKind { Monolithic, Stage2 };

enum class SolveStatus {
    Optimal,          // tree exhausted, incumbent proven best
    FeasibleTimeout,  // deadline hit, incumbent returned without proof
    Infeasible,       // tree exhausted, no feasible leaf
    UnknownTimeout,   // deadline hit before any feasible leaf was seen
};

const char* status_name(SolveStatus status);

struct ObjectiveRange {
    long long min = 0;
    long long max = 0;
};

struct SolveRequest {
    ProblemKind kind = ProblemKind::Monolithic;
    std::optional<CommitteeConfig> fixed_config;  // required for Stage2

    ObjectiveSet active;  // objectives of this problem; defines n_z
    Obj primary = Obj::Z1;
    /// Flip the primary's sense (used to establish true per-objective
    /// floors); augmentation and ε bounds keep their usual meaning.
    bool minimize_primary = false;
    /// Lower bounds on non-primary objectives, canonical maximization scale.
    std::map<Obj, long long> epsilon_bounds;
    /// (z_min, z_max) per non-primary objective for the normalized-ratio
    /// augmentation term. Zero-range objectives contribute 0.
    std::map<Obj, ObjectiveRange> augmentation;
    /// When positive, the augmentation term is (1/M)·Σ raw values instead of
    /// normalized ratios (the initialization-phase objective shape).
    double big_m = 0.0;

    double time_limit_seconds = 120.0;

    /// Throws std::invalid_argument when malformed (primary not active,
    /// bounded objective not active or equal to primary, nonpositive time
    /// limit, missing/mismatched Stage2 config).
    void validate(const Instance& inst) const;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<FullSolution> solution;
    ObjectiveVector z;  // aligned with request.active; empty when no solution
    double gap = 0.0;   // scalar bound gap; 0 when status is Optimal
    long long nodes = 0;

    bool has_solution() const { return solution.has_value(); }
};

/// z_primary + (1/n_z)·Σ over other active objectives of
/// (z_i − z_i_min)/(z_i_max − z_i_min); zero-range ratios count as 0.
double augmented_value(const ObjectiveVector& z, const ObjectiveSet& active, Obj primary,
                       const std::map<Obj, ObjectiveRange>& ranges);

/// The scalar the solver maximizes for `request` (ratio or big-M form).
double scalarized_value(const ObjectiveVector& z, const SolveRequest& request);

/// A prefix of decisions: committees for some defences, placements for a
/// subset of those.
struct PartialAssignment {
    std::vector<std::optional<std::vector<int>>> committee;  // per defence
    std::vector<std::optional<DefenceSlot>> placed;          // per defence; requires committee

    static PartialAssignment empty(const Instance& inst) {
        return {std::vector<std::optional<std::vector<int>>>(inst.n_defences),
                std::vector<std::optional<DefenceSlot>>(inst.n_defences)};
    }
};

/// Admissible per-objective upper bounds over every completion of `partial`:
/// Z3 assumes zero further penalties, Z4 assumes no new member-days, Z1/Z2
/// use best-case eligibility for still-open roles (exact once all committees
/// are fixed).
std::map<Obj, long long> optimistic_bounds(const Instance& inst, const PartialAssignment& partial,
                                           const ObjectiveSet& objectives);

/// Depth-first branch-and-bound, minimum-remaining-values defence order,
/// deterministic trees. Prunes on ε-unreachability and on the augmented
/// upper bound; returns Optimal / Infeasible only on exhaustion.
SolveResult optimise(const Instance& inst, const SolveRequest& request);

}  // namespace defsched
