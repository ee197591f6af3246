#pragma once

#include <iosfwd>
#include <span>

#include "defsched/model.hpp"
#include "defsched/pareto.hpp"
#include "defsched/rng.hpp"

namespace defsched {

/// NSGA-II / NSGA-III over committee configurations, evaluated on
/// (workload, suitability, available-slot proxy) = (Z1, Z2, Z5).

struct UnsatisfiableDefenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GaParams {
    int population_size = 200;  // n_s, even and >= 4
    int generations = 100;      // n_g
    int mutation_percent = 5;   // m, integer percent
    int fronts_kept = 1;        // n_f; kAllFronts keeps everything
    int tournament_rounds = 2;  // n_r
    std::vector<std::vector<double>> reference_points;  // NSGA-III only
    std::uint64_t master_seed = 0;

    void validate() const;
};

inline constexpr int kAllFronts = -1;

struct Individual {
    CommitteeConfig config;
    ObjectiveVector z;  // cached stage-1 objectives
};
using Population = std::vector<Individual>;

/// One feasible committee for a defence: roles visited in random order,
/// uniform choice among members that keep the common-window set nonempty,
/// backtracking on dead ends; after 100 capped restarts falls back to the
/// deterministic exhaustive search. Throws UnsatisfiableDefenceError when no
/// feasible committee exists.
std::vector<int> generate_feasible_committee(const Instance& inst, int defence, Rng& rng);

/// A full feasible configuration, defence by defence.
CommitteeConfig random_feasible_config(const Instance& inst, Rng& rng);

/// Exactly n_s feasible configurations: the given seeds first (truncated if
/// overlong), the remainder generated randomly.
Population initialise_population(const Instance& inst, int n_s,
                                 std::span<const CommitteeConfig> seeds, Rng& rng);

/// Whole-committee recombination: each defence block copied from a uniformly
/// chosen parent. Feasibility-preserving.
CommitteeConfig crossover(const Instance& inst, const CommitteeConfig& p1, const CommitteeConfig& p2,
                          Rng& rng);

/// As crossover, but parent 1 is chosen with probability v per block.
CommitteeConfig non_uniform_crossover(const Instance& inst, const CommitteeConfig& p1,
                                      const CommitteeConfig& p2, double v, Rng& rng);

/// With probability m%, regenerates the committee of one random defence.
CommitteeConfig mutate(const Instance& inst, const CommitteeConfig& s, int mutation_percent, Rng& rng);

struct RankedPoint {
    ObjectiveVector z;
    int rank = 0;
};

/// 0 when the first solution wins, 1 otherwise: lower front rank wins, then
/// larger crowding distance against `crowd_ref`, draws go to the first.
int crowding_match(const RankedPoint& a, const RankedPoint& b,
                   std::span<const ObjectiveVector> crowd_ref);

/// Crowding-distance tournament: per round the set is shuffled, consecutive
/// entries are matched (odd leftover skipped), winners accumulate across
/// rounds; matches are played against the winner set once it is nonempty.
/// Returns indices into `points`.
std::vector<int> tournament(std::span<const ObjectiveVector> points, int rounds, Rng& rng);

/// NSGA-II elite of size n_s/2: whole fronts while they fit, then repeatedly
/// the not-yet-included member of the first overflowing front with maximum
/// crowding distance to the current elite. Returns indices into `points`.
std::vector<int> elite2(std::span<const ObjectiveVector> points, int n_s);

/// NSGA-III elite: front filling as elite2, then reference-point niching —
/// elite ∪ overflow front normalized, each solution assigned to its nearest
/// reference point, seats filled from the least-frequent point's unchosen
/// candidates (empty buckets excluded from the argmin).
std::vector<int> elite3(std::span<const ObjectiveVector> points, int n_s,
                        const std::vector<std::vector<double>>& reference_points, Rng& rng);

/// Simplex-lattice points: coordinates multiples of 1/divisions summing to 1;
/// C(divisions + n - 1, n - 1) points.
std::vector<std::vector<double>> default_reference_points(int n_objectives, int divisions);

struct GaResult {
    Population final_population;
    /// Every generation's offspring population (index 0 = initial), filled
    /// only when keep_all_generations is requested.
    std::vector<Population> generations;
};

GaResult nsga2(const Instance& inst, const GaParams& params, std::span<const CommitteeConfig> seeds,
               bool keep_all_generations = false, std::ostream* trace = nullptr);
GaResult nsga3(const Instance& inst, const GaParams& params, std::span<const CommitteeConfig> seeds,
               bool keep_all_generations = false, std::ostream* trace = nullptr);

}  // namespace defsched
