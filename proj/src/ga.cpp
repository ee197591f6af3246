#include "defsched/ga.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>

namespace defsched {

void GaParams::validate() const {
    if (population_size < 4 || population_size % 2 != 0)
        throw std::invalid_argument("ga: population size must be even and >= 4");
    if (generations < 0) throw std::invalid_argument("ga: generations must be >= 0");
    if (mutation_percent < 0 || mutation_percent > 100)
        throw std::invalid_argument("ga: mutation percent must be in [0, 100]");
    if (tournament_rounds < 1) throw std::invalid_argument("ga: tournament rounds must be >= 1");
}

namespace {

/// One randomized backtracking attempt with an expansion budget; complete
/// search would make restarts pointless, so dead-end exploration is capped.
bool committee_attempt(const Instance& inst, int defence, Rng& rng, std::vector<int>& out) {
    std::vector<int> role_order(inst.n_roles);
    std::iota(role_order.begin(), role_order.end(), 0);
    rng.shuffle(role_order);

    std::vector<int> chosen(inst.n_roles, -1);
    std::vector<char> used(inst.n_members, 0);
    int budget = 32 * inst.n_roles;

    std::function<bool(int, const SlotMask&)> descend = [&](int depth, const SlotMask& windows) -> bool {
        if (depth == inst.n_roles) return true;
        if (--budget < 0) return false;
        int role = role_order[depth];
        std::vector<int> candidates;
        for (int i : inst.eligibility[defence][role]) {
            if (used[i]) continue;
            if ((windows & inst.window_mask[i]).any()) candidates.push_back(i);
        }
        rng.shuffle(candidates);
        for (int i : candidates) {
            chosen[role] = i;
            used[i] = 1;
            if (descend(depth + 1, windows & inst.window_mask[i])) return true;
            used[i] = 0;
            chosen[role] = -1;
            if (budget < 0) return false;
        }
        return false;
    };

    if (!descend(0, common_windows(inst, {}))) return false;
    out = chosen;
    return true;
}

}  // namespace

std::vector<int> generate_feasible_committee(const Instance& inst, int defence, Rng& rng) {
    std::vector<int> committee;
    for (int attempt = 0; attempt < 100; ++attempt)
        if (committee_attempt(inst, defence, rng, committee)) return committee;
    if (auto exhaustive = find_feasible_committee(inst, defence)) return *exhaustive;
    throw UnsatisfiableDefenceError("defence " + std::to_string(defence) +
                                    " admits no feasible committee");
}

CommitteeConfig random_feasible_config(const Instance& inst, Rng& rng) {
    CommitteeConfig config;
    config.assignment.reserve(static_cast<std::size_t>(inst.n_defences) * inst.n_roles);
    for (int j = 0; j < inst.n_defences; ++j) {
        auto committee = generate_feasible_committee(inst, j, rng);
        config.assignment.insert(config.assignment.end(), committee.begin(), committee.end());
    }
    return config;
}

namespace {

Individual make_individual(const Instance& inst, CommitteeConfig config) {
    ObjectiveVector z = evaluate_config(inst, config, stage1_objectives());
    return {std::move(config), std::move(z)};
}

}  // namespace

Population initialise_population(const Instance& inst, int n_s,
                                 std::span<const CommitteeConfig> seeds, Rng& rng) {
    Population population;
    population.reserve(n_s);
    for (const auto& seed : seeds) {
        if (static_cast<int>(population.size()) == n_s) break;
        population.push_back(make_individual(inst, seed));
    }
    while (static_cast<int>(population.size()) < n_s)
        population.push_back(make_individual(inst, random_feasible_config(inst, rng)));
    return population;
}

CommitteeConfig crossover(const Instance& inst, const CommitteeConfig& p1, const CommitteeConfig& p2,
                          Rng& rng) {
    return non_uniform_crossover(inst, p1, p2, 0.5, rng);
}

CommitteeConfig non_uniform_crossover(const Instance& inst, const CommitteeConfig& p1,
                                      const CommitteeConfig& p2, double v, Rng& rng) {
    CommitteeConfig offspring;
    offspring.assignment.resize(p1.assignment.size());
    for (int j = 0; j < inst.n_defences; ++j) {
        const CommitteeConfig& parent = rng.chance(v) ? p1 : p2;
        for (int t = 0; t < inst.n_roles; ++t)
            offspring.member(inst, j, t) = parent.member(inst, j, t);
    }
    return offspring;
}

CommitteeConfig mutate(const Instance& inst, const CommitteeConfig& s, int mutation_percent, Rng& rng) {
    CommitteeConfig mutated = s;
    if (rng.percent(mutation_percent)) {
        int j = rng.uniform_int(0, inst.n_defences - 1);
        auto committee = generate_feasible_committee(inst, j, rng);
        for (int t = 0; t < inst.n_roles; ++t) mutated.member(inst, j, t) = committee[t];
    }
    return mutated;
}

int crowding_match(const RankedPoint& a, const RankedPoint& b,
                   std::span<const ObjectiveVector> crowd_ref) {
    if (b.rank < a.rank) return 1;
    if (b.rank == a.rank) {
        CrowdingValue ca = crowding_distance(a.z, crowd_ref);
        CrowdingValue cb = crowding_distance(b.z, crowd_ref);
        if (crowding_compare(cb, ca) > 0) return 1;
    }
    return 0;
}

std::vector<int> tournament(std::span<const ObjectiveVector> points, int rounds, Rng& rng) {
    std::vector<int> ranks = sort_fronts(points);
    std::vector<int> winners;
    std::vector<ObjectiveVector> winner_points;
    std::vector<ObjectiveVector> all_points(points.begin(), points.end());

    std::vector<int> order(points.size());
    for (int round = 0; round < rounds; ++round) {
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (std::size_t m = 0; m + 1 < order.size(); m += 2) {
            int a = order[m];
            int b = order[m + 1];
            std::span<const ObjectiveVector> ref =
                winner_points.empty() ? std::span<const ObjectiveVector>(all_points)
                                      : std::span<const ObjectiveVector>(winner_points);
            int win = crowding_match({points[a], ranks[a]}, {points[b], ranks[b]}, ref) == 0 ? a : b;
            winners.push_back(win);
            winner_points.push_back(points[win]);
        }
    }
    return winners;
}

namespace {

/// Shared front-filling prefix of elite2/elite3: whole fronts while they fit
/// within n_s/2. Returns the first non-included front index, or -1 when
/// everything fitted.
int fill_whole_fronts(std::span<const ObjectiveVector> points, int target,
                      const std::vector<int>& ranks, std::vector<int>& elite) {
    int front_count = 0;
    for (int r : ranks) front_count = std::max(front_count, r + 1);
    for (int n = 0; n < front_count; ++n) {
        std::vector<int> members;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (ranks[i] == n) members.push_back(static_cast<int>(i));
        if (static_cast<int>(elite.size() + members.size()) <= target)
            elite.insert(elite.end(), members.begin(), members.end());
        else
            return n;
    }
    return -1;
}

}  // namespace

std::vector<int> elite2(std::span<const ObjectiveVector> points, int n_s) {
    const int target = n_s / 2;
    std::vector<int> ranks = sort_fronts(points);
    std::vector<int> elite;
    int overflow_front = fill_whole_fronts(points, target, ranks, elite);
    if (overflow_front < 0) return elite;  // whole population fitted

    std::vector<int> candidates;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (ranks[i] == overflow_front) candidates.push_back(static_cast<int>(i));
    std::vector<char> taken(points.size(), 0);
    for (int i : elite) taken[i] = 1;

    std::vector<ObjectiveVector> elite_points;
    for (int i : elite) elite_points.push_back(points[i]);

    while (static_cast<int>(elite.size()) < target) {
        int best = -1;
        CrowdingValue best_value;
        for (int i : candidates) {
            if (taken[i]) continue;
            CrowdingValue value = crowding_distance(points[i], elite_points);
            if (best < 0 || crowding_compare(value, best_value) > 0) {
                best = i;
                best_value = value;
            }
        }
        elite.push_back(best);
        taken[best] = 1;
        elite_points.push_back(points[best]);
    }
    return elite;
}

std::vector<int> elite3(std::span<const ObjectiveVector> points, int n_s,
                        const std::vector<std::vector<double>>& reference_points, Rng& rng) {
    if (reference_points.empty()) throw std::invalid_argument("elite3: no reference points");
    const int target = n_s / 2;
    std::vector<int> ranks = sort_fronts(points);
    std::vector<int> elite;
    int overflow_front = fill_whole_fronts(points, target, ranks, elite);
    if (overflow_front < 0) return elite;

    std::vector<int> candidates;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (ranks[i] == overflow_front) candidates.push_back(static_cast<int>(i));

    // Normalize elite ∪ overflow front by per-objective min/max, then assign
    // every one of those solutions to its nearest reference point.
    std::vector<int> pool = elite;
    pool.insert(pool.end(), candidates.begin(), candidates.end());
    const std::size_t m = points.empty() ? 0 : points[0].size();
    std::vector<long long> lo(m, std::numeric_limits<long long>::max());
    std::vector<long long> hi(m, std::numeric_limits<long long>::min());
    for (int i : pool)
        for (std::size_t c = 0; c < m; ++c) {
            lo[c] = std::min(lo[c], points[i][c]);
            hi[c] = std::max(hi[c], points[i][c]);
        }
    std::vector<int> assigned(points.size(), -1);
    for (int i : pool) {
        std::vector<double> q(m);
        for (std::size_t c = 0; c < m; ++c)
            q[c] = hi[c] == lo[c]
                       ? 0.0
                       : static_cast<double>(points[i][c] - lo[c]) / static_cast<double>(hi[c] - lo[c]);
        int nearest = 0;
        double nearest_dist = std::numeric_limits<double>::max();
        for (std::size_t r = 0; r < reference_points.size(); ++r) {
            double dist = 0.0;
            for (std::size_t c = 0; c < m; ++c) {
                double diff = q[c] - reference_points[r][c];
                dist += diff * diff;
            }
            if (dist < nearest_dist) {
                nearest_dist = dist;
                nearest = static_cast<int>(r);
            }
        }
        assigned[i] = nearest;
    }

    std::vector<char> taken(points.size(), 0);
    for (int i : elite) taken[i] = 1;

    while (static_cast<int>(elite.size()) < target) {
        // Assignment frequency of the current elite per reference point.
        std::vector<int> frequency(reference_points.size(), 0);
        for (int i : elite) ++frequency[assigned[i]];
        // Least-frequent point that still has unchosen candidates (empty
        // buckets are excluded and the next-least-frequent is tried).
        std::vector<std::size_t> by_frequency(reference_points.size());
        std::iota(by_frequency.begin(), by_frequency.end(), 0);
        std::stable_sort(by_frequency.begin(), by_frequency.end(),
                         [&frequency](std::size_t a, std::size_t b) { return frequency[a] < frequency[b]; });
        int chosen = -1;
        for (std::size_t r : by_frequency) {
            std::vector<int> bucket;
            for (int i : candidates)
                if (!taken[i] && assigned[i] == static_cast<int>(r)) bucket.push_back(i);
            if (!bucket.empty()) {
                chosen = bucket[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(bucket.size()) - 1))];
                break;
            }
        }
        elite.push_back(chosen);
        taken[chosen] = 1;
    }
    return elite;
}

std::vector<std::vector<double>> default_reference_points(int n_objectives, int divisions) {
    std::vector<std::vector<double>> out;
    std::vector<int> counts(n_objectives, 0);
    std::function<void(int, int)> build = [&](int index, int left) {
        if (index == n_objectives - 1) {
            counts[index] = left;
            std::vector<double> point(n_objectives);
            for (int c = 0; c < n_objectives; ++c)
                point[c] = static_cast<double>(counts[c]) / static_cast<double>(divisions);
            out.push_back(std::move(point));
            return;
        }
        for (int take = 0; take <= left; ++take) {
            counts[index] = take;
            build(index + 1, left - take);
        }
    };
    build(0, divisions);
    return out;
}

namespace {

enum class EliteKind { Nsga2, Nsga3 };

void write_trace(std::ostream* trace, int generation, const Population& population) {
    if (!trace) return;
    const std::size_t m = population.empty() ? 0 : population[0].z.size();
    *trace << generation;
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<long long> values;
        values.reserve(population.size());
        for (const auto& ind : population) values.push_back(ind.z[c]);
        std::sort(values.begin(), values.end());
        *trace << ',' << values.back() << ',' << values[values.size() / 2];
    }
    *trace << '\n';
}

GaResult evolve(const Instance& inst, const GaParams& params, std::span<const CommitteeConfig> seeds,
                EliteKind kind, bool keep_all_generations, std::ostream* trace) {
    params.validate();
    if (kind == EliteKind::Nsga3 && params.reference_points.empty())
        throw std::invalid_argument("nsga3: reference points required");

    Rng init_rng(derive_seed(params.master_seed, 1));
    Rng crossover_rng(derive_seed(params.master_seed, 2));
    Rng mutation_rng(derive_seed(params.master_seed, 3));
    Rng tournament_rng(derive_seed(params.master_seed, 4));
    Rng mating_rng(derive_seed(params.master_seed, 5));
    Rng elite_rng(derive_seed(params.master_seed, 6));

    GaResult result;
    Population offspring = initialise_population(inst, params.population_size, seeds, init_rng);
    if (keep_all_generations) result.generations.push_back(offspring);
    write_trace(trace, 0, offspring);

    for (int g = 1; g <= params.generations; ++g) {
        Population parents = std::move(offspring);
        std::vector<ObjectiveVector> points;
        points.reserve(parents.size());
        for (const auto& ind : parents) points.push_back(ind.z);

        std::vector<int> elite_indices =
            kind == EliteKind::Nsga2
                ? elite2(points, params.population_size)
                : elite3(points, params.population_size, params.reference_points, elite_rng);

        std::vector<ObjectiveVector> elite_points;
        elite_points.reserve(elite_indices.size());
        for (int i : elite_indices) elite_points.push_back(points[i]);
        std::vector<int> pool = tournament(elite_points, params.tournament_rounds, tournament_rng);

        offspring.clear();
        offspring.reserve(params.population_size);
        for (int i : elite_indices) offspring.push_back(parents[i]);
        if (pool.empty()) pool.push_back(0);  // degenerate elite of one
        while (static_cast<int>(offspring.size()) < params.population_size) {
            const Individual& p1 = parents[elite_indices[pool[mating_rng.uniform_int(
                0, static_cast<int>(pool.size()) - 1)]]];
            const Individual& p2 = parents[elite_indices[pool[mating_rng.uniform_int(
                0, static_cast<int>(pool.size()) - 1)]]];
            CommitteeConfig child = crossover(inst, p1.config, p2.config, crossover_rng);
            child = mutate(inst, child, params.mutation_percent, mutation_rng);
            offspring.push_back(make_individual(inst, std::move(child)));
        }
        if (keep_all_generations) result.generations.push_back(offspring);
        write_trace(trace, g, offspring);
    }
    result.final_population = std::move(offspring);
    return result;
}

}  // namespace

GaResult nsga2(const Instance& inst, const GaParams& params, std::span<const CommitteeConfig> seeds,
               bool keep_all_generations, std::ostream* trace) {
    return evolve(inst, params, seeds, EliteKind::Nsga2, keep_all_generations, trace);
}

GaResult nsga3(const Instance& inst, const GaParams& params, std::span<const CommitteeConfig> seeds,
               bool keep_all_generations, std::ostream* trace) {
    return evolve(inst, params, seeds, EliteKind::Nsga3, keep_all_generations, trace);
}

}  // namespace defsched
