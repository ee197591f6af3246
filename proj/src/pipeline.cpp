#include "defsched/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

namespace defsched {

const char* method_name(Method method) {
    switch (method) {
        case Method::MonolithicEps: return "mono-eps";
        case Method::DecompNsga2: return "decomp-nsga2";
        case Method::DecompNsga3: return "decomp-nsga3";
        case Method::DecompCaseStudy: return "casestudy";
    }
    return "?";
}

void RunConfig::validate() const {
    ga.validate();
    if (time_limit_seconds <= 0 || init_time_limit_seconds <= 0)
        throw std::invalid_argument("run: time limits must be positive");
    if (relink_repetitions < 1) throw std::invalid_argument("run: n_h must be >= 1");
    for (double v : relink_probabilities)
        if (v <= 0.0 || v >= 1.0)
            throw std::invalid_argument("run: relink probabilities must lie in (0, 1)");
    if (threads < 1) throw std::invalid_argument("run: threads must be >= 1");
    if (ga.fronts_kept != kAllFronts && ga.fronts_kept < 1)
        throw std::invalid_argument("run: n_f must be 1 (or all)");
}

long long count_not_dominated_by(const FrontArchive& front, const FrontArchive& baseline) {
    long long count = 0;
    for (const auto& entry : front.entries()) {
        bool dominated = false;
        for (const auto& base : baseline.entries())
            if (dominates(base.z, entry.z)) {
                dominated = true;
                break;
            }
        if (!dominated) ++count;
    }
    return count;
}

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ObjectiveVector reported_minima(const InitReport& init) {
    ObjectiveVector z_min;
    for (Obj o : monolithic_objectives()) z_min.push_back(init.min_of(o));
    return z_min;
}

ObjectiveVector reported_maxima(const InitReport& init) {
    ObjectiveVector z_max;
    for (Obj o : monolithic_objectives()) z_max.push_back(init.max_of(o));
    return z_max;
}

double front_hypervolume(const FrontArchive& front, const InitReport& init) {
    if (front.empty()) return 0.0;
    std::vector<ObjectiveVector> points;
    points.reserve(front.size());
    for (const auto& e : front.entries()) points.push_back(e.z);
    return normalized_hypervolume(points, reported_minima(init), reported_maxima(init));
}

/// Stage-2 outcome for one partial solution.
struct ConfigFront {
    std::vector<ObjectiveVector> vectors;  // 4-objective
    std::vector<FullSolution> solutions;
    int solves = 0;
    bool all_optimal = true;
    std::string ledger;
};

ConfigFront solve_stage2(const Instance& inst, const RunConfig& cfg, const InitReport& init,
                         const CommitteeConfig& config) {
    const Obj bounded = cfg.stage2_primary == Obj::Z3 ? Obj::Z4 : Obj::Z3;
    GridDimension dim;
    dim.objective = bounded;
    dim.min = init.min_of(bounded);
    dim.max = init.max_of(bounded);
    dim.increment = cfg.stage2_grid == GridPolicy::Unit
                        ? 1
                        : std::max<long long>(1, (dim.max - dim.min + 9) / 10);
    EpsilonGrid stage2_grid;
    stage2_grid.dims.push_back(dim);

    EpsilonRun run = augmented_epsilon_constraint(inst, ProblemKind::Stage2, stage2_grid,
                                                  cfg.stage2_primary, cfg.time_limit_seconds,
                                                  &config, cfg.skipping_enabled);
    ConfigFront out;
    out.solves = run.solves;
    out.all_optimal = run.all_optimal;
    out.ledger = iteration_ledger_csv(run, stage2_grid);

    const long long z1 = eval_z1_workload(inst, config);
    const long long z2 = eval_z2_suitability(inst, config);
    std::vector<std::size_t> slot(2);
    for (std::size_t c = 0; c < run.active.size(); ++c) {
        if (run.active[c] == Obj::Z3) slot[0] = c;
        if (run.active[c] == Obj::Z4) slot[1] = c;
    }
    for (std::size_t i = 0; i < run.solutions.size(); ++i) {
        const auto& z = run.solution_vectors[i];
        out.vectors.push_back({z1, z2, z[slot[0]], z[slot[1]]});
        out.solutions.push_back(run.solutions[i]);
    }
    return out;
}

}  // namespace

std::vector<CommitteeConfig> adapted_initialisation(const Instance& inst,
                                                    std::span<const CommitteeConfig> seeds,
                                                    const std::vector<double>& probabilities,
                                                    int repetitions, Rng& rng) {
    std::vector<CommitteeConfig> population(seeds.begin(), seeds.end());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        for (std::size_t j = i + 1; j < seeds.size(); ++j)
            for (double v : probabilities)
                for (int h = 0; h < repetitions; ++h)
                    population.push_back(non_uniform_crossover(inst, seeds[i], seeds[j], v, rng));
    return population;
}

MethodResult run_monolithic(const Instance& inst, const RunConfig& cfg) {
    cfg.validate();
    MethodResult result;
    auto t0 = std::chrono::steady_clock::now();
    result.init = initialisation_phase(inst, monolithic_objectives(), ProblemKind::Monolithic,
                                       cfg.init_time_limit_seconds);
    // The payoff-table minima can sit above parts of the front; widen the
    // grid down to the true objective floors so the unit lattice covers
    // every non-dominated point.
    auto floors = objective_floors(inst, monolithic_objectives(), ProblemKind::Monolithic,
                                   cfg.init_time_limit_seconds);
    result.init_seconds = elapsed_since(t0);

    t0 = std::chrono::steady_clock::now();
    EpsilonGrid grid = make_grid(result.init, cfg.mono_primary, cfg.mono_grid, &floors);
    EpsilonRun run = augmented_epsilon_constraint(inst, ProblemKind::Monolithic, grid,
                                                  cfg.mono_primary, cfg.time_limit_seconds, nullptr,
                                                  cfg.skipping_enabled);
    result.stage2_seconds = elapsed_since(t0);

    // Reorder each solution vector into canonical (Z1, Z2, Z3, Z4).
    std::vector<std::size_t> slots;
    for (Obj o : monolithic_objectives())
        slots.push_back(static_cast<std::size_t>(
            std::find(run.active.begin(), run.active.end(), o) - run.active.begin()));
    std::vector<FrontEntry> entries;
    for (std::size_t i = 0; i < run.solution_vectors.size(); ++i) {
        ObjectiveVector z;
        for (std::size_t slot : slots) z.push_back(run.solution_vectors[i][slot]);
        entries.push_back({std::move(z), static_cast<long long>(i)});
    }
    result.front = merge_nondominated(std::vector<FrontArchive>{FrontArchive(std::move(entries))});
    result.solutions = run.solutions;
    result.total_solutions = static_cast<long long>(run.solutions.size());
    result.stage2_solves = run.solves;
    result.iteration_ledger = iteration_ledger_csv(run, grid);
    result.all_optimal = run.all_optimal &&
                         std::all_of(result.init.statuses.begin(), result.init.statuses.end(),
                                     [](SolveStatus s) { return s == SolveStatus::Optimal; });
    result.hypervolume = front_hypervolume(result.front, result.init);
    return result;
}

MethodResult run_decomposition(const Instance& inst, const RunConfig& cfg) {
    cfg.validate();
    const bool verbose = std::getenv("DEFSCHED_VERBOSE") != nullptr;
    MethodResult result;
    auto t0 = std::chrono::steady_clock::now();
    result.init = initialisation_phase(inst, monolithic_objectives(), ProblemKind::Monolithic,
                                       cfg.init_time_limit_seconds);
    result.init_seconds = elapsed_since(t0);

    // Stage 1: committee search on (Z1, Z2, Z5). One seed per init solve,
    // duplicates included (the case-study population size depends on the
    // full seed-pair lattice).
    t0 = std::chrono::steady_clock::now();
    std::vector<CommitteeConfig> seed_configs;
    for (const auto& seed : result.init.seeds) seed_configs.push_back(seed.config);

    GaParams params = cfg.ga;
    bool keep_all = cfg.keep_all_generations;
    std::vector<CommitteeConfig> initial = seed_configs;
    if (cfg.method == Method::DecompCaseStudy) {
        Rng relink_rng(derive_seed(params.master_seed, 7));
        initial = adapted_initialisation(inst, seed_configs, cfg.relink_probabilities,
                                         cfg.relink_repetitions, relink_rng);
        params.population_size = static_cast<int>(initial.size());
        keep_all = true;
    }
    if (cfg.method == Method::DecompNsga3 && params.reference_points.empty())
        params.reference_points = default_reference_points(3, 12);

    std::ostream* trace = verbose ? &std::cerr : nullptr;
    GaResult ga = cfg.method == Method::DecompNsga3
                      ? nsga3(inst, params, initial, keep_all, trace)
                      : nsga2(inst, params, initial, keep_all, trace);

    Population pool = keep_all ? Population{} : ga.final_population;
    if (keep_all)
        for (const auto& generation : ga.generations)
            pool.insert(pool.end(), generation.begin(), generation.end());

    // n_f filter on stage-1 objectives, then config dedup (first wins).
    std::vector<ObjectiveVector> pool_points;
    pool_points.reserve(pool.size());
    for (const auto& ind : pool) pool_points.push_back(ind.z);
    std::vector<int> pool_ranks = sort_fronts(pool_points);
    std::vector<CommitteeConfig> configs;
    std::map<std::vector<int>, bool> seen;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (cfg.ga.fronts_kept != kAllFronts && pool_ranks[i] >= cfg.ga.fronts_kept) continue;
        if (seen.emplace(pool[i].config.assignment, true).second)
            configs.push_back(pool[i].config);
    }
    result.stage1_seconds = elapsed_since(t0);
    result.configs_evaluated = static_cast<int>(configs.size());

    // Stage 2: one ε-constraint driver per configuration.
    t0 = std::chrono::steady_clock::now();
    std::vector<ConfigFront> fronts(configs.size());
    if (cfg.threads <= 1) {
        for (std::size_t c = 0; c < configs.size(); ++c)
            fronts[c] = solve_stage2(inst, cfg, result.init, configs[c]);
    } else {
        std::size_t next = 0;
        while (next < configs.size()) {
            std::size_t batch = std::min<std::size_t>(cfg.threads, configs.size() - next);
            std::vector<std::future<ConfigFront>> futures;
            for (std::size_t b = 0; b < batch; ++b)
                futures.push_back(std::async(std::launch::async, solve_stage2, std::cref(inst),
                                             std::cref(cfg), std::cref(result.init),
                                             std::cref(configs[next + b])));
            for (std::size_t b = 0; b < batch; ++b) fronts[next + b] = futures[b].get();
            next += batch;
        }
    }

    std::vector<FrontArchive> archives;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        ConfigFront& cf = fronts[c];
        result.stage2_solves += cf.solves;
        result.all_optimal = result.all_optimal && cf.all_optimal;
        result.iteration_ledger += "# config " + std::to_string(c) + "\n" + cf.ledger;
        if (cf.vectors.empty()) {
            if (verbose)
                std::cerr << "pipeline: config " << c << " produced no feasible schedule\n";
            continue;
        }
        std::vector<FrontEntry> entries;
        for (std::size_t i = 0; i < cf.vectors.size(); ++i) {
            entries.push_back(
                {cf.vectors[i], static_cast<long long>(result.solutions.size())});
            result.solutions.push_back(std::move(cf.solutions[i]));
        }
        result.total_solutions += static_cast<long long>(entries.size());
        archives.push_back(FrontArchive(std::move(entries)));
    }
    result.front = merge_nondominated(archives);
    result.stage2_seconds = elapsed_since(t0);
    result.all_optimal = result.all_optimal &&
                         std::all_of(result.init.statuses.begin(), result.init.statuses.end(),
                                     [](SolveStatus s) { return s == SolveStatus::Optimal; });
    result.hypervolume = front_hypervolume(result.front, result.init);
    return result;
}

MethodResult run_method(const Instance& inst, const RunConfig& cfg) {
    if (cfg.method == Method::MonolithicEps) return run_monolithic(inst, cfg);
    return run_decomposition(inst, cfg);
}

ComparisonRow summarize(const MethodResult& result, const RunConfig& cfg,
                        const FrontArchive* baseline) {
    ComparisonRow row;
    row.method = method_name(cfg.method);
    row.mutation_percent = cfg.ga.mutation_percent;
    row.fronts_kept = cfg.ga.fronts_kept == kAllFronts ? "all" : std::to_string(cfg.ga.fronts_kept);
    row.init_seconds = result.init_seconds;
    row.stage1_seconds = result.stage1_seconds;
    row.stage2_seconds = result.stage2_seconds;
    row.hypervolume = result.hypervolume;
    row.n0 = static_cast<double>(result.front.size());
    row.solutions = static_cast<double>(result.total_solutions);
    if (baseline) {
        row.has_baseline = true;
        row.n0_vs_baseline = static_cast<double>(count_not_dominated_by(result.front, *baseline));
    }
    return row;
}

ComparisonRow sweep(const Instance& inst, const RunConfig& cfg, const FrontArchive* baseline) {
    std::vector<std::uint64_t> seeds = cfg.sweep_seeds;
    if (seeds.empty()) seeds.push_back(cfg.ga.master_seed);
    ComparisonRow total;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        RunConfig one = cfg;
        one.ga.master_seed = seeds[s];
        ComparisonRow row = summarize(run_method(inst, one), one, baseline);
        if (s == 0) {
            total = row;
            continue;
        }
        total.init_seconds += row.init_seconds;
        total.stage1_seconds += row.stage1_seconds;
        total.stage2_seconds += row.stage2_seconds;
        total.hypervolume += row.hypervolume;
        total.n0_vs_baseline += row.n0_vs_baseline;
        total.n0 += row.n0;
        total.solutions += row.solutions;
    }
    const double n = static_cast<double>(seeds.size());
    total.runs = static_cast<int>(seeds.size());
    total.init_seconds /= n;
    total.stage1_seconds /= n;
    total.stage2_seconds /= n;
    total.hypervolume /= n;
    total.n0_vs_baseline /= n;
    total.n0 /= n;
    total.solutions /= n;
    return total;
}

namespace {

std::string fixed6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    return buffer;
}

}  // namespace

std::string comparison_csv_header() {
    return "method,m,n_f,runs,init_sec,stage1_sec,stage2_sec,hypervolume,n0_vs_baseline,n0,"
           "solutions\n";
}

std::string comparison_csv_row(const ComparisonRow& row) {
    std::ostringstream out;
    out << row.method << ',' << row.mutation_percent << ',' << row.fronts_kept << ',' << row.runs
        << ',' << fixed6(row.init_seconds) << ',' << fixed6(row.stage1_seconds) << ','
        << fixed6(row.stage2_seconds) << ',' << fixed6(row.hypervolume) << ',';
    if (row.has_baseline) out << fixed6(row.n0_vs_baseline);
    out << ',' << fixed6(row.n0) << ',' << fixed6(row.solutions) << '\n';
    return out.str();
}

}  // namespace defsched
