#include "defsched/epsilon.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

namespace defsched {

void EpsilonGrid::validate() const {
    for (std::size_t d = 0; d < dims.size(); ++d) {
        if (dims[d].min > dims[d].max) throw std::invalid_argument("grid: min above max");
        if (dims[d].increment < 1) throw std::invalid_argument("grid: increment must be >= 1");
        if (d > 0 && static_cast<int>(dims[d - 1].objective) >= static_cast<int>(dims[d].objective))
            throw std::invalid_argument("grid: dimensions must be in ascending objective order");
    }
}

long long InitReport::min_of(Obj o) const {
    for (std::size_t c = 0; c < objectives.size(); ++c)
        if (objectives[c] == o) return z_min[c];
    throw std::invalid_argument("objective not in init report");
}

long long InitReport::max_of(Obj o) const {
    for (std::size_t c = 0; c < objectives.size(); ++c)
        if (objectives[c] == o) return z_max[c];
    throw std::invalid_argument("objective not in init report");
}

double analytic_big_m(const Instance& inst, const ObjectiveSet& objectives) {
    long long total_penalty = 0;
    for (const auto& per_member : inst.penalty)
        for (int v : per_member) total_penalty += v;
    double sum = 0.0;
    for (Obj o : objectives) {
        switch (o) {
            case Obj::Z1:
                sum += static_cast<double>(inst.n_members) * inst.n_defences * inst.n_defences;
                break;
            case Obj::Z2:
                sum += static_cast<double>(inst.n_defences) * inst.n_roles * inst.n_subjects;
                break;
            case Obj::Z3: sum += static_cast<double>(total_penalty) * inst.duration; break;
            case Obj::Z4: sum += static_cast<double>(inst.n_members) * inst.n_days * inst.n_days; break;
            case Obj::Z5: sum += static_cast<double>(inst.n_defences) * inst.total_slots(); break;
        }
    }
    return 1.0 + sum;
}

InitReport initialisation_phase(const Instance& inst, const ObjectiveSet& objectives,
                                ProblemKind kind, double time_limit_seconds,
                                const CommitteeConfig* fixed_config) {
    auto started = std::chrono::steady_clock::now();
    InitReport report;
    report.objectives = objectives;
    report.big_m = analytic_big_m(inst, objectives);

    std::vector<ObjectiveVector> achieved;
    for (Obj primary : objectives) {
        SolveRequest request;
        request.kind = kind;
        if (fixed_config) request.fixed_config = *fixed_config;
        request.active = objectives;
        request.primary = primary;
        request.big_m = report.big_m;
        request.time_limit_seconds = time_limit_seconds;
        SolveResult result = optimise(inst, request);
        if (result.status == SolveStatus::Infeasible)
            throw InfeasibleInstanceError("initialisation: the instance admits no feasible solution");
        if (!result.has_solution())
            throw InfeasibleInstanceError(
                "initialisation: time limit hit before any feasible solution was found");
        report.statuses.push_back(result.status);
        report.seeds.push_back(*result.solution);
        achieved.push_back(result.z);
    }

    const std::size_t m = objectives.size();
    report.z_min.assign(m, 0);
    report.z_max.assign(m, 0);
    for (std::size_t c = 0; c < m; ++c) {
        report.z_max[c] = achieved[c][c];  // the solve maximizing objective c
        long long lo = achieved[0][c];
        for (const auto& z : achieved) lo = std::min(lo, z[c]);
        report.z_min[c] = lo;
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

std::vector<std::optional<long long>> objective_floors(const Instance& inst,
                                                       const ObjectiveSet& objectives,
                                                       ProblemKind kind, double time_limit_seconds,
                                                       const CommitteeConfig* fixed_config) {
    std::vector<std::optional<long long>> floors;
    for (Obj o : objectives) {
        SolveRequest request;
        request.kind = kind;
        if (fixed_config) request.fixed_config = *fixed_config;
        request.active = {o};
        request.primary = o;
        request.minimize_primary = true;
        request.time_limit_seconds = time_limit_seconds;
        SolveResult result = optimise(inst, request);
        if (result.status == SolveStatus::Infeasible)
            throw InfeasibleInstanceError("floors: the instance admits no feasible solution");
        if (result.has_solution())
            floors.push_back(result.z[0]);
        else
            floors.push_back(std::nullopt);
    }
    return floors;
}

EpsilonGrid make_grid(const InitReport& report, Obj primary, GridPolicy policy,
                      const std::vector<std::optional<long long>>* floors) {
    EpsilonGrid grid;
    for (std::size_t c = 0; c < report.objectives.size(); ++c) {
        if (report.objectives[c] == primary) continue;
        GridDimension dim;
        dim.objective = report.objectives[c];
        dim.min = report.z_min[c];
        if (floors && (*floors)[c]) dim.min = std::min(dim.min, **(floors->begin() + c));
        dim.max = report.z_max[c];
        long long range = dim.max - dim.min;
        dim.increment = policy == GridPolicy::Unit ? 1 : std::max<long long>(1, (range + 9) / 10);
        grid.dims.push_back(dim);
    }
    std::sort(grid.dims.begin(), grid.dims.end(), [](const GridDimension& a, const GridDimension& b) {
        return static_cast<int>(a.objective) < static_cast<int>(b.objective);
    });
    grid.validate();
    return grid;
}

bool not_skip(std::span<const long long> epsilon, std::span<const FoundRecord> found,
              std::span<const std::vector<long long>> infeasible) {
    auto leq = [](std::span<const long long> a, std::span<const long long> b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] > b[i]) return false;
        return true;
    };
    for (const FoundRecord& record : found)
        if (leq(record.solved_at, epsilon) && leq(epsilon, record.bounded_values)) return false;
    for (const auto& bad : infeasible)
        if (leq(bad, epsilon)) return false;
    return true;
}

EpsilonRun augmented_epsilon_constraint(const Instance& inst, ProblemKind kind,
                                        const EpsilonGrid& grid, Obj primary,
                                        double time_limit_seconds,
                                        const CommitteeConfig* fixed_config, bool skipping_enabled) {
    grid.validate();
    EpsilonRun run;
    run.active.push_back(primary);
    for (const auto& dim : grid.dims) run.active.push_back(dim.objective);
    std::sort(run.active.begin(), run.active.end(),
              [](Obj a, Obj b) { return static_cast<int>(a) < static_cast<int>(b); });

    SolveRequest request;
    request.kind = kind;
    if (fixed_config) request.fixed_config = *fixed_config;
    request.active = run.active;
    request.primary = primary;
    request.time_limit_seconds = time_limit_seconds;
    for (const auto& dim : grid.dims)
        request.augmentation[dim.objective] = {dim.min, dim.max};

    std::vector<FoundRecord> found;
    std::vector<std::vector<long long>> infeasible;
    std::vector<long long> epsilon(grid.dims.size());

    // Positions of the bounded objectives inside the active vector.
    std::vector<std::size_t> bounded_slot(grid.dims.size());
    for (std::size_t d = 0; d < grid.dims.size(); ++d)
        bounded_slot[d] = static_cast<std::size_t>(
            std::find(run.active.begin(), run.active.end(), grid.dims[d].objective) -
            run.active.begin());

    std::function<void(std::size_t)> walk = [&](std::size_t depth) {
        if (depth < grid.dims.size()) {
            const GridDimension& dim = grid.dims[depth];
            for (long long e = dim.min; e <= dim.max; e += dim.increment) {
                epsilon[depth] = e;
                walk(depth + 1);
            }
            return;
        }
        EpsilonIteration iteration;
        iteration.epsilon = epsilon;
        if (skipping_enabled && !not_skip(epsilon, found, infeasible)) {
            iteration.skipped = true;
            run.iterations.push_back(std::move(iteration));
            return;
        }
        request.epsilon_bounds.clear();
        for (std::size_t d = 0; d < grid.dims.size(); ++d)
            request.epsilon_bounds[grid.dims[d].objective] = epsilon[d];

        auto t0 = std::chrono::steady_clock::now();
        SolveResult result = optimise(inst, request);
        iteration.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        iteration.status = result.status;
        ++run.solves;
        // Infeasible is a proven outcome; only deadline hits spoil all_optimal.
        if (result.status == SolveStatus::FeasibleTimeout ||
            result.status == SolveStatus::UnknownTimeout)
            run.all_optimal = false;

        if (result.has_solution()) {
            iteration.z = result.z;
            FoundRecord record;
            record.solved_at = epsilon;
            record.bounded_values.resize(grid.dims.size());
            for (std::size_t d = 0; d < grid.dims.size(); ++d)
                record.bounded_values[d] = result.z[bounded_slot[d]];
            found.push_back(std::move(record));
            run.solutions.push_back(std::move(*result.solution));
            run.solution_vectors.push_back(result.z);
            run.solution_statuses.push_back(result.status);
        } else if (result.status == SolveStatus::Infeasible) {
            infeasible.push_back(epsilon);
        }
        // UnknownTimeout: neither proven infeasible nor solved; remembered in
        // the iteration record only.
        run.iterations.push_back(std::move(iteration));
    };
    walk(0);

    std::vector<FrontEntry> entries;
    entries.reserve(run.solution_vectors.size());
    for (std::size_t i = 0; i < run.solution_vectors.size(); ++i)
        entries.push_back({run.solution_vectors[i], static_cast<long long>(i)});
    run.front = merge_nondominated(std::vector<FrontArchive>{FrontArchive(std::move(entries))});
    return run;
}

std::string iteration_ledger_csv(const EpsilonRun& run, const EpsilonGrid& grid) {
    std::ostringstream out;
    out << "iteration";
    for (const auto& dim : grid.dims) out << ",eps_" << obj_name(dim.objective);
    out << ",skipped,status,seconds";
    for (Obj o : run.active) out << ',' << obj_name(o);
    out << '\n';
    for (std::size_t i = 0; i < run.iterations.size(); ++i) {
        const EpsilonIteration& it = run.iterations[i];
        out << i;
        for (long long e : it.epsilon) out << ',' << e;
        out << ',' << (it.skipped ? 1 : 0) << ','
            << (it.skipped ? "SKIPPED" : status_name(it.status)) << ',';
        char buffer[32];
        std::snprintf(buffer, sizeof buffer, "%.3f", it.seconds);
        out << buffer;
        for (std::size_t c = 0; c < run.active.size(); ++c) {
            out << ',';
            if (!it.z.empty()) out << it.z[c];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace defsched
