#include "defsched/epsilon.hpp"

#include "defsched/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace defsched;
using namespace defsched::testing;

TEST_CASE("not_skip rules") {
    // Solved at (4,4), achieved (5,5): anything between is provably covered.
    std::vector<FoundRecord> found = {{{5, 5}, {4, 4}}};
    std::vector<std::vector<long long>> infeasible;
    std::vector<long long> eps = {4, 5};
    CHECK_FALSE(not_skip(eps, found, infeasible));

    // Bounds above the record's achieved values must run.
    eps = {6, 5};
    CHECK(not_skip(eps, found, infeasible));

    // Bounds below the record's solved-at point are not covered by it.
    eps = {3, 3};
    std::vector<FoundRecord> offset = {{{4, 2}, {4, 2}}};
    CHECK(not_skip(eps, offset, infeasible));

    // Tightening a proven-infeasible bound vector stays infeasible.
    infeasible = {{3, 3}};
    eps = {4, 3};
    CHECK_FALSE(not_skip(eps, std::vector<FoundRecord>{}, infeasible));
    eps = {2, 3};
    CHECK(not_skip(eps, std::vector<FoundRecord>{}, infeasible));
}

TEST_CASE("initialisation on T1 matches the oracle extremes") {
    Instance t1 = make_t1();
    InitReport report = initialisation_phase(t1, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
    // The oracle front of T1 is the single vector (-4, 2, -1, -4); the only
    // other feasible point (-4, 1, -1, -4) is dominated, so each payoff solve
    // returns the same solution and min == max.
    CHECK(report.z_max == ObjectiveVector{-4, 2, -1, -4});
    CHECK(report.z_min == ObjectiveVector{-4, 2, -1, -4});
    REQUIRE(report.seeds.size() == 4);
    for (const auto& seed : report.seeds) CHECK(check_feasible(t1, seed).feasible());
}

TEST_CASE("initialisation achieves the oracle maximum per objective") {
    for (std::uint64_t seed = 50; seed < 54; ++seed) {
        Instance inst = tiny_instance(seed);
        auto all = enumerate_all(inst);
        REQUIRE_FALSE(all.empty());
        InitReport report =
            initialisation_phase(inst, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
        for (std::size_t c = 0; c < monolithic_objectives().size(); ++c) {
            long long best = all[0].z[c];
            for (const auto& e : all) best = std::max(best, e.z[c]);
            CHECK(report.z_max[c] == best);
            CHECK(report.z_min[c] <= report.z_max[c]);
        }
    }
}

TEST_CASE("single-objective init collapses to the optimum") {
    Instance t1 = make_t1();
    InitReport report = initialisation_phase(t1, {Obj::Z2}, ProblemKind::Monolithic, 1e6);
    CHECK(report.z_min == report.z_max);
    CHECK(report.z_max == ObjectiveVector{2});
}

TEST_CASE("infeasible instance raises before any method runs") {
    Instance inst = make_t1();
    inst.availability[2] = SlotMask(4);
    inst.availability[3] = SlotMask(4);
    inst.finalise();
    CHECK_THROWS_AS(
        initialisation_phase(inst, monolithic_objectives(), ProblemKind::Monolithic, 1e6),
        InfeasibleInstanceError);
}

TEST_CASE("degenerate grid solves exactly once") {
    Instance t1 = make_t1();
    InitReport report = initialisation_phase(t1, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
    EpsilonGrid grid = make_grid(report, Obj::Z1, GridPolicy::Unit);
    EpsilonRun run = augmented_epsilon_constraint(t1, ProblemKind::Monolithic, grid, Obj::Z1, 1e6);
    CHECK(run.solves == 1);
    CHECK(run.front.front_vectors() == std::vector<ObjectiveVector>{{-4, 2, -1, -4}});
}

TEST_CASE("tenth-policy grids have at most eleven values per dimension") {
    InitReport report;
    report.objectives = {Obj::Z1, Obj::Z2};
    report.z_min = {-25, 0};
    report.z_max = {0, 4};
    EpsilonGrid grid = make_grid(report, Obj::Z1, GridPolicy::Tenth);
    REQUIRE(grid.dims.size() == 1);
    long long count = 0;
    for (long long e = grid.dims[0].min; e <= grid.dims[0].max; e += grid.dims[0].increment) ++count;
    CHECK(count <= 11);

    report.z_min = {-25, -25};
    EpsilonGrid wide = make_grid(report, Obj::Z1, GridPolicy::Tenth);
    count = 0;
    for (long long e = wide.dims[0].min; e <= wide.dims[0].max; e += wide.dims[0].increment) ++count;
    CHECK(count <= 11);
}

TEST_CASE("unit grid over the floors recovers the full oracle front") {
    for (std::uint64_t seed : {0ull, 1ull, 2ull, 60ull}) {
        Instance inst = seed == 60 ? make_t1() : tiny_instance(seed);
        InitReport report =
            initialisation_phase(inst, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
        auto floors = objective_floors(inst, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
        EpsilonGrid grid = make_grid(report, Obj::Z1, GridPolicy::Unit, &floors);
        EpsilonRun run = augmented_epsilon_constraint(inst, ProblemKind::Monolithic, grid, Obj::Z1, 1e6);
        CHECK(run.all_optimal);
        auto oracle = oracle_front(inst);
        CHECK(run.front.front_vectors() == oracle.front_vectors());
    }
}

TEST_CASE("objective floors are the oracle minima") {
    for (std::uint64_t seed : {0ull, 2ull}) {
        Instance inst = tiny_instance(seed);
        auto all = enumerate_all(inst);
        REQUIRE_FALSE(all.empty());
        auto floors = objective_floors(inst, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
        for (std::size_t c = 0; c < monolithic_objectives().size(); ++c) {
            long long lowest = all[0].z[c];
            for (const auto& e : all) lowest = std::min(lowest, e.z[c]);
            REQUIRE(floors[c].has_value());
            CHECK(*floors[c] == lowest);
        }
    }
}

TEST_CASE("skip logic changes neither the front nor feasibility classifications") {
    for (std::uint64_t seed : {5ull, 6ull}) {
        Instance inst = tiny_instance(seed);
        InitReport report =
            initialisation_phase(inst, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
        EpsilonGrid grid = make_grid(report, Obj::Z1, GridPolicy::Unit);
        EpsilonRun with = augmented_epsilon_constraint(inst, ProblemKind::Monolithic, grid, Obj::Z1,
                                                       1e6, nullptr, true);
        EpsilonRun without = augmented_epsilon_constraint(inst, ProblemKind::Monolithic, grid,
                                                          Obj::Z1, 1e6, nullptr, false);
        CHECK(with.front.front_vectors() == without.front.front_vectors());
        CHECK(with.solves <= without.solves);
    }
}

TEST_CASE("every returned solution is feasible and mutually non-dominated") {
    Instance inst = tiny_instance(8);
    InitReport report =
        initialisation_phase(inst, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
    EpsilonGrid grid = make_grid(report, Obj::Z1, GridPolicy::Unit);
    EpsilonRun run = augmented_epsilon_constraint(inst, ProblemKind::Monolithic, grid, Obj::Z1, 1e6);
    for (const auto& s : run.solutions) CHECK(check_feasible(inst, s).feasible());
    auto vectors = run.front.front_vectors();
    for (const auto& a : vectors)
        for (const auto& b : vectors)
            if (a != b) CHECK_FALSE(dominates(a, b));
}

TEST_CASE("iteration ledger is well-formed CSV") {
    Instance t1 = make_t1();
    InitReport report = initialisation_phase(t1, monolithic_objectives(), ProblemKind::Monolithic, 1e6);
    EpsilonGrid grid = make_grid(report, Obj::Z1, GridPolicy::Unit);
    EpsilonRun run = augmented_epsilon_constraint(t1, ProblemKind::Monolithic, grid, Obj::Z1, 1e6);
    std::string csv = iteration_ledger_csv(run, grid);
    CHECK(csv.rfind("iteration,eps_z2,eps_z3,eps_z4,skipped,status,seconds", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(run.iterations.size()) + 1);
}
