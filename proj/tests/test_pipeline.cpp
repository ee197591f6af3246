#include "defsched/pipeline.hpp"

#include "defsched/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace defsched;
using namespace defsched::testing;

namespace {

RunConfig tiny_decomp_config(std::uint64_t seed) {
    RunConfig cfg;
    cfg.method = Method::DecompNsga2;
    cfg.ga.population_size = 8;
    cfg.ga.generations = 6;
    cfg.ga.mutation_percent = 20;
    cfg.ga.fronts_kept = kAllFronts;
    cfg.ga.master_seed = seed;
    cfg.time_limit_seconds = 1e6;
    cfg.init_time_limit_seconds = 1e6;
    return cfg;
}

}  // namespace

TEST_CASE("monolithic unit grid equals the oracle front on T1") {
    Instance t1 = make_t1();
    RunConfig cfg;
    cfg.method = Method::MonolithicEps;
    cfg.time_limit_seconds = 1e6;
    cfg.init_time_limit_seconds = 1e6;
    MethodResult result = run_monolithic(t1, cfg);
    CHECK(result.front.front_vectors() == oracle_front(t1).front_vectors());
    CHECK(result.all_optimal);
    CHECK(result.hypervolume >= 0.0);
}

TEST_CASE("tenth grid front is contained in the unit grid front") {
    Instance inst = tiny_instance(100);
    RunConfig cfg;
    cfg.method = Method::MonolithicEps;
    cfg.time_limit_seconds = 1e6;
    cfg.init_time_limit_seconds = 1e6;
    MethodResult unit = run_monolithic(inst, cfg);
    cfg.mono_grid = GridPolicy::Tenth;
    MethodResult tenth = run_monolithic(inst, cfg);
    auto unit_set = vector_set(unit.front);
    for (const auto& z : tenth.front.front_vectors())
        CHECK(unit_set.count(z) == 1);
}

TEST_CASE("decomposition front solutions are feasible and inside the oracle front") {
    Instance inst = tiny_instance(101);
    RunConfig cfg = tiny_decomp_config(5);
    MethodResult result = run_decomposition(inst, cfg);
    REQUIRE_FALSE(result.front.empty());
    auto oracle = vector_set(oracle_front(inst));
    for (const auto& e : result.front.entries()) {
        CHECK(oracle.count(e.z) == 1);
        REQUIRE(e.payload >= 0);
        const FullSolution& s = result.solutions[static_cast<std::size_t>(e.payload)];
        CHECK(check_feasible(inst, s).feasible());
        CHECK(evaluate(inst, s, monolithic_objectives()) == e.z);
    }
}

TEST_CASE("single partial solution reduces to its stage-2 front with constant committee objectives") {
    Instance t1 = make_t1();
    RunConfig cfg = tiny_decomp_config(1);
    cfg.ga.population_size = 4;
    cfg.ga.generations = 0;
    // All four T1 init seeds are the same config, so exactly one config
    // reaches stage 2 after deduplication.
    MethodResult result = run_decomposition(t1, cfg);
    CHECK(result.configs_evaluated >= 1);
    REQUIRE_FALSE(result.front.empty());
    long long z1 = result.front.entries()[0].z[0];
    long long z2 = result.front.entries()[0].z[1];
    for (const auto& e : result.front.entries()) {
        CHECK(e.z[0] == z1);
        CHECK(e.z[1] == z2);
    }
}

TEST_CASE("adapted initialisation counting") {
    Instance t1 = make_t1();
    Rng rng(17);
    std::vector<CommitteeConfig> seeds = {CommitteeConfig{{0, 2, 1, 3}}, CommitteeConfig{{0, 3, 1, 2}}};
    auto two = adapted_initialisation(t1, seeds, {0.5}, 1, rng);
    CHECK(two.size() == 3);  // 2 seeds + 1 pair

    std::vector<CommitteeConfig> four = {CommitteeConfig{{0, 2, 1, 3}}, CommitteeConfig{{0, 3, 1, 2}},
                                         CommitteeConfig{{0, 2, 1, 2}}, CommitteeConfig{{0, 3, 1, 3}}};
    auto forty = adapted_initialisation(t1, four, {0.25, 0.5, 0.75}, 2, rng);
    CHECK(forty.size() == 40);  // 4 + 6 pairs * 3 probabilities * 2 repetitions
    for (const auto& config : forty) CHECK(config_feasible(t1, config));
}

TEST_CASE("sweep of one seed equals the single run and reruns are identical") {
    Instance inst = tiny_instance(102);
    RunConfig cfg = tiny_decomp_config(9);
    ComparisonRow single = summarize(run_decomposition(inst, cfg), cfg, nullptr);
    cfg.sweep_seeds = {9};
    ComparisonRow swept = sweep(inst, cfg, nullptr);
    CHECK(swept.hypervolume == doctest::Approx(single.hypervolume));
    CHECK(swept.n0 == doctest::Approx(single.n0));
    CHECK(swept.solutions == doctest::Approx(single.solutions));

    cfg.sweep_seeds = {1, 2, 3};
    ComparisonRow a = sweep(inst, cfg, nullptr);
    ComparisonRow b = sweep(inst, cfg, nullptr);
    // Timing columns are wall-clock; every other column must be identical.
    CHECK(a.hypervolume == b.hypervolume);
    CHECK(a.n0 == b.n0);
    CHECK(a.n0_vs_baseline == b.n0_vs_baseline);
    CHECK(a.solutions == b.solutions);
    CHECK(a.runs == b.runs);
}

TEST_CASE("mean hypervolume is the arithmetic mean of per-seed values") {
    Instance inst = tiny_instance(103);
    RunConfig cfg = tiny_decomp_config(0);
    double total = 0.0;
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        RunConfig one = cfg;
        one.ga.master_seed = seed;
        total += run_decomposition(inst, one).hypervolume;
    }
    cfg.sweep_seeds = {11, 12, 13};
    ComparisonRow row = sweep(inst, cfg, nullptr);
    CHECK(row.hypervolume == doctest::Approx(total / 3.0));
}

TEST_CASE("n0 versus baseline counts non-dominated entries") {
    FrontArchive front(std::vector<FrontEntry>{{{1, 0}, 0}, {{0, 1}, 1}});
    FrontArchive baseline(std::vector<FrontEntry>{{{1, 0}, 0}, {{0, 1}, 1}});
    // Nothing dominates itself, so a front compared to itself keeps its size.
    CHECK(count_not_dominated_by(front, baseline) == 2);
    FrontArchive stronger(std::vector<FrontEntry>{{{2, 2}, 0}});
    CHECK(count_not_dominated_by(front, stronger) == 0);
}

TEST_CASE("dedup of identical configs never changes the merged front") {
    Instance inst = tiny_instance(104);
    RunConfig cfg = tiny_decomp_config(21);
    MethodResult result = run_decomposition(inst, cfg);
    // Rerun with a population that duplicates every individual via
    // keep_all_generations off/on: the merged front must stay inside the
    // oracle front either way; direct dedup equivalence is covered by the
    // merge tests, here we pin determinism of the merged set.
    MethodResult again = run_decomposition(inst, cfg);
    CHECK(vector_set(result.front) == vector_set(again.front));
}

TEST_CASE("threaded stage-2 matches the sequential result") {
    Instance inst = tiny_instance(105);
    RunConfig cfg = tiny_decomp_config(33);
    MethodResult sequential = run_decomposition(inst, cfg);
    cfg.threads = 4;
    MethodResult threaded = run_decomposition(inst, cfg);
    CHECK(vector_set(sequential.front) == vector_set(threaded.front));
}

TEST_CASE("nsga3 decomposition also lands inside the oracle front") {
    Instance inst = tiny_instance(106);
    RunConfig cfg = tiny_decomp_config(3);
    cfg.method = Method::DecompNsga3;
    cfg.keep_all_generations = true;
    MethodResult result = run_decomposition(inst, cfg);
    REQUIRE_FALSE(result.front.empty());
    auto oracle = vector_set(oracle_front(inst));
    for (const auto& z : result.front.front_vectors()) CHECK(oracle.count(z) == 1);
}

TEST_CASE("small-preset monolithic smoke: tenth grid completes under timeouts") {
    Instance inst = generate_instance(small_preset(7));
    RunConfig cfg;
    cfg.method = Method::MonolithicEps;
    cfg.mono_grid = GridPolicy::Tenth;
    // Generous enough that scheduler jitter cannot starve every iteration.
    cfg.time_limit_seconds = 0.05;
    cfg.init_time_limit_seconds = 0.5;
    MethodResult result = run_monolithic(inst, cfg);
    CHECK(result.hypervolume >= 0.0);
    CHECK(result.hypervolume <= 1.0);
    CHECK_FALSE(result.front.empty());
    for (const auto& e : result.front.entries()) {
        const FullSolution& s = result.solutions[static_cast<std::size_t>(e.payload)];
        CHECK(check_feasible(inst, s).feasible());
    }
}

TEST_CASE("small-preset decomposition smoke: nf=1 path under timeouts") {
    // Same seed as the monolithic smoke; that instance is known to schedule.
    Instance inst = generate_instance(small_preset(7));
    RunConfig cfg;
    cfg.method = Method::DecompNsga2;
    cfg.ga.population_size = 20;
    cfg.ga.generations = 10;
    cfg.ga.mutation_percent = 5;
    cfg.ga.fronts_kept = 1;
    cfg.ga.master_seed = 7;
    cfg.stage2_grid = GridPolicy::Tenth;
    cfg.time_limit_seconds = 0.05;
    cfg.init_time_limit_seconds = 0.5;
    MethodResult result = run_decomposition(inst, cfg);
    CHECK_FALSE(result.front.empty());
    CHECK(result.configs_evaluated >= 1);
    for (const auto& e : result.front.entries()) {
        const FullSolution& s = result.solutions[static_cast<std::size_t>(e.payload)];
        CHECK(check_feasible(inst, s).feasible());
    }
}

TEST_CASE("casestudy mode sizes the population from the relinking lattice") {
    Instance inst = tiny_instance(106);
    RunConfig cfg;
    cfg.method = Method::DecompCaseStudy;
    cfg.ga.generations = 2;
    cfg.ga.mutation_percent = 5;
    cfg.ga.master_seed = 3;
    cfg.relink_probabilities = {0.25, 0.5, 0.75};
    cfg.relink_repetitions = 2;
    cfg.time_limit_seconds = 1e6;
    cfg.init_time_limit_seconds = 1e6;
    MethodResult result = run_decomposition(inst, cfg);
    CHECK_FALSE(result.front.empty());
    auto oracle = vector_set(oracle_front(inst));
    for (const auto& z : result.front.front_vectors()) CHECK(oracle.count(z) == 1);
}
