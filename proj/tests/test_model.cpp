#include "defsched/model.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace defsched;
using namespace defsched::testing;

TEST_CASE("t1 reference solution is feasible") {
    Instance t1 = make_t1();
    FullSolution s = t1_reference_solution();
    CHECK(check_feasible(t1, s).feasible());
}

TEST_CASE("both defences in the same room window clash") {
    Instance t1 = make_t1();
    FullSolution s = t1_reference_solution();
    s.schedule.start[1] = {0, 0, 0};
    auto report = check_feasible(t1, s);
    REQUIRE_FALSE(report.feasible());
    bool room = false;
    for (const auto& v : report.violations) room = room || v.kind == ViolationKind::RoomOverlap;
    CHECK(room);
}

TEST_CASE("member outside availability window is flagged") {
    Instance t1 = make_t1();
    FullSolution s = t1_reference_solution();
    // member 2 is only available in slots 0-1; start defence 0 at slot 2
    // (defence 1 moved away to keep the room free).
    s.schedule.start[0] = {0, 2, 0};
    s.schedule.start[1] = {0, 0, 0};
    auto report = check_feasible(t1, s);
    REQUIRE_FALSE(report.feasible());
    bool unavailable = false;
    for (const auto& v : report.violations)
        unavailable = unavailable || (v.kind == ViolationKind::MemberUnavailable && v.member == 2);
    CHECK(unavailable);
}

TEST_CASE("out-of-range indices are malformed, not infeasible") {
    Instance t1 = make_t1();
    FullSolution s = t1_reference_solution();
    s.config.assignment[1] = 9;
    CHECK_THROWS_AS(check_feasible(t1, s), MalformedSolutionError);
    FullSolution bad_schedule = t1_reference_solution();
    bad_schedule.schedule.start[0].room = 3;
    CHECK_THROWS_AS(check_feasible(t1, bad_schedule), MalformedSolutionError);
}

TEST_CASE("day overrun is a violation") {
    Instance t1 = make_t1();
    FullSolution s = t1_reference_solution();
    s.schedule.start[1].slot = 3;  // duration 2 runs past the 4-slot day
    auto report = check_feasible(t1, s);
    bool overrun = false;
    for (const auto& v : report.violations) overrun = overrun || v.kind == ViolationKind::DayOverrun;
    CHECK(overrun);
}

TEST_CASE("z1 workload") {
    Instance t1 = make_t1();
    // loads (2,1,1,0): member 0 takes both committees' second seats impossible;
    // emulate via a instance-free check on a synthetic config over T1 shape:
    // member 0 twice (role 0 of defence 0 is fixed to member 0; use member 0
    // again as defence 1's role 1 would be ineligible, so check the formula
    // directly on loads through a valid T1 config instead.
    CommitteeConfig reference{{0, 2, 1, 3}};
    CHECK(eval_z1_workload(t1, reference) == -4);  // four members, load 1 each

    // loads (2,1,1,0) -> -(4+1+1) = -6, using a raw assignment vector.
    CommitteeConfig skewed{{0, 2, 1, 0}};
    CHECK(eval_z1_workload(t1, skewed) == -6);
}

TEST_CASE("z2 suitability on T1") {
    Instance t1 = make_t1();
    CHECK(eval_z2_suitability(t1, CommitteeConfig{{0, 2, 1, 3}}) == 2);
    CHECK(eval_z2_suitability(t1, CommitteeConfig{{0, 3, 1, 2}}) == 1);
    Instance bare = make_t1();
    bare.expertise_member = {{}, {}, {}, {}};
    bare.finalise();
    CHECK(eval_z2_suitability(bare, CommitteeConfig{{0, 2, 1, 3}}) == 0);
}

TEST_CASE("z3 accrues over every occupied slot") {
    Instance t1 = make_t1();
    FullSolution s = t1_reference_solution();
    // a[2][day 0][slot 0] = 1 and defence 0 occupies slots 0-1 with member 2.
    CHECK(eval_z3_preferences(t1, s) == -1);

    SUBCASE("zero penalties give zero") {
        Instance clean = make_t1();
        clean.penalty.assign(4, std::vector<int>(4, 0));
        clean.finalise();
        CHECK(eval_z3_preferences(clean, s) == 0);
    }
    SUBCASE("penalty one on all occupied slots counts duration times") {
        Instance heavy = make_t1();
        heavy.penalty.assign(4, std::vector<int>(4, 0));
        heavy.penalty[2] = {1, 1, 1, 1};
        heavy.finalise();
        // member 2 sits in defence 0 over slots 0-1.
        CHECK(eval_z3_preferences(heavy, s) == -2);
    }
}

TEST_CASE("z4 distinct day counting") {
    Instance t1 = make_t1();
    FullSolution s = t1_reference_solution();
    CHECK(eval_z4_days(t1, s) == -4);  // four members, one day each
}

TEST_CASE("z4 squares the day count") {
    // Two days, one member on both: days^2 = 4.
    Instance inst;
    inst.n_members = 2;
    inst.n_defences = 2;
    inst.n_roles = 1;
    inst.n_days = 3;
    inst.n_slots = 2;
    inst.n_rooms = 1;
    inst.n_subjects = 1;
    inst.duration = 1;
    inst.eligibility = {{{0}}, {{0, 1}}};
    inst.availability.assign(2, SlotMask(6));
    inst.availability[0].set_range(0, 5);
    inst.availability[1].set_range(0, 5);
    inst.expertise_member = {{}, {}};
    inst.expertise_defence = {{}, {}};
    inst.penalty.assign(2, std::vector<int>(6, 0));
    inst.finalise();
    FullSolution s;
    s.config.assignment = {0, 0};
    s.schedule.start = {{0, 0, 0}, {2, 0, 0}};  // days 0 and 2
    CHECK(eval_z4_days(inst, s) == -4);
}

TEST_CASE("z5 proxy counts common slots per defence") {
    Instance t1 = make_t1();
    CHECK(eval_z5_proxy(t1, CommitteeConfig{{0, 2, 1, 3}}) == 4);

    SUBCASE("everyone available everywhere") {
        Instance open = make_t1();
        for (auto& mask : open.availability) mask.set_range(0, 3);
        open.finalise();
        CHECK(eval_z5_proxy(open, CommitteeConfig{{0, 2, 1, 3}}) ==
              open.n_defences * open.n_days * open.n_slots);
    }
    SUBCASE("disjoint availabilities yield zero for that defence") {
        Instance split = make_t1();
        split.availability[0] = SlotMask(4);
        split.availability[0].set_range(2, 3);  // member 0 vs member 2 disjoint
        split.finalise();
        CommitteeConfig config{{0, 2, 1, 3}};
        CHECK(common_slots(split, config.committee(split, 0)).count() == 0);
    }
}

TEST_CASE("uniform loads satisfy the quadratic identity") {
    Instance t1 = make_t1();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Instance inst = tiny_instance(seed);
        Rng rng(seed);
        // constant-load configs: every defence uses a disjoint committee when
        // possible; fall back to verifying the identity on computed loads.
        CommitteeConfig config;
        config.assignment.clear();
        for (int j = 0; j < inst.n_defences; ++j) {
            auto committee = find_feasible_committee(inst, j);
            REQUIRE(committee.has_value());
            config.assignment.insert(config.assignment.end(), committee->begin(), committee->end());
        }
        std::vector<long long> loads(inst.n_members, 0);
        for (int i : config.assignment) ++loads[i];
        long long expected = 0;
        for (long long l : loads) expected += l * l;
        CHECK(eval_z1_workload(inst, config) == -expected);
    }
}

TEST_CASE("z5 of a feasible config is at least the defence count") {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
        Instance inst = tiny_instance(seed);
        CommitteeConfig config;
        for (int j = 0; j < inst.n_defences; ++j) {
            auto committee = find_feasible_committee(inst, j);
            REQUIRE(committee.has_value());
            config.assignment.insert(config.assignment.end(), committee->begin(), committee->end());
        }
        CHECK(eval_z5_proxy(inst, config) >= inst.n_defences);
    }
}

TEST_CASE("degenerate instances are reported") {
    Instance inst = make_t1();
    // Make member 3 unavailable everywhere: defence 1 can then only use
    // member 2, which clashes with nothing — still feasible. Remove both
    // candidates' windows instead.
    inst.availability[2] = SlotMask(4);
    inst.availability[3] = SlotMask(4);
    inst.finalise();
    auto bad = inst.unsatisfiable_defences();
    REQUIRE(bad.size() == 2);
    CHECK(bad[0] == 0);
    CHECK(bad[1] == 1);
}

TEST_CASE("check_config matches the feasibility notion used by the GA") {
    Instance t1 = make_t1();
    CHECK(config_feasible(t1, CommitteeConfig{{0, 2, 1, 3}}));
    CHECK(config_feasible(t1, CommitteeConfig{{0, 3, 1, 2}}));
    // member 2 in both defences: each defence alone has a window, so the
    // config passes (overlap is a schedule-level concern)…
    CHECK(config_feasible(t1, CommitteeConfig{{0, 2, 1, 2}}));
    // …but eligibility violations do not.
    CHECK_FALSE(config_feasible(t1, CommitteeConfig{{2, 2, 1, 3}}));
    CHECK_FALSE(config_feasible(t1, CommitteeConfig{{0, 0, 1, 3}}));  // duplicate in defence 0
}
