#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "defsched/io.hpp"
#include "defsched/model.hpp"
#include "defsched/oracle.hpp"
#include "defsched/rng.hpp"

namespace defsched::testing {

/// T1 solution used across tests: committees {m0,m2} / {m1,m3}, defence 0 at
/// (day 0, slot 0), defence 1 at (day 0, slot 2), both in room 0.
inline FullSolution t1_reference_solution() {
    FullSolution s;
    s.config.assignment = {0, 2, 1, 3};
    s.schedule.start = {{0, 0, 0}, {0, 2, 0}};
    return s;
}

/// Tiny random instances for oracle-backed tests: ≤6 members, ≤3 defences,
/// ≤2 rooms, enumeration safely under the oracle cap.
inline GeneratorSpec tiny_spec(std::uint64_t seed) {
    GeneratorSpec spec;
    Rng rng(derive_seed(seed, 99));
    spec.n_members = rng.uniform_int(4, 6);
    spec.n_defences = rng.uniform_int(2, 3);
    spec.n_roles = 2;
    spec.preassigned_roles = 1;
    spec.n_days = rng.uniform_int(1, 2);
    spec.n_slots = rng.uniform_int(4, 5);
    spec.n_rooms = rng.uniform_int(1, 2);
    spec.n_subjects = 3;
    spec.duration = rng.uniform_int(1, 2);
    spec.availability_density = 0.75;
    spec.eligibility_density = 0.5;
    spec.penalty_density = 0.25;
    spec.seed = seed;
    return spec;
}

/// Generator feasibility is per defence; tests want instances that admit at
/// least one full schedule, so resample until the oracle finds one.
inline Instance tiny_instance(std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        std::uint64_t mixed = seed + 7919 * attempt;
        Instance inst = generate_instance(tiny_spec(mixed));
        if (!enumerate_all(inst).empty()) return inst;
    }
}

inline std::set<ObjectiveVector> vector_set(const FrontArchive& archive) {
    std::set<ObjectiveVector> out;
    for (const auto& e : archive.entries()) out.insert(e.z);
    return out;
}

}  // namespace defsched::testing
