#pragma once

#include <vector>

#include "defsched/model.hpp"
#include "defsched/pareto.hpp"

namespace defsched {

/// Desk-scale exhaustive enumeration. Shares nothing with the search backend
/// beyond the model evaluators; used as ground truth in tests and acceptance
/// runs.

struct OracleCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnumeratedSolution {
    FullSolution solution;
    ObjectiveVector z;
};

/// Every feasible FullSolution with its objective vector. Refuses when the
/// product of committee × start × room choices exceeds `cap`.
std::vector<EnumeratedSolution> enumerate_all(const Instance& inst,
                                              const ObjectiveSet& objectives = monolithic_objectives(),
                                              long long cap = 1'000'000);

/// Rank-0 set of enumerate_all; payload ids index into the enumeration order.
FrontArchive oracle_front(const Instance& inst,
                          const ObjectiveSet& objectives = monolithic_objectives(),
                          long long cap = 1'000'000);

/// All feasible committees of one defence (eligibility, distinctness, common
/// window), in lexicographic role order.
std::vector<std::vector<int>> oracle_committees(const Instance& inst, int defence);

}  // namespace defsched
