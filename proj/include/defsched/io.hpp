#pragma once

#include <cstdint>
#include <string>

#include "defsched/model.hpp"
#include "defsched/pareto.hpp"
#include "defsched/rng.hpp"

namespace defsched {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown at load time when some defence admits no committee with a common
/// window; the message names the offending defences.
struct DegenerateInstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Versioned JSON instance document: availability as per-member (day, slot)
/// lists, penalties sparse (nonzero entries only). Load validates the schema,
/// referential integrity, and rejects degenerate instances.
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
Instance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const Instance& inst);

void save_solution(const FullSolution& solution, const std::string& path);
FullSolution load_solution(const std::string& path, const Instance& inst);

/// Front CSV: one row per solution, objective columns then payload id,
/// sorted for byte-stable output.
void save_front_csv(const FrontArchive& front, const ObjectiveSet& objectives,
                    const std::string& path);
FrontArchive load_front_csv(const std::string& path);
/// Front JSON with embedded solutions, payload-addressable.
void save_front_json(const FrontArchive& front, const ObjectiveSet& objectives,
                     std::span<const FullSolution> solutions, const std::string& path);

// ---------------------------------------------------------------------------
// Random instance generation
// ---------------------------------------------------------------------------

struct GeneratorSpec {
    int n_members = 25;
    int n_defences = 20;
    int n_roles = 3;
    int preassigned_roles = 2;
    int n_days = 5;
    int n_slots = 8;
    int n_rooms = 2;
    int n_subjects = 6;
    int duration = 2;
    double availability_density = 0.6;
    double eligibility_density = 0.3;
    double penalty_density = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// 25 members, 20 defences, 2 preassigned roles + 1 selected.
GeneratorSpec small_preset(std::uint64_t seed);
/// 50 members, 40 defences, 1 preassigned role + 2 selected.
GeneratorSpec large_preset(std::uint64_t seed);
/// 47 members, 36 defences, 3 roles (1 preassigned), 16 days, 31 slots,
/// 2 rooms, duration 4.
GeneratorSpec case_study_preset(std::uint64_t seed);

/// Random instance matching the requested shape; every defence is guaranteed a
/// feasible committee with a common window (per-defence resampling, then
/// GenerationError).
Instance generate_instance(const GeneratorSpec& spec);

}  // namespace defsched
