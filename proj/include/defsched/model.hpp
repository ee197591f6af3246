#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace defsched {

// ---------------------------------------------------------------------------
// Objectives
// ---------------------------------------------------------------------------

/// The five objective functions, stored in canonical maximization sign:
/// minimized quantities (workload spread, preference penalties, committee
/// days) are kept negated, so dominance and ε-bounds read uniformly as ≥.
enum class Obj : int { Z1 = 0, Z2 = 1, Z3 = 2, Z4 = 3, Z5 = 4 };

using ObjectiveVector = std::vector<long long>;
using ObjectiveSet = std::vector<Obj>;

const char* obj_name(Obj o);
std::optional<Obj> obj_from_name(const std::string& name);

inline ObjectiveSet monolithic_objectives() { return {Obj::Z1, Obj::Z2, Obj::Z3, Obj::Z4}; }
inline ObjectiveSet stage1_objectives() { return {Obj::Z1, Obj::Z2, Obj::Z5}; }
inline ObjectiveSet stage2_objectives() { return {Obj::Z3, Obj::Z4}; }

// ---------------------------------------------------------------------------
// Bit mask over the calendar grid
// ---------------------------------------------------------------------------

/// Bitset over (day, slot) pairs; bit index = day * n_slots + slot. Also used
/// for start positions of fixed-length windows, with the same indexing.
struct SlotMask {
    std::vector<std::uint64_t> words;
    int bits = 0;

    SlotMask() = default;
    explicit SlotMask(int bit_count) : words((bit_count + 63) / 64, 0), bits(bit_count) {}

    void set(int bit) { words[bit >> 6] |= std::uint64_t(1) << (bit & 63); }
    void reset(int bit) { words[bit >> 6] &= ~(std::uint64_t(1) << (bit & 63)); }
    bool test(int bit) const { return (words[bit >> 6] >> (bit & 63)) & 1; }

    /// Set bits first..last inclusive.
    void set_range(int first, int last) {
        for (int b = first; b <= last; ++b) set(b);
    }

    int count() const;
    bool any() const;
    bool none() const { return !any(); }
    int find_first() const;  // -1 when empty

    SlotMask& operator&=(const SlotMask& other) {
        for (std::size_t w = 0; w < words.size(); ++w) words[w] &= other.words[w];
        return *this;
    }
    friend SlotMask operator&(SlotMask a, const SlotMask& b) { return a &= b; }

    SlotMask& operator|=(const SlotMask& other) {
        for (std::size_t w = 0; w < words.size(); ++w) words[w] |= other.words[w];
        return *this;
    }

    bool operator==(const SlotMask&) const = default;

    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t word = words[w];
            while (word) {
                int b = static_cast<int>(w) * 64 + __builtin_ctzll(word);
                fn(b);
                word &= word - 1;
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Problem data
// ---------------------------------------------------------------------------

/// A problem instance. Indices are 0-based throughout (members, defences,
/// roles, days, slots, rooms, subjects). Immutable after finalise().
struct Instance {
    int n_members = 0;
    int n_defences = 0;
    int n_roles = 0;
    int n_days = 0;
    int n_slots = 0;  // slots per day
    int n_rooms = 0;
    int n_subjects = 0;
    int duration = 1;  // defence length in slots

    /// eligibility[j][t]: member ids eligible for role t of defence j
    /// (singleton when the role is preassigned).
    std::vector<std::vector<std::vector<int>>> eligibility;
    /// availability[i]: (day, slot) pairs member i is available in.
    std::vector<SlotMask> availability;
    std::vector<std::vector<int>> expertise_member;   // [member]  -> subject ids
    std::vector<std::vector<int>> expertise_defence;  // [defence] -> subject ids
    /// penalty[i][day * n_slots + slot]: nonnegative penalty for member i
    /// occupying that slot.
    std::vector<std::vector<int>> penalty;

    // Derived tables, built by finalise().
    std::vector<SlotMask> window_mask;      // [member]: valid start positions of a full window
    std::vector<std::vector<int>> overlap;  // [member][defence] = |Cm_i ∩ Cd_j|

    int slot_index(int day, int slot) const { return day * n_slots + slot; }
    int total_slots() const { return n_days * n_slots; }
    int starts_per_day() const { return n_slots - duration + 1; }

    /// Builds derived tables. Throws std::invalid_argument on structural
    /// problems (bad counts, out-of-range ids, negative penalties, empty
    /// eligibility sets, duration not in [1, n_slots]).
    void finalise();

    /// Defence ids that admit no committee with a common window of length
    /// `duration` (empty for a usable instance). Degenerate instances are
    /// rejected at load time with this diagnostic.
    std::vector<int> unsatisfiable_defences() const;
};

/// One member per (defence, role); fixed length n_defences * n_roles.
/// The stage-1 partial solution and the GA chromosome.
struct CommitteeConfig {
    std::vector<int> assignment;

    int member(const Instance& inst, int defence, int role) const {
        return assignment[static_cast<std::size_t>(defence) * inst.n_roles + role];
    }
    int& member(const Instance& inst, int defence, int role) {
        return assignment[static_cast<std::size_t>(defence) * inst.n_roles + role];
    }
    std::span<const int> committee(const Instance& inst, int defence) const {
        return {assignment.data() + static_cast<std::size_t>(defence) * inst.n_roles,
                static_cast<std::size_t>(inst.n_roles)};
    }

    bool operator==(const CommitteeConfig&) const = default;
    bool operator<(const CommitteeConfig& other) const { return assignment < other.assignment; }
};

struct DefenceSlot {
    int day = 0;
    int slot = 0;  // first occupied slot of the defence
    int room = 0;
    bool operator==(const DefenceSlot&) const = default;
};

/// One (day, start slot, room) per defence.
struct Schedule {
    std::vector<DefenceSlot> start;
    bool operator==(const Schedule&) const = default;
};

struct FullSolution {
    CommitteeConfig config;
    Schedule schedule;
    bool operator==(const FullSolution&) const = default;
};

// ---------------------------------------------------------------------------
// Feasibility
// ---------------------------------------------------------------------------

enum class ViolationKind {
    Eligibility,
    DuplicateMember,
    DayOverrun,
    MemberUnavailable,
    MemberOverlap,
    RoomOverlap,
};

const char* violation_name(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    int defence = -1;
    int other_defence = -1;
    int member = -1;
    int room = -1;
    std::string describe() const;
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
};

/// Thrown when a solution's indices do not fit the instance at all; distinct
/// from infeasibility, which is reported through FeasibilityReport.
struct MalformedSolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Checks the four constraint families under the windowed reading: a defence
/// starting at (k, l) occupies slots l..l+d-1 of day k for all its committee
/// members and its room.
FeasibilityReport check_feasible(const Instance& inst, const FullSolution& solution);

/// True when windows [a, a+d) and [b, b+d) on the same day intersect.
inline bool windows_clash(int slot_a, int slot_b, int duration) {
    int diff = slot_a - slot_b;
    return diff < duration && -diff < duration;
}

/// Slots in which every listed member is available.
SlotMask common_slots(const Instance& inst, std::span<const int> members);
/// Start positions in which every listed member is available for a full window.
SlotMask common_windows(const Instance& inst, std::span<const int> members);

/// CommitteeConfig invariant breaches: eligibility, in-defence duplicates and
/// the existence of a common window per defence. Empty when valid.
std::vector<std::string> check_config(const Instance& inst, const CommitteeConfig& config);
bool config_feasible(const Instance& inst, const CommitteeConfig& config);

/// Deterministic exhaustive search for any committee of defence `j` that
/// satisfies eligibility, member distinctness, and the common-window
/// requirement. nullopt when none exists.
std::optional<std::vector<int>> find_feasible_committee(const Instance& inst, int defence);

// ---------------------------------------------------------------------------
// Objective evaluation (pure; canonical maximization sign)
// ---------------------------------------------------------------------------

/// -Σ_i load_i² where load_i counts (defence, role) assignments of member i.
long long eval_z1_workload(const Instance& inst, const CommitteeConfig& config);
/// Σ over assignments (i, j) of |Cm_i ∩ Cd_j|, preassigned roles included.
long long eval_z2_suitability(const Instance& inst, const CommitteeConfig& config);
/// -Σ over members, their defences, and all occupied slots of penalty a[i][k][l].
long long eval_z3_preferences(const Instance& inst, const FullSolution& solution);
/// -Σ_i days_i² where days_i counts distinct days member i sits in a defence.
long long eval_z4_days(const Instance& inst, const FullSolution& solution);
/// Σ over defences of the number of slots where the whole committee is
/// available (per-slot count, not windowed).
long long eval_z5_proxy(const Instance& inst, const CommitteeConfig& config);

long long eval_objective(const Instance& inst, const FullSolution& solution, Obj o);
ObjectiveVector evaluate(const Instance& inst, const FullSolution& solution, const ObjectiveSet& objectives);
/// Evaluation for config-only objectives (Z1, Z2, Z5).
ObjectiveVector evaluate_config(const Instance& inst, const CommitteeConfig& config, const ObjectiveSet& objectives);

/// The canonical tiny instance used across tests and shipped as data/t1.json:
/// 4 members, 2 defences, 2 roles (role 0 preassigned), 1 day, 4 slots,
/// 1 room, duration 2.
Instance make_t1();

}  // namespace defsched
