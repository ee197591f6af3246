#include "defsched/model.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

namespace defsched {

const char* obj_name(Obj o) {
    switch (o) {
        case Obj::Z1: return "z1";
        case Obj::Z2: return "z2";
        case Obj::Z3: return "z3";
        case Obj::Z4: return "z4";
        case Obj::Z5: return "z5";
    }
    return "?";
}

std::optional<Obj> obj_from_name(const std::string& name) {
    for (Obj o : {Obj::Z1, Obj::Z2, Obj::Z3, Obj::Z4, Obj::Z5})
        if (name == obj_name(o)) return o;
    return std::nullopt;
}

int SlotMask::count() const {
    int total = 0;
    for (std::uint64_t w : words) total += std::popcount(w);
    return total;
}

bool SlotMask::any() const {
    for (std::uint64_t w : words)
        if (w) return true;
    return false;
}

int SlotMask::find_first() const {
    for (std::size_t w = 0; w < words.size(); ++w)
        if (words[w]) return static_cast<int>(w) * 64 + std::countr_zero(words[w]);
    return -1;
}

namespace {

void require(bool cond, const std::string& message) {
    if (!cond) throw std::invalid_argument(message);
}

}  // namespace

void Instance::finalise() {
    require(n_members > 0 && n_defences > 0 && n_roles > 0 && n_days > 0 && n_slots > 0 &&
                n_rooms > 0 && n_subjects >= 0,
            "instance: all entity counts must be positive");
    require(duration >= 1 && duration <= n_slots, "instance: duration must be within a day");
    require(static_cast<int>(eligibility.size()) == n_defences, "instance: eligibility size");
    require(static_cast<int>(availability.size()) == n_members, "instance: availability size");
    require(static_cast<int>(expertise_member.size()) == n_members, "instance: expertise_member size");
    require(static_cast<int>(expertise_defence.size()) == n_defences, "instance: expertise_defence size");
    require(static_cast<int>(penalty.size()) == n_members, "instance: penalty size");

    for (int j = 0; j < n_defences; ++j) {
        require(static_cast<int>(eligibility[j].size()) == n_roles,
                "instance: defence " + std::to_string(j) + " must list every role");
        for (int t = 0; t < n_roles; ++t) {
            require(!eligibility[j][t].empty(), "instance: empty eligibility set for defence " +
                                                    std::to_string(j) + " role " + std::to_string(t));
            for (int i : eligibility[j][t])
                require(i >= 0 && i < n_members, "instance: eligibility member id out of range");
        }
    }
    for (int i = 0; i < n_members; ++i) {
        require(availability[i].bits == total_slots(), "instance: availability mask size");
        require(static_cast<int>(penalty[i].size()) == total_slots(), "instance: penalty table size");
        for (int v : penalty[i]) require(v >= 0, "instance: penalties must be nonnegative");
        for (int q : expertise_member[i])
            require(q >= 0 && q < n_subjects, "instance: member subject id out of range");
    }
    for (int j = 0; j < n_defences; ++j)
        for (int q : expertise_defence[j])
            require(q >= 0 && q < n_subjects, "instance: defence subject id out of range");

    // Valid window starts per member: every slot of the window available.
    window_mask.assign(n_members, SlotMask(total_slots()));
    for (int i = 0; i < n_members; ++i) {
        for (int day = 0; day < n_days; ++day) {
            for (int start = 0; start + duration <= n_slots; ++start) {
                bool ok = true;
                for (int off = 0; off < duration && ok; ++off)
                    ok = availability[i].test(slot_index(day, start + off));
                if (ok) window_mask[i].set(slot_index(day, start));
            }
        }
    }

    overlap.assign(n_members, std::vector<int>(n_defences, 0));
    for (int i = 0; i < n_members; ++i) {
        std::vector<char> expert(n_subjects, 0);
        for (int q : expertise_member[i]) expert[q] = 1;
        for (int j = 0; j < n_defences; ++j) {
            int shared = 0;
            for (int q : expertise_defence[j]) shared += expert[q];
            overlap[i][j] = shared;
        }
    }
}

std::vector<int> Instance::unsatisfiable_defences() const {
    std::vector<int> bad;
    for (int j = 0; j < n_defences; ++j)
        if (!find_feasible_committee(*this, j)) bad.push_back(j);
    return bad;
}

const char* violation_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Eligibility: return "eligibility";
        case ViolationKind::DuplicateMember: return "duplicate-member";
        case ViolationKind::DayOverrun: return "day-overrun";
        case ViolationKind::MemberUnavailable: return "member-unavailable";
        case ViolationKind::MemberOverlap: return "member-overlap";
        case ViolationKind::RoomOverlap: return "room-overlap";
    }
    return "?";
}

std::string Violation::describe() const {
    std::ostringstream out;
    out << violation_name(kind) << " defence=" << defence;
    if (other_defence >= 0) out << " other_defence=" << other_defence;
    if (member >= 0) out << " member=" << member;
    if (room >= 0) out << " room=" << room;
    return out.str();
}

FeasibilityReport check_feasible(const Instance& inst, const FullSolution& solution) {
    const auto& config = solution.config;
    const auto& schedule = solution.schedule;
    if (static_cast<int>(schedule.start.size()) != inst.n_defences ||
        static_cast<int>(config.assignment.size()) != inst.n_defences * inst.n_roles)
        throw MalformedSolutionError("solution shape does not match instance");
    for (int member : config.assignment)
        if (member < 0 || member >= inst.n_members)
            throw MalformedSolutionError("member id out of range: " + std::to_string(member));
    for (const DefenceSlot& s : schedule.start)
        if (s.day < 0 || s.day >= inst.n_days || s.slot < 0 || s.slot >= inst.n_slots || s.room < 0 ||
            s.room >= inst.n_rooms)
            throw MalformedSolutionError("schedule entry out of range");

    FeasibilityReport report;
    auto flag = [&report](Violation v) { report.violations.push_back(std::move(v)); };

    for (int j = 0; j < inst.n_defences; ++j) {
        const DefenceSlot at = schedule.start[j];
        bool overrun = at.slot + inst.duration > inst.n_slots;
        if (overrun)
            flag({ViolationKind::DayOverrun, j, -1, -1, -1});

        for (int t = 0; t < inst.n_roles; ++t) {
            int i = config.member(inst, j, t);
            const auto& eligible = inst.eligibility[j][t];
            if (std::find(eligible.begin(), eligible.end(), i) == eligible.end())
                flag({ViolationKind::Eligibility, j, -1, i, -1});
            for (int t2 = t + 1; t2 < inst.n_roles; ++t2)
                if (config.member(inst, j, t2) == i) flag({ViolationKind::DuplicateMember, j, -1, i, -1});
            if (!overrun) {
                for (int off = 0; off < inst.duration; ++off) {
                    if (!inst.availability[i].test(inst.slot_index(at.day, at.slot + off))) {
                        flag({ViolationKind::MemberUnavailable, j, -1, i, -1});
                        break;
                    }
                }
            }
        }
    }

    for (int a = 0; a < inst.n_defences; ++a) {
        for (int b = a + 1; b < inst.n_defences; ++b) {
            const DefenceSlot& sa = schedule.start[a];
            const DefenceSlot& sb = schedule.start[b];
            if (sa.day != sb.day || !windows_clash(sa.slot, sb.slot, inst.duration)) continue;
            if (sa.room == sb.room) flag({ViolationKind::RoomOverlap, a, b, -1, sa.room});
            for (int t = 0; t < inst.n_roles; ++t) {
                int i = config.member(inst, a, t);
                for (int t2 = 0; t2 < inst.n_roles; ++t2)
                    if (config.member(inst, b, t2) == i) flag({ViolationKind::MemberOverlap, a, b, i, -1});
            }
        }
    }
    return report;
}

SlotMask common_slots(const Instance& inst, std::span<const int> members) {
    SlotMask mask(inst.total_slots());
    for (auto& w : mask.words) w = ~std::uint64_t(0);
    for (int i : members) mask &= inst.availability[i];
    // Clear padding bits beyond the grid.
    int tail = inst.total_slots() & 63;
    if (tail && !mask.words.empty()) mask.words.back() &= (std::uint64_t(1) << tail) - 1;
    return mask;
}

SlotMask common_windows(const Instance& inst, std::span<const int> members) {
    SlotMask mask(inst.total_slots());
    bool first = true;
    for (int i : members) {
        if (first) {
            mask = inst.window_mask[i];
            first = false;
        } else {
            mask &= inst.window_mask[i];
        }
    }
    if (first) {  // no members listed: every in-day start works
        for (int day = 0; day < inst.n_days; ++day)
            for (int start = 0; start + inst.duration <= inst.n_slots; ++start)
                mask.set(inst.slot_index(day, start));
    }
    return mask;
}

std::vector<std::string> check_config(const Instance& inst, const CommitteeConfig& config) {
    std::vector<std::string> problems;
    if (static_cast<int>(config.assignment.size()) != inst.n_defences * inst.n_roles) {
        problems.push_back("assignment length mismatch");
        return problems;
    }
    for (int j = 0; j < inst.n_defences; ++j) {
        for (int t = 0; t < inst.n_roles; ++t) {
            int i = config.member(inst, j, t);
            if (i < 0 || i >= inst.n_members) {
                problems.push_back("defence " + std::to_string(j) + ": member id out of range");
                continue;
            }
            const auto& eligible = inst.eligibility[j][t];
            if (std::find(eligible.begin(), eligible.end(), i) == eligible.end())
                problems.push_back("defence " + std::to_string(j) + " role " + std::to_string(t) +
                                   ": member " + std::to_string(i) + " not eligible");
            for (int t2 = t + 1; t2 < inst.n_roles; ++t2)
                if (config.member(inst, j, t2) == i)
                    problems.push_back("defence " + std::to_string(j) + ": member " + std::to_string(i) +
                                       " appears twice");
        }
        if (common_windows(inst, config.committee(inst, j)).none())
            problems.push_back("defence " + std::to_string(j) + ": no common window");
    }
    return problems;
}

bool config_feasible(const Instance& inst, const CommitteeConfig& config) {
    return check_config(inst, config).empty();
}

std::optional<std::vector<int>> find_feasible_committee(const Instance& inst, int defence) {
    std::vector<int> chosen(inst.n_roles, -1);
    std::vector<char> used(inst.n_members, 0);

    std::function<bool(int, const SlotMask&)> assign = [&](int role, const SlotMask& windows) -> bool {
        if (role == inst.n_roles) return windows.any();
        for (int i : inst.eligibility[defence][role]) {
            if (used[i]) continue;
            SlotMask next = windows & inst.window_mask[i];
            if (next.none()) continue;
            chosen[role] = i;
            used[i] = 1;
            if (assign(role + 1, next)) return true;
            used[i] = 0;
        }
        chosen[role] = -1;
        return false;
    };

    SlotMask all = common_windows(inst, {});
    if (assign(0, all)) return chosen;
    return std::nullopt;
}

long long eval_z1_workload(const Instance& inst, const CommitteeConfig& config) {
    std::vector<long long> load(inst.n_members, 0);
    for (int i : config.assignment) ++load[i];
    long long total = 0;
    for (long long l : load) total += l * l;
    return -total;
}

long long eval_z2_suitability(const Instance& inst, const CommitteeConfig& config) {
    long long total = 0;
    for (int j = 0; j < inst.n_defences; ++j)
        for (int t = 0; t < inst.n_roles; ++t) total += inst.overlap[config.member(inst, j, t)][j];
    return total;
}

long long eval_z3_preferences(const Instance& inst, const FullSolution& solution) {
    long long total = 0;
    for (int j = 0; j < inst.n_defences; ++j) {
        const DefenceSlot at = solution.schedule.start[j];
        for (int t = 0; t < inst.n_roles; ++t) {
            int i = solution.config.member(inst, j, t);
            for (int off = 0; off < inst.duration; ++off)
                total += inst.penalty[i][inst.slot_index(at.day, at.slot + off)];
        }
    }
    return -total;
}

long long eval_z4_days(const Instance& inst, const FullSolution& solution) {
    std::vector<std::uint64_t> days(inst.n_members, 0);
    for (int j = 0; j < inst.n_defences; ++j) {
        std::uint64_t bit = std::uint64_t(1) << solution.schedule.start[j].day;
        for (int t = 0; t < inst.n_roles; ++t) days[solution.config.member(inst, j, t)] |= bit;
    }
    long long total = 0;
    for (std::uint64_t mask : days) {
        long long d = std::popcount(mask);
        total += d * d;
    }
    return -total;
}

long long eval_z5_proxy(const Instance& inst, const CommitteeConfig& config) {
    long long total = 0;
    for (int j = 0; j < inst.n_defences; ++j)
        total += common_slots(inst, config.committee(inst, j)).count();
    return total;
}

long long eval_objective(const Instance& inst, const FullSolution& solution, Obj o) {
    switch (o) {
        case Obj::Z1: return eval_z1_workload(inst, solution.config);
        case Obj::Z2: return eval_z2_suitability(inst, solution.config);
        case Obj::Z3: return eval_z3_preferences(inst, solution);
        case Obj::Z4: return eval_z4_days(inst, solution);
        case Obj::Z5: return eval_z5_proxy(inst, solution.config);
    }
    throw std::invalid_argument("unknown objective");
}

ObjectiveVector evaluate(const Instance& inst, const FullSolution& solution, const ObjectiveSet& objectives) {
    ObjectiveVector z;
    z.reserve(objectives.size());
    for (Obj o : objectives) z.push_back(eval_objective(inst, solution, o));
    return z;
}

ObjectiveVector evaluate_config(const Instance& inst, const CommitteeConfig& config,
                                const ObjectiveSet& objectives) {
    ObjectiveVector z;
    z.reserve(objectives.size());
    for (Obj o : objectives) {
        switch (o) {
            case Obj::Z1: z.push_back(eval_z1_workload(inst, config)); break;
            case Obj::Z2: z.push_back(eval_z2_suitability(inst, config)); break;
            case Obj::Z5: z.push_back(eval_z5_proxy(inst, config)); break;
            default: throw std::invalid_argument("objective needs a schedule");
        }
    }
    return z;
}

Instance make_t1() {
    Instance inst;
    inst.n_members = 4;
    inst.n_defences = 2;
    inst.n_roles = 2;
    inst.n_days = 1;
    inst.n_slots = 4;
    inst.n_rooms = 1;
    inst.n_subjects = 2;
    inst.duration = 2;
    inst.eligibility = {{{0}, {2, 3}}, {{1}, {2, 3}}};
    inst.availability.assign(4, SlotMask(4));
    inst.availability[0].set_range(0, 3);
    inst.availability[1].set_range(0, 3);
    inst.availability[2].set_range(0, 1);
    inst.availability[3].set_range(2, 3);
    inst.expertise_member = {{}, {}, {0}, {0, 1}};
    inst.expertise_defence = {{0}, {1}};
    inst.penalty.assign(4, std::vector<int>(4, 0));
    inst.penalty[2][0] = 1;
    inst.finalise();
    return inst;
}

}  // namespace defsched
