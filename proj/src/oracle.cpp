#include "defsched/oracle.hpp"

#include <algorithm>

namespace defsched {

namespace {

// Naive re-statements of the feasibility rules, kept deliberately separate
// from the mask-based machinery elsewhere.

bool member_available_for_window(const Instance& inst, int member, int day, int start) {
    for (int off = 0; off < inst.duration; ++off)
        if (!inst.availability[member].test(inst.slot_index(day, start + off))) return false;
    return true;
}

bool committee_has_window(const Instance& inst, const std::vector<int>& members) {
    for (int day = 0; day < inst.n_days; ++day)
        for (int start = 0; start + inst.duration <= inst.n_slots; ++start) {
            bool ok = true;
            for (int i : members)
                if (!member_available_for_window(inst, i, day, start)) {
                    ok = false;
                    break;
                }
            if (ok) return true;
        }
    return false;
}

void collect_committees(const Instance& inst, int defence, int role, std::vector<int>& partial,
                        std::vector<std::vector<int>>& out) {
    if (role == inst.n_roles) {
        if (committee_has_window(inst, partial)) out.push_back(partial);
        return;
    }
    for (int i : inst.eligibility[defence][role]) {
        if (std::find(partial.begin(), partial.end(), i) != partial.end()) continue;
        partial.push_back(i);
        collect_committees(inst, defence, role + 1, partial, out);
        partial.pop_back();
    }
}

struct Enumerator {
    const Instance& inst;
    const ObjectiveSet& objectives;
    std::vector<std::vector<std::vector<int>>> committees;  // per defence
    FullSolution current;
    std::vector<EnumeratedSolution> found;

    bool placement_clashes(int defence) const {
        const DefenceSlot& mine = current.schedule.start[defence];
        for (int other = 0; other < defence; ++other) {
            const DefenceSlot& theirs = current.schedule.start[other];
            if (mine.day != theirs.day || !windows_clash(mine.slot, theirs.slot, inst.duration))
                continue;
            if (mine.room == theirs.room) return true;
            for (int t = 0; t < inst.n_roles; ++t)
                for (int t2 = 0; t2 < inst.n_roles; ++t2)
                    if (current.config.member(inst, defence, t) == current.config.member(inst, other, t2))
                        return true;
        }
        return false;
    }

    void descend(int defence) {
        if (defence == inst.n_defences) {
            found.push_back({current, evaluate(inst, current, objectives)});
            return;
        }
        for (const auto& committee : committees[defence]) {
            for (int t = 0; t < inst.n_roles; ++t) current.config.member(inst, defence, t) = committee[t];
            for (int day = 0; day < inst.n_days; ++day) {
                for (int start = 0; start + inst.duration <= inst.n_slots; ++start) {
                    bool available = true;
                    for (int i : committee)
                        if (!member_available_for_window(inst, i, day, start)) {
                            available = false;
                            break;
                        }
                    if (!available) continue;
                    for (int room = 0; room < inst.n_rooms; ++room) {
                        current.schedule.start[defence] = {day, start, room};
                        if (!placement_clashes(defence)) descend(defence + 1);
                    }
                }
            }
        }
    }
};

}  // namespace

std::vector<std::vector<int>> oracle_committees(const Instance& inst, int defence) {
    std::vector<std::vector<int>> out;
    std::vector<int> partial;
    collect_committees(inst, defence, 0, partial, out);
    return out;
}

std::vector<EnumeratedSolution> enumerate_all(const Instance& inst, const ObjectiveSet& objectives,
                                              long long cap) {
    Enumerator e{inst, objectives, {}, {}, {}};
    long long combinations = 1;
    for (int j = 0; j < inst.n_defences; ++j) {
        e.committees.push_back(oracle_committees(inst, j));
        long long per_defence = static_cast<long long>(e.committees.back().size()) * inst.n_days *
                                inst.starts_per_day() * inst.n_rooms;
        if (per_defence == 0) return {};
        if (combinations > cap / per_defence)
            throw OracleCapError("enumeration space exceeds cap of " + std::to_string(cap));
        combinations *= per_defence;
    }
    e.current.config.assignment.assign(static_cast<std::size_t>(inst.n_defences) * inst.n_roles, 0);
    e.current.schedule.start.assign(inst.n_defences, {});
    e.descend(0);
    return e.found;
}

FrontArchive oracle_front(const Instance& inst, const ObjectiveSet& objectives, long long cap) {
    auto all = enumerate_all(inst, objectives, cap);
    std::vector<FrontEntry> entries;
    entries.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        entries.push_back({all[i].z, static_cast<long long>(i)});
    std::vector<ObjectiveVector> points;
    points.reserve(entries.size());
    for (const auto& e : entries) points.push_back(e.z);
    auto ranks = sort_fronts(points);
    std::vector<FrontEntry> rank0;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (ranks[i] == 0) rank0.push_back(entries[i]);
    return FrontArchive(std::move(rank0));
}

}  // namespace defsched
