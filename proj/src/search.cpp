#include "defsched/search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <queue>

namespace defsched {

const char* status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "OPTIMAL";
        case SolveStatus::FeasibleTimeout: return "FEASIBLE_TIMEOUT";
        case SolveStatus::Infeasible: return "INFEASIBLE";
        case SolveStatus::UnknownTimeout: return "UNKNOWN_TIMEOUT";
    }
    return "?";
}

void SolveRequest::validate(const Instance& inst) const {
    if (time_limit_seconds <= 0) throw std::invalid_argument("solve: time limit must be positive");
    if (active.empty()) throw std::invalid_argument("solve: empty objective set");
    if (std::find(active.begin(), active.end(), primary) == active.end())
        throw std::invalid_argument("solve: primary objective not in active set");
    for (const auto& [o, bound] : epsilon_bounds) {
        (void)bound;
        if (o == primary) throw std::invalid_argument("solve: primary objective cannot be bounded");
        if (std::find(active.begin(), active.end(), o) == active.end())
            throw std::invalid_argument("solve: bounded objective not in active set");
    }
    if (kind == ProblemKind::Stage2) {
        if (!fixed_config) throw std::invalid_argument("solve: Stage2 requires a committee configuration");
        if (static_cast<int>(fixed_config->assignment.size()) != inst.n_defences * inst.n_roles)
            throw std::invalid_argument("solve: Stage2 configuration shape mismatch");
    }
}

double augmented_value(const ObjectiveVector& z, const ObjectiveSet& active, Obj primary,
                       const std::map<Obj, ObjectiveRange>& ranges) {
    if (z.size() != active.size()) throw std::invalid_argument("augmented_value: vector/set mismatch");
    double value = 0.0;
    double bonus = 0.0;
    const double n_z = static_cast<double>(active.size());
    for (std::size_t c = 0; c < active.size(); ++c) {
        if (active[c] == primary) {
            value = static_cast<double>(z[c]);
            continue;
        }
        auto it = ranges.find(active[c]);
        if (it == ranges.end()) continue;
        long long range = it->second.max - it->second.min;
        if (range == 0) continue;
        bonus += static_cast<double>(z[c] - it->second.min) / static_cast<double>(range);
    }
    return value + bonus / n_z;
}

double scalarized_value(const ObjectiveVector& z, const SolveRequest& request) {
    const double sense = request.minimize_primary ? -1.0 : 1.0;
    if (request.big_m > 0) {
        double value = 0.0;
        double others = 0.0;
        for (std::size_t c = 0; c < request.active.size(); ++c) {
            if (request.active[c] == request.primary)
                value = static_cast<double>(z[c]);
            else
                others += static_cast<double>(z[c]);
        }
        return sense * value + others / request.big_m;
    }
    double value = augmented_value(z, request.active, request.primary, request.augmentation);
    if (!request.minimize_primary) return value;
    // Flip only the primary term; the augmentation bonus keeps its sign.
    double primary_term = 0.0;
    for (std::size_t c = 0; c < request.active.size(); ++c)
        if (request.active[c] == request.primary) primary_term = static_cast<double>(z[c]);
    return value - 2.0 * primary_term;
}

namespace {

/// Minimal Σ load² after distributing `remaining` extra assignments over the
/// given loads, eligibility relaxed. Greedy on the marginal cost 2L+1.
long long greedy_min_sum_sq(const std::vector<long long>& loads, long long remaining) {
    long long total = 0;
    for (long long l : loads) total += l * l;
    if (remaining <= 0) return total;
    std::priority_queue<long long, std::vector<long long>, std::greater<>> heap(loads.begin(),
                                                                                loads.end());
    for (long long r = 0; r < remaining; ++r) {
        long long l = heap.top();
        heap.pop();
        total += 2 * l + 1;
        heap.push(l + 1);
    }
    return total;
}

/// Maximal Σ load² after `remaining` extra assignments: convexity puts them
/// all on the currently most loaded member.
long long concentrated_max_sum_sq(const std::vector<long long>& loads, long long remaining) {
    long long total = 0;
    long long top = 0;
    for (long long l : loads) {
        total += l * l;
        top = std::max(top, l);
    }
    return total - top * top + (top + remaining) * (top + remaining);
}

/// Maximal Σ count² when up to `remaining` unit additions are possible, each
/// member capped at `cap`: fill the largest counts first.
long long capped_max_sum_sq(std::vector<int> counts, long long remaining, int cap) {
    std::sort(counts.begin(), counts.end(), std::greater<>());
    long long total = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        long long grow = std::min<long long>(remaining, cap - counts[i]);
        if (grow > 0) {
            counts[i] += static_cast<int>(grow);
            remaining -= grow;
        }
        total += static_cast<long long>(counts[i]) * counts[i];
    }
    return total;
}

struct CommitteeOption {
    std::vector<int> members;
    SlotMask windows;        // start positions where the whole committee is free
    long long z2_gain = 0;   // Σ overlap of members with the defence
    /// Start positions sorted by (window penalty, position) for child ordering.
    std::vector<std::pair<long long, int>> starts_by_penalty;
};

void enumerate_committees(const Instance& inst, int defence,
                          std::vector<CommitteeOption>& out) {
    std::vector<int> chosen(inst.n_roles, -1);
    std::vector<char> used(inst.n_members, 0);
    std::function<void(int, const SlotMask&)> descend = [&](int role, const SlotMask& windows) {
        if (role == inst.n_roles) {
            CommitteeOption option;
            option.members = chosen;
            option.windows = windows;
            for (int i : chosen) option.z2_gain += inst.overlap[i][defence];
            out.push_back(std::move(option));
            return;
        }
        for (int i : inst.eligibility[defence][role]) {
            if (used[i]) continue;
            SlotMask next = windows & inst.window_mask[i];
            if (next.none()) continue;
            chosen[role] = i;
            used[i] = 1;
            descend(role + 1, next);
            used[i] = 0;
        }
        chosen[role] = -1;
    };
    descend(0, common_windows(inst, {}));
}

class BranchAndBound {
public:
    BranchAndBound(const Instance& inst, const SolveRequest& req) : inst_(inst), req_(req) {}

    SolveResult run() {
        build_options();
        if (options_empty_) return {SolveStatus::Infeasible, std::nullopt, {}, 0.0, 0};

        member_blocked_.assign(inst_.n_members, SlotMask(inst_.total_slots()));
        room_blocked_.assign(inst_.n_rooms, SlotMask(inst_.total_slots()));
        scheduled_.assign(inst_.n_defences, 0);
        placement_.assign(inst_.n_defences, {});
        chosen_option_.assign(inst_.n_defences, -1);
        loads_.assign(inst_.n_members, 0);
        day_count_.assign(inst_.n_members, 0);
        member_days_.assign(inst_.n_members, 0);
        unscheduled_ = inst_.n_defences;

        if (req_.kind == ProblemKind::Stage2) {
            z1_fixed_ = eval_z1_workload(inst_, *req_.fixed_config);
            z2_fixed_ = eval_z2_suitability(inst_, *req_.fixed_config);
        }

        deadline_ = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(req_.time_limit_seconds));
        verbose_ = std::getenv("DEFSCHED_VERBOSE") != nullptr;

        root_scalar_ = scalar_bound(objective_bounds());
        descend();

        SolveResult result;
        result.nodes = nodes_;
        if (has_incumbent_) {
            result.solution = best_solution_;
            result.z = best_z_;
            if (aborted_) {
                result.status = SolveStatus::FeasibleTimeout;
                result.gap = std::max(0.0, root_scalar_ - best_scalar_);
            } else {
                result.status = SolveStatus::Optimal;
                result.gap = 0.0;
            }
        } else {
            result.status = aborted_ ? SolveStatus::UnknownTimeout : SolveStatus::Infeasible;
        }
        if (verbose_)
            std::cerr << "search: nodes=" << nodes_ << " prunes=" << prunes_
                      << " status=" << status_name(result.status) << "\n";
        return result;
    }

private:
    struct Undo {
        // (mask pointer, word index, old value) triples
        std::vector<std::tuple<SlotMask*, int, std::uint64_t>> words;
        std::vector<int> new_day_members;
        long long z3_delta = 0;
        long long sum_days_sq_old = 0;
        long long sum_load_sq_old = 0;
        long long z2_old = 0;
        int day = -1;
    };

    void build_options() {
        options_.resize(inst_.n_defences);
        for (int j = 0; j < inst_.n_defences; ++j) {
            if (req_.kind == ProblemKind::Stage2) {
                auto members = req_.fixed_config->committee(inst_, j);
                CommitteeOption option;
                option.members.assign(members.begin(), members.end());
                option.windows = common_windows(inst_, members);
                options_[j].push_back(std::move(option));
            } else {
                enumerate_committees(inst_, j, options_[j]);
            }
            for (auto& option : options_[j]) precompute_start_order(j, option);
            if (options_[j].empty() || !std::any_of(options_[j].begin(), options_[j].end(),
                                                    [](const auto& o) { return o.windows.any(); }))
                options_empty_ = true;
            // Best/worst cases of this defence over all its committees, for
            // the optimistic and pessimistic bounds.
            long long best = 0;
            long long worst_z2 = std::numeric_limits<long long>::max();
            long long worst_penalty = 0;
            for (const auto& option : options_[j]) {
                best = std::max(best, option.z2_gain);
                worst_z2 = std::min(worst_z2, option.z2_gain);
                if (!option.starts_by_penalty.empty())
                    worst_penalty = std::max(worst_penalty, option.starts_by_penalty.back().first);
            }
            z2_best_case_.push_back(best);
            z2_worst_case_.push_back(options_[j].empty() ? 0 : worst_z2);
            penalty_worst_case_.push_back(worst_penalty);
        }
    }

    void precompute_start_order(int, CommitteeOption& option) {
        option.windows.for_each_set([&](int bit) {
            int day = bit / inst_.n_slots;
            int start = bit % inst_.n_slots;
            long long pen = 0;
            for (int i : option.members)
                for (int off = 0; off < inst_.duration; ++off)
                    pen += inst_.penalty[i][inst_.slot_index(day, start + off)];
            option.starts_by_penalty.emplace_back(pen, bit);
        });
        std::sort(option.starts_by_penalty.begin(), option.starts_by_penalty.end());
    }

    // ----- objective tallies and bounds -----

    std::map<Obj, long long> objective_bounds() const {
        std::map<Obj, long long> bounds;
        for (Obj o : req_.active) {
            switch (o) {
                case Obj::Z1:
                    if (req_.kind == ProblemKind::Stage2)
                        bounds[o] = z1_fixed_;
                    else
                        bounds[o] = -greedy_min_sum_sq(loads_, open_role_slots());
                    break;
                case Obj::Z2:
                    if (req_.kind == ProblemKind::Stage2) {
                        bounds[o] = z2_fixed_;
                    } else {
                        long long value = z2_partial_;
                        for (int j = 0; j < inst_.n_defences; ++j)
                            if (chosen_option_[j] < 0) value += z2_best_case_[j];
                        bounds[o] = value;
                    }
                    break;
                case Obj::Z3: bounds[o] = -z3_penalty_; break;
                case Obj::Z4: bounds[o] = -sum_days_sq_; break;
                case Obj::Z5: {
                    long long value = 0;
                    for (int j = 0; j < inst_.n_defences; ++j) {
                        if (chosen_option_[j] >= 0)
                            value += common_slots(
                                         inst_, options_[j][chosen_option_[j]].members)
                                         .count();
                        else
                            value += inst_.total_slots();
                    }
                    bounds[o] = value;
                    break;
                }
            }
        }
        return bounds;
    }

    long long open_role_slots() const {
        long long open = 0;
        for (int j = 0; j < inst_.n_defences; ++j)
            if (chosen_option_[j] < 0) open += inst_.n_roles;
        return open;
    }

    /// Admissible lower bound on the primary over every completion; needed
    /// only when the primary is minimized.
    long long pessimistic_primary() const {
        switch (req_.primary) {
            case Obj::Z1:
                if (req_.kind == ProblemKind::Stage2) return z1_fixed_;
                return -concentrated_max_sum_sq(loads_, open_role_slots());
            case Obj::Z2: {
                if (req_.kind == ProblemKind::Stage2) return z2_fixed_;
                long long value = z2_partial_;
                for (int j = 0; j < inst_.n_defences; ++j)
                    if (chosen_option_[j] < 0) value += z2_worst_case_[j];
                return value;
            }
            case Obj::Z3: {
                long long value = z3_penalty_;
                for (int j = 0; j < inst_.n_defences; ++j)
                    if (!scheduled_[j]) value += penalty_worst_case_[j];
                return -value;
            }
            case Obj::Z4: {
                long long open = 0;
                for (int j = 0; j < inst_.n_defences; ++j)
                    if (!scheduled_[j]) open += inst_.n_roles;
                return -capped_max_sum_sq(day_count_, open, inst_.n_days);
            }
            case Obj::Z5: {
                long long value = 0;
                for (int j = 0; j < inst_.n_defences; ++j)
                    if (chosen_option_[j] >= 0)
                        value += common_slots(inst_, options_[j][chosen_option_[j]].members).count();
                return value;
            }
        }
        return std::numeric_limits<long long>::min();
    }

    /// Upper bound on the solver's scalar: optimistic values everywhere, the
    /// pessimistic primary when its sense is flipped.
    double scalar_bound(const std::map<Obj, long long>& bounds) const {
        ObjectiveVector z;
        z.reserve(req_.active.size());
        for (Obj o : req_.active)
            z.push_back(o == req_.primary && req_.minimize_primary ? pessimistic_primary()
                                                                   : bounds.at(o));
        return scalarized_value(z, req_);
    }

    bool prune(const std::map<Obj, long long>& bounds) {
        for (const auto& [o, eps] : req_.epsilon_bounds) {
            if (bounds.at(o) < eps) {
                ++prunes_;
                return true;
            }
        }
        if (has_incumbent_ && scalar_bound(bounds) <= best_scalar_) {
            ++prunes_;
            return true;
        }
        return false;
    }

    // ----- state updates -----

    void save_word(Undo& undo, SlotMask& mask, int word) {
        undo.words.emplace_back(&mask, word, mask.words[word]);
    }

    void block_window(Undo& undo, SlotMask& mask, int day, int start) {
        int lo = std::max(0, start - inst_.duration + 1);
        int hi = std::min(inst_.n_slots - 1, start + inst_.duration - 1);
        int first = inst_.slot_index(day, lo);
        int last = inst_.slot_index(day, hi);
        for (int w = first >> 6; w <= last >> 6; ++w) save_word(undo, mask, w);
        mask.set_range(first, last);
    }

    void apply(int defence, int option_index, int start_bit, int room, Undo& undo) {
        const CommitteeOption& option = options_[defence][option_index];
        int day = start_bit / inst_.n_slots;
        int start = start_bit % inst_.n_slots;

        undo.day = day;
        undo.sum_days_sq_old = sum_days_sq_;
        undo.sum_load_sq_old = sum_load_sq_;
        undo.z2_old = z2_partial_;

        for (int i : option.members) {
            block_window(undo, member_blocked_[i], day, start);
            std::uint64_t bit = std::uint64_t(1) << day;
            if (!(member_days_[i] & bit)) {
                member_days_[i] |= bit;
                sum_days_sq_ += 2 * day_count_[i] + 1;
                ++day_count_[i];
                undo.new_day_members.push_back(i);
            }
            for (int off = 0; off < inst_.duration; ++off)
                undo.z3_delta += inst_.penalty[i][inst_.slot_index(day, start + off)];
            if (req_.kind == ProblemKind::Monolithic) {
                sum_load_sq_ += 2 * loads_[i] + 1;
                ++loads_[i];
            }
        }
        if (req_.kind == ProblemKind::Monolithic) z2_partial_ += option.z2_gain;
        block_window(undo, room_blocked_[room], day, start);

        z3_penalty_ += undo.z3_delta;
        scheduled_[defence] = 1;
        chosen_option_[defence] = option_index;
        placement_[defence] = {day, start, room};
        --unscheduled_;
    }

    void revert(int defence, Undo& undo) {
        for (auto it = undo.words.rbegin(); it != undo.words.rend(); ++it)
            std::get<0>(*it)->words[std::get<1>(*it)] = std::get<2>(*it);
        for (int i : undo.new_day_members) {
            member_days_[i] &= ~(std::uint64_t(1) << undo.day);
            --day_count_[i];
        }
        if (req_.kind == ProblemKind::Monolithic) {
            const CommitteeOption& option = options_[defence][chosen_option_[defence]];
            for (int i : option.members) --loads_[i];
        }
        sum_days_sq_ = undo.sum_days_sq_old;
        sum_load_sq_ = undo.sum_load_sq_old;
        z2_partial_ = undo.z2_old;
        z3_penalty_ -= undo.z3_delta;
        scheduled_[defence] = 0;
        chosen_option_[defence] = -1;
        ++unscheduled_;
    }

    // ----- search -----

    /// Feasible (option, room) start masks for a defence under the current
    /// partial schedule; returns total option count.
    long long remaining_options(int defence) const {
        long long count = 0;
        for (const auto& option : options_[defence]) {
            SlotMask free = option.windows;
            for (int i : option.members) {
                for (std::size_t w = 0; w < free.words.size(); ++w)
                    free.words[w] &= ~member_blocked_[i].words[w];
            }
            for (int room = 0; room < inst_.n_rooms; ++room) {
                long long per_room = 0;
                for (std::size_t w = 0; w < free.words.size(); ++w)
                    per_room += std::popcount(free.words[w] & ~room_blocked_[room].words[w]);
                count += per_room;
            }
        }
        return count;
    }

    void record_leaf() {
        FullSolution solution;
        if (req_.kind == ProblemKind::Stage2) {
            solution.config = *req_.fixed_config;
        } else {
            solution.config.assignment.assign(
                static_cast<std::size_t>(inst_.n_defences) * inst_.n_roles, 0);
            for (int j = 0; j < inst_.n_defences; ++j) {
                const auto& members = options_[j][chosen_option_[j]].members;
                for (int t = 0; t < inst_.n_roles; ++t) solution.config.member(inst_, j, t) = members[t];
            }
        }
        solution.schedule.start = placement_;
        ObjectiveVector z = evaluate(inst_, solution, req_.active);
        for (const auto& [o, eps] : req_.epsilon_bounds) {
            auto slot = std::find(req_.active.begin(), req_.active.end(), o) - req_.active.begin();
            if (z[static_cast<std::size_t>(slot)] < eps) return;
        }
        double scalar = scalarized_value(z, req_);
        if (!has_incumbent_ || scalar > best_scalar_) {
            has_incumbent_ = true;
            best_scalar_ = scalar;
            best_z_ = std::move(z);
            best_solution_ = std::move(solution);
            if (verbose_) std::cerr << "search: incumbent scalar=" << best_scalar_ << " node=" << nodes_ << "\n";
        }
    }

    bool out_of_time() {
        if (aborted_) return true;
        if ((nodes_ & 1023) == 0 && std::chrono::steady_clock::now() >= deadline_) aborted_ = true;
        return aborted_;
    }

    void descend() {
        ++nodes_;
        if (out_of_time()) return;
        if (unscheduled_ == 0) {
            record_leaf();
            return;
        }
        if (prune(objective_bounds())) return;

        // Minimum-remaining-values defence, ties by lowest id.
        int next = -1;
        long long best_count = std::numeric_limits<long long>::max();
        for (int j = 0; j < inst_.n_defences; ++j) {
            if (scheduled_[j]) continue;
            long long count = remaining_options(j);
            if (count == 0) {
                ++prunes_;
                return;  // dead end
            }
            if (count < best_count) {
                best_count = count;
                next = j;
            }
        }

        for (int c = 0; c < static_cast<int>(options_[next].size()); ++c) {
            const CommitteeOption& option = options_[next][c];
            SlotMask free = option.windows;
            for (int i : option.members)
                for (std::size_t w = 0; w < free.words.size(); ++w)
                    free.words[w] &= ~member_blocked_[i].words[w];
            for (const auto& [penalty, bit] : option.starts_by_penalty) {
                (void)penalty;
                if (!free.test(bit)) continue;
                for (int room = 0; room < inst_.n_rooms; ++room) {
                    if (room_blocked_[room].test(bit)) continue;
                    Undo undo;
                    apply(next, c, bit, room, undo);
                    descend();
                    revert(next, undo);
                    if (aborted_) return;
                }
            }
        }
    }

    const Instance& inst_;
    const SolveRequest& req_;

    std::vector<std::vector<CommitteeOption>> options_;
    std::vector<long long> z2_best_case_;
    std::vector<long long> z2_worst_case_;
    std::vector<long long> penalty_worst_case_;
    bool options_empty_ = false;

    std::vector<SlotMask> member_blocked_;
    std::vector<SlotMask> room_blocked_;
    std::vector<char> scheduled_;
    std::vector<DefenceSlot> placement_;
    std::vector<int> chosen_option_;
    int unscheduled_ = 0;

    std::vector<long long> loads_;
    long long sum_load_sq_ = 0;
    long long z2_partial_ = 0;
    long long z3_penalty_ = 0;
    std::vector<std::uint64_t> member_days_;
    std::vector<int> day_count_;
    long long sum_days_sq_ = 0;
    long long z1_fixed_ = 0;
    long long z2_fixed_ = 0;

    bool has_incumbent_ = false;
    double best_scalar_ = 0.0;
    ObjectiveVector best_z_;
    FullSolution best_solution_;

    long long nodes_ = 0;
    long long prunes_ = 0;
    double root_scalar_ = 0.0;
    bool aborted_ = false;
    bool verbose_ = false;
    std::chrono::steady_clock::time_point deadline_;
};

}  // namespace

std::map<Obj, long long> optimistic_bounds(const Instance& inst, const PartialAssignment& partial,
                                           const ObjectiveSet& objectives) {
    if (static_cast<int>(partial.committee.size()) != inst.n_defences ||
        static_cast<int>(partial.placed.size()) != inst.n_defences)
        throw std::invalid_argument("optimistic_bounds: partial shape mismatch");

    std::vector<long long> loads(inst.n_members, 0);
    long long open_roles = 0;
    long long z2_partial = 0;
    long long z3_penalty = 0;
    std::vector<std::uint64_t> days(inst.n_members, 0);

    for (int j = 0; j < inst.n_defences; ++j) {
        if (!partial.committee[j]) {
            open_roles += inst.n_roles;
            continue;
        }
        const auto& members = *partial.committee[j];
        for (int t = 0; t < inst.n_roles; ++t) {
            ++loads[members[t]];
            z2_partial += inst.overlap[members[t]][j];
        }
        if (partial.placed[j]) {
            const DefenceSlot& at = *partial.placed[j];
            for (int i : members) {
                days[i] |= std::uint64_t(1) << at.day;
                for (int off = 0; off < inst.duration; ++off)
                    z3_penalty += inst.penalty[i][inst.slot_index(at.day, at.slot + off)];
            }
        }
    }

    std::map<Obj, long long> bounds;
    for (Obj o : objectives) {
        switch (o) {
            case Obj::Z1: bounds[o] = -greedy_min_sum_sq(loads, open_roles); break;
            case Obj::Z2: {
                long long value = z2_partial;
                for (int j = 0; j < inst.n_defences; ++j) {
                    if (partial.committee[j]) continue;
                    for (int t = 0; t < inst.n_roles; ++t) {
                        long long best = 0;
                        for (int i : inst.eligibility[j][t])
                            best = std::max(best, static_cast<long long>(inst.overlap[i][j]));
                        value += best;
                    }
                }
                bounds[o] = value;
                break;
            }
            case Obj::Z3: bounds[o] = -z3_penalty; break;
            case Obj::Z4: {
                long long total = 0;
                for (std::uint64_t mask : days) {
                    long long d = std::popcount(mask);
                    total += d * d;
                }
                bounds[o] = -total;
                break;
            }
            case Obj::Z5: {
                long long value = 0;
                for (int j = 0; j < inst.n_defences; ++j) {
                    if (partial.committee[j])
                        value += common_slots(inst, *partial.committee[j]).count();
                    else
                        value += inst.total_slots();
                }
                bounds[o] = value;
                break;
            }
        }
    }
    return bounds;
}

SolveResult optimise(const Instance& inst, const SolveRequest& request) {
    request.validate(inst);
    BranchAndBound solver(inst, request);
    return solver.run();
}

}  // namespace defsched
