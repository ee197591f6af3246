#include "defsched/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace defsched {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
}

int get_int(const json& j, const char* field, int lo, int hi) {
    if (!j.contains(field) || !j[field].is_number_integer())
        throw ParseError(std::string("missing or non-integer field '") + field + "'");
    int value = j[field].get<int>();
    if (value < lo || value > hi)
        throw ParseError(std::string("field '") + field + "' out of range: " + std::to_string(value));
    return value;
}

}  // namespace

std::string instance_to_json_text(const Instance& inst) {
    json j;
    j["format"] = "defsched-instance";
    j["version"] = 1;
    j["members"] = inst.n_members;
    j["defences"] = inst.n_defences;
    j["roles"] = inst.n_roles;
    j["days"] = inst.n_days;
    j["slots_per_day"] = inst.n_slots;
    j["rooms"] = inst.n_rooms;
    j["subjects"] = inst.n_subjects;
    j["duration"] = inst.duration;
    j["eligibility"] = inst.eligibility;
    json availability = json::array();
    for (const auto& mask : inst.availability) {
        json slots = json::array();
        mask.for_each_set([&](int bit) {
            slots.push_back(json::array({bit / inst.n_slots, bit % inst.n_slots}));
        });
        availability.push_back(std::move(slots));
    }
    j["availability"] = std::move(availability);
    j["expertise_members"] = inst.expertise_member;
    j["expertise_defences"] = inst.expertise_defence;
    json penalties = json::array();
    for (int i = 0; i < inst.n_members; ++i)
        for (int s = 0; s < inst.total_slots(); ++s)
            if (inst.penalty[i][s] != 0)
                penalties.push_back(json{{"member", i},
                                         {"day", s / inst.n_slots},
                                         {"slot", s % inst.n_slots},
                                         {"value", inst.penalty[i][s]}});
    j["penalties"] = std::move(penalties);
    return j.dump(2) + "\n";
}

Instance instance_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != "defsched-instance")
        throw ParseError("field 'format' must be 'defsched-instance'");
    if (!j.contains("version") || j["version"] != 1) throw ParseError("unsupported 'version'");

    Instance inst;
    inst.n_members = get_int(j, "members", 1, 1 << 20);
    inst.n_defences = get_int(j, "defences", 1, 1 << 20);
    inst.n_roles = get_int(j, "roles", 1, 64);
    inst.n_days = get_int(j, "days", 1, 64);
    inst.n_slots = get_int(j, "slots_per_day", 1, 1 << 16);
    inst.n_rooms = get_int(j, "rooms", 1, 1 << 16);
    inst.n_subjects = get_int(j, "subjects", 0, 1 << 20);
    inst.duration = get_int(j, "duration", 1, inst.n_slots);

    try {
        inst.eligibility = j.at("eligibility").get<std::vector<std::vector<std::vector<int>>>>();
        inst.expertise_member = j.at("expertise_members").get<std::vector<std::vector<int>>>();
        inst.expertise_defence = j.at("expertise_defences").get<std::vector<std::vector<int>>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad eligibility/expertise tables: ") + e.what());
    }

    if (!j.contains("availability") || !j["availability"].is_array() ||
        static_cast<int>(j["availability"].size()) != inst.n_members)
        throw ParseError("field 'availability' must list every member");
    inst.availability.assign(inst.n_members, SlotMask(inst.total_slots()));
    for (int i = 0; i < inst.n_members; ++i) {
        for (const auto& pair : j["availability"][i]) {
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("availability entries must be [day, slot] pairs");
            int day = pair[0].get<int>();
            int slot = pair[1].get<int>();
            if (day < 0 || day >= inst.n_days)
                throw ParseError("availability day index out of range for member " +
                                 std::to_string(i) + ": " + std::to_string(day));
            if (slot < 0 || slot >= inst.n_slots)
                throw ParseError("availability slot index out of range for member " +
                                 std::to_string(i) + ": " + std::to_string(slot));
            inst.availability[i].set(inst.slot_index(day, slot));
        }
    }

    inst.penalty.assign(inst.n_members, std::vector<int>(inst.total_slots(), 0));
    if (j.contains("penalties")) {
        for (const auto& entry : j["penalties"]) {
            int member = get_int(entry, "member", 0, inst.n_members - 1);
            int day = get_int(entry, "day", 0, inst.n_days - 1);
            int slot = get_int(entry, "slot", 0, inst.n_slots - 1);
            int value = get_int(entry, "value", 0, 1 << 30);
            inst.penalty[member][inst.slot_index(day, slot)] = value;
        }
    }

    try {
        inst.finalise();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    Instance inst = instance_from_json_text(text.str());
    auto bad = inst.unsatisfiable_defences();
    if (!bad.empty()) {
        std::string list;
        for (int j : bad) list += (list.empty() ? "" : ", ") + std::to_string(j);
        throw DegenerateInstanceError("no feasible committee with a common window for defence(s): " +
                                      list);
    }
    return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
    write_text_file(path, instance_to_json_text(inst));
}

void save_solution(const FullSolution& solution, const std::string& path) {
    json j;
    j["format"] = "defsched-solution";
    j["version"] = 1;
    j["assignment"] = solution.config.assignment;
    json starts = json::array();
    for (const auto& s : solution.schedule.start)
        starts.push_back(json::array({s.day, s.slot, s.room}));
    j["schedule"] = std::move(starts);
    write_text_file(path, j.dump(2) + "\n");
}

FullSolution load_solution(const std::string& path, const Instance& inst) {
    json j = read_json_file(path);
    if (!j.contains("format") || j["format"] != "defsched-solution")
        throw ParseError("field 'format' must be 'defsched-solution'");
    FullSolution solution;
    try {
        solution.config.assignment = j.at("assignment").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad 'assignment': ") + e.what());
    }
    if (!j.contains("schedule") || !j["schedule"].is_array())
        throw ParseError("missing 'schedule' array");
    for (const auto& entry : j["schedule"]) {
        if (!entry.is_array() || entry.size() != 3)
            throw ParseError("schedule entries must be [day, slot, room]");
        solution.schedule.start.push_back(
            {entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>()});
    }
    if (static_cast<int>(solution.schedule.start.size()) != inst.n_defences)
        throw ParseError("schedule length does not match the instance");
    return solution;
}

void save_front_csv(const FrontArchive& front, const ObjectiveSet& objectives,
                    const std::string& path) {
    std::vector<std::pair<ObjectiveVector, long long>> rows;
    rows.reserve(front.size());
    for (const auto& e : front.entries()) rows.emplace_back(e.z, e.payload);
    std::sort(rows.begin(), rows.end());
    std::ostringstream out;
    for (std::size_t c = 0; c < objectives.size(); ++c)
        out << (c ? "," : "") << obj_name(objectives[c]);
    out << ",payload\n";
    for (const auto& [z, payload] : rows) {
        for (std::size_t c = 0; c < z.size(); ++c) out << (c ? "," : "") << z[c];
        out << ',' << payload << '\n';
    }
    write_text_file(path, out.str());
}

FrontArchive load_front_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty front file");
    std::vector<FrontEntry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<long long> values;
        while (std::getline(row, cell, ',')) {
            try {
                values.push_back(std::stoll(cell));
            } catch (const std::exception&) {
                throw ParseError(path + ": non-integer cell '" + cell + "'");
            }
        }
        if (values.size() < 2) throw ParseError(path + ": short row");
        FrontEntry entry;
        entry.payload = values.back();
        values.pop_back();
        entry.z = std::move(values);
        entries.push_back(std::move(entry));
    }
    return FrontArchive(std::move(entries));
}

void save_front_json(const FrontArchive& front, const ObjectiveSet& objectives,
                     std::span<const FullSolution> solutions, const std::string& path) {
    json j;
    j["format"] = "defsched-front";
    j["version"] = 1;
    json names = json::array();
    for (Obj o : objectives) names.push_back(obj_name(o));
    j["objectives"] = std::move(names);
    std::vector<std::pair<ObjectiveVector, long long>> rows;
    for (const auto& e : front.entries()) rows.emplace_back(e.z, e.payload);
    std::sort(rows.begin(), rows.end());
    json entries = json::array();
    for (const auto& [z, payload] : rows) {
        json entry;
        entry["z"] = z;
        entry["payload"] = payload;
        if (payload >= 0 && payload < static_cast<long long>(solutions.size())) {
            const FullSolution& s = solutions[static_cast<std::size_t>(payload)];
            entry["assignment"] = s.config.assignment;
            json starts = json::array();
            for (const auto& d : s.schedule.start) starts.push_back(json::array({d.day, d.slot, d.room}));
            entry["schedule"] = std::move(starts);
        }
        entries.push_back(std::move(entry));
    }
    j["solutions"] = std::move(entries);
    write_text_file(path, j.dump(2) + "\n");
}

void GeneratorSpec::validate() const {
    if (n_members < 1 || n_defences < 1 || n_roles < 1 || n_days < 1 || n_slots < 1 || n_rooms < 1 ||
        n_subjects < 0)
        throw std::invalid_argument("generator: counts must be positive");
    if (duration < 1 || duration > n_slots)
        throw std::invalid_argument("generator: duration must fit in a day");
    if (preassigned_roles < 0 || preassigned_roles >= n_roles)
        throw std::invalid_argument("generator: preassigned roles must be fewer than roles");
    auto density_ok = [](double d) { return d > 0.0 && d <= 1.0; };
    if (!density_ok(availability_density) || !density_ok(eligibility_density) ||
        !(penalty_density >= 0.0 && penalty_density <= 1.0))
        throw std::invalid_argument("generator: densities out of range");
}

GeneratorSpec small_preset(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.n_members = 25;
    spec.n_defences = 20;
    spec.n_roles = 3;
    spec.preassigned_roles = 2;
    spec.n_days = 5;
    spec.n_slots = 8;
    spec.n_rooms = 2;
    spec.n_subjects = 6;
    spec.duration = 2;
    spec.seed = seed;
    return spec;
}

GeneratorSpec large_preset(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.n_members = 50;
    spec.n_defences = 40;
    spec.n_roles = 3;
    spec.preassigned_roles = 1;
    spec.n_days = 8;
    spec.n_slots = 8;
    spec.n_rooms = 3;
    spec.n_subjects = 8;
    spec.duration = 2;
    spec.seed = seed;
    return spec;
}

GeneratorSpec case_study_preset(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.n_members = 47;
    spec.n_defences = 36;
    spec.n_roles = 3;
    spec.preassigned_roles = 1;
    spec.n_days = 16;
    spec.n_slots = 31;
    spec.n_rooms = 2;
    spec.n_subjects = 8;
    spec.duration = 4;
    spec.seed = seed;
    return spec;
}

Instance generate_instance(const GeneratorSpec& spec) {
    spec.validate();
    Rng availability_rng(derive_seed(spec.seed, 11));
    Rng eligibility_rng(derive_seed(spec.seed, 12));
    Rng expertise_rng(derive_seed(spec.seed, 13));
    Rng penalty_rng(derive_seed(spec.seed, 14));

    Instance inst;
    inst.n_members = spec.n_members;
    inst.n_defences = spec.n_defences;
    inst.n_roles = spec.n_roles;
    inst.n_days = spec.n_days;
    inst.n_slots = spec.n_slots;
    inst.n_rooms = spec.n_rooms;
    inst.n_subjects = spec.n_subjects;
    inst.duration = spec.duration;

    inst.availability.assign(spec.n_members, SlotMask(inst.total_slots()));
    for (int i = 0; i < spec.n_members; ++i)
        for (int s = 0; s < inst.total_slots(); ++s)
            if (availability_rng.chance(spec.availability_density)) inst.availability[i].set(s);

    inst.expertise_member.assign(spec.n_members, {});
    for (int i = 0; i < spec.n_members; ++i)
        for (int q = 0; q < spec.n_subjects; ++q)
            if (expertise_rng.chance(0.3)) inst.expertise_member[i].push_back(q);
    inst.expertise_defence.assign(spec.n_defences, {});
    for (int jd = 0; jd < spec.n_defences; ++jd) {
        int count = spec.n_subjects == 0 ? 0 : expertise_rng.uniform_int(1, std::min(2, spec.n_subjects));
        std::vector<int> subjects(spec.n_subjects);
        for (int q = 0; q < spec.n_subjects; ++q) subjects[q] = q;
        expertise_rng.shuffle(subjects);
        for (int c = 0; c < count; ++c) inst.expertise_defence[jd].push_back(subjects[c]);
        std::sort(inst.expertise_defence[jd].begin(), inst.expertise_defence[jd].end());
    }

    inst.penalty.assign(spec.n_members, std::vector<int>(inst.total_slots(), 0));
    for (int i = 0; i < spec.n_members; ++i)
        for (int s = 0; s < inst.total_slots(); ++s)
            if (penalty_rng.chance(spec.penalty_density))
                inst.penalty[i][s] = penalty_rng.uniform_int(1, 3);

    // Roles per defence: preassigned ones get singleton sets; the rest are
    // density-sampled. Resample a defence until it admits a feasible
    // committee with a common window.
    inst.eligibility.assign(spec.n_defences, {});
    for (int jd = 0; jd < spec.n_defences; ++jd) {
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            std::vector<std::vector<int>> roles(spec.n_roles);
            std::vector<int> members(spec.n_members);
            for (int i = 0; i < spec.n_members; ++i) members[i] = i;
            eligibility_rng.shuffle(members);
            for (int t = 0; t < spec.preassigned_roles; ++t) roles[t] = {members[t]};
            for (int t = spec.preassigned_roles; t < spec.n_roles; ++t) {
                for (int i = 0; i < spec.n_members; ++i)
                    if (eligibility_rng.chance(spec.eligibility_density)) roles[t].push_back(i);
                if (roles[t].empty()) roles[t].push_back(members[t]);
            }
            inst.eligibility[jd] = std::move(roles);

            // Probe feasibility of this defence in isolation.
            Instance single = inst;
            single.n_defences = 1;
            single.eligibility = {inst.eligibility[jd]};
            single.expertise_defence = {inst.expertise_defence[jd]};
            single.finalise();
            ok = find_feasible_committee(single, 0).has_value();
        }
        if (!ok)
            throw GenerationError("generator: defence " + std::to_string(jd) +
                                  " admits no feasible committee after 1000 retries");
    }
    inst.finalise();
    return inst;
}

}  // namespace defsched
