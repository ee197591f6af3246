#include "defsched/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "json.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace defsched;
using namespace defsched::testing;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("defsched_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

bool instances_equal(const Instance& a, const Instance& b) {
    return a.n_members == b.n_members && a.n_defences == b.n_defences && a.n_roles == b.n_roles &&
           a.n_days == b.n_days && a.n_slots == b.n_slots && a.n_rooms == b.n_rooms &&
           a.n_subjects == b.n_subjects && a.duration == b.duration &&
           a.eligibility == b.eligibility && a.availability == b.availability &&
           a.expertise_member == b.expertise_member && a.expertise_defence == b.expertise_defence &&
           a.penalty == b.penalty;
}

}  // namespace

TEST_CASE("instance JSON round trip") {
    TempDir dir;
    Instance t1 = make_t1();
    save_instance(t1, dir.file("t1.json"));
    Instance loaded = load_instance(dir.file("t1.json"));
    CHECK(instances_equal(t1, loaded));

    Instance random = tiny_instance(7);
    save_instance(random, dir.file("random.json"));
    CHECK(instances_equal(random, load_instance(dir.file("random.json"))));
}

TEST_CASE("malformed fields produce named errors") {
    Instance t1 = make_t1();
    std::string text = instance_to_json_text(t1);

    SUBCASE("bad day index") {
        auto j = nlohmann::json::parse(text);
        j["availability"][0][0][0] = 9;  // day index beyond the single day
        try {
            instance_from_json_text(j.dump());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("day") != std::string::npos);
        }
    }
    SUBCASE("wrong format tag") {
        std::string broken = text;
        auto pos = broken.find("defsched-instance");
        broken.replace(pos, 17, "something-else000");
        CHECK_THROWS_AS(instance_from_json_text(broken), ParseError);
    }
    SUBCASE("missing counts") {
        CHECK_THROWS_AS(instance_from_json_text("{\"format\":\"defsched-instance\",\"version\":1}"),
                        ParseError);
    }
}

TEST_CASE("degenerate instance files are rejected at load time") {
    TempDir dir;
    Instance t1 = make_t1();
    t1.availability[2] = SlotMask(4);
    t1.availability[3] = SlotMask(4);
    t1.finalise();
    save_instance(t1, dir.file("degenerate.json"));
    try {
        load_instance(dir.file("degenerate.json"));
        FAIL("expected DegenerateInstanceError");
    } catch (const DegenerateInstanceError& e) {
        std::string what = e.what();
        CHECK(what.find("0") != std::string::npos);
        CHECK(what.find("1") != std::string::npos);
    }
}

TEST_CASE("solution round trip") {
    TempDir dir;
    Instance t1 = make_t1();
    FullSolution s = t1_reference_solution();
    save_solution(s, dir.file("sol.json"));
    FullSolution loaded = load_solution(dir.file("sol.json"), t1);
    CHECK(loaded == s);
}

TEST_CASE("front CSV round trip and row count") {
    TempDir dir;
    std::vector<FrontEntry> entries = {{{-4, 2, -1, -4}, 0}, {{-6, 3, 0, -4}, 1}};
    FrontArchive front(std::move(entries));
    save_front_csv(front, monolithic_objectives(), dir.file("front.csv"));
    FrontArchive loaded = load_front_csv(dir.file("front.csv"));
    CHECK(vector_set(loaded) == vector_set(front));

    std::ifstream in(dir.file("front.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);  // header + one row per entry
}

TEST_CASE("generator presets carry the expected shapes") {
    GeneratorSpec small = small_preset(1);
    CHECK(small.n_members == 25);
    CHECK(small.n_defences == 20);
    CHECK(small.preassigned_roles == 2);
    GeneratorSpec large = large_preset(1);
    CHECK(large.n_members == 50);
    CHECK(large.n_defences == 40);
    CHECK(large.preassigned_roles == 1);
    GeneratorSpec cs = case_study_preset(1);
    CHECK(cs.n_members == 47);
    CHECK(cs.n_defences == 36);
    CHECK(cs.n_days == 16);
    CHECK(cs.n_slots == 31);
    CHECK(cs.n_rooms == 2);
    CHECK(cs.duration == 4);
}

TEST_CASE("generated instances respect the requested shape and are never degenerate") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        GeneratorSpec spec = tiny_spec(seed);
        Instance inst = generate_instance(spec);
        CHECK(inst.n_members == spec.n_members);
        CHECK(inst.unsatisfiable_defences().empty());
        for (int j = 0; j < inst.n_defences; ++j)
            for (int t = 0; t < spec.preassigned_roles; ++t)
                CHECK(inst.eligibility[j][t].size() == 1);
    }
}

TEST_CASE("the larger presets generate and load") {
    Instance large = generate_instance(large_preset(3));
    CHECK(large.n_members == 50);
    CHECK(large.unsatisfiable_defences().empty());
    Instance cs = generate_instance(case_study_preset(3));
    CHECK(cs.n_defences == 36);
    CHECK(cs.unsatisfiable_defences().empty());
}

TEST_CASE("generation is deterministic in the seed") {
    Instance a = generate_instance(tiny_spec(42));
    Instance b = generate_instance(tiny_spec(42));
    CHECK(instances_equal(a, b));
}

TEST_CASE("generator spec validation") {
    GeneratorSpec spec;
    spec.preassigned_roles = spec.n_roles;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = GeneratorSpec{};
    spec.availability_density = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = GeneratorSpec{};
    spec.duration = spec.n_slots + 1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
