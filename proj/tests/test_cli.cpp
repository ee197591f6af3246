// Behavioral checks of the command-line surface: exit codes, artifact
// shapes, and the documented subcommand contracts. Invoked by CTest with the
// binary and data locations.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "defsched/io.hpp"
#include "defsched/model.hpp"
#include "helpers.hpp"

using namespace defsched;
using namespace defsched::testing;

namespace {

int failures = 0;

void expect(bool condition, const std::string& what) {
    if (condition) return;
    ++failures;
    std::cerr << "FAILED: " << what << "\n";
}

struct Cli {
    std::string binary;
    std::filesystem::path work;

    int run(const std::string& args, std::string* out = nullptr) const {
        std::string log = (work / "out.txt").string();
        int rc = std::system((binary + " " + args + " > " + log + " 2>&1").c_str());
        if (out) {
            std::ifstream in(log);
            std::ostringstream text;
            text << in.rdbuf();
            *out = text.str();
        }
        return WEXITSTATUS(rc);
    }
    std::string file(const std::string& name) const { return (work / name).string(); }
};

}  // namespace

int main(int argc, char** argv) {
    Cli cli;
    std::string data_dir;
    for (int a = 1; a + 1 < argc; ++a) {
        std::string flag = argv[a];
        if (flag == "--cli") cli.binary = argv[a + 1];
        if (flag == "--data") data_dir = argv[a + 1];
    }
    if (cli.binary.empty() || data_dir.empty()) {
        std::cerr << "usage: cli_tests --cli <binary> --data <dir>\n";
        return 64;
    }
    cli.work = std::filesystem::temp_directory_path() / "defsched_cli_tests";
    std::filesystem::remove_all(cli.work);
    std::filesystem::create_directories(cli.work);

    // generate -> load round trip
    expect(cli.run("generate --members 6 --defences 2 --roles 2 --preassigned 1 --days 2 "
                   "--slots 4 --rooms 1 --subjects 3 --duration 2 --seed 5 --out " +
                   cli.file("gen.json")) == 0,
           "generate exits 0");
    Instance generated = load_instance(cli.file("gen.json"));
    expect(generated.n_members == 6, "generated instance has the requested members");

    // usage errors exit 1
    expect(cli.run("solve") == 1, "missing required flags exit 1");
    expect(cli.run("nonsense") == 1, "unknown subcommand exits 1");

    // solve on the shipped canonical instance
    expect(cli.run("solve --instance " + data_dir + "/t1.json --method mono-eps --grid unit "
                   "--time-limit 1000 --iteration-log " + cli.file("ledger.csv") + " --out " +
                   cli.file("front.csv")) == 0,
           "mono-eps solve exits 0");
    expect(std::filesystem::exists(cli.file("front.csv")), "front CSV written");
    expect(std::filesystem::exists(cli.file("front.json")), "front JSON written");
    expect(std::filesystem::exists(cli.file("front.bounds.json")), "bounds sidecar written");
    expect(std::filesystem::exists(cli.file("front.meta.json")), "meta sidecar written");
    expect(std::filesystem::exists(cli.file("ledger.csv")), "iteration ledger written");

    // evaluate: a feasible solution, then a tampered one (still exit 0)
    FullSolution good = t1_reference_solution();
    save_solution(good, cli.file("good.json"));
    std::string output;
    expect(cli.run("evaluate --instance " + data_dir + "/t1.json --solution " + cli.file("good.json"),
                   &output) == 0,
           "evaluate feasible exits 0");
    expect(output.find("feasible") != std::string::npos, "evaluate reports feasible");
    expect(output.find("z1=-4") != std::string::npos, "evaluate prints objectives");

    FullSolution tampered = good;
    tampered.schedule.start[1] = {0, 0, 0};  // room clash
    save_solution(tampered, cli.file("bad.json"));
    expect(cli.run("evaluate --instance " + data_dir + "/t1.json --solution " + cli.file("bad.json"),
                   &output) == 0,
           "evaluate on a tampered solution still exits 0");
    expect(output.find("violation") != std::string::npos, "evaluate lists violations");

    // malformed solution (index out of range) is a runtime failure
    FullSolution malformed = good;
    malformed.config.assignment[0] = 77;
    save_solution(malformed, cli.file("malformed.json"));
    expect(cli.run("evaluate --instance " + data_dir + "/t1.json --solution " +
                   cli.file("malformed.json")) == 3,
           "malformed solution exits 3");

    // compare a front against itself: no point dominates itself
    expect(cli.run("compare --front " + cli.file("front.csv") + " --baseline " + cli.file("front.csv"),
                   &output) == 0,
           "compare exits 0");
    FrontArchive front = load_front_csv(cli.file("front.csv"));
    expect(output.find("," + std::to_string(front.size()) + "\n") != std::string::npos,
           "self-comparison keeps every front point");

    // export-tradeoffs writes one CSV per objective pair
    expect(cli.run("export-tradeoffs --front " + cli.file("front.csv") + " --out-dir " +
                   cli.file("tradeoffs")) == 0,
           "export-tradeoffs exits 0");
    int pair_files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(cli.file("tradeoffs")))
        if (entry.path().extension() == ".csv") ++pair_files;
    expect(pair_files == 6, "six pairwise trade-off files for four objectives");

    // degenerate instance file -> exit 2
    Instance degenerate = make_t1();
    degenerate.availability[2] = SlotMask(4);
    degenerate.availability[3] = SlotMask(4);
    degenerate.finalise();
    save_instance(degenerate, cli.file("degenerate.json"));
    expect(cli.run("solve --instance " + cli.file("degenerate.json") + " --out " +
                   cli.file("nope.csv")) == 2,
           "degenerate instance exits 2");

    std::cout << (failures == 0 ? "cli tests passed" : std::to_string(failures) + " cli test(s) failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
