#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "defsched/epsilon.hpp"
#include "defsched/io.hpp"
#include "defsched/model.hpp"
#include "defsched/pipeline.hpp"
#include "json.hpp"

namespace {

using namespace defsched;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitRuntime = 3;

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void save_bounds(const InitReport& init, const std::string& path) {
    json j;
    json names = json::array();
    for (Obj o : init.objectives) names.push_back(obj_name(o));
    j["objectives"] = std::move(names);
    j["z_min"] = init.z_min;
    j["z_max"] = init.z_max;
    write_file(path, j.dump(2) + "\n");
}

/// Wall-clock metadata lives in a sidecar so the main artifacts stay
/// byte-identical across reruns.
void save_meta(const std::string& path, double seconds) {
    json j;
    auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    j["elapsed_seconds"] = seconds;
    write_file(path, j.dump(2) + "\n");
}

struct SolveArgs {
    std::string instance_path;
    std::string method = "mono-eps";
    std::string primary = "z1";
    std::string stage2_primary = "z3";
    std::string grid = "unit";
    std::string stage2_grid = "unit";
    std::string nf = "1";
    double time_limit = 120.0;
    double init_time_limit = 120.0;
    std::uint64_t seed = 0;
    std::string seeds_file;
    std::string baseline_path;
    std::string iteration_log;
    std::string out = "front.csv";
    int pop_size = 200;
    int generations = 100;
    bool generations_given = false;
    int mutation = 5;
    int threads = 1;
    int relink_repetitions = 2;
    bool keep_all = false;
    bool no_skip = false;
};

RunConfig build_config(const SolveArgs& args) {
    RunConfig cfg;
    if (args.method == "mono-eps")
        cfg.method = Method::MonolithicEps;
    else if (args.method == "decomp-nsga2")
        cfg.method = Method::DecompNsga2;
    else if (args.method == "decomp-nsga3")
        cfg.method = Method::DecompNsga3;
    else if (args.method == "casestudy")
        cfg.method = Method::DecompCaseStudy;
    else
        throw CLI::ValidationError("--method", "unknown method " + args.method);

    auto primary = obj_from_name(args.primary);
    if (!primary) throw CLI::ValidationError("--primary", "unknown objective " + args.primary);
    cfg.mono_primary = *primary;
    auto stage2_primary = obj_from_name(args.stage2_primary);
    if (!stage2_primary || (*stage2_primary != Obj::Z3 && *stage2_primary != Obj::Z4))
        throw CLI::ValidationError("--stage2-primary", "must be z3 or z4");
    cfg.stage2_primary = *stage2_primary;
    cfg.mono_grid = args.grid == "tenth" ? GridPolicy::Tenth : GridPolicy::Unit;
    cfg.stage2_grid = args.stage2_grid == "tenth" ? GridPolicy::Tenth : GridPolicy::Unit;
    cfg.time_limit_seconds = args.time_limit;
    cfg.init_time_limit_seconds = args.init_time_limit;
    cfg.ga.population_size = args.pop_size;
    cfg.ga.generations = args.generations;
    cfg.ga.mutation_percent = args.mutation;
    if (args.nf != "1" && args.nf != "all")
        throw CLI::ValidationError("--nf", "must be 1 or all");
    cfg.ga.fronts_kept = args.nf == "all" ? kAllFronts : 1;
    cfg.ga.master_seed = args.seed;
    cfg.keep_all_generations = args.keep_all;
    cfg.skipping_enabled = !args.no_skip;
    cfg.threads = args.threads;
    cfg.relink_repetitions = args.relink_repetitions;
    if (cfg.method == Method::DecompCaseStudy) {
        for (int k = 1; k <= 11; ++k) cfg.relink_probabilities.push_back(k / 12.0);
        cfg.keep_all_generations = true;
        if (!args.generations_given) cfg.ga.generations = 5;
    }
    if (!args.seeds_file.empty()) {
        std::ifstream in(args.seeds_file);
        if (!in) throw std::runtime_error("cannot open seeds file " + args.seeds_file);
        std::uint64_t s;
        while (in >> s) cfg.sweep_seeds.push_back(s);
        if (cfg.sweep_seeds.empty()) throw std::runtime_error("seeds file lists no seeds");
    }
    return cfg;
}

int cmd_generate(const GeneratorSpec& spec, const std::string& preset, const std::string& out) {
    GeneratorSpec chosen = spec;
    if (preset == "small")
        chosen = small_preset(spec.seed);
    else if (preset == "large")
        chosen = large_preset(spec.seed);
    else if (preset == "casestudy")
        chosen = case_study_preset(spec.seed);
    else if (!preset.empty())
        throw CLI::ValidationError("--preset", "unknown preset " + preset);
    Instance inst = generate_instance(chosen);
    save_instance(inst, out);
    std::cout << "wrote " << out << " (" << inst.n_members << " members, " << inst.n_defences
              << " defences)\n";
    return kExitOk;
}

int cmd_solve(const SolveArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    Instance inst = load_instance(args.instance_path);
    RunConfig cfg = build_config(args);

    if (!cfg.sweep_seeds.empty()) {
        FrontArchive baseline;
        bool has_baseline = false;
        if (!args.baseline_path.empty()) {
            baseline = load_front_csv(args.baseline_path);
            has_baseline = true;
        }
        ComparisonRow row = sweep(inst, cfg, has_baseline ? &baseline : nullptr);
        write_file(args.out, comparison_csv_header() + comparison_csv_row(row));
        save_meta(args.out + ".meta.json",
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        std::cout << comparison_csv_header() << comparison_csv_row(row);
        return kExitOk;
    }

    MethodResult result = run_method(inst, cfg);
    if (!args.iteration_log.empty()) write_file(args.iteration_log, result.iteration_ledger);
    save_front_csv(result.front, monolithic_objectives(), args.out);
    std::string stem = args.out;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem = stem.substr(0, stem.size() - 4);
    save_front_json(result.front, monolithic_objectives(), result.solutions, stem + ".json");
    save_bounds(result.init, stem + ".bounds.json");
    save_meta(stem + ".meta.json",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    FrontArchive baseline;
    const FrontArchive* baseline_ptr = nullptr;
    if (!args.baseline_path.empty()) {
        baseline = load_front_csv(args.baseline_path);
        baseline_ptr = &baseline;
    }
    ComparisonRow row = summarize(result, cfg, baseline_ptr);
    std::cout << comparison_csv_header() << comparison_csv_row(row);
    if (!result.all_optimal)
        std::cout << "note: some iterations hit the time limit; the front is the non-dominated "
                     "filter of what was found\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& instance_path, const std::string& solution_path) {
    Instance inst = load_instance(instance_path);
    FullSolution solution = load_solution(solution_path, inst);
    FeasibilityReport report = check_feasible(inst, solution);
    if (report.feasible()) {
        std::cout << "feasible\n";
    } else {
        std::cout << report.violations.size() << " violation(s)\n";
        for (const auto& v : report.violations) std::cout << "  " << v.describe() << "\n";
    }
    ObjectiveVector z = evaluate(inst, solution, monolithic_objectives());
    for (std::size_t c = 0; c < z.size(); ++c)
        std::cout << obj_name(monolithic_objectives()[c]) << "=" << z[c] << (c + 1 < z.size() ? " " : "");
    std::cout << " z5=" << eval_z5_proxy(inst, solution.config) << "\n";
    return kExitOk;
}

int cmd_compare(const std::string& front_path, const std::string& baseline_path,
                const std::string& bounds_path, const std::string& out) {
    FrontArchive front = load_front_csv(front_path);
    FrontArchive baseline = load_front_csv(baseline_path);

    ObjectiveVector z_min, z_max;
    if (!bounds_path.empty()) {
        std::ifstream in(bounds_path);
        if (!in) throw std::runtime_error("cannot open " + bounds_path);
        json j;
        in >> j;
        z_min = j.at("z_min").get<ObjectiveVector>();
        z_max = j.at("z_max").get<ObjectiveVector>();
    } else {
        // Union min/max of both fronts.
        auto fold = [&](const FrontArchive& a) {
            for (const auto& e : a.entries()) {
                if (z_min.empty()) {
                    z_min = e.z;
                    z_max = e.z;
                    continue;
                }
                for (std::size_t c = 0; c < e.z.size(); ++c) {
                    z_min[c] = std::min(z_min[c], e.z[c]);
                    z_max[c] = std::max(z_max[c], e.z[c]);
                }
            }
        };
        fold(front);
        fold(baseline);
    }

    auto hv = [&](const FrontArchive& a) {
        std::vector<ObjectiveVector> points;
        for (const auto& e : a.entries()) points.push_back(e.z);
        return normalized_hypervolume(points, z_min, z_max);
    };
    std::ostringstream row;
    row << "front,baseline,hv_front,hv_baseline,n0_front,n0_baseline,n0_vs_baseline\n";
    char hv_front[32], hv_base[32];
    std::snprintf(hv_front, sizeof hv_front, "%.6f", hv(front));
    std::snprintf(hv_base, sizeof hv_base, "%.6f", hv(baseline));
    row << front_path << ',' << baseline_path << ',' << hv_front << ',' << hv_base << ','
        << front.size() << ',' << baseline.size() << ',' << count_not_dominated_by(front, baseline)
        << '\n';
    std::cout << row.str();
    if (!out.empty()) write_file(out, row.str());
    return kExitOk;
}

int cmd_export_tradeoffs(const std::string& front_path, const std::string& out_dir) {
    std::ifstream in(front_path);
    if (!in) throw std::runtime_error("cannot open " + front_path);
    std::string header;
    std::getline(in, header);
    std::vector<std::string> columns;
    {
        std::istringstream h(header);
        std::string cell;
        while (std::getline(h, cell, ',')) columns.push_back(cell);
    }
    if (columns.size() < 3) throw std::runtime_error("front file has too few columns");
    columns.pop_back();  // payload
    std::vector<std::vector<long long>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream r(line);
        std::string cell;
        std::vector<long long> values;
        while (std::getline(r, cell, ',')) values.push_back(std::stoll(cell));
        values.pop_back();
        rows.push_back(std::move(values));
    }
    std::filesystem::create_directories(out_dir);
    for (std::size_t a = 0; a < columns.size(); ++a) {
        for (std::size_t b = a + 1; b < columns.size(); ++b) {
            std::ostringstream out;
            out << columns[a] << ',' << columns[b] << '\n';
            for (const auto& row : rows) out << row[a] << ',' << row[b] << '\n';
            write_file(out_dir + "/tradeoff_" + columns[a] + "_" + columns[b] + ".csv", out.str());
        }
    }
    std::cout << "wrote " << (columns.size() * (columns.size() - 1) / 2) << " trade-off files to "
              << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective thesis defence scheduling solver"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Generate a random instance file");
    GeneratorSpec spec;
    std::string preset, gen_out = "instance.json";
    generate->add_option("--preset", preset, "small | large | casestudy");
    generate->add_option("--members", spec.n_members);
    generate->add_option("--defences", spec.n_defences);
    generate->add_option("--roles", spec.n_roles);
    generate->add_option("--preassigned", spec.preassigned_roles);
    generate->add_option("--days", spec.n_days);
    generate->add_option("--slots", spec.n_slots);
    generate->add_option("--rooms", spec.n_rooms);
    generate->add_option("--subjects", spec.n_subjects);
    generate->add_option("--duration", spec.duration);
    generate->add_option("--availability-density", spec.availability_density);
    generate->add_option("--eligibility-density", spec.eligibility_density);
    generate->add_option("--penalty-density", spec.penalty_density);
    generate->add_option("--seed", spec.seed);
    generate->add_option("--out", gen_out);

    // solve
    auto* solve = app.add_subcommand("solve", "Solve an instance and write the front");
    SolveArgs args;
    solve->add_option("--instance", args.instance_path)->required();
    solve->add_option("--method", args.method, "mono-eps | decomp-nsga2 | decomp-nsga3 | casestudy");
    solve->add_option("--primary", args.primary, "monolithic primary objective (default z1)");
    solve->add_option("--stage2-primary", args.stage2_primary, "z3 | z4 (default z3)");
    solve->add_option("--grid", args.grid, "unit | tenth");
    solve->add_option("--stage2-grid", args.stage2_grid, "unit | tenth");
    solve->add_option("--time-limit", args.time_limit, "seconds per eps-constraint iteration");
    solve->add_option("--init-time-limit", args.init_time_limit, "seconds per initialization solve");
    solve->add_option("--seed", args.seed);
    solve->add_option("--seeds-file", args.seeds_file, "whitespace-separated master seeds (sweep)");
    solve->add_option("--nf", args.nf, "1 | all — partial-solution fronts sent to stage 2");
    solve->add_option("--pop-size", args.pop_size);
    solve->add_option("--generations", args.generations)
        ->each([&args](const std::string&) { args.generations_given = true; });
    solve->add_option("--mutation", args.mutation, "mutation percent");
    solve->add_option("--threads", args.threads);
    solve->add_option("--baseline", args.baseline_path, "front CSV for the N0-vs-baseline column");
    solve->add_option("--iteration-log", args.iteration_log, "write the eps iteration ledger CSV");
    solve->add_flag("--keep-all-generations", args.keep_all);
    solve->add_flag("--no-skip", args.no_skip, "disable eps-constraint skip logic");
    solve->add_option("--out", args.out);

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Feasibility report + objective vector");
    std::string eval_instance, eval_solution;
    evaluate_cmd->add_option("--instance", eval_instance)->required();
    evaluate_cmd->add_option("--solution", eval_solution)->required();

    // compare
    auto* compare = app.add_subcommand("compare", "Compare a front against a baseline front");
    std::string cmp_front, cmp_baseline, cmp_bounds, cmp_out;
    compare->add_option("--front", cmp_front)->required();
    compare->add_option("--baseline", cmp_baseline)->required();
    compare->add_option("--bounds", cmp_bounds, "bounds JSON from solve (else union min/max)");
    compare->add_option("--out", cmp_out);

    // export-tradeoffs
    auto* tradeoffs = app.add_subcommand("export-tradeoffs", "Pairwise objective CSVs from a front");
    std::string trade_front, trade_dir = "tradeoffs";
    tradeoffs->add_option("--front", trade_front)->required();
    tradeoffs->add_option("--out-dir", trade_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*generate) return cmd_generate(spec, preset, gen_out);
        if (*solve) return cmd_solve(args);
        if (*evaluate_cmd) return cmd_evaluate(eval_instance, eval_solution);
        if (*compare) return cmd_compare(cmp_front, cmp_baseline, cmp_bounds, cmp_out);
        if (*tradeoffs) return cmd_export_tradeoffs(trade_front, trade_dir);
    } catch (const DegenerateInstanceError& e) {
        std::cerr << "infeasible instance: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const InfeasibleInstanceError& e) {
        std::cerr << "infeasible instance: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const GenerationError& e) {
        std::cerr << "infeasible instance: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
