// gwabm - agent-based spatial epidemic simulator with a policy experiment
// harness. Subcommands: gen-region, simulate, experiment, validate.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gwabm/engine.hpp"
#include "gwabm/errors.hpp"
#include "gwabm/experiments.hpp"

namespace {

using namespace gwabm;

struct CommonOpts {
    std::uint64_t seed = 0;
    int seeds = 10;
    std::int64_t cycles = 5500;
    std::int64_t pop = 1000;
    std::int32_t buildings = 0; // 0: derive from population
    std::vector<std::string> params_files;
    std::string policy_file;
    std::string region_dir;
    std::string out_dir;
    int threads = 0;
    bool assert_invariants = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_seed_list) {
    cmd->add_option("--seed", o.seed, "Master RNG seed");
    if (with_seed_list) {
        cmd->add_option("--seeds", o.seeds, "Number of seeds (0..N-1)")->check(CLI::Range(1, 1000));
    }
    cmd->add_option("--cycles", o.cycles, "Simulated hours")->check(CLI::Range(std::int64_t{1}, std::int64_t{10000000}));
    cmd->add_option("--pop", o.pop, "Synthetic population size")->check(CLI::Range(std::int64_t{10}, std::int64_t{10000000}));
    cmd->add_option("--buildings", o.buildings, "Building count for the generated region");
    cmd->add_option("--params,--params-file", o.params_files, "Flat key = value parameter file (repeatable)");
    cmd->add_option("--policy", o.policy_file, "Policy spec file");
    cmd->add_option("--region", o.region_dir, "Load region from directory instead of generating");
    cmd->add_option("--threads", o.threads, "Worker threads for experiments (0 = auto)");
    cmd->add_flag("--assert-invariants", o.assert_invariants,
                  "Check conservation and monotonicity every cycle");
}

SimConfig build_config(const CommonOpts& o) {
    SimConfig cfg;
    cfg.seed = o.seed;
    cfg.n_cycles = o.cycles;
    cfg.assert_invariants = o.assert_invariants;
    if (!o.region_dir.empty()) {
        cfg.region.load_dir = o.region_dir;
    } else {
        RegionSpec spec = RegionSpec::desk_default(o.pop);
        if (o.buildings > 0) spec.n_buildings = o.buildings;
        cfg.region.spec = spec;
    }
    std::map<std::string, std::string> kv;
    for (const std::string& f : o.params_files) {
        auto file_kv = parse_kv_file(f);
        kv.insert(file_kv.begin(), file_kv.end());
    }
    apply_epi_params(cfg.epi, kv);
    apply_population_params(cfg.pop_params, kv);
    if (!kv.empty()) throw ParseError("unknown parameter key \"" + kv.begin()->first + "\"");
    if (!o.policy_file.empty()) cfg.policy = load_policy_file(o.policy_file);
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

int cmd_gen_region(const CommonOpts& o, int blocks, bool mini) {
    RegionSpec spec = mini ? RegionSpec::gwalior_mini() : RegionSpec::desk_default(o.pop);
    if (!mini) {
        spec.total_population = o.pop;
        if (o.buildings > 0) spec.n_buildings = o.buildings;
        if (blocks > 0) spec.n_blocks = blocks;
    }
    Region region = generate_synthetic_region(spec, o.seed);
    std::string out_dir = o.out_dir.empty() ? "region_out" : o.out_dir;
    save_region_dir(region, out_dir);
    write_text(out_dir + "/region.json", region_to_canonical_json(region));

    nlohmann::json manifest;
    manifest["seed"] = o.seed;
    manifest["total_population"] = region.total_population;
    manifest["blocks"] = region.blocks.size();
    manifest["buildings"] = region.buildings.size();
    manifest["grid_total"] = region.grid.total();
    nlohmann::json hist;
    for (int t = 0; t < kBuildingTypeCount; ++t) {
        auto ids = region.buildings_of_type(static_cast<BuildingType>(t));
        hist[to_string(static_cast<BuildingType>(t))] = ids.size();
    }
    manifest["type_histogram"] = hist;
    manifest["version"] = kToolVersion;
    write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");

    std::cout << "region written to " << out_dir << " (" << region.buildings.size()
              << " buildings, " << region.blocks.size() << " blocks, population "
              << region.total_population << ")\n";
    return 0;
}

int cmd_simulate(const CommonOpts& o, bool dump_population) {
    SimConfig cfg = build_config(o);
    auto t0 = std::chrono::steady_clock::now();
    auto records = run(cfg);
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    SimSummary s = summarize(records);

    std::string out_dir = o.out_dir.empty() ? "sim_out" : o.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    write_text(out_dir + "/timeseries.csv", records_to_csv(records));
    write_text(out_dir + "/block_deaths.csv", per_block_deaths_csv(records));
    if (dump_population) {
        SimState initial = init_sim(cfg);
        write_text(out_dir + "/population.csv", population_to_csv(initial.individuals));
        write_text(out_dir + "/agendas.csv", agendas_to_csv(initial.individuals));
    }

    nlohmann::json manifest;
    manifest["seed"] = cfg.seed;
    manifest["cycles"] = cfg.n_cycles;
    manifest["policy"] = to_string(cfg.policy.kind);
    manifest["testing"] = to_string(cfg.policy.testing.kind);
    manifest["initial_infected"] = cfg.initial_infected;
    manifest["epi_params"] = epi_params_to_kv(cfg.epi);
    manifest["peak_infected"] = s.peak_infected;
    manifest["peak_cycle"] = s.peak_cycle;
    manifest["total_deaths"] = s.total_deaths;
    manifest["attack_rate"] = s.attack_rate;
    manifest["version"] = kToolVersion;
    write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");

    std::cout << "run complete: peak_infected=" << s.peak_infected << " at cycle "
              << s.peak_cycle << ", total_deaths=" << s.total_deaths
              << ", attack_rate=" << s.attack_rate << " (" << elapsed << " s)\n"
              << "outputs in " << out_dir << "\n";
    return 0;
}

int cmd_experiment(const std::string& which, const CommonOpts& o,
                   const std::vector<std::string>& custom_arms) {
    SimConfig base = build_config(o);
    ExperimentSpec spec;
    if (which == "three-measures") {
        spec = make_three_measures(base);
    } else if (which == "containments") {
        spec = make_containments(base);
    } else if (which == "realistic-actions") {
        spec = make_realistic_actions(base);
    } else if (which == "custom") {
        spec.name = "custom";
        spec.base = base;
        spec.seeds = default_seeds(o.seeds);
        for (const std::string& armdef : custom_arms) {
            std::size_t eq = armdef.find('=');
            if (eq == std::string::npos) {
                throw SpecError("--arm expects LABEL=POLICY_FILE, got \"" + armdef + "\"");
            }
            Arm arm;
            arm.label = armdef.substr(0, eq);
            arm.policy = load_policy_file(armdef.substr(eq + 1));
            spec.arms.push_back(std::move(arm));
        }
    } else {
        throw SpecError("unknown experiment \"" + which + "\"");
    }
    spec.seeds = default_seeds(o.seeds);

    auto t0 = std::chrono::steady_clock::now();
    ComparisonResult result = run_experiment(spec, o.threads);
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string out_dir = o.out_dir.empty() ? spec.name + "_out" : o.out_dir;
    auto files = write_outputs(result, out_dir);

    std::cout << "experiment " << spec.name << ": " << spec.arms.size() << " arms x "
              << spec.seeds.size() << " seeds in " << elapsed << " s\n";
    for (const ArmResult& arm : result.arms) {
        std::cout << "  " << arm.label << ": median peak " << arm.median_peak_infected
                  << " at cycle " << arm.median_peak_cycle << ", median deaths "
                  << arm.median_total_deaths << ", median attack rate "
                  << arm.median_attack_rate << "\n";
    }
    std::cout << files.size() << " files in " << out_dir << "\n";
    return 0;
}

int cmd_validate(const CommonOpts& o) {
    SimConfig cfg = build_config(o);
    Region region;
    if (cfg.region.spec) {
        region = generate_synthetic_region(*cfg.region.spec, substream_seed(cfg.seed, 1));
    } else {
        region = load_region_dir(cfg.region.load_dir);
    }
    std::vector<std::string> issues = validate_region(region);
    if (issues.empty()) {
        Population pop = generate_population(region, cfg.pop_params, substream_seed(cfg.seed, 2));
        assign_attachments(pop.individuals, region, substream_seed(cfg.seed, 3));
        build_agendas(pop.individuals, region, cfg.pop_params, substream_seed(cfg.seed, 4));
        auto pop_issues = validate_population(pop.individuals, pop.households, region);
        issues.insert(issues.end(), pop_issues.begin(), pop_issues.end());
    }
    if (issues.empty()) {
        std::cout << "valid: region and generated population satisfy all invariants\n";
        return 0;
    }
    std::cout << issues.size() << " violation(s):\n";
    for (const std::string& msg : issues) std::cout << "  " << msg << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"agent-based spatial epidemic simulator"};
    app.set_version_flag("--version", gwabm::kToolVersion);
    app.require_subcommand(1);

    CommonOpts gen_opts, sim_opts, exp_opts, val_opts;
    int gen_blocks = 4;
    bool gen_mini = false;
    std::string experiment_name;
    std::vector<std::string> custom_arms;

    CLI::App* gen = app.add_subcommand("gen-region", "Generate a synthetic region directory");
    add_common(gen, gen_opts, false);
    gen->add_option("--blocks", gen_blocks, "Administrative block count");
    gen->add_flag("--mini", gen_mini, "Use the bundled gwalior_mini spec (1000 pop, 40 buildings)");
    gen->add_option("--out", gen_opts.out_dir, "Output directory");

    CLI::App* sim = app.add_subcommand("simulate", "Run one seeded simulation");
    add_common(sim, sim_opts, false);
    bool dump_population = false;
    sim->add_flag("--dump-population", dump_population,
                  "Also write population.csv and agendas.csv");
    sim->add_option("--out", sim_opts.out_dir, "Output directory");

    CLI::App* exp = app.add_subcommand("experiment", "Run a multi-seed policy comparison");
    exp->add_option("name", experiment_name,
                    "three-measures | containments | realistic-actions | custom")
        ->required();
    add_common(exp, exp_opts, true);
    exp->add_option("--arm", custom_arms, "custom experiment arm LABEL=POLICY_FILE (repeatable)");
    exp->add_option("--out", exp_opts.out_dir, "Output directory");

    CLI::App* val = app.add_subcommand("validate", "Validate a region and generated population");
    add_common(val, val_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) return cmd_gen_region(gen_opts, gen_blocks, gen_mini);
        if (sim->parsed()) return cmd_simulate(sim_opts, dump_population);
        if (exp->parsed()) return cmd_experiment(experiment_name, exp_opts, custom_arms);
        if (val->parsed()) return cmd_validate(val_opts);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
