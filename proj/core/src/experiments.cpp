#include "gwabm/experiments.hpp"

#include <atomic>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "gwabm/errors.hpp"
#include "gwabm/svg_chart.hpp"

namespace gwabm {

namespace {

using nlohmann::json;

json policy_to_json(const Policy& p) {
    json j;
    j["kind"] = to_string(p.kind);
    j["testing"] = to_string(p.testing.kind);
    if (p.testing.kind == TestingKind::PartialTesting) {
        j["daily_tests"] = p.testing.daily_tests;
        if (p.testing.daily_tests_per_1000 >= 0) {
            j["daily_tests_per_1000"] = p.testing.daily_tests_per_1000;
        }
    }
    switch (p.kind) {
        case PolicyKind::RealisticLockdown:
            j["essential_fraction"] = p.essential_fraction;
            j["start_cycle"] = p.start_cycle;
            break;
        case PolicyKind::DynamicSpatialLockdown:
            j["death_threshold"] = p.death_threshold;
            j["lockdown_duration_hours"] = p.lockdown_duration_hours;
            j["review_interval_hours"] = p.review_interval_hours;
            break;
        case PolicyKind::LateLockdown:
            j["trigger_cycle"] = p.trigger_cycle;
            if (p.inner) j["inner"] = policy_to_json(*p.inner);
            break;
        case PolicyKind::ElderlyStayHome:
            j["elderly_age_threshold"] = p.elderly_age_threshold;
            break;
        default:
            break;
    }
    j["quarantine_duration_hours"] = p.quarantine_duration_hours;
    return j;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

std::string fmt1(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

} // namespace

void ExperimentSpec::validate() const {
    if (arms.size() < 2) throw SpecError("experiment needs at least 2 arms");
    for (std::size_t i = 0; i < arms.size(); ++i) {
        for (std::size_t j = i + 1; j < arms.size(); ++j) {
            if (arms[i].label == arms[j].label) {
                throw SpecError("duplicate arm label " + arms[i].label);
            }
        }
    }
    if (seeds.empty()) throw SpecError("experiment needs at least one seed");
    base.validate();
}

std::vector<std::uint64_t> default_seeds(int n) {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(n, 0)));
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    return seeds;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ExperimentSpec make_three_measures(const SimConfig& base) {
    ExperimentSpec spec;
    spec.name = "three_measures";
    spec.seeds = default_seeds();
    spec.base = base;
    Policy none;
    Policy school;
    school.kind = PolicyKind::SchoolClosure;
    Policy home;
    home.kind = PolicyKind::HomeContainment;
    spec.arms = {{"no_containment", none},
                 {"school_closure", school},
                 {"home_containment", home}};
    return spec;
}

ExperimentSpec make_containments(const SimConfig& base) {
    ExperimentSpec spec;
    spec.name = "containments";
    spec.seeds = default_seeds();
    spec.base = base;

    Policy none;

    Policy realistic;
    realistic.kind = PolicyKind::RealisticLockdown;
    realistic.essential_fraction = 0.10;
    realistic.start_cycle = 360; // day 15
    realistic.testing.kind = TestingKind::PartialTesting;
    realistic.testing.daily_tests = 20;

    Policy family;
    family.kind = PolicyKind::FamilyContainment;
    family.testing.kind = TestingKind::PartialTesting;
    family.testing.daily_tests = 20;

    Policy dynlock;
    dynlock.kind = PolicyKind::DynamicSpatialLockdown;
    dynlock.testing.kind = TestingKind::PartialTesting;
    dynlock.testing.daily_tests = 20;

    spec.arms = {{"no_containment", none},
                 {"realistic_lockdown", realistic},
                 {"family_containment", family},
                 {"dynamic_lockdown", dynlock}};
    return spec;
}

ExperimentSpec make_realistic_actions(const SimConfig& base) {
    ExperimentSpec spec;
    spec.name = "realistic_actions";
    spec.seeds = default_seeds();
    spec.base = base;

    Policy none;

    Policy late;
    late.kind = PolicyKind::LateLockdown;
    late.trigger_cycle = 720; // day 30
    auto inner = std::make_shared<Policy>();
    inner->kind = PolicyKind::HomeContainment;
    late.inner = inner;
    late.testing.kind = TestingKind::PartialTesting;
    late.testing.daily_tests = 20;

    Policy mass;
    mass.kind = PolicyKind::FamilyContainment;
    mass.testing.kind = TestingKind::MassTesting;

    Policy risky;
    risky.kind = PolicyKind::ElderlyStayHome;
    risky.elderly_age_threshold = 60;

    spec.arms = {{"no_policy", none},
                 {"limited_tests_late_lockdown", late},
                 {"mass_testing_household_quarantine", mass},
                 {"risky_stay_home", risky}};
    return spec;
}

ComparisonResult run_experiment(const ExperimentSpec& spec, int threads) {
    spec.validate();
    const std::size_t n_arms = spec.arms.size();
    const std::size_t n_seeds = spec.seeds.size();
    const std::size_t n_jobs = n_arms * n_seeds;

    ComparisonResult result;
    result.name = spec.name;
    result.seeds = spec.seeds;
    result.spec = spec;
    result.arms.resize(n_arms);
    for (std::size_t a = 0; a < n_arms; ++a) {
        result.arms[a].label = spec.arms[a].label;
        result.arms[a].runs.resize(n_seeds);
    }

    int n_threads = threads > 0 ? threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(n_jobs)));

    std::atomic<std::size_t> next_job{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t job = next_job.fetch_add(1);
            if (job >= n_jobs || failed.load()) return;
            std::size_t a = job / n_seeds;
            std::size_t s = job % n_seeds;
            try {
                SimConfig cfg = spec.base;
                cfg.seed = spec.seeds[s];
                cfg.policy = spec.arms[a].policy;
                ArmSeedRun& cell = result.arms[a].runs[s];
                cell.records = run(cfg);
                cell.summary = summarize(cell.records);
            } catch (const std::exception& e) {
                std::scoped_lock lk(error_mutex);
                failed = true;
                if (error_message.empty()) error_message = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed) throw Error("experiment run failed: " + error_message);

    // Element-wise medians and summary medians per arm.
    const std::size_t n_records = result.arms[0].runs[0].records.size();
    for (ArmResult& arm : result.arms) {
        arm.median_infected.resize(n_records);
        arm.median_cum_deaths.resize(n_records);
        std::vector<double> column(n_seeds);
        for (std::size_t c = 0; c < n_records; ++c) {
            for (std::size_t s = 0; s < n_seeds; ++s) {
                column[s] = arm.runs[s].records[c].infected();
            }
            arm.median_infected[c] = median_of(column);
            for (std::size_t s = 0; s < n_seeds; ++s) {
                column[s] = static_cast<double>(arm.runs[s].records[c].cumulative_deaths);
            }
            arm.median_cum_deaths[c] = median_of(column);
        }
        std::vector<double> v(n_seeds);
        for (std::size_t s = 0; s < n_seeds; ++s) v[s] = arm.runs[s].summary.peak_infected;
        arm.median_peak_infected = median_of(v);
        for (std::size_t s = 0; s < n_seeds; ++s) v[s] = static_cast<double>(arm.runs[s].summary.peak_cycle);
        arm.median_peak_cycle = median_of(v);
        for (std::size_t s = 0; s < n_seeds; ++s) v[s] = static_cast<double>(arm.runs[s].summary.total_deaths);
        arm.median_total_deaths = median_of(v);
        for (std::size_t s = 0; s < n_seeds; ++s) v[s] = arm.runs[s].summary.attack_rate;
        arm.median_attack_rate = median_of(v);
    }
    return result;
}

ComparisonResult experiment_three_measures(const SimConfig& base, int threads) {
    return run_experiment(make_three_measures(base), threads);
}
ComparisonResult experiment_containments(const SimConfig& base, int threads) {
    return run_experiment(make_containments(base), threads);
}
ComparisonResult experiment_realistic_actions(const SimConfig& base, int threads) {
    return run_experiment(make_realistic_actions(base), threads);
}

std::vector<std::string> write_outputs(const ComparisonResult& result,
                                       const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::vector<std::string> written;

    // Per-arm raw CSV: all seeds stacked, seed column first.
    for (const ArmResult& arm : result.arms) {
        std::string csv =
            "seed,cycle,S,L,PreSym,Asym,Sym,Hosp,ICU,R,D,new_inf,cum_deaths,tests_today,"
            "locked_blocks\n";
        for (std::size_t s = 0; s < result.seeds.size(); ++s) {
            for (const TimeSeriesRecord& r : arm.runs[s].records) {
                csv += std::to_string(result.seeds[s]) + ',' + std::to_string(r.cycle);
                for (std::int32_t c : r.state_counts) {
                    csv += ',';
                    csv += std::to_string(c);
                }
                csv += ',' + std::to_string(r.new_infections) + ',' +
                       std::to_string(r.cumulative_deaths) + ',' +
                       std::to_string(r.tests_today) + ',' + std::to_string(r.locked_blocks) +
                       '\n';
            }
        }
        std::string name = result.name + "_" + arm.label + ".csv";
        write_file(out_dir + "/" + name, csv);
        written.push_back(name);
    }

    // Merged comparison CSV over element-wise medians.
    {
        std::string csv = "cycle";
        for (const ArmResult& arm : result.arms) {
            csv += ',' + arm.label + "_infected," + arm.label + "_cum_deaths";
        }
        csv += '\n';
        std::size_t n_records = result.arms[0].median_infected.size();
        for (std::size_t c = 0; c < n_records; ++c) {
            csv += std::to_string(c);
            for (const ArmResult& arm : result.arms) {
                csv += ',' + fmt1(arm.median_infected[c]) + ',' + fmt1(arm.median_cum_deaths[c]);
            }
            csv += '\n';
        }
        std::string name = result.name + ".csv";
        write_file(out_dir + "/" + name, csv);
        written.push_back(name);
    }

    // One chart per metric.
    {
        std::vector<ChartSeries> infected, deaths;
        for (const ArmResult& arm : result.arms) {
            infected.push_back({arm.label, arm.median_infected});
            deaths.push_back({arm.label, arm.median_cum_deaths});
        }
        std::string name = result.name + "_infected.svg";
        write_file(out_dir + "/" + name,
                   render_line_chart(result.name + ": infected over time (median of " +
                                         std::to_string(result.seeds.size()) + " seeds)",
                                     "cycle (hours)", "infected individuals", infected));
        written.push_back(name);
        name = result.name + "_deaths.svg";
        write_file(out_dir + "/" + name,
                   render_line_chart(result.name + ": cumulative deaths (median of " +
                                         std::to_string(result.seeds.size()) + " seeds)",
                                     "cycle (hours)", "cumulative deaths", deaths));
        written.push_back(name);
    }

    // Run metadata for reproducibility.
    {
        json manifest;
        manifest["name"] = result.name;
        manifest["version"] = kToolVersion;
        manifest["seeds"] = result.seeds;
        manifest["cycles"] = result.spec.base.n_cycles;
        manifest["initial_infected"] = result.spec.base.initial_infected;
        if (result.spec.base.region.spec) {
            const RegionSpec& rs = *result.spec.base.region.spec;
            manifest["region"] = {{"total_population", rs.total_population},
                                  {"blocks", rs.n_blocks},
                                  {"buildings", rs.n_buildings},
                                  {"width_m", rs.width_m},
                                  {"height_m", rs.height_m},
                                  {"cell_size_m", rs.cell_size_m}};
        } else {
            manifest["region"] = {{"load_dir", result.spec.base.region.load_dir}};
        }
        manifest["epi_params"] = epi_params_to_kv(result.spec.base.epi);
        json arms = json::array();
        for (std::size_t a = 0; a < result.arms.size(); ++a) {
            json ja;
            ja["label"] = result.arms[a].label;
            ja["policy"] = policy_to_json(result.spec.arms[a].policy);
            ja["median_peak_infected"] = result.arms[a].median_peak_infected;
            ja["median_peak_cycle"] = result.arms[a].median_peak_cycle;
            ja["median_total_deaths"] = result.arms[a].median_total_deaths;
            ja["median_attack_rate"] = result.arms[a].median_attack_rate;
            arms.push_back(ja);
        }
        manifest["arms"] = arms;
        manifest["files"] = written;
        write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
        written.push_back("manifest.json");
    }
    return written;
}

} // namespace gwabm
