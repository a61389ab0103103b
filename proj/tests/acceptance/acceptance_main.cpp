// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria. argv[1] must be the path to the gwabm CLI binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gwabm/experiments.hpp"

using namespace gwabm;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("criterion %2d [%s] %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<missing:" + path + ">";
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1
void criterion_determinism(const std::string& cli) {
    auto t0 = std::chrono::steady_clock::now();
    fs::path tmp = fs::temp_directory_path() / "gwabm_acc_det";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    bool ok = true;
    std::string detail;
    auto run_cli = [&](const std::string& args) {
        std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        int rc = std::system(cmd.c_str());
        if (rc != 0) {
            ok = false;
            detail += " [exit " + std::to_string(rc) + ": " + args + "]";
        }
    };

    run_cli("simulate --seed 7 --out " + (tmp / "sim_a").string());
    run_cli("simulate --seed 7 --out " + (tmp / "sim_b").string());
    if (slurp((tmp / "sim_a/timeseries.csv").string()) !=
        slurp((tmp / "sim_b/timeseries.csv").string())) {
        ok = false;
        detail += " [simulate CSVs differ]";
    }
    if (slurp((tmp / "sim_a/block_deaths.csv").string()) !=
        slurp((tmp / "sim_b/block_deaths.csv").string())) {
        ok = false;
        detail += " [block-death CSVs differ]";
    }

    // Each experiment subcommand, twice, at reduced scale to fit the budget.
    const char* names[3] = {"three-measures", "containments", "realistic-actions"};
    const char* merged[3] = {"three_measures.csv", "containments.csv", "realistic_actions.csv"};
    for (int e = 0; e < 3; ++e) {
        std::string scale = " --seeds 3 --cycles 600 --pop 300 ";
        std::string dir_a = (tmp / (std::string("exp_a_") + names[e])).string();
        std::string dir_b = (tmp / (std::string("exp_b_") + names[e])).string();
        run_cli(std::string("experiment ") + names[e] + scale + "--out " + dir_a);
        run_cli(std::string("experiment ") + names[e] + scale + "--out " + dir_b);
        if (slurp(dir_a + "/" + merged[e]) != slurp(dir_b + "/" + merged[e])) {
            ok = false;
            detail += std::string(" [") + names[e] + " merged CSVs differ]";
        }
        if (slurp(dir_a + "/manifest.json") != slurp(dir_b + "/manifest.json")) {
            ok = false;
            detail += std::string(" [") + names[e] + " manifests differ]";
        }
    }
    double dt = elapsed_s(t0);
    if (dt >= 120.0) {
        ok = false;
        detail += " [runtime " + std::to_string(dt) + "s >= 120s]";
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "determinism: repeated simulate and experiment runs byte-identical (%.1fs)",
                  dt);
    report(1, ok, buf + detail);
}

// ------------------------------------------------------- criteria 2,5,7,9 data
struct ExperimentRuns {
    ComparisonResult containments;
    ComparisonResult realistic;
    ComparisonResult three;
    double containments_seconds = 0.0;
    bool invariant_failure = false;
    std::string invariant_detail;
};

ExperimentRuns run_desk_experiments() {
    ExperimentRuns out;
    SimConfig base = SimConfig::desk_default();
    base.n_cycles = 5500;
    base.assert_invariants = true; // run() throws on any per-cycle violation
    try {
        auto t0 = std::chrono::steady_clock::now();
        out.containments = experiment_containments(base);
        out.containments_seconds = elapsed_s(t0);
        out.realistic = experiment_realistic_actions(base);
        out.three = experiment_three_measures(base);
    } catch (const std::exception& e) {
        out.invariant_failure = true;
        out.invariant_detail = e.what();
    }
    return out;
}

void criterion_conservation(const ExperimentRuns& runs) {
    // The engine already enforced per-cycle invariants during every run
    // above (assert_invariants). Re-verify one full desk run record by
    // record here, independently of the engine's internal counters.
    bool ok = !runs.invariant_failure;
    std::string detail = runs.invariant_failure ? " [" + runs.invariant_detail + "]" : "";

    SimConfig cfg = SimConfig::desk_default();
    cfg.n_cycles = 5500;
    cfg.seed = 7;
    auto records = run(cfg);
    std::int64_t prev = 0;
    std::vector<std::int64_t> prev_blocks;
    for (const auto& rec : records) {
        std::int64_t total =
            std::accumulate(rec.state_counts.begin(), rec.state_counts.end(), std::int64_t{0});
        if (total != 1000) {
            ok = false;
            detail += " [conservation broken at cycle " + std::to_string(rec.cycle) + "]";
            break;
        }
        if (rec.cumulative_deaths < prev) {
            ok = false;
            detail += " [deaths decreased at cycle " + std::to_string(rec.cycle) + "]";
            break;
        }
        std::int64_t block_sum = std::accumulate(rec.per_block_cum_deaths.begin(),
                                                 rec.per_block_cum_deaths.end(), std::int64_t{0});
        if (block_sum != rec.cumulative_deaths) {
            ok = false;
            detail += " [block deaths mismatch at cycle " + std::to_string(rec.cycle) + "]";
            break;
        }
        if (!prev_blocks.empty()) {
            for (std::size_t b = 0; b < prev_blocks.size(); ++b) {
                if (rec.per_block_cum_deaths[b] < prev_blocks[b]) {
                    ok = false;
                    detail += " [block " + std::to_string(b) + " deaths decreased]";
                }
            }
        }
        prev = rec.cumulative_deaths;
        prev_blocks = rec.per_block_cum_deaths;
    }
    report(2, ok,
           "conservation & monotonicity: every cycle of every acceptance run (exact)" + detail);
}

// ---------------------------------------------------------------- criterion 3
void criterion_transmission_oracle() {
    EpiParams p;
    p.beta_h = 0.05;
    bool ok = true;
    std::string detail;

    double analytic3 = h2h_infection_probability(3.0, false, p);
    if (std::abs(analytic3 - 0.142625) > 1e-9) {
        ok = false;
        detail += " [closed form " + std::to_string(analytic3) + " != 0.142625]";
    }

    const int trials = 10000;
    Rng rng(20240601);
    for (int k : {1, 2, 5}) {
        int infected = 0;
        for (int t = 0; t < trials; ++t) {
            bool any = false;
            for (int c = 0; c < k; ++c) {
                if (rng.uniform01() < p.beta_h) any = true;
            }
            infected += any;
        }
        double want = h2h_infection_probability(static_cast<double>(k), false, p);
        double got = static_cast<double>(infected) / trials;
        double sigma = std::sqrt(want * (1.0 - want) / trials);
        if (std::abs(got - want) > 3.0 * sigma) {
            ok = false;
            detail += " [k=" + std::to_string(k) + " off by " + std::to_string(got - want) + "]";
        }
    }
    report(3, ok,
           "transmission oracle: brute-force Bernoulli within 3 sigma for k in {1,2,5}; "
           "0.142625 exact" +
               detail);
}

// ---------------------------------------------------------------- criterion 4
void criterion_null_model() {
    SimConfig cfg = SimConfig::desk_default();
    cfg.n_cycles = 2500;
    cfg.seed = 4;
    cfg.epi.beta_h = 0.0;
    cfg.epi.env_beta = 0.0;
    cfg.initial_infected = 5;
    auto records = run(cfg);
    const auto& last = records.back();
    std::int64_t ever =
        1000 - last.state_counts[static_cast<int>(DiseaseState::Susceptible)];
    bool ok = ever == 5 && last.cumulative_deaths <= 5;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "null model: zero betas, 5 seeded => ever-infected exactly 5 (got %lld), "
                  "deaths %lld from severity branching only",
                  static_cast<long long>(ever),
                  static_cast<long long>(last.cumulative_deaths));
    report(4, ok, buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion_containments_ordering(const ExperimentRuns& runs) {
    if (runs.invariant_failure) {
        report(5, false, "containments ordering: experiment failed to run");
        return;
    }
    const ComparisonResult& r = runs.containments;
    int pass_seeds = 0;
    for (std::size_t s = 0; s < r.seeds.size(); ++s) {
        const auto& nc = r.arms[0].runs[s].summary;
        bool ok = true;
        for (std::size_t a = 1; a < r.arms.size(); ++a) {
            const auto& m = r.arms[a].runs[s].summary;
            if (!(nc.peak_cycle < m.peak_cycle && nc.peak_infected > m.peak_infected)) ok = false;
        }
        pass_seeds += ok;
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "containments ordering: no_containment peak strictly earliest & largest in "
                  "%d/10 seeds (need >= 8)",
                  pass_seeds);
    report(5, pass_seeds >= 8, buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion_realistic_ordering(const ExperimentRuns& runs) {
    if (runs.invariant_failure) {
        report(6, false, "realistic actions ordering: experiment failed to run");
        return;
    }
    const ComparisonResult& r = runs.realistic;
    // arms: 0 no_policy, 1 limited_tests_late_lockdown, 2 mass_testing..., 3 risky_stay_home
    int lowest_seeds = 0;
    for (std::size_t s = 0; s < r.seeds.size(); ++s) {
        std::int64_t mt = r.arms[2].runs[s].summary.total_deaths;
        bool lowest = true;
        for (std::size_t a = 0; a < r.arms.size(); ++a) {
            if (a != 2 && r.arms[a].runs[s].summary.total_deaths <= mt) lowest = false;
        }
        lowest_seeds += lowest;
    }
    bool median_lowest = true;
    for (std::size_t a = 0; a < r.arms.size(); ++a) {
        if (a != 2 && r.arms[a].median_total_deaths <= r.arms[2].median_total_deaths) {
            median_lowest = false;
        }
    }
    double np = r.arms[0].median_total_deaths;
    double ll = r.arms[1].median_total_deaths;
    // The 25% band is a desk-scale tolerance, not a measured quantity.
    double band = np > 0 ? std::abs(np - ll) / np : 1.0;
    bool ok = lowest_seeds >= 8 && median_lowest && band < 0.25;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "realistic actions: mass-testing+household-quarantine lowest deaths in %d/10 "
                  "seeds and by median (%s); |no_policy - late_lockdown| = %.1f%% of no_policy "
                  "(< 25%%, desk-scale tolerance)",
                  lowest_seeds, median_lowest ? "yes" : "no", 100.0 * band);
    report(6, ok, buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion_three_measures(const ExperimentRuns& runs) {
    if (runs.invariant_failure) {
        report(7, false, "three measures: experiment failed to run");
        return;
    }
    const ComparisonResult& r = runs.three;
    fs::path out = fs::temp_directory_path() / "gwabm_acc_three";
    fs::remove_all(out);
    bool ok = true;
    std::string detail;
    try {
        auto files = write_outputs(r, out.string());
        if (files.size() < 6) {
            ok = false;
            detail = " [missing outputs]";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string(" [") + e.what() + "]";
    }
    // Peak-height similarity is reported, not asserted: it depends on
    // parameters the source material does not pin down.
    double low = 1e300, high = 0.0;
    for (const auto& arm : r.arms) {
        low = std::min(low, arm.median_peak_infected);
        high = std::max(high, arm.median_peak_infected);
    }
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "three measures: completed and emitted comparison; peak-height ratio "
                  "max/min = %.2f (reported, not asserted)",
                  low > 0 ? high / low : 0.0);
    report(7, ok, buf + detail);
}

// ---------------------------------------------------------------- criterion 8
void criterion_confinement() {
    bool ok = true;
    std::string detail;

    // Confinement is judged against the state mobility saw at the start of
    // each step; quarantines and locks issued later in the same hour bind
    // from the next hour.

    // Forced positives: mass testing + family containment, 200 agents, 500 cycles.
    {
        SimConfig cfg;
        RegionSpec spec = RegionSpec::gwalior_mini();
        spec.total_population = 200;
        cfg.region.spec = spec;
        cfg.n_cycles = 500;
        cfg.seed = 9;
        cfg.policy.kind = PolicyKind::FamilyContainment;
        cfg.policy.testing.kind = TestingKind::MassTesting;
        SimState state = init_sim(cfg);
        int quarantined_agent_cycles = 0;
        for (Cycle c = 0; c < cfg.n_cycles; ++c) {
            std::vector<bool> confined(state.individuals.size());
            for (const auto& ind : state.individuals) {
                bool mobile = ind.course.state != DiseaseState::Dead &&
                              ind.course.state != DiseaseState::Hospitalized &&
                              ind.course.state != DiseaseState::ICU;
                confined[ind.id] = mobile && ind.home_quarantine_until != kNoCycle &&
                                   c < ind.home_quarantine_until;
            }
            step(state, cfg);
            for (const auto& ind : state.individuals) {
                if (confined[ind.id]) {
                    ++quarantined_agent_cycles;
                    if (state.location[ind.id] != ind.home) {
                        ok = false;
                        detail += " [quarantine breach at cycle " + std::to_string(c) + "]";
                    }
                }
            }
        }
        if (quarantined_agent_cycles == 0) {
            ok = false;
            detail += " [no quarantine was ever active]";
        }
    }

    // Block lockdown confinement under a low-threshold dynamic lockdown.
    {
        SimConfig cfg;
        RegionSpec spec = RegionSpec::gwalior_mini();
        spec.total_population = 200;
        cfg.region.spec = spec;
        cfg.n_cycles = 500;
        cfg.seed = 13;
        cfg.policy.kind = PolicyKind::DynamicSpatialLockdown;
        cfg.policy.death_threshold = 1;
        SimState state = init_sim(cfg);
        int locked_agent_cycles = 0;
        for (Cycle c = 0; c < cfg.n_cycles; ++c) {
            std::vector<bool> block_locked(state.region.blocks.size());
            for (std::size_t b = 0; b < block_locked.size(); ++b) {
                block_locked[b] =
                    state.authority.block_locked(static_cast<std::int32_t>(b), c);
            }
            std::vector<bool> mobile(state.individuals.size());
            for (const auto& ind : state.individuals) {
                mobile[ind.id] = ind.course.state != DiseaseState::Dead &&
                                 ind.course.state != DiseaseState::Hospitalized &&
                                 ind.course.state != DiseaseState::ICU &&
                                 !(ind.home_quarantine_until != kNoCycle &&
                                   c < ind.home_quarantine_until);
            }
            step(state, cfg);
            for (const auto& ind : state.individuals) {
                if (!mobile[ind.id]) continue;
                std::int32_t loc = state.location[ind.id];
                if (block_locked[ind.home_block]) {
                    ++locked_agent_cycles;
                    if (loc != ind.home) {
                        ok = false;
                        detail +=
                            " [resident left locked block at cycle " + std::to_string(c) + "]";
                    }
                } else if (block_locked[state.region.buildings[loc].block_id]) {
                    ok = false;
                    detail +=
                        " [outsider entered locked block at cycle " + std::to_string(c) + "]";
                }
            }
        }
        if (locked_agent_cycles == 0) {
            ok = false;
            detail += " [no block lock was ever active]";
        }
    }
    report(8, ok,
           "policy confinement: quarantine and block-lockdown location traces exact on "
           "200-agent/500-cycle forced runs" +
               detail);
}

// ---------------------------------------------------------------- criterion 9
void criterion_performance(const ExperimentRuns& runs) {
    SimConfig cfg = SimConfig::desk_default();
    cfg.n_cycles = 5500;
    cfg.seed = 1;
    auto t0 = std::chrono::steady_clock::now();
    auto records = run(cfg); // single-threaded by construction
    double single = elapsed_s(t0);
    bool ok = single < 60.0 && runs.containments_seconds < 600.0 && records.size() == 5501;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "performance: desk run %.2fs (< 60s single-threaded); containments "
                  "experiment %.1fs (< 600s)",
                  single, runs.containments_seconds);
    report(9, ok, buf);
}

// --------------------------------------------------------------- criterion 10
bool reference_contains(Point2D p, const Ring& ring) {
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        if (point_segment_dist2(p, ring[j], ring[i]) <= 1e-18) return true;
    }
    double total = 0.0;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        double ax = ring[j].x - p.x, ay = ring[j].y - p.y;
        double bx = ring[i].x - p.x, by = ring[i].y - p.y;
        total += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    }
    return std::abs(total) > M_PI;
}

void criterion_geometry_oracle() {
    bool ok = true;
    std::string detail;
    std::vector<Region> fixtures;
    fixtures.push_back(load_region_dir(std::string(GWABM_FIXTURE_DIR) + "/gwalior_mini"));
    fixtures.push_back(generate_synthetic_region(RegionSpec::desk_default(1000), 77));
    int checked = 0;
    for (std::size_t f = 0; f < fixtures.size(); ++f) {
        const Region& region = fixtures[f];
        Rng rng(1000 + f);
        for (int i = 0; i < 1000; ++i) {
            Point2D p{rng.uniform(-200.0, 3500.0), rng.uniform(-200.0, 3500.0)};
            auto got = locate_block(p, region.blocks);
            std::optional<std::int32_t> want;
            for (const AdminBlock& b : region.blocks) {
                if (reference_contains(p, b.polygon)) {
                    if (!want || b.id < *want) want = b.id;
                }
            }
            if (got != want) {
                ok = false;
                detail += " [mismatch at (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                          ") fixture " + std::to_string(f) + "]";
            }
            ++checked;
        }
    }
    report(10, ok,
           "geometry oracle: locate_block matches the brute-force reference on " +
               std::to_string(checked) + " random points (exact)" + detail);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-gwabm-cli>\n", argv[0]);
        return 64;
    }
    std::string cli = argv[1];
    std::printf("acceptance suite (desk scale: population 1000, 4 blocks, 5500 cycles, "
                "seeds 0-9)\n");

    criterion_determinism(cli);
    ExperimentRuns runs = run_desk_experiments();
    criterion_conservation(runs);
    criterion_transmission_oracle();
    criterion_null_model();
    criterion_containments_ordering(runs);
    criterion_realistic_ordering(runs);
    criterion_three_measures(runs);
    criterion_confinement();
    criterion_performance(runs);
    criterion_geometry_oracle();

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
