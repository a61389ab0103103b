#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwabm/engine.hpp"

namespace gwabm {

inline constexpr const char* kToolVersion = "0.1.0";

struct Arm {
    std::string label;
    Policy policy;
};

/// A multi-seed policy comparison: every arm shares the region spec,
/// population parameters, epi parameters and seed list, so arms differ
/// only through policy effects (common random numbers).
struct ExperimentSpec {
    std::string name;
    std::vector<Arm> arms;
    std::vector<std::uint64_t> seeds;
    SimConfig base;

    void validate() const;
};

struct ArmSeedRun {
    std::vector<TimeSeriesRecord> records;
    SimSummary summary;
};

struct ArmResult {
    std::string label;
    std::vector<ArmSeedRun> runs; // indexed like ExperimentSpec::seeds
    std::vector<double> median_infected;   // element-wise across seeds
    std::vector<double> median_cum_deaths; // element-wise across seeds
    double median_peak_infected = 0.0;
    double median_peak_cycle = 0.0;
    double median_total_deaths = 0.0;
    double median_attack_rate = 0.0;
};

struct ComparisonResult {
    std::string name;
    std::vector<std::uint64_t> seeds;
    ExperimentSpec spec;
    std::vector<ArmResult> arms;
};

std::vector<std::uint64_t> default_seeds(int n = 10);

/// Median as the average of the two middle order statistics.
double median_of(std::vector<double> values);

ExperimentSpec make_three_measures(const SimConfig& base);
ExperimentSpec make_containments(const SimConfig& base);
ExperimentSpec make_realistic_actions(const SimConfig& base);

/// Runs every (arm, seed) cell in a work pool; the result is independent of
/// the thread count. threads <= 0 picks the hardware concurrency.
ComparisonResult run_experiment(const ExperimentSpec& spec, int threads = 0);

ComparisonResult experiment_three_measures(const SimConfig& base, int threads = 0);
ComparisonResult experiment_containments(const SimConfig& base, int threads = 0);
ComparisonResult experiment_realistic_actions(const SimConfig& base, int threads = 0);

/// Emits per-arm raw CSVs, the merged median comparison CSV, one SVG chart
/// per metric, and manifest.json with the full run configuration.
/// Returns the list of file names written (relative to out_dir).
std::vector<std::string> write_outputs(const ComparisonResult& result,
                                       const std::string& out_dir);

} // namespace gwabm
