#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwabm/policy.hpp"
#include "gwabm/region.hpp"
#include "gwabm/synthpop.hpp"

namespace gwabm {

/// Where the spatial substrate comes from: a generator spec (default) or a
/// directory previously written by save_region_dir / the gen-region command.
struct RegionSource {
    std::optional<RegionSpec> spec;
    std::string load_dir;
};

struct SimConfig {
    std::uint64_t seed = 0;
    Cycle n_cycles = 5500;
    std::int32_t initial_infected = 5;
    RegionSource region;
    PopulationParams pop_params;
    EpiParams epi;
    Policy policy;
    bool assert_invariants = false;

    static SimConfig desk_default();
    void validate() const;
};

/// One output row per cycle. Cumulative fields never decrease.
struct TimeSeriesRecord {
    Cycle cycle = 0;
    std::array<std::int32_t, kDiseaseStateCount> state_counts{};
    std::int32_t new_infections = 0;
    std::int64_t cumulative_deaths = 0;
    std::vector<std::int64_t> per_block_cum_deaths;
    std::int32_t tests_today = 0;
    std::int32_t locked_blocks = 0;

    std::int32_t infected() const; // PreSym + Asym + Sym + Hosp + ICU
};

/// Full mutable state of one run. Substream ids are fixed at init so that a
/// policy change cannot perturb another subsystem's draws.
struct SimState {
    Cycle cycle = 0;
    Region region;
    std::vector<Individual> individuals;
    std::vector<Household> households;
    std::vector<double> loads; // viral load per building, zero at cycle 0
    AuthorityState authority;

    Rng rng_mobility, rng_h2h, rng_env, rng_disease, rng_testing;

    std::int64_t cumulative_deaths = 0;
    std::int64_t ever_infected = 0;
    std::int32_t new_infections_this_cycle = 0;
    std::array<std::int32_t, kDiseaseStateCount> state_counts{};

    // Scratch reused across steps.
    std::vector<std::int32_t> location; // per agent, building id
    Occupancy occupancy;
    std::vector<InfectionEvent> event_buf;
};

SimState init_sim(const SimConfig& config);

TimeSeriesRecord record_of(const SimState& state);

/// One simulated hour: mobility, environmental step, person-to-person step,
/// infection application, disease progression, daily hooks, cycle++.
void step(SimState& state, const SimConfig& config);

/// n_cycles steps; returns n_cycles + 1 records (cycle 0 included).
std::vector<TimeSeriesRecord> run(const SimConfig& config);

struct SimSummary {
    std::int32_t peak_infected = 0;
    Cycle peak_cycle = 0;
    std::int64_t total_deaths = 0;
    double attack_rate = 0.0;
};

SimSummary summarize(std::span<const TimeSeriesRecord> records);

/// The bit-exact determinism artifact:
/// cycle,S,L,PreSym,Asym,Sym,Hosp,ICU,R,D,new_inf,cum_deaths,tests_today,locked_blocks
std::string records_to_csv(std::span<const TimeSeriesRecord> records);

/// cycle,block_id,cum_deaths - one row per (cycle, block).
std::string per_block_deaths_csv(std::span<const TimeSeriesRecord> records);

} // namespace gwabm
