#include "gwabm/engine.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gwabm/errors.hpp"

namespace gwabm {

namespace {

// Substream ids; fixed forever, part of the determinism contract.
enum StreamId : std::uint64_t {
    kStreamRegion = 1,
    kStreamPopulation = 2,
    kStreamAttachments = 3,
    kStreamAgendas = 4,
    kStreamMasks = 5,
    kStreamMobility = 10,
    kStreamH2h = 11,
    kStreamEnv = 12,
    kStreamDisease = 13,
    kStreamTesting = 14,
    kStreamSeeding = 15,
};

std::int32_t nearest_hospital(const Region& region, Point2D from) {
    std::int32_t best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& b : region.buildings) {
        if (b.btype != BuildingType::Hospital) continue;
        double d = distance(from, b.centroid);
        if (d < best_d) {
            best_d = d;
            best = b.id;
        }
    }
    return best;
}

void check_invariants(const SimState& state, const TimeSeriesRecord& rec,
                      const TimeSeriesRecord* prev) {
    std::int64_t total = 0;
    for (std::int32_t c : rec.state_counts) total += c;
    if (total != static_cast<std::int64_t>(state.individuals.size())) {
        throw std::logic_error("conservation violated at cycle " + std::to_string(rec.cycle));
    }
    std::int64_t block_sum =
        std::accumulate(rec.per_block_cum_deaths.begin(), rec.per_block_cum_deaths.end(),
                        std::int64_t{0});
    if (block_sum != rec.cumulative_deaths) {
        throw std::logic_error("per-block deaths do not sum to global deaths at cycle " +
                               std::to_string(rec.cycle));
    }
    if (prev) {
        if (rec.cumulative_deaths < prev->cumulative_deaths) {
            throw std::logic_error("cumulative deaths decreased at cycle " +
                                   std::to_string(rec.cycle));
        }
        for (std::size_t b = 0; b < rec.per_block_cum_deaths.size(); ++b) {
            if (rec.per_block_cum_deaths[b] < prev->per_block_cum_deaths[b]) {
                throw std::logic_error("block deaths decreased at cycle " +
                                       std::to_string(rec.cycle));
            }
        }
    }
}

} // namespace

SimConfig SimConfig::desk_default() {
    SimConfig cfg;
    cfg.region.spec = RegionSpec::desk_default(1000);
    return cfg;
}

void SimConfig::validate() const {
    if (n_cycles < 1) throw SpecError("n_cycles must be >= 1");
    if (initial_infected < 0) throw SpecError("initial_infected must be >= 0");
    if (!region.spec && region.load_dir.empty()) {
        throw SpecError("config needs a region spec or a region directory");
    }
    epi.validate();
    pop_params.validate();
    policy.validate();
}

std::int32_t TimeSeriesRecord::infected() const {
    return state_counts[static_cast<int>(DiseaseState::Presymptomatic)] +
           state_counts[static_cast<int>(DiseaseState::Asymptomatic)] +
           state_counts[static_cast<int>(DiseaseState::Symptomatic)] +
           state_counts[static_cast<int>(DiseaseState::Hospitalized)] +
           state_counts[static_cast<int>(DiseaseState::ICU)];
}

SimState init_sim(const SimConfig& config) {
    config.validate();
    SimState state;

    if (config.region.spec) {
        state.region = generate_synthetic_region(*config.region.spec,
                                                 substream_seed(config.seed, kStreamRegion));
    } else {
        state.region = load_region_dir(config.region.load_dir);
        auto issues = validate_region(state.region);
        if (!issues.empty()) {
            throw SpecError("region " + config.region.load_dir + " invalid: " + issues.front());
        }
    }
    if (config.initial_infected > state.region.total_population) {
        throw SpecError("initial_infected exceeds the population");
    }

    Population pop = generate_population(state.region, config.pop_params,
                                         substream_seed(config.seed, kStreamPopulation));
    state.individuals = std::move(pop.individuals);
    state.households = std::move(pop.households);
    assign_attachments(state.individuals, state.region,
                       substream_seed(config.seed, kStreamAttachments));
    build_agendas(state.individuals, state.region, config.pop_params,
                  substream_seed(config.seed, kStreamAgendas));
    if (config.epi.mask_adherence > 0.0) {
        Rng mask_rng(substream_seed(config.seed, kStreamMasks));
        for (Individual& ind : state.individuals) {
            ind.masked = mask_rng.bernoulli(config.epi.mask_adherence);
        }
    }

    state.loads.assign(state.region.buildings.size(), 0.0);
    state.authority = AuthorityState::make(state.individuals.size(), state.region.blocks.size(),
                                           state.households.size());
    state.rng_mobility = Rng(substream_seed(config.seed, kStreamMobility));
    state.rng_h2h = Rng(substream_seed(config.seed, kStreamH2h));
    state.rng_env = Rng(substream_seed(config.seed, kStreamEnv));
    state.rng_disease = Rng(substream_seed(config.seed, kStreamDisease));
    state.rng_testing = Rng(substream_seed(config.seed, kStreamTesting));

    // Seed the outbreak: partial Fisher-Yates for a uniform sample without
    // replacement, then infect in ascending id order.
    const auto n = static_cast<std::int32_t>(state.individuals.size());
    Rng seed_rng(substream_seed(config.seed, kStreamSeeding));
    std::vector<std::int32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::vector<std::int32_t> chosen;
    for (std::int32_t i = 0; i < config.initial_infected; ++i) {
        std::int32_t j = i + static_cast<std::int32_t>(seed_rng.uniform_below(n - i));
        std::swap(ids[i], ids[j]);
        chosen.push_back(ids[i]);
    }
    std::sort(chosen.begin(), chosen.end());
    for (std::int32_t id : chosen) {
        begin_infection(state.individuals[id].course, state.individuals[id].age, 0, config.epi,
                        state.rng_disease);
    }
    state.ever_infected = config.initial_infected;
    state.new_infections_this_cycle = config.initial_infected;

    state.state_counts.fill(0);
    for (const Individual& ind : state.individuals) {
        state.state_counts[static_cast<int>(ind.course.state)] += 1;
    }
    state.location.assign(state.individuals.size(), -1);
    state.occupancy.assign(state.region.buildings.size(), {});
    return state;
}

TimeSeriesRecord record_of(const SimState& state) {
    TimeSeriesRecord rec;
    rec.cycle = state.cycle;
    rec.state_counts = state.state_counts;
    rec.new_infections = state.new_infections_this_cycle;
    rec.cumulative_deaths = state.cumulative_deaths;
    rec.per_block_cum_deaths = state.authority.per_block_cum_deaths;
    rec.tests_today = state.authority.tests_used_today;
    rec.locked_blocks = state.authority.locked_block_count(state.cycle);
    return rec;
}

void step(SimState& state, const SimConfig& config) {
    const Cycle cycle = state.cycle;
    const int hour = static_cast<int>(cycle % 24);
    const bool weekend = ((cycle / 24) % 7) >= 5;
    const EpiParams& epi = config.epi;

    // (1) Mobility. Ascending id order matters: the realistic-lockdown
    // shopping allowance is consumed first come, first served.
    for (Individual& ind : state.individuals) {
        if (ind.course.state == DiseaseState::Dead) {
            state.location[ind.id] = ind.home;
            continue;
        }
        const AgendaSlot& slot =
            weekend ? ind.agenda.weekend[hour] : ind.agenda.weekday[hour];
        state.location[ind.id] = allowed_destination(ind, slot, config.policy, state.authority,
                                                     cycle, state.region.buildings);
    }

    // (2)+(3) Transmission over the start-of-hour occupancy snapshot.
    for (auto& occupants : state.occupancy) occupants.clear();
    for (const Individual& ind : state.individuals) {
        if (ind.course.state == DiseaseState::Dead) continue;
        state.occupancy[state.location[ind.id]].push_back(
            {ind.id, ind.course.state, ind.masked});
    }
    state.event_buf.clear();
    step_environmental(state.loads, state.occupancy, epi, state.rng_env, state.event_buf);
    step_h2h(state.occupancy, epi, state.rng_h2h, state.event_buf);

    // Newly infected enter Latent at the next cycle boundary; duplicates
    // (env + h2h in the same hour) collapse to the first event.
    state.new_infections_this_cycle = 0;
    for (const InfectionEvent& ev : state.event_buf) {
        Individual& ind = state.individuals[ev.individual];
        if (ind.course.state != DiseaseState::Susceptible) continue;
        begin_infection(ind.course, ind.age, cycle + 1, epi, state.rng_disease);
        state.state_counts[static_cast<int>(DiseaseState::Susceptible)] -= 1;
        state.state_counts[static_cast<int>(DiseaseState::Latent)] += 1;
        state.ever_infected += 1;
        state.new_infections_this_cycle += 1;
    }

    // (4) Disease progression; deaths are attributed to the home block.
    for (Individual& ind : state.individuals) {
        if (ind.course.sched_cycle != cycle) continue;
        DiseaseState before = ind.course.state;
        auto entered = advance_disease(ind.course, ind.age, cycle, epi, state.rng_disease);
        if (!entered) continue;
        state.state_counts[static_cast<int>(before)] -= 1;
        state.state_counts[static_cast<int>(*entered)] += 1;
        switch (*entered) {
            case DiseaseState::Hospitalized:
                ind.hospital = nearest_hospital(state.region,
                                                state.region.buildings[ind.home].centroid);
                break;
            case DiseaseState::Dead:
                state.cumulative_deaths += 1;
                state.authority.per_block_cum_deaths[ind.home_block] += 1;
                ind.hospital = -1;
                break;
            case DiseaseState::Recovered:
                ind.hospital = -1;
                break;
            default:
                break;
        }
    }

    // (5) Daily hooks.
    if (hour == 0) {
        state.authority.reset_day();
        const Policy& eff = config.policy.effective(cycle);
        if (eff.kind == PolicyKind::DynamicSpatialLockdown &&
            cycle % eff.review_interval_hours == 0) {
            update_dynamic_lockdown(state.authority, eff, cycle);
        }
    }
    while (!state.authority.pending.empty() &&
           state.authority.pending.front().result_cycle <= cycle) {
        PendingTestResult r = state.authority.pending.front();
        state.authority.pending.pop_front();
        if (r.positive && !state.authority.known_positive[r.individual]) {
            apply_positive(r.individual, state.individuals, state.households, config.policy,
                           state.authority, cycle);
        }
    }
    if (hour == 8 && config.policy.testing.kind != TestingKind::NoTesting) {
        run_daily_tests(state.individuals, config.policy.testing, state.authority, epi,
                        state.rng_testing, cycle);
    }

    state.cycle += 1;
}

std::vector<TimeSeriesRecord> run(const SimConfig& config) {
    SimState state = init_sim(config);
    std::vector<TimeSeriesRecord> records;
    records.reserve(config.n_cycles + 1);
    records.push_back(record_of(state));
    if (config.assert_invariants) check_invariants(state, records.back(), nullptr);
    for (Cycle c = 0; c < config.n_cycles; ++c) {
        step(state, config);
        records.push_back(record_of(state));
        if (config.assert_invariants) {
            check_invariants(state, records.back(), &records[records.size() - 2]);
        }
    }
    return records;
}

SimSummary summarize(std::span<const TimeSeriesRecord> records) {
    SimSummary s;
    if (records.empty()) return s;
    s.peak_infected = records.front().infected();
    s.peak_cycle = records.front().cycle;
    for (const auto& rec : records) {
        std::int32_t inf = rec.infected();
        if (inf > s.peak_infected) { // ties keep the earliest cycle
            s.peak_infected = inf;
            s.peak_cycle = rec.cycle;
        }
    }
    s.total_deaths = records.back().cumulative_deaths;
    std::int64_t pop = 0;
    for (std::int32_t c : records.back().state_counts) pop += c;
    std::int64_t susceptible_last =
        records.back().state_counts[static_cast<int>(DiseaseState::Susceptible)];
    s.attack_rate = pop > 0 ? static_cast<double>(pop - susceptible_last) /
                                  static_cast<double>(pop)
                            : 0.0;
    return s;
}

std::string records_to_csv(std::span<const TimeSeriesRecord> records) {
    std::string out =
        "cycle,S,L,PreSym,Asym,Sym,Hosp,ICU,R,D,new_inf,cum_deaths,tests_today,locked_blocks\n";
    for (const auto& r : records) {
        out += std::to_string(r.cycle);
        for (std::int32_t c : r.state_counts) {
            out += ',';
            out += std::to_string(c);
        }
        out += ',' + std::to_string(r.new_infections) + ',' +
               std::to_string(r.cumulative_deaths) + ',' + std::to_string(r.tests_today) + ',' +
               std::to_string(r.locked_blocks) + '\n';
    }
    return out;
}

std::string per_block_deaths_csv(std::span<const TimeSeriesRecord> records) {
    std::string out = "cycle,block_id,cum_deaths\n";
    for (const auto& r : records) {
        for (std::size_t b = 0; b < r.per_block_cum_deaths.size(); ++b) {
            out += std::to_string(r.cycle) + ',' + std::to_string(b) + ',' +
                   std::to_string(r.per_block_cum_deaths[b]) + '\n';
        }
    }
    return out;
}

} // namespace gwabm
