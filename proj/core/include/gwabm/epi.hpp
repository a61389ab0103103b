#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwabm/params.hpp"
#include "gwabm/rng.hpp"

namespace gwabm {

using Cycle = std::int64_t;
inline constexpr Cycle kNoCycle = -1;

enum class DiseaseState : std::uint8_t {
    Susceptible,
    Latent,
    Presymptomatic,
    Asymptomatic,
    Symptomatic,
    Hospitalized,
    ICU,
    Recovered,
    Dead,
};
inline constexpr int kDiseaseStateCount = 9;

const char* to_string(DiseaseState s);

/// Latent agents are not yet infectious; Recovered and Dead are absorbing.
bool is_infectious(DiseaseState s);
bool is_absorbing(DiseaseState s);
bool transition_legal(DiseaseState from, DiseaseState to);

/// Per-agent disease trajectory: current state, entry cycle, and the
/// transition sampled on entry.
struct DiseaseCourse {
    DiseaseState state = DiseaseState::Susceptible;
    Cycle since = 0;
    DiseaseState sched_target = DiseaseState::Susceptible;
    Cycle sched_cycle = kNoCycle;
};

/// One agent inside one building for one hour.
struct Occupant {
    std::int32_t id = 0;
    DiseaseState state = DiseaseState::Susceptible;
    bool masked = false;
};

/// Occupant lists indexed by building id; occupants appear in ascending
/// agent-id order within each building.
using Occupancy = std::vector<std::vector<Occupant>>;

struct InfectionEvent {
    std::int32_t individual = 0;
    std::int32_t building = 0;
    bool environmental = false;
};

/// Mask- and asymptomatic-weighted count of infectious occupants:
/// sum over infectious of w(state) * m(masked).
double effective_infectious_count(std::span<const Occupant> occupants, const EpiParams& params);

/// p = 1 - (1 - beta_h * m_s)^k_eff, clamped to [0,1]. Fractional k_eff
/// exponentiates the survival term.
double h2h_infection_probability(double k_eff, bool susceptible_masked, const EpiParams& params);

/// p = 1 - exp(-env_beta * load).
double environmental_infection_probability(double load, const EpiParams& params);

/// Per building, in building-id order: decay the load, deposit from
/// infectious occupants, then challenge every susceptible occupant in
/// occupant order (one rng draw each, even when the probability is zero,
/// so streams stay aligned across policies).
void step_environmental(std::vector<double>& loads, const Occupancy& occupancy,
                        const EpiParams& params, Rng& rng, std::vector<InfectionEvent>& out);

/// Person-to-person step over the same occupancy snapshot; k_eff is
/// computed once per building. Draw discipline matches step_environmental.
void step_h2h(const Occupancy& occupancy, const EpiParams& params, Rng& rng,
              std::vector<InfectionEvent>& out);

/// Puts a susceptible course into Latent as of entry_cycle and samples the
/// branch (Asymptomatic with p_asym(age), else Presymptomatic) plus duration.
void begin_infection(DiseaseCourse& course, int age, Cycle entry_cycle, const EpiParams& params,
                     Rng& rng);

/// Applies the scheduled transition when cycle matches, sampling the next
/// leg on entry. Returns the state entered, if any. Throws std::logic_error
/// on an illegal transition (engine bug, not an input error).
std::optional<DiseaseState> advance_disease(DiseaseCourse& course, int age, Cycle cycle,
                                            const EpiParams& params, Rng& rng);

} // namespace gwabm
