#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gwabm/epi.hpp"
#include "gwabm/params.hpp"
#include "gwabm/region.hpp"
#include "gwabm/rng.hpp"

namespace gwabm {

enum class Sex : std::uint8_t { F, M };

enum class Employment : std::uint8_t {
    Student,
    Worker,
    EssentialWorker,
    Unemployed,
    Retired,
};

enum class ActivityKind : std::uint8_t {
    Home,
    Work,
    School,
    Shopping,
    Leisure,
    HospitalVisit,
};

const char* to_string(Sex s);
const char* to_string(Employment e);
const char* to_string(ActivityKind k);

/// Which building types may host a given activity.
bool activity_permits(ActivityKind kind, BuildingType type);

struct AgendaSlot {
    ActivityKind kind = ActivityKind::Home;
    std::int32_t building = -1;
};

/// Default hour-by-hour plan; one array for weekdays, one for weekends.
/// Hours 0-5 are Home for everyone (night block of the template model).
struct Agenda {
    std::array<AgendaSlot, 24> weekday{};
    std::array<AgendaSlot, 24> weekend{};
};

struct Individual {
    std::int32_t id = 0;
    std::uint8_t age = 0;
    Sex sex = Sex::F;
    Employment employment = Employment::Unemployed;
    std::int32_t household_id = -1;
    std::int32_t home = -1;       // Residential building id
    std::int32_t attachment = -1; // School for Students, Workplace for Workers
    std::int32_t home_block = -1; // cached block of the home building
    bool masked = false;
    Agenda agenda;

    // Mutable simulation state.
    DiseaseCourse course;
    Cycle home_quarantine_until = kNoCycle;
    std::int32_t hospital = -1; // assigned Hospital while Hospitalized/ICU
};

struct Household {
    std::int32_t id = 0;
    std::vector<std::int32_t> member_ids;
    std::int32_t home = -1;
};

struct Population {
    std::vector<Individual> individuals;
    std::vector<Household> households;
};

/// Draws exactly region.total_population individuals partitioned into
/// households; households are placed on residential buildings with
/// probability proportional to the population-grid mass at the building's
/// cell. Deterministic in (region, params, seed).
Population generate_population(const Region& region, const PopulationParams& params,
                               std::uint64_t seed);

/// Students: nearest School with probability 0.8, otherwise uniform among
/// Schools. Workers: Workplace sampled proportionally to capacity.
/// One pass over individuals in id order; deterministic in seed.
void assign_attachments(std::vector<Individual>& individuals, const Region& region,
                        std::uint64_t seed);

/// Template-plus-noise daily schedule for one individual. Exposed mostly
/// for tests; build_agendas applies it to the whole population in id order.
Agenda build_agenda(const Individual& ind, const Region& region, const PopulationParams& params,
                    Rng& rng);

void build_agendas(std::vector<Individual>& individuals, const Region& region,
                   const PopulationParams& params, std::uint64_t seed);

/// Invariant report (ages vs employment, home types, attachment types,
/// household consistency, agenda closure). Empty means valid.
std::vector<std::string> validate_population(std::span<const Individual> individuals,
                                             std::span<const Household> households,
                                             const Region& region);

/// CSV serializations used by the determinism tests and the CLI.
std::string population_to_csv(std::span<const Individual> individuals);
std::string agendas_to_csv(std::span<const Individual> individuals);

} // namespace gwabm
