#include "gwabm/synthpop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gwabm/errors.hpp"

namespace gwabm {

namespace {

std::pair<int, int> band_age_range(int band) {
    switch (band) {
        case 0: return {0, 17};
        case 1: return {18, 59};
        default: return {60, 99};
    }
}

// Weighted pick over cumulative weights; single uniform01 draw.
int pick_weighted(std::span<const double> weights, Rng& rng) {
    double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

Employment draw_employment(int age, const PopulationParams& p, Rng& rng) {
    if (age < 3) return Employment::Unemployed;
    if (age <= 17) return Employment::Student;
    if (age <= 22 && rng.uniform01() < p.student_rate_18_22) return Employment::Student;
    if (age <= 59) {
        return rng.uniform01() < p.employment_rate_18_59 ? Employment::Worker
                                                         : Employment::Unemployed;
    }
    if (age <= 65) {
        return rng.uniform01() < p.employment_rate_60_65 ? Employment::Worker
                                                         : Employment::Retired;
    }
    return Employment::Retired;
}

std::int32_t nearest_of(std::span<const std::int32_t> candidates, Point2D from,
                        const Region& region) {
    std::int32_t best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int32_t id : candidates) {
        double d = distance(from, region.buildings[id].centroid);
        if (d < best_d) {
            best_d = d;
            best = id;
        }
    }
    return best;
}

} // namespace

const char* to_string(Sex s) {
    return s == Sex::F ? "F" : "M";
}

const char* to_string(Employment e) {
    switch (e) {
        case Employment::Student: return "Student";
        case Employment::Worker: return "Worker";
        case Employment::EssentialWorker: return "EssentialWorker";
        case Employment::Unemployed: return "Unemployed";
        case Employment::Retired: return "Retired";
    }
    return "?";
}

const char* to_string(ActivityKind k) {
    switch (k) {
        case ActivityKind::Home: return "Home";
        case ActivityKind::Work: return "Work";
        case ActivityKind::School: return "School";
        case ActivityKind::Shopping: return "Shopping";
        case ActivityKind::Leisure: return "Leisure";
        case ActivityKind::HospitalVisit: return "HospitalVisit";
    }
    return "?";
}

bool activity_permits(ActivityKind kind, BuildingType type) {
    switch (kind) {
        case ActivityKind::Home: return type == BuildingType::Residential;
        case ActivityKind::Work:
            return type == BuildingType::Workplace || type == BuildingType::Shop ||
                   type == BuildingType::Hospital;
        case ActivityKind::School: return type == BuildingType::School;
        case ActivityKind::Shopping: return type == BuildingType::Shop;
        case ActivityKind::Leisure:
            return type == BuildingType::Leisure || type == BuildingType::Outdoor;
        case ActivityKind::HospitalVisit: return type == BuildingType::Hospital;
    }
    return false;
}

Population generate_population(const Region& region, const PopulationParams& params,
                               std::uint64_t seed) {
    params.validate();
    const std::int64_t pop = region.total_population;

    // Residential placement weights from grid mass at each centroid cell.
    std::vector<std::int32_t> residential = region.buildings_of_type(BuildingType::Residential);
    if (residential.empty()) throw InfeasibleParamsError("region has no residential buildings");
    std::vector<double> weight(residential.size(), 0.0);
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < residential.size(); ++i) {
        const auto& b = region.buildings[residential[i]];
        if (auto cell = region.grid.cell_index(b.centroid)) {
            weight[i] = static_cast<double>(region.grid.counts[*cell]);
        }
        weight_sum += weight[i];
    }
    if (weight_sum <= 0.0) {
        throw InfeasibleParamsError("zero residential capacity mass in the population grid");
    }

    Rng rng(seed);
    Population out;
    out.individuals.resize(pop);

    // Pass 1: demographics in id order.
    for (std::int64_t i = 0; i < pop; ++i) {
        Individual& ind = out.individuals[i];
        ind.id = static_cast<std::int32_t>(i);
        int band = pick_weighted(params.age_band_weights, rng);
        auto [lo, hi] = band_age_range(band);
        ind.age = static_cast<std::uint8_t>(rng.uniform_int(lo, hi));
        ind.sex = rng.uniform01() < 0.5 ? Sex::F : Sex::M;
        ind.employment = draw_employment(ind.age, params, rng);
        if (ind.employment == Employment::Worker &&
            rng.uniform01() < params.essential_worker_fraction) {
            ind.employment = Employment::EssentialWorker;
        }
    }

    // Pass 2: households over consecutive id ranges; home drawn by grid mass.
    std::int64_t next = 0;
    while (next < pop) {
        Household h;
        h.id = static_cast<std::int32_t>(out.households.size());
        std::int64_t size = pick_weighted(params.household_size_pmf, rng) + 1;
        size = std::min(size, pop - next);
        double target = rng.uniform01() * weight_sum;
        double acc = 0.0;
        std::size_t chosen = residential.size() - 1;
        for (std::size_t i = 0; i < residential.size(); ++i) {
            acc += weight[i];
            if (target < acc) {
                chosen = i;
                break;
            }
        }
        h.home = residential[chosen];
        for (std::int64_t k = 0; k < size; ++k, ++next) {
            Individual& ind = out.individuals[next];
            ind.household_id = h.id;
            ind.home = h.home;
            ind.home_block = region.buildings[h.home].block_id;
            h.member_ids.push_back(ind.id);
        }
        out.households.push_back(std::move(h));
    }
    return out;
}

void assign_attachments(std::vector<Individual>& individuals, const Region& region,
                        std::uint64_t seed) {
    std::vector<std::int32_t> schools = region.buildings_of_type(BuildingType::School);
    std::vector<std::int32_t> workplaces = region.buildings_of_type(BuildingType::Workplace);
    if (schools.empty() || workplaces.empty()) {
        throw SpecError("attachment assignment needs at least one School and one Workplace");
    }
    std::vector<double> cap_cum(workplaces.size());
    double cap_total = 0.0;
    for (std::size_t i = 0; i < workplaces.size(); ++i) {
        cap_total += region.buildings[workplaces[i]].capacity;
        cap_cum[i] = cap_total;
    }

    Rng rng(seed);
    for (Individual& ind : individuals) {
        switch (ind.employment) {
            case Employment::Student: {
                if (rng.uniform01() < 0.8) {
                    ind.attachment =
                        nearest_of(schools, region.buildings[ind.home].centroid, region);
                } else {
                    ind.attachment = schools[rng.uniform_below(schools.size())];
                }
                break;
            }
            case Employment::Worker:
            case Employment::EssentialWorker: {
                double target = rng.uniform01() * cap_total;
                std::size_t k = 0;
                while (k + 1 < workplaces.size() && cap_cum[k] <= target) ++k;
                ind.attachment = workplaces[k];
                break;
            }
            default:
                ind.attachment = -1;
                break;
        }
    }
}

namespace {

// Evening distribution slot: Home / Shopping / Leisure, with a concrete
// building chosen uniformly among permitted types within the activity
// radius of home (fallback: the nearest permitted building).
AgendaSlot draw_discretionary(const Individual& ind, const Region& region,
                              const PopulationParams& params, Rng& rng) {
    double u = rng.uniform01();
    ActivityKind kind;
    if (u < params.evening_home_p) {
        return {ActivityKind::Home, ind.home};
    } else if (u < params.evening_home_p + params.evening_shop_p) {
        kind = ActivityKind::Shopping;
    } else {
        kind = ActivityKind::Leisure;
    }
    Point2D home = region.buildings[ind.home].centroid;
    std::vector<std::int32_t> near;
    std::vector<std::int32_t> all;
    for (const auto& b : region.buildings) {
        if (!activity_permits(kind, b.btype)) continue;
        all.push_back(b.id);
        if (distance(home, b.centroid) <= params.activity_radius_m) near.push_back(b.id);
    }
    if (all.empty()) return {ActivityKind::Home, ind.home};
    if (near.empty()) return {kind, nearest_of(all, home, region)};
    return {kind, near[rng.uniform_below(near.size())]};
}

} // namespace

Agenda build_agenda(const Individual& ind, const Region& region, const PopulationParams& params,
                    Rng& rng) {
    Agenda agenda;
    const AgendaSlot home_slot{ActivityKind::Home, ind.home};
    bool student = ind.employment == Employment::Student;
    bool worker =
        ind.employment == Employment::Worker || ind.employment == Employment::EssentialWorker;

    for (int hour = 0; hour < 24; ++hour) {
        AgendaSlot slot = home_slot;
        if (student && hour >= 9 && hour <= 15) {
            slot = {ActivityKind::School, ind.attachment};
        } else if (worker && hour >= 9 && hour <= 17) {
            slot = {ActivityKind::Work, ind.attachment};
        } else if (!student && !worker && hour >= 9 && hour <= 17) {
            slot = draw_discretionary(ind, region, params, rng);
        } else if (hour >= 18 && hour <= 21) {
            slot = draw_discretionary(ind, region, params, rng);
        }
        agenda.weekday[hour] = slot;
    }
    for (int hour = 0; hour < 24; ++hour) {
        AgendaSlot slot = home_slot;
        if (hour >= 10 && hour <= 21) slot = draw_discretionary(ind, region, params, rng);
        agenda.weekend[hour] = slot;
    }
    return agenda;
}

void build_agendas(std::vector<Individual>& individuals, const Region& region,
                   const PopulationParams& params, std::uint64_t seed) {
    Rng rng(seed);
    for (Individual& ind : individuals) {
        ind.agenda = build_agenda(ind, region, params, rng);
    }
}

std::vector<std::string> validate_population(std::span<const Individual> individuals,
                                             std::span<const Household> households,
                                             const Region& region) {
    std::vector<std::string> issues;
    auto complain = [&](std::int32_t id, const std::string& what) {
        issues.push_back("individual " + std::to_string(id) + ": " + what);
    };
    auto building_ok = [&](std::int32_t id) {
        return id >= 0 && id < static_cast<std::int32_t>(region.buildings.size());
    };

    if (static_cast<std::int64_t>(individuals.size()) != region.total_population) {
        issues.push_back("population size " + std::to_string(individuals.size()) +
                         " != region total_population " +
                         std::to_string(region.total_population));
    }

    for (const Individual& ind : individuals) {
        switch (ind.employment) {
            case Employment::Student:
                if (ind.age < 3 || ind.age > 22) complain(ind.id, "student age out of 3-22");
                if (!building_ok(ind.attachment) ||
                    region.buildings[ind.attachment].btype != BuildingType::School) {
                    complain(ind.id, "student attachment is not a School");
                }
                break;
            case Employment::Worker:
            case Employment::EssentialWorker:
                if (ind.age < 18 || ind.age > 65) complain(ind.id, "worker age out of 18-65");
                if (!building_ok(ind.attachment) ||
                    region.buildings[ind.attachment].btype != BuildingType::Workplace) {
                    complain(ind.id, "worker attachment is not a Workplace");
                }
                break;
            case Employment::Retired:
                if (ind.age < 60) complain(ind.id, "retired age below 60");
                if (ind.attachment != -1) complain(ind.id, "retired individual has an attachment");
                break;
            case Employment::Unemployed:
                if (ind.attachment != -1) complain(ind.id, "unemployed individual has an attachment");
                break;
        }
        if (!building_ok(ind.home) ||
            region.buildings[ind.home].btype != BuildingType::Residential) {
            complain(ind.id, "home is not a Residential building");
            continue;
        }
        if (ind.household_id < 0 ||
            ind.household_id >= static_cast<std::int32_t>(households.size())) {
            complain(ind.id, "dangling household id");
            continue;
        }
        const Household& h = households[ind.household_id];
        if (std::find(h.member_ids.begin(), h.member_ids.end(), ind.id) == h.member_ids.end()) {
            complain(ind.id, "not listed in its household");
        }
        if (h.home != ind.home) complain(ind.id, "home differs from household home");

        auto check_slots = [&](const std::array<AgendaSlot, 24>& slots, const char* day_kind) {
            for (int hour = 0; hour < 24; ++hour) {
                const AgendaSlot& s = slots[hour];
                if (!building_ok(s.building)) {
                    complain(ind.id, std::string(day_kind) + " slot " + std::to_string(hour) +
                                         ": dangling building");
                    continue;
                }
                if (!activity_permits(s.kind, region.buildings[s.building].btype)) {
                    complain(ind.id, std::string(day_kind) + " slot " + std::to_string(hour) +
                                         ": building type not permitted for " +
                                         to_string(s.kind));
                }
                if (hour <= 5 && s.kind != ActivityKind::Home) {
                    complain(ind.id, std::string(day_kind) + " slot " + std::to_string(hour) +
                                         ": night hours must be Home");
                }
            }
        };
        check_slots(ind.agenda.weekday, "weekday");
        check_slots(ind.agenda.weekend, "weekend");
        if (ind.employment == Employment::Student) {
            for (int hour = 9; hour <= 15; ++hour) {
                const AgendaSlot& s = ind.agenda.weekday[hour];
                if (s.kind != ActivityKind::School || s.building != ind.attachment) {
                    complain(ind.id, "weekday school block broken at hour " + std::to_string(hour));
                }
            }
        }
        if (ind.employment == Employment::Worker ||
            ind.employment == Employment::EssentialWorker) {
            for (int hour = 9; hour <= 17; ++hour) {
                const AgendaSlot& s = ind.agenda.weekday[hour];
                if (s.kind != ActivityKind::Work || s.building != ind.attachment) {
                    complain(ind.id, "weekday work block broken at hour " + std::to_string(hour));
                }
            }
        }
    }

    for (const Household& h : households) {
        if (h.member_ids.empty()) {
            issues.push_back("household " + std::to_string(h.id) + ": no members");
        }
        if (h.member_ids.size() > 12) {
            issues.push_back("household " + std::to_string(h.id) + ": size exceeds 12");
        }
        for (std::int32_t m : h.member_ids) {
            if (m < 0 || m >= static_cast<std::int32_t>(individuals.size()) ||
                individuals[m].household_id != h.id) {
                issues.push_back("household " + std::to_string(h.id) +
                                 ": inconsistent member " + std::to_string(m));
            }
        }
    }
    return issues;
}

std::string population_to_csv(std::span<const Individual> individuals) {
    std::string out = "id,age,sex,employment,household_id,home,attachment\n";
    for (const Individual& ind : individuals) {
        out += std::to_string(ind.id) + ',' + std::to_string(ind.age) + ',' +
               to_string(ind.sex) + ',' + to_string(ind.employment) + ',' +
               std::to_string(ind.household_id) + ',' + std::to_string(ind.home) + ',';
        if (ind.attachment >= 0) out += std::to_string(ind.attachment);
        out += '\n';
    }
    return out;
}

std::string agendas_to_csv(std::span<const Individual> individuals) {
    std::string out = "id,day_kind,hour,activity,building\n";
    for (const Individual& ind : individuals) {
        for (int hour = 0; hour < 24; ++hour) {
            const AgendaSlot& s = ind.agenda.weekday[hour];
            out += std::to_string(ind.id) + ",weekday," + std::to_string(hour) + ',' +
                   to_string(s.kind) + ',' + std::to_string(s.building) + '\n';
        }
        for (int hour = 0; hour < 24; ++hour) {
            const AgendaSlot& s = ind.agenda.weekend[hour];
            out += std::to_string(ind.id) + ",weekend," + std::to_string(hour) + ',' +
                   to_string(s.kind) + ',' + std::to_string(s.building) + '\n';
        }
    }
    return out;
}

} // namespace gwabm
