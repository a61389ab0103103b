#include "gwabm/epi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gwabm {

namespace {

const char* const kStateNames[kDiseaseStateCount] = {
    "Susceptible", "Latent", "Presymptomatic", "Asymptomatic", "Symptomatic",
    "Hospitalized", "ICU",   "Recovered",      "Dead"};

Cycle sample_duration(const DurationSpec& d, Rng& rng) {
    double hours = rng.lognormal_mean(d.mean_hours, d.sigma);
    return std::max<Cycle>(1, static_cast<Cycle>(std::ceil(hours)));
}

} // namespace

const char* to_string(DiseaseState s) {
    return kStateNames[static_cast<int>(s)];
}

bool is_infectious(DiseaseState s) {
    switch (s) {
        case DiseaseState::Presymptomatic:
        case DiseaseState::Asymptomatic:
        case DiseaseState::Symptomatic:
        case DiseaseState::Hospitalized:
        case DiseaseState::ICU:
            return true;
        default:
            return false;
    }
}

bool is_absorbing(DiseaseState s) {
    return s == DiseaseState::Recovered || s == DiseaseState::Dead;
}

bool transition_legal(DiseaseState from, DiseaseState to) {
    using D = DiseaseState;
    switch (from) {
        case D::Susceptible: return to == D::Latent;
        case D::Latent: return to == D::Presymptomatic || to == D::Asymptomatic;
        case D::Presymptomatic: return to == D::Symptomatic;
        case D::Asymptomatic: return to == D::Recovered;
        case D::Symptomatic: return to == D::Recovered || to == D::Hospitalized;
        case D::Hospitalized: return to == D::Recovered || to == D::ICU;
        case D::ICU: return to == D::Recovered || to == D::Dead;
        case D::Recovered:
        case D::Dead: return false;
    }
    return false;
}

double effective_infectious_count(std::span<const Occupant> occupants, const EpiParams& params) {
    double k = 0.0;
    for (const Occupant& o : occupants) {
        if (!is_infectious(o.state)) continue;
        double w = o.state == DiseaseState::Asymptomatic ? params.asym_factor : 1.0;
        if (o.masked) w *= params.mask_factor;
        k += w;
    }
    return k;
}

double h2h_infection_probability(double k_eff, bool susceptible_masked, const EpiParams& params) {
    if (k_eff <= 0.0) return 0.0;
    double per_contact = params.beta_h * (susceptible_masked ? params.mask_factor : 1.0);
    per_contact = std::clamp(per_contact, 0.0, 1.0);
    double p = 1.0 - std::pow(1.0 - per_contact, k_eff);
    return std::clamp(p, 0.0, 1.0);
}

double environmental_infection_probability(double load, const EpiParams& params) {
    if (load <= 0.0 || params.env_beta <= 0.0) return 0.0;
    return 1.0 - std::exp(-params.env_beta * load);
}

void step_environmental(std::vector<double>& loads, const Occupancy& occupancy,
                        const EpiParams& params, Rng& rng, std::vector<InfectionEvent>& out) {
    for (std::size_t b = 0; b < occupancy.size(); ++b) {
        double load = loads[b] * (1.0 - params.decay_per_hour);
        const auto& occupants = occupancy[b];
        if (!occupants.empty()) {
            load += params.deposit_per_infectious_hour *
                    effective_infectious_count(occupants, params);
        }
        loads[b] = load;
        double p = environmental_infection_probability(load, params);
        for (const Occupant& o : occupants) {
            if (o.state != DiseaseState::Susceptible) continue;
            if (rng.uniform01() < p) {
                out.push_back({o.id, static_cast<std::int32_t>(b), true});
            }
        }
    }
}

void step_h2h(const Occupancy& occupancy, const EpiParams& params, Rng& rng,
              std::vector<InfectionEvent>& out) {
    for (std::size_t b = 0; b < occupancy.size(); ++b) {
        const auto& occupants = occupancy[b];
        if (occupants.empty()) continue;
        double k_eff = effective_infectious_count(occupants, params);
        // Probabilities depend on the susceptible's mask only; cache both.
        double p_unmasked = h2h_infection_probability(k_eff, false, params);
        double p_masked = p_unmasked > 0.0 ? h2h_infection_probability(k_eff, true, params) : 0.0;
        for (const Occupant& o : occupants) {
            if (o.state != DiseaseState::Susceptible) continue;
            double p = o.masked ? p_masked : p_unmasked;
            if (rng.uniform01() < p) {
                out.push_back({o.id, static_cast<std::int32_t>(b), false});
            }
        }
    }
}

namespace {

// Samples the outgoing leg for a state just entered at `cycle`.
void schedule_next(DiseaseCourse& c, int age, Cycle cycle, const EpiParams& params, Rng& rng) {
    using D = DiseaseState;
    switch (c.state) {
        case D::Latent: {
            bool asym = rng.uniform01() < params.p_asym[age_band(age)];
            c.sched_target = asym ? D::Asymptomatic : D::Presymptomatic;
            c.sched_cycle = cycle + sample_duration(params.latent, rng);
            break;
        }
        case D::Presymptomatic:
            c.sched_target = D::Symptomatic;
            c.sched_cycle = cycle + sample_duration(params.presym, rng);
            break;
        case D::Asymptomatic:
            c.sched_target = D::Recovered;
            c.sched_cycle = cycle + sample_duration(params.asym, rng);
            break;
        case D::Symptomatic: {
            bool hosp = rng.uniform01() < params.p_hosp[age_band(age)];
            c.sched_target = hosp ? D::Hospitalized : D::Recovered;
            c.sched_cycle = cycle + sample_duration(params.sym, rng);
            break;
        }
        case D::Hospitalized: {
            bool icu = rng.uniform01() < params.p_icu;
            c.sched_target = icu ? D::ICU : D::Recovered;
            c.sched_cycle = cycle + sample_duration(params.hosp, rng);
            break;
        }
        case D::ICU: {
            bool dead = rng.uniform01() < params.p_death_icu;
            c.sched_target = dead ? D::Dead : D::Recovered;
            c.sched_cycle = cycle + sample_duration(params.icu, rng);
            break;
        }
        case D::Recovered:
        case D::Dead:
            c.sched_target = c.state;
            c.sched_cycle = kNoCycle;
            break;
        case D::Susceptible:
            throw std::logic_error("schedule_next on a susceptible course");
    }
}

} // namespace

void begin_infection(DiseaseCourse& course, int age, Cycle entry_cycle, const EpiParams& params,
                     Rng& rng) {
    if (course.state != DiseaseState::Susceptible) {
        throw std::logic_error("begin_infection on a non-susceptible course");
    }
    course.state = DiseaseState::Latent;
    course.since = entry_cycle;
    schedule_next(course, age, entry_cycle, params, rng);
}

std::optional<DiseaseState> advance_disease(DiseaseCourse& course, int age, Cycle cycle,
                                            const EpiParams& params, Rng& rng) {
    if (course.sched_cycle == kNoCycle || course.sched_cycle != cycle) return std::nullopt;
    if (is_absorbing(course.state)) return std::nullopt;
    DiseaseState target = course.sched_target;
    if (!transition_legal(course.state, target)) {
        throw std::logic_error(std::string("illegal transition ") + to_string(course.state) +
                               " -> " + to_string(target));
    }
    course.state = target;
    course.since = cycle;
    schedule_next(course, age, cycle, params, rng);
    return target;
}

} // namespace gwabm
