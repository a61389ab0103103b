#include <doctest.h>

#include <cmath>

#include "gwabm/epi.hpp"

using namespace gwabm;

namespace {

EpiParams base_params() {
    EpiParams p;
    p.beta_h = 0.05;
    p.asym_factor = 0.55;
    p.mask_factor = 0.5;
    return p;
}

} // namespace

TEST_CASE("effective_infectious_count examples") {
    EpiParams p = base_params();
    std::vector<Occupant> none = {{0, DiseaseState::Susceptible, false},
                                  {1, DiseaseState::Recovered, false}};
    CHECK(effective_infectious_count(none, p) == doctest::Approx(0.0));

    std::vector<Occupant> one = {{0, DiseaseState::Symptomatic, false}};
    CHECK(effective_infectious_count(one, p) == doctest::Approx(1.0));

    std::vector<Occupant> mixed = {{0, DiseaseState::Symptomatic, true},
                                   {1, DiseaseState::Asymptomatic, false}};
    CHECK(effective_infectious_count(mixed, p) == doctest::Approx(1.05)); // 0.5 + 0.55
}

TEST_CASE("h2h_infection_probability: analytic values") {
    EpiParams p = base_params();
    CHECK(h2h_infection_probability(0.0, false, p) == doctest::Approx(0.0));

    p.beta_h = 1.0;
    CHECK(h2h_infection_probability(1.0, false, p) == doctest::Approx(1.0));

    p.beta_h = 0.05;
    CHECK(h2h_infection_probability(3.0, false, p) == doctest::Approx(0.142625).epsilon(1e-9));
}

TEST_CASE("h2h matches a brute-force per-contact Bernoulli oracle (3 sigma)") {
    EpiParams p = base_params();
    p.beta_h = 0.05;
    const int trials = 10000;
    Rng rng(12345);
    for (int k : {1, 2, 5}) {
        int infected = 0;
        for (int t = 0; t < trials; ++t) {
            // Oracle: k independent contact draws; infected iff any succeeds.
            bool any = false;
            for (int c = 0; c < k; ++c) {
                if (rng.uniform01() < p.beta_h) any = true;
            }
            infected += any;
        }
        double analytic = h2h_infection_probability(static_cast<double>(k), false, p);
        double empirical = static_cast<double>(infected) / trials;
        double sigma = std::sqrt(analytic * (1.0 - analytic) / trials);
        CHECK(std::abs(empirical - analytic) <= 3.0 * sigma);
    }
}

TEST_CASE("step_environmental: decay only") {
    EpiParams p = base_params();
    p.decay_per_hour = 0.2;
    p.deposit_per_infectious_hour = 1.0;
    std::vector<double> loads = {10.0};
    Occupancy occ(1); // nobody present
    Rng rng(1);
    std::vector<InfectionEvent> events;
    step_environmental(loads, occ, p, rng, events);
    CHECK(loads[0] == doctest::Approx(8.0));
    CHECK(events.empty());
}

TEST_CASE("step_environmental: zero env_beta never infects") {
    EpiParams p = base_params();
    p.env_beta = 0.0;
    std::vector<double> loads = {1e6};
    Occupancy occ(1);
    for (int i = 0; i < 50; ++i) occ[0].push_back({i, DiseaseState::Susceptible, false});
    occ[0].push_back({50, DiseaseState::Symptomatic, false});
    Rng rng(2);
    std::vector<InfectionEvent> events;
    step_environmental(loads, occ, p, rng, events);
    CHECK(events.empty());
}

TEST_CASE("step_environmental: three-hour load recurrence") {
    EpiParams p = base_params();
    p.decay_per_hour = 0.2;
    p.deposit_per_infectious_hour = 1.0;
    p.env_beta = 0.0;
    std::vector<double> loads = {0.0};
    Occupancy occ(1);
    occ[0].push_back({0, DiseaseState::Symptomatic, false});
    Rng rng(3);
    std::vector<InfectionEvent> events;
    std::vector<double> expected = {1.0, 1.8, 2.44};
    for (double want : expected) {
        step_environmental(loads, occ, p, rng, events);
        CHECK(loads[0] == doctest::Approx(want));
    }
}

TEST_CASE("step_h2h: no infectious means no events, beta 1 infects everyone") {
    EpiParams p = base_params();
    Occupancy occ(1);
    for (int i = 0; i < 10; ++i) occ[0].push_back({i, DiseaseState::Susceptible, false});
    Rng rng(4);
    std::vector<InfectionEvent> events;
    step_h2h(occ, p, rng, events);
    CHECK(events.empty());

    p.beta_h = 1.0;
    occ[0].push_back({10, DiseaseState::Symptomatic, false});
    step_h2h(occ, p, rng, events);
    CHECK(events.size() == 10);
}

TEST_CASE("step_h2h: empirical rate within 3 sigma of beta for one infectious") {
    EpiParams p = base_params();
    p.beta_h = 0.05;
    const int susceptibles = 1000;
    const int rounds = 10; // 10,000 Bernoulli challenges in total
    Occupancy occ(1);
    occ[0].push_back({0, DiseaseState::Symptomatic, false});
    for (int i = 0; i < susceptibles; ++i) {
        occ[0].push_back({i + 1, DiseaseState::Susceptible, false});
    }
    Rng rng(5);
    std::vector<InfectionEvent> events;
    for (int r = 0; r < rounds; ++r) step_h2h(occ, p, rng, events);
    double empirical = static_cast<double>(events.size()) / (susceptibles * rounds);
    double sigma = std::sqrt(0.05 * 0.95 / (susceptibles * rounds));
    CHECK(std::abs(empirical - 0.05) <= 3.0 * sigma);
}

TEST_CASE("advance_disease: absorbing states never move") {
    EpiParams p = base_params();
    Rng rng(6);
    DiseaseCourse c;
    c.state = DiseaseState::Recovered;
    c.sched_cycle = kNoCycle;
    CHECK_FALSE(advance_disease(c, 30, 100, p, rng).has_value());
    CHECK(c.state == DiseaseState::Recovered);
}

TEST_CASE("advance_disease: p_asym = 1 always branches to Asymptomatic") {
    EpiParams p = base_params();
    p.p_asym = {1.0, 1.0, 1.0};
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        DiseaseCourse c;
        begin_infection(c, 30, 0, p, rng);
        CHECK(c.sched_target == DiseaseState::Asymptomatic);
    }
}

TEST_CASE("advance_disease: hospitalization fraction within 3 sigma of p_hosp") {
    EpiParams p = base_params();
    p.p_hosp = {0.2, 0.2, 0.2};
    Rng rng(8);
    const int trials = 10000;
    int hospitalized = 0;
    for (int i = 0; i < trials; ++i) {
        DiseaseCourse c;
        c.state = DiseaseState::Presymptomatic;
        c.since = 0;
        c.sched_target = DiseaseState::Symptomatic;
        c.sched_cycle = 5;
        auto entered = advance_disease(c, 30, 5, p, rng);
        REQUIRE(entered == DiseaseState::Symptomatic);
        if (c.sched_target == DiseaseState::Hospitalized) ++hospitalized;
    }
    double empirical = static_cast<double>(hospitalized) / trials;
    double sigma = std::sqrt(0.2 * 0.8 / trials);
    CHECK(std::abs(empirical - 0.2) <= 3.0 * sigma);
}

TEST_CASE("disease legality: random walks only take legal transitions") {
    EpiParams p = base_params();
    p.p_asym = {0.4, 0.3, 0.2};
    p.p_hosp = {0.3, 0.3, 0.3};
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        DiseaseCourse c;
        begin_infection(c, static_cast<int>(rng.uniform_below(100)), 0, p, rng);
        DiseaseState prev = c.state;
        while (!is_absorbing(c.state)) {
            Cycle due = c.sched_cycle;
            auto entered = advance_disease(c, 30, due, p, rng);
            REQUIRE(entered.has_value());
            CHECK(transition_legal(prev, *entered));
            prev = *entered;
        }
    }
}

TEST_CASE("durations are at least one hour") {
    EpiParams p = base_params();
    p.latent = {0.5, 2.0}; // extreme: sub-hour mean, wide sigma
    Rng rng(10);
    for (int i = 0; i < 300; ++i) {
        DiseaseCourse c;
        begin_infection(c, 30, 100, p, rng);
        CHECK(c.sched_cycle >= 101);
    }
}
