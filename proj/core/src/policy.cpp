#include "gwabm/policy.hpp"

#include <algorithm>
#include <cmath>

#include "gwabm/errors.hpp"

namespace gwabm {

namespace {

const Policy kNoContainmentPolicy{};

std::int64_t kv_int(std::map<std::string, std::string>& kv, const std::string& key,
                    std::int64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::int64_t v = 0;
    try {
        std::size_t pos = 0;
        v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
    } catch (const std::exception&) {
        throw ParseError("key \"" + key + "\": bad integer \"" + it->second + "\"");
    }
    kv.erase(it);
    return v;
}

double kv_double(std::map<std::string, std::string>& kv, const std::string& key,
                 double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    double v = 0;
    try {
        std::size_t pos = 0;
        v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
    } catch (const std::exception&) {
        throw ParseError("key \"" + key + "\": bad number \"" + it->second + "\"");
    }
    kv.erase(it);
    return v;
}

PolicyKind policy_kind_from(const std::string& name) {
    if (name == "no_containment") return PolicyKind::NoContainment;
    if (name == "school_closure") return PolicyKind::SchoolClosure;
    if (name == "home_containment") return PolicyKind::HomeContainment;
    if (name == "realistic_lockdown") return PolicyKind::RealisticLockdown;
    if (name == "family_containment") return PolicyKind::FamilyContainment;
    if (name == "dynamic_spatial_lockdown") return PolicyKind::DynamicSpatialLockdown;
    if (name == "late_lockdown") return PolicyKind::LateLockdown;
    if (name == "elderly_stay_home") return PolicyKind::ElderlyStayHome;
    throw ParseError("unknown policy \"" + name + "\"");
}

} // namespace

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::NoContainment: return "no_containment";
        case PolicyKind::SchoolClosure: return "school_closure";
        case PolicyKind::HomeContainment: return "home_containment";
        case PolicyKind::RealisticLockdown: return "realistic_lockdown";
        case PolicyKind::FamilyContainment: return "family_containment";
        case PolicyKind::DynamicSpatialLockdown: return "dynamic_spatial_lockdown";
        case PolicyKind::LateLockdown: return "late_lockdown";
        case PolicyKind::ElderlyStayHome: return "elderly_stay_home";
    }
    return "?";
}

const char* to_string(TestingKind k) {
    switch (k) {
        case TestingKind::NoTesting: return "none";
        case TestingKind::PartialTesting: return "partial";
        case TestingKind::MassTesting: return "mass";
    }
    return "?";
}

std::int32_t TestingStrategy::budget_for(std::int64_t population) const {
    if (daily_tests_per_1000 >= 0.0) {
        return static_cast<std::int32_t>(
            std::ceil(daily_tests_per_1000 * static_cast<double>(population) / 1000.0));
    }
    return daily_tests;
}

void Policy::validate() const {
    if (essential_fraction < 0.0 || essential_fraction > 1.0) {
        throw SpecError("policy.essential_fraction must be in [0,1]");
    }
    if (testing.daily_tests < 0) throw SpecError("testing.daily_tests must be >= 0");
    if (death_threshold < 0) throw SpecError("dynlock.death_threshold must be >= 0");
    if (lockdown_duration_hours < 0 || review_interval_hours <= 0) {
        throw SpecError("dynlock durations must be positive");
    }
    if (quarantine_duration_hours < 0) throw SpecError("quarantine duration must be >= 0");
    if (kind == PolicyKind::LateLockdown && inner && inner->kind == PolicyKind::LateLockdown) {
        throw SpecError("late_lockdown nesting depth exceeds 1");
    }
}

const Policy& Policy::effective(Cycle cycle) const {
    if (kind != PolicyKind::LateLockdown) return *this;
    if (cycle < trigger_cycle || !inner) return kNoContainmentPolicy;
    return *inner;
}

Policy parse_policy_kv(std::map<std::string, std::string>& kv) {
    Policy p;
    if (auto it = kv.find("policy"); it != kv.end()) {
        p.kind = policy_kind_from(it->second);
        kv.erase(it);
    }
    p.essential_fraction = kv_double(kv, "policy.essential_fraction", p.essential_fraction);
    p.start_cycle = kv_int(kv, "policy.start_cycle", p.start_cycle);
    p.trigger_cycle = kv_int(kv, "policy.trigger_cycle", p.trigger_cycle);
    p.elderly_age_threshold =
        static_cast<int>(kv_int(kv, "policy.elderly_age_threshold", p.elderly_age_threshold));
    p.quarantine_duration_hours =
        kv_int(kv, "policy.quarantine_hours", p.quarantine_duration_hours);
    p.death_threshold = kv_int(kv, "dynlock.death_threshold", p.death_threshold);
    p.lockdown_duration_hours = kv_int(kv, "dynlock.duration_hours", p.lockdown_duration_hours);
    p.review_interval_hours = kv_int(kv, "dynlock.review_hours", p.review_interval_hours);

    if (auto it = kv.find("policy.inner"); it != kv.end()) {
        auto inner = std::make_shared<Policy>();
        inner->kind = policy_kind_from(it->second);
        p.inner = inner;
        kv.erase(it);
    }
    if (p.kind == PolicyKind::LateLockdown && !p.inner) {
        auto inner = std::make_shared<Policy>();
        inner->kind = PolicyKind::HomeContainment;
        p.inner = inner;
    }

    if (auto it = kv.find("testing"); it != kv.end()) {
        const std::string& v = it->second;
        if (v == "none") p.testing.kind = TestingKind::NoTesting;
        else if (v == "partial") p.testing.kind = TestingKind::PartialTesting;
        else if (v == "mass") p.testing.kind = TestingKind::MassTesting;
        else throw ParseError("unknown testing strategy \"" + v + "\"");
        kv.erase(it);
    }
    p.testing.daily_tests =
        static_cast<std::int32_t>(kv_int(kv, "testing.daily_tests", p.testing.daily_tests));
    p.testing.daily_tests_per_1000 =
        kv_double(kv, "testing.daily_tests_per_1000", p.testing.daily_tests_per_1000);

    // Realistic lockdown ships with its own test budget unless testing was
    // configured explicitly.
    if (p.kind == PolicyKind::RealisticLockdown && p.testing.kind == TestingKind::NoTesting) {
        p.testing.kind = TestingKind::PartialTesting;
    }
    p.validate();
    return p;
}

Policy load_policy_file(const std::string& path) {
    auto kv = parse_kv_file(path);
    Policy p = parse_policy_kv(kv);
    if (!kv.empty()) throw ParseError(path + ": unknown key \"" + kv.begin()->first + "\"");
    return p;
}

AuthorityState AuthorityState::make(std::size_t n_individuals, std::size_t n_blocks,
                                    std::size_t n_households) {
    AuthorityState a;
    a.known_positive.assign(n_individuals, 0);
    a.per_block_cum_deaths.assign(n_blocks, 0);
    a.block_locks.assign(n_blocks, {});
    a.household_shopped_today.assign(n_households, 0);
    return a;
}

bool AuthorityState::block_locked(std::int32_t block, Cycle cycle) const {
    if (block < 0 || block >= static_cast<std::int32_t>(block_locks.size())) return false;
    return block_locks[block].until != kNoCycle && cycle < block_locks[block].until;
}

std::int32_t AuthorityState::locked_block_count(Cycle cycle) const {
    std::int32_t n = 0;
    for (const auto& l : block_locks) {
        if (l.until != kNoCycle && cycle < l.until) ++n;
    }
    return n;
}

void AuthorityState::reset_day() {
    tests_used_today = 0;
    std::fill(household_shopped_today.begin(), household_shopped_today.end(), 0);
}

QuarantineStatus effective_quarantine(const Individual& ind, const AuthorityState& authority,
                                      Cycle cycle) {
    if (ind.home_quarantine_until != kNoCycle && cycle < ind.home_quarantine_until) {
        return {QuarantineKind::HomeQuarantine, ind.home_quarantine_until};
    }
    if (authority.block_locked(ind.home_block, cycle)) {
        return {QuarantineKind::BlockLockdown, authority.block_locks[ind.home_block].until};
    }
    return {QuarantineKind::Free, kNoCycle};
}

std::int32_t allowed_destination(const Individual& ind, AgendaSlot slot, const Policy& policy,
                                 AuthorityState& authority, Cycle cycle,
                                 std::span<const BuildingFootprint> buildings) {
    // Hospitalized and critical agents are held at their hospital.
    if (ind.course.state == DiseaseState::Hospitalized || ind.course.state == DiseaseState::ICU) {
        return ind.hospital >= 0 ? ind.hospital : ind.home;
    }
    if (ind.home_quarantine_until != kNoCycle && cycle < ind.home_quarantine_until) {
        return ind.home;
    }
    if (authority.block_locked(ind.home_block, cycle)) return ind.home;
    std::int32_t target = slot.building;
    if (authority.block_locked(buildings[target].block_id, cycle)) return ind.home;

    const Policy& eff = policy.effective(cycle);
    switch (eff.kind) {
        case PolicyKind::NoContainment:
        case PolicyKind::FamilyContainment:
        case PolicyKind::DynamicSpatialLockdown:
        case PolicyKind::LateLockdown: // unreachable after effective()
            return target;
        case PolicyKind::SchoolClosure:
            return slot.kind == ActivityKind::School ? ind.home : target;
        case PolicyKind::HomeContainment:
            return ind.employment == Employment::EssentialWorker ? target : ind.home;
        case PolicyKind::ElderlyStayHome:
            return ind.age >= eff.elderly_age_threshold ? ind.home : target;
        case PolicyKind::RealisticLockdown: {
            if (cycle < eff.start_cycle) return target;
            if (ind.employment == Employment::EssentialWorker && slot.kind == ActivityKind::Work) {
                return target;
            }
            if (slot.kind == ActivityKind::Shopping &&
                !authority.household_shopped_today[ind.household_id]) {
                authority.household_shopped_today[ind.household_id] = 1;
                return target;
            }
            return ind.home;
        }
    }
    return target;
}

std::int32_t run_daily_tests(std::span<const Individual> individuals,
                             const TestingStrategy& strategy, AuthorityState& authority,
                             const EpiParams& params, Rng& rng, Cycle cycle) {
    std::int32_t performed = 0;
    const Cycle result_cycle = cycle + params.test_delay_hours;
    switch (strategy.kind) {
        case TestingKind::NoTesting:
            break;
        case TestingKind::PartialTesting: {
            std::int32_t budget =
                strategy.budget_for(static_cast<std::int64_t>(individuals.size()));
            for (const Individual& ind : individuals) {
                if (performed >= budget) break;
                if (ind.course.state != DiseaseState::Symptomatic) continue;
                if (authority.known_positive[ind.id]) continue;
                ++performed;
                bool positive = rng.uniform01() < params.test_sensitivity;
                if (positive) authority.pending.push_back({result_cycle, ind.id, true});
            }
            break;
        }
        case TestingKind::MassTesting: {
            // Everyone is tested; only infectious states can return positive
            // (perfect specificity), each with one sensitivity draw.
            performed = static_cast<std::int32_t>(individuals.size());
            for (const Individual& ind : individuals) {
                if (!is_infectious(ind.course.state)) continue;
                if (authority.known_positive[ind.id]) continue;
                bool positive = rng.uniform01() < params.test_sensitivity;
                if (positive) authority.pending.push_back({result_cycle, ind.id, true});
            }
            break;
        }
    }
    authority.tests_used_today += performed;
    return performed;
}

void apply_positive(std::int32_t id, std::vector<Individual>& individuals,
                    std::span<const Household> households, const Policy& policy,
                    AuthorityState& authority, Cycle cycle) {
    if (id < 0 || id >= static_cast<std::int32_t>(individuals.size())) {
        throw UnknownIndividualError("apply_positive: no individual " + std::to_string(id));
    }
    authority.known_positive[id] = 1;
    const Cycle until = cycle + policy.quarantine_duration_hours;
    auto quarantine = [&](Individual& ind) {
        ind.home_quarantine_until = std::max(ind.home_quarantine_until, until);
    };
    quarantine(individuals[id]);
    if (policy.effective(cycle).kind == PolicyKind::FamilyContainment) {
        const Household& h = households[individuals[id].household_id];
        for (std::int32_t member : h.member_ids) quarantine(individuals[member]);
    }
}

void update_dynamic_lockdown(AuthorityState& authority, const Policy& policy, Cycle cycle) {
    for (std::size_t b = 0; b < authority.block_locks.size(); ++b) {
        BlockLockState& lock = authority.block_locks[b];
        if (lock.until != kNoCycle && cycle < lock.until) continue; // still locked
        // Cumulative deaths never reset, so each relock doubles the bar:
        // k-th relock fires at 2*k*death_threshold.
        std::int64_t threshold = lock.lock_count == 0
                                     ? policy.death_threshold
                                     : 2 * static_cast<std::int64_t>(lock.lock_count) *
                                           policy.death_threshold;
        if (authority.per_block_cum_deaths[b] >= threshold) {
            lock.until = cycle + policy.lockdown_duration_hours;
            lock.lock_count += 1;
        }
    }
}

} // namespace gwabm
