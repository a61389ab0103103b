#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gwabm/epi.hpp"
#include "gwabm/synthpop.hpp"

namespace gwabm {

enum class PolicyKind : std::uint8_t {
    NoContainment,
    SchoolClosure,
    HomeContainment,        // everyone home except EssentialWorkers
    RealisticLockdown,      // home containment + essential work + one shop trip per household/day
    FamilyContainment,      // household quarantined when a member tests positive
    DynamicSpatialLockdown, // per-block lockdown on cumulative deaths
    LateLockdown,           // NoContainment before trigger_cycle, inner policy after
    ElderlyStayHome,        // agents aged >= threshold permanently home
};

enum class TestingKind : std::uint8_t { NoTesting, PartialTesting, MassTesting };

struct TestingStrategy {
    TestingKind kind = TestingKind::NoTesting;
    std::int32_t daily_tests = 20;
    /// When >= 0, overrides daily_tests with ceil(population * value / 1000).
    double daily_tests_per_1000 = -1.0;

    std::int32_t budget_for(std::int64_t population) const;
};

struct Policy {
    PolicyKind kind = PolicyKind::NoContainment;
    TestingStrategy testing;

    // RealisticLockdown
    double essential_fraction = 0.10; // echoed in run metadata
    Cycle start_cycle = 360;          // day 15

    // DynamicSpatialLockdown
    std::int64_t death_threshold = 2;
    Cycle lockdown_duration_hours = 336; // 14 days
    Cycle review_interval_hours = 24;

    // LateLockdown (nesting depth <= 1)
    Cycle trigger_cycle = 720; // day 30
    std::shared_ptr<const Policy> inner;

    // ElderlyStayHome
    int elderly_age_threshold = 60;

    // Quarantine length applied to positives (and their household under
    // FamilyContainment).
    Cycle quarantine_duration_hours = 336;

    void validate() const;

    /// Resolves LateLockdown delegation: NoContainment before the trigger,
    /// the inner policy after. Identity for every other kind.
    const Policy& effective(Cycle cycle) const;
};

const char* to_string(PolicyKind k);
const char* to_string(TestingKind k);

/// Parses the flat policy spec format, e.g.
///   policy = realistic_lockdown
///   policy.start_cycle = 360
///   testing = partial
///   testing.daily_tests = 20
///   dynlock.death_threshold = 3
Policy parse_policy_kv(std::map<std::string, std::string>& kv);
Policy load_policy_file(const std::string& path);

/// Quarantine status of an agent as derived state.
enum class QuarantineKind : std::uint8_t { Free, HomeQuarantine, BlockLockdown };

struct QuarantineStatus {
    QuarantineKind kind = QuarantineKind::Free;
    Cycle until_cycle = kNoCycle;
};

struct BlockLockState {
    Cycle until = kNoCycle; // locked while cycle < until
    std::int32_t lock_count = 0;
};

struct PendingTestResult {
    Cycle result_cycle = 0;
    std::int32_t individual = 0;
    bool positive = false;
};

/// The testing/containment authority: daily test budget bookkeeping,
/// known positives, per-block cumulative deaths and lock state.
struct AuthorityState {
    std::int32_t tests_used_today = 0;
    std::vector<std::uint8_t> known_positive;       // by individual id
    std::vector<std::int64_t> per_block_cum_deaths; // by block id
    std::vector<BlockLockState> block_locks;        // by block id
    std::deque<PendingTestResult> pending;          // ascending result_cycle
    std::vector<std::uint8_t> household_shopped_today;

    static AuthorityState make(std::size_t n_individuals, std::size_t n_blocks,
                               std::size_t n_households);

    bool block_locked(std::int32_t block, Cycle cycle) const;
    std::int32_t locked_block_count(Cycle cycle) const;
    /// Resets the per-day counters (midnight hook).
    void reset_day();
};

QuarantineStatus effective_quarantine(const Individual& ind, const AuthorityState& authority,
                                      Cycle cycle);

/// Where the agent actually goes this hour. Precedence: hospital >
/// home quarantine > block lockdown > policy filter > agenda. May consume
/// the household's daily shopping allowance under RealisticLockdown, so
/// callers must iterate agents in ascending id order.
std::int32_t allowed_destination(const Individual& ind, AgendaSlot slot, const Policy& policy,
                                 AuthorityState& authority, Cycle cycle,
                                 std::span<const BuildingFootprint> buildings);

/// Daily testing pass (hour 8). Results are queued and land after
/// test_delay_hours; positives are only then added to known_positive.
/// Returns the number of tests performed.
std::int32_t run_daily_tests(std::span<const Individual> individuals,
                             const TestingStrategy& strategy, AuthorityState& authority,
                             const EpiParams& params, Rng& rng, Cycle cycle);

/// Quarantines a freshly known positive (14 days), and the whole household
/// when the effective policy is FamilyContainment. Extensions keep the
/// later until_cycle.
void apply_positive(std::int32_t id, std::vector<Individual>& individuals,
                    std::span<const Household> households, const Policy& policy,
                    AuthorityState& authority, Cycle cycle);

/// Lockdown review: locks any block whose cumulative deaths reached the
/// (relock-doubled) threshold; the k-th relock requires 2*k*death_threshold.
void update_dynamic_lockdown(AuthorityState& authority, const Policy& policy, Cycle cycle);

} // namespace gwabm
