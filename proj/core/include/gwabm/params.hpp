#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gwabm {

/// Duration distribution: lognormal with the given arithmetic mean (hours)
/// and log-space sigma. Samples are rounded up to whole hours, minimum 1.
struct DurationSpec {
    double mean_hours = 24.0;
    double sigma = 0.5;
};

/// Age bands used by all age-dependent probabilities: 0-17, 18-59, 60+.
inline constexpr int kAgeBandCount = 3;
int age_band(int age);

/// All epidemiological constants, grouped under four heads:
/// environmental contamination, human-to-human transmission,
/// hospitalization and severity, testing and mask wearing.
struct EpiParams {
    // environmental contamination dynamics
    double deposit_per_infectious_hour = 1.0;
    double decay_per_hour = 0.1;
    double env_beta = 0.0002; // per-load-unit hourly infection coefficient

    // human-to-human transmission dynamics
    double beta_h = 0.009;      // per-infectious-contact hourly probability
    double asym_factor = 0.55;  // relative infectiousness of Asymptomatic
    double mask_factor = 0.5;   // multiplicative reduction per masked party

    // hospitalization and severity
    DurationSpec latent{36.0, 0.5};
    DurationSpec presym{24.0, 0.5};
    DurationSpec asym{96.0, 0.5};
    DurationSpec sym{96.0, 0.5};
    DurationSpec hosp{24.0, 0.5};
    DurationSpec icu{24.0, 0.5};
    std::array<double, kAgeBandCount> p_asym = {0.4, 0.3, 0.2};
    std::array<double, kAgeBandCount> p_hosp = {0.12, 0.28, 0.65};
    double p_icu = 0.5;
    double p_death_icu = 0.75;

    // testing and mask wearing
    double test_sensitivity = 0.9;
    std::int32_t test_delay_hours = 12;
    double mask_adherence = 0.0;

    /// Throws SpecError when a probability or duration is out of range.
    void validate() const;
};

/// Synthetic-population knobs.
struct PopulationParams {
    std::array<double, kAgeBandCount> age_band_weights = {0.35, 0.55, 0.10};
    /// P(size = i+1); tail sizes beyond the vector have probability 0.
    std::vector<double> household_size_pmf = {0.08, 0.14, 0.18, 0.26, 0.18, 0.10, 0.04, 0.02};
    double essential_worker_fraction = 0.10;
    double student_rate_18_22 = 0.30;
    double employment_rate_18_59 = 0.65;
    double employment_rate_60_65 = 0.20;
    double evening_home_p = 0.6;
    double evening_shop_p = 0.2;
    double evening_leisure_p = 0.2;
    double activity_radius_m = 2000.0;

    void validate() const;
};

/// Flat `key = value` file: one pair per line, `#` comments, blank lines
/// ignored. List values are comma separated.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin = "<text>");

/// Applies recognized keys from `kv`, erasing them; unknown keys stay so
/// the caller can route one file through several param groups.
void apply_epi_params(EpiParams& params, std::map<std::string, std::string>& kv);
void apply_population_params(PopulationParams& params, std::map<std::string, std::string>& kv);

std::string epi_params_to_kv(const EpiParams& params);

} // namespace gwabm
