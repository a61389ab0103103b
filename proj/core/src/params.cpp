#include "gwabm/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gwabm/errors.hpp"

namespace gwabm {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("key \"" + key + "\": bad number \"" + v + "\"");
    }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        std::int64_t d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("key \"" + key + "\": bad integer \"" + v + "\"");
    }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

void require_prob(const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw SpecError(std::string(name) + " must be in [0,1], got " + std::to_string(v));
    }
}

// Pulls key if present; returns whether it was set.
template <typename F>
bool take(std::map<std::string, std::string>& kv, const std::string& key, F&& apply) {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    apply(it->second);
    kv.erase(it);
    return true;
}

} // namespace

int age_band(int age) {
    if (age < 18) return 0;
    if (age < 60) return 1;
    return 2;
}

void EpiParams::validate() const {
    if (!(decay_per_hour > 0.0 && decay_per_hour < 1.0)) {
        throw SpecError("env.decay_per_hour must be in (0,1)");
    }
    if (deposit_per_infectious_hour < 0.0) throw SpecError("env.deposit must be >= 0");
    if (env_beta < 0.0) throw SpecError("env.beta must be >= 0");
    require_prob("h2h.beta_h", beta_h);
    require_prob("h2h.asym_factor", asym_factor);
    require_prob("h2h.mask_factor", mask_factor);
    for (const DurationSpec* d : {&latent, &presym, &asym, &sym, &hosp, &icu}) {
        if (d->mean_hours <= 0.0) throw SpecError("duration means must be positive");
        if (d->sigma < 0.0) throw SpecError("duration sigmas must be >= 0");
    }
    for (double p : p_asym) require_prob("sev.p_asym", p);
    for (double p : p_hosp) require_prob("sev.p_hosp", p);
    require_prob("sev.p_icu", p_icu);
    require_prob("sev.p_death_icu", p_death_icu);
    require_prob("test.sensitivity", test_sensitivity);
    if (test_delay_hours < 0) throw SpecError("test.delay_hours must be >= 0");
    require_prob("test.mask_adherence", mask_adherence);
}

void PopulationParams::validate() const {
    double w = 0.0;
    for (double v : age_band_weights) {
        if (v < 0.0) throw SpecError("age_band_weights must be non-negative");
        w += v;
    }
    if (std::abs(w - 1.0) > 1e-9) throw SpecError("age_band_weights must sum to 1");
    if (household_size_pmf.empty() || household_size_pmf.size() > 12) {
        throw SpecError("household_size_pmf must cover sizes 1..12");
    }
    double h = 0.0;
    for (double v : household_size_pmf) {
        if (v < 0.0) throw SpecError("household_size_pmf must be non-negative");
        h += v;
    }
    if (std::abs(h - 1.0) > 1e-9) throw SpecError("household_size_pmf must sum to 1");
    require_prob("essential_worker_fraction", essential_worker_fraction);
    require_prob("student_rate_18_22", student_rate_18_22);
    require_prob("employment_rate_18_59", employment_rate_18_59);
    require_prob("employment_rate_60_65", employment_rate_60_65);
    double e = evening_home_p + evening_shop_p + evening_leisure_p;
    if (std::abs(e - 1.0) > 1e-9) throw SpecError("evening activity probabilities must sum to 1");
    if (activity_radius_m <= 0.0) throw SpecError("activity_radius_m must be positive");
}

std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_kv_text(ss.str(), path);
}

void apply_epi_params(EpiParams& p, std::map<std::string, std::string>& kv) {
    take(kv, "env.deposit_per_infectious_hour",
         [&](const std::string& v) { p.deposit_per_infectious_hour = to_double("env.deposit_per_infectious_hour", v); });
    take(kv, "env.decay_per_hour",
         [&](const std::string& v) { p.decay_per_hour = to_double("env.decay_per_hour", v); });
    take(kv, "env.beta", [&](const std::string& v) { p.env_beta = to_double("env.beta", v); });

    take(kv, "h2h.beta_h", [&](const std::string& v) { p.beta_h = to_double("h2h.beta_h", v); });
    take(kv, "h2h.asym_factor",
         [&](const std::string& v) { p.asym_factor = to_double("h2h.asym_factor", v); });
    take(kv, "h2h.mask_factor",
         [&](const std::string& v) { p.mask_factor = to_double("h2h.mask_factor", v); });

    auto duration = [&](const char* prefix, DurationSpec& d) {
        take(kv, std::string("sev.") + prefix + "_mean_hours",
             [&](const std::string& v) { d.mean_hours = to_double(prefix, v); });
        take(kv, std::string("sev.") + prefix + "_sigma",
             [&](const std::string& v) { d.sigma = to_double(prefix, v); });
    };
    duration("latent", p.latent);
    duration("presym", p.presym);
    duration("asym", p.asym);
    duration("sym", p.sym);
    duration("hosp", p.hosp);
    duration("icu", p.icu);

    auto band_list = [&](const char* key, std::array<double, kAgeBandCount>& arr) {
        take(kv, key, [&](const std::string& v) {
            auto vals = to_list(key, v);
            if (vals.size() != kAgeBandCount) {
                throw ParseError(std::string(key) + " needs exactly " +
                                 std::to_string(kAgeBandCount) + " values");
            }
            for (int i = 0; i < kAgeBandCount; ++i) arr[i] = vals[i];
        });
    };
    band_list("sev.p_asym", p.p_asym);
    band_list("sev.p_hosp", p.p_hosp);
    take(kv, "sev.p_icu", [&](const std::string& v) { p.p_icu = to_double("sev.p_icu", v); });
    take(kv, "sev.p_death_icu",
         [&](const std::string& v) { p.p_death_icu = to_double("sev.p_death_icu", v); });

    take(kv, "test.sensitivity",
         [&](const std::string& v) { p.test_sensitivity = to_double("test.sensitivity", v); });
    take(kv, "test.delay_hours", [&](const std::string& v) {
        p.test_delay_hours = static_cast<std::int32_t>(to_int("test.delay_hours", v));
    });
    take(kv, "test.mask_adherence",
         [&](const std::string& v) { p.mask_adherence = to_double("test.mask_adherence", v); });
}

void apply_population_params(PopulationParams& p, std::map<std::string, std::string>& kv) {
    take(kv, "age_band_weights", [&](const std::string& v) {
        auto vals = to_list("age_band_weights", v);
        if (vals.size() != kAgeBandCount) throw ParseError("age_band_weights needs 3 values");
        for (int i = 0; i < kAgeBandCount; ++i) p.age_band_weights[i] = vals[i];
    });
    take(kv, "household_size_pmf",
         [&](const std::string& v) { p.household_size_pmf = to_list("household_size_pmf", v); });
    take(kv, "essential_worker_fraction", [&](const std::string& v) {
        p.essential_worker_fraction = to_double("essential_worker_fraction", v);
    });
    take(kv, "student_rate_18_22",
         [&](const std::string& v) { p.student_rate_18_22 = to_double("student_rate_18_22", v); });
    take(kv, "employment_rate_18_59", [&](const std::string& v) {
        p.employment_rate_18_59 = to_double("employment_rate_18_59", v);
    });
    take(kv, "employment_rate_60_65", [&](const std::string& v) {
        p.employment_rate_60_65 = to_double("employment_rate_60_65", v);
    });
    take(kv, "evening_home_p",
         [&](const std::string& v) { p.evening_home_p = to_double("evening_home_p", v); });
    take(kv, "evening_shop_p",
         [&](const std::string& v) { p.evening_shop_p = to_double("evening_shop_p", v); });
    take(kv, "evening_leisure_p",
         [&](const std::string& v) { p.evening_leisure_p = to_double("evening_leisure_p", v); });
    take(kv, "activity_radius_m",
         [&](const std::string& v) { p.activity_radius_m = to_double("activity_radius_m", v); });
}

std::string epi_params_to_kv(const EpiParams& p) {
    char buf[2048];
    std::snprintf(
        buf, sizeof(buf),
        "env.deposit_per_infectious_hour = %g\n"
        "env.decay_per_hour = %g\n"
        "env.beta = %g\n"
        "h2h.beta_h = %g\n"
        "h2h.asym_factor = %g\n"
        "h2h.mask_factor = %g\n"
        "sev.latent_mean_hours = %g\nsev.latent_sigma = %g\n"
        "sev.presym_mean_hours = %g\nsev.presym_sigma = %g\n"
        "sev.asym_mean_hours = %g\nsev.asym_sigma = %g\n"
        "sev.sym_mean_hours = %g\nsev.sym_sigma = %g\n"
        "sev.hosp_mean_hours = %g\nsev.hosp_sigma = %g\n"
        "sev.icu_mean_hours = %g\nsev.icu_sigma = %g\n"
        "sev.p_asym = %g,%g,%g\n"
        "sev.p_hosp = %g,%g,%g\n"
        "sev.p_icu = %g\n"
        "sev.p_death_icu = %g\n"
        "test.sensitivity = %g\n"
        "test.delay_hours = %d\n"
        "test.mask_adherence = %g\n",
        p.deposit_per_infectious_hour, p.decay_per_hour, p.env_beta, p.beta_h, p.asym_factor,
        p.mask_factor, p.latent.mean_hours, p.latent.sigma, p.presym.mean_hours, p.presym.sigma,
        p.asym.mean_hours, p.asym.sigma, p.sym.mean_hours, p.sym.sigma, p.hosp.mean_hours,
        p.hosp.sigma, p.icu.mean_hours, p.icu.sigma, p.p_asym[0], p.p_asym[1], p.p_asym[2],
        p.p_hosp[0], p.p_hosp[1], p.p_hosp[2], p.p_icu, p.p_death_icu, p.test_sensitivity,
        p.test_delay_hours, p.mask_adherence);
    return buf;
}

} // namespace gwabm
