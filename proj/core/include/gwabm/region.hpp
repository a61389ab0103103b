#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gwabm/geometry.hpp"

namespace gwabm {

enum class BuildingType : std::uint8_t {
    Residential,
    School,
    Workplace,
    Shop,
    Leisure,
    Hospital,
    Outdoor,
};
inline constexpr int kBuildingTypeCount = 7;

const char* to_string(BuildingType t);
std::optional<BuildingType> building_type_from_string(const std::string& s);

/// Typed polygon where agents co-locate. Hospitals additionally hold
/// hospitalized and critical agents regardless of their agenda.
struct BuildingFootprint {
    std::int32_t id = 0;
    Ring polygon; // open ring, >= 3 distinct vertices, simple, positive area
    BuildingType btype = BuildingType::Residential;
    std::int32_t block_id = -1; // block containing the centroid
    std::int32_t capacity = 1;  // activity-assignment weight, not a hard cap
    std::string name;
    Point2D centroid; // cached at load/generation time
};

/// Administrative block; the spatial unit of dynamic lockdown.
struct AdminBlock {
    std::int32_t id = 0;
    std::string name;
    Ring polygon;
};

/// Plain population-density raster, row-major counts.
struct PopulationGrid {
    Point2D origin;
    double cell_size = 1.0;
    std::int32_t rows = 0;
    std::int32_t cols = 0;
    std::vector<std::int64_t> counts;

    std::int64_t total() const;
    /// Flat index of the cell containing p, or nullopt when p lies outside.
    std::optional<std::int32_t> cell_index(Point2D p) const;
};

struct Region {
    std::vector<BuildingFootprint> buildings;
    std::vector<AdminBlock> blocks;
    PopulationGrid grid;
    std::int64_t total_population = 0;

    std::vector<std::int32_t> buildings_of_type(BuildingType t) const;
};

/// Synthetic-region generator knobs. The default mix keeps every type
/// present so that any agenda activity has a destination.
struct RegionSpec {
    std::int64_t total_population = 1000;
    std::int32_t n_blocks = 4;
    std::int32_t n_buildings = 300;
    double width_m = 3000.0;
    double height_m = 3000.0;
    double cell_size_m = 300.0;
    /// Shares indexed by BuildingType order; must sum to 1.
    std::array<double, kBuildingTypeCount> type_mix = {0.60, 0.05, 0.15, 0.10,
                                                       0.05, 0.025, 0.025};
    /// Optional block names (by id); blocks beyond the list get "block_<id>".
    std::vector<std::string> block_names;

    /// The bundled desk fixture: 1000 inhabitants, 4 blocks, 40 buildings.
    static RegionSpec gwalior_mini();
    /// Default desk-scale region for simulations of `population` agents.
    static RegionSpec desk_default(std::int64_t population);
};

using TypeRule = std::pair<std::string, BuildingType>;

/// Parses the building file format (see README). Features with a degenerate
/// ring are skipped with a warning appended to `warnings` when provided.
std::vector<BuildingFootprint> load_buildings(const std::string& path,
                                              std::vector<std::string>* warnings = nullptr);

/// First matching rule wins; patterns are literal substrings matched
/// case-insensitively against the feature name. Unmatched buildings keep
/// their existing type. Output order equals input order.
std::vector<BuildingFootprint> assign_building_types(std::vector<BuildingFootprint> buildings,
                                                     std::span<const TypeRule> rules);

PopulationGrid load_population_grid(const std::string& path);

std::vector<AdminBlock> load_blocks(const std::string& path);

/// Id of the block containing p. Boundary points belong to the
/// lowest-id containing block; nullopt when p is outside every block.
std::optional<std::int32_t> locate_block(Point2D p, std::span<const AdminBlock> blocks);

/// Deterministic in (spec, seed); the result satisfies every Region
/// invariant (block coverage, grid sum, one building of each core type).
Region generate_synthetic_region(const RegionSpec& spec, std::uint64_t seed);

/// Canonical text form used by determinism tests: keys sorted, floats with
/// six decimal places, LF separators.
std::string region_to_canonical_json(const Region& region);

/// Writes buildings.json, blocks.json and grid.csv under dir.
void save_region_dir(const Region& region, const std::string& dir);

/// Loads the three files written by save_region_dir and binds each building
/// to the block containing its centroid.
Region load_region_dir(const std::string& dir);

/// Invariant report; empty means valid.
std::vector<std::string> validate_region(const Region& region);

} // namespace gwabm
