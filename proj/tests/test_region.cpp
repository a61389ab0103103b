#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gwabm/errors.hpp"
#include "gwabm/region.hpp"

using namespace gwabm;

namespace {

const std::string kFixtureDir = std::string(GWABM_FIXTURE_DIR) + "/gwalior_mini";

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

} // namespace

TEST_CASE("load_buildings: single well-formed feature") {
    std::string path = write_temp(
        "b1.json",
        R"({"features":[{"name":"home","type":"Residential","ring":[[0,0],[10,0],[10,10],[0,10]]}]})");
    auto buildings = load_buildings(path);
    REQUIRE(buildings.size() == 1);
    CHECK(buildings[0].btype == BuildingType::Residential);
    CHECK(ring_area(buildings[0].polygon) == doctest::Approx(100.0));
    CHECK(buildings[0].id == 0);
}

TEST_CASE("load_buildings: degenerate feature skipped with warning") {
    std::string path = write_temp(
        "b2.json",
        R"({"features":[{"name":"line","ring":[[0,0],[5,5]]},)"
        R"({"name":"ok","type":"Shop","ring":[[0,0],[4,0],[4,4],[0,4]]}]})");
    std::vector<std::string> warnings;
    auto buildings = load_buildings(path, &warnings);
    REQUIRE(buildings.size() == 1);
    CHECK(buildings[0].btype == BuildingType::Shop);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("skipped") != std::string::npos);
}

TEST_CASE("load_buildings: missing type defaults to Residential") {
    std::string path =
        write_temp("b3.json", R"({"features":[{"name":"x","ring":[[0,0],[4,0],[4,4],[0,4]]}]})");
    auto buildings = load_buildings(path);
    CHECK(buildings[0].btype == BuildingType::Residential);
}

TEST_CASE("load_buildings: error contracts") {
    CHECK_THROWS_AS(load_buildings(write_temp("b4.json", R"({"features":[]})")),
                    EmptyRegionError);
    CHECK_THROWS_AS(load_buildings(write_temp("b5.json", "not json")), ParseError);
    CHECK_THROWS_AS(
        load_buildings(write_temp(
            "b6.json", R"({"features":[{"name":"x","type":"Castle","ring":[[0,0],[1,0],[1,1]]}]})")),
        ParseError);
}

TEST_CASE("load_buildings: gwalior_mini fixture matches its manifest") {
    auto buildings = load_buildings(kFixtureDir + "/buildings.json");
    nlohmann::json manifest;
    std::ifstream in(kFixtureDir + "/manifest.json");
    in >> manifest;
    CHECK(buildings.size() == manifest["buildings"].get<std::size_t>());
    std::map<std::string, int> hist;
    for (const auto& b : buildings) hist[to_string(b.btype)] += 1;
    for (auto& [type, count] : manifest["type_histogram"].items()) {
        CHECK(hist[type] == count.get<int>());
    }
}

TEST_CASE("assign_building_types rules") {
    std::vector<BuildingFootprint> buildings(3);
    buildings[0].name = "Govt School";
    buildings[1].name = "JAH Hospital";
    buildings[2].name = "Apartment 7";
    for (auto& b : buildings) {
        b.btype = BuildingType::Residential;
        b.polygon = {{0, 0}, {1, 0}, {1, 1}};
    }
    std::vector<TypeRule> rules = {{"school", BuildingType::School},
                                   {"hospital", BuildingType::Hospital}};
    auto out = assign_building_types(buildings, rules);
    CHECK(out[0].btype == BuildingType::School);
    CHECK(out[1].btype == BuildingType::Hospital); // second rule matches
    CHECK(out[2].btype == BuildingType::Residential); // fall-through keeps type
}

TEST_CASE("load_population_grid: small grids and errors") {
    auto grid = load_population_grid(write_temp("g1.csv", "0,0,100,2,2\n5,0\n0,5\n"));
    CHECK(grid.total() == 10);
    CHECK(grid.rows == 2);

    CHECK_THROWS_AS(load_population_grid(write_temp("g2.csv", "0,0,100,2,2\n5,-1\n0,5\n")),
                    NegativeCountError);
    CHECK_THROWS_AS(load_population_grid(write_temp("g3.csv", "0,0,100,2,2\n5\n0,5\n")),
                    ParseError);
    CHECK_THROWS_AS(load_population_grid(write_temp("g4.csv", "bogus\n")), ParseError);
}

TEST_CASE("load_population_grid: fixture total matches manifest") {
    auto grid = load_population_grid(kFixtureDir + "/grid.csv");
    nlohmann::json manifest;
    std::ifstream in(kFixtureDir + "/manifest.json");
    in >> manifest;
    CHECK(grid.total() == manifest["grid_total"].get<std::int64_t>());
}

TEST_CASE("generate_synthetic_region: determinism and invariants") {
    RegionSpec spec = RegionSpec::gwalior_mini();
    Region a = generate_synthetic_region(spec, 42);
    Region b = generate_synthetic_region(spec, 42);
    CHECK(region_to_canonical_json(a) == region_to_canonical_json(b));

    Region c = generate_synthetic_region(spec, 43);
    CHECK(region_to_canonical_json(a) != region_to_canonical_json(c));

    CHECK(a.blocks.size() == 4);
    CHECK_FALSE(a.buildings_of_type(BuildingType::Hospital).empty());
    CHECK(a.grid.total() == 1000);
    CHECK(validate_region(a).empty());
}

TEST_CASE("generate_synthetic_region: spec errors") {
    RegionSpec spec = RegionSpec::gwalior_mini();
    spec.type_mix[0] = 0.9; // mix no longer sums to 1
    CHECK_THROWS_AS(generate_synthetic_region(spec, 1), SpecError);

    RegionSpec zero_res = RegionSpec::gwalior_mini();
    zero_res.type_mix = {0.0, 0.65, 0.15, 0.10, 0.05, 0.025, 0.025};
    CHECK_THROWS_AS(generate_synthetic_region(zero_res, 1), SpecError);

    RegionSpec tiny = RegionSpec::gwalior_mini();
    tiny.total_population = 5;
    CHECK_THROWS_AS(generate_synthetic_region(tiny, 1), SpecError);
}

TEST_CASE("region block coverage: every building centroid locates to its block") {
    Region region = generate_synthetic_region(RegionSpec::desk_default(500), 11);
    for (const auto& b : region.buildings) {
        auto block = locate_block(b.centroid, region.blocks);
        REQUIRE(block.has_value());
        CHECK(*block == b.block_id);
    }
}

TEST_CASE("save/load region round trip preserves canonical form") {
    Region region = generate_synthetic_region(RegionSpec::gwalior_mini(), 5);
    std::string dir = (std::filesystem::temp_directory_path() / "gwabm_rt").string();
    save_region_dir(region, dir);
    Region loaded = load_region_dir(dir);
    CHECK(validate_region(loaded).empty());
    CHECK(loaded.total_population == region.total_population);
    CHECK(loaded.buildings.size() == region.buildings.size());
    // Canonical forms match because files carry 6-decimal coordinates.
    CHECK(region_to_canonical_json(loaded) == region_to_canonical_json(region));
}

TEST_CASE("load_region_dir: missing files are config errors") {
    CHECK_THROWS_AS(load_region_dir("/nonexistent_region_dir"), ParseError);
}
