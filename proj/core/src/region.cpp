#include "gwabm/region.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gwabm/errors.hpp"
#include "gwabm/rng.hpp"

namespace gwabm {

namespace {

using nlohmann::json;

const char* const kTypeNames[kBuildingTypeCount] = {
    "Residential", "School", "Workplace", "Shop", "Leisure", "Hospital", "Outdoor"};

std::int32_t default_capacity(BuildingType t) {
    switch (t) {
        case BuildingType::Residential: return 8;
        case BuildingType::School: return 200;
        case BuildingType::Workplace: return 20;
        case BuildingType::Shop: return 15;
        case BuildingType::Leisure: return 40;
        case BuildingType::Hospital: return 100;
        case BuildingType::Outdoor: return 50;
    }
    return 1;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Ring parse_ring(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": ring must be an array of [x,y] pairs");
    Ring ring;
    ring.reserve(j.size());
    for (const auto& pt : j) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
            throw ParseError(where + ": ring vertex must be a numeric [x,y] pair");
        }
        double x = pt[0].get<double>();
        double y = pt[1].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw ParseError(where + ": non-finite coordinate");
        }
        ring.push_back({x, y});
    }
    return ring;
}

void append_f6(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out += buf;
}

void append_ring_json(std::string& out, const Ring& ring) {
    out += '[';
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (i) out += ',';
        out += '[';
        append_f6(out, ring[i].x);
        out += ',';
        append_f6(out, ring[i].y);
        out += ']';
    }
    out += ']';
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

const char* to_string(BuildingType t) {
    return kTypeNames[static_cast<int>(t)];
}

std::optional<BuildingType> building_type_from_string(const std::string& s) {
    for (int i = 0; i < kBuildingTypeCount; ++i) {
        if (s == kTypeNames[i]) return static_cast<BuildingType>(i);
    }
    return std::nullopt;
}

std::int64_t PopulationGrid::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::optional<std::int32_t> PopulationGrid::cell_index(Point2D p) const {
    double fx = (p.x - origin.x) / cell_size;
    double fy = (p.y - origin.y) / cell_size;
    auto col = static_cast<std::int64_t>(std::floor(fx));
    auto row = static_cast<std::int64_t>(std::floor(fy));
    // Points exactly on the max edge belong to the outermost cell.
    if (col == cols && fx == static_cast<double>(cols)) col = cols - 1;
    if (row == rows && fy == static_cast<double>(rows)) row = rows - 1;
    if (col < 0 || col >= cols || row < 0 || row >= rows) return std::nullopt;
    return static_cast<std::int32_t>(row * cols + col);
}

std::vector<std::int32_t> Region::buildings_of_type(BuildingType t) const {
    std::vector<std::int32_t> out;
    for (const auto& b : buildings) {
        if (b.btype == t) out.push_back(b.id);
    }
    return out;
}

RegionSpec RegionSpec::gwalior_mini() {
    RegionSpec spec;
    spec.total_population = 1000;
    spec.n_blocks = 4;
    spec.n_buildings = 40;
    spec.width_m = 2000.0;
    spec.height_m = 2000.0;
    spec.cell_size_m = 250.0;
    // The four community development blocks of the district this desk
    // fixture stands in for.
    spec.block_names = {"ghatigaon", "morar", "dabra", "bhitarwar"};
    return spec;
}

RegionSpec RegionSpec::desk_default(std::int64_t population) {
    RegionSpec spec;
    spec.total_population = population;
    spec.n_blocks = 4;
    spec.n_buildings = static_cast<std::int32_t>(std::max<std::int64_t>(40, (population * 3) / 10));
    double extent = std::max(1500.0, 100.0 * std::sqrt(static_cast<double>(spec.n_buildings)));
    spec.width_m = extent;
    spec.height_m = extent;
    spec.cell_size_m = extent / 10.0;
    return spec;
}

std::vector<BuildingFootprint> load_buildings(const std::string& path,
                                              std::vector<std::string>* warnings) {
    json doc = read_json_file(path);
    if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array()) {
        throw ParseError(path + ": expected top-level object with a \"features\" array");
    }
    std::vector<BuildingFootprint> out;
    std::size_t feature_index = 0;
    for (const auto& f : doc["features"]) {
        std::string where = path + ": feature " + std::to_string(feature_index);
        ++feature_index;
        if (!f.is_object() || !f.contains("ring")) {
            throw ParseError(where + ": feature must be an object with a \"ring\"");
        }
        BuildingFootprint b;
        b.name = f.value("name", std::string{});
        if (f.contains("type")) {
            if (!f["type"].is_string()) throw ParseError(where + ": \"type\" must be a string");
            auto t = building_type_from_string(f["type"].get<std::string>());
            if (!t) throw ParseError(where + ": unknown building type \"" +
                                     f["type"].get<std::string>() + "\"");
            b.btype = *t;
        } else {
            b.btype = BuildingType::Residential;
        }
        Ring ring = normalize_ring(parse_ring(f["ring"], where));
        if (ring.size() < 3 || ring_area(ring) <= 0.0 || !ring_is_simple(ring)) {
            if (warnings) {
                warnings->push_back(where + " (\"" + b.name +
                                    "\"): degenerate or self-intersecting ring, skipped");
            }
            continue;
        }
        b.polygon = std::move(ring);
        b.centroid = ring_centroid(b.polygon);
        b.capacity = f.contains("capacity") ? f["capacity"].get<std::int32_t>()
                                            : default_capacity(b.btype);
        if (b.capacity <= 0) throw ParseError(where + ": capacity must be positive");
        b.id = static_cast<std::int32_t>(out.size());
        out.push_back(std::move(b));
    }
    if (out.empty()) throw EmptyRegionError(path + ": no usable building features");
    return out;
}

std::vector<BuildingFootprint> assign_building_types(std::vector<BuildingFootprint> buildings,
                                                     std::span<const TypeRule> rules) {
    for (auto& b : buildings) {
        std::string name = lower(b.name);
        for (const auto& [pattern, type] : rules) {
            if (name.find(lower(pattern)) != std::string::npos) {
                b.btype = type;
                break;
            }
        }
    }
    return buildings;
}

PopulationGrid load_population_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");

    PopulationGrid grid;
    {
        std::istringstream hs(line);
        char comma;
        if (!(hs >> grid.origin.x >> comma >> grid.origin.y >> comma >> grid.cell_size >>
              comma >> grid.rows >> comma >> grid.cols)) {
            throw ParseError(path + ": header must be origin_x,origin_y,cell_size,rows,cols");
        }
    }
    if (grid.cell_size <= 0 || grid.rows <= 0 || grid.cols <= 0) {
        throw ParseError(path + ": cell_size, rows and cols must be positive");
    }
    grid.counts.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
    for (std::int32_t r = 0; r < grid.rows; ++r) {
        if (!std::getline(in, line)) throw ParseError(path + ": missing grid row " + std::to_string(r));
        std::istringstream ls(line);
        std::string cell;
        std::int32_t c = 0;
        while (std::getline(ls, cell, ',')) {
            if (c >= grid.cols) throw ParseError(path + ": too many cells in row " + std::to_string(r));
            std::int64_t v = 0;
            try {
                v = std::stoll(cell);
            } catch (const std::exception&) {
                throw ParseError(path + ": bad count \"" + cell + "\" in row " + std::to_string(r));
            }
            if (v < 0) throw NegativeCountError(path + ": negative count in row " + std::to_string(r));
            grid.counts.push_back(v);
            ++c;
        }
        if (c != grid.cols) throw ParseError(path + ": row " + std::to_string(r) + " has " +
                                             std::to_string(c) + " cells, expected " +
                                             std::to_string(grid.cols));
    }
    return grid;
}

std::vector<AdminBlock> load_blocks(const std::string& path) {
    json doc = read_json_file(path);
    if (!doc.is_object() || !doc.contains("blocks") || !doc["blocks"].is_array()) {
        throw ParseError(path + ": expected top-level object with a \"blocks\" array");
    }
    std::vector<AdminBlock> out;
    for (const auto& jb : doc["blocks"]) {
        std::string where = path + ": block " + std::to_string(out.size());
        if (!jb.is_object() || !jb.contains("id") || !jb.contains("ring")) {
            throw ParseError(where + ": block must have \"id\" and \"ring\"");
        }
        AdminBlock b;
        b.id = jb["id"].get<std::int32_t>();
        b.name = jb.value("name", "block_" + std::to_string(b.id));
        b.polygon = normalize_ring(parse_ring(jb["ring"], where));
        if (b.polygon.size() < 3 || ring_area(b.polygon) <= 0.0) {
            throw ParseError(where + ": degenerate block polygon");
        }
        out.push_back(std::move(b));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = i + 1; j < out.size(); ++j) {
            if (out[i].id == out[j].id) {
                throw ParseError(path + ": duplicate block id " + std::to_string(out[i].id));
            }
        }
    }
    return out;
}

std::optional<std::int32_t> locate_block(Point2D p, std::span<const AdminBlock> blocks) {
    // Ascending id scan realizes the lowest-id tie break for boundary points.
    std::vector<std::size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return blocks[a].id < blocks[b].id; });
    for (std::size_t i : order) {
        if (point_in_ring(p, blocks[i].polygon)) return blocks[i].id;
    }
    return std::nullopt;
}

Region generate_synthetic_region(const RegionSpec& spec, std::uint64_t seed) {
    double mix_sum = std::accumulate(spec.type_mix.begin(), spec.type_mix.end(), 0.0);
    if (std::abs(mix_sum - 1.0) > 1e-9) throw SpecError("building type mix must sum to 1");
    if (spec.type_mix[static_cast<int>(BuildingType::Residential)] <= 0.0) {
        throw SpecError("residential share must be positive");
    }
    if (spec.total_population < 10) throw SpecError("total_population must be >= 10");
    if (spec.n_blocks < 1) throw SpecError("block count must be >= 1");
    if (spec.n_buildings < 4) throw SpecError("need at least 4 buildings");
    if (spec.width_m <= 0 || spec.height_m <= 0 || spec.cell_size_m <= 0) {
        throw SpecError("region extent and cell size must be positive");
    }

    Rng rng(seed);
    Region region;
    region.total_population = spec.total_population;

    // Blocks: near-square rectangular partition of the extent, row-major ids.
    std::int32_t block_rows = 1;
    for (std::int32_t r = static_cast<std::int32_t>(std::sqrt(static_cast<double>(spec.n_blocks)));
         r >= 1; --r) {
        if (spec.n_blocks % r == 0) {
            block_rows = r;
            break;
        }
    }
    std::int32_t block_cols = spec.n_blocks / block_rows;
    double bw = spec.width_m / block_cols;
    double bh = spec.height_m / block_rows;
    if (bw < 25.0 || bh < 25.0) throw SpecError("blocks too small for building footprints");
    for (std::int32_t r = 0; r < block_rows; ++r) {
        for (std::int32_t c = 0; c < block_cols; ++c) {
            AdminBlock b;
            b.id = r * block_cols + c;
            b.name = b.id < static_cast<std::int32_t>(spec.block_names.size())
                         ? spec.block_names[b.id]
                         : "block_" + std::to_string(b.id);
            double x0 = c * bw, x1 = (c + 1) * bw;
            double y0 = r * bh, y1 = (r + 1) * bh;
            b.polygon = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
            region.blocks.push_back(std::move(b));
        }
    }

    // Type counts by largest remainder, then force one of each core type.
    std::array<std::int32_t, kBuildingTypeCount> type_count{};
    {
        std::array<double, kBuildingTypeCount> frac{};
        std::int32_t assigned = 0;
        for (int t = 0; t < kBuildingTypeCount; ++t) {
            double exact = spec.type_mix[t] * spec.n_buildings;
            type_count[t] = static_cast<std::int32_t>(std::floor(exact));
            frac[t] = exact - type_count[t];
            assigned += type_count[t];
        }
        std::array<int, kBuildingTypeCount> order{};
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return frac[a] > frac[b]; });
        for (int i = 0; assigned < spec.n_buildings; ++i, ++assigned) {
            type_count[order[i % kBuildingTypeCount]] += 1;
        }
        for (BuildingType required : {BuildingType::Residential, BuildingType::School,
                                      BuildingType::Workplace, BuildingType::Hospital}) {
            int t = static_cast<int>(required);
            if (type_count[t] > 0) continue;
            int donor = 0;
            for (int u = 1; u < kBuildingTypeCount; ++u) {
                if (type_count[u] > type_count[donor]) donor = u;
            }
            type_count[donor] -= 1;
            type_count[t] += 1;
        }
    }
    std::vector<BuildingType> type_list;
    type_list.reserve(spec.n_buildings);
    for (int t = 0; t < kBuildingTypeCount; ++t) {
        type_list.insert(type_list.end(), type_count[t], static_cast<BuildingType>(t));
    }
    for (std::size_t i = type_list.size() - 1; i > 0; --i) {
        std::size_t j = rng.uniform_below(i + 1);
        std::swap(type_list[i], type_list[j]);
    }

    // Buildings: evenly many per block, square footprints scattered uniformly.
    std::int32_t next_id = 0;
    for (std::int32_t b = 0; b < spec.n_blocks; ++b) {
        std::int32_t count = spec.n_buildings / spec.n_blocks +
                             (b < spec.n_buildings % spec.n_blocks ? 1 : 0);
        const AdminBlock& block = region.blocks[b];
        BoundingBox bb = ring_bounds(block.polygon);
        for (std::int32_t k = 0; k < count; ++k, ++next_id) {
            BuildingFootprint built;
            built.id = next_id;
            built.btype = type_list[next_id];
            built.block_id = b;
            double side = rng.uniform(8.0, 20.0);
            double margin = side / 2.0 + 0.5;
            double cx = rng.uniform(bb.min_x + margin, bb.max_x - margin);
            double cy = rng.uniform(bb.min_y + margin, bb.max_y - margin);
            double h = side / 2.0;
            built.polygon = {{cx - h, cy - h}, {cx + h, cy - h}, {cx + h, cy + h}, {cx - h, cy + h}};
            built.centroid = {cx, cy};
            switch (built.btype) {
                case BuildingType::Residential: built.capacity = static_cast<std::int32_t>(rng.uniform_int(4, 12)); break;
                case BuildingType::School: built.capacity = static_cast<std::int32_t>(rng.uniform_int(80, 400)); break;
                case BuildingType::Workplace: built.capacity = static_cast<std::int32_t>(rng.uniform_int(5, 50)); break;
                case BuildingType::Shop: built.capacity = static_cast<std::int32_t>(rng.uniform_int(5, 30)); break;
                case BuildingType::Leisure: built.capacity = static_cast<std::int32_t>(rng.uniform_int(10, 80)); break;
                case BuildingType::Hospital: built.capacity = static_cast<std::int32_t>(rng.uniform_int(50, 200)); break;
                case BuildingType::Outdoor: built.capacity = static_cast<std::int32_t>(rng.uniform_int(20, 100)); break;
            }
            built.name = lower(to_string(built.btype)) + "_" + std::to_string(built.id);
            region.buildings.push_back(std::move(built));
        }
    }

    // Population grid proportional to residential centroid density,
    // exact total via largest remainder.
    PopulationGrid& grid = region.grid;
    grid.origin = {0.0, 0.0};
    grid.cell_size = spec.cell_size_m;
    grid.cols = static_cast<std::int32_t>(std::ceil(spec.width_m / spec.cell_size_m));
    grid.rows = static_cast<std::int32_t>(std::ceil(spec.height_m / spec.cell_size_m));
    std::vector<std::int64_t> weight(static_cast<std::size_t>(grid.rows) * grid.cols, 0);
    for (const auto& built : region.buildings) {
        if (built.btype != BuildingType::Residential) continue;
        if (auto cell = grid.cell_index(built.centroid)) weight[*cell] += 1;
    }
    std::int64_t wsum = std::accumulate(weight.begin(), weight.end(), std::int64_t{0});
    grid.counts.assign(weight.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainder;
    remainder.reserve(weight.size());
    std::int64_t placed = 0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        double exact = static_cast<double>(spec.total_population) * weight[i] / static_cast<double>(wsum);
        grid.counts[i] = static_cast<std::int64_t>(std::floor(exact));
        placed += grid.counts[i];
        remainder.push_back({exact - std::floor(exact), i});
    }
    std::stable_sort(remainder.begin(), remainder.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; placed < spec.total_population; ++i, ++placed) {
        grid.counts[remainder[i % remainder.size()].second] += 1;
    }
    return region;
}

std::string region_to_canonical_json(const Region& region) {
    std::string out;
    out.reserve(region.buildings.size() * 256 + 4096);
    out += "{\"blocks\":[";
    for (std::size_t i = 0; i < region.blocks.size(); ++i) {
        const AdminBlock& b = region.blocks[i];
        if (i) out += ',';
        out += "\n{\"id\":" + std::to_string(b.id) + ",\"name\":\"" + json_escape(b.name) +
               "\",\"ring\":";
        append_ring_json(out, b.polygon);
        out += '}';
    }
    out += "],\n\"buildings\":[";
    for (std::size_t i = 0; i < region.buildings.size(); ++i) {
        const BuildingFootprint& b = region.buildings[i];
        if (i) out += ',';
        out += "\n{\"block\":" + std::to_string(b.block_id) +
               ",\"capacity\":" + std::to_string(b.capacity) +
               ",\"id\":" + std::to_string(b.id) + ",\"name\":\"" + json_escape(b.name) +
               "\",\"ring\":";
        append_ring_json(out, b.polygon);
        out += ",\"type\":\"";
        out += to_string(b.btype);
        out += "\"}";
    }
    out += "],\n\"grid\":{\"cell_size\":";
    append_f6(out, region.grid.cell_size);
    out += ",\"cols\":" + std::to_string(region.grid.cols) + ",\"counts\":[";
    for (std::int32_t r = 0; r < region.grid.rows; ++r) {
        if (r) out += ',';
        out += '[';
        for (std::int32_t c = 0; c < region.grid.cols; ++c) {
            if (c) out += ',';
            out += std::to_string(region.grid.counts[static_cast<std::size_t>(r) * region.grid.cols + c]);
        }
        out += ']';
    }
    out += "],\"origin\":[";
    append_f6(out, region.grid.origin.x);
    out += ',';
    append_f6(out, region.grid.origin.y);
    out += "],\"rows\":" + std::to_string(region.grid.rows) + "},\n\"total_population\":" +
           std::to_string(region.total_population) + "}\n";
    return out;
}

void save_region_dir(const Region& region, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    std::string buildings = "{\"features\":[";
    for (std::size_t i = 0; i < region.buildings.size(); ++i) {
        const BuildingFootprint& b = region.buildings[i];
        if (i) buildings += ',';
        buildings += "\n{\"name\":\"" + json_escape(b.name) + "\",\"type\":\"";
        buildings += to_string(b.btype);
        buildings += "\",\"capacity\":" + std::to_string(b.capacity) + ",\"ring\":";
        append_ring_json(buildings, b.polygon);
        buildings += '}';
    }
    buildings += "]}\n";

    std::string blocks = "{\"blocks\":[";
    for (std::size_t i = 0; i < region.blocks.size(); ++i) {
        const AdminBlock& b = region.blocks[i];
        if (i) blocks += ',';
        blocks += "\n{\"id\":" + std::to_string(b.id) + ",\"name\":\"" + json_escape(b.name) +
                  "\",\"ring\":";
        append_ring_json(blocks, b.polygon);
        blocks += '}';
    }
    blocks += "]}\n";

    std::string grid;
    {
        char head[160];
        std::snprintf(head, sizeof(head), "%.6f,%.6f,%.6f,%d,%d\n", region.grid.origin.x,
                      region.grid.origin.y, region.grid.cell_size, region.grid.rows,
                      region.grid.cols);
        grid = head;
        for (std::int32_t r = 0; r < region.grid.rows; ++r) {
            for (std::int32_t c = 0; c < region.grid.cols; ++c) {
                if (c) grid += ',';
                grid += std::to_string(
                    region.grid.counts[static_cast<std::size_t>(r) * region.grid.cols + c]);
            }
            grid += '\n';
        }
    }

    for (const auto& [name, text] : {std::pair<std::string, const std::string&>{"buildings.json", buildings},
                                     {"blocks.json", blocks},
                                     {"grid.csv", grid}}) {
        std::ofstream out(dir + "/" + name, std::ios::binary);
        if (!out) throw IoError("cannot write " + dir + "/" + name);
        out << text;
    }
}

Region load_region_dir(const std::string& dir) {
    Region region;
    region.buildings = load_buildings(dir + "/buildings.json");
    region.blocks = load_blocks(dir + "/blocks.json");
    region.grid = load_population_grid(dir + "/grid.csv");
    region.total_population = region.grid.total();
    for (auto& b : region.buildings) {
        auto block = locate_block(b.centroid, region.blocks);
        b.block_id = block ? *block : -1;
    }
    return region;
}

std::vector<std::string> validate_region(const Region& region) {
    std::vector<std::string> issues;
    if (region.buildings.empty()) issues.push_back("region has no buildings");
    if (region.blocks.empty()) issues.push_back("region has no blocks");
    if (region.total_population <= 0) issues.push_back("total_population must be positive");
    if (region.grid.total() != region.total_population) {
        issues.push_back("grid sum " + std::to_string(region.grid.total()) +
                         " != total_population " + std::to_string(region.total_population));
    }
    for (BuildingType required : {BuildingType::Residential, BuildingType::Workplace,
                                  BuildingType::School, BuildingType::Hospital}) {
        if (region.buildings_of_type(required).empty()) {
            issues.push_back(std::string("no building of type ") + to_string(required));
        }
    }
    BoundingBox grid_bb{region.grid.origin.x, region.grid.origin.y,
                        region.grid.origin.x + region.grid.cell_size * region.grid.cols,
                        region.grid.origin.y + region.grid.cell_size * region.grid.rows};
    for (const auto& b : region.buildings) {
        std::string tag = "building " + std::to_string(b.id);
        if (b.polygon.size() < 3 || ring_area(b.polygon) <= 0.0) {
            issues.push_back(tag + ": degenerate polygon");
            continue;
        }
        if (!ring_is_simple(b.polygon)) issues.push_back(tag + ": self-intersecting polygon");
        if (b.capacity <= 0) issues.push_back(tag + ": capacity must be positive");
        auto block = locate_block(b.centroid, region.blocks);
        if (!block) {
            issues.push_back(tag + ": centroid outside every block");
        } else if (*block != b.block_id) {
            issues.push_back(tag + ": block_id " + std::to_string(b.block_id) +
                             " but centroid lies in block " + std::to_string(*block));
        }
        if (b.btype == BuildingType::Residential && !grid_bb.contains(b.centroid)) {
            issues.push_back(tag + ": residential centroid outside the population grid");
        }
    }
    // Overlap heuristic: a vertex of one block strictly inside another.
    for (std::size_t i = 0; i < region.blocks.size(); ++i) {
        for (std::size_t j = 0; j < region.blocks.size(); ++j) {
            if (i == j) continue;
            for (const Point2D& v : region.blocks[j].polygon) {
                bool on_edge = false;
                const Ring& ring = region.blocks[i].polygon;
                for (std::size_t k = 0, m = ring.size() - 1; k < ring.size(); m = k++) {
                    if (point_segment_dist2(v, ring[m], ring[k]) <= 1e-18) {
                        on_edge = true;
                        break;
                    }
                }
                if (!on_edge && point_in_ring(v, ring)) {
                    issues.push_back("blocks " + std::to_string(region.blocks[i].id) + " and " +
                                     std::to_string(region.blocks[j].id) + " overlap");
                    break;
                }
            }
        }
    }
    return issues;
}

} // namespace gwabm
