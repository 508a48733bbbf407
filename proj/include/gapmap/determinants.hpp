#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapmap/grid.hpp"
#include "gapmap/raster.hpp"

namespace gapmap {

// Pixel-center membership: a raster pixel contributes to the (lowest-id)
// grid cell whose closed rect contains its center; nodata pixels and pixels
// outside every retained cell are ignored. Cells covering no valid pixel
// come back absent.
std::map<int, double> zonal_max(const RasterLayer& raster, const Grid& grid);
std::map<int, double> zonal_mean(const RasterLayer& raster, const Grid& grid);

// Uniform (non-kernel) line density: at each output pixel center, total
// length of the input lines clipped to the search disc divided by the disc
// area. Output raster spans the extent at sample_cell_m resolution.
RasterLayer line_density(const std::vector<std::vector<Point>>& lines,
                         const Rect& extent, double sample_cell_m = 1000.0,
                         double radius_m = 5000.0, int threads = 1);

// Percent of each cell covered by the union of the polygons (0..100).
std::map<int, double> percent_overlap(const std::vector<PolygonShape>& polygons,
                                      const Grid& grid);

struct PressureRow {
    double agriculture = 0.0;
    double urbanization = 0.0;
    double attendance = 0.0;
};

// Keyed by cell_id; duplicate keys are fatal.
std::map<int, PressureRow> read_pressure_table(std::istream& in);

struct DeterminantRow {
    int cell_id = 0;
    std::optional<double> naturalness_max;
    std::optional<double> hotspot_mean;
    std::optional<double> road_density_mean;
    std::optional<double> protected_pct;
    std::optional<double> pressure_agriculture;
    std::optional<double> pressure_urbanization;
    std::optional<double> pressure_attendance;
};

inline const std::vector<std::string> kDeterminantColumns = {
    "naturalness_max",      "hotspot_mean",          "road_density_mean",
    "protected_pct",        "pressure_agriculture",  "pressure_urbanization",
    "pressure_attendance"};

struct DeterminantTable {
    std::vector<DeterminantRow> rows;  // ascending cell_id, retained cells
    std::map<std::string, int> missing_counts;

    nlohmann::json missingness_report() const;
};

struct DeterminantInputs {
    std::optional<RasterLayer> naturalness;
    std::optional<RasterLayer> hotspots;
    std::optional<std::vector<std::vector<Point>>> roads;
    std::optional<std::vector<PolygonShape>> protected_areas;
    std::optional<std::map<int, PressureRow>> pressures;
};

struct DeterminantConfig {
    double line_density_sample_cell_m = 1000.0;
    double line_density_radius_m = 5000.0;
    int threads = 1;
};

// One row per retained cell; absent source layers flag their whole column
// missing. Road density is the zonal mean of the line-density raster.
DeterminantTable assemble_determinants(const Grid& grid,
                                       const DeterminantInputs& inputs,
                                       const DeterminantConfig& config);

std::string determinant_table_to_csv(const DeterminantTable& table,
                                     const std::string& digest_comment = "");
DeterminantTable determinant_table_from_csv(std::istream& in);

}  // namespace gapmap
