#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "gapmap/geojson.hpp"
#include "gapmap/geometry.hpp"
#include "gapmap/records.hpp"

namespace gapmap {

struct GridCell {
    int cell_id = 0;  // row-major in the full lattice, stable across pruning
    double region_fraction = 1.0;
    std::optional<std::string> ex_region;
    std::optional<std::string> biogeo_unit;
};

// Square analysis grid. Cells are stored for the retained subset only but
// keep their full-lattice row-major ids. Cell (row, col) covers
// [x0+col*s, x0+(col+1)*s) x [y0+row*s, y0+(row+1)*s); containment tests
// use closed bounds with lowest-id tie-break so edge points resolve
// deterministically.
class Grid {
  public:
    Grid() = default;

    double origin_x() const { return origin_x_; }
    double origin_y() const { return origin_y_; }
    double cell_size_m() const { return cell_size_; }
    int n_rows() const { return n_rows_; }
    int n_cols() const { return n_cols_; }

    const std::vector<GridCell>& cells() const { return cells_; }
    std::vector<GridCell>& cells() { return cells_; }

    bool is_retained(int cell_id) const { return index_.count(cell_id) > 0; }
    const GridCell* find(int cell_id) const;
    GridCell* find(int cell_id);

    Rect cell_rect(int cell_id) const;
    Rect extent() const;

    // Lowest retained cell id whose closed rect contains p, if any.
    std::optional<int> cell_containing(const Point& p) const;

    // Retained cell ids whose rects intersect the bbox.
    std::vector<int> cells_overlapping(const Rect& bbox) const;

    friend Grid build_grid(const Rect& extent, double cell_size_m,
                           std::optional<Point> origin);
    friend Grid prune_border_cells(Grid grid, double threshold);
    friend Grid grid_from_geojson(const Json& doc);

  private:
    void rebuild_index();

    double origin_x_ = 0, origin_y_ = 0;
    double cell_size_ = 10'000.0;
    int n_rows_ = 0, n_cols_ = 0;
    std::vector<GridCell> cells_;  // sorted by cell_id
    std::unordered_map<int, size_t> index_;
};

// Tiles the extent with squares; origin defaults to the extent lower-left,
// or snaps onto the given reference lattice. Throws on non-finite extent or
// nonpositive cell size.
Grid build_grid(const Rect& extent, double cell_size_m,
                std::optional<Point> origin = std::nullopt);

// Fills region_fraction = area(cell ∩ region)/area(cell) for every cell.
void compute_region_fractions(Grid& grid,
                              const std::vector<PolygonShape>& region);

// Removes cells with region_fraction < threshold; ids are preserved.
Grid prune_border_cells(Grid grid, double threshold);

// Points go to the containing cell, polygons to the cell with maximal
// intersected area, linestrings to the cell with maximal intersected
// length. Ties resolve to the lowest cell_id; nullopt when the geometry
// touches no retained cell.
std::optional<int> assign_record_to_cell(const Geometry& geometry,
                                         const Grid& grid);

// Majority-intersection labels; cells meeting no zone get "unassigned".
void assign_cell_attributes(Grid& grid, const ZoneLayer& ex_regions,
                            const ZoneLayer& biogeo_units);

Json grid_to_geojson(const Grid& grid);
Grid grid_from_geojson(const Json& doc);

}  // namespace gapmap
