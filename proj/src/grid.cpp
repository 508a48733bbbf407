#include "gapmap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gapmap {

const GridCell* Grid::find(int cell_id) const {
    auto it = index_.find(cell_id);
    return it == index_.end() ? nullptr : &cells_[it->second];
}

GridCell* Grid::find(int cell_id) {
    auto it = index_.find(cell_id);
    return it == index_.end() ? nullptr : &cells_[it->second];
}

Rect Grid::cell_rect(int cell_id) const {
    int row = cell_id / n_cols_;
    int col = cell_id % n_cols_;
    double x0 = origin_x_ + col * cell_size_;
    double y0 = origin_y_ + row * cell_size_;
    return Rect{x0, y0, x0 + cell_size_, y0 + cell_size_};
}

Rect Grid::extent() const {
    return Rect{origin_x_, origin_y_, origin_x_ + n_cols_ * cell_size_,
                origin_y_ + n_rows_ * cell_size_};
}

std::optional<int> Grid::cell_containing(const Point& p) const {
    int col = static_cast<int>(std::floor((p.x - origin_x_) / cell_size_));
    int row = static_cast<int>(std::floor((p.y - origin_y_) / cell_size_));
    std::optional<int> best;
    for (int r = row - 1; r <= row + 1; ++r) {
        for (int c = col - 1; c <= col + 1; ++c) {
            if (r < 0 || r >= n_rows_ || c < 0 || c >= n_cols_) continue;
            int id = r * n_cols_ + c;
            if (!is_retained(id)) continue;
            if (cell_rect(id).contains_closed(p)) {
                if (!best || id < *best) best = id;
            }
        }
    }
    return best;
}

std::vector<int> Grid::cells_overlapping(const Rect& bbox) const {
    int c0 = static_cast<int>(std::floor((bbox.x0 - origin_x_) / cell_size_));
    int c1 = static_cast<int>(std::floor((bbox.x1 - origin_x_) / cell_size_));
    int r0 = static_cast<int>(std::floor((bbox.y0 - origin_y_) / cell_size_));
    int r1 = static_cast<int>(std::floor((bbox.y1 - origin_y_) / cell_size_));
    c0 = std::max(c0, 0);
    r0 = std::max(r0, 0);
    c1 = std::min(c1, n_cols_ - 1);
    r1 = std::min(r1, n_rows_ - 1);
    std::vector<int> out;
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            int id = r * n_cols_ + c;
            if (is_retained(id)) out.push_back(id);
        }
    }
    return out;
}

void Grid::rebuild_index() {
    index_.clear();
    index_.reserve(cells_.size());
    for (size_t i = 0; i < cells_.size(); ++i) index_[cells_[i].cell_id] = i;
}

Grid build_grid(const Rect& extent, double cell_size_m,
                std::optional<Point> origin) {
    if (!(std::isfinite(extent.x0) && std::isfinite(extent.y0) &&
          std::isfinite(extent.x1) && std::isfinite(extent.y1)) ||
        extent.x1 <= extent.x0 || extent.y1 <= extent.y0) {
        throw std::runtime_error("grid: non-finite or empty extent");
    }
    if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) {
        throw std::runtime_error("grid: cell size must be > 0");
    }
    Grid g;
    g.cell_size_ = cell_size_m;
    if (origin) {
        // Snap onto the reference lattice so a national grid can be matched.
        g.origin_x_ = origin->x +
                      std::floor((extent.x0 - origin->x) / cell_size_m) * cell_size_m;
        g.origin_y_ = origin->y +
                      std::floor((extent.y0 - origin->y) / cell_size_m) * cell_size_m;
    } else {
        g.origin_x_ = extent.x0;
        g.origin_y_ = extent.y0;
    }
    g.n_cols_ = static_cast<int>(std::ceil((extent.x1 - g.origin_x_) / cell_size_m));
    g.n_rows_ = static_cast<int>(std::ceil((extent.y1 - g.origin_y_) / cell_size_m));
    if (g.n_cols_ <= 0 || g.n_rows_ <= 0) {
        throw std::runtime_error("grid: empty tiling");
    }
    g.cells_.reserve(static_cast<size_t>(g.n_cols_) * g.n_rows_);
    for (int id = 0; id < g.n_rows_ * g.n_cols_; ++id) {
        g.cells_.push_back(GridCell{id, 1.0, std::nullopt, std::nullopt});
    }
    g.rebuild_index();
    return g;
}

void compute_region_fractions(Grid& grid,
                              const std::vector<PolygonShape>& region) {
    for (GridCell& cell : grid.cells()) {
        Rect rect = grid.cell_rect(cell.cell_id);
        cell.region_fraction = coverage_area_in_rect(region, rect) / rect.area();
    }
}

Grid prune_border_cells(Grid grid, double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw std::runtime_error("grid: border threshold must be in [0,1]");
    }
    std::vector<GridCell> kept;
    kept.reserve(grid.cells_.size());
    for (const GridCell& c : grid.cells_) {
        if (c.region_fraction >= threshold) kept.push_back(c);
    }
    grid.cells_ = std::move(kept);
    grid.rebuild_index();
    return grid;
}

std::optional<int> assign_record_to_cell(const Geometry& geometry,
                                         const Grid& grid) {
    if (geometry.kind == GeomKind::point) {
        return grid.cell_containing(geometry.point);
    }
    std::vector<int> candidates = grid.cells_overlapping(bbox_of(geometry));
    std::optional<int> best;
    double best_measure = 0.0;
    for (int id : candidates) {  // ascending id: strict > keeps the lowest
        Rect rect = grid.cell_rect(id);
        double measure =
            geometry.kind == GeomKind::polygon
                ? clipped_polygon_area(geometry.polygon, rect)
                : polyline_length_in_rect(geometry.line, rect);
        if (measure > best_measure) {
            best_measure = measure;
            best = id;
        }
    }
    if (best) return best;
    // Zero-measure geometries (e.g. a linestring lying on a cell edge) fall
    // back to point containment of the first vertex.
    const Point* p = nullptr;
    if (geometry.kind == GeomKind::linestring && !geometry.line.empty()) {
        p = &geometry.line[0];
    } else if (geometry.kind == GeomKind::polygon &&
               !geometry.polygon.rings.empty() &&
               !geometry.polygon.rings[0].empty()) {
        p = &geometry.polygon.rings[0][0];
    }
    if (p) return grid.cell_containing(*p);
    return std::nullopt;
}

namespace {

std::string majority_zone(const ZoneLayer& layer, const Rect& rect) {
    std::string best = "unassigned";
    double best_area = 0.0;
    for (const auto& [name, polys] : layer.zones) {  // map order: name asc
        double a = coverage_area_in_rect(polys, rect);
        if (a > best_area) {
            best_area = a;
            best = name;
        }
    }
    return best;
}

}  // namespace

void assign_cell_attributes(Grid& grid, const ZoneLayer& ex_regions,
                            const ZoneLayer& biogeo_units) {
    for (GridCell& cell : grid.cells()) {
        Rect rect = grid.cell_rect(cell.cell_id);
        cell.ex_region = majority_zone(ex_regions, rect);
        cell.biogeo_unit = majority_zone(biogeo_units, rect);
    }
}

Json grid_to_geojson(const Grid& grid) {
    std::vector<Json> features;
    features.reserve(grid.cells().size());
    for (const GridCell& cell : grid.cells()) {
        Rect r = grid.cell_rect(cell.cell_id);
        Json geom;
        geom["type"] = "Polygon";
        geom["coordinates"] = Json::array({Json::array({
            Json::array({r.x0, r.y0}),
            Json::array({r.x1, r.y0}),
            Json::array({r.x1, r.y1}),
            Json::array({r.x0, r.y1}),
            Json::array({r.x0, r.y0}),
        })});
        Json props;
        props["cell_id"] = cell.cell_id;
        props["region_fraction"] = cell.region_fraction;
        props["ex_region"] = cell.ex_region ? Json(*cell.ex_region) : Json();
        props["biogeo_unit"] = cell.biogeo_unit ? Json(*cell.biogeo_unit) : Json();
        Json feature;
        feature["type"] = "Feature";
        feature["geometry"] = std::move(geom);
        feature["properties"] = std::move(props);
        features.push_back(std::move(feature));
    }
    Json doc = make_feature_collection(std::move(features));
    doc["x_grid"] = Json{{"origin_x", grid.origin_x()},
                         {"origin_y", grid.origin_y()},
                         {"cell_size_m", grid.cell_size_m()},
                         {"n_rows", grid.n_rows()},
                         {"n_cols", grid.n_cols()}};
    return doc;
}

Grid grid_from_geojson(const Json& doc) {
    if (!doc.contains("x_grid")) {
        throw std::runtime_error("grid geojson: missing x_grid member");
    }
    const Json& meta = doc.at("x_grid");
    Grid g;
    g.origin_x_ = meta.at("origin_x").get<double>();
    g.origin_y_ = meta.at("origin_y").get<double>();
    g.cell_size_ = meta.at("cell_size_m").get<double>();
    g.n_rows_ = meta.at("n_rows").get<int>();
    g.n_cols_ = meta.at("n_cols").get<int>();
    g.cells_.clear();
    for (const auto& f : doc.at("features")) {
        const Json& props = f.at("properties");
        GridCell cell;
        cell.cell_id = props.at("cell_id").get<int>();
        cell.region_fraction = props.at("region_fraction").get<double>();
        if (props.contains("ex_region") && props.at("ex_region").is_string()) {
            cell.ex_region = props.at("ex_region").get<std::string>();
        }
        if (props.contains("biogeo_unit") && props.at("biogeo_unit").is_string()) {
            cell.biogeo_unit = props.at("biogeo_unit").get<std::string>();
        }
        g.cells_.push_back(std::move(cell));
    }
    std::sort(g.cells_.begin(), g.cells_.end(),
              [](const GridCell& a, const GridCell& b) {
                  return a.cell_id < b.cell_id;
              });
    g.rebuild_index();
    return g;
}

}  // namespace gapmap
