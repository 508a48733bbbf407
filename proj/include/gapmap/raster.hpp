#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gapmap/geometry.hpp"

namespace gapmap {

// Regular planar raster. Storage follows the ASCII-grid convention: values
// are row-major with the FIRST row northernmost. value(col, row) indexes
// rows from the top; pixel_center converts back to map coordinates.
struct RasterLayer {
    double x_ll = 0.0;
    double y_ll = 0.0;
    double cell_size_m = 1.0;
    int n_cols = 0;
    int n_rows = 0;
    double nodata = -9999.0;
    std::vector<double> values;  // n_rows * n_cols

    double value(int col, int row_from_top) const {
        return values[static_cast<size_t>(row_from_top) * n_cols + col];
    }
    double& value(int col, int row_from_top) {
        return values[static_cast<size_t>(row_from_top) * n_cols + col];
    }
    bool is_nodata(double v) const { return v == nodata; }

    Point pixel_center(int col, int row_from_top) const {
        return Point{x_ll + (col + 0.5) * cell_size_m,
                     y_ll + (n_rows - row_from_top - 0.5) * cell_size_m};
    }

    Rect extent() const {
        return Rect{x_ll, y_ll, x_ll + n_cols * cell_size_m,
                    y_ll + n_rows * cell_size_m};
    }

    void validate() const;  // throws on inconsistent dimensions
};

// Header lines: ncols, nrows, xllcorner, yllcorner, cellsize, NODATA_value.
RasterLayer read_ascii_grid(std::istream& in);
RasterLayer read_ascii_grid_file(const std::string& path);
void write_ascii_grid(std::ostream& out, const RasterLayer& raster);

}  // namespace gapmap
