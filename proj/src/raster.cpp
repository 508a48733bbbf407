#include "gapmap/raster.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gapmap {

void RasterLayer::validate() const {
    if (n_cols <= 0 || n_rows <= 0) {
        throw std::runtime_error("raster: dimensions must be positive");
    }
    if (!(cell_size_m > 0.0)) {
        throw std::runtime_error("raster: cell size must be > 0");
    }
    if (values.size() != static_cast<size_t>(n_cols) * n_rows) {
        throw std::runtime_error("raster: value count does not match dimensions");
    }
}

RasterLayer read_ascii_grid(std::istream& in) {
    RasterLayer r;
    bool have[6] = {};
    for (int i = 0; i < 6; ++i) {
        std::string key;
        if (!(in >> key)) throw std::runtime_error("raster: truncated header");
        for (char& c : key) c = static_cast<char>(std::tolower(c));
        double v;
        if (!(in >> v)) throw std::runtime_error("raster: bad header value");
        if (key == "ncols") { r.n_cols = static_cast<int>(v); have[0] = true; }
        else if (key == "nrows") { r.n_rows = static_cast<int>(v); have[1] = true; }
        else if (key == "xllcorner") { r.x_ll = v; have[2] = true; }
        else if (key == "yllcorner") { r.y_ll = v; have[3] = true; }
        else if (key == "cellsize") { r.cell_size_m = v; have[4] = true; }
        else if (key == "nodata_value") { r.nodata = v; have[5] = true; }
        else throw std::runtime_error("raster: unknown header key '" + key + "'");
    }
    for (bool h : have) {
        if (!h) throw std::runtime_error("raster: incomplete header");
    }
    if (r.n_cols <= 0 || r.n_rows <= 0 || !(r.cell_size_m > 0.0)) {
        throw std::runtime_error("raster: bad dimensions");
    }
    size_t n = static_cast<size_t>(r.n_cols) * r.n_rows;
    r.values.resize(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(in >> r.values[i])) throw std::runtime_error("raster: truncated values");
    }
    return r;
}

RasterLayer read_ascii_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return read_ascii_grid(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_ascii_grid(std::ostream& out, const RasterLayer& raster) {
    raster.validate();
    out << "ncols " << raster.n_cols << "\n";
    out << "nrows " << raster.n_rows << "\n";
    out << "xllcorner " << format_double(raster.x_ll) << "\n";
    out << "yllcorner " << format_double(raster.y_ll) << "\n";
    out << "cellsize " << format_double(raster.cell_size_m) << "\n";
    out << "NODATA_value " << format_double(raster.nodata) << "\n";
    for (int row = 0; row < raster.n_rows; ++row) {
        for (int col = 0; col < raster.n_cols; ++col) {
            if (col) out << ' ';
            out << format_double(raster.value(col, row));
        }
        out << "\n";
    }
}

}  // namespace gapmap
