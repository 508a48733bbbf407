#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gapmap {

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

// A ring is stored without the duplicate closing vertex; the closing edge
// back to the first vertex is implicit.
using Ring = std::vector<Point>;

// Even-odd polygon: rings[0] is the outer boundary, the rest are holes.
struct PolygonShape {
    std::vector<Ring> rings;
};

enum class GeomKind { point, linestring, polygon };

struct Geometry {
    GeomKind kind = GeomKind::point;
    Point point;
    std::vector<Point> line;  // linestring vertices, >= 2
    PolygonShape polygon;

    double area_m2() const;    // polygons only, 0 otherwise
    double length_m() const;   // linestrings only, 0 otherwise
    bool finite() const;
};

struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    bool contains_closed(const Point& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};

Rect bbox_of(const std::vector<Point>& pts);
Rect bbox_of(const Geometry& g);

double shoelace_area(const Ring& ring);          // absolute area
double polygon_area(const PolygonShape& poly);   // outer minus holes
double polyline_length(const std::vector<Point>& pts);

// Boundary counts as inside for every containment test below.
bool point_on_ring_boundary(const Point& p, const Ring& ring);
bool point_in_polygon(const Point& p, const PolygonShape& poly);

// True when the two open segments cross at a single interior point.
bool segments_properly_cross(const Point& a, const Point& b, const Point& c,
                             const Point& d);

// "Entirely located": every vertex inside-or-on the boundary polygon and no
// geometry edge properly crossing any boundary edge. Edge midpoints are
// checked as well to catch exits through a boundary vertex.
bool geometry_entirely_inside(const Geometry& g, const PolygonShape& boundary);

// Sutherland-Hodgman clip of one ring against an axis-aligned rectangle.
Ring clip_ring_to_rect(const Ring& ring, const Rect& rect);

// Area of polygon-with-holes intersected with the rectangle (clip per ring,
// outer minus holes).
double clipped_polygon_area(const PolygonShape& poly, const Rect& rect);

// Total polyline length inside the rectangle (Liang-Barsky per segment).
double polyline_length_in_rect(const std::vector<Point>& pts, const Rect& rect);

// Length of the segment [a,b] inside the disc of radius r around c.
double segment_length_in_disc(const Point& a, const Point& b, const Point& c,
                              double r);

// Exact area of rect covered by the union of the polygons (holes respected,
// overlaps not double-counted). Vertical slab sweep with cuts at every edge
// endpoint, edge-edge crossing and rect-boundary crossing.
double coverage_area_in_rect(const std::vector<PolygonShape>& polys,
                             const Rect& rect);

// Ring sanity used by the parsers: at least 3 vertices and no two
// non-adjacent edges properly crossing.
bool ring_is_simple(const Ring& ring);

// WKT (POINT / LINESTRING / POLYGON). Parse errors come back as messages.
std::optional<Geometry> parse_wkt(const std::string& text, std::string* error);
std::string to_wkt(const Geometry& g);

// Shortest decimal form that round-trips through parse.
std::string format_double(double v);

}  // namespace gapmap
