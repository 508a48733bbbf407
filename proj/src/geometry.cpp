#include "gapmap/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace gapmap {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orient_sign(const Point& o, const Point& a, const Point& b) {
    double c = cross(o, a, b);
    return (c > 0) - (c < 0);
}

bool point_on_segment(const Point& p, const Point& a, const Point& b) {
    if (cross(a, b, p) != 0.0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
           p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

// Even-odd crossing parity over one ring, boundary excluded.
bool ray_parity(const Point& p, const Ring& ring) {
    bool inside = false;
    size_t n = ring.size();
    for (size_t i = 0; i < n; ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xint = a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

Rect bbox_of(const std::vector<Point>& pts) {
    Rect r{std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
    for (const Point& p : pts) {
        r.x0 = std::min(r.x0, p.x);
        r.y0 = std::min(r.y0, p.y);
        r.x1 = std::max(r.x1, p.x);
        r.y1 = std::max(r.y1, p.y);
    }
    return r;
}

Rect bbox_of(const Geometry& g) {
    switch (g.kind) {
        case GeomKind::point:
            return Rect{g.point.x, g.point.y, g.point.x, g.point.y};
        case GeomKind::linestring:
            return bbox_of(g.line);
        case GeomKind::polygon: {
            Rect r = bbox_of(g.polygon.rings.empty() ? Ring{} : g.polygon.rings[0]);
            return r;
        }
    }
    return {};
}

double shoelace_area(const Ring& ring) {
    double s = 0.0;
    size_t n = ring.size();
    if (n < 3) return 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return std::abs(s) * 0.5;
}

double polygon_area(const PolygonShape& poly) {
    if (poly.rings.empty()) return 0.0;
    double a = shoelace_area(poly.rings[0]);
    for (size_t i = 1; i < poly.rings.size(); ++i) a -= shoelace_area(poly.rings[i]);
    return std::max(a, 0.0);
}

double polyline_length(const std::vector<Point>& pts) {
    double len = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) {
        len += std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    }
    return len;
}

double Geometry::area_m2() const {
    return kind == GeomKind::polygon ? polygon_area(polygon) : 0.0;
}

double Geometry::length_m() const {
    return kind == GeomKind::linestring ? polyline_length(line) : 0.0;
}

bool Geometry::finite() const {
    auto ok = [](const Point& p) {
        return std::isfinite(p.x) && std::isfinite(p.y);
    };
    switch (kind) {
        case GeomKind::point:
            return ok(point);
        case GeomKind::linestring:
            return !line.empty() && std::all_of(line.begin(), line.end(), ok);
        case GeomKind::polygon:
            if (polygon.rings.empty()) return false;
            for (const Ring& r : polygon.rings) {
                if (r.empty() || !std::all_of(r.begin(), r.end(), ok)) return false;
            }
            return true;
    }
    return false;
}

bool point_on_ring_boundary(const Point& p, const Ring& ring) {
    size_t n = ring.size();
    for (size_t i = 0; i < n; ++i) {
        if (point_on_segment(p, ring[i], ring[(i + 1) % n])) return true;
    }
    return false;
}

bool point_in_polygon(const Point& p, const PolygonShape& poly) {
    bool parity = false;
    for (const Ring& ring : poly.rings) {
        if (point_on_ring_boundary(p, ring)) return true;
        if (ray_parity(p, ring)) parity = !parity;
    }
    return parity;
}

bool segments_properly_cross(const Point& a, const Point& b, const Point& c,
                             const Point& d) {
    int d1 = orient_sign(c, d, a);
    int d2 = orient_sign(c, d, b);
    int d3 = orient_sign(a, b, c);
    int d4 = orient_sign(a, b, d);
    return d1 * d2 < 0 && d3 * d4 < 0;
}

namespace {

const std::vector<Point>* geometry_vertices(const Geometry& g,
                                            std::vector<Point>& scratch) {
    switch (g.kind) {
        case GeomKind::point:
            scratch = {g.point};
            return &scratch;
        case GeomKind::linestring:
            return &g.line;
        case GeomKind::polygon:
            scratch.clear();
            for (const Ring& r : g.polygon.rings)
                scratch.insert(scratch.end(), r.begin(), r.end());
            return &scratch;
    }
    return &scratch;
}

void geometry_edges(const Geometry& g,
                    std::vector<std::pair<Point, Point>>& edges) {
    edges.clear();
    if (g.kind == GeomKind::linestring) {
        for (size_t i = 1; i < g.line.size(); ++i)
            edges.emplace_back(g.line[i - 1], g.line[i]);
    } else if (g.kind == GeomKind::polygon) {
        for (const Ring& r : g.polygon.rings) {
            size_t n = r.size();
            for (size_t i = 0; i < n; ++i) edges.emplace_back(r[i], r[(i + 1) % n]);
        }
    }
}

}  // namespace

bool geometry_entirely_inside(const Geometry& g, const PolygonShape& boundary) {
    std::vector<Point> scratch;
    const std::vector<Point>* verts = geometry_vertices(g, scratch);
    for (const Point& p : *verts) {
        if (!point_in_polygon(p, boundary)) return false;
    }
    std::vector<std::pair<Point, Point>> edges;
    geometry_edges(g, edges);
    for (const auto& [a, b] : edges) {
        Point mid{(a.x + b.x) * 0.5, (a.y + b.y) * 0.5};
        if (!point_in_polygon(mid, boundary)) return false;
        for (const Ring& ring : boundary.rings) {
            size_t n = ring.size();
            for (size_t i = 0; i < n; ++i) {
                if (segments_properly_cross(a, b, ring[i], ring[(i + 1) % n]))
                    return false;
            }
        }
    }
    return true;
}

namespace {

enum class ClipSide { left, right, bottom, top };

bool inside_side(const Point& p, const Rect& r, ClipSide s) {
    switch (s) {
        case ClipSide::left: return p.x >= r.x0;
        case ClipSide::right: return p.x <= r.x1;
        case ClipSide::bottom: return p.y >= r.y0;
        case ClipSide::top: return p.y <= r.y1;
    }
    return false;
}

Point intersect_side(const Point& a, const Point& b, const Rect& r, ClipSide s) {
    double t = 0.0;
    switch (s) {
        case ClipSide::left: t = (r.x0 - a.x) / (b.x - a.x); break;
        case ClipSide::right: t = (r.x1 - a.x) / (b.x - a.x); break;
        case ClipSide::bottom: t = (r.y0 - a.y) / (b.y - a.y); break;
        case ClipSide::top: t = (r.y1 - a.y) / (b.y - a.y); break;
    }
    Point p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    // Pin the clipped coordinate exactly onto the clip line.
    switch (s) {
        case ClipSide::left: p.x = r.x0; break;
        case ClipSide::right: p.x = r.x1; break;
        case ClipSide::bottom: p.y = r.y0; break;
        case ClipSide::top: p.y = r.y1; break;
    }
    return p;
}

}  // namespace

Ring clip_ring_to_rect(const Ring& ring, const Rect& rect) {
    Ring current = ring;
    for (ClipSide side : {ClipSide::left, ClipSide::right, ClipSide::bottom,
                          ClipSide::top}) {
        if (current.empty()) break;
        Ring next;
        next.reserve(current.size() + 4);
        size_t n = current.size();
        for (size_t i = 0; i < n; ++i) {
            const Point& a = current[i];
            const Point& b = current[(i + 1) % n];
            bool ain = inside_side(a, rect, side);
            bool bin = inside_side(b, rect, side);
            if (ain) {
                next.push_back(a);
                if (!bin) next.push_back(intersect_side(a, b, rect, side));
            } else if (bin) {
                next.push_back(intersect_side(a, b, rect, side));
            }
        }
        current = std::move(next);
    }
    return current;
}

double clipped_polygon_area(const PolygonShape& poly, const Rect& rect) {
    if (poly.rings.empty()) return 0.0;
    double a = shoelace_area(clip_ring_to_rect(poly.rings[0], rect));
    for (size_t i = 1; i < poly.rings.size(); ++i)
        a -= shoelace_area(clip_ring_to_rect(poly.rings[i], rect));
    return std::max(a, 0.0);
}

double polyline_length_in_rect(const std::vector<Point>& pts, const Rect& rect) {
    double total = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) {
        const Point& a = pts[i - 1];
        const Point& b = pts[i];
        double dx = b.x - a.x, dy = b.y - a.y;
        double t0 = 0.0, t1 = 1.0;
        bool keep = true;
        // Liang-Barsky parameter clipping.
        const double p[4] = {-dx, dx, -dy, dy};
        const double q[4] = {a.x - rect.x0, rect.x1 - a.x, a.y - rect.y0,
                             rect.y1 - a.y};
        for (int k = 0; k < 4 && keep; ++k) {
            if (p[k] == 0.0) {
                if (q[k] < 0.0) keep = false;
            } else {
                double t = q[k] / p[k];
                if (p[k] < 0.0) t0 = std::max(t0, t);
                else t1 = std::min(t1, t);
                if (t0 > t1) keep = false;
            }
        }
        if (keep) total += std::hypot(dx, dy) * (t1 - t0);
    }
    return total;
}

double segment_length_in_disc(const Point& a, const Point& b, const Point& c,
                              double r) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double fx = a.x - c.x, fy = a.y - c.y;
    double A = dx * dx + dy * dy;
    if (A == 0.0) return 0.0;
    double B = 2.0 * (fx * dx + fy * dy);
    double C = fx * fx + fy * fy - r * r;
    double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0) return 0.0;
    double s = std::sqrt(disc);
    double t0 = std::max(0.0, (-B - s) / (2.0 * A));
    double t1 = std::min(1.0, (-B + s) / (2.0 * A));
    if (t1 <= t0) return 0.0;
    return std::sqrt(A) * (t1 - t0);
}

namespace {

struct CovEdge {
    Point a, b;      // a.x <= b.x after normalization where possible
    int poly = 0;    // owning polygon index
};

// Crossing y of an edge with the vertical line X = x; the edge is counted
// with the half-open convention (a.x > x) != (b.x > x).
bool edge_crossing(const CovEdge& e, double x, double* y) {
    if ((e.a.x > x) == (e.b.x > x)) return false;
    *y = e.a.y + (e.b.y - e.a.y) * (x - e.a.x) / (e.b.x - e.a.x);
    return true;
}

std::optional<double> intersection_x(const CovEdge& u, const CovEdge& v) {
    double d1x = u.b.x - u.a.x, d1y = u.b.y - u.a.y;
    double d2x = v.b.x - v.a.x, d2y = v.b.y - v.a.y;
    double den = d1x * d2y - d1y * d2x;
    if (den == 0.0) return std::nullopt;  // parallel/collinear: endpoints suffice
    double wx = v.a.x - u.a.x, wy = v.a.y - u.a.y;
    double t = (wx * d2y - wy * d2x) / den;
    double s = (wx * d1y - wy * d1x) / den;
    if (t < 0.0 || t > 1.0 || s < 0.0 || s > 1.0) return std::nullopt;
    return u.a.x + t * d1x;
}

}  // namespace

double coverage_area_in_rect(const std::vector<PolygonShape>& polys,
                             const Rect& rect) {
    if (rect.width() <= 0.0 || rect.height() <= 0.0) return 0.0;

    std::vector<CovEdge> edges;
    int np = static_cast<int>(polys.size());
    for (int pi = 0; pi < np; ++pi) {
        for (const Ring& ring : polys[pi].rings) {
            size_t n = ring.size();
            for (size_t i = 0; i < n; ++i) {
                const Point& a = ring[i];
                const Point& b = ring[(i + 1) % n];
                if (a.x == b.x && a.y == b.y) continue;
                double lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
                if (hi < rect.x0 || lo > rect.x1) continue;
                edges.push_back({a, b, pi});
            }
        }
    }
    if (edges.empty()) return 0.0;

    std::vector<double> cuts{rect.x0, rect.x1};
    auto add_cut = [&](double x) {
        if (x > rect.x0 && x < rect.x1) cuts.push_back(x);
    };
    for (const CovEdge& e : edges) {
        add_cut(e.a.x);
        add_cut(e.b.x);
        // Crossings with the rect's horizontal boundaries change interval
        // clamping; cut there too.
        for (double ybound : {rect.y0, rect.y1}) {
            if ((e.a.y > ybound) != (e.b.y > ybound)) {
                double t = (ybound - e.a.y) / (e.b.y - e.a.y);
                add_cut(e.a.x + t * (e.b.x - e.a.x));
            }
        }
    }
    for (size_t i = 0; i < edges.size(); ++i) {
        for (size_t j = i + 1; j < edges.size(); ++j) {
            if (auto x = intersection_x(edges[i], edges[j])) add_cut(*x);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<std::vector<double>> ys(np);
    std::vector<std::pair<double, double>> intervals;
    double area = 0.0;
    for (size_t ci = 1; ci < cuts.size(); ++ci) {
        double a = cuts[ci - 1], b = cuts[ci];
        double w = b - a;
        if (w <= 0.0) continue;
        double xm = a + 0.5 * w;
        for (auto& v : ys) v.clear();
        for (const CovEdge& e : edges) {
            double y;
            if (edge_crossing(e, xm, &y)) ys[e.poly].push_back(y);
        }
        intervals.clear();
        for (int pi = 0; pi < np; ++pi) {
            auto& v = ys[pi];
            std::sort(v.begin(), v.end());
            for (size_t k = 1; k < v.size(); k += 2) {
                double lo = std::max(v[k - 1], rect.y0);
                double hi = std::min(v[k], rect.y1);
                if (hi > lo) intervals.emplace_back(lo, hi);
            }
        }
        std::sort(intervals.begin(), intervals.end());
        double covered = 0.0, cur_lo = 0.0, cur_hi = -1.0;
        bool open = false;
        for (const auto& [lo, hi] : intervals) {
            if (!open || lo > cur_hi) {
                if (open) covered += cur_hi - cur_lo;
                cur_lo = lo;
                cur_hi = hi;
                open = true;
            } else {
                cur_hi = std::max(cur_hi, hi);
            }
        }
        if (open) covered += cur_hi - cur_lo;
        area += covered * w;
    }
    return area;
}

bool ring_is_simple(const Ring& ring) {
    size_t n = ring.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // Skip adjacent edges (shared vertex).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_cross(ring[i], ring[(i + 1) % n], ring[j],
                                        ring[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

namespace {

void skip_ws(const std::string& s, size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

bool parse_number(const std::string& s, size_t& i, double* out) {
    skip_ws(s, i);
    const char* begin = s.data() + i;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(begin, end, *out);
    if (ec != std::errc{} || p == begin) return false;
    i = static_cast<size_t>(p - s.data());
    return true;
}

bool parse_coord_list(const std::string& s, size_t& i, std::vector<Point>* pts,
                      std::string* error) {
    skip_ws(s, i);
    if (i >= s.size() || s[i] != '(') {
        *error = "expected '('";
        return false;
    }
    ++i;
    while (true) {
        Point p;
        if (!parse_number(s, i, &p.x) || !parse_number(s, i, &p.y)) {
            *error = "bad coordinate";
            return false;
        }
        pts->push_back(p);
        skip_ws(s, i);
        if (i < s.size() && s[i] == ',') {
            ++i;
            continue;
        }
        break;
    }
    skip_ws(s, i);
    if (i >= s.size() || s[i] != ')') {
        *error = "expected ')'";
        return false;
    }
    ++i;
    return true;
}

std::string upper_token(const std::string& s, size_t& i) {
    skip_ws(s, i);
    std::string tok;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
        tok.push_back(static_cast<char>(std::toupper(s[i])));
        ++i;
    }
    return tok;
}

bool close_ring(std::vector<Point>& pts, std::string* error) {
    if (pts.size() < 4) {
        *error = "ring needs at least 4 coordinates";
        return false;
    }
    if (!(pts.front() == pts.back())) {
        *error = "ring not closed";
        return false;
    }
    pts.pop_back();
    return true;
}

}  // namespace

std::optional<Geometry> parse_wkt(const std::string& text, std::string* error) {
    std::string err_local;
    if (!error) error = &err_local;
    size_t i = 0;
    std::string tag = upper_token(text, i);
    Geometry g;
    if (tag == "POINT") {
        std::vector<Point> pts;
        if (!parse_coord_list(text, i, &pts, error)) return std::nullopt;
        if (pts.size() != 1) {
            *error = "point needs exactly one coordinate";
            return std::nullopt;
        }
        g.kind = GeomKind::point;
        g.point = pts[0];
    } else if (tag == "LINESTRING") {
        if (!parse_coord_list(text, i, &g.line, error)) return std::nullopt;
        if (g.line.size() < 2) {
            *error = "degenerate linestring";
            return std::nullopt;
        }
        g.kind = GeomKind::linestring;
    } else if (tag == "POLYGON") {
        skip_ws(text, i);
        if (i >= text.size() || text[i] != '(') {
            *error = "expected '('";
            return std::nullopt;
        }
        ++i;
        while (true) {
            std::vector<Point> pts;
            if (!parse_coord_list(text, i, &pts, error)) return std::nullopt;
            if (!close_ring(pts, error)) return std::nullopt;
            if (!ring_is_simple(pts)) {
                *error = "self-intersecting ring";
                return std::nullopt;
            }
            g.polygon.rings.push_back(std::move(pts));
            skip_ws(text, i);
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            break;
        }
        skip_ws(text, i);
        if (i >= text.size() || text[i] != ')') {
            *error = "expected ')'";
            return std::nullopt;
        }
        ++i;
        g.kind = GeomKind::polygon;
    } else {
        *error = "unsupported geometry type '" + tag + "'";
        return std::nullopt;
    }
    skip_ws(text, i);
    if (i != text.size()) {
        *error = "trailing characters";
        return std::nullopt;
    }
    if (!g.finite()) {
        *error = "non-finite coordinates";
        return std::nullopt;
    }
    return g;
}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        auto [p, ec] = std::from_chars(buf, buf + std::strlen(buf), back);
        (void)p;
        if (ec == std::errc{} && back == v) return buf;
    }
    return buf;
}

namespace {

void append_coords(std::string& out, const std::vector<Point>& pts,
                   bool close) {
    out.push_back('(');
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ", ";
        out += format_double(pts[i].x);
        out.push_back(' ');
        out += format_double(pts[i].y);
    }
    if (close && !pts.empty()) {
        out += ", ";
        out += format_double(pts[0].x);
        out.push_back(' ');
        out += format_double(pts[0].y);
    }
    out.push_back(')');
}

}  // namespace

std::string to_wkt(const Geometry& g) {
    std::string out;
    switch (g.kind) {
        case GeomKind::point:
            out = "POINT ";
            append_coords(out, {g.point}, false);
            break;
        case GeomKind::linestring:
            out = "LINESTRING ";
            append_coords(out, g.line, false);
            break;
        case GeomKind::polygon:
            out = "POLYGON (";
            for (size_t i = 0; i < g.polygon.rings.size(); ++i) {
                if (i) out += ", ";
                append_coords(out, g.polygon.rings[i], true);
            }
            out.push_back(')');
            break;
    }
    return out;
}

}  // namespace gapmap
