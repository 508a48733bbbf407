#include "gapmap/geojson.hpp"

#include <fstream>
#include <stdexcept>

namespace gapmap {

namespace {

Point coord_from_json(const Json& c) {
    if (!c.is_array() || c.size() < 2) {
        throw std::runtime_error("geojson: bad coordinate");
    }
    return Point{c[0].get<double>(), c[1].get<double>()};
}

Ring ring_from_json(const Json& arr) {
    Ring ring;
    for (const auto& c : arr) ring.push_back(coord_from_json(c));
    if (ring.size() < 4 || !(ring.front() == ring.back())) {
        throw std::runtime_error("geojson: ring not closed");
    }
    ring.pop_back();
    if (!ring_is_simple(ring)) {
        throw std::runtime_error("geojson: self-intersecting ring");
    }
    return ring;
}

PolygonShape polygon_from_json(const Json& coords) {
    PolygonShape poly;
    for (const auto& ring : coords) poly.rings.push_back(ring_from_json(ring));
    if (poly.rings.empty()) throw std::runtime_error("geojson: empty polygon");
    return poly;
}

Json ring_to_json(const Ring& ring) {
    Json arr = Json::array();
    for (const Point& p : ring) arr.push_back(Json::array({p.x, p.y}));
    if (!ring.empty()) arr.push_back(Json::array({ring[0].x, ring[0].y}));
    return arr;
}

}  // namespace

Geometry geometry_from_geojson(const Json& geom) {
    if (!geom.is_object() || !geom.contains("type")) {
        throw std::runtime_error("geojson: geometry missing type");
    }
    const std::string type = geom.at("type").get<std::string>();
    const Json& coords = geom.at("coordinates");
    Geometry g;
    if (type == "Point") {
        g.kind = GeomKind::point;
        g.point = coord_from_json(coords);
    } else if (type == "LineString") {
        g.kind = GeomKind::linestring;
        for (const auto& c : coords) g.line.push_back(coord_from_json(c));
        if (g.line.size() < 2) throw std::runtime_error("geojson: degenerate linestring");
    } else if (type == "Polygon") {
        g.kind = GeomKind::polygon;
        g.polygon = polygon_from_json(coords);
    } else {
        throw std::runtime_error("geojson: unsupported geometry type '" + type + "'");
    }
    if (!g.finite()) throw std::runtime_error("geojson: non-finite coordinates");
    return g;
}

Json geometry_to_geojson(const Geometry& g) {
    Json out;
    switch (g.kind) {
        case GeomKind::point:
            out["type"] = "Point";
            out["coordinates"] = Json::array({g.point.x, g.point.y});
            break;
        case GeomKind::linestring: {
            out["type"] = "LineString";
            Json arr = Json::array();
            for (const Point& p : g.line) arr.push_back(Json::array({p.x, p.y}));
            out["coordinates"] = arr;
            break;
        }
        case GeomKind::polygon: {
            out["type"] = "Polygon";
            Json arr = Json::array();
            for (const Ring& r : g.polygon.rings) arr.push_back(ring_to_json(r));
            out["coordinates"] = arr;
            break;
        }
    }
    return out;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return doc;
}

std::vector<Feature> read_feature_collection(const Json& doc) {
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
        throw std::runtime_error("geojson: expected FeatureCollection");
    }
    std::vector<Feature> out;
    for (const auto& f : doc.at("features")) {
        Feature feat;
        feat.geometry = geometry_from_geojson(f.at("geometry"));
        feat.properties = f.value("properties", Json::object());
        out.push_back(std::move(feat));
    }
    return out;
}

std::vector<Feature> read_feature_collection_file(const std::string& path) {
    return read_feature_collection(load_json_file(path));
}

Json make_feature_collection(std::vector<Json> features) {
    Json out;
    out["type"] = "FeatureCollection";
    out["features"] = std::move(features);
    return out;
}

ZoneLayer ZoneLayer::from_file(const std::string& path,
                               const std::string& name_property) {
    Json doc = load_json_file(path);
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
        throw std::runtime_error(path + ": expected FeatureCollection");
    }
    ZoneLayer layer;
    for (const auto& f : doc.at("features")) {
        const Json& props = f.value("properties", Json::object());
        if (!props.contains(name_property)) {
            throw std::runtime_error(path + ": feature missing '" + name_property +
                                     "' property");
        }
        const std::string name = props.at(name_property).get<std::string>();
        const Json& geom = f.at("geometry");
        const std::string type = geom.value("type", "");
        if (type == "Polygon") {
            layer.zones[name].push_back(polygon_from_json(geom.at("coordinates")));
        } else if (type == "MultiPolygon") {
            for (const auto& part : geom.at("coordinates")) {
                layer.zones[name].push_back(polygon_from_json(part));
            }
        } else {
            throw std::runtime_error(path + ": zone layers must contain polygons");
        }
    }
    return layer;
}

}  // namespace gapmap
