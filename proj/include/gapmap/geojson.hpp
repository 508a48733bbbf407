#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapmap/geometry.hpp"

namespace gapmap {

using Json = nlohmann::json;

// Throws std::runtime_error on malformed geometry.
Geometry geometry_from_geojson(const Json& geom);
Json geometry_to_geojson(const Geometry& g);

struct Feature {
    Geometry geometry;
    Json properties;
};

// Reads a FeatureCollection; throws on structural errors.
std::vector<Feature> read_feature_collection(const Json& doc);
std::vector<Feature> read_feature_collection_file(const std::string& path);

Json make_feature_collection(std::vector<Json> features);

// Named polygon layer (ex-regions, biogeographic units, protected areas...).
// A name may own several polygons; lookups keep insertion order out of the
// map's sorted keys for deterministic iteration.
struct ZoneLayer {
    std::map<std::string, std::vector<PolygonShape>> zones;

    static ZoneLayer from_file(const std::string& path,
                               const std::string& name_property = "name");
};

Json load_json_file(const std::string& path);

}  // namespace gapmap
