#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "lifmoran/errors.hpp"
#include "lifmoran/formats.hpp"

namespace lifmoran {

namespace {

using nlohmann::json;

std::string key_as_text(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

template <typename T>
json column_value(const std::vector<T>& column, std::size_t index) {
    if (column.empty()) return nullptr;
    return column[index];
}

}  // namespace

GeoJsonJoin join_geojson(const std::string& geojson_text, const std::string& key_property,
                         std::span<const std::string> ids, const ResultColumns& results) {
    json doc;
    try {
        doc = json::parse(geojson_text);
    } catch (const json::parse_error& e) {
        throw MalformedGeoJson(std::string("GeoJSON parse error: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array()) {
        throw MalformedGeoJson("expected a FeatureCollection with a features array");
    }

    auto check = [&](const auto& column, const char* name) {
        if (!column.empty() && column.size() != ids.size()) {
            throw DimensionMismatch(std::string("join_geojson: column '") + name + "' has " +
                                    std::to_string(column.size()) + " entries for " +
                                    std::to_string(ids.size()) + " ids");
        }
    };
    check(results.lif, "lif");
    check(results.lif_rank, "lif_rank");
    check(results.local_i, "local_i");
    check(results.lisa_p, "lisa_p");
    check(results.quadrant, "quadrant");

    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < ids.size(); ++i) index_of.emplace(ids[i], i);

    GeoJsonJoin join;
    std::size_t feature_number = 0;
    for (auto& feature : doc["features"]) {
        ++feature_number;
        if (!feature.is_object()) {
            throw MalformedGeoJson("feature " + std::to_string(feature_number) +
                                   " is not an object");
        }
        json& properties = feature["properties"];
        if (properties.is_null()) properties = json::object();
        if (!properties.contains(key_property)) {
            throw JoinKeyMissing("feature " + std::to_string(feature_number) +
                                 " lacks join key property '" + key_property + "'");
        }

        const std::string key = key_as_text(properties[key_property]);
        const auto it = index_of.find(key);
        if (it == index_of.end()) {
            ++join.unmatched;
            properties["lif"] = nullptr;
            properties["lif_rank"] = nullptr;
            properties["local_i"] = nullptr;
            properties["lisa_p"] = nullptr;
            properties["quadrant"] = nullptr;
            continue;
        }
        const std::size_t i = it->second;
        properties["lif"] = column_value(results.lif, i);
        properties["lif_rank"] = column_value(results.lif_rank, i);
        properties["local_i"] = column_value(results.local_i, i);
        properties["lisa_p"] = column_value(results.lisa_p, i);
        properties["quadrant"] = column_value(results.quadrant, i);
    }

    join.text = doc.dump(2);
    join.text.push_back('\n');
    return join;
}

}  // namespace lifmoran
