#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "lifmoran/errors.hpp"
#include "lifmoran/formats.hpp"

using namespace lifmoran;
using nlohmann::json;

TEST_SUITE_BEGIN("formats");

namespace {

Dataset parse_csv(const std::string& text, const std::string& id_col = "id",
                  const std::string& value_col = "value") {
    std::istringstream in(text);
    return read_attribute_csv(in, "test.csv", id_col, value_col);
}

// Minimal well-formedness check: every opened tag is closed in order.
bool xml_balanced(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        const std::size_t end = text.find('>', pos);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        if (tag.back() == '/') continue;  // self-closing
        if (tag[0] == '/') {
            const std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else {
            const std::size_t space = tag.find_first_of(" \t\n");
            stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
        }
    }
    return stack.empty();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("columbus attribute file: 39 rows, known extremes") {
    const auto dataset = read_attribute_csv(std::string(LIFMORAN_DATA_DIR) +
                                                "/columbus_hoval.csv",
                                            "POLYID", "HOVAL");
    REQUIRE(dataset.size() == 39);
    CHECK(dataset.skipped_missing == 0);
    CHECK(*std::min_element(dataset.values.begin(), dataset.values.end()) ==
          17.9);
    CHECK(*std::max_element(dataset.values.begin(), dataset.values.end()) ==
          96.4);
}

TEST_CASE("empty data section is an error") {
    CHECK_THROWS_AS(parse_csv("id,value\n"), EmptyDataset);
    CHECK_THROWS_AS(parse_csv(""), EmptyDataset);
}

TEST_CASE("duplicate ids are rejected by name") {
    try {
        parse_csv("id,value\na,1\nb,2\na,3\n");
        FAIL("expected DuplicateId");
    } catch (const DuplicateId& e) {
        CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
}

TEST_CASE("non-numeric values are rejected with the row number") {
    try {
        parse_csv("id,value\na,1\nb,oops\n");
        FAIL("expected NonNumericValue");
    } catch (const NonNumericValue& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
}

TEST_CASE("rows with an empty value cell are skipped and counted") {
    const auto dataset = parse_csv("id,value\na,1\nb,\nc,3\n");
    CHECK(dataset.size() == 2);
    CHECK(dataset.skipped_missing == 1);
    CHECK(dataset.ids == std::vector<std::string>{"a", "c"});
}

TEST_CASE("missing columns are reported") {
    CHECK_THROWS_AS(parse_csv("id,value\na,1\n", "key", "value"), MissingColumn);
    CHECK_THROWS_AS(parse_csv("id,value\na,1\n", "id", "hoval"), MissingColumn);
}

TEST_CASE("quoted fields and CRLF are handled") {
    const auto dataset = parse_csv("id,value\r\n\"a,b\",1.5\r\nc,\"2.5\"\r\n");
    CHECK(dataset.ids == std::vector<std::string>{"a,b", "c"});
    CHECK(dataset.values == std::vector<double>{1.5, 2.5});
}

namespace {

const char* kGeo = R"({
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "properties": {"key": "a"},
     "geometry": {"type": "Point", "coordinates": [1.25, 2.5]}},
    {"type": "Feature", "properties": {"key": "b"},
     "geometry": {"type": "Point", "coordinates": [3.0, 4.0]}},
    {"type": "Feature", "properties": {"key": "zzz"},
     "geometry": {"type": "Point", "coordinates": [5.0, 6.0]}}
  ]
})";

ResultColumns sample_results() {
    ResultColumns results;
    results.lif = {1.5, 2.5};
    results.lif_rank = {2, 1};
    results.local_i = {0.25, -0.5};
    results.lisa_p = {0.04, 0.2};
    results.quadrant = {"HH", "LH"};
    return results;
}

}  // namespace

TEST_CASE("GeoJSON join annotates matched features and counts unmatched ones") {
    const std::vector<std::string> ids = {"a", "b"};
    const auto join = join_geojson(kGeo, "key", ids, sample_results());
    CHECK(join.unmatched == 1);

    const auto doc = json::parse(join.text);
    const auto& features = doc["features"];
    CHECK(features[0]["properties"]["lif"] == 1.5);
    CHECK(features[0]["properties"]["lif_rank"] == 2);
    CHECK(features[0]["properties"]["quadrant"] == "HH");
    CHECK(features[1]["properties"]["lisa_p"] == 0.2);
    CHECK(features[2]["properties"]["lif"].is_null());
    CHECK(features[2]["properties"]["quadrant"].is_null());
}

TEST_CASE("full join has no warnings") {
    const std::vector<std::string> ids = {"a", "b", "zzz"};
    ResultColumns results;
    results.lif = {1.0, 2.0, 3.0};
    const auto join = join_geojson(kGeo, "key", ids, results);
    CHECK(join.unmatched == 0);
    const auto doc = json::parse(join.text);
    CHECK(doc["features"][2]["properties"]["lif"] == 3.0);
    CHECK(doc["features"][2]["properties"]["lisa_p"].is_null());  // column absent
}

TEST_CASE("join leaves geometry untouched (parse-emit-parse)") {
    const std::vector<std::string> ids = {"a", "b"};
    const auto join = join_geojson(kGeo, "key", ids, sample_results());
    const auto original = json::parse(std::string(kGeo));
    const auto annotated = json::parse(join.text);
    for (std::size_t f = 0; f < 3; ++f) {
        CHECK(annotated["features"][f]["geometry"] == original["features"][f]["geometry"]);
    }
}

TEST_CASE("numeric join keys match textual ids") {
    const char* geo = R"({
      "type": "FeatureCollection",
      "features": [
        {"type": "Feature", "properties": {"POLYID": 1},
         "geometry": {"type": "Point", "coordinates": [0.0, 0.0]}},
        {"type": "Feature", "properties": {"POLYID": 2},
         "geometry": {"type": "Point", "coordinates": [1.0, 1.0]}}
      ]
    })";
    const std::vector<std::string> ids = {"1", "2"};
    ResultColumns results;
    results.lif = {0.5, 0.75};
    const auto join = join_geojson(geo, "POLYID", ids, results);
    CHECK(join.unmatched == 0);
    const auto doc = json::parse(join.text);
    CHECK(doc["features"][0]["properties"]["lif"] == 0.5);
    CHECK(doc["features"][1]["properties"]["lif"] == 0.75);
}

TEST_CASE("GeoJSON errors") {
    const std::vector<std::string> ids = {"a"};
    CHECK_THROWS_AS(join_geojson("{not json", "key", ids, {}), MalformedGeoJson);
    CHECK_THROWS_AS(join_geojson(R"({"type": "Feature"})", "key", ids, {}), MalformedGeoJson);
    CHECK_THROWS_AS(join_geojson(kGeo, "absent_key", ids, {}), JoinKeyMissing);
}

TEST_CASE("lattice SVG structure") {
    std::vector<double> values(100);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i % 13);
    const auto svg = render_lattice_svg(values, 10, 10, kInfluencePalette, true);

    CHECK(xml_balanced(svg));
    // 100 cells + 32 legend swatches
    CHECK(count_occurrences(svg, "<rect") == 132);
    CHECK(count_occurrences(svg, "<text") == 5);
    CHECK(svg.find("viewBox=\"0 0 ") != std::string::npos);

    // deterministic bytes
    CHECK(svg == render_lattice_svg(values, 10, 10, kInfluencePalette, true));
}

TEST_CASE("constant values collapse to the low endpoint and a single label") {
    const std::vector<double> values(9, 3.25);
    const auto svg = render_lattice_svg(values, 3, 3, kFieldPalette, true);
    CHECK(count_occurrences(svg, "<text") == 1);
    // every cell carries the low endpoint color
    CHECK(count_occurrences(svg, "fill=\"#f7f7f7\"") >= 9);
    CHECK(xml_balanced(svg));
}

TEST_CASE("SVG dimension mismatch") {
    const std::vector<double> values(7, 1.0);
    CHECK_THROWS_AS(render_lattice_svg(values, 2, 4, kFieldPalette, false), DimensionMismatch);
}

TEST_CASE("format_double round-trips") {
    for (const double v : {0.0, -1.5, 1.0 / 3.0, 96.4, 1e-17, -2.718281828459045}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_SUITE_END();
