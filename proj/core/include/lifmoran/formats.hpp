#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lifmoran {

/// Parsed attribute table: unique ids and numeric values in file order.
/// Rows whose value cell is empty are dropped and counted in
/// skipped_missing; a non-empty cell that fails to parse as a number is an
/// error instead.
struct Dataset {
    std::vector<std::string> ids;
    std::vector<double> values;
    std::size_t skipped_missing = 0;

    std::size_t size() const { return ids.size(); }
};

// Comma-delimited, header required, decimal point only (locale-independent).
// Errors: MissingColumn, NonNumericValue (names file and row), DuplicateId,
// EmptyDataset.
Dataset read_attribute_csv(std::istream& in, const std::string& source_name,
                           const std::string& id_column, const std::string& value_column);
Dataset read_attribute_csv(const std::string& path, const std::string& id_column,
                           const std::string& value_column);

/// Per-location result columns for the GeoJSON join. Empty vectors mean the
/// column was not computed; such properties are written as null.
struct ResultColumns {
    std::vector<double> lif;
    std::vector<std::size_t> lif_rank;  // 1-based
    std::vector<double> local_i;
    std::vector<double> lisa_p;
    std::vector<std::string> quadrant;
};

struct GeoJsonJoin {
    std::string text;           // annotated FeatureCollection
    std::size_t unmatched = 0;  // features whose key had no matching id
};

// Annotates every feature of a FeatureCollection with properties lif,
// lif_rank, local_i, lisa_p and quadrant, matched on key_property (compared
// textually). Geometry passes through untouched. Features without a matching
// id get null result properties and are counted. Throws MalformedGeoJson and
// JoinKeyMissing.
GeoJsonJoin join_geojson(const std::string& geojson_text, const std::string& key_property,
                         std::span<const std::string> ids, const ResultColumns& results);

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

struct Palette {
    Rgb low;
    Rgb high;
};

// Light gray to dark blue, for attribute fields.
inline constexpr Palette kFieldPalette{{247, 247, 247}, {8, 48, 107}};
// Near-white to dark red, for influence maps.
inline constexpr Palette kInfluencePalette{{255, 245, 240}, {103, 0, 13}};

// rows x cols grid of filled squares, row-major from the top-left. Colors
// interpolate linearly between palette endpoints across [min, max]; a
// zero-range input maps everything to the low endpoint and the legend
// degenerates to a single label. Output bytes are a pure function of the
// inputs. Legend carries 5 tick labels at 3 significant digits.
std::string render_lattice_svg(std::span<const double> values, std::size_t rows, std::size_t cols,
                               const Palette& palette = kFieldPalette, bool legend = true);

// Shortest round-trip decimal form of x (std::to_chars); used everywhere a
// double is written to CSV so output is deterministic and locale-proof.
std::string format_double(double x);

// Writes content to path via a temporary file and rename, so a failed run
// never leaves a partially written result behind.
void write_file_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

}  // namespace lifmoran
