#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <unordered_set>

#include "lifmoran/errors.hpp"
#include "lifmoran/formats.hpp"

namespace lifmoran {

namespace {

std::string trim(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

Dataset read_attribute_csv(std::istream& in, const std::string& source_name,
                           const std::string& id_column, const std::string& value_column) {
    std::string line;
    if (!std::getline(in, line)) throw EmptyDataset(source_name + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line[0] == '\xef' && line[1] == '\xbb' && line[2] == '\xbf') {
        line.erase(0, 3);  // UTF-8 BOM
    }

    const auto header = split_csv(line);
    std::size_t id_index = header.size();
    std::size_t value_index = header.size();
    for (std::size_t k = 0; k < header.size(); ++k) {
        const std::string name = trim(header[k]);
        if (name == id_column) id_index = k;
        if (name == value_column) value_index = k;
    }
    if (id_index == header.size()) {
        throw MissingColumn(source_name + ": column '" + id_column + "' not found");
    }
    if (value_index == header.size()) {
        throw MissingColumn(source_name + ": column '" + value_column + "' not found");
    }

    Dataset dataset;
    std::unordered_set<std::string> seen;
    std::size_t row = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        const auto fields = split_csv(line);
        if (fields.size() != header.size()) {
            throw InputError(source_name + ": row " + std::to_string(row) + " has " +
                             std::to_string(fields.size()) + " fields, header has " +
                             std::to_string(header.size()));
        }
        const std::string id = trim(fields[id_index]);
        const std::string value_token = trim(fields[value_index]);
        if (value_token.empty()) {
            ++dataset.skipped_missing;
            continue;
        }
        double value = 0.0;
        if (!parse_double(value_token, value)) {
            throw NonNumericValue(source_name + ": row " + std::to_string(row) + ": '" +
                                  value_token + "' in column '" + value_column +
                                  "' is not a number");
        }
        if (!seen.insert(id).second) {
            throw DuplicateId(source_name + ": duplicate id '" + id + "' at row " +
                              std::to_string(row));
        }
        dataset.ids.push_back(id);
        dataset.values.push_back(value);
    }

    if (dataset.ids.empty()) throw EmptyDataset(source_name + ": no data rows");
    return dataset;
}

Dataset read_attribute_csv(const std::string& path, const std::string& id_column,
                           const std::string& value_column) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open CSV file: " + path);
    return read_attribute_csv(in, path, id_column, value_column);
}

std::string format_double(double x) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
    if (ec != std::errc()) return "nan";
    return std::string(buffer, ptr);
}

void write_file_atomic(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw InputError("write failed: " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("rename failed for: " + path);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace lifmoran
