#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lifmoran/errors.hpp"
#include "lifmoran/weights.hpp"

namespace lifmoran {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

// getline that tolerates CRLF input.
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

GalFile read_gal(std::istream& in, const std::string& source_name) {
    auto fail = [&](const std::string& what) -> GalParseError {
        return GalParseError(source_name + ": " + what);
    };

    std::string line;
    // Header: either "n" or "0 n shapefile key" (only the second token used).
    std::vector<std::string> header;
    while (next_line(in, line)) {
        header = tokenize(line);
        if (!header.empty()) break;
    }
    if (header.empty()) throw fail("empty file");

    std::string n_token;
    if (header.size() == 1) {
        n_token = header[0];
    } else if (header.size() == 4) {
        n_token = header[1];
    } else {
        throw fail("header must have 1 or 4 tokens, got " + std::to_string(header.size()));
    }

    std::size_t n = 0;
    try {
        n = std::stoul(n_token);
    } catch (const std::exception&) {
        throw fail("header count '" + n_token + "' is not an integer");
    }
    if (n == 0) throw fail("header declares 0 locations");

    std::unordered_map<std::string, std::size_t> index_of;
    std::vector<std::string> ids;
    auto intern = [&](const std::string& id) -> std::size_t {
        auto [it, inserted] = index_of.try_emplace(id, ids.size());
        if (inserted) {
            if (ids.size() >= n) {
                throw fail("more than " + std::to_string(n) + " distinct ids (first extra: '" +
                           id + "')");
            }
            ids.push_back(id);
        }
        return it->second;
    };

    std::vector<std::vector<std::size_t>> neighbors(n);
    std::vector<bool> has_record(n, false);

    for (std::size_t record = 0; record < n; ++record) {
        if (!next_line(in, line)) {
            throw fail("expected " + std::to_string(n) + " records, got " +
                       std::to_string(record));
        }
        const auto head = tokenize(line);
        if (head.size() != 2) {
            throw fail("record " + std::to_string(record + 1) +
                       ": expected 'id count', got '" + line + "'");
        }
        std::size_t k = 0;
        try {
            k = std::stoul(head[1]);
        } catch (const std::exception&) {
            throw fail("record '" + head[0] + "': neighbor count '" + head[1] +
                       "' is not an integer");
        }

        const std::size_t i = intern(head[0]);
        if (has_record[i]) throw fail("duplicate record for id '" + head[0] + "'");
        has_record[i] = true;

        // The neighbor line must follow even when k = 0; a missing final
        // empty line at EOF is tolerated.
        std::vector<std::string> tokens;
        if (next_line(in, line)) {
            tokens = tokenize(line);
        } else if (k != 0 || record + 1 != n) {
            throw fail("record '" + head[0] + "': missing neighbor line");
        }
        if (tokens.size() != k) {
            throw fail("record '" + head[0] + "': declared " + std::to_string(k) +
                       " neighbors, found " + std::to_string(tokens.size()));
        }
        neighbors[i].reserve(k);
        for (const auto& token : tokens) {
            const std::size_t j = intern(token);
            if (j == i) throw fail("location '" + head[0] + "' lists itself as a neighbor");
            for (const std::size_t seen : neighbors[i]) {
                if (seen == j) {
                    throw fail("location '" + head[0] + "' lists neighbor '" + token +
                               "' twice");
                }
            }
            neighbors[i].push_back(j);
        }
    }

    if (ids.size() != n) {
        throw fail("header declares " + std::to_string(n) + " locations but only " +
                   std::to_string(ids.size()) + " distinct ids appear");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!has_record[i]) throw fail("id '" + ids[i] + "' is referenced but has no record");
    }

    std::vector<std::vector<WeightEntry>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].reserve(neighbors[i].size());
        for (const std::size_t j : neighbors[i]) rows[i].push_back({j, 1.0});
    }
    return {SpatialWeights::build(n, rows, false), std::move(ids)};
}

GalFile read_gal_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open GAL file: " + path);
    return read_gal(in, path);
}

void write_gal(std::ostream& out, const SpatialWeights& w, std::span<const std::string> ids) {
    const std::size_t n = w.size();
    if (!ids.empty() && ids.size() != n) {
        throw DimensionMismatch("write_gal: " + std::to_string(ids.size()) + " ids for n = " +
                                std::to_string(n));
    }
    auto id_of = [&](std::size_t i) {
        return ids.empty() ? std::to_string(i + 1) : ids[i];
    };

    out << n << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        const auto cols = w.row_cols(i);
        out << id_of(i) << ' ' << cols.size() << '\n';
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (k > 0) out << ' ';
            out << id_of(cols[k]);
        }
        out << '\n';
    }
}

void write_gal_file(const std::string& path, const SpatialWeights& w,
                    std::span<const std::string> ids) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path);
    write_gal(out, w, ids);
    if (!out) throw InputError("write failed: " + path);
}

}  // namespace lifmoran
