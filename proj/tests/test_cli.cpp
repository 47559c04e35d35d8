#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lifmoran/formats.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(LIFMORAN_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("lifmoran_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Table {
    std::string comment;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (columns[k] == name) return k;
        }
        REQUIRE_MESSAGE(false, "column not found: ", name);
        return 0;
    }
};

Table load_table(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path.string());
    Table table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            table.comment = line;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!have_header) {
            table.columns = fields;
            have_header = true;
        } else if (!fields.empty()) {
            table.rows.push_back(fields);
        }
    }
    return table;
}

const std::string kData = LIFMORAN_DATA_DIR;

}  // namespace

TEST_CASE("lif on the Columbus dataset writes 39 rows") {
    const auto out = fresh_dir("lif_columbus");
    const int code = run("lif --input " + kData + "/columbus_hoval.csv --id-col POLYID"
                         " --value-col HOVAL --weights " + kData + "/columbus.gal --out-dir " +
                         out.string());
    REQUIRE(code == 0);
    const auto table = load_table(out / "lif.csv");
    CHECK(table.rows.size() == 39);
    CHECK(table.columns == std::vector<std::string>{"id", "value", "lag", "lif", "rank"});
    CHECK(table.comment.find("seed=") != std::string::npos);
    CHECK(table.comment.find("config=") != std::string::npos);

    // every rank 1..39 appears once
    std::vector<bool> seen(40, false);
    const std::size_t rank_col = table.column("rank");
    for (const auto& row : table.rows) {
        const std::size_t rank = std::stoul(row[rank_col]);
        REQUIRE(rank >= 1);
        REQUIRE(rank <= 39);
        CHECK_FALSE(seen[rank]);
        seen[rank] = true;
    }
}

TEST_CASE("missing weights file exits 2 and leaves no partial outputs") {
    const auto out = fresh_dir("lif_missing");
    const int code = run("lif --input " + kData + "/columbus_hoval.csv --id-col POLYID"
                         " --value-col HOVAL --weights /nonexistent.gal --out-dir " +
                         out.string());
    CHECK(code == 2);
    CHECK_FALSE(fs::exists(out / "lif.csv"));
}

TEST_CASE("weights and lattice are mutually exclusive") {
    const auto out = fresh_dir("exclusive");
    const int code = run("lif --input " + kData + "/columbus_hoval.csv --id-col POLYID"
                         " --value-col HOVAL --weights " + kData + "/columbus.gal"
                         " --lattice 6x7 --out-dir " + out.string());
    CHECK(code == 2);
}

TEST_CASE("lisa output is deterministic for a fixed seed") {
    const auto out1 = fresh_dir("lisa_a");
    const auto out2 = fresh_dir("lisa_b");
    const std::string base = "lisa --input " + kData + "/columbus_hoval.csv --id-col POLYID"
                             " --value-col HOVAL --weights " + kData + "/columbus.gal"
                             " --permutations 199 --seed 99 --out-dir ";
    REQUIRE(run(base + out1.string()) == 0);
    REQUIRE(run(base + out2.string()) == 0);
    CHECK(lifmoran::read_file((out1 / "lisa.csv").string()) ==
          lifmoran::read_file((out2 / "lisa.csv").string()));

    const auto table = load_table(out1 / "lisa.csv");
    CHECK(table.rows.size() == 39);
    const std::size_t p_col = table.column("p_value");
    for (const auto& row : table.rows) {
        const double p = std::stod(row[p_col]);
        CHECK(p >= 1.0 / 200.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("simulate with one replication produces the full artifact set") {
    const auto out = fresh_dir("simulate_one");
    const int code = run("simulate --lattice 6x6 --rho 0.5 --replications 1 --seed 7 --svg"
                         " --out-dir " + out.string());
    REQUIRE(code == 0);
    CHECK(fs::exists(out / "cells.csv"));
    CHECK(fs::exists(out / "curve_max.csv"));
    CHECK(fs::exists(out / "curve_min.csv"));
    CHECK(fs::exists(out / "field.svg"));
    CHECK(fs::exists(out / "lif_map.svg"));

    const auto cells = load_table(out / "cells.csv");
    CHECK(cells.rows.size() == 36);
    const std::size_t sd_col = cells.column("sd_lif");
    for (const auto& row : cells.rows) CHECK(std::stod(row[sd_col]) == 0.0);
}

TEST_CASE("lif on a lattice emits the field/influence SVG pair") {
    const auto out = fresh_dir("lif_lattice");
    {
        std::ofstream f(out / "field.csv");
        f << "id,value\n";
        for (int i = 1; i <= 100; ++i) f << i << "," << (i * 37 % 101) - 50 << "\n";
    }
    const int code = run("lif --input " + (out / "field.csv").string() +
                         " --lattice 10x10 --svg --out-dir " + out.string());
    REQUIRE(code == 0);
    CHECK(fs::exists(out / "values.svg"));
    CHECK(fs::exists(out / "lif_map.svg"));
    const auto table = load_table(out / "lif.csv");
    CHECK(table.rows.size() == 100);
}

TEST_CASE("surface emits per-level files and the lag=0 variant agrees") {
    const auto out = fresh_dir("surface");
    const int code = run("surface --n 100 --mc-levels -0.5,0,0.5 --grid-z1 21 --grid-lag 21"
                         " --out-dir " + out.string());
    REQUIRE(code == 0);
    const auto variant = load_table(out / "surface_mc_variant.csv");
    REQUIRE(variant.columns == std::vector<std::string>{"z1", "mc", "ic"});

    for (const std::string level : {"-0.5", "0", "0.5"}) {
        const auto surface = load_table(out / ("surface_mc_" + level + ".csv"));
        REQUIRE(surface.columns == std::vector<std::string>{"z1", "lag", "ic"});
        const std::size_t z1_col = surface.column("z1");
        const std::size_t lag_col = surface.column("lag");
        const std::size_t ic_col = surface.column("ic");
        for (const auto& row : surface.rows) {
            if (row[z1_col] == "0") CHECK(std::stod(row[ic_col]) == 0.0);  // z1 = 0 row
            if (row[lag_col] != "0") continue;
            // find the matching variant row
            bool found = false;
            for (const auto& vrow : variant.rows) {
                if (vrow[0] == row[z1_col] && vrow[1] == level) {
                    CHECK(vrow[2] == row[ic_col]);
                    found = true;
                    break;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("a config file maps 1:1 to flags") {
    const auto out = fresh_dir("config_file");
    const fs::path cfg = out / "run.toml";
    {
        std::ofstream f(cfg);
        f << "[lif]\n"
          << "input = \"" << kData << "/columbus_hoval.csv\"\n"
          << "id-col = \"POLYID\"\n"
          << "value-col = \"HOVAL\"\n"
          << "weights = \"" << kData << "/columbus.gal\"\n"
          << "out-dir = \"" << out.string() << "\"\n";
    }
    const int code = run("--config " + cfg.string() + " lif");
    REQUIRE(code == 0);
    CHECK(load_table(out / "lif.csv").rows.size() == 39);
}

TEST_CASE("version flag") {
    CHECK(run("--version") == 0);
}
