// lifmoran: spatial influence analysis for Moran's I.
//
// Subcommands:
//   lif       per-location influence scores for a dataset
//   lisa      local Moran with conditional-permutation p-values
//   simulate  SAR Monte Carlo experiment over a lattice
//   surface   parametric influence surfaces
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lifmoran/errors.hpp"
#include "lifmoran/formats.hpp"
#include "lifmoran/influence.hpp"
#include "lifmoran/lisa.hpp"
#include "lifmoran/moran.hpp"
#include "lifmoran/simulate.hpp"
#include "lifmoran/version.hpp"
#include "lifmoran/weights.hpp"

namespace fs = std::filesystem;
using namespace lifmoran;

namespace {

struct RunConfig {
    std::string subcommand;

    std::string input;
    std::string id_col = "id";
    std::string value_col = "value";
    std::string weights_path;
    std::string lattice_spec;  // "RxC"
    bool torus = false;
    std::string geojson_path;
    std::string geojson_key;  // defaults to id_col
    std::string out_dir = ".";

    std::uint64_t seed = 42;
    std::size_t permutations = 999;
    double alpha = 0.05;
    double half_width = 2.0;
    bool exact = false;
    bool svg = false;

    // simulate
    double rho = 0.5;
    std::size_t replications = 1000;

    // surface
    std::size_t surface_n = 100;
    std::vector<double> mc_levels;
    std::pair<double, double> z1_range{-2.0, 2.0};
    std::pair<double, double> lag_range{-2.0, 2.0};
    std::size_t grid_z1 = 41;
    std::size_t grid_lag = 41;
};

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

// Canonical description of the effective options; hashed into every CSV
// header so outputs are traceable to their configuration.
std::string config_line(const RunConfig& config) {
    std::string s = config.subcommand;
    s += "|input=" + config.input;
    s += "|id-col=" + config.id_col;
    s += "|value-col=" + config.value_col;
    s += "|weights=" + config.weights_path;
    s += "|lattice=" + config.lattice_spec;
    s += "|torus=" + std::string(config.torus ? "1" : "0");
    s += "|geojson=" + config.geojson_path;
    s += "|seed=" + std::to_string(config.seed);
    s += "|permutations=" + std::to_string(config.permutations);
    s += "|alpha=" + format_double(config.alpha);
    s += "|half-width=" + format_double(config.half_width);
    s += "|exact=" + std::string(config.exact ? "1" : "0");
    s += "|rho=" + format_double(config.rho);
    s += "|replications=" + std::to_string(config.replications);
    s += "|n=" + std::to_string(config.surface_n);
    return s;
}

std::string csv_header_comment(const RunConfig& config) {
    return "# lifmoran " + std::string(kVersion) + " | seed=" + std::to_string(config.seed) +
           " | config=" + hex64(fnv1a(config_line(config))) + "\n";
}

struct LatticeSpec {
    std::size_t rows = 0;
    std::size_t cols = 0;
};

LatticeSpec parse_lattice(const std::string& spec) {
    const auto split = spec.find('x');
    if (split == std::string::npos) {
        throw InputError("lattice spec must look like RxC, got '" + spec + "'");
    }
    try {
        LatticeSpec out;
        out.rows = std::stoul(spec.substr(0, split));
        out.cols = std::stoul(spec.substr(split + 1));
        if (out.rows < 1 || out.cols < 1) throw InputError("");
        return out;
    } catch (const std::exception&) {
        throw InputError("lattice spec must look like RxC with positive sizes, got '" + spec +
                         "'");
    }
}

// Staged output: everything is rendered in memory first and written only
// after the whole command succeeded, so failures leave no partial artifacts.
class OutputStage {
public:
    explicit OutputStage(const fs::path& dir) : dir_(dir) {}

    void add(const std::string& name, std::string content) {
        files_.emplace_back(name, std::move(content));
    }

    void commit() {
        fs::create_directories(dir_);
        for (const auto& [name, content] : files_) {
            write_file_atomic((dir_ / name).string(), content);
            std::cout << "[out] " << (dir_ / name).string() << "\n";
        }
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

struct LoadedInputs {
    Observations obs;
    SpatialWeights weights;            // row-standardized, aligned to obs order
    std::optional<LatticeSpec> lattice;
};

SpatialWeights align_gal_to_dataset(const GalFile& gal, const std::vector<std::string>& ids,
                                    const std::string& gal_path) {
    if (gal.weights.size() != ids.size()) {
        throw InputError(gal_path + ": " + std::to_string(gal.weights.size()) +
                         " locations, dataset has " + std::to_string(ids.size()));
    }
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto it = std::find(gal.ids.begin(), gal.ids.end(), ids[i]);
        if (it == gal.ids.end()) {
            throw InputError(gal_path + ": dataset id '" + ids[i] + "' not present");
        }
        order[i] = static_cast<std::size_t>(it - gal.ids.begin());
    }
    return reorder(gal.weights, order);
}

LoadedInputs load_inputs(const RunConfig& config) {
    if (config.input.empty()) throw InputError("--input is required");

    const Dataset dataset = read_attribute_csv(config.input, config.id_col, config.value_col);
    if (dataset.skipped_missing > 0) {
        std::cout << "[read] skipped " << dataset.skipped_missing
                  << " rows with missing values\n";
    }
    std::cout << "[read] " << dataset.size() << " values from " << config.input << "\n";

    LoadedInputs loaded;
    loaded.obs = standardize(dataset.values, dataset.ids);

    if (!config.weights_path.empty()) {
        const GalFile gal = read_gal_file(config.weights_path);
        loaded.weights = row_standardize(align_gal_to_dataset(gal, dataset.ids,
                                                              config.weights_path));
        if (!loaded.weights.island_rows().empty()) {
            std::cout << "[weights] " << loaded.weights.island_rows().size()
                      << " island location(s)\n";
        }
    } else {
        const LatticeSpec spec = parse_lattice(config.lattice_spec);
        if (spec.rows * spec.cols != dataset.size()) {
            throw InputError("lattice " + config.lattice_spec + " has " +
                             std::to_string(spec.rows * spec.cols) + " cells, dataset has " +
                             std::to_string(dataset.size()));
        }
        loaded.weights = row_standardize(lattice_rook(spec.rows, spec.cols, config.torus));
        loaded.lattice = spec;
    }
    return loaded;
}

void maybe_join_geojson(const RunConfig& config, OutputStage& stage,
                        const std::vector<std::string>& ids, const ResultColumns& results) {
    if (config.geojson_path.empty()) return;
    const std::string key = config.geojson_key.empty() ? config.id_col : config.geojson_key;
    const auto join = join_geojson(read_file(config.geojson_path), key, ids, results);
    if (join.unmatched > 0) {
        std::cout << "[geojson] " << join.unmatched << " feature(s) without a matching id\n";
    }
    stage.add("annotated.geojson", join.text);
}

int cmd_lif(const RunConfig& config) {
    const auto loaded = load_inputs(config);
    const auto& obs = loaded.obs;
    const auto& w = loaded.weights;

    const double mc = moran_i(obs, w);
    const auto lag_sums = contamination_lag_sums(obs, w);
    const auto scores = lif_map(obs, w, config.half_width, config.exact);
    const auto local = local_moran(obs, w);

    std::cout << "[lif] global MC = " << format_double(mc) << "\n";
    std::cout << "[lif] max LIF at location " << obs.ids[scores.argmax_location] << " (#"
              << scores.argmax_location + 1 << "), min at " << obs.ids[scores.argmin_location]
              << " (#" << scores.argmin_location + 1 << ")\n";

    std::string csv = csv_header_comment(config);
    csv += "id,value,lag,lif,rank\n";
    for (std::size_t i = 0; i < obs.size(); ++i) {
        csv += obs.ids[i] + "," + format_double(obs.values[i]) + "," +
               format_double(lag_sums[i]) + "," + format_double(scores.lif[i]) + "," +
               std::to_string(scores.rank[i] + 1) + "\n";
    }

    OutputStage stage(config.out_dir);
    stage.add("lif.csv", std::move(csv));

    ResultColumns columns;
    columns.lif = scores.lif;
    columns.lif_rank.resize(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) columns.lif_rank[i] = scores.rank[i] + 1;
    columns.local_i = local;
    columns.quadrant.reserve(obs.size());
    const auto lag = spatial_lag(obs, w);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const Quadrant q = w.is_island(i) ? Quadrant::Island
                           : obs.standardized[i] >= 0.0
                               ? (lag[i] >= 0.0 ? Quadrant::HH : Quadrant::HL)
                               : (lag[i] >= 0.0 ? Quadrant::LH : Quadrant::LL);
        columns.quadrant.push_back(to_string(q));
    }
    maybe_join_geojson(config, stage, obs.ids, columns);

    if (config.svg && loaded.lattice) {
        stage.add("values.svg", render_lattice_svg(obs.values, loaded.lattice->rows,
                                                   loaded.lattice->cols, kFieldPalette, true));
        stage.add("lif_map.svg", render_lattice_svg(scores.lif, loaded.lattice->rows,
                                                    loaded.lattice->cols, kInfluencePalette,
                                                    true));
    } else if (config.svg) {
        std::cout << "[svg] skipped: SVG output needs --lattice geometry\n";
    }

    stage.commit();
    return 0;
}

int cmd_lisa(const RunConfig& config) {
    const auto loaded = load_inputs(config);
    const auto& obs = loaded.obs;
    const auto& w = loaded.weights;

    const auto result = lisa_inference(obs, w, config.permutations, config.seed, config.alpha);
    std::size_t significant = 0;
    for (std::size_t i = 0; i < result.size(); ++i) {
        if (result.significant(i)) ++significant;
    }
    std::cout << "[lisa] global MC = " << format_double(moran_i(obs, w)) << "\n";
    std::cout << "[lisa] " << significant << " of " << result.size()
              << " locations significant at alpha = " << format_double(config.alpha) << "\n";

    std::string csv = csv_header_comment(config);
    csv += "id,local_i,quadrant,p_value,significant\n";
    for (std::size_t i = 0; i < obs.size(); ++i) {
        csv += obs.ids[i] + "," + format_double(result.local_i[i]) + "," +
               to_string(result.quadrant[i]) + "," + format_double(result.p_value[i]) + "," +
               (result.significant(i) ? "1" : "0") + "\n";
    }

    OutputStage stage(config.out_dir);
    stage.add("lisa.csv", std::move(csv));

    ResultColumns columns;
    columns.local_i = result.local_i;
    columns.lisa_p = result.p_value;
    columns.quadrant.reserve(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        columns.quadrant.push_back(to_string(result.quadrant[i]));
    }
    maybe_join_geojson(config, stage, obs.ids, columns);

    if (config.svg && loaded.lattice) {
        stage.add("local_i.svg", render_lattice_svg(result.local_i, loaded.lattice->rows,
                                                    loaded.lattice->cols, kFieldPalette, true));
    }

    stage.commit();
    return 0;
}

int cmd_simulate(const RunConfig& config) {
    if (config.weights_path.empty() && config.lattice_spec.empty()) {
        throw InputError("simulate needs --lattice or --weights");
    }

    SpatialWeights w;
    std::optional<LatticeSpec> lattice;
    if (!config.weights_path.empty()) {
        w = row_standardize(read_gal_file(config.weights_path).weights);
    } else {
        const LatticeSpec spec = parse_lattice(config.lattice_spec);
        w = row_standardize(lattice_rook(spec.rows, spec.cols, config.torus));
        lattice = spec;
    }

    SarConfig sar{config.rho, w, config.seed, config.replications};
    std::cout << "[simulate] rho = " << format_double(config.rho) << ", "
              << config.replications << " replication(s), n = " << w.size() << "\n";
    const auto summary = mc_experiment(sar, config.half_width, config.exact);

    std::cout << "[simulate] final-replicate MC = " << format_double(summary.final_mc) << "\n";
    std::cout << "[simulate] mean-LIF extremes: max at cell " << summary.aggregate_max_cell + 1
              << ", min at cell " << summary.aggregate_min_cell + 1 << "\n";
    std::cout << "[simulate] final-replicate extremes: max at cell " << summary.final_max_cell + 1
              << ", min at cell " << summary.final_min_cell + 1 << "\n";

    const std::size_t grid_cols = lattice ? lattice->cols : w.size();

    std::string cells = csv_header_comment(config);
    cells += "index,row,col,mean_lif,sd_lif\n";
    for (std::size_t i = 0; i < summary.cells.size(); ++i) {
        cells += std::to_string(i + 1) + "," + std::to_string(i / grid_cols + 1) + "," +
                 std::to_string(i % grid_cols + 1) + "," +
                 format_double(summary.cells[i].mean_lif) + "," +
                 format_double(summary.cells[i].sd_lif) + "\n";
    }

    auto curve_csv = [&](const InfluenceCurve& curve) {
        std::string csv = csv_header_comment(config);
        csv += "z1,ic\n";
        for (std::size_t k = 0; k < curve.z1_grid.size(); ++k) {
            csv += format_double(curve.z1_grid[k]) + "," + format_double(curve.ic_values[k]) +
                   "\n";
        }
        return csv;
    };

    OutputStage stage(config.out_dir);
    stage.add("cells.csv", std::move(cells));
    stage.add("curve_max.csv", curve_csv(summary.max_curve));
    stage.add("curve_min.csv", curve_csv(summary.min_curve));

    if (config.svg && lattice) {
        stage.add("field.svg", render_lattice_svg(summary.final_field, lattice->rows,
                                                  lattice->cols, kFieldPalette, true));
        stage.add("lif_map.svg", render_lattice_svg(summary.final_lif, lattice->rows,
                                                    lattice->cols, kInfluencePalette, true));
    }

    stage.commit();
    return 0;
}

int cmd_surface(const RunConfig& config) {
    std::vector<double> levels = config.mc_levels;
    if (levels.empty()) {
        for (int k = 0; k < 7; ++k) {
            const double t = static_cast<double>(k) / 6.0;
            levels.push_back(-0.7 + 1.4 * t);
        }
    }

    const Interval z1_range{config.z1_range.first, config.z1_range.second};
    const Interval lag_range{config.lag_range.first, config.lag_range.second};
    const auto surfaces = influence_surface(levels, z1_range, lag_range, config.grid_z1,
                                            config.grid_lag, config.surface_n);
    const auto variant = influence_surface_mc(
        z1_range, {levels.front(), levels.back()}, config.grid_z1,
        std::max<std::size_t>(levels.size(), 2), config.surface_n);

    OutputStage stage(config.out_dir);
    char name[64];
    for (const auto& surface : surfaces) {
        std::string csv = csv_header_comment(config);
        csv += "z1,lag,ic\n";
        for (std::size_t iz = 0; iz < surface.z1.size(); ++iz) {
            for (std::size_t il = 0; il < surface.lag.size(); ++il) {
                csv += format_double(surface.z1[iz]) + "," + format_double(surface.lag[il]) +
                       "," + format_double(surface.ic[iz * surface.lag.size() + il]) + "\n";
            }
        }
        std::snprintf(name, sizeof(name), "surface_mc_%.4g.csv", surface.mc);
        stage.add(name, std::move(csv));

        if (config.svg) {
            std::snprintf(name, sizeof(name), "surface_mc_%.4g.svg", surface.mc);
            stage.add(name, render_lattice_svg(surface.ic, surface.z1.size(),
                                               surface.lag.size(), kInfluencePalette, true));
        }
    }

    std::string csv = csv_header_comment(config);
    csv += "z1,mc,ic\n";
    for (std::size_t iz = 0; iz < variant.z1.size(); ++iz) {
        for (std::size_t im = 0; im < variant.mc.size(); ++im) {
            csv += format_double(variant.z1[iz]) + "," + format_double(variant.mc[im]) + "," +
                   format_double(variant.ic[iz * variant.mc.size() + im]) + "\n";
        }
    }
    stage.add("surface_mc_variant.csv", std::move(csv));

    std::cout << "[surface] " << surfaces.size() << " level surface(s) plus the lag=0 variant\n";
    stage.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig config;
    CLI::App app{"Local influence analysis for Moran's I"};
    app.set_version_flag("--version", std::string("lifmoran ") + kVersion);
    // Keys live in a [subcommand] section and carry the long flag names.
    app.set_config("--config", "", "Read options from a TOML-style config file");
    app.require_subcommand(1);

    auto add_shared = [&](CLI::App* cmd, bool needs_input) {
        auto* input = cmd->add_option("--input", config.input, "Attribute CSV file");
        if (needs_input) input->required();
        cmd->add_option("--id-col", config.id_col, "Id column name");
        cmd->add_option("--value-col", config.value_col, "Value column name");
        auto* weights = cmd->add_option("--weights", config.weights_path, "GAL weights file");
        auto* lattice =
            cmd->add_option("--lattice", config.lattice_spec, "Rook lattice spec, e.g. 10x10");
        weights->excludes(lattice);
        lattice->excludes(weights);
        cmd->add_flag("--torus", config.torus, "Wrap lattice edges");
        cmd->add_option("--geojson", config.geojson_path, "GeoJSON FeatureCollection to annotate");
        cmd->add_option("--geojson-key", config.geojson_key,
                        "Join key property (defaults to --id-col)");
        cmd->add_option("--out-dir", config.out_dir, "Output directory");
        cmd->add_option("--seed", config.seed, "Random seed");
        cmd->add_option("--permutations", config.permutations, "Permutation count");
        cmd->add_option("--alpha", config.alpha, "Significance level");
        cmd->add_option("--half-width", config.half_width,
                        "Integration half-width in sigma units");
        cmd->add_flag("--exact", config.exact, "Use the exact contamination oracle");
        cmd->add_flag("--svg", config.svg, "Emit SVG maps (lattice runs)");
    };

    auto* lif = app.add_subcommand("lif", "Per-location influence scores");
    add_shared(lif, true);
    auto* lisa = app.add_subcommand("lisa", "Local Moran with permutation inference");
    add_shared(lisa, true);
    auto* simulate = app.add_subcommand("simulate", "SAR Monte Carlo experiment");
    add_shared(simulate, false);
    simulate->add_option("--rho", config.rho, "Autoregressive parameter, |rho| < 1");
    simulate->add_option("--replications", config.replications, "Replication count");
    auto* surface = app.add_subcommand("surface", "Parametric influence surfaces");
    add_shared(surface, false);
    surface->add_option("--n", config.surface_n, "Sample size parameter of the surfaces");
    surface->add_option("--mc-levels", config.mc_levels, "Moran levels (comma separated)")
        ->delimiter(',');
    surface->add_option("--z1-min", config.z1_range.first, "Contamination range lower end");
    surface->add_option("--z1-max", config.z1_range.second, "Contamination range upper end");
    surface->add_option("--lag-min", config.lag_range.first, "Lag-sum range lower end");
    surface->add_option("--lag-max", config.lag_range.second, "Lag-sum range upper end");
    surface->add_option("--grid-z1", config.grid_z1, "Grid points along z1");
    surface->add_option("--grid-lag", config.grid_lag, "Grid points along lag");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (lif->parsed()) {
            config.subcommand = "lif";
            if (config.weights_path.empty() && config.lattice_spec.empty()) {
                throw InputError("lif needs --weights or --lattice");
            }
            return cmd_lif(config);
        }
        if (lisa->parsed()) {
            config.subcommand = "lisa";
            if (config.weights_path.empty() && config.lattice_spec.empty()) {
                throw InputError("lisa needs --weights or --lattice");
            }
            return cmd_lisa(config);
        }
        if (simulate->parsed()) {
            config.subcommand = "simulate";
            return cmd_simulate(config);
        }
        config.subcommand = "surface";
        return cmd_surface(config);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
