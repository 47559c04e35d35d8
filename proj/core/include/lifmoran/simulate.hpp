#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lifmoran/influence.hpp"
#include "lifmoran/weights.hpp"

namespace lifmoran {

/// Parameters of the spatial-lag generator Z = (I - rho W)^{-1} eps with
/// eps ~ N(0, 1) i.i.d. Requires |rho| < 1 so the system is invertible for
/// row-standardized weights (max row sum 1).
struct SarConfig {
    double rho = 0.5;
    SpatialWeights weights;  // row-standardized
    std::uint64_t seed = 0;
    std::size_t replications = 1000;
};

struct SarRealization {
    std::vector<double> field;  // length n, not yet standardized
    std::uint64_t seed_used = 0;
    std::size_t replicate_index = 0;
};

// The noise vector of one replicate, drawn from the (seed, replicate) stream.
std::vector<double> sar_noise(const SarConfig& config, std::size_t replicate);

// Draws noise and solves (I - rho W) Z = eps. Deterministic per
// (seed, replicate). Throws SingularSystem if the solve fails the residual
// check, InputError if |rho| >= 1 or the weights are not row-standardized.
SarRealization sar_generate(const SarConfig& config, std::size_t replicate);

/// Reusable factorization of (I - rho W): dense LU for n <= 2500, sparse
/// iterative (BiCGSTAB, residual tolerance 1e-12) above.
class SarSolver {
public:
    SarSolver(const SpatialWeights& w, double rho);
    ~SarSolver();
    SarSolver(SarSolver&&) noexcept;
    SarSolver& operator=(SarSolver&&) noexcept;

    std::vector<double> solve(std::span<const double> eps) const;

    // max_i |((I - rho W) z - eps)_i|
    double residual(std::span<const double> z, std::span<const double> eps) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct CellSummary {
    double mean_lif = 0.0;
    double sd_lif = 0.0;  // sample sd over replications (0 when replications == 1)
};

/// Aggregate of the Monte Carlo experiment: per-cell LIF statistics over all
/// replications plus the final replication in full. Both extreme-cell views
/// are reported: by mean LIF over all replications (aggregate_*) and by the
/// final realization alone (final_*). The exported curves belong to the
/// aggregate extreme cells, evaluated on the final realization.
struct ExperimentSummary {
    std::size_t n = 0;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    double rho = 0.0;

    std::vector<CellSummary> cells;
    std::size_t aggregate_min_cell = 0;
    std::size_t aggregate_max_cell = 0;
    std::size_t final_min_cell = 0;
    std::size_t final_max_cell = 0;

    double final_mc = 0.0;
    std::vector<double> final_field;  // raw SAR field of the final replicate
    std::vector<double> final_lif;
    InfluenceCurve min_curve;
    InfluenceCurve max_curve;
};

ExperimentSummary mc_experiment(const SarConfig& config, double half_width = 2.0,
                                bool exact = false);

}  // namespace lifmoran
