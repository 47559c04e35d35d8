#include "lifmoran/simulate.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <string>

#include "lifmoran/errors.hpp"
#include "lifmoran/moran.hpp"
#include "lifmoran/rng.hpp"

namespace lifmoran {

namespace {

constexpr std::size_t kDenseLimit = 2500;

void validate(const SarConfig& config) {
    if (!(std::abs(config.rho) < 1.0)) {
        throw InputError("sar: |rho| must be < 1, got " + std::to_string(config.rho));
    }
    if (!config.weights.row_standardized()) {
        throw InputError("sar: weights must be row-standardized");
    }
    if (config.weights.size() < 2) throw InputError("sar: need n >= 2");
}

}  // namespace

struct SarSolver::Impl {
    std::size_t n = 0;
    double rho = 0.0;
    bool dense = true;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::SparseMatrix<double> system;  // I - rho W (also kept for residuals)
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> iterative;
};

SarSolver::SarSolver(const SpatialWeights& w, double rho) : impl_(std::make_unique<Impl>()) {
    const std::size_t n = w.size();
    impl_->n = n;
    impl_->rho = rho;
    impl_->dense = n <= kDenseLimit;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(w.entry_count() + n);
    for (std::size_t i = 0; i < n; ++i) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
        const auto cols = w.row_cols(i);
        const auto weights = w.row_weights(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(cols[k]),
                                  -rho * weights[k]);
        }
    }
    impl_->system.resize(static_cast<int>(n), static_cast<int>(n));
    impl_->system.setFromTriplets(triplets.begin(), triplets.end());

    if (impl_->dense) {
        impl_->lu.compute(Eigen::MatrixXd(impl_->system));
    } else {
        impl_->iterative.setTolerance(1e-12);
        impl_->iterative.compute(impl_->system);
        if (impl_->iterative.info() != Eigen::Success) {
            throw SingularSystem("sar: iterative factorization failed");
        }
    }
}

SarSolver::~SarSolver() = default;
SarSolver::SarSolver(SarSolver&&) noexcept = default;
SarSolver& SarSolver::operator=(SarSolver&&) noexcept = default;

std::vector<double> SarSolver::solve(std::span<const double> eps) const {
    if (eps.size() != impl_->n) {
        throw DimensionMismatch("sar solve: rhs length " + std::to_string(eps.size()) +
                                " != n = " + std::to_string(impl_->n));
    }
    Eigen::Map<const Eigen::VectorXd> rhs(eps.data(), static_cast<long>(eps.size()));
    Eigen::VectorXd x;
    if (impl_->dense) {
        x = impl_->lu.solve(rhs);
    } else {
        x = impl_->iterative.solve(rhs);
        if (impl_->iterative.info() != Eigen::Success) {
            throw SingularSystem("sar: iterative solve did not converge");
        }
    }
    std::vector<double> out(x.data(), x.data() + x.size());
    const double res = residual(out, eps);
    if (!(res < 1e-8) || !std::isfinite(res)) {
        throw SingularSystem("sar: solve residual " + std::to_string(res));
    }
    return out;
}

double SarSolver::residual(std::span<const double> z, std::span<const double> eps) const {
    Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<long>(z.size()));
    Eigen::Map<const Eigen::VectorXd> ev(eps.data(), static_cast<long>(eps.size()));
    return (impl_->system * zv - ev).cwiseAbs().maxCoeff();
}

std::vector<double> sar_noise(const SarConfig& config, std::size_t replicate) {
    Rng rng = Rng::stream(config.seed, replicate);
    std::vector<double> eps(config.weights.size());
    for (double& e : eps) e = rng.normal();
    return eps;
}

SarRealization sar_generate(const SarConfig& config, std::size_t replicate) {
    validate(config);
    const auto eps = sar_noise(config, replicate);
    SarSolver solver(config.weights, config.rho);
    SarRealization out;
    out.field = solver.solve(eps);
    out.seed_used = config.seed;
    out.replicate_index = replicate;
    return out;
}

ExperimentSummary mc_experiment(const SarConfig& config, double half_width, bool exact) {
    validate(config);
    if (config.replications < 1) throw InputError("mc_experiment: need replications >= 1");

    const std::size_t n = config.weights.size();
    const std::size_t reps = config.replications;
    SarSolver solver(config.weights, config.rho);

    ExperimentSummary summary;
    summary.n = n;
    summary.replications = reps;
    summary.seed = config.seed;
    summary.rho = config.rho;

    // Welford accumulation in replicate order keeps the aggregate independent
    // of how lif_map distributes its per-location work.
    std::vector<double> mean(n, 0.0);
    std::vector<double> m2(n, 0.0);

    Observations last_obs;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto eps = sar_noise(config, r);
        const auto field = solver.solve(eps);
        auto obs = standardize(field);
        const auto scores = lif_map(obs, config.weights, half_width, exact);

        const double count = static_cast<double>(r + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = scores.lif[i] - mean[i];
            mean[i] += delta / count;
            m2[i] += delta * (scores.lif[i] - mean[i]);
        }

        if (r + 1 == reps) {
            summary.final_field = field;
            summary.final_lif = scores.lif;
            summary.final_min_cell = scores.argmin_location;
            summary.final_max_cell = scores.argmax_location;
            summary.final_mc = moran_i(obs, config.weights);
            last_obs = std::move(obs);
        }
    }

    summary.cells.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        summary.cells[i].mean_lif = mean[i];
        summary.cells[i].sd_lif =
            reps > 1 ? std::sqrt(m2[i] / static_cast<double>(reps - 1)) : 0.0;
    }

    const auto max_it = std::max_element(
        summary.cells.begin(), summary.cells.end(),
        [](const CellSummary& a, const CellSummary& b) { return a.mean_lif < b.mean_lif; });
    const auto min_it = std::min_element(
        summary.cells.begin(), summary.cells.end(),
        [](const CellSummary& a, const CellSummary& b) { return a.mean_lif < b.mean_lif; });
    summary.aggregate_max_cell = static_cast<std::size_t>(max_it - summary.cells.begin());
    summary.aggregate_min_cell = static_cast<std::size_t>(min_it - summary.cells.begin());

    summary.min_curve = influence_curve(last_obs, config.weights, summary.aggregate_min_cell);
    summary.max_curve = influence_curve(last_obs, config.weights, summary.aggregate_max_cell);
    return summary;
}

}  // namespace lifmoran
