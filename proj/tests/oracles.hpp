// Test-only reference implementations. Everything here is deliberately
// brute-force and independent of the code paths under test: dense matrix
// algebra for the sparse statistics, a uniform-grid trapezoid rule for the
// adaptive quadrature, and direct construction recipes for special fields.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lifmoran/influence.hpp"
#include "lifmoran/moran.hpp"
#include "lifmoran/rng.hpp"
#include "lifmoran/weights.hpp"

namespace oracle {

inline Eigen::MatrixXd dense_matrix(const lifmoran::SpatialWeights& w) {
    const auto n = static_cast<long>(w.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto cols = w.row_cols(i);
        const auto weights = w.row_weights(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            m(static_cast<long>(i), static_cast<long>(cols[k])) = weights[k];
        }
    }
    return m;
}

inline std::vector<double> dense_lag(const lifmoran::Observations& z,
                                     const lifmoran::SpatialWeights& w) {
    const Eigen::MatrixXd m = dense_matrix(w);
    Eigen::Map<const Eigen::VectorXd> zv(z.standardized.data(),
                                         static_cast<long>(z.standardized.size()));
    const Eigen::VectorXd lag = m * zv;
    return {lag.data(), lag.data() + lag.size()};
}

inline double dense_moran(const lifmoran::Observations& z, const lifmoran::SpatialWeights& w) {
    const Eigen::MatrixXd m = dense_matrix(w);
    Eigen::Map<const Eigen::VectorXd> zv(z.standardized.data(),
                                         static_cast<long>(z.standardized.size()));
    return (zv.transpose() * m * zv).value() / zv.squaredNorm();
}

// Composite trapezoid over |f| with `points` uniform intervals.
template <typename Fn>
double trapezoid_abs(const Fn& f, double a, double b, std::size_t points) {
    const double h = (b - a) / static_cast<double>(points);
    double sum = 0.5 * (std::abs(f(a)) + std::abs(f(b)));
    for (std::size_t k = 1; k < points; ++k) {
        sum += std::abs(f(a + h * static_cast<double>(k)));
    }
    return sum * h;
}

inline double trapezoid_lif(std::size_t n, double mc, double lag_sum, double half_width,
                            std::size_t points = 1000000) {
    return trapezoid_abs(
        [&](double z1) { return lifmoran::influence_kernel(z1, lag_sum, mc, n); }, -half_width,
        half_width, points);
}

inline std::vector<double> random_vector(std::size_t n, lifmoran::Rng& rng, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

// A valid standardized vector (mean 0, sum of squares n) holding exactly 0 at
// `site`: the other n-1 values are centered among themselves and rescaled.
inline lifmoran::Observations zero_site_field(std::size_t n, std::size_t site,
                                              lifmoran::Rng& rng) {
    std::vector<double> others(n - 1);
    for (double& x : others) x = rng.normal();
    double mean = 0.0;
    for (const double x : others) mean += x;
    mean /= static_cast<double>(n - 1);
    double ss = 0.0;
    for (double& x : others) {
        x -= mean;
        ss += x * x;
    }
    const double scale = std::sqrt(static_cast<double>(n) / ss);

    lifmoran::Observations obs;
    obs.standardized.resize(n);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        obs.standardized[i] = i == site ? 0.0 : others[j++] * scale;
    }
    obs.values = obs.standardized;
    obs.ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) obs.ids.push_back(std::to_string(i + 1));
    obs.sigma = 1.0;
    return obs;
}

}  // namespace oracle
