#pragma once

#include <span>
#include <string>
#include <vector>

#include "lifmoran/weights.hpp"

namespace lifmoran {

/// An attribute vector together with its standardized form.
///
/// standardized has mean 0 and variance 1 computed with divisor n (not n-1);
/// the contamination algebra in the influence module depends on
/// sum(z_i^2) = n, which only holds with divisor n.
struct Observations {
    std::vector<std::string> ids;       // length n
    std::vector<double> values;         // raw
    std::vector<double> standardized;   // mean 0, variance_n 1
    double sigma = 1.0;                 // sd of the standardized vector (1 by construction)

    std::size_t size() const { return standardized.size(); }
};

// Centers and scales raw so the result has mean 0 and variance 1 with
// divisor n. Throws ZeroVariance when all values are equal and
// DimensionMismatch when ids are given but their length differs.
Observations standardize(std::span<const double> raw, std::vector<std::string> ids = {});

// lag_i = sum_j w_ij z_j on the standardized values; 0 for islands.
std::vector<double> spatial_lag(const Observations& z, const SpatialWeights& w);

// Global Moran coefficient (Z^T W Z) / (Z^T Z) on the standardized values.
// Requires row-standardized weights of matching size.
double moran_i(const Observations& z, const SpatialWeights& w);

}  // namespace lifmoran
