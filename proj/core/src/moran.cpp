#include "lifmoran/moran.hpp"

#include <cmath>
#include <string>

#include "lifmoran/errors.hpp"

namespace lifmoran {

Observations standardize(std::span<const double> raw, std::vector<std::string> ids) {
    const std::size_t n = raw.size();
    if (n < 2) throw InputError("standardize: need at least 2 observations");
    if (!ids.empty() && ids.size() != n) {
        throw DimensionMismatch("standardize: " + std::to_string(ids.size()) + " ids for " +
                                std::to_string(n) + " values");
    }

    double mean = 0.0;
    for (const double v : raw) mean += v;
    mean /= static_cast<double>(n);

    double var = 0.0;
    for (const double v : raw) {
        const double d = v - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    if (var <= 0.0) throw ZeroVariance("standardize: all values equal (" + std::to_string(mean) + ")");
    const double sd = std::sqrt(var);

    Observations out;
    out.ids = std::move(ids);
    if (out.ids.empty()) {
        out.ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.ids.push_back(std::to_string(i + 1));
    }
    out.values.assign(raw.begin(), raw.end());
    out.standardized.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.standardized[i] = (raw[i] - mean) / sd;
    out.sigma = 1.0;
    return out;
}

std::vector<double> spatial_lag(const Observations& z, const SpatialWeights& w) {
    if (w.size() != z.size()) {
        throw DimensionMismatch("spatial_lag: weights n = " + std::to_string(w.size()) +
                                ", observations n = " + std::to_string(z.size()));
    }
    return w.apply(z.standardized);
}

double moran_i(const Observations& z, const SpatialWeights& w) {
    if (w.size() != z.size()) {
        throw DimensionMismatch("moran_i: weights n = " + std::to_string(w.size()) +
                                ", observations n = " + std::to_string(z.size()));
    }
    if (!w.row_standardized()) {
        throw InputError("moran_i: weights must be row-standardized");
    }
    const auto lag = w.apply(z.standardized);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        num += z.standardized[i] * lag[i];
        den += z.standardized[i] * z.standardized[i];
    }
    return num / den;
}

}  // namespace lifmoran
