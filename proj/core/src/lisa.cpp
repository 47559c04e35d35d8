#include "lifmoran/lisa.hpp"

#include <cmath>
#include <string>

#include "lifmoran/errors.hpp"
#include "lifmoran/parallel.hpp"
#include "lifmoran/rng.hpp"

namespace lifmoran {

const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::HH: return "HH";
        case Quadrant::LL: return "LL";
        case Quadrant::HL: return "HL";
        case Quadrant::LH: return "LH";
        case Quadrant::Island: return "ISLAND";
    }
    return "?";
}

std::vector<double> local_moran(const Observations& z, const SpatialWeights& w) {
    if (w.size() != z.size()) {
        throw DimensionMismatch("local_moran: weights n = " + std::to_string(w.size()) +
                                ", observations n = " + std::to_string(z.size()));
    }
    if (!w.row_standardized()) {
        throw InputError("local_moran: weights must be row-standardized");
    }
    const auto lag = w.apply(z.standardized);
    std::vector<double> local(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) local[i] = z.standardized[i] * lag[i];
    return local;
}

namespace {

Quadrant classify(double zi, double lag) {
    const bool high_z = zi >= 0.0;  // ties count as high
    const bool high_lag = lag >= 0.0;
    if (high_z) return high_lag ? Quadrant::HH : Quadrant::HL;
    return high_lag ? Quadrant::LH : Quadrant::LL;
}

}  // namespace

LisaResult lisa_inference(const Observations& z, const SpatialWeights& w,
                          std::size_t n_permutations, std::uint64_t seed, double alpha) {
    if (n_permutations < 99) {
        throw InputError("lisa_inference: need at least 99 permutations");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InputError("lisa_inference: alpha must lie in (0, 1)");
    }

    const std::size_t n = z.size();
    const auto lag = spatial_lag(z, w);

    LisaResult result;
    result.local_i = local_moran(z, w);
    result.quadrant.resize(n);
    result.p_value.assign(n, 1.0);
    result.n_permutations = n_permutations;
    result.seed = seed;
    result.alpha = alpha;

    for (std::size_t i = 0; i < n; ++i) {
        result.quadrant[i] = w.is_island(i) ? Quadrant::Island
                                            : classify(z.standardized[i], lag[i]);
    }

    // Conditional permutation per location: z_i stays fixed, its neighbor
    // positions are refilled from the other n-1 values without replacement.
    // Each location draws from its own (seed, location) stream, so the result
    // is the same no matter how the loop is scheduled.
    parallel_for(n, [&](std::size_t i) {
        if (w.is_island(i)) return;

        const double observed = std::abs(result.local_i[i]);
        const double zi = z.standardized[i];
        const auto weights = w.row_weights(i);
        const std::size_t k = weights.size();

        std::vector<double> pool;
        pool.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) pool.push_back(z.standardized[j]);
        }

        Rng rng = Rng::stream(seed, i);
        std::size_t count_exceed = 0;
        for (std::size_t rep = 0; rep < n_permutations; ++rep) {
            // Partial Fisher-Yates: the first k entries become a uniform
            // ordered sample without replacement.
            double permuted_lag = 0.0;
            for (std::size_t t = 0; t < k; ++t) {
                const std::size_t j = t + static_cast<std::size_t>(rng.bounded(pool.size() - t));
                std::swap(pool[t], pool[j]);
                permuted_lag += weights[t] * pool[t];
            }
            if (std::abs(zi * permuted_lag) >= observed) ++count_exceed;
        }
        result.p_value[i] = static_cast<double>(count_exceed + 1) /
                            static_cast<double>(n_permutations + 1);
    });

    return result;
}

}  // namespace lifmoran
