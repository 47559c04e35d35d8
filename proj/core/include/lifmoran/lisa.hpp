#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lifmoran/moran.hpp"
#include "lifmoran/weights.hpp"

namespace lifmoran {

// Quadrant of the Moran scatterplot. Ties (value or lag exactly 0) count as
// high so labeling is deterministic. Islands get their own status.
enum class Quadrant : std::uint8_t { HH, LL, HL, LH, Island };

const char* to_string(Quadrant q);

struct LisaResult {
    std::vector<double> local_i;
    std::vector<Quadrant> quadrant;
    std::vector<double> p_value;       // in [1/(n_permutations+1), 1]; 1 for islands
    std::size_t n_permutations = 0;
    std::uint64_t seed = 0;
    double alpha = 0.05;

    std::size_t size() const { return local_i.size(); }
    bool significant(std::size_t i) const {
        return quadrant[i] != Quadrant::Island && p_value[i] < alpha;
    }
};

// local_i = z_i * lag_i; 0 for islands. Mean over locations equals the
// global Moran coefficient when there are no islands.
std::vector<double> local_moran(const Observations& z, const SpatialWeights& w);

// Conditional permutation inference: per location i, z_i stays fixed and each
// permutation draws the location's neighbor values from the remaining n-1
// standardized values without replacement. Two-sided pseudo p-value
// p = (#{|I*_i| >= |I_i|} + 1) / (n_permutations + 1).
//
// Per-location streams are derived from (seed, location), so the output is
// identical regardless of thread count. Islands are excluded from inference
// (quadrant Island, p = 1).
LisaResult lisa_inference(const Observations& z, const SpatialWeights& w,
                          std::size_t n_permutations, std::uint64_t seed, double alpha = 0.05);

}  // namespace lifmoran
