#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lifmoran/moran.hpp"
#include "lifmoran/weights.hpp"

namespace lifmoran {

/// Sampled influence curve of one location: I_c over a symmetric z1 range,
/// plus the scalar LIF (integral of |I_c| over the range).
struct InfluenceCurve {
    std::size_t location = 0;
    std::vector<double> z1_grid;    // ascending over [-half_width, half_width]
    std::vector<double> ic_values;  // same length as z1_grid
    double lif = 0.0;               // >= 0
    double lag_sum = 0.0;           // sum_{i != loc} w_{i,loc} z_i
    double mc_baseline = 0.0;       // global Moran before contamination
};

/// Per-location LIF scores with ranking.
struct LifScores {
    std::vector<double> lif;          // per location, >= 0
    std::vector<std::size_t> order;   // locations sorted by descending lif (ties by index)
    std::vector<std::size_t> rank;    // rank[i] = 0-based position of location i in order
    std::size_t argmax_location = 0;
    std::size_t argmin_location = 0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Closed-form influence of contaminating one site, as a function of the
/// contamination value z1, the site's incoming weighted sum of the other
/// values (lag_sum = sum_{i != site} w_{i,site} z_i), the pre-contamination
/// Moran coefficient mc, and the sample size n:
///
///     I_c(z1) = (2 n z1 lag_sum - z1^2 (1 + (n-1) mc)) / ((n-1)/n z1^2 + n)
///
/// This equals n * (contaminated Moran - mc) exactly when the weights matrix
/// is symmetric and doubly stochastic and the site held 0 before
/// contamination; for general row-standardized weights it is the standard
/// approximation, with contaminate_exact() available as the exact route.
double influence_kernel(double z1, double lag_sum, double mc, std::size_t n);

// lag_sum for one location (column form, sum_i w_{i,loc} z_i); islands use 0.
double contamination_lag_sum(const Observations& z, const SpatialWeights& w, std::size_t location);

// All lag sums at once (one pass over the weight entries).
std::vector<double> contamination_lag_sums(const Observations& z, const SpatialWeights& w);

/// Exact contaminated Moran coefficient: replaces the standardized value at
/// `location` with z1, re-centers the full vector to mean 0 (no variance
/// rescale), and recomputes (Z^T W Z)/(Z^T Z). This is the brute-force
/// oracle; it is valid for any weights and any pre-contamination value.
double contaminate_exact(const Observations& z, const SpatialWeights& w, std::size_t location,
                         double z1);

/// Closed-form contaminated Moran coefficient:
///
///        (1/n) [ sum_{i,j != loc} w_ij z_i z_j + 2 z1 lag_sum - z1^2 / n ]
///   MC_c = ---------------------------------------------------------------
///                      (1/n) [ n + (n-1)/n z1^2 ]
///
/// Exact under the same conditions as influence_kernel; elsewhere an
/// approximation (see contaminate_exact for the exact route).
double contaminated_moran_closed(const Observations& z, const SpatialWeights& w,
                                 std::size_t location, double z1);

// influence_kernel evaluated with the dataset's global Moran coefficient and
// the location's own lag_sum.
double influence_at(const Observations& z, const SpatialWeights& w, std::size_t location,
                    double z1);

/// LIF = integral of |I_c| over [-half_width, half_width], by adaptive
/// Gauss-Kronrod quadrature to absolute tolerance abs_tol. The integrand's
/// numerator is quadratic in z1, so the (at most two) sign changes are split
/// off analytically and each panel is smooth.
double lif_from_params(std::size_t n, double mc, double lag_sum, double half_width = 2.0,
                       double abs_tol = 1e-9);

double lif_at(const Observations& z, const SpatialWeights& w, std::size_t location,
              double half_width = 2.0);

// LIF through the exact contamination oracle instead of the closed form:
// integrates |n (contaminate_exact(z1) - mc)|. O(entry_count) per integrand
// evaluation.
double lif_at_exact(const Observations& z, const SpatialWeights& w, std::size_t location,
                    double half_width = 2.0);

// LIF for every location (parallel over locations, output independent of
// scheduling). Islands are scored with lag_sum = 0. exact switches every
// location to the exact-oracle route.
LifScores lif_map(const Observations& z, const SpatialWeights& w, double half_width = 2.0,
                  bool exact = false);

InfluenceCurve influence_curve(const Observations& z, const SpatialWeights& w,
                               std::size_t location, std::size_t grid_points = 101,
                               double half_width = 2.0);

/// I_c evaluated on a z1 x lag_sum grid at one fixed Moran level.
struct InfluenceSurface {
    double mc = 0.0;
    std::size_t n = 0;
    std::vector<double> z1;   // axis, ascending
    std::vector<double> lag;  // axis, ascending
    std::vector<double> ic;   // row-major: ic[i_z1 * lag.size() + i_lag]
};

/// I_c on a z1 x mc grid with lag_sum fixed at 0.
struct McSurface {
    std::size_t n = 0;
    std::vector<double> z1;
    std::vector<double> mc;
    std::vector<double> ic;  // row-major: ic[i_z1 * mc.size() + i_mc]
};

// One surface per Moran level. Grid dimensions must be >= 2; ranges must be
// non-empty (lo <= hi) or EmptyRange is thrown.
std::vector<InfluenceSurface> influence_surface(std::span<const double> mc_levels,
                                                Interval z1_range, Interval lag_range,
                                                std::size_t z1_points, std::size_t lag_points,
                                                std::size_t n);

McSurface influence_surface_mc(Interval z1_range, Interval mc_range, std::size_t z1_points,
                               std::size_t mc_points, std::size_t n);

}  // namespace lifmoran
