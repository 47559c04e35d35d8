#include "lifmoran/influence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "lifmoran/errors.hpp"
#include "lifmoran/parallel.hpp"

namespace lifmoran {

namespace {

// Gauss-Kronrod 7-15 nodes and weights (positive half; node 0 last).
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Fn>
std::pair<double, double> gk15(const Fn& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);

    const double fc = f(center);
    double kronrod = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = halfwidth * kKronrodNodes[i];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= halfwidth;
    gauss *= halfwidth;

    // QUADPACK-style conservative error estimate.
    double err = 200.0 * std::abs(kronrod - gauss);
    err *= std::sqrt(err);
    return {kronrod, err};
}

template <typename Fn>
double adaptive_gk(const Fn& f, double a, double b, double abs_tol) {
    if (a == b) return 0.0;

    struct Segment {
        double a, b, tol;
    };
    std::vector<Segment> stack;
    stack.push_back({a, b, abs_tol});

    const double min_width = 1e-13 * std::abs(b - a);
    double total = 0.0;
    std::size_t visited = 0;
    while (!stack.empty()) {
        if (++visited > 200000) {
            throw QuadratureError("adaptive quadrature did not converge on [" +
                                  std::to_string(a) + ", " + std::to_string(b) + "]");
        }
        const Segment seg = stack.back();
        stack.pop_back();
        const auto [value, err] = gk15(f, seg.a, seg.b);
        if (err <= seg.tol || (seg.b - seg.a) <= min_width) {
            total += value;
            continue;
        }
        const double mid = 0.5 * (seg.a + seg.b);
        stack.push_back({seg.a, mid, 0.5 * seg.tol});
        stack.push_back({mid, seg.b, 0.5 * seg.tol});
    }
    return total;
}

void check_location(const SpatialWeights& w, std::size_t location, const char* who) {
    if (location >= w.size()) {
        throw IndexOutOfRange(std::string(who) + ": location " + std::to_string(location) +
                              " out of range for n = " + std::to_string(w.size()));
    }
}

}  // namespace

double influence_kernel(double z1, double lag_sum, double mc, std::size_t n) {
    if (n < 2) throw InputError("influence_kernel: need n >= 2");
    const double nd = static_cast<double>(n);
    const double denom = (nd - 1.0) / nd * z1 * z1 + nd;
    return (2.0 * nd * z1 * lag_sum - z1 * z1 * (1.0 + (nd - 1.0) * mc)) / denom;
}

double contamination_lag_sum(const Observations& z, const SpatialWeights& w,
                             std::size_t location) {
    check_location(w, location, "contamination_lag_sum");
    if (w.is_island(location)) return 0.0;
    return w.column_product(location, z.standardized);
}

std::vector<double> contamination_lag_sums(const Observations& z, const SpatialWeights& w) {
    auto sums = w.transpose_apply(z.standardized);
    for (const std::size_t island : w.island_rows()) sums[island] = 0.0;
    return sums;
}

double contaminate_exact(const Observations& z, const SpatialWeights& w, std::size_t location,
                         double z1) {
    check_location(w, location, "contaminate_exact");
    if (w.size() != z.size()) {
        throw DimensionMismatch("contaminate_exact: weights n = " + std::to_string(w.size()) +
                                ", observations n = " + std::to_string(z.size()));
    }

    const std::size_t n = z.size();
    std::vector<double> contaminated(z.standardized);
    contaminated[location] = z1;

    double mean = 0.0;
    for (const double v : contaminated) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : contaminated) v -= mean;

    const auto lag = w.apply(contaminated);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += contaminated[i] * lag[i];
        den += contaminated[i] * contaminated[i];
    }
    return num / den;
}

double contaminated_moran_closed(const Observations& z, const SpatialWeights& w,
                                 std::size_t location, double z1) {
    check_location(w, location, "contaminated_moran_closed");
    if (w.size() != z.size()) {
        throw DimensionMismatch("contaminated_moran_closed: weights n = " +
                                std::to_string(w.size()) + ", observations n = " +
                                std::to_string(z.size()));
    }

    const std::size_t n = z.size();
    const double nd = static_cast<double>(n);

    // Quadratic form over the entries not touching the contaminated site.
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == location) continue;
        const auto cols = w.row_cols(i);
        const auto weights = w.row_weights(i);
        double acc = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == location) continue;
            acc += weights[k] * z.standardized[cols[k]];
        }
        quad += z.standardized[i] * acc;
    }

    const double lag_sum = contamination_lag_sum(z, w, location);
    const double num = (quad + 2.0 * z1 * lag_sum - z1 * z1 / nd) / nd;
    const double den = (nd + (nd - 1.0) / nd * z1 * z1) / nd;
    return num / den;
}

double influence_at(const Observations& z, const SpatialWeights& w, std::size_t location,
                    double z1) {
    check_location(w, location, "influence_at");
    const double mc = moran_i(z, w);
    const double lag_sum = contamination_lag_sum(z, w, location);
    return influence_kernel(z1, lag_sum, mc, z.size());
}

double lif_from_params(std::size_t n, double mc, double lag_sum, double half_width,
                       double abs_tol) {
    if (n < 2) throw InputError("lif_from_params: need n >= 2");
    if (!(half_width > 0.0)) throw InputError("lif_from_params: half_width must be positive");

    const double nd = static_cast<double>(n);
    const double linear = 2.0 * nd * lag_sum;        // numerator = linear*z1 - curv*z1^2
    const double curv = 1.0 + (nd - 1.0) * mc;

    // I_c changes sign only at the numerator roots: z1 = 0 and, when the
    // quadratic coefficient is nonzero, z1 = linear/curv. Splitting there
    // leaves |I_c| smooth on every panel.
    std::vector<double> cuts{-half_width, half_width};
    if (0.0 > -half_width && 0.0 < half_width) cuts.push_back(0.0);
    if (curv != 0.0) {
        const double root = linear / curv;
        if (root > -half_width && root < half_width && root != 0.0) cuts.push_back(root);
    }
    std::sort(cuts.begin(), cuts.end());

    const auto ic = [&](double z1) { return influence_kernel(z1, lag_sum, mc, n); };

    double total = 0.0;
    const double width = 2.0 * half_width;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        if (b <= a) continue;
        const double panel_tol = abs_tol * (b - a) / width;
        total += std::abs(adaptive_gk(ic, a, b, panel_tol));
    }
    return total;
}

double lif_at(const Observations& z, const SpatialWeights& w, std::size_t location,
              double half_width) {
    check_location(w, location, "lif_at");
    const double mc = moran_i(z, w);
    const double lag_sum = contamination_lag_sum(z, w, location);
    return lif_from_params(z.size(), mc, lag_sum, half_width);
}

double lif_at_exact(const Observations& z, const SpatialWeights& w, std::size_t location,
                    double half_width) {
    check_location(w, location, "lif_at_exact");
    if (!(half_width > 0.0)) throw InputError("lif_at_exact: half_width must be positive");
    const double mc = moran_i(z, w);
    const double nd = static_cast<double>(z.size());
    const auto f = [&](double z1) {
        return std::abs(nd * (contaminate_exact(z, w, location, z1) - mc));
    };
    return adaptive_gk(f, -half_width, half_width, 1e-9);
}

LifScores lif_map(const Observations& z, const SpatialWeights& w, double half_width,
                  bool exact) {
    if (w.size() != z.size()) {
        throw DimensionMismatch("lif_map: weights n = " + std::to_string(w.size()) +
                                ", observations n = " + std::to_string(z.size()));
    }
    const std::size_t n = z.size();
    const double mc = moran_i(z, w);
    const auto lag_sums = contamination_lag_sums(z, w);

    LifScores scores;
    scores.lif.resize(n);
    parallel_for(n, [&](std::size_t i) {
        scores.lif[i] = exact ? lif_at_exact(z, w, i, half_width)
                              : lif_from_params(n, mc, lag_sums[i], half_width);
    });

    scores.order.resize(n);
    std::iota(scores.order.begin(), scores.order.end(), std::size_t{0});
    std::stable_sort(scores.order.begin(), scores.order.end(),
                     [&](std::size_t a, std::size_t b) { return scores.lif[a] > scores.lif[b]; });
    scores.rank.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos) scores.rank[scores.order[pos]] = pos;

    scores.argmax_location = static_cast<std::size_t>(
        std::max_element(scores.lif.begin(), scores.lif.end()) - scores.lif.begin());
    scores.argmin_location = static_cast<std::size_t>(
        std::min_element(scores.lif.begin(), scores.lif.end()) - scores.lif.begin());
    return scores;
}

InfluenceCurve influence_curve(const Observations& z, const SpatialWeights& w,
                               std::size_t location, std::size_t grid_points,
                               double half_width) {
    check_location(w, location, "influence_curve");
    if (grid_points < 3) throw InputError("influence_curve: need at least 3 grid points");
    if (!(half_width > 0.0)) throw InputError("influence_curve: half_width must be positive");

    InfluenceCurve curve;
    curve.location = location;
    curve.mc_baseline = moran_i(z, w);
    curve.lag_sum = contamination_lag_sum(z, w, location);
    curve.lif = lif_from_params(z.size(), curve.mc_baseline, curve.lag_sum, half_width);

    curve.z1_grid.resize(grid_points);
    curve.ic_values.resize(grid_points);
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(grid_points - 1);
        const double z1 = -half_width + 2.0 * half_width * t;
        curve.z1_grid[k] = z1;
        curve.ic_values[k] = influence_kernel(z1, curve.lag_sum, curve.mc_baseline, z.size());
    }
    return curve;
}

namespace {

std::vector<double> linspace(Interval range, std::size_t points, const char* who) {
    if (points < 2) throw InputError(std::string(who) + ": need at least 2 grid points");
    if (range.lo > range.hi) {
        throw EmptyRange(std::string(who) + ": empty range [" + std::to_string(range.lo) + ", " +
                         std::to_string(range.hi) + "]");
    }
    std::vector<double> axis(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(points - 1);
        axis[k] = range.lo + (range.hi - range.lo) * t;
    }
    return axis;
}

}  // namespace

std::vector<InfluenceSurface> influence_surface(std::span<const double> mc_levels,
                                                Interval z1_range, Interval lag_range,
                                                std::size_t z1_points, std::size_t lag_points,
                                                std::size_t n) {
    if (n < 2) throw InputError("influence_surface: need n >= 2");
    if (mc_levels.empty()) throw EmptyRange("influence_surface: no Moran levels given");
    const auto z1_axis = linspace(z1_range, z1_points, "influence_surface");
    const auto lag_axis = linspace(lag_range, lag_points, "influence_surface");

    std::vector<InfluenceSurface> surfaces;
    surfaces.reserve(mc_levels.size());
    for (const double mc : mc_levels) {
        InfluenceSurface surface;
        surface.mc = mc;
        surface.n = n;
        surface.z1 = z1_axis;
        surface.lag = lag_axis;
        surface.ic.resize(z1_axis.size() * lag_axis.size());
        for (std::size_t iz = 0; iz < z1_axis.size(); ++iz) {
            for (std::size_t il = 0; il < lag_axis.size(); ++il) {
                surface.ic[iz * lag_axis.size() + il] =
                    influence_kernel(z1_axis[iz], lag_axis[il], mc, n);
            }
        }
        surfaces.push_back(std::move(surface));
    }
    return surfaces;
}

McSurface influence_surface_mc(Interval z1_range, Interval mc_range, std::size_t z1_points,
                               std::size_t mc_points, std::size_t n) {
    if (n < 2) throw InputError("influence_surface_mc: need n >= 2");
    McSurface surface;
    surface.n = n;
    surface.z1 = linspace(z1_range, z1_points, "influence_surface_mc");
    surface.mc = linspace(mc_range, mc_points, "influence_surface_mc");
    surface.ic.resize(surface.z1.size() * surface.mc.size());
    for (std::size_t iz = 0; iz < surface.z1.size(); ++iz) {
        for (std::size_t im = 0; im < surface.mc.size(); ++im) {
            surface.ic[iz * surface.mc.size() + im] =
                influence_kernel(surface.z1[iz], 0.0, surface.mc[im], n);
        }
    }
    return surface;
}

}  // namespace lifmoran
