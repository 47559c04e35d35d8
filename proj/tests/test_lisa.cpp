#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "lifmoran/errors.hpp"
#include "lifmoran/lisa.hpp"
#include "oracles.hpp"

using namespace lifmoran;

TEST_SUITE_BEGIN("lisa");

namespace {

std::vector<double> checkerboard16() {
    std::vector<double> v(16);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) v[r * 4 + c] = (r + c) % 2 == 0 ? 1.0 : -1.0;
    }
    return v;
}

}  // namespace

TEST_CASE("local Moran is -1 everywhere on the checkerboard") {
    const auto w = row_standardize(lattice_rook(4, 4, false));
    const auto obs = standardize(checkerboard16());
    const auto local = local_moran(obs, w);
    for (const double li : local) CHECK(li == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("zero-valued location has zero local Moran") {
    const auto w = row_standardize(lattice_rook(1, 3, false));
    const auto obs = standardize(std::vector<double>{1.0, 2.0, 3.0});  // middle value maps to 0
    const auto local = local_moran(obs, w);
    CHECK(local[1] == 0.0);
}

TEST_CASE("mean of local Moran equals the global coefficient") {
    Rng rng(41);
    const auto w = row_standardize(lattice_rook(5, 5, false));
    for (int trial = 0; trial < 10; ++trial) {
        const auto obs = standardize(oracle::random_vector(25, rng));
        const auto local = local_moran(obs, w);
        double mean = 0.0;
        for (const double li : local) mean += li;
        mean /= static_cast<double>(local.size());
        CHECK(mean == doctest::Approx(moran_i(obs, w)).epsilon(1e-10));
    }
}

TEST_CASE("inference is deterministic for a fixed seed") {
    Rng rng(43);
    const auto w = row_standardize(lattice_rook(5, 5, false));
    const auto obs = standardize(oracle::random_vector(25, rng));
    const auto a = lisa_inference(obs, w, 199, 12345, 0.05);
    const auto b = lisa_inference(obs, w, 199, 12345, 0.05);
    REQUIRE(a.p_value.size() == b.p_value.size());
    CHECK(std::memcmp(a.p_value.data(), b.p_value.data(),
                      a.p_value.size() * sizeof(double)) == 0);
    CHECK(a.local_i == b.local_i);
    CHECK(a.quadrant == b.quadrant);

    const auto c = lisa_inference(obs, w, 199, 54321, 0.05);
    CHECK(a.p_value != c.p_value);  // different seed, different draw
}

TEST_CASE("p-values live in [1/(M+1), 1]") {
    Rng rng(47);
    const auto w = row_standardize(lattice_rook(4, 5, false));
    const auto obs = standardize(oracle::random_vector(20, rng));
    const auto result = lisa_inference(obs, w, 99, 7, 0.05);
    for (std::size_t i = 0; i < result.size(); ++i) {
        CHECK(result.p_value[i] >= 1.0 / 100.0);
        CHECK(result.p_value[i] <= 1.0);
    }
}

TEST_CASE("a minimum surrounded by maxima is labeled LH") {
    // Location 0 holds the smallest value, all its neighbors the largest.
    std::vector<double> raw = {-10.0, 10.0, 10.0, 10.0, 1.0, -1.0, 0.5, -0.5, 1.5};
    const auto w = row_standardize(lattice_rook(3, 3, false));
    const auto obs = standardize(raw);
    const auto result = lisa_inference(obs, w, 99, 1, 0.05);
    CHECK(result.quadrant[0] == Quadrant::LH);
}

TEST_CASE("quadrants are invariant under positive rescaling") {
    Rng rng(53);
    const auto w = row_standardize(lattice_queen(4, 4, false));
    const auto raw = oracle::random_vector(16, rng, 3.0);
    std::vector<double> scaled(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) scaled[i] = 250.0 * raw[i] + 7.0;
    const auto a = lisa_inference(standardize(raw), w, 99, 9, 0.05);
    const auto b = lisa_inference(standardize(scaled), w, 99, 9, 0.05);
    CHECK(a.quadrant == b.quadrant);
}

TEST_CASE("ties count as high") {
    // Middle value standardizes to exactly 0; its lag is positive.
    const auto w = row_standardize(lattice_rook(1, 3, false));
    const auto obs = standardize(std::vector<double>{1.0, 2.0, 3.0});
    const auto result = lisa_inference(obs, w, 99, 3, 0.05);
    CHECK(obs.standardized[1] == 0.0);
    CHECK(result.quadrant[1] == Quadrant::HH);
}

TEST_CASE("islands are excluded from inference") {
    std::vector<std::vector<WeightEntry>> rows(4);
    rows[0] = {{1, 1.0}};
    rows[1] = {{0, 1.0}, {3, 1.0}};
    rows[3] = {{1, 1.0}};
    const auto w = row_standardize(SpatialWeights::build(4, rows));
    const auto obs = standardize(std::vector<double>{4.0, -1.0, 9.0, 2.0});
    const auto result = lisa_inference(obs, w, 99, 5, 0.05);
    CHECK(result.quadrant[2] == Quadrant::Island);
    CHECK(result.p_value[2] == 1.0);
    CHECK(result.local_i[2] == 0.0);
    CHECK_FALSE(result.significant(2));
}

TEST_CASE("parameter validation") {
    const auto w = row_standardize(lattice_rook(2, 2, false));
    const auto obs = standardize(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK_THROWS_AS(lisa_inference(obs, w, 98, 1, 0.05), InputError);
    CHECK_THROWS_AS(lisa_inference(obs, w, 999, 1, 0.0), InputError);
    CHECK_THROWS_AS(lisa_inference(obs, w, 999, 1, 1.0), InputError);
}

TEST_SUITE_END();
