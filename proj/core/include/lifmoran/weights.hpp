#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lifmoran {

// One stored neighbor link: column index plus a strictly positive weight.
struct WeightEntry {
    std::size_t col;
    double weight;

    friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
};

/// Sparse row-major spatial weights matrix. Immutable after construction.
///
/// Invariants enforced by build():
///   - stored weights are strictly positive, the diagonal is never stored,
///   - indices lie in [0, n),
///   - island rows (no neighbors) are kept and tracked, never dropped,
///   - when flagged row-standardized, every non-island row sums to 1
///     within 1e-12.
class SpatialWeights {
public:
    SpatialWeights() = default;

    // rows[i] lists the (col, weight) neighbors of location i.
    static SpatialWeights build(std::size_t n, const std::vector<std::vector<WeightEntry>>& rows,
                                bool row_standardized = false);

    std::size_t size() const { return n_; }
    bool row_standardized() const { return row_standardized_; }
    std::size_t entry_count() const { return cols_.size(); }

    std::span<const std::size_t> row_cols(std::size_t i) const {
        return {cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::span<const double> row_weights(std::size_t i) const {
        return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

    const std::vector<std::size_t>& island_rows() const { return islands_; }
    bool is_island(std::size_t i) const { return degree(i) == 0; }

    double row_sum(std::size_t i) const;

    // y = W x (the spatial-lag product). x.size() must equal n.
    std::vector<double> apply(std::span<const double> x) const;

    // y = W^T x; y[j] = sum_i w_ij x[i], the incoming weighted sums used by
    // the influence computations.
    std::vector<double> transpose_apply(std::span<const double> x) const;

    // Single column of the transpose product: sum_i w_ij x[i].
    double column_product(std::size_t col, std::span<const double> x) const;

    friend bool operator==(const SpatialWeights&, const SpatialWeights&) = default;

private:
    std::size_t n_ = 0;
    bool row_standardized_ = false;
    std::vector<std::size_t> offsets_;  // n + 1
    std::vector<std::size_t> cols_;
    std::vector<double> weights_;
    std::vector<std::size_t> islands_;  // ascending
};

// Binary rook (edge) adjacency on a rows x cols grid, numbered row-major from
// the top-left. With torus=true the edges wrap and every cell has exactly
// four neighbors. Not row-standardized.
SpatialWeights lattice_rook(std::size_t rows, std::size_t cols, bool torus = false);

// As rook plus diagonal adjacency (interior cells have eight neighbors).
SpatialWeights lattice_queen(std::size_t rows, std::size_t cols, bool torus = false);

// Divides each non-island row by its sum. Island rows stay empty and remain
// flagged; the result is marked row-standardized.
SpatialWeights row_standardize(const SpatialWeights& w);

// Reorders locations: new index i corresponds to old index order[i]. order
// must be a permutation of [0, n).
SpatialWeights reorder(const SpatialWeights& w, std::span<const std::size_t> order);

// GAL adjacency-list format. Identifiers are arbitrary tokens, mapped to
// indices in first-appearance order (record heads and neighbor mentions
// alike). Weights read from GAL are binary 1.0 and not row-standardized.
struct GalFile {
    SpatialWeights weights;
    std::vector<std::string> ids;
};

GalFile read_gal(std::istream& in, const std::string& source_name = "<stream>");
GalFile read_gal_file(const std::string& path);

// Canonical form: "n" header, records in index order, neighbor lists in
// stored order, one trailing newline per line. Writing what read_gal parsed
// reproduces the neighbor structure exactly; writing is idempotent on its
// own output.
void write_gal(std::ostream& out, const SpatialWeights& w, std::span<const std::string> ids = {});
void write_gal_file(const std::string& path, const SpatialWeights& w,
                    std::span<const std::string> ids = {});

}  // namespace lifmoran
