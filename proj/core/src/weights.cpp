#include "lifmoran/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lifmoran/errors.hpp"

namespace lifmoran {

SpatialWeights SpatialWeights::build(std::size_t n,
                                     const std::vector<std::vector<WeightEntry>>& rows,
                                     bool row_standardized) {
    if (rows.size() != n) {
        throw DimensionMismatch("weights: got " + std::to_string(rows.size()) + " rows for n = " +
                                std::to_string(n));
    }

    SpatialWeights w;
    w.n_ = n;
    w.row_standardized_ = row_standardized;
    w.offsets_.resize(n + 1, 0);

    std::size_t total = 0;
    for (const auto& row : rows) total += row.size();
    w.cols_.reserve(total);
    w.weights_.reserve(total);

    for (std::size_t i = 0; i < n; ++i) {
        w.offsets_[i] = w.cols_.size();
        double sum = 0.0;
        for (const auto& entry : rows[i]) {
            if (entry.col >= n) {
                throw IndexOutOfRange("weights: column " + std::to_string(entry.col) +
                                      " out of range in row " + std::to_string(i));
            }
            if (entry.col == i) {
                throw InputError("weights: diagonal entry stored at row " + std::to_string(i));
            }
            if (!(entry.weight > 0.0)) {
                throw InputError("weights: non-positive weight at (" + std::to_string(i) + ", " +
                                 std::to_string(entry.col) + ")");
            }
            w.cols_.push_back(entry.col);
            w.weights_.push_back(entry.weight);
            sum += entry.weight;
        }
        if (rows[i].empty()) {
            w.islands_.push_back(i);
        } else if (row_standardized && std::abs(sum - 1.0) > 1e-12) {
            throw InputError("weights: row " + std::to_string(i) +
                             " flagged standardized but sums to " + std::to_string(sum));
        }
    }
    w.offsets_[n] = w.cols_.size();
    return w;
}

double SpatialWeights::row_sum(std::size_t i) const {
    const auto ws = row_weights(i);
    return std::accumulate(ws.begin(), ws.end(), 0.0);
}

std::vector<double> SpatialWeights::apply(std::span<const double> x) const {
    if (x.size() != n_) {
        throw DimensionMismatch("apply: vector length " + std::to_string(x.size()) +
                                " != n = " + std::to_string(n_));
    }
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            acc += weights_[k] * x[cols_[k]];
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> SpatialWeights::transpose_apply(std::span<const double> x) const {
    if (x.size() != n_) {
        throw DimensionMismatch("transpose_apply: vector length " + std::to_string(x.size()) +
                                " != n = " + std::to_string(n_));
    }
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double xi = x[i];
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            out[cols_[k]] += weights_[k] * xi;
        }
    }
    return out;
}

double SpatialWeights::column_product(std::size_t col, std::span<const double> x) const {
    if (col >= n_) throw IndexOutOfRange("column_product: column " + std::to_string(col));
    if (x.size() != n_) {
        throw DimensionMismatch("column_product: vector length " + std::to_string(x.size()) +
                                " != n = " + std::to_string(n_));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            if (cols_[k] == col) acc += weights_[k] * x[i];
        }
    }
    return acc;
}

namespace {

SpatialWeights lattice(std::size_t rows, std::size_t cols, bool torus, bool queen) {
    if (rows < 1 || cols < 1 || rows * cols < 2) {
        throw InputError("lattice: need rows*cols >= 2, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
    const std::size_t n = rows * cols;
    const long nr = static_cast<long>(rows);
    const long nc = static_cast<long>(cols);

    static constexpr long kRook[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    static constexpr long kDiag[4][2] = {{-1, -1}, {-1, 1}, {1, -1}, {1, 1}};

    std::vector<std::vector<WeightEntry>> adj(n);
    for (long r = 0; r < nr; ++r) {
        for (long c = 0; c < nc; ++c) {
            const std::size_t i = static_cast<std::size_t>(r * nc + c);
            auto add = [&](long dr, long dc) {
                long rr = r + dr;
                long cc = c + dc;
                if (torus) {
                    rr = (rr % nr + nr) % nr;
                    cc = (cc % nc + nc) % nc;
                } else if (rr < 0 || rr >= nr || cc < 0 || cc >= nc) {
                    return;
                }
                const std::size_t j = static_cast<std::size_t>(rr * nc + cc);
                if (j == i) return;  // wrap-around self link on 1-wide torus axes
                for (const auto& e : adj[i]) {
                    if (e.col == j) return;  // both wrap directions can reach the same cell
                }
                adj[i].push_back({j, 1.0});
            };
            for (const auto& d : kRook) add(d[0], d[1]);
            if (queen) {
                for (const auto& d : kDiag) add(d[0], d[1]);
            }
        }
    }
    return SpatialWeights::build(n, adj, false);
}

}  // namespace

SpatialWeights lattice_rook(std::size_t rows, std::size_t cols, bool torus) {
    return lattice(rows, cols, torus, false);
}

SpatialWeights lattice_queen(std::size_t rows, std::size_t cols, bool torus) {
    return lattice(rows, cols, torus, true);
}

SpatialWeights row_standardize(const SpatialWeights& w) {
    const std::size_t n = w.size();
    std::vector<std::vector<WeightEntry>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cols = w.row_cols(i);
        const auto weights = w.row_weights(i);
        if (cols.empty()) continue;
        const double sum = w.row_sum(i);
        rows[i].reserve(cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k) {
            rows[i].push_back({cols[k], weights[k] / sum});
        }
    }
    return SpatialWeights::build(n, rows, true);
}

SpatialWeights reorder(const SpatialWeights& w, std::span<const std::size_t> order) {
    const std::size_t n = w.size();
    if (order.size() != n) {
        throw DimensionMismatch("reorder: permutation length " + std::to_string(order.size()) +
                                " != n = " + std::to_string(n));
    }
    std::vector<std::size_t> new_of_old(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (order[i] >= n || new_of_old[order[i]] != n) {
            throw InputError("reorder: order is not a permutation of [0, n)");
        }
        new_of_old[order[i]] = i;
    }
    std::vector<std::vector<WeightEntry>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cols = w.row_cols(order[i]);
        const auto weights = w.row_weights(order[i]);
        rows[i].reserve(cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k) {
            rows[i].push_back({new_of_old[cols[k]], weights[k]});
        }
    }
    return SpatialWeights::build(n, rows, w.row_standardized());
}

}  // namespace lifmoran
