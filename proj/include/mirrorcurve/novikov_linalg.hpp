#pragma once

#include <cstddef>
#include <vector>

#include "mirrorcurve/novikov.hpp"

namespace mc {

/// Dense rectangular matrix over the truncated Novikov ring. All entries share
/// one precision (the minimum of the entries' precisions is enforced on read).
class NovikovMatrix {
  public:
    NovikovMatrix() = default;
    NovikovMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Novikov& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Novikov& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    static NovikovMatrix identity(std::size_t n);
    friend NovikovMatrix operator*(const NovikovMatrix& a, const NovikovMatrix& b);
    friend NovikovMatrix operator+(const NovikovMatrix& a, const NovikovMatrix& b);
    friend NovikovMatrix operator-(const NovikovMatrix& a, const NovikovMatrix& b);

    std::vector<Novikov> apply(const std::vector<Novikov>& x) const;

    void truncate(const Rat& prec);
    /// Minimal valuation over the nonzero entries (infinity for the zero matrix).
    ExtRat min_valuation() const;
    bool is_zero_mod(const Rat& lambda) const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Novikov> data_;
};

struct RankResult {
    std::size_t rank = 0;
    std::vector<Rat> pivot_valuations;           // one per pivot, in elimination order
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
    /// Basis of the kernel mod T^lambda, recovered from the elimination record.
    std::vector<std::vector<Novikov>> kernel;
};

/// Gaussian elimination choosing at each step the pivot of minimal valuation
/// (ties broken by row then column index). Pivots of valuation >= lambda are
/// not taken; rank is the number of pivots found. Optional basis weights shift
/// the valuation used for pivoting and for deciding "zero mod lambda":
/// a matrix entry M(i,j) is weighed as val(M(i,j)) + row_w[i] - col_w[j].
RankResult valuation_rank(const NovikovMatrix& m, const Rat& lambda,
                          const std::vector<Rat>* row_weights = nullptr,
                          const std::vector<Rat>* col_weights = nullptr,
                          bool want_kernel = false);

}  // namespace mc
