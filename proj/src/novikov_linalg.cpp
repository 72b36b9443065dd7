#include "mirrorcurve/novikov_linalg.hpp"

#include <algorithm>

namespace mc {

NovikovMatrix NovikovMatrix::identity(std::size_t n) {
    NovikovMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Novikov::one();
    return m;
}

NovikovMatrix operator*(const NovikovMatrix& a, const NovikovMatrix& b) {
    if (a.cols() != b.rows()) throw SpecError("matrix shape mismatch in product");
    NovikovMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                if (b.at(k, j).is_zero()) continue;
                out.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        }
    return out;
}

NovikovMatrix operator+(const NovikovMatrix& a, const NovikovMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw SpecError("matrix shape mismatch in sum");
    NovikovMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
    return out;
}

NovikovMatrix operator-(const NovikovMatrix& a, const NovikovMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw SpecError("matrix shape mismatch in diff");
    NovikovMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j) - b.at(i, j);
    return out;
}

std::vector<Novikov> NovikovMatrix::apply(const std::vector<Novikov>& x) const {
    if (x.size() != cols_) throw SpecError("vector length mismatch in apply");
    std::vector<Novikov> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            if (at(i, j).is_zero() || x[j].is_zero()) continue;
            out[i] += at(i, j) * x[j];
        }
    return out;
}

void NovikovMatrix::truncate(const Rat& prec) {
    for (auto& e : data_) e = e.truncated(prec);
}

ExtRat NovikovMatrix::min_valuation() const {
    ExtRat m = ExtRat::infinity();
    for (const auto& e : data_)
        if (!e.is_zero()) m = ExtRat::min(m, e.val());
    return m;
}

bool NovikovMatrix::is_zero_mod(const Rat& lambda) const {
    ExtRat m = min_valuation();
    return !(m < ExtRat::of(lambda));
}

RankResult valuation_rank(const NovikovMatrix& m, const Rat& lambda,
                          const std::vector<Rat>* row_weights, const std::vector<Rat>* col_weights,
                          bool want_kernel) {
    NovikovMatrix w = m;
    const std::size_t R = w.rows(), C = w.cols();
    auto rw = [&](std::size_t i) { return row_weights ? (*row_weights)[i] : Rat(0); };
    auto cw = [&](std::size_t j) { return col_weights ? (*col_weights)[j] : Rat(0); };

    std::vector<bool> row_used(R, false), col_used(C, false);
    RankResult res;

    for (;;) {
        bool found = false;
        std::size_t pi = 0, pj = 0;
        ExtRat best = ExtRat::infinity();
        for (std::size_t i = 0; i < R; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < C; ++j) {
                if (col_used[j]) continue;
                const Novikov& e = w.at(i, j);
                if (e.is_zero()) continue;
                ExtRat v = e.val() + (rw(i) - cw(j));
                if (v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        }
        if (!found || !(best < ExtRat::of(lambda))) break;

        row_used[pi] = true;
        col_used[pj] = true;
        res.pivot_valuations.push_back(best.value());
        res.pivots.push_back({pi, pj});
        ++res.rank;

        Novikov pinv = w.at(pi, pj).inverse(ExtRat::of(lambda + lambda));
        for (std::size_t i = 0; i < R; ++i) {
            if (i == pi || w.at(i, pj).is_zero()) continue;
            Novikov factor = w.at(i, pj) * pinv;
            for (std::size_t j = 0; j < C; ++j) {
                if (w.at(pi, j).is_zero()) continue;
                w.at(i, j) -= factor * w.at(pi, j);
            }
        }
    }

    if (want_kernel) {
        // Back-substitute: one kernel vector per pivot-free column.
        for (std::size_t j = 0; j < C; ++j) {
            if (col_used[j]) continue;
            std::vector<Novikov> v(C);
            v[j] = Novikov::one();
            for (std::size_t p = 0; p < res.pivots.size(); ++p) {
                auto [pi, pj] = res.pivots[p];
                if (w.at(pi, j).is_zero()) continue;
                v[pj] = -(w.at(pi, j) * w.at(pi, pj).inverse(ExtRat::of(lambda + lambda)));
            }
            res.kernel.push_back(std::move(v));
        }
    }
    return res;
}

}  // namespace mc
