#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kvforge/rational.hpp"

namespace kvforge {

// Dense matrix over exact rationals. Desk-scale systems only (the solvers
// stack at most a few hundred rows), so no sparsity tricks.
class RatMatrix {
  public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rat& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> data_;
};

// Which variables the elimination prefers as pivots. FirstToLast walks
// columns left to right; LastToFirst right to left, which makes the
// trailing variables the determined ones and the leading ones free.
enum class PivotOrder { FirstToLast, LastToFirst };

struct RrefResult {
    RatMatrix m;                    // reduced matrix (same shape as input)
    std::vector<std::size_t> pivot_rows;  // row of pivot k
    std::vector<std::size_t> pivot_cols;  // column of pivot k
};

inline RrefResult rref(RatMatrix a, PivotOrder order = PivotOrder::FirstToLast) {
    RrefResult res;
    const std::size_t nr = a.rows(), nc = a.cols();
    std::vector<std::size_t> col_seq(nc);
    for (std::size_t i = 0; i < nc; ++i)
        col_seq[i] = order == PivotOrder::FirstToLast ? i : nc - 1 - i;

    std::size_t pivot_row = 0;
    for (std::size_t c : col_seq) {
        if (pivot_row == nr) break;
        std::size_t sel = nr;
        for (std::size_t r = pivot_row; r < nr; ++r) {
            if (!is_zero(a.at(r, c))) {
                sel = r;
                break;
            }
        }
        if (sel == nr) continue;
        if (sel != pivot_row)
            for (std::size_t k = 0; k < nc; ++k) std::swap(a.at(sel, k), a.at(pivot_row, k));
        Rat inv = a.at(pivot_row, c);
        for (std::size_t k = 0; k < nc; ++k) a.at(pivot_row, k) /= inv;
        for (std::size_t r = 0; r < nr; ++r) {
            if (r == pivot_row) continue;
            Rat f = a.at(r, c);
            if (is_zero(f)) continue;
            for (std::size_t k = 0; k < nc; ++k) a.at(r, k) -= f * a.at(pivot_row, k);
        }
        res.pivot_rows.push_back(pivot_row);
        res.pivot_cols.push_back(c);
        ++pivot_row;
    }
    res.m = std::move(a);
    return res;
}

struct AffineSolution {
    std::vector<Rat> particular;  // free variables pinned to zero
    std::size_t kernel_dimension = 0;
};

// Solves A x = b exactly. The returned representative sets every free
// variable to zero; PivotOrder controls which variables count as free.
inline std::optional<AffineSolution> solve_affine(const RatMatrix& a, const std::vector<Rat>& b,
                                                  PivotOrder order = PivotOrder::FirstToLast) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_affine: size mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[r];
    }
    // keep the rhs column out of the pivot hunt: eliminate over the
    // variable columns only, then read consistency off the reduced rows
    RrefResult red;
    {
        const std::size_t nr = aug.rows(), nc = a.cols();
        std::vector<std::size_t> col_seq(nc);
        for (std::size_t i = 0; i < nc; ++i)
            col_seq[i] = order == PivotOrder::FirstToLast ? i : nc - 1 - i;
        std::size_t pivot_row = 0;
        for (std::size_t c : col_seq) {
            if (pivot_row == nr) break;
            std::size_t sel = nr;
            for (std::size_t r = pivot_row; r < nr; ++r)
                if (!is_zero(aug.at(r, c))) {
                    sel = r;
                    break;
                }
            if (sel == nr) continue;
            if (sel != pivot_row)
                for (std::size_t k = 0; k < aug.cols(); ++k)
                    std::swap(aug.at(sel, k), aug.at(pivot_row, k));
            Rat inv = aug.at(pivot_row, c);
            for (std::size_t k = 0; k < aug.cols(); ++k) aug.at(pivot_row, k) /= inv;
            for (std::size_t r = 0; r < nr; ++r) {
                if (r == pivot_row) continue;
                Rat f = aug.at(r, c);
                if (is_zero(f)) continue;
                for (std::size_t k = 0; k < aug.cols(); ++k)
                    aug.at(r, k) -= f * aug.at(pivot_row, k);
            }
            red.pivot_rows.push_back(pivot_row);
            red.pivot_cols.push_back(c);
            ++pivot_row;
        }
    }
    // inconsistent iff a zeroed row keeps a nonzero rhs
    for (std::size_t r = red.pivot_rows.size(); r < aug.rows(); ++r)
        if (!is_zero(aug.at(r, a.cols()))) return std::nullopt;

    AffineSolution sol;
    sol.particular.assign(a.cols(), Rat(0));
    for (std::size_t k = 0; k < red.pivot_cols.size(); ++k)
        sol.particular[red.pivot_cols[k]] = aug.at(red.pivot_rows[k], a.cols());
    sol.kernel_dimension = a.cols() - red.pivot_cols.size();
    return sol;
}

// Basis of the exact nullspace of A, one vector per free variable, in
// ascending free-column order.
inline std::vector<std::vector<Rat>> nullspace(const RatMatrix& a) {
    RrefResult red = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t c : red.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (std::size_t free_c = 0; free_c < a.cols(); ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<Rat> v(a.cols(), Rat(0));
        v[free_c] = Rat(1);
        for (std::size_t k = 0; k < red.pivot_cols.size(); ++k)
            v[red.pivot_cols[k]] = -red.m.at(red.pivot_rows[k], free_c);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace kvforge
