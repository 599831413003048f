#pragma once

#include <cstdint>
#include <vector>

namespace torsion {

using i64 = std::int64_t;

/// Dense row-major integer matrix. All linear algebra in the project is
/// exact over Z; sizes stay small (a handful of generators), so there is no
/// attempt at sparsity.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<i64> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}

    i64& at(int r, int c) { return a[size_t(r) * cols + c]; }
    i64 at(int r, int c) const { return a[size_t(r) * cols + c]; }

    static Mat identity(int n);

    friend bool operator==(const Mat& x, const Mat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

Mat mat_mul(const Mat& x, const Mat& y);

/// u * a * v = d with u, v unimodular and d diagonal, d[0][0] | d[1][1] | ...
/// all diagonal entries non-negative.
struct SmithForm {
    Mat d, u, v;
    Mat u_inv, v_inv;
};

SmithForm smith_form(const Mat& a);

/// Unique row Hermite normal form of the lattice spanned by the rows of `a`:
/// row echelon, positive pivots, entries above each pivot reduced into
/// [0, pivot). Zero rows are dropped, so the result has rank many rows.
Mat row_hnf(const Mat& a);

/// Solves y * b = v for a row vector y, where b is a square upper-triangular
/// row basis with nonzero diagonal (as produced by row_hnf on a full-rank
/// lattice). Returns false if v is not in the row lattice.
bool solve_upper_row(const Mat& b, const std::vector<i64>& v, std::vector<i64>& y);

/// |det| of a square matrix (Bareiss). Used for lattice index computations.
i64 det_abs(const Mat& a);

}  // namespace torsion
