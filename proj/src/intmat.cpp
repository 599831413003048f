#include "torsion/intmat.hpp"

#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace torsion {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    assert(x.cols == y.rows);
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            i64 v = x.at(i, k);
            if (!v) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

namespace {

void swap_rows(Mat& m, int i, int j) {
    if (i == j) return;
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}

void swap_cols(Mat& m, int i, int j) {
    if (i == j) return;
    for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}

// row[i] += f * row[j]
void add_row(Mat& m, int i, int j, i64 f) {
    if (!f) return;
    for (int c = 0; c < m.cols; ++c) m.at(i, c) += f * m.at(j, c);
}

void add_col(Mat& m, int i, int j, i64 f) {
    if (!f) return;
    for (int r = 0; r < m.rows; ++r) m.at(r, i) += f * m.at(r, j);
}

void negate_row(Mat& m, int i) {
    for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
}

}  // namespace

SmithForm smith_form(const Mat& a) {
    SmithForm s;
    s.d = a;
    s.u = Mat::identity(a.rows);
    s.v = Mat::identity(a.cols);
    s.u_inv = Mat::identity(a.rows);
    s.v_inv = Mat::identity(a.cols);
    Mat& d = s.d;

    // Row ops apply to u (and inversely to u_inv columns); col ops to v.
    auto row_add = [&](int i, int j, i64 f) {
        add_row(d, i, j, f);
        add_row(s.u, i, j, f);
        add_col(s.u_inv, j, i, -f);
    };
    auto col_add = [&](int i, int j, i64 f) {
        add_col(d, i, j, f);
        add_col(s.v, i, j, f);
        add_row(s.v_inv, j, i, -f);
    };
    auto row_swap = [&](int i, int j) {
        swap_rows(d, i, j);
        swap_rows(s.u, i, j);
        swap_cols(s.u_inv, i, j);
    };
    auto col_swap = [&](int i, int j) {
        swap_cols(d, i, j);
        swap_cols(s.v, i, j);
        swap_rows(s.v_inv, i, j);
    };
    auto row_neg = [&](int i) {
        negate_row(d, i);
        negate_row(s.u, i);
        for (int r = 0; r < s.u_inv.rows; ++r) s.u_inv.at(r, i) = -s.u_inv.at(r, i);
    };

    int n = std::min(a.rows, a.cols);
    for (int t = 0; t < n; ++t) {
        for (;;) {
            // Locate minimal nonzero |entry| in the trailing block.
            int pr = -1, pc = -1;
            i64 best = 0;
            for (int i = t; i < d.rows; ++i)
                for (int j = t; j < d.cols; ++j) {
                    i64 v = std::llabs(d.at(i, j));
                    if (v && (pr < 0 || v < best)) {
                        best = v;
                        pr = i;
                        pc = j;
                    }
                }
            if (pr < 0) break;  // trailing block is zero
            row_swap(t, pr);
            col_swap(t, pc);
            if (d.at(t, t) < 0) row_neg(t);

            bool clean = true;
            for (int i = t + 1; i < d.rows; ++i)
                if (d.at(i, t)) {
                    row_add(i, t, -(d.at(i, t) / d.at(t, t)));
                    if (d.at(i, t)) clean = false;
                }
            for (int j = t + 1; j < d.cols; ++j)
                if (d.at(t, j)) {
                    col_add(j, t, -(d.at(t, j) / d.at(t, t)));
                    if (d.at(t, j)) clean = false;
                }
            if (!clean) continue;

            // Pivot divides every entry of the trailing block?
            int br = -1;
            for (int i = t + 1; i < d.rows && br < 0; ++i)
                for (int j = t + 1; j < d.cols; ++j)
                    if (d.at(i, j) % d.at(t, t)) {
                        br = i;
                        break;
                    }
            if (br < 0) break;
            row_add(t, br, 1);
        }
    }
    return s;
}

Mat row_hnf(const Mat& a) {
    Mat m = a;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        // Reduce column `col` below `row` to a single entry by gcd steps.
        for (;;) {
            int p = -1;
            i64 best = 0;
            for (int i = row; i < m.rows; ++i) {
                i64 v = std::llabs(m.at(i, col));
                if (v && (p < 0 || v < best)) {
                    best = v;
                    p = i;
                }
            }
            if (p < 0) break;
            swap_rows(m, row, p);
            if (m.at(row, col) < 0) negate_row(m, row);
            bool done = true;
            for (int i = row + 1; i < m.rows; ++i)
                if (m.at(i, col)) {
                    add_row(m, i, row, -(m.at(i, col) / m.at(row, col)));
                    if (m.at(i, col)) done = false;
                }
            if (done) break;
        }
        if (m.at(row, col)) {
            for (int i = 0; i < row; ++i) {
                i64 q = m.at(i, col) / m.at(row, col);
                if (m.at(i, col) % m.at(row, col) < 0) --q;  // floor division
                add_row(m, i, row, -q);
            }
            ++row;
        }
    }
    Mat out(row, m.cols);
    for (int i = 0; i < row; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j);
    return out;
}

bool solve_upper_row(const Mat& b, const std::vector<i64>& v, std::vector<i64>& y) {
    assert(b.rows == b.cols && int(v.size()) == b.cols);
    int n = b.rows;
    y.assign(n, 0);
    std::vector<i64> r = v;
    // y * b = v with b upper triangular: column j only sees rows i <= j, so
    // forward substitution works.
    for (int i = 0; i < n; ++i) {
        assert(b.at(i, i) != 0);
        if (r[i] % b.at(i, i)) return false;
        y[i] = r[i] / b.at(i, i);
        for (int j = i; j < n; ++j) r[j] -= y[i] * b.at(i, j);
    }
    for (int j = 0; j < n; ++j)
        if (r[j]) return false;
    return true;
}

i64 det_abs(const Mat& a) {
    assert(a.rows == a.cols);
    Mat m = a;
    int n = m.rows;
    i64 prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (!m.at(k, k)) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k)) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            swap_rows(m, k, p);
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return std::llabs(m.at(n - 1, n - 1));
}

}  // namespace torsion
