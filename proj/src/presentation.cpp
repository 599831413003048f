#include "torsion/presentation.hpp"

#include <cassert>
#include <stdexcept>

namespace torsion {

QuotientPresentation quotient_presentation(const std::vector<i64>& old_inv, const Mat& relations) {
    int r = int(old_inv.size());
    assert(relations.cols == r || relations.rows == 0);
    Mat rel(r + relations.rows, r);
    for (int j = 0; j < r; ++j) rel.at(j, j) = old_inv[j];
    for (int i = 0; i < relations.rows; ++i)
        for (int j = 0; j < r; ++j) rel.at(r + i, j) = relations.at(i, j);

    SmithForm s = smith_form(rel);
    // The relation lattice has full rank (it contains diag(old_inv)), so all
    // r diagonal entries are positive.
    std::vector<int> keep;
    for (int t = 0; t < r; ++t) {
        i64 d = s.d.at(t, t);
        assert(d > 0);
        if (d > 1) keep.push_back(t);
    }
    QuotientPresentation q;
    for (int t : keep) q.invariants.push_back(s.d.at(t, t));
    int k = int(keep.size());
    // Row-vector form: new_coords(x) = x * v. Column convention: proj[t][j] = v[j][keep[t]].
    q.proj = Mat(k, r);
    q.lift = Mat(r, k);
    for (int t = 0; t < k; ++t)
        for (int j = 0; j < r; ++j) {
            q.proj.at(t, j) = s.v.at(j, keep[t]);
            q.lift.at(j, t) = s.v_inv.at(keep[t], j);
        }
    return q;
}

SubgroupPresentation subgroup_presentation(const std::vector<i64>& old_inv, const Mat& gens) {
    int r = int(old_inv.size());
    Mat span(gens.rows + r, r);
    for (int i = 0; i < gens.rows; ++i)
        for (int j = 0; j < r; ++j) span.at(i, j) = gens.at(i, j);
    for (int j = 0; j < r; ++j) span.at(gens.rows + j, j) = old_inv[j];

    Mat basis = row_hnf(span);
    assert(basis.rows == r);

    // Express diag(old_inv) in basis coordinates; the subgroup is the
    // quotient of the basis lattice by that sublattice.
    Mat c(r, r);
    std::vector<i64> y;
    for (int i = 0; i < r; ++i) {
        std::vector<i64> v(r, 0);
        v[i] = old_inv[i];
        bool ok = solve_upper_row(basis, v, y);
        assert(ok);
        (void)ok;
        for (int j = 0; j < r; ++j) c.at(i, j) = y[j];
    }
    SmithForm s = smith_form(c);
    std::vector<int> keep;
    for (int t = 0; t < r; ++t) {
        i64 d = s.d.at(t, t);
        assert(d > 0);
        if (d > 1) keep.push_back(t);
    }
    int k = int(keep.size());
    SubgroupPresentation p;
    for (int t : keep) p.invariants.push_back(s.d.at(t, t));
    p.basis = basis;
    p.to_new = Mat(r, k);
    for (int j = 0; j < r; ++j)
        for (int t = 0; t < k; ++t) p.to_new.at(j, t) = s.v.at(j, keep[t]);
    // Generator t in old coordinates: (row keep[t] of v_inv) * basis.
    p.gens_old = Mat(r, k);
    for (int t = 0; t < k; ++t)
        for (int j = 0; j < r; ++j) {
            i64 acc = 0;
            for (int l = 0; l < r; ++l) acc += s.v_inv.at(keep[t], l) * basis.at(l, j);
            acc %= old_inv[j];
            if (acc < 0) acc += old_inv[j];
            p.gens_old.at(j, t) = acc;
        }
    return p;
}

std::vector<i64> subgroup_coords(const SubgroupPresentation& p, const std::vector<i64>& old_vec) {
    std::vector<i64> y;
    if (!solve_upper_row(p.basis, old_vec, y))
        throw std::logic_error("subgroup_coords: vector not in subgroup lattice");
    int k = int(p.invariants.size());
    std::vector<i64> out(k, 0);
    for (int t = 0; t < k; ++t) {
        i64 acc = 0;
        for (int j = 0; j < p.basis.rows; ++j) acc += y[j] * p.to_new.at(j, t);
        acc %= p.invariants[t];
        if (acc < 0) acc += p.invariants[t];
        out[t] = acc;
    }
    return out;
}

}  // namespace torsion
