#pragma once

#include <vector>

#include "torsion/intmat.hpp"

namespace torsion {

/// Presentation of a quotient of the finite abelian group ⊕ Z/old_inv[j] by
/// the subgroup generated by the rows of a relation matrix. Coordinates are
/// column vectors; `proj` maps old coordinates to new ones, column t of
/// `lift` is a representative of the t-th new generator.
struct QuotientPresentation {
    std::vector<i64> invariants;  // divisibility chain, every entry >= 2
    Mat proj;                     // invariants.size() x old rank
    Mat lift;                     // old rank x invariants.size()
};

QuotientPresentation quotient_presentation(const std::vector<i64>& old_inv, const Mat& relations);

/// Presentation of the subgroup of ⊕ Z/old_inv[j] generated by the rows of
/// `gens`. New coordinates of a subgroup element are obtained by solving
/// against the stored lattice basis (exact, see `subgroup_coords`).
struct SubgroupPresentation {
    std::vector<i64> invariants;
    Mat gens_old;  // old rank x invariants.size(); column t = new generator t
    Mat basis;     // row HNF basis of the subgroup lattice in Z^old_rank
    Mat to_new;    // change of basis applied after solving against `basis`
};

SubgroupPresentation subgroup_presentation(const std::vector<i64>& old_inv, const Mat& gens);

/// New coordinates of `old_vec`, which must lie in the subgroup.
std::vector<i64> subgroup_coords(const SubgroupPresentation& p, const std::vector<i64>& old_vec);

inline void reduce_mod(std::vector<i64>& v, const std::vector<i64>& mods) {
    for (size_t i = 0; i < v.size(); ++i) {
        v[i] %= mods[i];
        if (v[i] < 0) v[i] += mods[i];
    }
}

}  // namespace torsion
