#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "torsion/module.hpp"
#include "torsion/parallel.hpp"
#include "torsion/ring.hpp"

namespace torsion {

/// The closed world: every isomorphism class of modules of order <= bound,
/// with precomputed submodule / quotient / extension tables. Class 0 is the
/// zero module; classes are sorted by (order, invariants, canonical action
/// matrices), so the layout is byte-reproducible.
///
/// Completeness: every module of order <= B is a quotient of R^n for some
/// n <= log2 B. The builder reaches all of them by iterating "quotients of
/// M (+) R" to a fixpoint: an (i+1)-generated module N = M' + Rx is a
/// quotient of M' (+) R with M' an i-generated submodule of N, so each round
/// adds the next generator count and the fixpoint is exhaustive.
///
/// Extension witnesses are relative to the universe: an extension whose
/// middle term exceeds the bound is invisible. Orthogonals and canonical
/// sequences only ever need witnesses bounded by a module already in hand
/// (submodules and quotients of M are at most |M|), so the operations used
/// by the torsion-theory checks are exact at every bound.
struct Universe {
    RingPtr ring;
    PosetPtr poset;
    i64 bound = 1;
    std::vector<FiniteModule> classes;
    std::vector<i64> class_order;
    std::vector<Bits> sub;   // sub[c]  = classes embeddable in c
    std::vector<Bits> quot;  // quot[c] = quotient classes of c
    std::vector<std::vector<Bits>> ext;  // ext[m][c] = { d : 0 -> c -> m -> d -> 0 }
    std::vector<Bits> vanish;            // vanish[a] = { b : Hom(a, b) = 0 }
    std::vector<Bits> class_supp, class_ass;  // over poset primes
    std::unordered_map<std::uint64_t, std::vector<int>> sig_index;

    int num_classes() const { return int(classes.size()); }
    int class_of(const FiniteModule& m) const;
    bool hom_vanishes(int c1, int c2) const { return vanish[c1].test(c2); }
    Bits image_classes(int c1, int c2) const { return quot[c1] & sub[c2]; }

    /// Test hook for fault-injection: breaks one table invariant.
    void corrupt_for_testing();
};

using UniversePtr = std::shared_ptr<const Universe>;

constexpr i64 kDefaultBoundCap = 64;

UniversePtr build_universe(const RingPtr& r, i64 bound, Exec exec = Exec::parallel,
                           i64 bound_cap = kDefaultBoundCap);

/// Table invariant checker; returns human-readable violations (empty when
/// sound). Run by the verification driver so that fault injection trips it.
std::vector<std::string> check_universe_invariants(const Universe& u);

}  // namespace torsion
