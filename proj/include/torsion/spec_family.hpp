#pragma once

#include <optional>

#include "torsion/report_types.hpp"
#include "torsion/subcat.hpp"

namespace torsion {

/// Hereditary torsion theory attached to a specialization closed set:
/// torsion part by support, torsion-free part by associated primes, both
/// certified against the torsion-theory axioms and the Serre property.
struct HereditaryTT {
    SpecClosedSet w;
    TTPair pair;
    bool torsion_part_serre = false;
    bool certified = false;
};

/// T_W = { M : Supp(M) inside W }.
Subcategory t_w(const UniversePtr& u, const SpecClosedSet& w);
/// F_W = { M : Ass(M) misses W }; computed both via Ass and via Gamma_W
/// vanishing on representatives, which must agree.
Subcategory f_w(const UniversePtr& u, const SpecClosedSet& w);

HereditaryTT hereditary_tt(const UniversePtr& u, const SpecClosedSet& w);

/// Classification cross-check: { torsion theories with sub-closed torsion
/// part } equals { (T_W, F_W) } and both count 2^|Spec|; also T_W equals the
/// Serre closure of its simples R/p, p in W.
MutationReport gabriel_check(const UniversePtr& u, EnumMode mode = EnumMode::brute,
                             Exec exec = Exec::parallel);

/// The class of the Matlis dual of R, the model of E_R(R/m) over a finite
/// local ring; empty when the ring is not local.
std::optional<int> injective_hull_class(const UniversePtr& u);

/// Local ring with the hull class inside C forces ^perp C = 0; skipped
/// (reported, never silently passed) when the hypothesis fails.
MutationReport check_lemma_orthogonal_vanish(const UniversePtr& u, const Subcategory& c);

/// Under the hull hypothesis, left canonical is equivalent to T = S.
MutationReport check_lemma_stable_heart(const STorsionTheory& stt);

/// The full example verifier: X = T_V, S = T_W, statements (1)-(6) with the
/// locality-gated parts skipped (and marked) when the hypothesis fails.
std::vector<MutationReport> verify_example(const UniversePtr& u, const SpecClosedSet& v,
                                           const SpecClosedSet& w, const SpecClosedSet& z);

}  // namespace torsion
