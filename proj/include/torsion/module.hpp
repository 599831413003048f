#pragma once

#include <memory>
#include <vector>

#include "torsion/bits.hpp"
#include "torsion/intmat.hpp"
#include "torsion/ring.hpp"

namespace torsion {

/// A finite module over a FiniteRing: invariant factors of the additive
/// group (a divisibility chain) plus one action matrix per ring generator.
/// Cheap to copy (the payload is shared and immutable). Element indices are
/// mixed-radix over the invariant factors; index 0 is zero.
class FiniteModule {
public:
    FiniteModule(RingPtr ring, std::vector<i64> invariants, std::vector<Mat> actions);
    static FiniteModule zero(RingPtr ring);

    const RingPtr& ring() const;
    const std::vector<i64>& invariant_factors() const;
    int gens() const;
    i64 order() const;
    const Mat& action(int ring_gen) const;

    std::vector<i64> vec_of(int e) const;
    int elem_of(const std::vector<i64>& v) const;  // reduces mod invariants
    int add(int a, int b) const;
    int neg(int a) const;
    int act_gen(int ring_gen, int x) const;
    int act(int ring_elem, int x) const;
    int gen_elem(int j) const;  // element index of generator j
    i64 elem_order(int x) const;
    Bits ann_elem(int x) const;  // over ring element indices

    /// Serialization key (order, invariants, permutation-minimized action
    /// matrices); equal keys imply isomorphic modules, and the key gives the
    /// deterministic class ordering inside a universe.
    std::vector<i64> canon_key() const;

    friend bool operator==(const FiniteModule& a, const FiniteModule& b);

    struct Impl;

private:
    std::shared_ptr<const Impl> p_;
};

/// Module homomorphism given on generators: column j of `matrix` is the
/// image of domain generator j in codomain coordinates.
struct ModuleHom {
    FiniteModule dom, cod;
    Mat matrix;

    int apply(int x) const;
    bool is_zero() const;
    bool well_defined_and_equivariant() const;
};

struct SubmoduleEmbedding {
    FiniteModule ambient;
    Bits elems;  // over ambient element indices
    FiniteModule sub;
    ModuleHom inclusion;  // sub -> ambient, injective
};

struct QuotientResult {
    FiniteModule quotient;
    ModuleHom projection;  // ambient -> quotient, surjective
};

struct HomGroup {
    std::vector<ModuleHom> basis;  // independent generators of Hom(M, N)
    std::vector<i64> orders;       // additive order of each generator
    i64 cardinality = 1;
};

FiniteModule regular_module(const RingPtr& r);
FiniteModule cyclic_module(const RingPtr& r, const Ideal& i);
FiniteModule direct_sum(const FiniteModule& m, const FiniteModule& n);

HomGroup hom_group(const FiniteModule& m, const FiniteModule& n);
/// Every element of Hom(M, N); throws ConfigError when the group is larger
/// than `cap`.
std::vector<ModuleHom> all_homs(const FiniteModule& m, const FiniteModule& n, i64 cap = 1 << 16);

SubmoduleEmbedding image(const ModuleHom& phi);

/// Element sets of all submodules, ascending by (size, bit pattern).
std::vector<Bits> submodule_sets(const FiniteModule& m);
SubmoduleEmbedding submodule_embedding(const FiniteModule& m, const Bits& elems);
std::vector<SubmoduleEmbedding> submodules(const FiniteModule& m);
QuotientResult quotient_module(const SubmoduleEmbedding& e);

/// Exact up to the node budget; throws UndecidedError when the search budget
/// is exhausted rather than guessing.
bool is_isomorphic(const FiniteModule& m, const FiniteModule& n, i64 budget = 10'000'000);

Ideal annihilator(const FiniteModule& m);
Bits support(const FiniteModule& m, const PosetPtr& poset);
Bits ass(const FiniteModule& m, const PosetPtr& poset);
SubmoduleEmbedding gamma_w(const FiniteModule& m, const SpecClosedSet& w);
FiniteModule matlis_dual(const FiniteModule& m);

/// Isomorphism-invariant signature used to bucket candidates before running
/// the search in is_isomorphic / class lookup.
std::uint64_t module_sig(const FiniteModule& m);

}  // namespace torsion
