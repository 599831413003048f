#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torsion/bits.hpp"
#include "torsion/intmat.hpp"

namespace torsion {

class FiniteRing;
using RingPtr = std::shared_ptr<const FiniteRing>;

/// A finite commutative ring, given by the invariant factors of its additive
/// group (a divisibility chain d_1 | d_2 | ... | d_k) and multiplication
/// structure constants on the additive generators. Elements are indexed in
/// mixed-radix order; index 0 is zero. Immutable after construction; the
/// constructor checks the ring axioms on generators and precomputes the
/// addition and multiplication tables.
class FiniteRing {
public:
    FiniteRing(std::vector<i64> invariant_factors, std::vector<Mat> mult, std::vector<i64> unit,
               std::string spec_string);

    const std::vector<i64>& invariant_factors() const { return inv_; }
    int gens() const { return int(inv_.size()); }
    i64 order() const { return order_; }
    i64 exponent() const { return inv_.back(); }
    const std::string& spec_string() const { return spec_; }

    int zero() const { return 0; }
    int one() const { return one_; }
    int add(int a, int b) const { return add_tab_[size_t(a) * order_ + b]; }
    int mul(int a, int b) const { return mul_tab_[size_t(a) * order_ + b]; }
    int neg(int a) const { return neg_tab_[a]; }

    std::vector<i64> vec_of(int e) const;
    int elem_of(std::vector<i64> v) const;  // reduces mod invariant factors

    /// Matrix of left multiplication by generator e_i on column vectors.
    const Mat& mult_matrix(int i) const { return mult_[i]; }

private:
    void validate() const;
    void build_tables();

    std::vector<i64> inv_;
    std::vector<Mat> mult_;  // mult_[i].at(l, j) = coefficient of e_l in e_i * e_j
    std::vector<i64> unit_vec_;
    std::string spec_;
    i64 order_ = 0;
    int one_ = 0;
    std::vector<uint16_t> add_tab_, mul_tab_, neg_tab_;
};

/// An ideal, canonically represented by its element set together with the
/// row HNF basis of its lift lattice. Two ideals of the same ring are equal
/// iff their canonical bases (equivalently element sets) coincide.
struct Ideal {
    RingPtr ring;
    Bits elems;  // over ring element indices
    Mat basis;   // gens() x gens() upper triangular, unique
    i64 order = 0;

    bool is_proper() const { return order < ring->order(); }
    friend bool operator==(const Ideal& a, const Ideal& b) { return a.elems == b.elems; }
};

Ideal ideal_from_elems(const RingPtr& r, const Bits& elems);

constexpr i64 kDefaultRingCap = 256;

FiniteRing make_zmod_value(i64 n, i64 cap);
RingPtr make_zmod(i64 n, i64 cap = kDefaultRingCap);
RingPtr make_poly_quotient(i64 p, const std::vector<i64>& monic_coeffs, i64 cap = kDefaultRingCap);
RingPtr make_product(const RingPtr& r1, const RingPtr& r2, i64 cap = kDefaultRingCap);

/// All ideals, sorted by (order, canonical basis).
std::vector<Ideal> enumerate_ideals(const RingPtr& r);

bool is_prime_ideal(const RingPtr& r, const Ideal& i);

RingPtr quotient_ring(const RingPtr& r, const Ideal& i);

/// The prime spectrum with its containment (specialization) order. For a
/// finite ring every prime is maximal, so the order is an antichain; the
/// structure still carries the full relation so that synthetic posets can
/// exercise the up-closure logic in tests.
struct SpecPoset {
    RingPtr ring;  // null for synthetic posets
    std::vector<Ideal> primes;
    std::vector<Bits> leq;  // leq[i] = { j : p_i is contained in p_j }
    int count() const { return int(leq.size()); }
    bool is_antichain() const;
};
using PosetPtr = std::shared_ptr<const SpecPoset>;

PosetPtr spec(const RingPtr& r);
PosetPtr make_synthetic_poset(std::vector<Bits> leq);

std::optional<Ideal> is_local(const RingPtr& r);

/// An upward-closed (specialization closed) set of primes.
struct SpecClosedSet {
    PosetPtr poset;
    Bits members;
};

/// All upward-closed subsets, in ascending bitmask order.
std::vector<SpecClosedSet> spec_closed_sets(const PosetPtr& p);

}  // namespace torsion
