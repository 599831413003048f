#pragma once

#include <vector>

#include "torsion/universe.hpp"

namespace torsion {

/// A subcategory relative to a universe: an isomorphism-closed class set
/// containing the zero module. Every calligraphic letter of the torsion
/// calculus (T, F, S, X, Y, U, V) is a value of this type.
struct Subcategory {
    UniversePtr u;
    Bits members;

    bool contains(int c) const { return members.test(c); }
    friend bool operator==(const Subcategory& a, const Subcategory& b) {
        return a.members == b.members;
    }
    friend bool operator!=(const Subcategory& a, const Subcategory& b) { return !(a == b); }
};

Subcategory make_subcat(UniversePtr u, Bits members);
Subcategory subcat_zero(const UniversePtr& u);
Subcategory subcat_all(const UniversePtr& u);

/// An (ordinary) torsion-theory candidate; `certified` means both
/// characterizations have been checked.
struct TTPair {
    Subcategory x, y;
    bool certified = false;
};

struct STorsionTheory {
    Subcategory t, f, heart;
    bool certified = false;
};

Subcategory ext_product(const Subcategory& a, const Subcategory& b);
Subcategory left_perp(const Subcategory& c);
Subcategory right_perp(const Subcategory& c);
Subcategory intersect(const Subcategory& a, const Subcategory& b);

/// Hom(A, B) = 0 for all members.
bool subcat_hom_vanishes(const Subcategory& a, const Subcategory& b);

bool is_closed_sub(const Subcategory& c);
bool is_closed_quot(const Subcategory& c);
bool is_closed_ext(const Subcategory& c);
bool is_serre(const Subcategory& c);

/// Least Serre subcategory containing c, relative to the universe.
Subcategory serre_closure(const Subcategory& c);

/// The two equivalent torsion-theory characterizations, kept as separate
/// code paths; verification asserts they agree on every candidate pair.
bool is_torsion_theory_hom(const Subcategory& x, const Subcategory& y);
bool is_torsion_theory_canon_seq(const Subcategory& x, const Subcategory& y);

struct TTVerdict {
    bool hom = false;
    bool canon_seq = false;
    bool agree() const { return hom == canon_seq; }
    bool holds() const { return hom && canon_seq; }
};
TTVerdict check_torsion_theory(const Subcategory& x, const Subcategory& y);

/// TT2 / TT3 closure operators for a Serre heart S.
Subcategory s_left_operator(const Subcategory& f, const Subcategory& s);
Subcategory s_right_operator(const Subcategory& t, const Subcategory& s);

bool is_s_torsion_theory(const Subcategory& t, const Subcategory& f, const Subcategory& s);

bool is_canonical(const Subcategory& t, const Subcategory& f);
bool is_left_canonical(const Subcategory& t, const Subcategory& f, const Subcategory& s);
bool is_right_canonical(const Subcategory& t, const Subcategory& f, const Subcategory& s);

/// T ∩ F, which must equal the declared heart of a certified theory.
Subcategory heart_of(const STorsionTheory& stt);

enum class EnumMode { brute, generated };
constexpr int kBruteClassCap = 22;

std::vector<Subcategory> enumerate_serre(const UniversePtr& u, EnumMode mode = EnumMode::brute,
                                         Exec exec = Exec::parallel);
std::vector<TTPair> enumerate_torsion_theories(const UniversePtr& u,
                                               EnumMode mode = EnumMode::brute,
                                               Exec exec = Exec::parallel);
std::vector<STorsionTheory> enumerate_s_torsion_theories(const UniversePtr& u,
                                                         const Subcategory& s,
                                                         EnumMode mode = EnumMode::brute,
                                                         Exec exec = Exec::parallel);

}  // namespace torsion
