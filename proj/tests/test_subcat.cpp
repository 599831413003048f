#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torsion/errors.hpp"
#include "torsion/spec_family.hpp"
#include "torsion/subcat.hpp"

using namespace torsion;

namespace {

struct Fixture {
    RingPtr r6 = make_zmod(6);
    UniversePtr u6 = build_universe(r6, 36);
    int c2, c3, c6;  // classes of Z/2, Z/3, Z/6
    Subcategory t2, t3;  // hereditary torsion classes at the two primes

    Fixture() {
        auto ideals = enumerate_ideals(r6);
        c2 = u6->class_of(cyclic_module(r6, ideals[2]));
        c3 = u6->class_of(cyclic_module(r6, ideals[1]));
        c6 = u6->class_of(regular_module(r6));
        auto closed = spec_closed_sets(u6->poset);
        // prime index of (2): the prime of order 3 = {0,2,4}
        int at2 = u6->poset->primes[0].order == 3 ? 0 : 1;
        SpecClosedSet w2{u6->poset, Bits(2)}, w3{u6->poset, Bits(2)};
        w2.members.set(at2);
        w3.members.set(1 - at2);
        t2 = t_w(u6, w2);
        t3 = t_w(u6, w3);
    }

    Subcategory of(std::initializer_list<int> classes) {
        Bits b(u6->num_classes());
        b.set(0);
        for (int c : classes) b.set(c);
        return Subcategory{u6, b};
    }
};

// deterministic generator for random subcategories
struct Rng {
    std::uint64_t s = 88172645463325252ull;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "ext_product") {
    // {0} * B = B and A * {0} = A
    Subcategory b = of({c2, c6});
    CHECK(ext_product(subcat_zero(u6), b) == b);
    CHECK(ext_product(b, subcat_zero(u6)) == b);

    // {0, Z/2} * {0, Z/3} = {0, Z/2, Z/3, Z/6}
    Subcategory prod = ext_product(of({c2}), of({c3}));
    CHECK(prod == of({c2, c3, c6}));

    // T_V * T_W = T_{V cup W}
    auto closed = spec_closed_sets(u6->poset);
    for (const auto& v : closed)
        for (const auto& w : closed) {
            SpecClosedSet uw{u6->poset, v.members | w.members};
            CHECK(ext_product(t_w(u6, v), t_w(u6, w)) == t_w(u6, uw));
        }

    // monotone in both arguments
    Rng rng;
    for (int it = 0; it < 30; ++it) {
        Subcategory a{u6, Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        Subcategory b2{u6, Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        Subcategory bigger{u6, b2.members | Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        CHECK(ext_product(a, b2).members.subset_of(ext_product(a, bigger).members));
        CHECK(ext_product(b2, a).members.subset_of(ext_product(bigger, a).members));
        CHECK(a.members.subset_of(ext_product(a, b2).members));
        CHECK(b2.members.subset_of(ext_product(a, b2).members));
    }
}

TEST_CASE_FIXTURE(Fixture, "orthogonals") {
    CHECK(left_perp(subcat_zero(u6)) == subcat_all(u6));
    CHECK(left_perp(subcat_all(u6)) == subcat_zero(u6));
    CHECK(right_perp(subcat_all(u6)) == subcat_zero(u6));
    CHECK(left_perp(t3) == t2);
    CHECK(right_perp(t2) == t3);

    // C cap perp(C) = 0 for arbitrary subcategories
    Rng rng;
    for (int it = 0; it < 50; ++it) {
        Subcategory c{u6, Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        CHECK(intersect(c, left_perp(c)) == subcat_zero(u6));
        CHECK(intersect(c, right_perp(c)) == subcat_zero(u6));
    }
}

TEST_CASE_FIXTURE(Fixture, "closure predicates") {
    CHECK(is_closed_sub(subcat_all(u6)));
    CHECK(is_closed_quot(subcat_all(u6)));
    CHECK(is_closed_ext(subcat_all(u6)));

    // {0, Z/6} is not closed under submodules (Z/2 is missing)
    CHECK_FALSE(is_closed_sub(of({c6})));

    // over Z/4: {0, Z/2} is not extension closed
    auto r4 = make_zmod(4);
    auto u4 = build_universe(r4, 16);
    int s2 = u4->class_of(cyclic_module(r4, enumerate_ideals(r4)[1]));
    Bits b(u4->num_classes());
    b.set(0);
    b.set(s2);
    CHECK_FALSE(is_closed_ext(Subcategory{u4, b}));

    CHECK(is_serre(subcat_zero(u6)));
    CHECK(is_serre(subcat_all(u6)));
    CHECK(is_serre(t2));
    CHECK_FALSE(is_serre(of({c6})));
}

TEST_CASE_FIXTURE(Fixture, "serre closure") {
    CHECK(serre_closure(subcat_zero(u6)) == subcat_zero(u6));
    CHECK(serre_closure(subcat_all(u6)) == subcat_all(u6));

    // closure of the simples R/p for p in W equals T_W
    for (const auto& w : spec_closed_sets(u6->poset)) {
        Bits gen(u6->num_classes());
        gen.set(0);
        for (int i : w.members.indices())
            gen.set(u6->class_of(cyclic_module(r6, u6->poset->primes[i])));
        CHECK(serre_closure(Subcategory{u6, gen}) == t_w(u6, w));
    }

    // monotone, idempotent, extensive on random inputs
    Rng rng;
    for (int it = 0; it < 40; ++it) {
        Subcategory a{u6, Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        Subcategory b{u6, a.members | Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        Subcategory ca = serre_closure(a);
        CHECK(a.members.subset_of(ca.members));
        CHECK(serre_closure(ca) == ca);
        CHECK(ca.members.subset_of(serre_closure(b).members));
        CHECK(is_serre(ca));
    }
}

TEST_CASE_FIXTURE(Fixture, "serre enumeration: brute, generated, and the frozen counts") {
    auto brute = enumerate_serre(u6, EnumMode::brute);
    CHECK(brute.size() == 4);
    auto generated = enumerate_serre(u6, EnumMode::generated);
    REQUIRE(generated.size() == brute.size());
    for (size_t i = 0; i < brute.size(); ++i) CHECK(brute[i] == generated[i]);

    auto u4 = build_universe(make_zmod(4), 16);
    CHECK(enumerate_serre(u4, EnumMode::brute).size() == 2);
    CHECK(enumerate_serre(u4, EnumMode::generated).size() == 2);

    for (const auto& s : brute) CHECK(is_serre(s));
}

TEST_CASE_FIXTURE(Fixture, "torsion theory characterizations agree") {
    CHECK(check_torsion_theory(subcat_zero(u6), subcat_all(u6)).holds());
    CHECK(check_torsion_theory(subcat_all(u6), subcat_zero(u6)).holds());
    CHECK(check_torsion_theory(t2, t3).holds());

    // both code paths on every candidate (X, X^perp) pair
    for (std::uint64_t m = 0; m < (1u << 13); ++m) {
        Subcategory x{u6, Bits::from_mask(14, (m << 1) | 1)};
        Subcategory y = right_perp(x);
        TTVerdict v = check_torsion_theory(x, y);
        CHECK(v.agree());
    }
}

TEST_CASE_FIXTURE(Fixture, "torsion theory enumeration") {
    auto tts = enumerate_torsion_theories(u6);
    REQUIRE(tts.size() == 4);
    bool seen_t2 = false, seen_t3 = false, seen_bot = false, seen_top = false;
    for (const auto& p : tts) {
        CHECK(p.certified);
        if (p.x == subcat_zero(u6) && p.y == subcat_all(u6)) seen_bot = true;
        if (p.x == subcat_all(u6) && p.y == subcat_zero(u6)) seen_top = true;
        if (p.x == t2 && p.y == t3) seen_t2 = true;
        if (p.x == t3 && p.y == t2) seen_t3 = true;
    }
    CHECK(seen_bot);
    CHECK(seen_top);
    CHECK(seen_t2);
    CHECK(seen_t3);

    auto u4 = build_universe(make_zmod(4), 16);
    CHECK(enumerate_torsion_theories(u4).size() == 2);

    auto gen = enumerate_torsion_theories(u6, EnumMode::generated);
    REQUIRE(gen.size() == tts.size());
    for (size_t i = 0; i < gen.size(); ++i) {
        CHECK(gen[i].x == tts[i].x);
        CHECK(gen[i].y == tts[i].y);
    }
}

TEST_CASE_FIXTURE(Fixture, "s operators") {
    // S = all absorbs everything
    CHECK(s_left_operator(of({c2}), subcat_all(u6)) == subcat_all(u6));
    // S = {0} degenerates to the orthogonal
    Rng rng;
    for (int it = 0; it < 30; ++it) {
        Subcategory f{u6, Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        CHECK(s_left_operator(f, subcat_zero(u6)) == left_perp(f));
        CHECK(s_right_operator(f, subcat_zero(u6)) == right_perp(f));
    }
    // computed value over Z/6 with S = T_2, F = all
    CHECK(s_left_operator(subcat_all(u6), t2) == t2);
    CHECK(s_right_operator(t2, t2) == subcat_all(u6));

    // Galois: antitone and L o R o L = L
    for (int it = 0; it < 30; ++it) {
        Subcategory a{u6, Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        Subcategory b{u6, a.members | Bits::from_mask(14, (rng.next() & 0x3fff) | 1)};
        const Subcategory& s = t2;
        CHECK(s_left_operator(b, s).members.subset_of(s_left_operator(a, s).members));
        CHECK(s_right_operator(b, s).members.subset_of(s_right_operator(a, s).members));
        Subcategory l = s_left_operator(a, s);
        Subcategory rl = s_right_operator(l, s);
        CHECK(s_left_operator(rl, s) == l);
    }

    CHECK_THROWS_AS(s_left_operator(of({c2}), of({c6})), ConfigError);
}

TEST_CASE_FIXTURE(Fixture, "s-torsion theories") {
    CHECK(is_s_torsion_theory(subcat_all(u6), subcat_all(u6), subcat_all(u6)));
    CHECK(is_s_torsion_theory(t2, subcat_all(u6), t2));
    CHECK_FALSE(is_s_torsion_theory(subcat_all(u6), subcat_all(u6), t2));

    // with S = {0} the enumeration specializes to ordinary torsion theories
    auto stt0 = enumerate_s_torsion_theories(u6, subcat_zero(u6));
    auto tts = enumerate_torsion_theories(u6);
    REQUIRE(stt0.size() == tts.size());
    for (size_t i = 0; i < stt0.size(); ++i) {
        CHECK(stt0[i].t == tts[i].x);
        CHECK(stt0[i].f == tts[i].y);
        CHECK(is_torsion_theory_hom(stt0[i].t, stt0[i].f));
    }

    // with S = all the only theory is (all, all)
    auto stt_all = enumerate_s_torsion_theories(u6, subcat_all(u6));
    REQUIRE(stt_all.size() == 1);
    CHECK(stt_all[0].t == subcat_all(u6));
    CHECK(stt_all[0].f == subcat_all(u6));

    // S = T_2 includes (T_2, all)
    auto stt2 = enumerate_s_torsion_theories(u6, t2);
    bool found = false;
    for (const auto& stt : stt2) {
        CHECK(stt.certified);
        CHECK(heart_of(stt) == stt.heart);
        if (stt.t == t2 && stt.f == subcat_all(u6)) found = true;
    }
    CHECK(found);

    // generated mode is a subset of brute mode here (and equal on this ring)
    auto gen = enumerate_s_torsion_theories(u6, t2, EnumMode::generated);
    CHECK(gen.size() == stt2.size());
}

TEST_CASE_FIXTURE(Fixture, "canonicity predicates") {
    // certified ordinary torsion theories are canonical
    for (const auto& p : enumerate_torsion_theories(u6)) CHECK(is_canonical(p.x, p.y));
    CHECK(is_canonical(subcat_all(u6), subcat_all(u6)));
    CHECK_FALSE(is_canonical(of({c2}), of({c3})));  // Z/2 (+) Z/2 unreachable

    // S = {0}: both canonicity conditions are trivially true
    for (const auto& p : enumerate_torsion_theories(u6)) {
        CHECK(is_left_canonical(p.x, p.y, subcat_zero(u6)));
        CHECK(is_right_canonical(p.x, p.y, subcat_zero(u6)));
    }

    // over Z/6 with (T, F, S) = (T_2, all, T_2): both hold
    CHECK(is_left_canonical(t2, subcat_all(u6), t2));
    CHECK(is_right_canonical(t2, subcat_all(u6), t2));

    // Lemma-style identities for every certified S-torsion theory
    for (const auto& s : enumerate_serre(u6))
        for (const auto& stt : enumerate_s_torsion_theories(u6, s)) {
            CHECK(ext_product(stt.t, stt.heart) == stt.t);
            CHECK(ext_product(stt.heart, stt.f) == stt.f);
            CHECK(heart_of(stt) == stt.heart);
            CHECK(stt.heart.members.subset_of(stt.t.members));
            CHECK(stt.heart.members.subset_of(stt.f.members));
            Subcategory l = ext_product(intersect(stt.t, left_perp(stt.heart)),
                                        intersect(stt.t, stt.heart));
            CHECK(l.members.subset_of(stt.t.members));
            Subcategory r = ext_product(intersect(stt.heart, stt.f),
                                        intersect(right_perp(stt.heart), stt.f));
            CHECK(r.members.subset_of(stt.f.members));
        }
}

TEST_CASE("brute cap is enforced") {
    // triples of F_2 vector spaces: 35 classes at bound 16, over the cap
    auto r = make_product(make_zmod(2), make_product(make_zmod(2), make_zmod(2)));
    auto u = build_universe(r, 16);
    REQUIRE(u->num_classes() > kBruteClassCap);
    CHECK_THROWS_AS(enumerate_serre(u, EnumMode::brute), ConfigError);
    CHECK_THROWS_AS(enumerate_torsion_theories(u, EnumMode::brute), ConfigError);
    auto gen = enumerate_serre(u, EnumMode::generated);
    CHECK(gen.size() >= 2);
    for (const auto& s : gen) CHECK(is_serre(s));
}
