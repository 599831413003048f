#include "torsion/subcat.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "torsion/errors.hpp"

namespace torsion {

Subcategory make_subcat(UniversePtr u, Bits members) {
    members.set(0);  // subcategories contain the zero module
    return Subcategory{std::move(u), std::move(members)};
}

Subcategory subcat_zero(const UniversePtr& u) {
    Bits b(u->num_classes());
    b.set(0);
    return Subcategory{u, b};
}

Subcategory subcat_all(const UniversePtr& u) {
    return Subcategory{u, Bits::ones(u->num_classes())};
}

Subcategory ext_product(const Subcategory& a, const Subcategory& b) {
    if (a.u != b.u) throw ConfigError("ext_product: universe mismatch");
    const Universe& u = *a.u;
    int n = u.num_classes();
    Bits out(n);
    for (int m = 0; m < n; ++m) {
        for (int c = 0; c < n; ++c) {
            if (!a.members.test(c)) continue;
            if (u.ext[m][c].intersects(b.members)) {
                out.set(m);
                break;
            }
        }
    }
    return Subcategory{a.u, out};
}

Subcategory left_perp(const Subcategory& c) {
    const Universe& u = *c.u;
    int n = u.num_classes();
    Bits out(n);
    for (int m = 0; m < n; ++m)
        if (c.members.subset_of(u.vanish[m])) out.set(m);
    return Subcategory{c.u, out};
}

Subcategory right_perp(const Subcategory& c) {
    const Universe& u = *c.u;
    int n = u.num_classes();
    Bits out(n);
    for (int m = 0; m < n; ++m) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
            if (c.members.test(x) && !u.vanish[x].test(m)) ok = false;
        if (ok) out.set(m);
    }
    return Subcategory{c.u, out};
}

Subcategory intersect(const Subcategory& a, const Subcategory& b) {
    if (a.u != b.u) throw ConfigError("intersect: universe mismatch");
    return Subcategory{a.u, a.members & b.members};
}

bool subcat_hom_vanishes(const Subcategory& a, const Subcategory& b) {
    const Universe& u = *a.u;
    bool ok = true;
    a.members.for_each([&](int x) {
        if (ok && !b.members.subset_of(u.vanish[x])) ok = false;
    });
    return ok;
}

bool is_closed_sub(const Subcategory& c) {
    bool ok = true;
    c.members.for_each([&](int m) {
        if (ok && !c.u->sub[m].subset_of(c.members)) ok = false;
    });
    return ok;
}

bool is_closed_quot(const Subcategory& c) {
    bool ok = true;
    c.members.for_each([&](int m) {
        if (ok && !c.u->quot[m].subset_of(c.members)) ok = false;
    });
    return ok;
}

bool is_closed_ext(const Subcategory& c) {
    const Universe& u = *c.u;
    int n = u.num_classes();
    for (int m = 0; m < n; ++m) {
        if (c.members.test(m)) continue;
        for (int c1 = 0; c1 < n; ++c1)
            if (c.members.test(c1) && u.ext[m][c1].intersects(c.members)) return false;
    }
    return true;
}

bool is_serre(const Subcategory& c) {
    return is_closed_sub(c) && is_closed_quot(c) && is_closed_ext(c);
}

Subcategory serre_closure(const Subcategory& c) {
    Subcategory cur = make_subcat(c.u, c.members);
    for (;;) {
        Bits next = cur.members;
        cur.members.for_each([&](int m) {
            next |= c.u->sub[m];
            next |= c.u->quot[m];
        });
        Subcategory widened{c.u, next};
        next |= ext_product(widened, widened).members;
        if (next == cur.members) return cur;
        cur.members = next;
    }
}

bool is_torsion_theory_hom(const Subcategory& x, const Subcategory& y) {
    return subcat_hom_vanishes(x, y) && left_perp(y) == x && right_perp(x) == y;
}

bool is_torsion_theory_canon_seq(const Subcategory& x, const Subcategory& y) {
    if ((x.members & y.members).count() != 1) return false;
    if (!is_closed_quot(x) || !is_closed_sub(y)) return false;
    return ext_product(x, y).members == Bits::ones(x.u->num_classes());
}

TTVerdict check_torsion_theory(const Subcategory& x, const Subcategory& y) {
    return TTVerdict{is_torsion_theory_hom(x, y), is_torsion_theory_canon_seq(x, y)};
}

Subcategory s_left_operator(const Subcategory& f, const Subcategory& s) {
    if (!is_serre(s)) throw ConfigError("s_left_operator: heart is not Serre");
    const Universe& u = *f.u;
    int n = u.num_classes();
    Bits out(n);
    for (int m = 0; m < n; ++m) {
        bool in = true;
        for (int ff = 0; ff < n && in; ++ff)
            if (f.members.test(ff) && !u.image_classes(m, ff).subset_of(s.members)) in = false;
        if (in) out.set(m);
    }
    return Subcategory{f.u, out};
}

Subcategory s_right_operator(const Subcategory& t, const Subcategory& s) {
    if (!is_serre(s)) throw ConfigError("s_right_operator: heart is not Serre");
    const Universe& u = *t.u;
    int n = u.num_classes();
    Bits out(n);
    for (int m = 0; m < n; ++m) {
        bool in = true;
        for (int tt = 0; tt < n && in; ++tt)
            if (t.members.test(tt) && !u.image_classes(tt, m).subset_of(s.members)) in = false;
        if (in) out.set(m);
    }
    return Subcategory{t.u, out};
}

bool is_s_torsion_theory(const Subcategory& t, const Subcategory& f, const Subcategory& s) {
    if (!is_serre(s)) throw ConfigError("is_s_torsion_theory: heart is not Serre");
    // TT1: images of T into F land in S
    const Universe& u = *t.u;
    int n = u.num_classes();
    for (int a = 0; a < n; ++a) {
        if (!t.members.test(a)) continue;
        for (int b = 0; b < n; ++b)
            if (f.members.test(b) && !u.image_classes(a, b).subset_of(s.members)) return false;
    }
    // TT2 and TT3 as exact closure equalities
    return s_left_operator(f, s) == t && s_right_operator(t, s) == f;
}

bool is_canonical(const Subcategory& t, const Subcategory& f) {
    return ext_product(t, f).members == Bits::ones(t.u->num_classes());
}

bool is_left_canonical(const Subcategory& t, const Subcategory& f, const Subcategory& s) {
    (void)f;
    Subcategory lhs = ext_product(intersect(t, left_perp(s)), intersect(t, s));
    return lhs == t;
}

bool is_right_canonical(const Subcategory& t, const Subcategory& f, const Subcategory& s) {
    (void)t;
    Subcategory rhs = ext_product(intersect(s, f), intersect(right_perp(s), f));
    return rhs == f;
}

Subcategory heart_of(const STorsionTheory& stt) { return intersect(stt.t, stt.f); }

namespace {

/// Cached 64-bit rows for the brute-force enumerators (class count <= 22).
struct Rows64 {
    int n;
    std::vector<std::uint64_t> vanish, sub, quot;
    std::vector<std::uint64_t> ext;  // ext[m * n + c1] = mask over c2
    std::uint64_t all;

    explicit Rows64(const Universe& u) : n(u.num_classes()) {
        vanish.resize(n);
        sub.resize(n);
        quot.resize(n);
        ext.resize(size_t(n) * n);
        for (int a = 0; a < n; ++a) {
            vanish[a] = u.vanish[a].mask64();
            sub[a] = u.sub[a].mask64();
            quot[a] = u.quot[a].mask64();
            for (int c = 0; c < n; ++c) ext[size_t(a) * n + c] = u.ext[a][c].mask64();
        }
        all = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    }

    std::uint64_t right_perp(std::uint64_t x) const {
        std::uint64_t y = all;
        for (int c = 0; c < n; ++c)
            if ((x >> c) & 1) y &= vanish[c];
        return y;
    }
    std::uint64_t left_perp(std::uint64_t y) const {
        std::uint64_t x = 0;
        for (int m = 0; m < n; ++m)
            if ((y & ~vanish[m]) == 0) x |= std::uint64_t{1} << m;
        return x;
    }
    std::uint64_t ext_product(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t out = 0;
        for (int m = 0; m < n; ++m) {
            std::uint64_t rem = a;
            while (rem) {
                int c = __builtin_ctzll(rem);
                rem &= rem - 1;
                if (ext[size_t(m) * n + c] & b) {
                    out |= std::uint64_t{1} << m;
                    break;
                }
            }
        }
        return out;
    }
    bool serre(std::uint64_t m) const {
        std::uint64_t rem = m;
        while (rem) {
            int c = __builtin_ctzll(rem);
            rem &= rem - 1;
            if ((sub[c] & ~m) || (quot[c] & ~m)) return false;
        }
        return ext_product(m, m) == m;
    }
};

void require_brute_cap(const Universe& u) {
    if (u.num_classes() > kBruteClassCap)
        throw ConfigError("brute enumeration cap exceeded (" + std::to_string(kBruteClassCap) +
                          " classes); use generated mode");
}

std::vector<Bits> join_closure(std::vector<Bits> seeds,
                               const std::function<Bits(const Bits&)>& close) {
    std::set<Bits> found;
    std::vector<Bits> work;
    for (auto& s : seeds) {
        Bits c = close(s);
        if (found.insert(c).second) work.push_back(c);
    }
    std::vector<Bits> base(work);
    while (!work.empty()) {
        Bits cur = work.back();
        work.pop_back();
        for (const auto& b : base) {
            if (b.subset_of(cur)) continue;
            Bits j = close(cur | b);
            if (found.insert(j).second) work.push_back(j);
        }
    }
    return {found.begin(), found.end()};
}

}  // namespace

std::vector<Subcategory> enumerate_serre(const UniversePtr& u, EnumMode mode, Exec exec) {
    int n = u->num_classes();
    std::vector<Subcategory> out;
    if (mode == EnumMode::brute) {
        require_brute_cap(*u);
        Rows64 rows(*u);
        std::uint64_t count = std::uint64_t{1} << (n - 1);
        std::vector<unsigned char> ok(count, 0);
        par_for(int(count >> 12) + 1, exec, [&](int chunk) {
            std::uint64_t lo = std::uint64_t(chunk) << 12;
            std::uint64_t hi = std::min(count, lo + (std::uint64_t{1} << 12));
            for (std::uint64_t m = lo; m < hi; ++m) {
                std::uint64_t mask = (m << 1) | 1;
                if (rows.serre(mask)) ok[m] = 1;
            }
        });
        for (std::uint64_t m = 0; m < count; ++m)
            if (ok[m]) out.push_back(Subcategory{u, Bits::from_mask(n, (m << 1) | 1)});
    } else {
        // Every Serre subcategory is the join of the closures of its
        // singletons, so the generated mode is the join closure of those.
        std::vector<Bits> seeds;
        for (int c = 0; c < n; ++c) {
            Bits b(n);
            b.set(0);
            b.set(c);
            seeds.push_back(b);
        }
        auto close = [&](const Bits& b) { return serre_closure(Subcategory{u, b}).members; };
        for (auto& b : join_closure(std::move(seeds), close)) out.push_back(Subcategory{u, b});
        std::sort(out.begin(), out.end(),
                  [](const Subcategory& a, const Subcategory& b) { return a.members < b.members; });
    }
    return out;
}

std::vector<TTPair> enumerate_torsion_theories(const UniversePtr& u, EnumMode mode, Exec exec) {
    int n = u->num_classes();
    std::vector<TTPair> out;
    auto accept = [&](const Subcategory& x) {
        Subcategory y = right_perp(x);
        if (!(left_perp(y) == x)) return;
        TTVerdict v = check_torsion_theory(x, y);
        if (v.holds()) out.push_back(TTPair{x, y, true});
    };
    if (mode == EnumMode::brute) {
        require_brute_cap(*u);
        Rows64 rows(*u);
        std::uint64_t count = std::uint64_t{1} << (n - 1);
        std::vector<unsigned char> ok(count, 0);
        par_for(int(count >> 12) + 1, exec, [&](int chunk) {
            std::uint64_t lo = std::uint64_t(chunk) << 12;
            std::uint64_t hi = std::min(count, lo + (std::uint64_t{1} << 12));
            for (std::uint64_t m = lo; m < hi; ++m) {
                std::uint64_t x = (m << 1) | 1;
                if (rows.left_perp(rows.right_perp(x)) == x) ok[m] = 1;
            }
        });
        for (std::uint64_t m = 0; m < count; ++m)
            if (ok[m]) accept(Subcategory{u, Bits::from_mask(n, (m << 1) | 1)});
    } else {
        // Torsion classes are quotient- and extension-closed, hence joins of
        // singleton quot/ext closures; filter the double-perp fixpoints.
        auto qe_close = [&](const Bits& b) {
            Subcategory cur = make_subcat(u, b);
            for (;;) {
                Bits next = cur.members;
                for (int m : cur.members.indices()) next |= u->quot[m];
                Subcategory widened{u, next};
                next |= ext_product(widened, widened).members;
                if (next == cur.members) break;
                cur.members = next;
            }
            return cur.members;
        };
        std::vector<Bits> seeds;
        for (int c = 0; c < n; ++c) {
            Bits b(n);
            b.set(0);
            b.set(c);
            seeds.push_back(b);
        }
        std::vector<Bits> cands = join_closure(std::move(seeds), qe_close);
        std::sort(cands.begin(), cands.end());
        for (auto& b : cands) accept(Subcategory{u, b});
    }
    std::sort(out.begin(), out.end(),
              [](const TTPair& a, const TTPair& b) { return a.x.members < b.x.members; });
    return out;
}

std::vector<STorsionTheory> enumerate_s_torsion_theories(const UniversePtr& u,
                                                         const Subcategory& s, EnumMode mode,
                                                         Exec exec) {
    if (!is_serre(s)) throw ConfigError("enumerate_s_torsion_theories: heart is not Serre");
    int n = u->num_classes();
    std::vector<STorsionTheory> out;
    auto accept = [&](const Subcategory& f) {
        Subcategory t = s_left_operator(f, s);
        if (!(s_right_operator(t, s) == f)) return;
        if (!is_s_torsion_theory(t, f, s)) return;
        out.push_back(STorsionTheory{t, f, s, true});
    };
    if (mode == EnumMode::brute) {
        require_brute_cap(*u);
        const Universe& uu = *u;
        // imgS[c1] = classes c2 such that every image of c1 -> c2 lies in S
        std::vector<std::uint64_t> img_row(n), img_col(n);
        std::uint64_t smask = s.members.mask64();
        for (int c1 = 0; c1 < n; ++c1)
            for (int c2 = 0; c2 < n; ++c2)
                if ((uu.image_classes(c1, c2).mask64() & ~smask) == 0) {
                    img_row[c1] |= std::uint64_t{1} << c2;
                    img_col[c2] |= std::uint64_t{1} << c1;
                }
        std::uint64_t count = std::uint64_t{1} << (n - 1);
        std::vector<unsigned char> ok(count, 0);
        par_for(int(count >> 12) + 1, exec, [&](int chunk) {
            std::uint64_t lo = std::uint64_t(chunk) << 12;
            std::uint64_t hi = std::min(count, lo + (std::uint64_t{1} << 12));
            for (std::uint64_t m = lo; m < hi; ++m) {
                std::uint64_t f = (m << 1) | 1;
                if ((smask & ~f) != 0) continue;  // hearts embed in both parts
                std::uint64_t t = 0;
                for (int c = 0; c < n; ++c)
                    if ((f & ~img_row[c]) == 0) t |= std::uint64_t{1} << c;
                std::uint64_t f2 = 0;
                for (int c = 0; c < n; ++c)
                    if ((t & ~img_col[c]) == 0) f2 |= std::uint64_t{1} << c;
                if (f2 == f) ok[m] = 1;
            }
        });
        for (std::uint64_t m = 0; m < count; ++m)
            if (ok[m]) accept(Subcategory{u, Bits::from_mask(n, (m << 1) | 1)});
    } else {
        // Galois closure G = R o L is a closure operator on torsion-free
        // parts; the generated mode applies it to a seed family.
        auto g_close = [&](const Bits& b) {
            Subcategory f = make_subcat(u, b | s.members);
            return s_right_operator(s_left_operator(f, s), s).members;
        };
        std::vector<Bits> seeds;
        {
            Bits b(n);
            b.set(0);
            seeds.push_back(b);
        }
        for (int c = 0; c < n; ++c) {
            Bits b(n);
            b.set(0);
            b.set(c);
            seeds.push_back(b);
        }
        std::vector<Bits> cands = join_closure(std::move(seeds), g_close);
        std::sort(cands.begin(), cands.end());
        for (auto& b : cands) accept(Subcategory{u, b});
    }
    std::sort(out.begin(), out.end(), [](const STorsionTheory& a, const STorsionTheory& b) {
        if (a.t.members != b.t.members) return a.t.members < b.t.members;
        return a.f.members < b.f.members;
    });
    return out;
}

}  // namespace torsion
