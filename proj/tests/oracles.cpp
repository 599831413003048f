#include "oracles.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace torsion::oracle {

std::vector<Bits> subgroup_sets_brute(const FiniteModule& m) {
    int n = int(m.order());
    if (n > 16) throw std::invalid_argument("subgroup_sets_brute: module too large");
    int nr = int(m.ring()->order());
    std::vector<Bits> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (!(mask & 1)) continue;  // must contain 0
        bool closed = true;
        for (int a = 0; a < n && closed; ++a) {
            if (!((mask >> a) & 1)) continue;
            for (int b = a; b < n && closed; ++b) {
                if (!((mask >> b) & 1)) continue;
                if (!((mask >> m.add(a, b)) & 1)) closed = false;
            }
            for (int s = 0; s < nr && closed; ++s)
                if (!((mask >> m.act(s, a)) & 1)) closed = false;
        }
        if (closed) {
            Bits b(n);
            for (int a = 0; a < n; ++a)
                if ((mask >> a) & 1) b.set(a);
            out.push_back(b);
        }
    }
    return out;
}

i64 hom_count_brute(const FiniteModule& m, const FiniteModule& n) {
    int rm = m.gens();
    i64 nn = n.order();
    // candidate images per generator: elements annihilated by the
    // generator's invariant factor
    std::vector<std::vector<int>> cand(rm);
    double space = 1;
    for (int j = 0; j < rm; ++j) {
        i64 mj = m.invariant_factors()[j];
        for (int y = 0; y < nn; ++y) {
            auto v = n.vec_of(y);
            bool ok = true;
            for (size_t t = 0; t < v.size(); ++t)
                if ((mj * v[t]) % n.invariant_factors()[t]) ok = false;
            if (ok) cand[j].push_back(y);
        }
        space *= double(cand[j].size());
    }
    if (space > double(1 << 24)) throw std::invalid_argument("hom_count_brute: space too large");

    i64 nr = m.ring()->order();
    i64 count = 0;
    std::vector<size_t> pick(rm, 0);
    for (;;) {
        // build the map on every element from the chosen generator images
        std::vector<int> f(m.order());
        bool ok = true;
        for (int x = 0; x < m.order() && ok; ++x) {
            auto xv = m.vec_of(x);
            int y = 0;
            for (int j = 0; j < rm; ++j) {
                int img = cand[j].empty() ? 0 : cand[j][pick[j]];
                for (i64 c = 0; c < xv[j]; ++c) y = n.add(y, img);
            }
            f[x] = y;
        }
        // additivity and equivariance, element by element
        for (int a = 0; a < m.order() && ok; ++a) {
            for (int b = 0; b < m.order() && ok; ++b)
                if (f[m.add(a, b)] != n.add(f[a], f[b])) ok = false;
            for (i64 s = 0; s < nr && ok; ++s)
                if (f[m.act(int(s), a)] != n.act(int(s), f[a])) ok = false;
        }
        if (ok) ++count;
        int j = 0;
        while (j < rm) {
            if (++pick[j] < cand[j].size()) break;
            pick[j++] = 0;
        }
        if (j == rm) break;
        if (rm == 0) break;
    }
    return count;
}

bool ring_isomorphic_brute(const RingPtr& a, const RingPtr& b) {
    if (a->order() != b->order()) return false;
    if (a->invariant_factors() != b->invariant_factors()) return false;
    int k = a->gens();
    i64 n = a->order();
    // generator images grouped by additive order
    auto add_order = [](const RingPtr& r, int x) {
        i64 o = 1;
        auto v = r->vec_of(x);
        for (size_t j = 0; j < v.size(); ++j) {
            i64 d = r->invariant_factors()[j];
            o = std::lcm(o, d / std::gcd(d, v[j]));
        }
        return o;
    };
    std::vector<std::vector<int>> cand(k);
    for (int j = 0; j < k; ++j) {
        std::vector<i64> gv(k, 0);
        gv[j] = 1;
        i64 oj = add_order(a, a->elem_of(gv));
        for (int y = 0; y < n; ++y)
            if (add_order(b, y) == oj) cand[j].push_back(y);
    }
    std::vector<size_t> pick(k, 0);
    for (;;) {
        std::vector<int> f(n, -1);
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) {
            auto xv = a->vec_of(x);
            int y = 0;
            for (int j = 0; j < k; ++j)
                for (i64 c = 0; c < xv[j]; ++c) y = b->add(y, cand[j][pick[j]]);
            f[x] = y;
        }
        // bijective?
        std::vector<char> hit(n, 0);
        for (int x = 0; x < n && ok; ++x) {
            if (hit[f[x]]) ok = false;
            hit[f[x]] = 1;
        }
        if (ok && f[a->one()] != b->one()) ok = false;
        for (int x = 0; x < n && ok; ++x)
            for (int y = 0; y < n && ok; ++y) {
                if (f[a->add(x, y)] != b->add(f[x], f[y])) ok = false;
                if (f[a->mul(x, y)] != b->mul(f[x], f[y])) ok = false;
            }
        if (ok) return true;
        int j = 0;
        while (j < k) {
            if (++pick[j] < cand[j].size()) break;
            pick[j++] = 0;
        }
        if (j == k) break;
    }
    return false;
}

std::vector<FiniteModule> class_census_closure(const RingPtr& r, i64 bound) {
    std::vector<FiniteModule> reps;
    auto add_rep = [&](const FiniteModule& m) {
        if (m.order() > bound) return false;
        for (const auto& x : reps)
            if (is_isomorphic(x, m)) return false;
        reps.push_back(m);
        return true;
    };
    add_rep(FiniteModule::zero(r));
    for (const auto& i : enumerate_ideals(r)) add_rep(cyclic_module(r, i));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<FiniteModule> cur = reps;
        for (const auto& m : cur) {
            for (const auto& emb : submodules(m)) {
                if (add_rep(emb.sub)) grew = true;
                if (add_rep(quotient_module(emb).quotient)) grew = true;
            }
            for (const auto& x : cur) {
                if (m.order() * x.order() > bound) continue;
                if (add_rep(direct_sum(m, x))) grew = true;
            }
        }
    }
    return reps;
}

i64 abelian_class_count(i64 exponent, i64 bound) {
    // divisors of the exponent that can appear as invariant factors
    std::vector<i64> divs;
    for (i64 d = 2; d <= exponent; ++d)
        if (exponent % d == 0) divs.push_back(d);
    // count multisets of divisors forming a divisibility chain with product <= bound
    i64 count = 0;
    std::vector<i64> chain;
    auto rec = [&](auto&& self, size_t min_idx, i64 product) -> void {
        ++count;  // the chain so far (possibly empty = zero module)
        for (size_t i = min_idx; i < divs.size(); ++i) {
            if (!chain.empty() && divs[i] % chain.back()) continue;
            if (product * divs[i] > bound) continue;
            chain.push_back(divs[i]);
            self(self, i, product * divs[i]);
            chain.pop_back();
        }
    };
    rec(rec, 0, 1);
    return count;
}

}  // namespace torsion::oracle
