#include "torsion/ring.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

#include "torsion/errors.hpp"
#include "torsion/presentation.hpp"

namespace torsion {

FiniteRing::FiniteRing(std::vector<i64> invariant_factors, std::vector<Mat> mult,
                       std::vector<i64> unit, std::string spec_string)
    : inv_(std::move(invariant_factors)),
      mult_(std::move(mult)),
      unit_vec_(std::move(unit)),
      spec_(std::move(spec_string)) {
    if (inv_.empty()) throw ConfigError("ring must have order >= 2");
    order_ = 1;
    for (size_t j = 0; j < inv_.size(); ++j) {
        if (inv_[j] < 2) throw ConfigError("ring invariant factors must be >= 2");
        if (j && inv_[j] % inv_[j - 1]) throw ConfigError("ring invariant factors must form a chain");
        order_ *= inv_[j];
    }
    if (order_ > 65535) throw ConfigError("ring too large for element tables");
    build_tables();
    validate();
}

std::vector<i64> FiniteRing::vec_of(int e) const {
    std::vector<i64> v(inv_.size());
    for (size_t j = 0; j < inv_.size(); ++j) {
        v[j] = e % inv_[j];
        e = int(e / inv_[j]);
    }
    return v;
}

int FiniteRing::elem_of(std::vector<i64> v) const {
    assert(v.size() == inv_.size());
    i64 idx = 0, stride = 1;
    for (size_t j = 0; j < inv_.size(); ++j) {
        i64 c = v[j] % inv_[j];
        if (c < 0) c += inv_[j];
        idx += c * stride;
        stride *= inv_[j];
    }
    return int(idx);
}

void FiniteRing::build_tables() {
    int n = int(order_);
    int k = gens();
    add_tab_.resize(size_t(n) * n);
    mul_tab_.resize(size_t(n) * n);
    neg_tab_.resize(n);
    std::vector<std::vector<i64>> vecs(n);
    for (int e = 0; e < n; ++e) vecs[e] = vec_of(e);
    for (int a = 0; a < n; ++a) {
        std::vector<i64> na(k);
        for (int j = 0; j < k; ++j) na[j] = -vecs[a][j];
        neg_tab_[a] = uint16_t(elem_of(na));
        for (int b = 0; b < n; ++b) {
            std::vector<i64> s(k);
            for (int j = 0; j < k; ++j) s[j] = vecs[a][j] + vecs[b][j];
            add_tab_[size_t(a) * n + b] = uint16_t(elem_of(s));
            // bilinear extension of the structure constants
            std::vector<i64> p(k, 0);
            for (int i = 0; i < k; ++i) {
                if (!vecs[a][i]) continue;
                for (int j = 0; j < k; ++j) {
                    if (!vecs[b][j]) continue;
                    for (int l = 0; l < k; ++l)
                        p[l] += vecs[a][i] * vecs[b][j] * mult_[i].at(l, j);
                }
            }
            mul_tab_[size_t(a) * n + b] = uint16_t(elem_of(p));
        }
    }
    one_ = elem_of(unit_vec_);
    if (one_ == 0) throw ConfigError("ring unit equals zero");
}

void FiniteRing::validate() const {
    int k = gens();
    if (int(mult_.size()) != k || int(unit_vec_.size()) != k)
        throw ConfigError("ring data shape mismatch");
    for (int i = 0; i < k; ++i)
        if (mult_[i].rows != k || mult_[i].cols != k)
            throw ConfigError("ring multiplication table shape mismatch");
    // well-definedness of the bilinear extension: d_j * (e_i e_j) = 0
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                if ((mult_[i].at(l, j) * inv_[j]) % inv_[l])
                    throw ConfigError("ring multiplication not additively well-defined");
    auto gen = [&](int i) {
        std::vector<i64> v(k, 0);
        v[i] = 1;
        return elem_of(v);
    };
    for (int i = 0; i < k; ++i) {
        if (mul(one_, gen(i)) != gen(i) || mul(gen(i), one_) != gen(i))
            throw ConfigError("ring unit does not act as identity");
        for (int j = 0; j < k; ++j) {
            if (mul(gen(i), gen(j)) != mul(gen(j), gen(i)))
                throw ConfigError("ring multiplication not commutative");
            for (int l = 0; l < k; ++l)
                if (mul(mul(gen(i), gen(j)), gen(l)) != mul(gen(i), mul(gen(j), gen(l))))
                    throw ConfigError("ring multiplication not associative");
        }
    }
}

Ideal ideal_from_elems(const RingPtr& r, const Bits& elems) {
    Ideal id;
    id.ring = r;
    id.elems = elems;
    id.order = elems.count();
    int k = r->gens();
    std::vector<std::vector<i64>> rows;
    for (int e : elems.indices()) rows.push_back(r->vec_of(e));
    Mat m(int(rows.size()) + k, k);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < k; ++j) m.at(int(i), j) = rows[i][j];
    for (int j = 0; j < k; ++j) m.at(int(rows.size()) + j, j) = r->invariant_factors()[j];
    id.basis = row_hnf(m);
    return id;
}

namespace {

std::vector<i64> lex_key(const Mat& m) {
    std::vector<i64> k{m.rows, m.cols};
    k.insert(k.end(), m.a.begin(), m.a.end());
    return k;
}

FiniteRing normalize_ring(const std::vector<i64>& raw_inv, const std::vector<Mat>& raw_mult,
                          const std::vector<i64>& raw_unit, const Mat& extra_relations,
                          const std::string& spec_string) {
    // Temporary ring over the raw presentation so that products can be
    // evaluated; the raw invariants need not form a chain, so go through the
    // additive machinery directly.
    int k = int(raw_inv.size());
    QuotientPresentation q = quotient_presentation(raw_inv, extra_relations);
    int nk = int(q.invariants.size());
    if (nk == 0) throw ConfigError("quotient ring is the zero ring");

    auto mul_raw = [&](const std::vector<i64>& a, const std::vector<i64>& b) {
        std::vector<i64> p(k, 0);
        for (int i = 0; i < k; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < k; ++j) {
                if (!b[j]) continue;
                for (int l = 0; l < k; ++l) p[l] += a[i] * b[j] * raw_mult[i].at(l, j);
            }
        }
        reduce_mod(p, raw_inv);
        return p;
    };
    auto project = [&](const std::vector<i64>& v) {
        std::vector<i64> out(nk, 0);
        for (int t = 0; t < nk; ++t) {
            i64 acc = 0;
            for (int j = 0; j < k; ++j) acc += q.proj.at(t, j) * v[j];
            acc %= q.invariants[t];
            if (acc < 0) acc += q.invariants[t];
            out[t] = acc;
        }
        return out;
    };
    std::vector<std::vector<i64>> lifts(nk);
    for (int t = 0; t < nk; ++t) {
        lifts[t].resize(k);
        for (int j = 0; j < k; ++j) lifts[t][j] = q.lift.at(j, t);
    }
    std::vector<Mat> mult(nk, Mat(nk, nk));
    for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j) {
            auto p = project(mul_raw(lifts[i], lifts[j]));
            for (int l = 0; l < nk; ++l) mult[i].at(l, j) = p[l];
        }
    return FiniteRing(q.invariants, std::move(mult), project(raw_unit), spec_string);
}

}  // namespace

FiniteRing make_zmod_value(i64 n, i64 cap) {
    if (n < 2) throw ConfigError("zmod modulus must be >= 2");
    if (n > cap) throw ConfigError("ring order exceeds cap");
    Mat m(1, 1);
    m.at(0, 0) = 1;
    return FiniteRing({n}, {m}, {1}, "zmod:" + std::to_string(n));
}

RingPtr make_zmod(i64 n, i64 cap) { return std::make_shared<FiniteRing>(make_zmod_value(n, cap)); }

RingPtr make_poly_quotient(i64 p, const std::vector<i64>& f, i64 cap) {
    if (p < 2) throw ConfigError("polyq characteristic must be prime");
    for (i64 d = 2; d * d <= p; ++d)
        if (p % d == 0) throw ConfigError("polyq characteristic must be prime");
    if (f.size() < 2) throw ConfigError("polyq modulus must have degree >= 1");
    i64 lead = f.back() % p;
    if (lead < 0) lead += p;
    if (lead != 1) throw ConfigError("polyq modulus must be monic");
    int d = int(f.size()) - 1;
    i64 order = 1;
    for (int i = 0; i < d; ++i) {
        order *= p;
        if (order > cap) throw ConfigError("ring order exceeds cap");
    }
    // x^m mod f for m up to 2(d-1)
    std::vector<std::vector<i64>> pow(2 * d - 1, std::vector<i64>(d, 0));
    pow[0][0] = 1;
    for (int m = 1; m < 2 * d - 1; ++m) {
        std::vector<i64> shifted(d + 1, 0);
        for (int i = 0; i < d; ++i) shifted[i + 1] = pow[m - 1][i];
        i64 top = shifted[d] % p;
        for (int i = 0; i < d; ++i) {
            i64 c = shifted[i] - top * f[i];
            c %= p;
            if (c < 0) c += p;
            pow[m][i] = c;
        }
    }
    std::vector<Mat> mult(d, Mat(d, d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int l = 0; l < d; ++l) mult[i].at(l, j) = pow[i + j][l];
    std::vector<i64> unit(d, 0);
    unit[0] = 1;
    std::ostringstream spec;
    spec << "polyq:" << p << ":";
    for (size_t i = 0; i < f.size(); ++i) spec << (i ? "," : "") << (((f[i] % p) + p) % p);
    return std::make_shared<FiniteRing>(std::vector<i64>(d, p), std::move(mult), std::move(unit),
                                        spec.str());
}

RingPtr make_product(const RingPtr& r1, const RingPtr& r2, i64 cap) {
    if (r1->order() * r2->order() > cap) throw ConfigError("ring order exceeds cap");
    int k1 = r1->gens(), k2 = r2->gens(), k = k1 + k2;
    std::vector<i64> inv;
    inv.insert(inv.end(), r1->invariant_factors().begin(), r1->invariant_factors().end());
    inv.insert(inv.end(), r2->invariant_factors().begin(), r2->invariant_factors().end());
    std::vector<Mat> mult(k, Mat(k, k));
    for (int i = 0; i < k1; ++i)
        for (int j = 0; j < k1; ++j)
            for (int l = 0; l < k1; ++l) mult[i].at(l, j) = r1->mult_matrix(i).at(l, j);
    for (int i = 0; i < k2; ++i)
        for (int j = 0; j < k2; ++j)
            for (int l = 0; l < k2; ++l)
                mult[k1 + i].at(k1 + l, k1 + j) = r2->mult_matrix(i).at(l, j);
    std::vector<i64> unit(k, 0);
    for (int j = 0; j < k1; ++j) unit[j] = r1->vec_of(r1->one())[j];
    for (int j = 0; j < k2; ++j) unit[k1 + j] = r2->vec_of(r2->one())[j];
    std::string spec = "prod:(" + r1->spec_string() + "," + r2->spec_string() + ")";
    return std::make_shared<FiniteRing>(
        normalize_ring(inv, mult, unit, Mat(0, k), spec));
}

std::vector<Ideal> enumerate_ideals(const RingPtr& r) {
    int n = int(r->order());
    // Principal ideals (x) = Rx, then closure under sums.
    std::set<Bits> found;
    std::vector<Bits> cyclics;
    {
        std::set<Bits> seen;
        for (int x = 0; x < n; ++x) {
            Bits s(n);
            for (int a = 0; a < n; ++a) s.set(r->mul(a, x));
            if (seen.insert(s).second) cyclics.push_back(s);
        }
    }
    std::vector<Bits> work = cyclics;
    for (auto& c : cyclics) found.insert(c);
    while (!work.empty()) {
        Bits cur = work.back();
        work.pop_back();
        for (const auto& c : cyclics) {
            if (c.subset_of(cur)) continue;
            Bits sum(n);
            for (int a : cur.indices())
                for (int b : c.indices()) sum.set(r->add(a, b));
            if (found.insert(sum).second) work.push_back(sum);
        }
    }
    std::vector<Ideal> out;
    for (const auto& s : found) out.push_back(ideal_from_elems(r, s));
    std::sort(out.begin(), out.end(), [](const Ideal& a, const Ideal& b) {
        if (a.order != b.order) return a.order < b.order;
        return lex_key(a.basis) < lex_key(b.basis);
    });
    return out;
}

bool is_prime_ideal(const RingPtr& r, const Ideal& i) {
    if (!i.is_proper()) return false;
    int n = int(r->order());
    for (int a = 0; a < n; ++a) {
        if (i.elems.test(a)) continue;
        for (int b = a; b < n; ++b) {
            if (i.elems.test(b)) continue;
            if (i.elems.test(r->mul(a, b))) return false;
        }
    }
    return true;
}

RingPtr quotient_ring(const RingPtr& r, const Ideal& i) {
    if (!i.is_proper()) throw ConfigError("cannot quotient by the unit ideal");
    std::vector<Mat> mult;
    for (int g = 0; g < r->gens(); ++g) mult.push_back(r->mult_matrix(g));
    std::string spec = r->spec_string() + "/(ideal order " + std::to_string(i.order) + ")";
    return std::make_shared<FiniteRing>(normalize_ring(
        r->invariant_factors(), mult, r->vec_of(r->one()), i.basis, spec));
}

bool SpecPoset::is_antichain() const {
    for (int i = 0; i < count(); ++i)
        for (int j = 0; j < count(); ++j)
            if (i != j && leq[i].test(j)) return false;
    return true;
}

PosetPtr spec(const RingPtr& r) {
    auto ideals = enumerate_ideals(r);
    auto p = std::make_shared<SpecPoset>();
    p->ring = r;
    for (const auto& i : ideals)
        if (is_prime_ideal(r, i)) p->primes.push_back(i);
    int n = int(p->primes.size());
    p->leq.assign(n, Bits(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (p->primes[i].elems.subset_of(p->primes[j].elems)) p->leq[i].set(j);
    return p;
}

PosetPtr make_synthetic_poset(std::vector<Bits> leq) {
    auto p = std::make_shared<SpecPoset>();
    p->leq = std::move(leq);
    return p;
}

std::optional<Ideal> is_local(const RingPtr& r) {
    auto p = spec(r);
    if (p->count() == 1) return p->primes[0];
    return std::nullopt;
}

std::vector<SpecClosedSet> spec_closed_sets(const PosetPtr& p) {
    int n = p->count();
    std::vector<SpecClosedSet> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Bits w = Bits::from_mask(n, mask);
        bool closed = true;
        for (int i = 0; i < n && closed; ++i)
            if (w.test(i) && !p->leq[i].subset_of(w)) closed = false;
        if (closed) out.push_back(SpecClosedSet{p, w});
    }
    return out;
}

}  // namespace torsion
