#include "torsion/module.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <set>

#include "torsion/errors.hpp"
#include "torsion/presentation.hpp"

namespace torsion {

struct FiniteModule::Impl {
    RingPtr ring;
    std::vector<i64> inv;
    std::vector<Mat> act;
    i64 order = 1;
    std::vector<i64> strides;
    std::vector<int> gen_elem;
    // element tables, built when small enough
    std::vector<uint16_t> add_tab;          // order x order, order <= 1024
    std::vector<uint16_t> neg_tab;          // order <= 65535
    std::vector<uint16_t> act_full;         // |R| x order when |R|*order <= 1<<20
    std::vector<std::vector<uint16_t>> act_gen_tab;  // gens(R) x order
};

namespace {

std::vector<i64> vec_of_impl(const FiniteModule::Impl& im, int e) {
    std::vector<i64> v(im.inv.size());
    i64 x = e;
    for (size_t j = 0; j < im.inv.size(); ++j) {
        v[j] = x % im.inv[j];
        x /= im.inv[j];
    }
    return v;
}

int elem_of_impl(const FiniteModule::Impl& im, const std::vector<i64>& v) {
    i64 idx = 0;
    for (size_t j = 0; j < im.inv.size(); ++j) {
        i64 c = v[j] % im.inv[j];
        if (c < 0) c += im.inv[j];
        idx += c * im.strides[j];
    }
    return int(idx);
}

std::vector<i64> mat_vec_mod(const Mat& a, const std::vector<i64>& x, const std::vector<i64>& mods) {
    std::vector<i64> y(a.rows, 0);
    for (int t = 0; t < a.rows; ++t) {
        i64 acc = 0;
        for (int j = 0; j < a.cols; ++j) acc += a.at(t, j) * x[j];
        acc %= mods[t];
        if (acc < 0) acc += mods[t];
        y[t] = acc;
    }
    return y;
}

}  // namespace

FiniteModule::FiniteModule(RingPtr ring, std::vector<i64> invariants, std::vector<Mat> actions) {
    auto im = std::make_shared<Impl>();
    im->ring = std::move(ring);
    im->inv = std::move(invariants);
    im->act = std::move(actions);
    const auto& R = *im->ring;
    int r = int(im->inv.size());
    int k = R.gens();

    im->order = 1;
    im->strides.resize(r);
    for (int j = 0; j < r; ++j) {
        if (im->inv[j] < 2) throw ConfigError("module invariant factors must be >= 2");
        if (j && im->inv[j] % im->inv[j - 1])
            throw ConfigError("module invariant factors must form a chain");
        im->strides[j] = im->order;
        im->order *= im->inv[j];
    }
    if (r && R.exponent() % im->inv[r - 1])
        throw ConfigError("module exponent must divide the ring exponent");
    if (int(im->act.size()) != k) throw ConfigError("one action matrix per ring generator required");
    for (auto& a : im->act) {
        if (a.rows != r || a.cols != r) throw ConfigError("action matrix shape mismatch");
        for (int t = 0; t < r; ++t)
            for (int j = 0; j < r; ++j) {
                a.at(t, j) %= im->inv[t];
                if (a.at(t, j) < 0) a.at(t, j) += im->inv[t];
            }
    }
    // additive well-definedness of each action
    for (int i = 0; i < k; ++i)
        for (int t = 0; t < r; ++t)
            for (int j = 0; j < r; ++j)
                if ((im->act[i].at(t, j) * im->inv[j]) % im->inv[t])
                    throw ConfigError("action matrix not additively well-defined");
    // compatibility with the ring multiplication and the unit
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            Mat lhs = mat_mul(im->act[i], im->act[j]);
            for (int t = 0; t < r; ++t)
                for (int s = 0; s < r; ++s) {
                    i64 rhs = 0;
                    for (int l = 0; l < k; ++l)
                        rhs += R.mult_matrix(i).at(l, j) * im->act[l].at(t, s);
                    if ((lhs.at(t, s) - rhs) % im->inv[t])
                        throw ConfigError("action incompatible with ring multiplication");
                }
        }
    {
        auto u = R.vec_of(R.one());
        for (int t = 0; t < r; ++t)
            for (int s = 0; s < r; ++s) {
                i64 acc = 0;
                for (int l = 0; l < k; ++l) acc += u[l] * im->act[l].at(t, s);
                if ((acc - (t == s ? 1 : 0)) % im->inv[t])
                    throw ConfigError("ring unit does not act as identity on module");
            }
    }

    im->gen_elem.resize(r);
    for (int j = 0; j < r; ++j) im->gen_elem[j] = int(im->strides[j]);

    i64 n = im->order;
    if (n <= 65535) {
        im->neg_tab.resize(n);
        std::vector<std::vector<i64>> vecs(n);
        for (int e = 0; e < n; ++e) vecs[e] = vec_of_impl(*im, e);
        for (int e = 0; e < n; ++e) {
            std::vector<i64> nv(r);
            for (int j = 0; j < r; ++j) nv[j] = -vecs[e][j];
            im->neg_tab[e] = uint16_t(elem_of_impl(*im, nv));
        }
        if (n <= 1024) {
            im->add_tab.resize(size_t(n) * n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    std::vector<i64> s(r);
                    for (int j = 0; j < r; ++j) s[j] = vecs[a][j] + vecs[b][j];
                    im->add_tab[size_t(a) * n + b] = uint16_t(elem_of_impl(*im, s));
                }
        }
        im->act_gen_tab.assign(k, std::vector<uint16_t>(n));
        for (int i = 0; i < k; ++i)
            for (int e = 0; e < n; ++e)
                im->act_gen_tab[i][e] =
                    uint16_t(elem_of_impl(*im, mat_vec_mod(im->act[i], vecs[e], im->inv)));
        if (R.order() * n <= (1 << 20)) {
            im->act_full.resize(size_t(R.order()) * n);
            for (int a = 0; a < R.order(); ++a) {
                auto av = R.vec_of(a);
                for (int e = 0; e < n; ++e) {
                    std::vector<i64> out(r, 0);
                    for (int i = 0; i < k; ++i) {
                        if (!av[i]) continue;
                        for (int t = 0; t < r; ++t) {
                            i64 acc = 0;
                            for (int j = 0; j < r; ++j) acc += im->act[i].at(t, j) * vecs[e][j];
                            out[t] += av[i] * acc;
                        }
                    }
                    im->act_full[size_t(a) * n + e] = uint16_t(elem_of_impl(*im, out));
                }
            }
        }
    }
    p_ = std::move(im);
}

FiniteModule FiniteModule::zero(RingPtr ring) {
    int k = ring->gens();
    return FiniteModule(std::move(ring), {}, std::vector<Mat>(k, Mat(0, 0)));
}

const RingPtr& FiniteModule::ring() const { return p_->ring; }
const std::vector<i64>& FiniteModule::invariant_factors() const { return p_->inv; }
int FiniteModule::gens() const { return int(p_->inv.size()); }
i64 FiniteModule::order() const { return p_->order; }
const Mat& FiniteModule::action(int i) const { return p_->act[i]; }

std::vector<i64> FiniteModule::vec_of(int e) const { return vec_of_impl(*p_, e); }
int FiniteModule::elem_of(const std::vector<i64>& v) const { return elem_of_impl(*p_, v); }

int FiniteModule::add(int a, int b) const {
    if (!p_->add_tab.empty()) return p_->add_tab[size_t(a) * p_->order + b];
    auto va = vec_of(a), vb = vec_of(b);
    for (size_t j = 0; j < va.size(); ++j) va[j] += vb[j];
    return elem_of(va);
}

int FiniteModule::neg(int a) const {
    if (!p_->neg_tab.empty()) return p_->neg_tab[a];
    auto v = vec_of(a);
    for (auto& c : v) c = -c;
    return elem_of(v);
}

int FiniteModule::act_gen(int i, int x) const {
    if (!p_->act_gen_tab.empty()) return p_->act_gen_tab[i][x];
    return elem_of(mat_vec_mod(p_->act[i], vec_of(x), p_->inv));
}

int FiniteModule::act(int a, int x) const {
    if (!p_->act_full.empty()) return p_->act_full[size_t(a) * p_->order + x];
    auto av = p_->ring->vec_of(a);
    auto xv = vec_of(x);
    int r = gens(), k = p_->ring->gens();
    std::vector<i64> out(r, 0);
    for (int i = 0; i < k; ++i) {
        if (!av[i]) continue;
        for (int t = 0; t < r; ++t) {
            i64 acc = 0;
            for (int j = 0; j < r; ++j) acc += p_->act[i].at(t, j) * xv[j];
            out[t] += av[i] * acc;
        }
    }
    return elem_of(out);
}

int FiniteModule::gen_elem(int j) const { return p_->gen_elem[j]; }

i64 FiniteModule::elem_order(int x) const {
    auto v = vec_of(x);
    i64 o = 1;
    for (size_t j = 0; j < v.size(); ++j) {
        i64 d = p_->inv[j] / std::gcd(p_->inv[j], v[j]);
        o = std::lcm(o, d);
    }
    return o;
}

Bits FiniteModule::ann_elem(int x) const {
    int n = int(p_->ring->order());
    Bits b(n);
    for (int a = 0; a < n; ++a)
        if (act(a, x) == 0) b.set(a);
    return b;
}

namespace {

void collect_block_perms(const std::vector<i64>& inv, std::vector<std::vector<int>>& perms,
                         i64 cap = 5040) {
    // all permutations of generator indices preserving the invariant factor
    if (inv.empty()) {
        perms.push_back({});
        return;
    }
    std::vector<int> id(inv.size());
    std::iota(id.begin(), id.end(), 0);
    perms.push_back(id);
    i64 total = 1;
    size_t b = 0;
    while (b < inv.size()) {
        size_t e = b;
        while (e < inv.size() && inv[e] == inv[b]) ++e;
        i64 f = 1;
        for (size_t i = 2; i <= e - b; ++i) f *= i64(i);
        total *= f;
        if (total > cap) return;  // fall back to identity only
        b = e;
    }
    perms.clear();
    std::vector<std::pair<size_t, size_t>> blocks;
    b = 0;
    while (b < inv.size()) {
        size_t e = b;
        while (e < inv.size() && inv[e] == inv[b]) ++e;
        blocks.emplace_back(b, e);
        b = e;
    }
    std::vector<int> cur(id);
    // iterate the product of per-block permutations
    std::vector<std::vector<int>> block_perm(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) {
        block_perm[i].resize(blocks[i].second - blocks[i].first);
        std::iota(block_perm[i].begin(), block_perm[i].end(), int(blocks[i].first));
    }
    for (;;) {
        std::vector<int> p;
        for (auto& bp : block_perm) p.insert(p.end(), bp.begin(), bp.end());
        perms.push_back(p);
        size_t i = blocks.size();
        while (i-- > 0) {
            if (std::next_permutation(block_perm[i].begin(), block_perm[i].end())) break;
            if (i == 0) return;
        }
    }
}

}  // namespace

std::vector<i64> FiniteModule::canon_key() const {
    std::vector<i64> best;
    std::vector<std::vector<int>> perms;
    collect_block_perms(p_->inv, perms);
    for (const auto& perm : perms) {
        std::vector<i64> key{order()};
        key.insert(key.end(), p_->inv.begin(), p_->inv.end());
        for (const auto& a : p_->act)
            for (int t = 0; t < a.rows; ++t)
                for (int j = 0; j < a.cols; ++j) key.push_back(a.at(perm[t], perm[j]));
        if (best.empty() || key < best) best = std::move(key);
    }
    if (best.empty()) {
        best = {order()};
        best.insert(best.end(), p_->inv.begin(), p_->inv.end());
    }
    return best;
}

bool operator==(const FiniteModule& a, const FiniteModule& b) {
    return a.p_->ring == b.p_->ring && a.p_->inv == b.p_->inv && a.p_->act == b.p_->act;
}

int ModuleHom::apply(int x) const {
    auto xv = dom.vec_of(x);
    std::vector<i64> out(cod.gens(), 0);
    for (int t = 0; t < cod.gens(); ++t) {
        i64 acc = 0;
        for (int j = 0; j < dom.gens(); ++j) acc += matrix.at(t, j) * xv[j];
        out[t] = acc;
    }
    return cod.elem_of(out);
}

bool ModuleHom::is_zero() const {
    for (auto v : matrix.a)
        if (v) return false;
    return true;
}

bool ModuleHom::well_defined_and_equivariant() const {
    const auto& mi = dom.invariant_factors();
    const auto& ni = cod.invariant_factors();
    for (int t = 0; t < cod.gens(); ++t)
        for (int j = 0; j < dom.gens(); ++j)
            if ((matrix.at(t, j) * mi[j]) % ni[t]) return false;
    int k = dom.ring()->gens();
    for (int i = 0; i < k; ++i) {
        Mat lhs = mat_mul(matrix, dom.action(i));
        Mat rhs = mat_mul(cod.action(i), matrix);
        for (int t = 0; t < cod.gens(); ++t)
            for (int s = 0; s < dom.gens(); ++s)
                if ((lhs.at(t, s) - rhs.at(t, s)) % ni[t]) return false;
    }
    return true;
}

FiniteModule regular_module(const RingPtr& r) {
    std::vector<Mat> act;
    for (int i = 0; i < r->gens(); ++i) act.push_back(r->mult_matrix(i));
    return FiniteModule(r, r->invariant_factors(), std::move(act));
}

namespace {

/// Builds the module presented by `q` over the ambient module data.
FiniteModule module_from_quotient(const RingPtr& ring, const std::vector<i64>& /*amb_inv*/,
                                  const std::vector<Mat>& amb_act, const QuotientPresentation& q) {
    int nk = int(q.invariants.size());
    int k = ring->gens();
    std::vector<Mat> act(k, Mat(nk, nk));
    for (int i = 0; i < k; ++i) {
        Mat tmp = mat_mul(q.proj, mat_mul(amb_act[i], q.lift));
        act[i] = tmp;
    }
    return FiniteModule(ring, q.invariants, std::move(act));
}

}  // namespace

FiniteModule cyclic_module(const RingPtr& r, const Ideal& i) {
    std::vector<Mat> act;
    for (int g = 0; g < r->gens(); ++g) act.push_back(r->mult_matrix(g));
    QuotientPresentation q = quotient_presentation(r->invariant_factors(), i.basis);
    return module_from_quotient(r, r->invariant_factors(), act, q);
}

FiniteModule direct_sum(const FiniteModule& m, const FiniteModule& n) {
    if (m.ring() != n.ring()) throw ConfigError("direct_sum: ring mismatch");
    int rm = m.gens(), rn = n.gens(), r = rm + rn;
    std::vector<i64> inv;
    inv.insert(inv.end(), m.invariant_factors().begin(), m.invariant_factors().end());
    inv.insert(inv.end(), n.invariant_factors().begin(), n.invariant_factors().end());
    int k = m.ring()->gens();
    std::vector<Mat> act(k, Mat(r, r));
    for (int i = 0; i < k; ++i) {
        for (int t = 0; t < rm; ++t)
            for (int j = 0; j < rm; ++j) act[i].at(t, j) = m.action(i).at(t, j);
        for (int t = 0; t < rn; ++t)
            for (int j = 0; j < rn; ++j) act[i].at(rm + t, rm + j) = n.action(i).at(t, j);
    }
    // block invariants need not form a chain; renormalize
    QuotientPresentation q = quotient_presentation(inv, Mat(0, r));
    return module_from_quotient(m.ring(), inv, act, q);
}

HomGroup hom_group(const FiniteModule& m, const FiniteModule& n) {
    if (m.ring() != n.ring()) throw ConfigError("hom_group: ring mismatch");
    HomGroup out;
    int rm = m.gens(), rn = n.gens();
    if (rm == 0 || rn == 0) return out;
    const auto& mi = m.invariant_factors();
    const auto& ni = n.invariant_factors();
    int k = m.ring()->gens();
    int nv = rn * rm;  // variable (t, j) at index t * rm + j, modulus ni[t]
    std::vector<i64> mods(nv);
    for (int t = 0; t < rn; ++t)
        for (int j = 0; j < rm; ++j) mods[t * rm + j] = ni[t];

    std::vector<std::vector<i64>> rows;  // constraint rows over variables
    std::vector<i64> row_mod;
    for (int t = 0; t < rn; ++t)
        for (int j = 0; j < rm; ++j) {
            std::vector<i64> row(nv, 0);
            row[t * rm + j] = mi[j];
            rows.push_back(std::move(row));
            row_mod.push_back(ni[t]);
        }
    for (int i = 0; i < k; ++i)
        for (int t = 0; t < rn; ++t)
            for (int s = 0; s < rm; ++s) {
                std::vector<i64> row(nv, 0);
                for (int j = 0; j < rm; ++j) row[t * rm + j] += m.action(i).at(j, s);
                for (int u = 0; u < rn; ++u) row[u * rm + s] -= n.action(i).at(t, u);
                rows.push_back(std::move(row));
                row_mod.push_back(ni[t]);
            }

    int ne = int(rows.size());
    Mat w(ne, nv + ne);
    for (int e = 0; e < ne; ++e) {
        for (int v = 0; v < nv; ++v) w.at(e, v) = rows[e][v];
        w.at(e, nv + e) = row_mod[e];
    }
    SmithForm s = smith_form(w);
    int rank = 0;
    for (int t = 0; t < std::min(w.rows, w.cols); ++t)
        if (s.d.at(t, t)) ++rank;
    // kernel basis: columns of v beyond the rank; project to the variables
    Mat gens(w.cols - rank, nv);
    for (int c = rank; c < w.cols; ++c)
        for (int v = 0; v < nv; ++v) gens.at(c - rank, v) = s.v.at(v, c);
    SubgroupPresentation sp = subgroup_presentation(mods, gens);

    for (size_t t = 0; t < sp.invariants.size(); ++t) {
        Mat h(rn, rm);
        for (int u = 0; u < rn; ++u)
            for (int j = 0; j < rm; ++j) h.at(u, j) = sp.gens_old.at(u * rm + j, int(t));
        out.basis.push_back(ModuleHom{m, n, std::move(h)});
        out.orders.push_back(sp.invariants[t]);
        out.cardinality *= sp.invariants[t];
    }
    return out;
}

std::vector<ModuleHom> all_homs(const FiniteModule& m, const FiniteModule& n, i64 cap) {
    HomGroup g = hom_group(m, n);
    if (g.cardinality > cap) throw ConfigError("all_homs: hom group larger than cap");
    std::vector<ModuleHom> out;
    int rn = n.gens(), rm = m.gens();
    std::vector<i64> c(g.basis.size(), 0);
    const auto& ni = n.invariant_factors();
    for (;;) {
        Mat h(rn, rm);
        for (size_t b = 0; b < g.basis.size(); ++b) {
            if (!c[b]) continue;
            for (int t = 0; t < rn; ++t)
                for (int j = 0; j < rm; ++j) h.at(t, j) += c[b] * g.basis[b].matrix.at(t, j);
        }
        for (int t = 0; t < rn; ++t)
            for (int j = 0; j < rm; ++j) {
                h.at(t, j) %= ni[t];
                if (h.at(t, j) < 0) h.at(t, j) += ni[t];
            }
        out.push_back(ModuleHom{m, n, std::move(h)});
        size_t b = 0;
        while (b < c.size()) {
            if (++c[b] < g.orders[b]) break;
            c[b++] = 0;
        }
        if (b == c.size()) break;
    }
    return out;
}

namespace {

/// Additive span of a set of elements inside `m`. Adds one cyclic group at
/// a time: if S is a subgroup, S + <g> = { s + c*g }.
Bits additive_span(const FiniteModule& m, const std::vector<int>& elems) {
    Bits span(int(m.order()));
    span.set(0);
    for (int g : elems) {
        if (span.test(g)) continue;
        Bits next = span;
        int x = 0;
        i64 o = m.elem_order(g);
        for (i64 c = 1; c < o; ++c) {
            x = m.add(x, g);
            for (int base : span.indices()) next.set(m.add(base, x));
        }
        span = next;
    }
    return span;
}

}  // namespace

SubmoduleEmbedding image(const ModuleHom& phi) {
    std::vector<int> imgs;
    for (int j = 0; j < phi.dom.gens(); ++j) imgs.push_back(phi.apply(phi.dom.gen_elem(j)));
    Bits span = additive_span(phi.cod, imgs);
    return submodule_embedding(phi.cod, span);
}

std::vector<Bits> submodule_sets(const FiniteModule& m) {
    int n = int(m.order());
    int nr = int(m.ring()->order());
    std::vector<Bits> cyclics;
    {
        std::set<Bits> seen;
        for (int x = 0; x < n; ++x) {
            Bits s(n);
            for (int a = 0; a < nr; ++a) s.set(m.act(a, x));
            if (seen.insert(s).second) cyclics.push_back(s);
        }
    }
    std::set<Bits> found(cyclics.begin(), cyclics.end());
    std::vector<Bits> work(cyclics.begin(), cyclics.end());
    while (!work.empty()) {
        Bits cur = work.back();
        work.pop_back();
        for (const auto& c : cyclics) {
            if (c.subset_of(cur)) continue;
            Bits sum(n);
            auto ci = c.indices();
            for (int a : cur.indices())
                for (int b : ci) sum.set(m.add(a, b));
            if (found.insert(sum).second) work.push_back(sum);
        }
    }
    std::vector<Bits> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), [](const Bits& a, const Bits& b) {
        if (a.count() != b.count()) return a.count() < b.count();
        return a < b;
    });
    return out;
}

SubmoduleEmbedding submodule_embedding(const FiniteModule& m, const Bits& elems) {
    int r = m.gens();
    auto idx = elems.indices();
    Mat rows(int(idx.size()), r);
    for (size_t i = 0; i < idx.size(); ++i) {
        auto v = m.vec_of(idx[i]);
        for (int j = 0; j < r; ++j) rows.at(int(i), j) = v[j];
    }
    SubgroupPresentation sp = subgroup_presentation(m.invariant_factors(), rows);
    int k = m.ring()->gens();
    int sr = int(sp.invariants.size());
    std::vector<Mat> act(k, Mat(sr, sr));
    for (int i = 0; i < k; ++i)
        for (int t = 0; t < sr; ++t) {
            std::vector<i64> g(r);
            for (int j = 0; j < r; ++j) g[j] = sp.gens_old.at(j, t);
            auto moved = mat_vec_mod(m.action(i), g, m.invariant_factors());
            auto c = subgroup_coords(sp, moved);
            for (int u = 0; u < sr; ++u) act[i].at(u, t) = c[u];
        }
    FiniteModule sub(m.ring(), sp.invariants, std::move(act));
    Mat incl(r, sr);
    for (int j = 0; j < r; ++j)
        for (int t = 0; t < sr; ++t) incl.at(j, t) = sp.gens_old.at(j, t);
    return SubmoduleEmbedding{m, elems, sub, ModuleHom{sub, m, std::move(incl)}};
}

std::vector<SubmoduleEmbedding> submodules(const FiniteModule& m) {
    std::vector<SubmoduleEmbedding> out;
    for (const auto& s : submodule_sets(m)) out.push_back(submodule_embedding(m, s));
    return out;
}

QuotientResult quotient_module(const SubmoduleEmbedding& e) {
    const FiniteModule& m = e.ambient;
    int r = m.gens();
    int sr = e.sub.gens();
    Mat rel(sr, r);
    for (int t = 0; t < sr; ++t)
        for (int j = 0; j < r; ++j) rel.at(t, j) = e.inclusion.matrix.at(j, t);
    QuotientPresentation q = quotient_presentation(m.invariant_factors(), rel);
    std::vector<Mat> amb_act;
    for (int i = 0; i < m.ring()->gens(); ++i) amb_act.push_back(m.action(i));
    FiniteModule quot = module_from_quotient(m.ring(), m.invariant_factors(), amb_act, q);
    Mat proj = q.proj;
    return QuotientResult{quot, ModuleHom{m, quot, std::move(proj)}};
}

namespace {

bool all_actions_scalar(const FiniteModule& m, std::vector<i64>& scalars) {
    int k = m.ring()->gens();
    int r = m.gens();
    scalars.assign(k, 0);
    for (int i = 0; i < k; ++i) {
        if (r == 0) continue;
        i64 c = m.action(i).at(0, 0);
        for (int t = 0; t < r; ++t)
            for (int j = 0; j < r; ++j) {
                i64 want = (t == j) ? (c % m.invariant_factors()[t]) : 0;
                if (m.action(i).at(t, j) != want) return false;
            }
        scalars[i] = c;
    }
    return true;
}

struct IsoSearch {
    const FiniteModule& m;
    const FiniteModule& n;
    i64 budget;
    i64 nodes = 0;
    std::vector<std::vector<int>> cands;
    std::vector<int> chosen;

    bool found = false;

    void run() {
        std::vector<Bits> spans{Bits(int(n.order()))};
        spans[0].set(0);
        dfs(0, spans[0]);
    }

    void dfs(int depth, const Bits& span) {
        if (found) return;
        if (++nodes > budget) throw UndecidedError("isomorphism search budget exhausted");
        if (depth == m.gens()) {
            if (span.count() == n.order() && check_matrix()) found = true;
            return;
        }
        for (int y : cands[depth]) {
            if (span.test(y)) continue;  // injectivity requires a new element
            chosen[depth] = y;
            Bits next = span;
            int x = 0;
            i64 o = n.elem_order(y);
            for (i64 c = 1; c < o; ++c) {
                x = n.add(x, y);
                for (int base : span.indices()) next.set(n.add(base, x));
            }
            dfs(depth + 1, next);
            if (found) return;
        }
    }

    bool check_matrix() const {
        Mat h(n.gens(), m.gens());
        for (int j = 0; j < m.gens(); ++j) {
            auto v = n.vec_of(chosen[j]);
            for (int t = 0; t < n.gens(); ++t) h.at(t, j) = v[t];
        }
        ModuleHom phi{m, n, h};
        return phi.well_defined_and_equivariant();
    }
};

}  // namespace

bool is_isomorphic(const FiniteModule& m, const FiniteModule& n, i64 budget) {
    if (m.ring() != n.ring()) throw ConfigError("is_isomorphic: ring mismatch");
    if (m.order() != n.order()) return false;
    if (m.invariant_factors() != n.invariant_factors()) return false;
    if (module_sig(m) != module_sig(n)) return false;
    std::vector<i64> sm, sn;
    if (all_actions_scalar(m, sm) && all_actions_scalar(n, sn)) {
        bool same = true;
        for (size_t i = 0; i < sm.size(); ++i) {
            i64 e = m.gens() ? m.invariant_factors().back() : 1;
            if ((sm[i] - sn[i]) % e) same = false;
        }
        // Equal scalar actions on equal additive groups: any additive
        // isomorphism is equivariant. Different scalars may still be
        // isomorphic in principle over odd rings, so only the positive
        // direction short-circuits.
        if (same) return true;
    }
    if (m.canon_key() == n.canon_key()) return true;

    IsoSearch s{m, n, budget, 0, {}, {}, false};
    s.cands.resize(m.gens());
    s.chosen.assign(m.gens(), 0);
    for (int j = 0; j < m.gens(); ++j) {
        int gj = m.gen_elem(j);
        i64 oj = m.elem_order(gj);
        Bits aj = m.ann_elem(gj);
        for (int y = 0; y < n.order(); ++y)
            if (n.elem_order(y) == oj && n.ann_elem(y) == aj) s.cands[j].push_back(y);
    }
    s.run();
    return s.found;
}

Ideal annihilator(const FiniteModule& m) {
    const RingPtr& r = m.ring();
    int nr = int(r->order());
    Bits b(nr);
    for (int a = 0; a < nr; ++a) {
        bool kills = true;
        for (int j = 0; j < m.gens() && kills; ++j)
            if (m.act(a, m.gen_elem(j)) != 0) kills = false;
        if (kills) b.set(a);
    }
    return ideal_from_elems(r, b);
}

Bits support(const FiniteModule& m, const PosetPtr& poset) {
    Ideal ann = annihilator(m);
    Bits out(poset->count());
    for (int i = 0; i < poset->count(); ++i)
        if (ann.elems.subset_of(poset->primes[i].elems)) out.set(i);
    return out;
}

Bits ass(const FiniteModule& m, const PosetPtr& poset) {
    Bits out(poset->count());
    for (int x = 1; x < m.order(); ++x) {
        Bits a = m.ann_elem(x);
        for (int i = 0; i < poset->count(); ++i)
            if (!out.test(i) && a == poset->primes[i].elems) out.set(i);
    }
    return out;
}

SubmoduleEmbedding gamma_w(const FiniteModule& m, const SpecClosedSet& w) {
    const PosetPtr& poset = w.poset;
    Bits elems(int(m.order()));
    for (int x = 0; x < m.order(); ++x) {
        Bits a = m.ann_elem(x);
        bool inside = true;
        for (int i = 0; i < poset->count() && inside; ++i)
            if (a.subset_of(poset->primes[i].elems) && !w.members.test(i)) inside = false;
        if (inside) elems.set(x);
    }
    return submodule_embedding(m, elems);
}

FiniteModule matlis_dual(const FiniteModule& m) {
    int r = m.gens();
    int k = m.ring()->gens();
    const auto& inv = m.invariant_factors();
    // The dual of generator j again has order inv[j]; the action transposes
    // with the scaling inv[s] / inv[j], integral by well-definedness of the
    // original action.
    std::vector<Mat> act(k, Mat(r, r));
    for (int i = 0; i < k; ++i)
        for (int s = 0; s < r; ++s)
            for (int j = 0; j < r; ++j) {
                i64 num = m.action(i).at(j, s) * inv[s];
                assert(num % inv[j] == 0);
                act[i].at(s, j) = (num / inv[j]) % inv[s];
            }
    return FiniteModule(m.ring(), inv, std::move(act));
}

std::uint64_t module_sig(const FiniteModule& m) {
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    };
    std::uint64_t h = mix(14695981039346656037ull, std::uint64_t(m.order()));
    for (auto d : m.invariant_factors()) h = mix(h, std::uint64_t(d));
    h = mix(h, annihilator(m).elems.hash());
    if (m.order() <= 4096) {
        std::vector<std::pair<i64, std::uint64_t>> stats;
        for (int x = 0; x < m.order(); ++x)
            stats.emplace_back(m.elem_order(x), m.ann_elem(x).hash());
        std::sort(stats.begin(), stats.end());
        for (auto& [o, a] : stats) {
            h = mix(h, std::uint64_t(o));
            h = mix(h, a);
        }
    }
    return h;
}

}  // namespace torsion
