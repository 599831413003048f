#include "torsion/universe.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <sstream>

#include "torsion/errors.hpp"
#include "torsion/presentation.hpp"

namespace torsion {

namespace {

/// Quotient of m by the submodule with the given element set, skipping the
/// submodule presentation (the relation rows are just the element lifts).
FiniteModule quotient_by_set(const FiniteModule& m, const Bits& elems) {
    int r = m.gens();
    auto idx = elems.indices();
    Mat rel(int(idx.size()), r);
    for (size_t i = 0; i < idx.size(); ++i) {
        auto v = m.vec_of(idx[i]);
        for (int j = 0; j < r; ++j) rel.at(int(i), j) = v[j];
    }
    QuotientPresentation q = quotient_presentation(m.invariant_factors(), rel);
    int k = m.ring()->gens();
    std::vector<Mat> act(k);
    for (int i = 0; i < k; ++i) act[i] = mat_mul(q.proj, mat_mul(m.action(i), q.lift));
    return FiniteModule(m.ring(), q.invariants, std::move(act));
}

int lookup_class(const Universe& u, const FiniteModule& m, std::uint64_t sig) {
    auto it = u.sig_index.find(sig);
    if (it == u.sig_index.end()) return -1;
    auto key = m.canon_key();
    for (int c : it->second) {
        if (u.classes[c].canon_key() == key) return c;
        if (is_isomorphic(u.classes[c], m)) return c;
    }
    return -1;
}

}  // namespace

int Universe::class_of(const FiniteModule& m) const {
    if (m.order() > bound) throw ConfigError("class_of: module order exceeds universe bound");
    int c = lookup_class(*this, m, module_sig(m));
    if (c < 0) throw std::logic_error("universe completeness violation: class not found");
    return c;
}

void Universe::corrupt_for_testing() {
    if (!sub.empty()) sub.back().reset(0);
}

UniversePtr build_universe(const RingPtr& r, i64 bound, Exec exec, i64 bound_cap) {
    if (bound < 1) throw ConfigError("universe bound must be >= 1");
    if (bound > bound_cap) throw ConfigError("universe bound exceeds cap");
    auto u = std::make_shared<Universe>();
    u->ring = r;
    u->poset = spec(r);
    u->bound = bound;

    FiniteModule reg = regular_module(r);

    // Round-based closure: quotients of M (+) R for every known class M.
    std::vector<FiniteModule> classes{FiniteModule::zero(r)};
    std::map<std::vector<i64>, int> by_key{{classes[0].canon_key(), 0}};
    std::unordered_map<std::uint64_t, std::vector<int>> sig_index;
    sig_index[module_sig(classes[0])].push_back(0);
    std::vector<int> frontier{0};

    int max_rounds = 1;
    for (i64 x = 1; x < bound; x *= 2) ++max_rounds;

    int rounds = 0;
    while (!frontier.empty()) {
        if (++rounds > max_rounds + 1)
            throw std::logic_error("universe build did not reach a fixpoint in log2(B) rounds");
        // submodule enumeration per frontier class, then one flat parallel
        // pass over all quotient jobs
        std::vector<std::optional<FiniteModule>> pmods(frontier.size());
        std::vector<std::vector<Bits>> psets(frontier.size());
        par_for(int(frontier.size()), exec, [&](int fi) {
            pmods[fi].emplace(direct_sum(classes[frontier[fi]], reg));
            psets[fi] = submodule_sets(*pmods[fi]);
        });
        struct Job {
            int fi;
            int si;
        };
        std::vector<Job> jobs;
        for (size_t fi = 0; fi < frontier.size(); ++fi)
            for (size_t si = 0; si < psets[fi].size(); ++si) {
                i64 qorder = pmods[fi]->order() / psets[fi][si].count();
                if (qorder <= bound) jobs.push_back({int(fi), int(si)});
            }
        std::vector<std::optional<FiniteModule>> quots(jobs.size());
        std::vector<std::vector<i64>> quot_keys(jobs.size());
        par_for(int(jobs.size()), exec, [&](int i) {
            quots[i].emplace(quotient_by_set(*pmods[jobs[i].fi], psets[jobs[i].fi][jobs[i].si]));
            quot_keys[i] = quots[i]->canon_key();
        });
        // serial deterministic merge in job order
        std::vector<int> next;
        for (size_t i = 0; i < jobs.size(); ++i) {
            if (by_key.count(quot_keys[i])) continue;
            FiniteModule& q = *quots[i];
            std::uint64_t sig = module_sig(q);
            bool dup = false;
            for (int c : sig_index[sig])
                if (is_isomorphic(classes[c], q)) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            int idx = int(classes.size());
            classes.push_back(q);
            by_key.emplace(quot_keys[i], idx);
            sig_index[sig].push_back(idx);
            next.push_back(idx);
        }
        frontier = std::move(next);
    }

    // Deterministic class order.
    std::vector<int> order(classes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::vector<std::vector<i64>> keys(classes.size());
    for (size_t i = 0; i < classes.size(); ++i) keys[i] = classes[i].canon_key();
    std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    for (int i : order) u->classes.push_back(classes[i]);
    u->sig_index.clear();
    for (size_t i = 0; i < u->classes.size(); ++i) {
        u->sig_index[module_sig(u->classes[i])].push_back(int(i));
        u->class_order.push_back(u->classes[i].order());
    }
    if (u->classes[0].order() != 1) throw std::logic_error("class 0 is not the zero module");

    // Tables from one submodule sweep per class. Exceptions must not cross
    // the parallel region, so failures are flagged and rethrown after.
    int n = u->num_classes();
    u->sub.assign(n, Bits(n));
    u->quot.assign(n, Bits(n));
    u->ext.assign(n, std::vector<Bits>(n, Bits(n)));
    std::atomic<bool> incomplete{false};
    par_for(n, exec, [&](int c) {
        for (const auto& emb : submodules(u->classes[c])) {
            int cs = lookup_class(*u, emb.sub, module_sig(emb.sub));
            int cq = -1;
            if (cs >= 0) {
                FiniteModule q = quotient_module(emb).quotient;
                cq = lookup_class(*u, q, module_sig(q));
            }
            if (cs < 0 || cq < 0) {
                incomplete.store(true);
                return;
            }
            u->sub[c].set(cs);
            u->quot[c].set(cq);
            u->ext[c][cs].set(cq);
        }
    });
    if (incomplete.load())
        throw std::logic_error("universe completeness violation during table build");
    u->vanish.assign(n, Bits(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if ((u->quot[a] & u->sub[b]).count() == 1) u->vanish[a].set(b);

    int np = u->poset->count();
    u->class_supp.assign(n, Bits(np));
    u->class_ass.assign(n, Bits(np));
    par_for(n, exec, [&](int c) {
        u->class_supp[c] = support(u->classes[c], u->poset);
        u->class_ass[c] = ass(u->classes[c], u->poset);
    });

    auto violations = check_universe_invariants(*u);
    if (!violations.empty())
        throw std::logic_error("universe table invariant violated: " + violations.front());
    return u;
}

std::vector<std::string> check_universe_invariants(const Universe& u) {
    std::vector<std::string> out;
    int n = u.num_classes();
    auto complain = [&](const std::string& s) { out.push_back(s); };
    if (u.classes.empty() || u.classes[0].order() != 1) complain("class 0 is not the zero module");
    for (int c = 0; c < n; ++c) {
        if (!u.sub[c].test(0) || !u.quot[c].test(0))
            complain("class " + std::to_string(c) + ": zero class missing from Sub/Quot");
        if (!u.sub[c].test(c) || !u.quot[c].test(c))
            complain("class " + std::to_string(c) + ": class missing from its own Sub/Quot");
        for (int cc = 0; cc < n; ++cc)
            for (int cd = 0; cd < n; ++cd) {
                if (!u.ext[c][cc].test(cd)) continue;
                if (u.class_order[cc] * u.class_order[cd] != u.class_order[c])
                    complain("ext order product mismatch");
                if (!u.sub[c].test(cc) || !u.quot[c].test(cd))
                    complain("ext witness not reflected in Sub/Quot");
            }
        for (int m = 0; m < n; ++m) {
            if (u.ext[m][0].test(c) != (m == c))
                complain("Ext(0, m, d) must hold exactly when m = d");
            if (u.ext[m][c].test(0) != (m == c))
                complain("Ext(c, m, 0) must hold exactly when m = c");
        }
        if ((u.class_supp[c].none()) != (u.class_order[c] == 1))
            complain("Supp empty iff zero module");
        if (!u.class_ass[c].subset_of(u.class_supp[c])) complain("Ass not contained in Supp");
        if ((u.class_ass[c].none()) != (u.class_order[c] == 1)) complain("Ass empty iff zero module");
    }
    for (int a = 0; a < n && out.empty(); ++a)
        for (int b = 0; b < n; ++b)
            if (u.vanish[a].test(b) != ((u.quot[a] & u.sub[b]).count() == 1))
                complain("hom-vanishing table inconsistent with Sub/Quot");
    return out;
}

}  // namespace torsion
