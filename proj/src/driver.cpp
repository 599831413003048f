#include "torsion/driver.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "torsion/errors.hpp"
#include "torsion/ring_spec.hpp"

namespace torsion {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kSpecNote =
    "finite ring: Spec(R) is an antichain, so the specialization order is trivial; "
    "verdicts are relative to the stated order bound";

constexpr i64 kCliBoundCap = 512;

UniversePtr build_from_config(const RunConfig& cfg) {
    RingPtr r = parse_ring_spec(cfg.ring_spec);
    if (cfg.bound > kCliBoundCap)
        throw ConfigError("bound " + std::to_string(cfg.bound) + " exceeds the cap (" +
                          std::to_string(kCliBoundCap) + ")");
    i64 cap = std::max<i64>(kDefaultBoundCap, cfg.bound);
    auto u = build_universe(r, cfg.bound, cfg.exec, cap);
    if (cfg.inject_fault) {
        auto broken = std::make_shared<Universe>(*u);
        broken->corrupt_for_testing();
        return broken;
    }
    return u;
}

SpecClosedSet closed_set_from_indices(const UniversePtr& u, const std::vector<int>& idx) {
    const PosetPtr& p = u->poset;
    Bits b(p->count());
    for (int i : idx) {
        if (i < 0 || i >= p->count())
            throw ConfigError("prime index " + std::to_string(i) + " out of range");
        b.set(i);
    }
    for (int i = 0; i < p->count(); ++i)
        if (b.test(i) && !p->leq[i].subset_of(b))
            throw ConfigError("selected prime set is not specialization closed");
    return SpecClosedSet{p, b};
}

json subcat_json(const Subcategory& c) { return json(c.members.indices()); }

json report_json(const MutationReport& r) {
    json j;
    j["check"] = r.check;
    j["ring"] = r.ring;
    j["bound"] = r.bound;
    j["instance"] = r.instance;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["holds"] = r.holds;
    j["skipped"] = r.skipped;
    j["pairs"] = r.pairs;
    j["note"] = r.note;
    if (!r.anomaly.empty()) j["anomaly"] = r.anomaly;
    // timing intentionally omitted: identical configs must serialize
    // byte-identically
    return j;
}

/// Brute mode silently degrades to generated mode past the class cap; the
/// meta block records which mode actually ran.
EnumMode effective_mode(const UniversePtr& u, const RunConfig& cfg) {
    if (cfg.mode == EnumMode::brute && u->num_classes() > kBruteClassCap)
        return EnumMode::generated;
    return cfg.mode;
}

json meta_json(const RunConfig& cfg, EnumMode used) {
    json m;
    m["ring"] = cfg.ring_spec;
    m["bound"] = cfg.bound;
    m["mode"] = used == EnumMode::brute ? "brute" : "generated";
    m["version"] = kVersion;
    m["note"] = kSpecNote;
    if (used == EnumMode::generated) m["exhaustiveness"] = "non-exhaustive (generated mode)";
    if (used != cfg.mode) m["mode_note"] = "brute requested but the class count exceeds the cap";
    return m;
}

}  // namespace

std::string json_to_string(const json& j) { return j.dump(2) + "\n"; }

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    auto parse_ints = [&](const std::string& s) {
        std::vector<int> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) out.push_back(std::stoi(tok));
        return out;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.front() == '[' && line.back() == ']') continue;  // section headers are cosmetic
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        try {
            if (key == "ring") cfg.ring_spec = val;
            else if (key == "bound") cfg.bound = std::stoll(val);
            else if (key == "suite") cfg.suite = val;
            else if (key == "mode") {
                if (val != "brute" && val != "generated")
                    throw ConfigError("mode must be brute or generated");
                cfg.mode = val == "brute" ? EnumMode::brute : EnumMode::generated;
            } else if (key == "W") cfg.w_set = parse_ints(val);
            else if (key == "V") cfg.v_set = parse_ints(val);
            else if (key == "Z") cfg.z_set = parse_ints(val);
            else if (key == "out") cfg.out_path = val;
            else if (key == "dot") cfg.dot_path = val;
            else if (key == "jobs") cfg.jobs = std::stoi(val);
            else if (key == "exhaustive_uv") cfg.exhaustive_uv = (val == "true" || val == "1");
            else throw ConfigError("unknown key: " + key);
        } catch (const std::invalid_argument&) {
            throw ConfigError("config line " + std::to_string(lineno) + ": bad value for " + key);
        }
    }
    return cfg;
}

json cmd_spec(const RunConfig& cfg) {
    RingPtr r = parse_ring_spec(cfg.ring_spec);
    PosetPtr p = spec(r);
    json j;
    j["ring"] = r->spec_string();
    j["order"] = r->order();
    j["invariant_factors"] = r->invariant_factors();
    json primes = json::array();
    for (int i = 0; i < p->count(); ++i) {
        json pr;
        pr["index"] = i;
        pr["order"] = p->primes[i].order;
        pr["elements"] = p->primes[i].elems.indices();
        primes.push_back(pr);
    }
    j["primes"] = primes;
    j["antichain"] = p->is_antichain();
    json sets = json::array();
    for (const auto& w : spec_closed_sets(p)) sets.push_back(w.members.indices());
    j["closed_sets"] = sets;
    j["note"] = kSpecNote;
    return j;
}

json cmd_universe(const RunConfig& cfg) {
    UniversePtr u = build_from_config(cfg);
    json j;
    j["ring"] = u->ring->spec_string();
    j["bound"] = u->bound;
    json classes = json::array();
    for (int c = 0; c < u->num_classes(); ++c) {
        json cl;
        cl["index"] = c;
        cl["order"] = u->class_order[c];
        cl["invariants"] = u->classes[c].invariant_factors();
        cl["supp"] = u->class_supp[c].indices();
        cl["ass"] = u->class_ass[c].indices();
        classes.push_back(cl);
    }
    j["classes"] = classes;
    json sub = json::array(), quot = json::array(), ext = json::array();
    for (int c = 0; c < u->num_classes(); ++c) {
        sub.push_back(u->sub[c].indices());
        quot.push_back(u->quot[c].indices());
        json row = json::array();
        for (int cc = 0; cc < u->num_classes(); ++cc) row.push_back(u->ext[c][cc].indices());
        ext.push_back(row);
    }
    j["tables"] = {{"sub", sub}, {"quot", quot}, {"ext", ext}};
    return j;
}

json cmd_list(const RunConfig& cfg, const std::string& kind) {
    UniversePtr u = build_from_config(cfg);
    EnumMode mode = effective_mode(u, cfg);
    json j;
    j["meta"] = meta_json(cfg, mode);
    if (kind == "serre") {
        auto list = enumerate_serre(u, mode, cfg.exec);
        json arr = json::array();
        for (const auto& s : list) arr.push_back(subcat_json(s));
        j["serre"] = arr;
        j["count"] = list.size();
    } else if (kind == "tt") {
        auto list = enumerate_torsion_theories(u, mode, cfg.exec);
        json arr = json::array();
        for (const auto& p : list)
            arr.push_back({{"x", subcat_json(p.x)}, {"y", subcat_json(p.y)}});
        j["torsion_theories"] = arr;
        j["count"] = list.size();
    } else if (kind == "stt") {
        auto serres = enumerate_serre(u, mode, cfg.exec);
        json arr = json::array();
        i64 total = 0;
        for (const auto& s : serres) {
            auto list = enumerate_s_torsion_theories(u, s, mode, cfg.exec);
            json entry;
            entry["S"] = subcat_json(s);
            json pairs = json::array();
            for (const auto& stt : list)
                pairs.push_back({{"t", subcat_json(stt.t)}, {"f", subcat_json(stt.f)}});
            entry["theories"] = pairs;
            total += i64(list.size());
            arr.push_back(entry);
        }
        j["s_torsion_theories"] = arr;
        j["count"] = total;
    } else {
        throw ConfigError("unknown list kind: " + kind + " (expected serre, tt or stt)");
    }
    return j;
}

json cmd_mutate(const RunConfig& cfg, const std::string& which) {
    UniversePtr u = build_from_config(cfg);
    SpecClosedSet w = closed_set_from_indices(u, cfg.w_set);
    SpecClosedSet v = closed_set_from_indices(u, cfg.v_set);
    SpecClosedSet z = closed_set_from_indices(u, cfg.z_set);

    HereditaryTT hv = hereditary_tt(u, v);
    if (!hv.certified) throw ConfigError("cmd_mutate: (T_V, F_V) failed certification");
    Subcategory s = t_w(u, w);
    if (!is_serre(s)) throw ConfigError("cmd_mutate: T_W failed the Serre check");
    Subcategory uu = intersect(s, t_w(u, z)), vv = intersect(s, f_w(u, z));

    json j;
    j["meta"] = meta_json(cfg, effective_mode(u, cfg));
    j["which"] = which;
    j["instance"] = {{"V", v.members.indices()},
                     {"W", w.members.indices()},
                     {"Z", z.members.indices()},
                     {"X", subcat_json(hv.pair.x)},
                     {"Y", subcat_json(hv.pair.y)},
                     {"S", subcat_json(s)}};

    STorsionTheory conn = connection(s, hv.pair);
    auto emit_pair = [&](const Subcategory& x, const Subcategory& y, bool certified,
                         const std::string& explanation) {
        j["pair"] = {{"x", subcat_json(x)}, {"y", subcat_json(y)}};
        j["certified"] = certified;
        j["explanation"] = explanation;
    };

    if (which == "connection") {
        emit_pair(conn.t, conn.f, conn.certified,
                  "the S-connection is an S-torsion theory and is canonical; heart = T cap F");
        j["heart"] = subcat_json(conn.heart);
        j["canonical"] = is_canonical(conn.t, conn.f);
    } else if (which == "left" || which == "cl") {
        MutationReport r = check_corollary_connection_left(hv.pair, s);
        TTPair sep = left_separation(conn);
        emit_pair(sep.x, sep.y, r.lhs,
                  std::string("torsion theory iff the connection heart is left canonical; "
                              "heart left canonical = ") +
                      (r.rhs ? "true" : "false"));
    } else if (which == "right" || which == "cr") {
        MutationReport r = check_corollary_connection_right(hv.pair, s);
        TTPair sep = right_separation(conn);
        emit_pair(sep.x, sep.y, r.lhs,
                  std::string("torsion theory iff the connection heart is right canonical; "
                              "heart right canonical = ") +
                      (r.rhs ? "true" : "false"));
    } else if (which == "middle" || which == "cm") {
        MutationReport r = check_corollary_connection_middle(hv.pair, s, uu, vv);
        TTPair sep = middle_separation(conn, uu, vv);
        emit_pair(sep.x, sep.y, r.lhs,
                  std::string("torsion theory iff heart left+right canonical and (U,V) splits "
                              "the heart; rhs = ") +
                      (r.rhs ? "true" : "false"));
        j["U"] = subcat_json(uu);
        j["V2"] = subcat_json(vv);
    } else {
        throw ConfigError("unknown mutation: " + which +
                          " (expected connection, left, right, middle, cl, cr, cm)");
    }
    j["ring"] = u->ring->spec_string();
    j["bound"] = u->bound;
    return j;
}

VerifyOutcome cmd_verify(const RunConfig& cfg) {
    UniversePtr u = build_from_config(cfg);
    EnumMode mode = effective_mode(u, cfg);
    CheckCounts counts;
    std::vector<MutationReport> reports;
    std::vector<std::string> anomalies;

    // Table invariants run under every suite; fault injection must trip this.
    for (const auto& viol : check_universe_invariants(*u)) {
        ++counts.invariant_violations;
        anomalies.push_back("table invariant: " + viol);
    }

    bool want_sweep = cfg.suite == "all" || cfg.suite == "sweep";
    bool want_gabriel = cfg.suite == "all" || cfg.suite == "gabriel";
    bool want_example = cfg.suite == "all" || cfg.suite == "example";
    bool want_lemmas = cfg.suite == "all" || cfg.suite == "lemmas";
    if (!want_sweep && !want_gabriel && !want_example && !want_lemmas)
        throw ConfigError("unknown suite: " + cfg.suite);

    i64 num_serre = 0, num_tt = 0, num_stt = 0;

    if (want_sweep) {
        SweepOptions opts;
        opts.mode = mode;
        opts.exec = cfg.exec;
        opts.exhaustive_uv = cfg.exhaustive_uv;
        SweepResult res = sweep(u, opts);
        counts.absorb(res.counts);
        for (auto& a : res.anomalies) anomalies.push_back(a);
        for (auto& r : res.reports) reports.push_back(std::move(r));
        num_serre = res.num_serre;
        num_tt = res.num_tt;
        num_stt = res.num_stt;
    }
    if (want_gabriel) {
        MutationReport r = gabriel_check(u, mode, cfg.exec);
        ++counts.checks;
        if (!r.holds) ++counts.equivalence_failures;
        reports.push_back(std::move(r));
    }
    if (want_example) {
        auto closed = spec_closed_sets(u->poset);
        for (const auto& w : closed) {
            if (w.members.none()) continue;  // the heart would be zero
            for (const auto& v : closed)
                for (const auto& z : closed)
                    for (auto& r : verify_example(u, v, w, z)) {
                        ++counts.checks;
                        if (r.skipped) ++counts.skipped;
                        else if (!r.holds) ++counts.equivalence_failures;
                        if (!r.anomaly.empty()) {
                            ++counts.anomalies;
                            anomalies.push_back(r.check + ": " + r.anomaly);
                        }
                        reports.push_back(std::move(r));
                    }
        }
    }
    if (want_lemmas) {
        auto serres = enumerate_serre(u, mode, cfg.exec);
        std::vector<Subcategory> cands = serres;
        if (auto hull = injective_hull_class(u)) {
            Bits b(u->num_classes());
            b.set(0);
            b.set(*hull);
            cands.push_back(Subcategory{u, b});  // non-Serre instance of the general statement
            cands.push_back(serre_closure(Subcategory{u, b}));
        }
        for (const auto& c : cands) {
            MutationReport r = check_lemma_orthogonal_vanish(u, c);
            ++counts.checks;
            if (r.skipped) ++counts.skipped;
            else if (!r.holds) ++counts.equivalence_failures;
            reports.push_back(std::move(r));
        }
        for (const auto& s : serres)
            for (const auto& stt : enumerate_s_torsion_theories(u, s, mode, cfg.exec)) {
                MutationReport r = check_lemma_stable_heart(stt);
                ++counts.checks;
                if (r.skipped) ++counts.skipped;
                else if (!r.holds) ++counts.equivalence_failures;
                reports.push_back(std::move(r));
            }
    }

    json j;
    j["meta"] = meta_json(cfg, mode);
    json jc;
    jc["classes"] = u->num_classes();
    jc["serre"] = num_serre;
    jc["torsion_theories"] = num_tt;
    jc["s_torsion_theories"] = num_stt;
    jc["checks"] = counts.checks;
    jc["equivalence_failures"] = counts.equivalence_failures;
    jc["invariant_violations"] = counts.invariant_violations;
    jc["anomalies"] = counts.anomalies;
    jc["skipped"] = counts.skipped;
    jc["canonical_stt"] = counts.canonical_stt;
    jc["non_canonical_stt"] = counts.non_canonical_stt;
    jc["counterexamples"] = counts.counterexamples();
    j["counts"] = jc;
    json jr = json::array();
    for (const auto& r : reports) jr.push_back(report_json(r));
    j["reports"] = jr;
    j["anomalies"] = anomalies;

    VerifyOutcome out;
    out.report = std::move(j);
    out.exit_code = counts.counterexamples() > 0 ? 1 : 0;
    return out;
}

std::string cmd_export_dot(const RunConfig& cfg) {
    UniversePtr u = build_from_config(cfg);
    EnumMode mode = effective_mode(u, cfg);
    auto tts = enumerate_torsion_theories(u, mode, cfg.exec);
    auto serres = enumerate_serre(u, mode, cfg.exec);

    auto find_node = [&](const Subcategory& x, const Subcategory& y) {
        for (size_t i = 0; i < tts.size(); ++i)
            if (tts[i].x == x && tts[i].y == y) return int(i);
        return -1;
    };

    std::ostringstream dot;
    dot << "digraph torsion_theories {\n";
    dot << "  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
    auto fmt_set = [](const Subcategory& c) {
        std::ostringstream s;
        s << "{";
        bool first = true;
        for (int i : c.members.indices()) {
            if (!first) s << ",";
            s << i;
            first = false;
        }
        s << "}";
        return s.str();
    };
    for (size_t i = 0; i < tts.size(); ++i)
        dot << "  t" << i << " [label=\"X=" << fmt_set(tts[i].x) << "\\nY=" << fmt_set(tts[i].y)
            << "\"];\n";

    // Hasse edges of the torsion-part inclusion order.
    for (size_t i = 0; i < tts.size(); ++i)
        for (size_t j = 0; j < tts.size(); ++j) {
            if (i == j) continue;
            if (!tts[i].x.members.subset_of(tts[j].x.members)) continue;
            bool covers = true;
            for (size_t k = 0; k < tts.size() && covers; ++k) {
                if (k == i || k == j) continue;
                if (tts[i].x.members.subset_of(tts[k].x.members) &&
                    tts[k].x.members.subset_of(tts[j].x.members))
                    covers = false;
            }
            if (covers) dot << "  t" << i << " -> t" << j << ";\n";
        }

    // Mutation edges: which certified pair maps to which under the composed
    // mutations, labeled by kind and heart index.
    std::set<std::string> emitted;
    for (size_t si = 0; si < serres.size(); ++si) {
        const Subcategory& s = serres[si];
        auto fam = middle_uv_family(u, s);
        for (size_t i = 0; i < tts.size(); ++i) {
            STorsionTheory conn = connection(s, tts[i]);
            if (!conn.certified) continue;
            auto try_edge = [&](const TTPair& sep, const std::string& kind) {
                if (!check_torsion_theory(sep.x, sep.y).holds()) return;
                int dst = find_node(sep.x, sep.y);
                if (dst < 0 || dst == int(i)) return;
                std::ostringstream e;
                e << "  t" << i << " -> t" << dst << " [style=dashed,label=\"" << kind << " s"
                  << si << "\"];\n";
                if (emitted.insert(e.str()).second) dot << e.str();
            };
            try_edge(left_separation(conn), "CL");
            try_edge(right_separation(conn), "CR");
            for (const auto& [uu, vv] : fam) try_edge(middle_separation(conn, uu, vv), "CM");
        }
    }
    dot << "}\n";
    return dot.str();
}

int check_pair(const json& mutate_output) {
    RunConfig cfg;
    cfg.ring_spec = mutate_output.at("ring").get<std::string>();
    cfg.bound = mutate_output.at("bound").get<i64>();
    UniversePtr u = build_from_config(cfg);
    auto read_set = [&](const json& arr) {
        Bits b(u->num_classes());
        for (int i : arr.get<std::vector<int>>()) b.set(i);
        return Subcategory{u, b};
    };
    Subcategory x = read_set(mutate_output.at("pair").at("x"));
    Subcategory y = read_set(mutate_output.at("pair").at("y"));
    bool claimed = mutate_output.at("certified").get<bool>();
    std::string which = mutate_output.value("which", "");
    if (which == "connection") {
        // the claim is an S-torsion theory with the stated heart, canonical
        Subcategory heart = read_set(mutate_output.at("instance").at("S"));
        if (!is_serre(heart)) return 1;
        bool ok = is_s_torsion_theory(x, y, heart) && intersect(x, y) == heart &&
                  is_canonical(x, y);
        return ok == claimed ? 0 : 1;
    }
    TTVerdict v = check_torsion_theory(x, y);
    if (!v.agree()) return 1;
    return v.holds() == claimed ? 0 : 1;
}

}  // namespace torsion
