#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "torsion/driver.hpp"
#include "torsion/errors.hpp"
#include "torsion/parallel.hpp"

using namespace torsion;

namespace {

void write_or_print(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << text;
}

struct Cli {
    RunConfig cfg;
    std::string config_path;
    std::string list_kind = "serre";
    std::string mutate_which = "connection";
    std::string check_pair_path;
    std::string mode_str;
    bool have_ring = false, have_bound = false, have_suite = false;
};

void add_common(CLI::App* app, Cli& c) {
    app->add_option("--config", c.config_path, "config file (key = value, sections optional)");
    app->add_option("--ring", c.cfg.ring_spec, "ring spec: zmod:<n> | polyq:<p>:<c0,..,1> | prod:(..,..)")
        ->each([&](const std::string&) { c.have_ring = true; });
    app->add_option("--bound", c.cfg.bound, "universe order bound B")
        ->each([&](const std::string&) { c.have_bound = true; });
    app->add_option("--mode", c.mode_str, "enumeration mode: brute | generated");
    app->add_option("--W", [&c](const std::vector<std::string>& v) {
        c.cfg.w_set.clear();
        for (auto& s : v)
            for (size_t p = 0; p < s.size();) {
                size_t q = s.find(',', p);
                if (q == std::string::npos) q = s.size();
                if (q > p) c.cfg.w_set.push_back(std::stoi(s.substr(p, q - p)));
                p = q + 1;
            }
        return true;
    }, "specialization closed set W (comma separated prime indices)");
    app->add_option("--V", [&c](const std::vector<std::string>& v) {
        c.cfg.v_set.clear();
        for (auto& s : v)
            for (size_t p = 0; p < s.size();) {
                size_t q = s.find(',', p);
                if (q == std::string::npos) q = s.size();
                if (q > p) c.cfg.v_set.push_back(std::stoi(s.substr(p, q - p)));
                p = q + 1;
            }
        return true;
    }, "specialization closed set V");
    app->add_option("--Z", [&c](const std::vector<std::string>& v) {
        c.cfg.z_set.clear();
        for (auto& s : v)
            for (size_t p = 0; p < s.size();) {
                size_t q = s.find(',', p);
                if (q == std::string::npos) q = s.size();
                if (q > p) c.cfg.z_set.push_back(std::stoi(s.substr(p, q - p)));
                p = q + 1;
            }
        return true;
    }, "specialization closed set Z");
    app->add_option("--out", c.cfg.out_path, "write JSON output here instead of stdout");
    app->add_option("--dot", c.cfg.dot_path, "write DOT output here");
    app->add_option("--jobs", c.cfg.jobs, "worker threads (0 = library default)");
    app->add_flag("--serial", [&c](std::int64_t) { c.cfg.exec = Exec::serial; },
                  "run the serial reference kernels");
    app->add_flag("--exhaustive-uv", c.cfg.exhaustive_uv,
                  "sweep every (U,V) pair inside each heart, budget permitting");
    app->add_flag("--inject-fault", c.cfg.inject_fault,
                  "testing hook: corrupt one table bit before verifying");
}

void finalize(Cli& c) {
    if (!c.config_path.empty()) {
        RunConfig base = load_config_file(c.config_path);
        // flags override the file
        if (!c.have_ring) c.cfg.ring_spec = base.ring_spec;
        if (!c.have_bound) c.cfg.bound = base.bound;
        if (!c.have_suite) c.cfg.suite = base.suite;
        if (c.mode_str.empty()) c.cfg.mode = base.mode;
        if (c.cfg.w_set.empty()) c.cfg.w_set = base.w_set;
        if (c.cfg.v_set.empty()) c.cfg.v_set = base.v_set;
        if (c.cfg.z_set.empty()) c.cfg.z_set = base.z_set;
        if (c.cfg.out_path.empty()) c.cfg.out_path = base.out_path;
        if (c.cfg.dot_path.empty()) c.cfg.dot_path = base.dot_path;
        if (c.cfg.jobs == 0) c.cfg.jobs = base.jobs;
    }
    if (!c.mode_str.empty()) {
        if (c.mode_str == "brute") c.cfg.mode = EnumMode::brute;
        else if (c.mode_str == "generated") c.cfg.mode = EnumMode::generated;
        else throw ConfigError("unknown mode: " + c.mode_str);
    }
    set_jobs(c.cfg.jobs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"torsion: exhaustive torsion-theory calculus over finite commutative rings"};
    app.require_subcommand(1);
    Cli c;

    auto* sc_spec = app.add_subcommand("spec", "list Spec(R) and its closed subsets");
    add_common(sc_spec, c);
    auto* sc_universe = app.add_subcommand("universe", "dump the module universe and tables");
    add_common(sc_universe, c);
    auto* sc_list = app.add_subcommand("list", "enumerate serre | tt | stt");
    sc_list->add_option("kind", c.list_kind, "serre | tt | stt");
    add_common(sc_list, c);
    auto* sc_mutate = app.add_subcommand("mutate", "apply a mutation operator");
    sc_mutate->add_option("which", c.mutate_which,
                          "connection | left | right | middle | cl | cr | cm");
    add_common(sc_mutate, c);
    auto* sc_verify = app.add_subcommand("verify", "run verification suites");
    sc_verify->add_option("--suite", c.cfg.suite, "sweep | gabriel | example | lemmas | all")
        ->each([&c](const std::string&) { c.have_suite = true; });
    sc_verify->add_option("--check-pair", c.check_pair_path,
                          "re-certify a pair previously emitted by mutate");
    add_common(sc_verify, c);
    auto* sc_dot = app.add_subcommand("export-dot", "emit the torsion-theory lattice as DOT");
    add_common(sc_dot, c);

    try {
        app.parse(argc, argv);
        finalize(c);

        if (sc_spec->parsed()) {
            write_or_print(json_to_string(cmd_spec(c.cfg)), c.cfg.out_path);
        } else if (sc_universe->parsed()) {
            write_or_print(json_to_string(cmd_universe(c.cfg)), c.cfg.out_path);
        } else if (sc_list->parsed()) {
            write_or_print(json_to_string(cmd_list(c.cfg, c.list_kind)), c.cfg.out_path);
        } else if (sc_mutate->parsed()) {
            write_or_print(json_to_string(cmd_mutate(c.cfg, c.mutate_which)), c.cfg.out_path);
        } else if (sc_verify->parsed()) {
            if (!c.check_pair_path.empty()) {
                std::ifstream in(c.check_pair_path);
                if (!in) throw ConfigError("cannot open " + c.check_pair_path);
                nlohmann::json j;
                in >> j;
                int rc = check_pair(j);
                std::cout << (rc == 0 ? "pair re-certified\n" : "pair FAILED re-certification\n");
                return rc;
            }
            VerifyOutcome out = cmd_verify(c.cfg);
            write_or_print(json_to_string(out.report), c.cfg.out_path);
            if (!c.cfg.dot_path.empty()) write_or_print(cmd_export_dot(c.cfg), c.cfg.dot_path);
            std::cerr << (out.exit_code == 0 ? "verify: PASS\n" : "verify: FAIL\n");
            return out.exit_code;
        } else if (sc_dot->parsed()) {
            write_or_print(cmd_export_dot(c.cfg), c.cfg.dot_path.empty() ? c.cfg.out_path
                                                                         : c.cfg.dot_path);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
