#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "torsion/mutation.hpp"
#include "torsion/spec_family.hpp"

namespace torsion {

/// One verification/exploration run. Mirrors the CLI flags; a config file
/// (key = value lines, optional [section] headers) fills the same fields and
/// flags override it.
struct RunConfig {
    std::string ring_spec = "zmod:6";
    i64 bound = 36;
    std::string suite = "all";  // sweep | gabriel | example | lemmas | all
    EnumMode mode = EnumMode::brute;
    std::vector<int> w_set, v_set, z_set;  // prime indices into spec(R)
    std::string out_path, dot_path;
    int jobs = 0;
    bool inject_fault = false;  // test hook: corrupt one table bit
    bool exhaustive_uv = false;
    Exec exec = Exec::parallel;
};

RunConfig load_config_file(const std::string& path);

nlohmann::json cmd_spec(const RunConfig& cfg);
nlohmann::json cmd_universe(const RunConfig& cfg);
nlohmann::json cmd_list(const RunConfig& cfg, const std::string& kind);  // serre | tt | stt
nlohmann::json cmd_mutate(const RunConfig& cfg, const std::string& which);

struct VerifyOutcome {
    nlohmann::json report;
    int exit_code = 0;  // 0 pass, 1 counterexample/violation, 2 config/resource
};

VerifyOutcome cmd_verify(const RunConfig& cfg);

std::string cmd_export_dot(const RunConfig& cfg);

/// Re-certifies a pair previously emitted by cmd_mutate (round-trip check).
/// Returns 0 when the stored pair re-certifies with the same verdicts.
int check_pair(const nlohmann::json& mutate_output);

std::string json_to_string(const nlohmann::json& j);

}  // namespace torsion
