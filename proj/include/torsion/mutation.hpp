#pragma once

#include "torsion/report_types.hpp"
#include "torsion/subcat.hpp"

namespace torsion {

/// The connection Phi_S((X, Y)) = (X*S, S*Y). The result is re-verified from
/// scratch (TT1-TT3 and the heart identity), never assumed; `certified` is
/// false when re-verification fails, which callers must surface as an
/// anomaly.
STorsionTheory connection(const Subcategory& s, const TTPair& xy);

/// Separations: raw candidate pairs, not certified.
TTPair left_separation(const STorsionTheory& stt);
TTPair right_separation(const STorsionTheory& stt);
TTPair middle_separation(const STorsionTheory& stt, const Subcategory& u, const Subcategory& v);

MutationReport check_theorem_left(const STorsionTheory& stt);
MutationReport check_theorem_right(const STorsionTheory& stt);
MutationReport check_theorem_middle(const STorsionTheory& stt, const Subcategory& u,
                                    const Subcategory& v);
MutationReport check_corollary_special(const STorsionTheory& stt);
MutationReport check_corollary_connection_left(const TTPair& xy, const Subcategory& s);
MutationReport check_corollary_connection_right(const TTPair& xy, const Subcategory& s);
MutationReport check_corollary_connection_middle(const TTPair& xy, const Subcategory& s,
                                                 const Subcategory& u, const Subcategory& v);

/// Heart identities that every certified theory must satisfy (T = T*S,
/// F = S*F, T cap F = S, the two always-true inclusions). Returns violation
/// descriptions, empty when sound.
std::vector<std::string> heart_identity_violations(const STorsionTheory& stt);

/// The (U, V) family swept for middle checks: (S cap T_Z, S cap F_Z) for all
/// specialization closed Z, plus the degenerate pairs (0, S) and (S, 0).
std::vector<std::pair<Subcategory, Subcategory>> middle_uv_family(const UniversePtr& u,
                                                                  const Subcategory& s);

/// Every check kind the sweep can dispatch.
std::vector<std::string> default_sweep_kinds();

struct SweepOptions {
    EnumMode mode = EnumMode::brute;
    Exec exec = Exec::parallel;
    bool exhaustive_uv = false;    // every (U, V) pair inside S, budget permitting
    i64 uv_pair_budget = 1 << 20;  // descriptive extra coverage only
    std::vector<std::string> kinds = default_sweep_kinds();  // empty set runs nothing
};

struct SweepResult {
    std::vector<MutationReport> reports;
    CheckCounts counts;
    std::vector<std::string> anomalies;
    i64 num_serre = 0;
    i64 num_tt = 0;
    i64 num_stt = 0;
};

/// Runs every theorem and corollary checker over all Serre subcategories,
/// all ordinary and S-torsion theories, and the middle family; aggregates
/// counterexamples (expected zero).
SweepResult sweep(const UniversePtr& u, const SweepOptions& opts = {});

}  // namespace torsion
