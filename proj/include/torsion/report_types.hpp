#pragma once

#include <map>
#include <string>
#include <vector>

#include "torsion/intmat.hpp"

namespace torsion {

/// Outcome of one machine check: an equivalence instance, a lemma instance,
/// or a count cross-check. `instance` and `pairs` hold subcategories as
/// sorted class-index lists. `ms` is wall time and is intentionally left out
/// of serialized reports so that identical configurations produce
/// byte-identical output.
struct MutationReport {
    std::string check;
    std::string ring;
    i64 bound = 0;
    std::map<std::string, std::vector<int>> instance;
    bool lhs = false;
    bool rhs = false;
    bool holds = false;
    bool skipped = false;
    std::map<std::string, std::vector<int>> pairs;
    std::string note;
    std::string anomaly;  // non-empty when a characterization diverged
    double ms = 0.0;
};

struct CheckCounts {
    i64 checks = 0;
    i64 equivalence_failures = 0;
    i64 invariant_violations = 0;
    i64 anomalies = 0;
    i64 skipped = 0;
    i64 canonical_stt = 0;
    i64 non_canonical_stt = 0;

    i64 counterexamples() const { return equivalence_failures + invariant_violations + anomalies; }
    void absorb(const CheckCounts& o) {
        checks += o.checks;
        equivalence_failures += o.equivalence_failures;
        invariant_violations += o.invariant_violations;
        anomalies += o.anomalies;
        skipped += o.skipped;
        canonical_stt += o.canonical_stt;
        non_canonical_stt += o.non_canonical_stt;
    }
};

}  // namespace torsion
