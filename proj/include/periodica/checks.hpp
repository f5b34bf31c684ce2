#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "periodica/orbit.hpp"

namespace periodica {

using json = nlohmann::ordered_json;

// One executable verification sweep per asserted bound, plus the
// conjecture scan.
// check_id in {T1.1, T1.2, T1.3, T1.4, L2.2, L2.4, L2.6, L2.7, C3.1,
// conjecture}.
struct CheckConfig {
    std::string check_id;
    int n = 0;
    int p = 0;
    int samples = 50;
    int budget = 32;
    std::uint64_t seed = 0;
    std::map<std::string, double> tolerances;

    double tol(const std::string& key, double fallback) const {
        auto it = tolerances.find(key);
        return it == tolerances.end() ? fallback : it->second;
    }
};

struct VerificationReport {
    json report;  // full serialized form, schema 1
    bool pass = false;
    double min_margin = 0.0;
};

VerificationReport run_check(const CheckConfig& cfg);

// Min orbital-diameter estimate over a family of projective conjugates, with
// margin against d_p; asserts only the proven floors (p in {2,3} or n = 1).
// For (n=3, p=5) also emits the nondegenerate-4-simplex orbit statistic.
VerificationReport conjecture_scan(int n, int p, int family_samples, int budget,
                                   std::uint64_t seed);

// Reconstructs a map from a witness payload ({kind: isometry | projective |
// circle, ...}) as stored in reports.
PeriodicMap map_from_payload(const nlohmann::json& payload);

// Recomputes a stored witness's metrics and compares within its tolerance.
bool verify_witness(const nlohmann::json& witness, std::string* why = nullptr);

// Re-verifies every witness of a report; returns false on any mismatch.
bool replay_report(const nlohmann::json& report, std::ostream& log);

}  // namespace periodica
