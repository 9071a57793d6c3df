#pragma once

// End-to-end corank report: for each prime and each twist m in range, the
// generic corank r_m, the torsion contribution t_m from the assigned branch
// series, and the resulting H^1 / H^2 coranks, plus a conventions block
// recording every choice the numbers depend on.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tatecoh/lseries.hpp"

namespace tatecoh {

struct RunConfig {
    std::vector<long> primes;
    long m_from = 1;
    long m_to = 8;
    int N = 8;
    int M = 16;
    std::optional<mpz_class> u_override;  // only with a single prime
    std::map<long, long> branch_map;      // m -> branch exponent j
    std::string cache_dir;
    std::string format = "json";          // "json" | "text"
};

// strict JSON: unknown keys rejected, field paths in every error
RunConfig parse_config(const std::string& json_text);
std::string config_to_json(const RunConfig& config);

struct ReportEntry {
    long m = 0;
    bool outside_hypotheses = false;  // m = 0 mod p-1, no corank claim made
    int r_m = 0;
    int t_m = 0;
    bool t_certified = false;
    std::string t_certificate;
    long branch_j = -1;
    int corank_h1 = 0;
    int corank_h2 = 0;
    std::string error;  // nonempty when this entry failed; numbers then unset
};

struct BranchSummary {
    long j = 0;
    int mu = 0;
    int lambda = 0;
    bool mu_certified = false;
    bool lambda_certified = false;
    std::string convention_id;
    int level_used = 0;
    std::string error;
};

struct PrimeReport {
    long p = 0;
    mpz_class u;
    long delta_generator = 0;
    std::vector<BranchSummary> branches;  // even j in [2, p-3]
    std::vector<ReportEntry> entries;
    // sum of r_m over one period m in [1, p-1] off the zero branch; the
    // parity count forces (p-1)/2
    int rank_period_sum = 0;
    bool rank_period_ok = false;
};

struct CohomologyReport {
    int schema_version = 1;
    RunConfig config;
    std::vector<PrimeReport> primes;
};

CohomologyReport run_report(const RunConfig& config);

// deterministic: equal configs give byte-identical output
std::string report_to_json(const CohomologyReport& r);
std::string report_to_text(const CohomologyReport& r);

} // namespace tatecoh
