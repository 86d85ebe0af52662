#ifndef DPMIN_EXPERIMENT_HPP
#define DPMIN_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace dpmin {

// A validated experiment description.  `raw` keeps the full document for
// echoing into reports; runs re-created from the echo reproduce the tables
// byte for byte.
struct ExperimentConfig {
    int schema_version = 1;
    std::string kind;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::size_t workers = 0;
    nlohmann::json raw;

    static ExperimentConfig from_json(nlohmann::json j);
    static ExperimentConfig from_file(const std::string& path);
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunReport {
    nlohmann::json config;
    std::vector<CheckResult> checks;
    std::string csv_header;
    std::vector<std::string> csv_rows;
    std::map<std::string, std::string> kv;  // derived values, for assertions
    double elapsed_seconds = 0.0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    // Deterministic: header + rows, one trailing newline, no timing.
    std::string csv_body() const;
    std::string render() const;
};

// Executes the experiment.  Throws ConfigError/BudgetError for malformed
// configs and exhausted budgets (CLI exit code 2); check failures are
// recorded in the report (exit code 1).
RunReport run(const ExperimentConfig& config);

struct ReplayResult {
    RunReport fresh;
    bool identical = false;
    std::vector<std::string> diffs;
};

// Re-runs the config echoed in a report file and compares CSV bodies.
ReplayResult replay_report(const std::string& report_path);

// <prefix>.report.txt and <prefix>.csv side by side.
void write_outputs(const RunReport& report, const std::string& out_prefix);

}  // namespace dpmin

#endif  // DPMIN_EXPERIMENT_HPP
