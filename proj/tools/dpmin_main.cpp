// dpmin: batch experiment runner for the dp-minimality workbench.
//
// One subcommand per experiment kind; a JSON config file supplies the full
// experiment description and overrides any quick flags.  Reports and CSV
// tables are written side by side; `replay` re-runs the config echoed in a
// report and diffs the tables.
//
// Exit codes: 0 all checks pass, 1 a property check failed or a replay
// diverged, 2 config/budget/usage errors.

#include <iostream>
#include <fstream>

#include "CLI11.hpp"

#include "dpmin/errors.hpp"
#include "dpmin/experiment.hpp"
#include "dpmin/ict.hpp"
#include "dpmin/structure.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_prefix;
    long long seed = -1;
    std::size_t workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON experiment config (overrides flags)");
    cmd->add_option("--out", args.out_prefix, "output prefix for <prefix>.report.txt and <prefix>.csv");
    cmd->add_option("--seed", args.seed, "seed for randomized recipes");
    cmd->add_option("--workers", args.workers,
                    "worker threads (default: DPMIN_WORKERS or 1; output is identical either way)");
}

// Quick flags build a base document; a config file, when given, wins.
int run_kind(const std::string& kind, const CommonArgs& args, nlohmann::json flags) {
    nlohmann::json doc;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw dpmin::ConfigError("cannot open config file '" + args.config_path + "'");
        in >> doc;
    } else {
        doc = std::move(flags);
        doc["schema_version"] = 1;
        doc["kind"] = kind;
        if (args.seed >= 0) doc["seed"] = static_cast<std::uint64_t>(args.seed);
    }
    if (args.workers > 0) doc["workers"] = args.workers;

    dpmin::RunReport report = dpmin::run(dpmin::ExperimentConfig::from_json(std::move(doc)));
    if (args.out_prefix.empty())
        std::cout << report.render();
    else
        dpmin::write_outputs(report, args.out_prefix);
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dp-minimality workbench: certificates, type counts, QE, series and p-adic checks"};
    app.require_subcommand(1);

    CommonArgs common;
    nlohmann::json flags;

    auto* ict = app.add_subcommand("ict-search", "search for an ICT certificate over a pool");
    add_common(ict, common);

    auto* inp = app.add_subcommand("inp-check", "verify an inp certificate setup");
    add_common(inp, common);

    auto* bp = app.add_subcommand("breakpoints", "Delta-type block profile of a sequence");
    add_common(bp, common);

    auto* vc = app.add_subcommand("vc-profile", "exact Delta-type counts and growth slope");
    add_common(vc, common);

    auto* qe = app.add_subcommand("qe", "eliminate quantifiers over the lexicographic group");
    add_common(qe, common);
    std::string qe_formula, qe_rule = "validated";
    std::size_t qe_grid = 3;
    qe->add_option("--formula", qe_formula, "input formula");
    qe->add_option("--rule", qe_rule, "paper|validated")
        ->check(CLI::IsMember({"paper", "validated"}));
    qe->add_option("--oracle-grid", qe_grid, "grid points per free variable for the agreement report");

    auto* hahn = app.add_subcommand("hahn-verify", "series model: class arithmetic and axiom suite");
    add_common(hahn, common);
    std::size_t hahn_samples = 500;
    hahn->add_option("--samples", hahn_samples, "sample count");

    auto* padic = app.add_subcommand("padic-verify", "valuation biconditional and cell-like k");
    add_common(padic, common);
    std::vector<long long> padic_primes{2, 3, 5};
    int padic_precision = 12;
    padic->add_option("--primes", padic_primes, "primes to test");
    padic->add_option("--precision", padic_precision, "unit digits");

    auto* rep = app.add_subcommand("replay", "re-run a report's config echo and diff the tables");
    std::string report_path;
    rep->add_option("report", report_path, "path to a .report.txt file")->required();

    auto* chk = app.add_subcommand("check-cert", "re-verify a serialized ICT certificate");
    std::string cert_path;
    chk->add_option("certificate", cert_path, "path to a certificate JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (rep->parsed()) {
            dpmin::ReplayResult result = dpmin::replay_report(report_path);
            if (result.identical) {
                std::cout << "replay: identical CSV body (" << result.fresh.csv_rows.size()
                          << " rows)\n";
                return 0;
            }
            std::cout << "replay: tables differ\n";
            for (const auto& d : result.diffs) std::cout << "  " << d << "\n";
            return 1;
        }
        if (chk->parsed()) {
            std::ifstream in(cert_path);
            if (!in) throw dpmin::ConfigError("cannot open certificate '" + cert_path + "'");
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            dpmin::ICTCertificate cert = dpmin::deserialize_certificate(text);
            auto s = dpmin::make_structure(cert.structure);
            std::string why;
            bool ok = dpmin::check_ict_certificate(*s, cert, &why);
            std::cout << (ok ? "certificate VALID" : "certificate INVALID: " + why) << "\n";
            return ok ? 0 : 1;
        }

        if (qe->parsed() && common.config_path.empty()) {
            flags["formula"] = qe_formula;
            flags["rule"] = qe_rule;
            flags["oracle_grid"] = qe_grid;
        }
        if (hahn->parsed() && common.config_path.empty()) flags["samples"] = hahn_samples;
        if (padic->parsed() && common.config_path.empty()) {
            flags["primes"] = padic_primes;
            flags["precision"] = padic_precision;
            flags["prop61"] = {{"ks", {1, 2, 3, 4}}, {"triples", 2000}};
            flags["celllike"] = {{"ns", {2, 3, 4}}, {"k_max", 8}};
        }

        for (auto* cmd : {ict, inp, bp, vc, qe, hahn, padic})
            if (cmd->parsed()) return run_kind(cmd->get_name(), common, std::move(flags));
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const dpmin::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dpmin::BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
