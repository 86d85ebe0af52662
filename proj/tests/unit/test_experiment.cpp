#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "dpmin/errors.hpp"
#include "dpmin/experiment.hpp"

using namespace dpmin;

namespace {

ExperimentConfig cfg(nlohmann::json j) {
    j["schema_version"] = 1;
    return ExperimentConfig::from_json(std::move(j));
}

nlohmann::json small_hahn() {
    return {{"kind", "hahn-verify"}, {"seed", 7}, {"samples", 60}};
}

std::string temp_path(const char* name) {
    return std::string("dpmin_test_") + name;
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"kind", "qe"}}), ConfigError);  // no version
    CHECK_THROWS_AS(run(cfg({{"kind", "unheard-of"}})), ConfigError);
    // Randomized recipes demand a seed.
    CHECK_THROWS_AS(run(cfg({{"kind", "hahn-verify"}, {"samples", 10}})), ConfigError);
}

TEST_CASE("equal configs produce byte-identical CSV bodies") {
    RunReport a = run(cfg(small_hahn()));
    RunReport b = run(cfg(small_hahn()));
    CHECK(a.csv_body() == b.csv_body());
    CHECK(a.all_pass());

    nlohmann::json qe = {{"kind", "qe"}, {"seed", 11}, {"corpus_size", 40}, {"rule", "validated"}};
    CHECK(run(cfg(qe)).csv_body() == run(cfg(qe)).csv_body());
}

TEST_CASE("worker count does not change the tables") {
    nlohmann::json base = {{"kind", "vc-profile"},
                           {"structure", "simple_dlo"},
                           {"delta", {{{"formula", "x < y"}, {"element_var", "x"}, {"params", {"y"}}}}},
                           {"recipe", "uniform_grid"},
                           {"sizes", {4, 8, 16}}};
    nlohmann::json threaded = base;
    threaded["workers"] = 4;
    CHECK(run(cfg(base)).csv_body() == run(cfg(threaded)).csv_body());
}

TEST_CASE("replay: fresh report matches, edited seed diffs, truncation is corrupt") {
    RunReport report = run(cfg(small_hahn()));
    std::string path = temp_path("replay.report.txt");
    {
        std::ofstream out(path);
        out << report.render();
    }
    ReplayResult fresh = replay_report(path);
    CHECK(fresh.identical);
    CHECK(fresh.diffs.empty());

    // Different seed in the echo: tables must diff (sampled violations stay
    // zero but sample columns are seed-independent... counts differ through
    // the qe corpus instead).
    nlohmann::json qe = {{"kind", "qe"}, {"seed", 11}, {"corpus_size", 25}, {"rule", "validated"}};
    RunReport qr = run(cfg(qe));
    std::string qpath = temp_path("replay_qe.report.txt");
    {
        std::string text = qr.render();
        auto pos = text.find("\"seed\": 11");
        REQUIRE(pos != std::string::npos);
        text.replace(pos, 10, "\"seed\": 12");
        std::ofstream out(qpath);
        out << text;
    }
    ReplayResult edited = replay_report(qpath);
    CHECK_FALSE(edited.identical);
    CHECK(!edited.diffs.empty());

    std::string tpath = temp_path("replay_trunc.report.txt");
    {
        std::string text = report.render();
        std::ofstream out(tpath);
        out << text.substr(0, text.find("== csv =="));
    }
    CHECK_THROWS_AS(replay_report(tpath), ConfigError);

    std::remove(path.c_str());
    std::remove(qpath.c_str());
    std::remove(tpath.c_str());
}

TEST_CASE("qe corpus: paper rule emits a disagreement report containing block 0") {
    nlohmann::json paper = {{"kind", "qe"}, {"seed", 5}, {"corpus_size", 60}, {"rule", "paper"}};
    RunReport report = run(cfg(paper));
    CHECK(report.kv.at("disagreements") != "0");
    CHECK(report.kv.at("block0_agrees") == "false");
    std::string sample = report.kv.at("disagreement_blocks_sample");
    CHECK(sample.find("0 ") == 0);

    nlohmann::json validated = paper;
    validated["rule"] = "validated";
    RunReport v = run(cfg(validated));
    CHECK(v.all_pass());
    CHECK(v.kv.at("disagreements") == "0");
}

TEST_CASE("qe single-formula mode reports the eliminated output") {
    nlohmann::json j = {{"kind", "qe"},
                        {"seed", 3},
                        {"formula", "E x. ((0,0) < x & x < (0,1))"},
                        {"rule", "validated"},
                        {"oracle_grid", 3}};
    RunReport report = run(cfg(j));
    CHECK(report.all_pass());
    CHECK(report.kv.at("output_quantifier_free") == "true");
}

TEST_CASE("ict-search config path: absence on the dense order") {
    nlohmann::json j = {
        {"kind", "ict-search"},
        {"structure", "simple_dlo"},
        {"phi", {{"formula", "y1 < x & x < y2"}, {"element_var", "x"}, {"params", {"y1", "y2"}}}},
        {"psi", {{"formula", "y1 < x & x < y2"}, {"element_var", "x"}, {"params", {"y1", "y2"}}}},
        {"pool_a", {{"recipe", "grid_intervals"}, {"points", {"0", "1", "2", "3", "4", "5"}}}},
        {"pool_b", {{"recipe", "grid_intervals"}, {"points", {"0", "1", "2", "3", "4", "5"}}}},
        {"m", 2},
        {"n", 2},
        {"mode", "exhaustive"},
        {"budget", {{"max_pool", 15}}},
        {"expect", "absent"}};
    RunReport report = run(cfg(j));
    CHECK(report.all_pass());
    CHECK(report.kv.at("found") == "false");
    CHECK(report.kv.at("exhaustive") == "true");
}

TEST_CASE("inp-check and breakpoints config paths") {
    RunReport inp = run(cfg({{"kind", "inp-check"},
                             {"structure", "pair_dlo"},
                             {"setup", "pair_strips"},
                             {"m", 3},
                             {"n", 3},
                             {"k0", 2},
                             {"k1", 2},
                             {"expect", true}}));
    CHECK(inp.all_pass());

    RunReport bad = run(cfg({{"kind", "inp-check"},
                             {"structure", "pair_dlo"},
                             {"setup", "pair_strips_overlap"},
                             {"m", 3},
                             {"n", 3},
                             {"expect", false}}));
    CHECK(bad.all_pass());

    RunReport bp = run(cfg({{"kind", "breakpoints"},
                            {"structure", "pair_dlo"},
                            {"sequence", {{"recipe", "diagonal"}, {"count", 6}}},
                            {"c", "(1/2, 5/2)"},
                            {"delta",
                             {{{"formula", "lt1(x, c)"}, {"tuple_vars", {"x"}}, {"c_var", "c"}},
                              {{"formula", "lt2(x, c)"}, {"tuple_vars", {"x"}}, {"c_var", "c"}}}},
                            {"expect_blocks", 3}}));
    CHECK(bp.all_pass());
    CHECK(bp.kv.at("blocks") == "3");
}

TEST_CASE("padic-verify config runs both sections") {
    nlohmann::json j = {{"kind", "padic-verify"},
                        {"seed", 9},
                        {"primes", {3}},
                        {"precision", 12},
                        {"prop61", {{"ks", {1, 2}}, {"triples", 400}}},
                        {"celllike", {{"ns", {2}}, {"k_max", 6}}}};
    RunReport report = run(cfg(j));
    CHECK(report.all_pass());
    CHECK(report.kv.at("derived_k_p3_n2") == "1");
}
