#include "dpmin/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dpmin/errors.hpp"
#include "dpmin/hahn_model.hpp"
#include "dpmin/ict.hpp"
#include "dpmin/padic_model.hpp"
#include "dpmin/qe_lex.hpp"
#include "dpmin/rng.hpp"
#include "dpmin/structure.hpp"
#include "dpmin/vc.hpp"

namespace dpmin {

namespace {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    return out;
}

void add_check(RunReport& r, const std::string& name, bool pass, const std::string& detail) {
    r.checks.push_back({name, pass, detail});
}

const nlohmann::json& need(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(std::string("missing config field '") + key + "'");
    return *it;
}

void need_seed(const ExperimentConfig& c) {
    if (!c.has_seed) throw ConfigError("a seed is mandatory for randomized recipes");
}

ParamFormula load_param_formula(const nlohmann::json& j, const Signature& sig) {
    ParamFormula pf;
    pf.formula = parse_formula(need(j, "formula").get<std::string>(), sig);
    pf.element_var = j.value("element_var", std::string("x"));
    if (j.contains("params")) pf.params = j.at("params").get<std::vector<std::string>>();
    return pf;
}

SearchBudget load_budget(const nlohmann::json& j) {
    SearchBudget b;
    if (!j.contains("budget")) return b;
    const auto& in = j.at("budget");
    b.max_rows = in.value("max_rows", b.max_rows);
    b.max_pool = in.value("max_pool", b.max_pool);
    b.max_selections = in.value("max_selections", b.max_selections);
    b.max_subsets = in.value("max_subsets", b.max_subsets);
    return b;
}

// ── Parameter pools ─────────────────────────────────────────────────────────

std::vector<ElementTuple> build_pool(const Structure& s, const nlohmann::json& recipe) {
    std::string kind = need(recipe, "recipe").get<std::string>();
    std::vector<ElementTuple> out;
    if (kind == "explicit") {
        for (const auto& row : need(recipe, "tuples")) {
            ElementTuple t;
            for (const auto& e : row) t.push_back(s.parse_element(e.get<std::string>()));
            out.push_back(std::move(t));
        }
        return out;
    }
    if (kind == "grid_intervals") {
        // All ordered pairs from the endpoint grid, as (lo, hi) tuples.
        std::vector<Element> points;
        for (const auto& e : need(recipe, "points"))
            points.push_back(s.parse_element(e.get<std::string>()));
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                out.push_back({points[i], points[j]});
        return out;
    }
    if (kind == "coord1_intervals" || kind == "coord2_intervals") {
        // Disjoint unit intervals (2k, 2k+1) on one coordinate of pair_dlo.
        long long count = need(recipe, "count").get<long long>();
        bool first = kind == "coord1_intervals";
        for (long long k = 0; k < count; ++k) {
            Rat lo(2 * k), hi(2 * k + 1);
            if (first)
                out.push_back({Element(PairPoint{lo, Rat(0)}), Element(PairPoint{hi, Rat(0)})});
            else
                out.push_back({Element(PairPoint{Rat(0), lo}), Element(PairPoint{Rat(0), hi})});
        }
        return out;
    }
    throw ConfigError("unknown pool recipe '" + kind + "'");
}

// ── padic-verify ────────────────────────────────────────────────────────────

RunReport run_padic_verify(const ExperimentConfig& config) {
    RunReport r;
    const auto& j = config.raw;
    std::vector<long long> primes = need(j, "primes").get<std::vector<long long>>();
    int precision = j.value("precision", 12);

    r.csv_header =
        "check,p,n,k,triples,decidable,violations,derived_k,verified_modulus,"
        "violations_at_k_minus_1";

    if (j.contains("prop61")) {
        need_seed(config);
        const auto& section = j.at("prop61");
        std::vector<int> ks = need(section, "ks").get<std::vector<int>>();
        std::size_t triples = need(section, "triples").get<std::size_t>();
        for (long long p : primes) {
            StructureHandle s = make_padic(p, precision);
            std::vector<Element> pool =
                s->sample(3 * triples, config.seed ^ static_cast<std::uint64_t>(p));
            for (int k : ks) {
                std::size_t decidable = 0, violations = 0;
                for (std::size_t t = 0; t < triples; ++t) {
                    const PadicApprox& x = as_padic(pool[3 * t]);
                    const PadicApprox& y = as_padic(pool[3 * t + 1]);
                    const PadicApprox& z = as_padic(pool[3 * t + 2]);
                    try {
                        bool holds = check_prop61(x, y, z, k);
                        ++decidable;
                        if (!holds) ++violations;
                    } catch (const PrecisionError&) {
                    } catch (const EvalError&) {
                        // x = z or y = z at stored precision: precondition skip
                    }
                }
                r.csv_rows.push_back(csv_row({"prop61", std::to_string(p), "", std::to_string(k),
                                              std::to_string(triples), std::to_string(decidable),
                                              std::to_string(violations), "", "", ""}));
                add_check(r, "prop61 p=" + std::to_string(p) + " k=" + std::to_string(k),
                          violations == 0,
                          std::to_string(decidable) + " decidable, " +
                              std::to_string(violations) + " violations");
            }
        }
    }

    if (j.contains("celllike")) {
        const auto& section = j.at("celllike");
        std::vector<unsigned> ns = need(section, "ns").get<std::vector<unsigned>>();
        int k_max = section.value("k_max", 8);
        for (long long p : primes)
            for (unsigned n : ns) {
                CelllikeResult res = find_celllike_k(p, n, k_max, config.workers);
                r.csv_rows.push_back(csv_row(
                    {"celllike", std::to_string(p), std::to_string(n), "", "", "", "",
                     std::to_string(res.k), std::to_string(res.verified_modulus),
                     std::to_string(res.violations_at_k_minus_1)}));
                std::string tag = "p" + std::to_string(p) + "_n" + std::to_string(n);
                r.kv["derived_k_" + tag] = std::to_string(res.k);
                add_check(r, "celllike minimality p=" + std::to_string(p) + " n=" + std::to_string(n),
                          res.violations_at_k_minus_1 > 0,
                          "k=" + std::to_string(res.k) + ", violations at k-1: " +
                              std::to_string(res.violations_at_k_minus_1));
            }
    }
    return r;
}

// ── hahn-verify ─────────────────────────────────────────────────────────────

RunReport run_hahn_verify(const ExperimentConfig& config) {
    need_seed(config);
    RunReport r;
    std::size_t samples = config.raw.value("samples", 500);
    r.csv_header = "check,samples,violations";

    auto emit = [&](const std::string& name, std::size_t count, std::size_t violations,
                    const std::string& detail) {
        r.csv_rows.push_back(
            csv_row({name, std::to_string(count), std::to_string(violations)}));
        add_check(r, name, violations == 0, detail);
    };

    {
        Rng rng(config.seed);
        std::size_t violations = 0;
        std::string first;
        for (std::size_t i = 0; i < samples; ++i) {
            HahnSeries a = sample_series(rng), b = sample_series(rng);
            Lemma51Report rep = check_lemma51(a, b);
            if (!rep.ok()) {
                violations += rep.violations.size();
                if (first.empty()) first = rep.violations.front();
            }
        }
        emit("lemma51", samples, violations, first);
    }

    {
        AxiomSuiteReport suite = axiom_suite(config.seed + 1, samples);
        for (const auto& check : suite.checks)
            emit(check.axiom, check.checked, check.violations,
                 check.examples.empty() ? "" : check.examples.front());
    }

    {
        Rng rng(config.seed + 2);
        std::size_t violations = 0;
        std::string first;
        for (std::size_t i = 0; i < samples; ++i) {
            HahnSeries x = sample_series(rng), y = sample_series(rng);
            if (compute_Rn(x, y) != rn_chain_oracle(x, y)) {
                ++violations;
                if (first.empty()) first = "x = " + x.to_string() + ", y = " + y.to_string();
            }
        }
        emit("rn_oracle_agreement", samples, violations, first);
    }
    return r;
}

// ── ict-search ──────────────────────────────────────────────────────────────

RunReport run_ict_search(const ExperimentConfig& config) {
    RunReport r;
    const auto& j = config.raw;
    StructureHandle s = make_structure(need(j, "structure").get<std::string>());
    ParamFormula phi = load_param_formula(need(j, "phi"), s->sig());
    ParamFormula psi = load_param_formula(need(j, "psi"), s->sig());
    std::size_t m = need(j, "m").get<std::size_t>();
    std::size_t n = need(j, "n").get<std::size_t>();
    SearchMode mode = j.value("mode", std::string("exhaustive")) == "seeded"
                          ? SearchMode::Seeded
                          : SearchMode::Exhaustive;
    if (mode == SearchMode::Seeded) need_seed(config);

    SearchOutcome outcome =
        search_ict(*s, phi, psi, build_pool(*s, need(j, "pool_a")), build_pool(*s, need(j, "pool_b")),
                   m, n, load_budget(j), mode, config.seed);

    bool found = outcome.certificate.has_value();
    r.csv_header = "structure,m,n,mode,selections,found,exhaustive";
    r.csv_rows.push_back(csv_row(
        {s->name(), std::to_string(m), std::to_string(n),
         mode == SearchMode::Exhaustive ? "exhaustive" : "seeded",
         std::to_string(outcome.selections_tried), found ? "true" : "false",
         outcome.exhaustive ? "true" : "false"}));
    r.kv["found"] = found ? "true" : "false";
    r.kv["exhaustive"] = outcome.exhaustive ? "true" : "false";

    if (j.contains("expect")) {
        std::string expect = j.at("expect").get<std::string>();
        bool want_found = expect == "found";
        add_check(r, "search outcome", found == want_found,
                  std::string("expected ") + expect + ", got " +
                      (found ? "found" : "absent (exhaustive=" +
                                             std::string(outcome.exhaustive ? "true" : "false") +
                                             ")"));
    }

    if (found) {
        std::string why;
        bool valid = check_ict_certificate(*s, *outcome.certificate, &why);
        add_check(r, "certificate re-verification", valid, why);
        if (j.value("emit_certificate", std::string()) != "") {
            std::ofstream out(j.at("emit_certificate").get<std::string>());
            out << serialize_certificate(*outcome.certificate);
        }
        if (j.value("fuse", false)) {
            ICTCertificate fused = fuse_single_formula(*s, *outcome.certificate);
            bool fvalid = check_ict_certificate(*s, fused, &why);
            add_check(r, "fused certificate valid", fvalid, why);
            r.kv["fused_m"] = std::to_string(fused.a_params.size());
            r.kv["fused_n"] = std::to_string(fused.b_params.size());
        }
        if (j.value("refine", false)) {
            RefineOutcome refined = refine_disjunct(*s, *outcome.certificate);
            r.kv["refine_disjunct"] = std::to_string(refined.disjunct_index);
            r.kv["refine_rows"] = std::to_string(refined.rows_retained);
            if (j.contains("expect_refine_disjunct"))
                add_check(r, "refinement picks the expected disjunct",
                          refined.disjunct_index ==
                              j.at("expect_refine_disjunct").get<std::size_t>(),
                          "picked " + std::to_string(refined.disjunct_index));
            if (j.contains("expect_refine_rows"))
                add_check(r, "refinement retains the expected rows",
                          refined.rows_retained == j.at("expect_refine_rows").get<std::size_t>(),
                          "retained " + std::to_string(refined.rows_retained));
        }
    }
    return r;
}

// ── inp-check ───────────────────────────────────────────────────────────────

InpCertificate build_pair_strips(const Structure& s, std::size_t m, std::size_t n,
                                 unsigned k0, unsigned k1, bool overlap) {
    InpCertificate cert;
    cert.structure = s.name();
    cert.k0 = k0;
    cert.k1 = k1;
    cert.phi = ParamFormula{parse_formula("lt1(y1, x) & lt1(x, y2)", s.sig()), "x", {"y1", "y2"}};
    cert.psi = ParamFormula{parse_formula("lt2(y1, x) & lt2(x, y2)", s.sig()), "x", {"y1", "y2"}};
    for (std::size_t i = 0; i < m; ++i) {
        Rat lo = overlap ? Rat(2 * static_cast<long long>(i)) : Rat(4 * static_cast<long long>(i));
        Rat hi = overlap ? lo + 3 : lo + 1;
        cert.a_params.push_back(
            {Element(PairPoint{lo, Rat(0)}), Element(PairPoint{hi, Rat(0)})});
    }
    for (std::size_t jcol = 0; jcol < n; ++jcol) {
        Rat lo(4 * static_cast<long long>(jcol));
        cert.b_params.push_back(
            {Element(PairPoint{Rat(0), lo}), Element(PairPoint{Rat(0), lo + 1})});
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Element> row;
        for (std::size_t jcol = 0; jcol < n; ++jcol) {
            Rat u = as_pair(cert.a_params[i][0]).first + Rat(1, 2);
            Rat w = as_pair(cert.b_params[jcol][0]).second + Rat(1, 2);
            row.emplace_back(PairPoint{u, w});
        }
        cert.witnesses.push_back(std::move(row));
    }
    return cert;
}

RunReport run_inp_check(const ExperimentConfig& config) {
    RunReport r;
    const auto& j = config.raw;
    StructureHandle s = make_structure(j.value("structure", std::string("pair_dlo")));
    std::string setup = need(j, "setup").get<std::string>();
    std::size_t m = j.value("m", 3), n = j.value("n", 3);
    unsigned k0 = j.value("k0", 2u), k1 = j.value("k1", 2u);
    if (setup != "pair_strips" && setup != "pair_strips_overlap")
        throw ConfigError("unknown inp setup '" + setup + "'");
    InpCertificate cert = build_pair_strips(*s, m, n, k0, k1, setup == "pair_strips_overlap");
    std::string why;
    bool valid = check_inp_certificate(*s, cert, load_budget(j), &why);
    r.csv_header = "structure,m,n,k0,k1,valid";
    r.csv_rows.push_back(csv_row({s->name(), std::to_string(m), std::to_string(n),
                                  std::to_string(k0), std::to_string(k1),
                                  valid ? "true" : "false"}));
    r.kv["valid"] = valid ? "true" : "false";
    if (!why.empty()) r.kv["why"] = why;
    if (j.contains("expect"))
        add_check(r, "inp outcome", valid == j.at("expect").get<bool>(), why);
    return r;
}

// ── breakpoints ─────────────────────────────────────────────────────────────

RunReport run_breakpoints(const ExperimentConfig& config) {
    RunReport r;
    const auto& j = config.raw;
    StructureHandle s = make_structure(need(j, "structure").get<std::string>());

    std::vector<ElementTuple> sequence;
    const auto& seq = need(j, "sequence");
    if (seq.contains("explicit")) {
        for (const auto& row : seq.at("explicit")) {
            ElementTuple t;
            for (const auto& e : row) t.push_back(s->parse_element(e.get<std::string>()));
            sequence.push_back(std::move(t));
        }
    } else if (seq.value("recipe", "") == "diagonal") {
        long long count = need(seq, "count").get<long long>();
        for (long long i = 0; i < count; ++i) {
            if (s->name() == "simple_dlo")
                sequence.push_back({Element(Rat(i))});
            else
                sequence.push_back({Element(PairPoint{Rat(i), Rat(i)})});
        }
    } else {
        throw ConfigError("sequence needs 'explicit' tuples or recipe 'diagonal'");
    }

    Element c = s->parse_element(need(j, "c").get<std::string>());
    std::vector<DeltaFormula> delta;
    for (const auto& d : need(j, "delta")) {
        DeltaFormula df;
        df.formula = parse_formula(need(d, "formula").get<std::string>(), s->sig());
        df.tuple_vars = need(d, "tuple_vars").get<std::vector<std::string>>();
        df.c_var = need(d, "c_var").get<std::string>();
        delta.push_back(std::move(df));
    }

    BreakpointProfile profile = breakpoint_profile(*s, sequence, c, delta);
    r.csv_header = "index,block_id";
    for (std::size_t b = 0; b < profile.blocks.size(); ++b)
        for (std::size_t i = profile.blocks[b].first; i < profile.blocks[b].second; ++i)
            r.csv_rows.push_back(csv_row({std::to_string(i), std::to_string(b)}));
    r.kv["blocks"] = std::to_string(profile.block_count());
    if (j.contains("expect_blocks"))
        add_check(r, "block count", profile.block_count() == j.at("expect_blocks").get<std::size_t>(),
                  "got " + std::to_string(profile.block_count()));
    return r;
}

// ── vc-profile ──────────────────────────────────────────────────────────────

std::vector<ElementTuple> vc_parameter_set(const Structure& s, const std::string& recipe,
                                           std::size_t size, std::size_t width,
                                           std::uint64_t seed) {
    std::vector<ElementTuple> out;
    if (recipe == "uniform_grid") {
        for (std::size_t i = 1; i <= size; ++i) out.push_back({Element(Rat(static_cast<long long>(i)))});
        return out;
    }
    if (recipe == "pair_families") {
        // Family size N yields 2N tuples with N cuts per coordinate:
        // the diagonal (i, i) and the antidiagonal (i, N+1-i).
        long long N = static_cast<long long>(size);
        for (long long i = 1; i <= N; ++i) out.push_back({Element(PairPoint{Rat(i), Rat(i)})});
        for (long long i = 1; i <= N; ++i) {
            PairPoint p{Rat(i), Rat(N + 1 - i)};
            bool dup = false;
            for (const auto& t : out)
                if (as_pair(t[0]) == p) dup = true;
            if (!dup) out.push_back({Element(p)});
        }
        return out;
    }
    if (recipe == "random") {
        std::vector<Element> pool = s.sample(size * width, seed);
        for (std::size_t i = 0; i < size; ++i) {
            ElementTuple t(pool.begin() + static_cast<long>(i * width),
                           pool.begin() + static_cast<long>((i + 1) * width));
            out.push_back(std::move(t));
        }
        return out;
    }
    throw ConfigError("unknown vc recipe '" + recipe + "'");
}

RunReport run_vc_profile(const ExperimentConfig& config) {
    RunReport r;
    const auto& j = config.raw;
    StructureHandle s = make_structure(need(j, "structure").get<std::string>());
    std::vector<ParamFormula> delta;
    for (const auto& d : need(j, "delta")) delta.push_back(load_param_formula(d, s->sig()));
    std::string recipe = need(j, "recipe").get<std::string>();
    if (recipe == "random") need_seed(config);
    std::string delta_id = j.value("delta_id", std::string("delta"));
    std::vector<std::size_t> sizes = need(j, "sizes").get<std::vector<std::size_t>>();
    std::size_t width = delta.empty() ? 1 : delta[0].params.size();

    std::vector<ProfilePoint> points;
    std::vector<std::size_t> counts;
    for (std::size_t size : sizes) {
        std::vector<ElementTuple> A = vc_parameter_set(*s, recipe, size, width, config.seed);
        TypeTable table = count_delta_types(*s, delta, A, config.workers);
        points.push_back({A.size(), table.count()});
        counts.push_back(table.count());
    }
    VcProfile profile = fit_profile(points);

    r.csv_header = "structure,delta_id,size,exact_count,fitted_slope";
    for (const auto& p : points)
        r.csv_rows.push_back(csv_row({s->name(), delta_id, std::to_string(p.size),
                                      std::to_string(p.count), fmt_double(profile.slope)}));
    r.kv["slope"] = fmt_double(profile.slope);
    r.kv["max_count_over_size"] = fmt_double(profile.max_count_over_size);

    if (j.contains("expect_counts")) {
        std::vector<std::size_t> want = j.at("expect_counts").get<std::vector<std::size_t>>();
        bool ok = want == counts;
        std::string got;
        for (std::size_t c : counts) got += std::to_string(c) + " ";
        add_check(r, "exact type counts", ok, "got " + got);
    }
    if (j.contains("slope_range")) {
        double lo = j.at("slope_range")[0].get<double>();
        double hi = j.at("slope_range")[1].get<double>();
        add_check(r, "fitted slope in [" + fmt_double(lo) + ", " + fmt_double(hi) + "]",
                  profile.slope >= lo && profile.slope <= hi, "slope " + fmt_double(profile.slope));
    }
    return r;
}

// ── qe ──────────────────────────────────────────────────────────────────────

std::vector<ExistsBlock> qe_corpus(std::size_t count, std::uint64_t seed) {
    std::vector<ExistsBlock> blocks;
    auto constant = [](long long a, long long b) {
        NormalTerm nt;
        nt.constant = LexPoint{Rat(a), Rat(b)};
        return nt;
    };
    // Block 0 is the recorded boundary-column regression instance: the
    // existential is satisfiable via x = (0, 1) but the verbatim five-bullet
    // rule rejects it.
    ExistsBlock regression;
    regression.lower_x = constant(0, 0);
    regression.upper_x = constant(1, 0);
    regression.lower_f = constant(0, 0);
    regression.upper_f = constant(1, 0);
    blocks.push_back(regression);

    Rng rng(seed);
    while (blocks.size() < count) {
        ExistsBlock b;
        auto draw = [&]() -> std::optional<NormalTerm> {
            if (rng.chance(1, 8)) return std::nullopt;
            return constant(rng.range(-2, 2), rng.range(-2, 2));
        };
        b.lower_x = draw();
        b.upper_x = draw();
        b.lower_f = draw();
        b.upper_f = draw();
        blocks.push_back(std::move(b));
    }
    return blocks;
}

std::string bound_text(const std::optional<NormalTerm>& b, const char* missing) {
    return b ? print_term(denormalize(*b)) : std::string(missing);
}

RunReport run_qe(const ExperimentConfig& config) {
    RunReport r;
    const auto& j = config.raw;
    StructureHandle s = make_qlex();
    QeRule rule = j.value("rule", std::string("validated")) == "paper" ? QeRule::Paper
                                                                       : QeRule::Validated;
    const char* rule_name = rule == QeRule::Paper ? "paper" : "validated";

    if (j.contains("corpus_size")) {
        need_seed(config);
        std::size_t count = j.at("corpus_size").get<std::size_t>();
        std::vector<ExistsBlock> blocks = qe_corpus(count, config.seed);
        r.csv_header = "block_id,s0,s1,t0,t1,oracle,result,agree";
        std::size_t disagreements = 0;
        std::string sample_ids;
        bool block0_agrees = true;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const ExistsBlock& b = blocks[i];
            bool oracle = evaluate(*s, block_to_formula(b), {});
            bool got = evaluate(*s, eliminate_exists(b, rule), {});
            bool agree = oracle == got;
            if (!agree) {
                ++disagreements;
                if (i == 0) block0_agrees = false;
                if (sample_ids.size() < 64) sample_ids += std::to_string(i) + " ";
            }
            r.csv_rows.push_back(csv_row(
                {std::to_string(i), bound_text(b.lower_x, "-inf"), bound_text(b.upper_x, "inf"),
                 bound_text(b.lower_f, "-inf"), bound_text(b.upper_f, "inf"),
                 oracle ? "true" : "false", got ? "true" : "false", agree ? "true" : "false"}));
        }
        r.kv["rule"] = rule_name;
        r.kv["disagreements"] = std::to_string(disagreements);
        r.kv["disagreement_blocks_sample"] = sample_ids;
        r.kv["block0_agrees"] = block0_agrees ? "true" : "false";
        if (rule == QeRule::Validated)
            add_check(r, "validated rule agrees with the oracle on the corpus", disagreements == 0,
                      std::to_string(disagreements) + " disagreements");
        return r;
    }

    // Single-formula mode.
    Formula input = parse_formula(need(j, "formula").get<std::string>(), s->sig());
    Formula output = eliminate_all(input, rule);
    r.kv["input"] = print_formula(input);
    r.kv["output"] = print_formula(output);
    r.kv["rule"] = rule_name;
    r.kv["output_quantifier_free"] = output.is_quantifier_free() ? "true" : "false";

    std::size_t grid = j.value("oracle_grid", 3);
    need_seed(config);
    std::vector<std::string> vars;
    for (const auto& v : free_variables(input)) vars.push_back(v);
    std::vector<Assignment> assignments;
    if (vars.empty()) {
        assignments.push_back({});
    } else {
        Rng rng(config.seed);
        std::vector<Element> values;
        for (std::size_t i = 0; i < grid; ++i)
            values.emplace_back(LexPoint{Rat(rng.range(-3, 3), rng.range(1, 2)),
                                         Rat(rng.range(-3, 3), rng.range(1, 2))});
        std::size_t total = 1;
        for (std::size_t i = 0; i < vars.size() && total <= 4096; ++i) total *= values.size();
        total = std::min<std::size_t>(total, 4096);
        for (std::size_t idx = 0; idx < total; ++idx) {
            Assignment asg;
            std::size_t rem = idx;
            for (const auto& v : vars) {
                asg[v] = values[rem % values.size()];
                rem /= values.size();
            }
            assignments.push_back(std::move(asg));
        }
    }
    QeAgreement agreement = validate_against_oracle(*s, input, output, assignments);
    r.csv_header = "rule,assignments,disagreements";
    r.csv_rows.push_back(csv_row({rule_name, std::to_string(agreement.assignments),
                                  std::to_string(agreement.disagreements)}));
    r.kv["assignments"] = std::to_string(agreement.assignments);
    r.kv["disagreements"] = std::to_string(agreement.disagreements);
    add_check(r, "eliminated formula agrees with the oracle", agreement.ok(),
              agreement.examples.empty() ? "" : agreement.examples.front());
    return r;
}

}  // namespace

// ── Dispatch, rendering, replay ─────────────────────────────────────────────

ExperimentConfig ExperimentConfig::from_json(nlohmann::json j) {
    ExperimentConfig c;
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    c.schema_version = need(j, "schema_version").get<int>();
    if (c.schema_version != 1)
        throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version));
    c.kind = need(j, "kind").get<std::string>();
    if (j.contains("seed")) {
        c.seed = j.at("seed").get<std::uint64_t>();
        c.has_seed = true;
    }
    c.workers = j.value("workers", 0);
    c.raw = std::move(j);
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config JSON: " + std::string(e.what()));
    }
    return from_json(std::move(j));
}

std::string RunReport::csv_body() const {
    std::string out = csv_header + "\n";
    for (const auto& row : csv_rows) out += row + "\n";
    return out;
}

std::string RunReport::render() const {
    std::ostringstream out;
    out << "# dpmin run report\n\n";
    out << "== config ==\n" << config.dump(2) << "\n\n";
    out << "== checks ==\n";
    if (checks.empty()) out << "(none)\n";
    for (const auto& c : checks)
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
            << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    out << "\n== kv ==\n";
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
    out << "\n== csv ==\n" << csv_body();
    out << "\n== timing ==\nelapsed_seconds: " << fmt_double(elapsed_seconds) << "\n";
    return out.str();
}

RunReport run(const ExperimentConfig& config) {
    auto start = std::chrono::steady_clock::now();
    RunReport r;
    if (config.kind == "padic-verify")
        r = run_padic_verify(config);
    else if (config.kind == "hahn-verify")
        r = run_hahn_verify(config);
    else if (config.kind == "ict-search")
        r = run_ict_search(config);
    else if (config.kind == "inp-check")
        r = run_inp_check(config);
    else if (config.kind == "breakpoints")
        r = run_breakpoints(config);
    else if (config.kind == "vc-profile")
        r = run_vc_profile(config);
    else if (config.kind == "qe")
        r = run_qe(config);
    else
        throw ConfigError("unknown experiment kind '" + config.kind + "'");
    r.config = config.raw;
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

ReplayResult replay_report(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw ConfigError("cannot open report '" + report_path + "'");
    std::string line;
    std::string config_text, csv_text;
    enum class Section { None, Config, Csv } section = Section::None;
    bool saw_config = false, saw_csv = false, saw_timing = false;
    while (std::getline(in, line)) {
        if (line == "== config ==") {
            section = Section::Config;
            saw_config = true;
            continue;
        }
        if (line == "== checks ==") {
            section = Section::None;
            continue;
        }
        if (line == "== csv ==") {
            section = Section::Csv;
            saw_csv = true;
            continue;
        }
        if (line == "== timing ==") {
            section = Section::None;
            saw_timing = true;
            continue;
        }
        if (section == Section::Config)
            config_text += line + "\n";
        else if (section == Section::Csv && !(line.empty()))
            csv_text += line + "\n";
    }
    if (!saw_config || !saw_csv || !saw_timing)
        throw ConfigError("corrupt report: missing sections");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("corrupt report: bad config echo: " + std::string(e.what()));
    }

    ReplayResult result;
    result.fresh = run(ExperimentConfig::from_json(std::move(j)));
    std::string fresh_csv = result.fresh.csv_body();
    result.identical = fresh_csv == csv_text;
    if (!result.identical) {
        std::istringstream a(csv_text), b(fresh_csv);
        std::string la, lb;
        std::size_t lineno = 0;
        while (true) {
            bool ga = static_cast<bool>(std::getline(a, la));
            bool gb = static_cast<bool>(std::getline(b, lb));
            ++lineno;
            if (!ga && !gb) break;
            if (la != lb || ga != gb)
                result.diffs.push_back("line " + std::to_string(lineno) + ": stored '" +
                                       (ga ? la : "<eof>") + "' vs fresh '" +
                                       (gb ? lb : "<eof>") + "'");
            if (!ga || !gb) break;
        }
    }
    return result;
}

void write_outputs(const RunReport& report, const std::string& out_prefix) {
    {
        std::ofstream out(out_prefix + ".report.txt");
        if (!out) throw ConfigError("cannot write report to '" + out_prefix + ".report.txt'");
        out << report.render();
    }
    {
        std::ofstream out(out_prefix + ".csv");
        out << report.csv_body();
    }
}

}  // namespace dpmin
