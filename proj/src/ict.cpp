#include "dpmin/ict.hpp"

#include <algorithm>

#include "dpmin/errors.hpp"
#include "dpmin/rng.hpp"

#include "json.hpp"

namespace dpmin {

Formula instantiate(const ParamFormula& pf, const std::string& element_var,
                    const std::string& prefix, const ElementTuple& tuple, Assignment& asg) {
    if (tuple.size() != pf.params.size())
        throw EvalError("parameter tuple width " + std::to_string(tuple.size()) +
                        " does not match formula arity " + std::to_string(pf.params.size()));
    Formula f = pf.formula;
    if (pf.element_var != element_var)
        f = substitute(f, pf.element_var, Term::variable(element_var));
    for (std::size_t t = 0; t < pf.params.size(); ++t) {
        std::string name = prefix + "_" + std::to_string(t);
        f = substitute(f, pf.params[t], Term::variable(name));
        asg[name] = tuple[t];
    }
    return f;
}

namespace {

// Body of cell (i, j): positive phi row i and psi column j, full exclusions
// elsewhere.  `positive_phi` lets the refinement pass swap in one disjunct
// while exclusions keep the whole formula.
Formula cell_body(const ParamFormula& phi, const ParamFormula& psi,
                  const std::vector<ElementTuple>& rows, const std::vector<ElementTuple>& cols,
                  std::size_t i, std::size_t j, const std::string& x,
                  const std::optional<ParamFormula>& positive_phi, Assignment& asg) {
    std::vector<Formula> parts;
    for (std::size_t l = 0; l < rows.size(); ++l) {
        const ParamFormula& source = (l == i && positive_phi) ? *positive_phi : phi;
        Formula inst = instantiate(source, x, "__a" + std::to_string(l), rows[l], asg);
        parts.push_back(l == i ? inst : Formula::negation(inst));
    }
    for (std::size_t k = 0; k < cols.size(); ++k) {
        Formula inst = instantiate(psi, x, "__b" + std::to_string(k), cols[k], asg);
        parts.push_back(k == j ? inst : Formula::negation(inst));
    }
    return Formula::conjunction(std::move(parts));
}

std::string cell_label(std::size_t i, std::size_t j) {
    return "cell (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

// Enumerates index combinations of size k out of n in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    std::size_t k = idx.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (idx[pos] + (k - pos) < n) {
            ++idx[pos];
            for (std::size_t q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<ElementTuple> select(const std::vector<ElementTuple>& pool,
                                 const std::vector<std::size_t>& idx) {
    std::vector<ElementTuple> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(pool[i]);
    return out;
}

std::uint64_t combinations(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

bool check_ict_certificate(const Structure& s, const ICTCertificate& cert, std::string* why) {
    auto reject = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (cert.structure != s.name()) return reject("certificate was built for " + cert.structure);
    std::size_t m = cert.a_params.size(), n = cert.b_params.size();
    if (m == 0 || n == 0) return reject("empty parameter family");
    if (cert.witnesses.size() != m) return reject("witness grid has wrong row count");
    for (const auto& row : cert.witnesses)
        if (row.size() != n) return reject("witness grid has wrong column count");

    const std::string& x = cert.phi.element_var;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Assignment asg;
            Formula body = cell_body(cert.phi, cert.psi, cert.a_params, cert.b_params, i, j, x,
                                     std::nullopt, asg);
            asg[x] = cert.witnesses[i][j];
            if (!evaluate(s, body, asg))
                return reject(cell_label(i, j) + " witness fails its cell formula");
        }
    return true;
}

SearchOutcome search_ict(const Structure& s, const ParamFormula& phi, const ParamFormula& psi,
                         std::vector<ElementTuple> pool_a, std::vector<ElementTuple> pool_b,
                         std::size_t m, std::size_t n, const SearchBudget& budget,
                         SearchMode mode, std::uint64_t seed, std::size_t seeded_tries) {
    if (m < 1 || n < 1) throw BudgetError("certificate dimensions must be positive");
    if (m > budget.max_rows || n > budget.max_rows)
        throw BudgetError("certificate dimensions exceed the configured cap of " +
                          std::to_string(budget.max_rows));
    if (pool_a.size() > budget.max_pool || pool_b.size() > budget.max_pool)
        throw BudgetError("parameter pool exceeds the configured cap of " +
                          std::to_string(budget.max_pool));

    std::sort(pool_a.begin(), pool_a.end(), tuple_canonical_less);
    std::sort(pool_b.begin(), pool_b.end(), tuple_canonical_less);

    SearchOutcome outcome;
    if (m > pool_a.size() || n > pool_b.size()) {
        outcome.exhaustive = mode == SearchMode::Exhaustive;
        return outcome;
    }

    const std::string& x = phi.element_var;
    auto try_selection = [&](const std::vector<ElementTuple>& rows,
                             const std::vector<ElementTuple>& cols)
        -> std::optional<std::vector<std::vector<Element>>> {
        std::vector<std::vector<Element>> grid(rows.size(), std::vector<Element>());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j) {
                Assignment asg;
                Formula body = cell_body(phi, psi, rows, cols, i, j, x, std::nullopt, asg);
                auto w = exists_witness(s, body, x, asg);
                if (!w) return std::nullopt;
                grid[i].push_back(*w);
            }
        return grid;
    };

    auto finish = [&](const std::vector<ElementTuple>& rows, const std::vector<ElementTuple>& cols,
                      std::vector<std::vector<Element>> grid) {
        ICTCertificate cert;
        cert.structure = s.name();
        cert.phi = phi;
        cert.psi = psi;
        cert.a_params = rows;
        cert.b_params = cols;
        cert.witnesses = std::move(grid);
        std::string why;
        if (!check_ict_certificate(s, cert, &why))
            throw EvalError("search produced an invalid certificate: " + why);
        outcome.certificate = std::move(cert);
    };

    if (mode == SearchMode::Exhaustive) {
        std::uint64_t total = combinations(pool_a.size(), m) * combinations(pool_b.size(), n);
        if (total > budget.max_selections)
            throw BudgetError("selection count " + std::to_string(total) +
                              " exceeds the configured cap");
        std::vector<std::size_t> ia(m), ib(n);
        for (std::size_t i = 0; i < m; ++i) ia[i] = i;
        bool more_a = true;
        while (more_a) {
            std::vector<ElementTuple> rows = select(pool_a, ia);
            for (std::size_t j = 0; j < n; ++j) ib[j] = j;
            bool more_b = true;
            while (more_b) {
                ++outcome.selections_tried;
                std::vector<ElementTuple> cols = select(pool_b, ib);
                if (auto grid = try_selection(rows, cols)) {
                    finish(rows, cols, std::move(*grid));
                    return outcome;
                }
                more_b = next_combination(ib, pool_b.size());
            }
            more_a = next_combination(ia, pool_a.size());
        }
        outcome.exhaustive = true;
        return outcome;
    }

    Rng rng(seed);
    for (std::size_t attempt = 0; attempt < seeded_tries; ++attempt) {
        auto pick = [&](const std::vector<ElementTuple>& pool, std::size_t k) {
            std::vector<std::size_t> idx(pool.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            for (std::size_t i = 0; i < k; ++i) {
                std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
                std::swap(idx[i], idx[j]);
            }
            std::vector<std::size_t> chosen(idx.begin(), idx.begin() + k);
            std::sort(chosen.begin(), chosen.end());
            return select(pool, chosen);
        };
        ++outcome.selections_tried;
        std::vector<ElementTuple> rows = pick(pool_a, m), cols = pick(pool_b, n);
        if (auto grid = try_selection(rows, cols)) {
            finish(rows, cols, std::move(*grid));
            return outcome;
        }
    }
    return outcome;
}

RefineOutcome refine_disjunct(const Structure& s, const ICTCertificate& cert) {
    std::string why;
    if (!check_ict_certificate(s, cert, &why))
        throw EvalError("refine_disjunct requires a valid certificate: " + why);

    std::vector<Formula> djs = disjuncts(cert.phi.formula);
    std::size_t m = cert.a_params.size(), n = cert.b_params.size();
    const std::string& x = cert.phi.element_var;

    RefineOutcome best;
    for (std::size_t l = 0; l < djs.size(); ++l) {
        ParamFormula positive{djs[l], cert.phi.element_var, cert.phi.params};
        // Row subsets, largest first, lexicographic within a size.
        for (std::size_t size = m; size >= 2; --size) {
            if (best.rows_retained >= size) break;  // earlier disjunct already ties or beats
            std::vector<std::size_t> idx(size);
            for (std::size_t i = 0; i < size; ++i) idx[i] = i;
            bool more = true;
            bool found = false;
            while (more && !found) {
                std::vector<ElementTuple> rows = select(cert.a_params, idx);
                std::vector<std::vector<Element>> grid(size);
                bool all = true;
                for (std::size_t i = 0; i < size && all; ++i)
                    for (std::size_t j = 0; j < n && all; ++j) {
                        Assignment asg;
                        Formula body = cell_body(cert.phi, cert.psi, rows, cert.b_params, i, j, x,
                                                 positive, asg);
                        auto w = exists_witness(s, body, x, asg);
                        if (w)
                            grid[i].push_back(*w);
                        else
                            all = false;
                    }
                if (all) {
                    found = true;
                    best.disjunct_index = l + 1;
                    best.rows_retained = size;
                    best.refined = cert;
                    best.refined.a_params = rows;
                    best.refined.witnesses = std::move(grid);
                } else {
                    more = next_combination(idx, m);
                }
            }
            if (found) break;
        }
    }

    if (best.rows_retained < 2)
        throw EvalError("no disjunct supports two or more rows across all columns");
    if (!check_ict_certificate(s, best.refined, &why))
        throw EvalError("refined certificate failed re-verification: " + why);
    best.note =
        "finite-scale refinement: witnesses re-searched per cell with disjunct " +
        std::to_string(best.disjunct_index) + " positive and exclusions using the full formula; " +
        std::to_string(best.rows_retained) + "/" + std::to_string(m) +
        " rows retained (an infinite pigeonhole is unavailable at this scale)";
    return best;
}

ICTCertificate fuse_single_formula(const Structure& s, const ICTCertificate& cert) {
    std::string why;
    if (!check_ict_certificate(s, cert, &why))
        throw EvalError("fuse_single_formula requires a valid certificate: " + why);
    std::size_t m = cert.a_params.size(), n = cert.b_params.size();
    if (m != n || m % 2 != 0)
        throw EvalError("fusion needs a square certificate of even size, got " +
                        std::to_string(m) + " x " + std::to_string(n));

    // theta(x, u..., v...) = phi(x, u...) | psi(x, v...)
    const std::string x = cert.phi.element_var;
    std::vector<std::string> theta_params;
    Formula phi_part = cert.phi.formula;
    for (std::size_t t = 0; t < cert.phi.params.size(); ++t) {
        std::string name = "__u" + std::to_string(t);
        phi_part = substitute(phi_part, cert.phi.params[t], Term::variable(name));
        theta_params.push_back(name);
    }
    Formula psi_part = cert.psi.formula;
    if (cert.psi.element_var != x) psi_part = substitute(psi_part, cert.psi.element_var, Term::variable(x));
    for (std::size_t t = 0; t < cert.psi.params.size(); ++t) {
        std::string name = "__v" + std::to_string(t);
        psi_part = substitute(psi_part, cert.psi.params[t], Term::variable(name));
        theta_params.push_back(name);
    }
    ParamFormula theta{Formula::disjunction({phi_part, psi_part}), x, theta_params};

    std::size_t h = m / 2;
    auto concat = [](const ElementTuple& a, const ElementTuple& b) {
        ElementTuple out = a;
        out.insert(out.end(), b.begin(), b.end());
        return out;
    };

    ICTCertificate fused;
    fused.structure = cert.structure;
    fused.phi = theta;
    fused.psi = theta;
    for (std::size_t i = 0; i < h; ++i)
        fused.a_params.push_back(concat(cert.a_params[i], cert.b_params[i]));
    for (std::size_t j = 0; j < h; ++j)
        fused.b_params.push_back(concat(cert.a_params[h + j], cert.b_params[h + j]));
    fused.witnesses.assign(h, {});
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j)
            fused.witnesses[i].push_back(cert.witnesses[i][h + j]);

    if (!check_ict_certificate(s, fused, &why))
        throw EvalError("fused certificate failed re-verification (implementation bug): " + why);
    return fused;
}

BreakpointProfile breakpoint_profile(const Structure& s,
                                     const std::vector<ElementTuple>& sequence, const Element& c,
                                     const std::vector<DeltaFormula>& delta) {
    if (sequence.empty()) throw EvalError("breakpoint profile needs a nonempty sequence");
    auto type_of = [&](const ElementTuple& tuple) {
        std::vector<bool> bits;
        bits.reserve(delta.size());
        for (const DeltaFormula& d : delta) {
            if (tuple.size() != d.tuple_vars.size())
                throw EvalError("sequence tuple width does not match Delta formula");
            Assignment asg;
            for (std::size_t t = 0; t < tuple.size(); ++t) asg[d.tuple_vars[t]] = tuple[t];
            asg[d.c_var] = c;
            bits.push_back(evaluate(s, d.formula, asg));
        }
        return bits;
    };

    BreakpointProfile profile;
    std::vector<bool> current = type_of(sequence[0]);
    std::size_t start = 0;
    for (std::size_t i = 1; i < sequence.size(); ++i) {
        std::vector<bool> bits = type_of(sequence[i]);
        if (bits != current) {
            profile.blocks.emplace_back(start, i);
            profile.fingerprints.push_back(current);
            current = std::move(bits);
            start = i;
        }
    }
    profile.blocks.emplace_back(start, sequence.size());
    profile.fingerprints.push_back(current);
    return profile;
}

bool check_inp_certificate(const Structure& s, const InpCertificate& cert,
                           const SearchBudget& budget, std::string* why) {
    auto reject = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (cert.structure != s.name()) return reject("certificate was built for " + cert.structure);
    std::size_t m = cert.a_params.size(), n = cert.b_params.size();
    if (m == 0 || n == 0) return reject("empty parameter family");
    if (cert.k0 < 1 || cert.k1 < 1) return reject("inconsistency indices must be >= 1");

    const std::string& x = cert.phi.element_var;

    // Pairwise witnesses: phi(x, a_i) & psi(x, b_j).
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Assignment asg;
            std::vector<Formula> parts;
            parts.push_back(instantiate(cert.phi, x, "__a" + std::to_string(i), cert.a_params[i], asg));
            parts.push_back(instantiate(cert.psi, x, "__b" + std::to_string(j), cert.b_params[j], asg));
            asg[x] = cert.witnesses[i][j];
            if (!evaluate(s, Formula::conjunction(std::move(parts)), asg))
                return reject(cell_label(i, j) + " pairwise witness fails");
        }

    // k-subset emptiness over the exact grid.
    auto k_inconsistent = [&](const ParamFormula& pf, const std::vector<ElementTuple>& fam,
                              unsigned k, const char* which) -> std::optional<std::string> {
        if (k > fam.size()) return std::nullopt;  // vacuous
        if (combinations(fam.size(), k) > budget.max_subsets)
            throw BudgetError("k-subset enumeration exceeds the configured cap");
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        bool more = true;
        while (more) {
            Assignment asg;
            std::vector<Formula> parts;
            for (std::size_t i : idx)
                parts.push_back(instantiate(pf, x, "__s" + std::to_string(i), fam[i], asg));
            if (auto w = exists_witness(s, Formula::conjunction(std::move(parts)), x, asg)) {
                std::string subset;
                for (std::size_t i : idx) subset += " " + std::to_string(i + 1);
                return std::string(which) + " instances{" + subset + " } are jointly satisfiable at " +
                       element_to_string(*w);
            }
            more = next_combination(idx, fam.size());
        }
        return std::nullopt;
    };

    if (auto bad = k_inconsistent(cert.phi, cert.a_params, cert.k0, "phi")) return reject(*bad);
    if (auto bad = k_inconsistent(cert.psi, cert.b_params, cert.k1, "psi")) return reject(*bad);
    return true;
}

// ── Serialization ───────────────────────────────────────────────────────────

std::string serialize_certificate(const ICTCertificate& cert, long long p, int precision) {
    nlohmann::json j;
    j["type"] = "ict_certificate";
    j["structure"] = cert.structure;
    j["p"] = p;
    j["precision"] = precision;
    auto dump_pf = [](const ParamFormula& pf) {
        nlohmann::json out;
        out["formula"] = print_formula(pf.formula);
        out["element_var"] = pf.element_var;
        out["params"] = pf.params;
        return out;
    };
    j["phi"] = dump_pf(cert.phi);
    j["psi"] = dump_pf(cert.psi);
    auto dump_tuples = [](const std::vector<ElementTuple>& tuples) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& t : tuples) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& e : t) row.push_back(element_to_string(e));
            out.push_back(row);
        }
        return out;
    };
    j["a_params"] = dump_tuples(cert.a_params);
    j["b_params"] = dump_tuples(cert.b_params);
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& row : cert.witnesses) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& e : row) r.push_back(element_to_string(e));
        grid.push_back(r);
    }
    j["witnesses"] = grid;
    return j.dump(2);
}

ICTCertificate deserialize_certificate(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("type", "") != "ict_certificate")
        throw ConfigError("not an ICT certificate file");
    ICTCertificate cert;
    cert.structure = j.at("structure").get<std::string>();
    StructureHandle s = make_structure(cert.structure, j.value("p", 3LL), j.value("precision", 12));
    auto load_pf = [&](const nlohmann::json& in) {
        ParamFormula pf{parse_formula(in.at("formula").get<std::string>(), s->sig()),
                        in.at("element_var").get<std::string>(),
                        in.at("params").get<std::vector<std::string>>()};
        return pf;
    };
    cert.phi = load_pf(j.at("phi"));
    cert.psi = load_pf(j.at("psi"));
    auto load_tuples = [&](const nlohmann::json& in) {
        std::vector<ElementTuple> out;
        for (const auto& row : in) {
            ElementTuple t;
            for (const auto& e : row) t.push_back(s->parse_element(e.get<std::string>()));
            out.push_back(std::move(t));
        }
        return out;
    };
    cert.a_params = load_tuples(j.at("a_params"));
    cert.b_params = load_tuples(j.at("b_params"));
    for (const auto& row : j.at("witnesses")) {
        std::vector<Element> r;
        for (const auto& e : row) r.push_back(s->parse_element(e.get<std::string>()));
        cert.witnesses.push_back(std::move(r));
    }
    return cert;
}

}  // namespace dpmin
