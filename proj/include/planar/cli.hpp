#pragma once

// Command-line front end. run() returns the exit status: 0 on success, 1 on a
// usage or domain error, 2 when a check fails.

#include "planar/analytic.hpp"
#include "planar/checks.hpp"
#include "planar/expfam.hpp"
#include "planar/radius.hpp"
#include "planar/rebase.hpp"
#include "planar/series.hpp"
#include "planar/series_json.hpp"
#include "planar/special.hpp"
#include "planar/tree.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace planar::cli {

namespace detail {

struct CheckFailed {};

inline std::string complex_text(const Complex& v, const char* sep = " ") {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%s%.17g", v.real(), sep, v.imag());
    return buf;
}

inline std::string double_text(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Number of trees of degree n whose internal arities are all <= max_arity.
inline mpz_class count_trees(int n, int max_arity) {
    if (n < 0) throw std::invalid_argument("degree must be >= 0");
    if (n <= 1) return 1;
    std::vector<mpz_class> f(static_cast<std::size_t>(n) + 1, 0);
    f[1] = 1;
    for (int d = 2; d <= n; ++d) {
        // seq[j] = ordered sequences of m trees of total degree j, for growing m
        std::vector<mpz_class> seq(f.begin(), f.begin() + d + 1);
        seq[static_cast<std::size_t>(d)] = 0;
        mpz_class total = 0;
        for (int m = 2; m <= std::min(max_arity, d); ++m) {
            std::vector<mpz_class> next(static_cast<std::size_t>(d) + 1, 0);
            for (int j = 1; j <= d; ++j) {
                if (seq[static_cast<std::size_t>(j)] == 0) continue;
                for (int i = 1; i + j <= d && i < d; ++i) {
                    next[static_cast<std::size_t>(i + j)] += seq[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(i)];
                }
            }
            seq = std::move(next);
            total += seq[static_cast<std::size_t>(d)];
        }
        f[static_cast<std::size_t>(d)] = total;
    }
    return f[static_cast<std::size_t>(n)];
}

inline Json read_json(const std::string& path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open '" + path + "'");
        buf << in.rdbuf();
    }
    try {
        return Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
    }
}

class Output {
public:
    Output(std::ostream& out, const std::string& path) : out_(out), path_(path) {}
    std::ostream& stream() { return path_.empty() ? out_ : file(); }

private:
    std::ostream& file() {
        if (!file_) {
            file_.emplace(path_);
            if (!*file_) throw std::invalid_argument("cannot write '" + path_ + "'");
        }
        return *file_;
    }
    std::ostream& out_;
    std::string path_;
    std::optional<std::ofstream> file_;
};

inline std::string format_tree(const PlanarMonomial& t) { return planar::format(t); }

template <typename S>
void write_series(std::ostream& os, const TruncatedPlanarSeries<S>& f, const std::string& format) {
    if (format == "json") {
        os << to_json(f).dump(2) << "\n";
    } else if (format == "csv") {
        os << "tree,degree,re,im\n";
        for (const auto& [t, v] : f.terms()) {
            const Complex c = ScalarTraits<S>::to_complex(v);
            os << '"' << format_tree(t) << "\"," << t.degree() << ',' << complex_text(c, ",") << "\n";
        }
    } else {
        for (const auto& [t, v] : f.terms()) {
            if constexpr (ScalarTraits<S>::exact) {
                os << planar::format(t) << ' ' << v.get_str() << "\n";
            } else {
                os << planar::format(t) << ' ' << complex_text(v) << "\n";
            }
        }
    }
}

template <typename S>
void write_germ(std::ostream& os, const Germ<S>& g, const std::string& format) {
    if (format == "json") {
        os << to_json(g).dump(2) << "\n";
        return;
    }
    if (format == "plain") {
        if constexpr (ScalarTraits<S>::exact) {
            os << "base " << g.base.get_str() << "\n";
        } else {
            os << "base " << complex_text(g.base) << "\n";
        }
    }
    write_series(os, g.series, format);
}

inline void write_diagnostics(std::ostream& os, const RebaseDiagnostics& d) {
    os << "# source degree " << d.source_degree << ", target degree " << d.target_degree
       << ", last-degree contribution " << double_text(d.last_degree_contribution) << "\n";
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using detail::CheckFailed;
    CLI::App app{"Planar power series toolkit", "planar"};
    app.require_subcommand(1);

    // Shared option storage.
    int degree = 4;
    int k = 2;
    int trunc = 6;
    std::optional<int> source;
    int max_degree = 6;
    std::vector<std::string> trees;
    std::vector<int> leaves;
    std::string a_text, b_text, r_text, root_text;
    double tol = 1e-6;
    std::string fmt;  // empty: per-command default
    std::string scalar = "exact";
    std::string side = "left";
    std::string which;
    std::vector<std::string> inputs;
    std::string out_path;
    bool probe = false;

    auto add_out = [&](CLI::App* c) { c->add_option("--out", out_path, "Write output to a file"); };

    // trees
    auto* trees_cmd = app.add_subcommand("trees", "Tree enumeration and planar binomials");
    trees_cmd->require_subcommand(1);
    auto* t_count = trees_cmd->add_subcommand("count", "Number of trees of a degree");
    t_count->add_option("--degree", degree)->required()->check(CLI::NonNegativeNumber);
    t_count->add_option("--k", k, "Maximum arity (default: unrestricted)");
    auto* t_list = trees_cmd->add_subcommand("list", "List trees of a degree in canonical order");
    t_list->add_option("--degree", degree)->required()->check(CLI::NonNegativeNumber);
    t_list->add_option("--k", k, "Maximum arity (default: unrestricted)");
    auto* t_binom = trees_cmd->add_subcommand("binom", "Planar binomial (U/T); pass --tree U --tree T");
    t_binom->add_option("--tree", trees)->required()->expected(2);
    auto* t_contract = trees_cmd->add_subcommand("contract", "Contraction U|I");
    t_contract->add_option("--tree", trees)->required()->expected(1);
    t_contract->add_option("--leaves", leaves, "Leaf indices, 0-based")->delimiter(',');

    // series
    auto* series_cmd = app.add_subcommand("series", "Series arithmetic on JSON files");
    series_cmd->require_subcommand(1);
    auto* s_mul = series_cmd->add_subcommand("mul", "Grafting product of two or more series");
    s_mul->add_option("--in", inputs)->required()->expected(2, 255);
    auto* s_inv = series_cmd->add_subcommand("inv", "One-sided inverse");
    s_inv->add_option("--in", inputs)->required()->expected(1);
    s_inv->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));
    auto* s_sqrt = series_cmd->add_subcommand("sqrt", "Square root with a given constant term");
    s_sqrt->add_option("--in", inputs)->required()->expected(1);
    s_sqrt->add_option("--a", root_text, "Constant term of the root (default: principal root)");
    auto* s_eval = series_cmd->add_subcommand("eval", "Truncated evaluation at a point");
    s_eval->add_option("--in", inputs)->required()->expected(1);
    s_eval->add_option("--a", a_text)->required();
    for (auto* c : {s_mul, s_inv, s_sqrt}) {
        add_out(c);
    }
    for (auto* c : {s_mul, s_inv, s_sqrt}) {
        c->add_option("--format", fmt)->check(CLI::IsMember({"plain", "json", "csv"}));
    }

    // rebase
    auto* rebase_cmd = app.add_subcommand("rebase", "Expand a series around a (or move a germ to b)");
    rebase_cmd->add_option("--in", inputs)->required()->expected(1);
    rebase_cmd->add_option("--a", a_text, "New base point for a series");
    rebase_cmd->add_option("--b", b_text, "New base point for a germ");
    rebase_cmd->add_option("--trunc", trunc)->check(CLI::NonNegativeNumber);
    rebase_cmd->add_option("--degree", source, "Source degree (default: input truncation)");
    rebase_cmd->add_option("--format", fmt)->check(CLI::IsMember({"plain", "json", "csv"}));
    add_out(rebase_cmd);

    // exp
    auto* exp_cmd = app.add_subcommand("exp", "The k-ary planar exponential");
    exp_cmd->require_subcommand(1);
    auto* e_coeff = exp_cmd->add_subcommand("coeff", "Exact coefficient A_T(k)");
    e_coeff->add_option("--k", k)->check(CLI::Range(2, 255));
    e_coeff->add_option("--tree", trees)->required()->expected(1);
    auto* e_table = exp_cmd->add_subcommand("table", "Coefficients through a degree");
    e_table->add_option("--k", k)->check(CLI::Range(2, 255));
    e_table->add_option("--trunc", trunc)->check(CLI::NonNegativeNumber);
    e_table->add_option("--scalar", scalar)->check(CLI::IsMember({"exact", "complex"}));
    e_table->add_option("--format", fmt)->check(CLI::IsMember({"plain", "json", "csv"}));
    add_out(e_table);
    auto* e_translate = exp_cmd->add_subcommand("translate", "Rebase exp_k to lambda and compare with e^lambda exp_k");
    e_translate->add_option("--k", k)->check(CLI::Range(2, 255));
    e_translate->add_option("--a", a_text, "lambda")->required();
    e_translate->add_option("--trunc", trunc)->check(CLI::NonNegativeNumber);
    e_translate->add_option("--degree", source, "Source degree (default 14)");
    e_translate->add_option("--tol", tol);

    // zeta / gamma
    auto* zeta_cmd = app.add_subcommand("zeta", "Planar zeta germ table (CSV: tree,degree,re,im)");
    zeta_cmd->add_option("--r", r_text, "Base point, Re r > 1")->required();
    zeta_cmd->add_option("--b", b_text, "Continue the germ to this point");
    zeta_cmd->add_option("--k", k)->check(CLI::Range(2, 255));
    zeta_cmd->add_option("--trunc", trunc)->check(CLI::NonNegativeNumber);
    zeta_cmd->add_option("--degree", source, "Source degree for continuation (default 40)");
    zeta_cmd->add_option("--format", fmt)->check(CLI::IsMember({"plain", "json", "csv"}));
    add_out(zeta_cmd);
    auto* gamma_cmd = app.add_subcommand("gamma", "Planar Gamma germ table (CSV: tree,degree,re,im)");
    gamma_cmd->add_option("--r", r_text, "Base point, Re r > 0")->required();
    gamma_cmd->add_option("--k", k)->check(CLI::Range(2, 255));
    gamma_cmd->add_option("--trunc", trunc)->check(CLI::NonNegativeNumber);
    gamma_cmd->add_flag("--probe", probe, "Compare Gamma(s+1) with s Gamma(s) instead");
    gamma_cmd->add_option("--format", fmt)->check(CLI::IsMember({"plain", "json", "csv"}));
    add_out(gamma_cmd);

    // radius
    auto* radius_cmd = app.add_subcommand("radius", "Radius estimate from degree majorants");
    radius_cmd->add_option("--in", inputs, "Series JSON file")->expected(0, 1);
    radius_cmd->add_option("--series", which, "Built-in: g, exp, sqrt, zeta")
        ->check(CLI::IsMember({"g", "exp", "sqrt", "zeta"}));
    radius_cmd->add_option("--degree", degree, "Majorants through this degree (built-ins)");
    radius_cmd->add_option("--k", k)->check(CLI::Range(2, 255));
    radius_cmd->add_option("--a", a_text, "Base point (sqrt)");
    radius_cmd->add_option("--r", r_text, "Base point (zeta)");

    // check
    auto* check_cmd = app.add_subcommand("check", "Identity-check suites");
    std::string suite = "all";
    check_cmd->add_option("suite", suite, "Suite name or 'all'");
    check_cmd->add_option("--max-degree", max_degree)->check(CLI::Range(0, 8));

    bool k_given = false;
    try {
        app.parse(argc, argv);
        detail::Output sink(out, out_path);
        std::ostream& os = sink.stream();
        k_given = (t_count->count("--k") + t_list->count("--k")) > 0;

        if (*t_count) {
            os << detail::count_trees(degree, k_given ? k : std::max(degree, 2)).get_str() << "\n";
        } else if (*t_list) {
            for (const auto& t : enumerate_restricted(degree, k_given ? k : std::max(degree, 2))) os << planar::format(t) << "\n";
        } else if (*t_binom) {
            os << binom(parse(trees[0]), parse(trees[1])) << "\n";
        } else if (*t_contract) {
            os << format(contract(parse(trees[0]), leaves)) << "\n";
        } else if (*s_mul || *s_inv || *s_sqrt || *s_eval) {
            if (fmt.empty()) fmt = "json";
            std::vector<Json> docs;
            for (const auto& p : inputs) docs.push_back(detail::read_json(p));
            const std::string kind = scalar_kind(docs[0]);
            for (const auto& d : docs) {
                if (scalar_kind(d) != kind) throw std::invalid_argument("inputs mix rational and complex scalars");
            }
            auto apply = [&]<typename S>(S*) {
                std::vector<TruncatedPlanarSeries<S>> fs;
                for (const auto& d : docs) fs.push_back(series_from_json<S>(d));
                if (*s_eval) {
                    const S at = [&] {
                        if constexpr (ScalarTraits<S>::exact) {
                            return ScalarTraits<S>::parse(a_text);
                        } else {
                            return parse_complex(a_text);
                        }
                    }();
                    const S v = eval(fs[0], at);
                    if constexpr (ScalarTraits<S>::exact) {
                        os << v.get_str() << "\n";
                    } else {
                        os << detail::complex_text(v) << "\n";
                    }
                    return;
                }
                TruncatedPlanarSeries<S> result = fs[0];
                if (*s_mul) {
                    result = fs.size() == 2 ? mul2(fs[0], fs[1]) : mulk(fs);
                } else if (*s_inv) {
                    result = side == "left" ? left_inverse(fs[0]) : right_inverse(fs[0]);
                } else {
                    const S c = fs[0].coefficient(PlanarMonomial::unit());
                    if constexpr (ScalarTraits<S>::exact) {
                        if (root_text.empty()) throw std::invalid_argument("rational sqrt needs the root constant via --a");
                        result = sqrt_solve(fs[0], ScalarTraits<S>::parse(root_text));
                    } else {
                        result = sqrt_solve(fs[0], root_text.empty() ? std::sqrt(c) : parse_complex(root_text));
                    }
                }
                detail::write_series(os, result, fmt);
            };
            if (kind == "rational") {
                apply(static_cast<Rational*>(nullptr));
            } else {
                apply(static_cast<Complex*>(nullptr));
            }
        } else if (*rebase_cmd) {
            if (fmt.empty()) fmt = "json";
            const Json doc = detail::read_json(inputs[0]);
            const bool is_germ = doc.contains("base");
            if (is_germ && b_text.empty()) throw std::invalid_argument("rebasing a germ needs --b");
            if (!is_germ && a_text.empty()) throw std::invalid_argument("rebasing a series needs --a");
            auto apply = [&]<typename S>(S*) {
                auto read_point = [&](const std::string& text) -> S {
                    if constexpr (ScalarTraits<S>::exact) {
                        return ScalarTraits<S>::parse(text);
                    } else {
                        return parse_complex(text);
                    }
                };
                RebaseResult<S> r;
                if (is_germ) {
                    r = rebase_between(germ_from_json<S>(doc), read_point(b_text), trunc, source);
                } else {
                    r = rebase_series(series_from_json<S>(doc), read_point(a_text), trunc, source);
                }
                if (fmt != "json") detail::write_diagnostics(os, r.diagnostics);
                detail::write_germ(os, r.germ, fmt);
            };
            if (scalar_kind(doc) == "rational") {
                apply(static_cast<Rational*>(nullptr));
            } else {
                apply(static_cast<Complex*>(nullptr));
            }
        } else if (*e_coeff) {
            os << exp_coeff(parse(trees[0]), k).get_str() << "\n";
        } else if (*e_table) {
            if (fmt.empty()) fmt = "plain";
            const auto f = exp_series(k, trunc);
            if (scalar == "exact") {
                detail::write_series(os, f, fmt);
            } else {
                detail::write_series(os, convert<Complex>(f), fmt);
            }
        } else if (*e_translate) {
            const auto report = translation_check(k, parse_complex(a_text), trunc, source.value_or(14), tol);
            os << "max discrepancy " << detail::double_text(report.max_discrepancy) << "\n";
            detail::write_diagnostics(os, report.diagnostics);
            os << (report.passed ? "PASS" : "FAIL") << "\n";
            if (!report.passed) throw CheckFailed{};
        } else if (*zeta_cmd) {
            if (fmt.empty()) fmt = "csv";
            const ZetaGermSpec spec{parse_complex(r_text), k, trunc};
            if (b_text.empty()) {
                detail::write_series(os, zeta_germ(spec).series, fmt);
            } else {
                const auto r = zeta_continue_graded(spec, parse_complex(b_text), trunc, source.value_or(40));
                if (fmt == "json") {
                    detail::write_germ(os, r.germ, fmt);
                } else {
                    detail::write_series(os, r.germ.series, fmt);
                }
            }
        } else if (*gamma_cmd) {
            if (fmt.empty()) fmt = "csv";
            if (probe) {
                const auto report = gamma_shift_probe(parse_complex(r_text), trunc, k);
                os << "tree,degree,shifted_re,shifted_im,product_re,product_im,rel_diff\n";
                for (const auto& e : report.entries) {
                    os << '"' << planar::format(e.tree) << "\"," << e.tree.degree() << ',' << detail::complex_text(e.shifted, ",")
                       << ',' << detail::complex_text(e.product, ",") << ',' << detail::double_text(e.rel_diff) << "\n";
                }
            } else {
                detail::write_series(os, gamma_germ({parse_complex(r_text), k, trunc}).series, fmt);
            }
        } else if (*radius_cmd) {
            std::vector<double> m;
            if (!inputs.empty()) {
                const Json doc = detail::read_json(inputs[0]);
                if (scalar_kind(doc) == "rational") {
                    m = majorants(series_from_json<Rational>(doc));
                } else {
                    m = majorants(series_from_json<Complex>(doc));
                }
            } else if (which == "g") {
                m = g_series_majorants(degree);
            } else if (which == "exp") {
                m = exp_majorants(k, degree);
            } else if (which == "sqrt") {
                m = sqrt_germ_majorants(a_text.empty() ? Complex(1.0) : parse_complex(a_text), degree);
            } else if (which == "zeta") {
                m = zeta_germ_majorants({r_text.empty() ? Complex(3.0) : parse_complex(r_text), k, degree});
            } else {
                throw std::invalid_argument("radius needs --in or --series");
            }
            const auto e = estimate_radius(m);
            os << "estimate " << (e.infinite ? std::string("inf") : detail::double_text(e.estimate)) << "\n";
            os << "method " << e.method << "\n";
            os << "window " << e.window_begin << ".." << e.window_end << "\n";
            os << "residual " << detail::double_text(e.residual) << "\n";
        } else if (*check_cmd) {
            CheckOptions opts;
            opts.max_degree = max_degree;
            std::vector<std::string> names;
            if (suite == "all") {
                for (const auto& s : check_suites()) names.emplace_back(s.name);
            } else {
                names.push_back(suite);
            }
            bool all_ok = true;
            for (const auto& name : names) {
                const auto r = run_check(name, opts);
                char head[128];
                std::snprintf(head, sizeof head, "%s %s (%.2fs)", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
                os << head << "\n";
                for (const auto& line : r.details) os << "  " << line << "\n";
                all_ok = all_ok && r.passed;
            }
            if (!all_ok) throw CheckFailed{};
        }
        os.flush();
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const CheckFailed&) {
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace planar::cli
