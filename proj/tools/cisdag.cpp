// cisdag: command-line front end for the CIS/DAG-positivity library.
//
// Subcommands: check, orderings, recover, fit, equiv, simulate.  Results go
// to stdout (tables by default, --json for machine output), diagnostics to
// stderr.  Exit codes: 0 affirmative/success, 1 negative result (not CIS, no
// ordering, MLE absent, recovery failed), 2 usage or input errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cisdag/cisdag.hpp"

namespace {

using nlohmann::json;
using namespace cisdag;

struct TolFlags {
    double abs = 1e-12;
    double rel = 1e-9;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", abs, "absolute sign/pivot tolerance")->check(CLI::NonNegativeNumber);
        cmd->add_option("--rtol", rel, "relative sign tolerance (scaled by diagonals)")
            ->check(CLI::NonNegativeNumber);
    }
    Tolerance tol() const { return Tolerance{abs, rel}; }
};

json ordering_json(const Ordering& o) {
    json a = json::array();
    for (std::size_t p = 0; p < o.size(); ++p) a.push_back(o[p] + 1);
    return a;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void print_matrix(std::ostream& out, const Matrix& m, const std::string& indent) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << indent;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << "  ";
            out << io::fmt_double_sig(m(i, j));
        }
        out << '\n';
    }
}

std::string edge_list_string(const Dag& g) {
    if (g.edges().empty()) return "(no edges)";
    std::string s;
    for (const Edge& e : g.edges()) {
        if (!s.empty()) s += ' ';
        s += std::to_string(e.first + 1) + "->" + std::to_string(e.second + 1);
    }
    return s;
}

unsigned env_threads() {
    const char* v = std::getenv("CISDAG_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const unsigned long t = std::strtoul(v, &end, 10);
    if (end == v || *end != '\0') return 1;
    return t == 0 ? 0 : static_cast<unsigned>(t); // 0 = auto (hardware)
}

// ---------------------------------------------------------------- check ---

struct CheckArgs {
    std::string sigma_path, precision_path, ordering_text;
    TolFlags tol;
    bool as_json = false;
};

int run_check(const CheckArgs& a) {
    if (a.sigma_path.empty() == a.precision_path.empty())
        throw ParseError("check: pass exactly one of --sigma or --precision");
    const Tolerance tol = a.tol.tol();
    const CovariancePair cp = a.sigma_path.empty()
                                  ? CovariancePair::from_precision(io::read_sym_file(a.precision_path), tol)
                                  : CovariancePair::from_sigma(io::read_sym_file(a.sigma_path), tol);
    const Ordering ord = a.ordering_text.empty() ? Ordering::identity(cp.dim())
                                                 : io::parse_ordering(a.ordering_text, cp.dim());
    const PositivityReport rep = positivity_report(cp, ord, tol);

    if (a.as_json) {
        json j;
        j["is_cis"] = rep.is_cis_under_given_ordering;
        j["is_mtp2"] = rep.is_mtp2;
        j["is_positively_associated"] = rep.is_positively_associated;
        j["ordering"] = ordering_json(ord);
        json ve = json::array();
        for (const ViolatingEntry& e : rep.violating_entries)
            ve.push_back({{"row", e.row + 1}, {"col", e.col + 1}, {"value", e.value}});
        j["violating_entries"] = std::move(ve);
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "is_cis: " << (rep.is_cis_under_given_ordering ? "true" : "false") << '\n'
                  << "is_mtp2: " << (rep.is_mtp2 ? "true" : "false") << '\n'
                  << "is_positively_associated: "
                  << (rep.is_positively_associated ? "true" : "false") << '\n'
                  << "ordering: " << io::format_ordering(ord) << '\n';
        if (rep.violating_entries.empty()) {
            std::cout << "violating_entries: none\n";
        } else {
            std::cout << "violating_entries:\n";
            for (const ViolatingEntry& e : rep.violating_entries)
                std::cout << "  (" << e.row + 1 << "," << e.col + 1 << ") = "
                          << io::fmt_double_sig(e.value)
                          << (e.value == 0.0 ? "  [boundary tie]" : "") << '\n';
        }
    }
    return rep.is_cis_under_given_ordering ? 0 : 1;
}

// ------------------------------------------------------------ orderings ---

struct OrderingsArgs {
    std::string sigma_path;
    bool all = false, one = false, as_json = false;
    TolFlags tol;
};

int run_orderings(const OrderingsArgs& a) {
    const Tolerance tol = a.tol.tol();
    const CovariancePair cp = CovariancePair::from_sigma(io::read_sym_file(a.sigma_path), tol);
    if (a.one) {
        const std::optional<Ordering> found =
            find_cis_ordering_population(cp, RecoveryConfig{tol, {}, 0.5, TieBreak::FirstIndex});
        if (a.as_json) {
            json j;
            j["ordering"] = found ? ordering_json(*found) : json(nullptr);
            std::cout << j.dump() << '\n';
        } else {
            std::cout << (found ? io::format_ordering(*found) : "NONE") << '\n';
        }
        return found ? 0 : 1;
    }
    const std::vector<Ordering> all = enumerate_cis_orderings(cp, tol);
    if (a.as_json) {
        json arr = json::array();
        for (const Ordering& o : all) arr.push_back(ordering_json(o));
        std::cout << json{{"count", all.size()}, {"orderings", std::move(arr)}}.dump() << '\n';
    } else if (all.empty()) {
        std::cout << "NONE\n";
    } else {
        for (const Ordering& o : all) std::cout << io::format_ordering(o) << '\n';
    }
    return all.empty() ? 1 : 0;
}

// -------------------------------------------------------------- recover ---

struct RecoverArgs {
    std::string data_path, tie_break = "first";
    double epsilon_scale = 0.5;
    bool seedless = false, as_json = false;
    TolFlags tol;
};

int run_recover(const RecoverArgs& a) {
    const io::CsvData csv = io::read_csv_file(a.data_path);
    RecoveryConfig cfg;
    cfg.tol = a.tol.tol();
    cfg.epsilon_scale = a.epsilon_scale;
    cfg.tie_break = a.tie_break == "maxmin" ? TieBreak::MaxMinCoefficient : TieBreak::FirstIndex;
    try {
        const NoisyRecovery rec = find_cis_ordering_noisy(csv.data, cfg);
        if (a.as_json) {
            json steps = json::array();
            for (const RecoveryStep& s : rec.steps)
                steps.push_back({{"position", s.position + 1},
                                 {"variable", s.index + 1},
                                 {"min_coefficient", s.min_coefficient}});
            std::cout << json{{"ordering", ordering_json(rec.ordering)},
                              {"epsilon", rec.epsilon},
                              {"steps", std::move(steps)}}
                             .dump()
                      << '\n';
        } else {
            std::cout << "ordering: " << io::format_ordering(rec.ordering) << '\n'
                      << "epsilon: " << io::fmt_double_sig(rec.epsilon) << '\n';
            for (const RecoveryStep& s : rec.steps)
                std::cout << "position " << s.position + 1 << ": variable " << s.index + 1
                          << " (min coefficient " << io::fmt_double_sig(s.min_coefficient) << ")\n";
        }
        return 0;
    } catch (const NoCandidate& e) {
        if (a.as_json)
            std::cout << json{{"error", "no_candidate"},
                              {"step", e.step},
                              {"best_margin", e.best_margin}}
                             .dump()
                      << '\n';
        std::cerr << "recover: " << e.what() << '\n';
        return 1;
    }
}

// ------------------------------------------------------------------ fit ---

struct FitArgs {
    std::string data_path, ordering_text, dag_path;
    bool nonneg = false, as_json = false;
    TolFlags tol;
};

int run_fit(const FitArgs& a) {
    const io::CsvData csv = io::read_csv_file(a.data_path);
    const std::size_t m = csv.data.cols();
    std::optional<Dag> dag;
    if (!a.dag_path.empty()) {
        dag = io::read_dag_file(a.dag_path);
        if (dag->node_count() != m)
            throw ParseError("fit: DAG has " + std::to_string(dag->node_count()) +
                             " nodes for " + std::to_string(m) + " data columns");
    }
    Ordering ord = !a.ordering_text.empty() ? io::parse_ordering(a.ordering_text, m)
                   : dag                    ? one_topological_ordering(*dag)
                                            : Ordering::identity(m);
    if (dag) {
        const std::vector<std::size_t> pos = ord.positions();
        for (const Edge& e : dag->edges())
            if (pos[e.first] >= pos[e.second])
                throw ParseError("fit: ordering is not topological for the DAG (edge " +
                                 std::to_string(e.first + 1) + "->" +
                                 std::to_string(e.second + 1) + ")");
    }
    std::vector<RowConstraint> constraints;
    constraints.reserve(m > 0 ? m - 1 : 0);
    for (std::size_t p = 1; p < m; ++p) {
        if (dag) {
            std::vector<std::size_t> sup = dag->parents(ord[p]);
            constraints.push_back(a.nonneg ? RowConstraint::nonnegative_support(std::move(sup))
                                           : RowConstraint::with_support(std::move(sup)));
        } else {
            constraints.push_back(a.nonneg ? RowConstraint::nonnegative() : RowConstraint::free());
        }
    }

    try {
        const MleFit res = fit(csv.data, ord, constraints, a.tol.tol());
        const std::size_t n = csv.data.rows();
        std::vector<double> d_hat(m);
        for (std::size_t v = 0; v < m; ++v) d_hat[v] = 1.0 / res.sem.noise_var()[v];
        if (a.as_json) {
            json j;
            j["exists"] = true;
            j["ordering"] = ordering_json(ord);
            j["lambda"] = matrix_json(res.sem.lambda());
            json nv = json::array(), dh = json::array(), rn = json::array();
            for (std::size_t v = 0; v < m; ++v) {
                nv.push_back(res.sem.noise_var()[v]);
                dh.push_back(d_hat[v]);
                rn.push_back(res.residual_norms[v]);
            }
            j["noise_var"] = std::move(nv);
            j["d_hat"] = std::move(dh);
            j["residual_norms"] = std::move(rn);
            j["loglik"] = res.loglik;
            j["n"] = n;
            std::cout << j.dump() << '\n';
        } else {
            std::cout << "exists: true\n"
                      << "ordering: " << io::format_ordering(ord) << '\n'
                      << "loglik: " << io::fmt_double_sig(res.loglik, 10) << '\n'
                      << "lambda:\n";
            print_matrix(std::cout, res.sem.lambda(), "  ");
            std::cout << "noise_var:";
            for (std::size_t v = 0; v < m; ++v)
                std::cout << ' ' << io::fmt_double_sig(res.sem.noise_var()[v]);
            std::cout << "\nd_hat:";
            for (std::size_t v = 0; v < m; ++v) std::cout << ' ' << io::fmt_double_sig(d_hat[v]);
            std::cout << "\nresidual_norms:";
            for (std::size_t v = 0; v < m; ++v)
                std::cout << ' ' << io::fmt_double_sig(res.residual_norms[v]);
            std::cout << '\n';
        }
        return 0;
    } catch (const MleDoesNotExist& e) {
        if (a.as_json) std::cout << json{{"exists", false}, {"error", e.what()}}.dump() << '\n';
        std::cerr << "fit: " << e.what() << '\n';
        return 1;
    }
}

// ---------------------------------------------------------------- equiv ---

struct EquivArgs {
    std::string dag_path, klass = "markov";
    bool as_json = false;
};

int run_equiv(const EquivArgs& a) {
    const Dag g = io::read_dag_file(a.dag_path);
    const std::set<Dag> cls = a.klass == "cis-markov" ? cis_markov_class(g) : markov_class(g);
    if (a.as_json) {
        json members = json::array();
        for (const Dag& d : cls) {
            json edges = json::array();
            for (const Edge& e : d.edges()) edges.push_back({e.first + 1, e.second + 1});
            members.push_back(std::move(edges));
        }
        std::cout << json{{"class", a.klass}, {"size", cls.size()}, {"members", std::move(members)}}
                         .dump()
                  << '\n';
    } else {
        std::cout << "class: " << a.klass << '\n' << "size: " << cls.size() << '\n';
        for (const Dag& d : cls) std::cout << edge_list_string(d) << '\n';
    }
    return 0;
}

// ------------------------------------------------------------- simulate ---

struct SimulateArgs {
    std::string sem_path, random_spec, out_path;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    bool as_json = false;
};

SemParams sem_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    json j = json::parse(in);
    if (!j.contains("ordering") || !j.contains("lambda") || !j.contains("noise_var"))
        throw ParseError(path + ": SEM JSON needs ordering, lambda, noise_var");
    const std::size_t m = j["ordering"].size();
    std::vector<std::size_t> perm;
    perm.reserve(m);
    for (const json& v : j["ordering"]) {
        const long long x = v.get<long long>();
        if (x < 1 || static_cast<std::size_t>(x) > m)
            throw ParseError(path + ": ordering entries must lie in 1.." + std::to_string(m));
        perm.push_back(static_cast<std::size_t>(x) - 1);
    }
    if (j["lambda"].size() != m) throw ParseError(path + ": lambda must be " + std::to_string(m) + " rows");
    Matrix lambda(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const json& row = j["lambda"][i];
        if (row.size() != m) throw ParseError(path + ": lambda row " + std::to_string(i + 1) + " length");
        for (std::size_t k = 0; k < m; ++k) lambda(i, k) = row[k].get<double>();
    }
    if (j["noise_var"].size() != m) throw ParseError(path + ": noise_var must have m entries");
    std::vector<double> nv;
    nv.reserve(m);
    for (const json& v : j["noise_var"]) nv.push_back(v.get<double>());
    std::vector<double> mean;
    if (j.contains("mean")) {
        if (j["mean"].size() != m) throw ParseError(path + ": mean must have m entries");
        for (const json& v : j["mean"]) mean.push_back(v.get<double>());
    }
    try {
        return SemParams(Ordering(std::move(perm)), std::move(lambda), PosDiagonal(std::move(nv)),
                         std::move(mean));
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

SemParams sem_from_random_spec(const std::string& spec, std::uint64_t seed) {
    const std::vector<std::string> parts = io::detail::tokenize(spec);
    if (parts.size() != 4)
        throw ParseError("--random expects m,edge_prob,lo,hi");
    const std::size_t m = io::detail::require_index(parts[0], "--random m");
    const double p = io::detail::require_double(parts[1], "--random edge_prob");
    const double lo = io::detail::require_double(parts[2], "--random lo");
    const double hi = io::detail::require_double(parts[3], "--random hi");
    try {
        return random_cis_model(m, p, lo, hi, seed);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("--random: ") + e.what());
    }
}

int run_simulate(const SimulateArgs& a) {
    if (a.sem_path.empty() == a.random_spec.empty())
        throw ParseError("simulate: pass exactly one of --sem or --random");
    if (a.n < 1) throw ParseError("simulate: need --n >= 1");
    SimSpec spec;
    spec.sem = a.sem_path.empty() ? sem_from_random_spec(a.random_spec, a.seed)
                                  : sem_from_json_file(a.sem_path);
    spec.n = a.n;
    spec.seed = a.seed;
    const Dataset data = sample_sem(spec, env_threads());
    if (a.out_path.empty()) {
        if (a.as_json) throw ParseError("simulate: --json requires --out (CSV would mix with it)");
        io::write_csv(std::cout, data);
        return 0;
    }
    std::ofstream out(a.out_path);
    if (!out) throw ParseError("cannot write file: " + a.out_path);
    io::write_csv(out, data);
    if (a.as_json)
        std::cout << json{{"rows", data.rows()},
                          {"cols", data.cols()},
                          {"seed", a.seed},
                          {"out", a.out_path}}
                         .dump()
                  << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CIS orderings, positivity checks, MLE, and DAG equivalence "
                 "for Gaussian structural equation models"};
    app.require_subcommand(1);

    CheckArgs check_args;
    CLI::App* check = app.add_subcommand("check", "positivity report for a covariance or precision matrix");
    check->add_option("--sigma", check_args.sigma_path, "covariance matrix file");
    check->add_option("--precision", check_args.precision_path, "precision matrix file");
    check->add_option("--ordering", check_args.ordering_text, "1-based ordering, e.g. 1,4,3,2 (default identity)");
    check->add_flag("--json", check_args.as_json, "machine-readable output");
    check_args.tol.attach(check);

    OrderingsArgs ord_args;
    CLI::App* orderings = app.add_subcommand("orderings", "enumerate CIS orderings of a covariance");
    orderings->add_option("--sigma", ord_args.sigma_path, "covariance matrix file")->required();
    CLI::Option* all_flag = orderings->add_flag("--all", ord_args.all, "list every CIS ordering (default)");
    orderings->add_flag("--one", ord_args.one, "population recovery: print one ordering or NONE")
        ->excludes(all_flag);
    orderings->add_flag("--json", ord_args.as_json, "machine-readable output");
    ord_args.tol.attach(orderings);

    RecoverArgs rec_args;
    CLI::App* recover = app.add_subcommand("recover", "recover a CIS ordering from sample data");
    recover->add_option("--data", rec_args.data_path, "CSV dataset (header optional)")->required();
    recover->add_option("--epsilon-scale", rec_args.epsilon_scale,
                        "threshold scale: epsilon_n = scale * n^(-1/4)")
        ->check(CLI::PositiveNumber);
    recover->add_option("--tie-break", rec_args.tie_break, "candidate rule: first | maxmin")
        ->check(CLI::IsMember({"first", "maxmin"}));
    recover->add_flag("--seedless", rec_args.seedless,
                      "accepted for compatibility; recovery uses no randomness");
    recover->add_flag("--json", rec_args.as_json, "machine-readable output");
    rec_args.tol.attach(recover);

    FitArgs fit_args;
    CLI::App* fitc = app.add_subcommand("fit", "maximum likelihood fit of a Cholesky factor model");
    fitc->add_option("--data", fit_args.data_path, "CSV dataset")->required();
    fitc->add_option("--ordering", fit_args.ordering_text, "working ordering (default: identity, or topological with --dag)");
    fitc->add_option("--dag", fit_args.dag_path, "restrict support to a DAG's parent sets");
    fitc->add_flag("--nonneg", fit_args.nonneg, "constrain coefficients to be nonnegative");
    fitc->add_flag("--json", fit_args.as_json, "machine-readable output");
    fit_args.tol.attach(fitc);

    EquivArgs equiv_args;
    CLI::App* equiv = app.add_subcommand("equiv", "equivalence class of a DAG");
    equiv->add_option("--dag", equiv_args.dag_path, "DAG file: 'm <count>' then 'i j' lines")->required();
    equiv->add_option("--class", equiv_args.klass, "markov | cis-markov")
        ->check(CLI::IsMember({"markov", "cis-markov"}));
    equiv->add_flag("--json", equiv_args.as_json, "machine-readable output");

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "draw seeded samples from a Gaussian SEM");
    simulate->add_option("--sem", sim_args.sem_path, "SEM JSON: {ordering, lambda, noise_var, mean}");
    simulate->add_option("--random", sim_args.random_spec, "random model: m,edge_prob,lo,hi");
    simulate->add_option("--n", sim_args.n, "number of rows")->required();
    simulate->add_option("--seed", sim_args.seed, "RNG seed (default 0)");
    simulate->add_option("--out", sim_args.out_path, "output CSV path (default stdout)");
    simulate->add_flag("--json", sim_args.as_json, "print a run summary (requires --out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed()) return run_check(check_args);
        if (orderings->parsed()) return run_orderings(ord_args);
        if (recover->parsed()) return run_recover(rec_args);
        if (fitc->parsed()) return run_fit(fit_args);
        if (equiv->parsed()) return run_equiv(equiv_args);
        if (simulate->parsed()) return run_simulate(sim_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
