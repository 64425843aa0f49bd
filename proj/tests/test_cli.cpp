#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "cisdag/cisdag.hpp"
#include "fixtures.hpp"

using namespace cisdag;
using nlohmann::json;

namespace {

const std::string& scratch_dir() {
    static const std::string dir = [] {
        std::string tmpl = "/tmp/cisdag_cli_XXXXXX";
        char* made = mkdtemp(tmpl.data());
        return std::string(made ? made : "/tmp");
    }();
    return dir;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const std::string base = scratch_dir() + "/run" + std::to_string(counter++);
    const std::string cmd = env_prefix + "\"" + CISDAG_BIN_PATH + "\" " + args + " > " + base +
                            ".out 2> " + base + ".err";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    if (raw != -1 && WIFEXITED(raw)) r.exit_code = WEXITSTATUS(raw);
    r.out = read_file(base + ".out");
    r.err = read_file(base + ".err");
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string sym_text(const SymMatrix& s) {
    std::string t;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        for (std::size_t j = 0; j < s.dim(); ++j) {
            if (j) t += ' ';
            t += io::fmt_double(s(i, j));
        }
        t += '\n';
    }
    return t;
}

std::string sem_json_text(const SemParams& sem) {
    json j;
    json ord = json::array();
    for (std::size_t p = 0; p < sem.dim(); ++p) ord.push_back(sem.ordering()[p] + 1);
    j["ordering"] = std::move(ord);
    json rows = json::array();
    for (std::size_t i = 0; i < sem.dim(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < sem.dim(); ++k) row.push_back(sem.lambda()(i, k));
        rows.push_back(std::move(row));
    }
    j["lambda"] = std::move(rows);
    json nv = json::array();
    for (std::size_t v = 0; v < sem.dim(); ++v) nv.push_back(sem.noise_var()[v]);
    j["noise_var"] = std::move(nv);
    return j.dump();
}

const std::string& fourcycle_sigma_path() {
    static const std::string path = [] {
        const std::string p = scratch_dir() + "/fourcycle_sigma.txt";
        write_file(p, sym_text(fixtures::fourcycle_sigma()));
        return p;
    }();
    return path;
}

const std::string& pa_sigma_path() {
    static const std::string path = [] {
        const std::string p = scratch_dir() + "/pa_sigma.txt";
        write_file(p, sym_text(invert_spd(fixtures::pa_precision())));
        return p;
    }();
    return path;
}

} // namespace

TEST_CASE("help and usage errors") {
    REQUIRE(run("--help").exit_code == 0);
    REQUIRE(contains(run("--help").out, "simulate"));
    REQUIRE(run("check --help").exit_code == 0);
    REQUIRE(run("").exit_code == 2);
    REQUIRE(run("frobnicate").exit_code == 2);
    REQUIRE(run("check --no-such-flag").exit_code == 2);
}

TEST_CASE("check reports the four cycle") {
    const std::string sig = fourcycle_sigma_path();

    const RunResult good = run("check --sigma " + sig + " --ordering 1,4,3,2");
    REQUIRE(good.exit_code == 0);
    REQUIRE(contains(good.out, "is_cis: true"));
    REQUIRE(contains(good.out, "is_mtp2: false"));
    REQUIRE(contains(good.out, "is_positively_associated: true"));
    REQUIRE(contains(good.out, "ordering: 1,4,3,2"));
    REQUIRE(contains(good.out, "violating_entries: none"));

    const RunResult bad = run("check --sigma " + sig);
    REQUIRE(bad.exit_code == 1);
    REQUIRE(contains(bad.out, "is_cis: false"));
    REQUIRE(contains(bad.out, "ordering: 1,2,3,4"));
    REQUIRE(contains(bad.out, "violating_entries:\n"));

    const RunResult jrun = run("check --sigma " + sig + " --json");
    REQUIRE(jrun.exit_code == 1);
    const json j = json::parse(jrun.out);
    REQUIRE(j["is_cis"] == false);
    REQUIRE(j["is_positively_associated"] == true);
    REQUIRE(j["ordering"] == json::array({1, 2, 3, 4}));
    REQUIRE(j["violating_entries"].size() >= 1);
    for (const json& e : j["violating_entries"]) {
        REQUIRE(e["row"].get<int>() >= 1);
        REQUIRE(e["col"].get<int>() <= 4);
        REQUIRE(e.contains("value"));
    }
}

TEST_CASE("check accepts a precision matrix and flags mtp2") {
    const std::string prec = scratch_dir() + "/tridiag.txt";
    write_file(prec, sym_text(fixtures::tridiag_m_matrix()));
    const RunResult r = run("check --precision " + prec);
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.out, "is_cis: true"));
    REQUIRE(contains(r.out, "is_mtp2: true"));

    REQUIRE(run("check --sigma a.txt --precision b.txt").exit_code == 2);
    REQUIRE(run("check").exit_code == 2);
    REQUIRE(run("check --sigma /nonexistent/sigma.txt").exit_code == 2);
}

TEST_CASE("orderings lists or recovers") {
    const std::string sig = fourcycle_sigma_path();
    const RunResult all = run("orderings --sigma " + sig);
    REQUIRE(all.exit_code == 0);
    REQUIRE(all.out == "1,4,3,2\n4,1,3,2\n1,4,2,3\n4,1,2,3\n");
    REQUIRE(run("orderings --sigma " + sig + " --all").out == all.out);

    const RunResult one = run("orderings --sigma " + sig + " --one");
    REQUIRE(one.exit_code == 0);
    REQUIRE(one.out == "1,4,3,2\n");

    const json jall = json::parse(run("orderings --sigma " + sig + " --json").out);
    REQUIRE(jall["count"] == 4);
    REQUIRE(jall["orderings"][0] == json::array({1, 4, 3, 2}));
    const json jone = json::parse(run("orderings --sigma " + sig + " --one --json").out);
    REQUIRE(jone["ordering"] == json::array({1, 4, 3, 2}));

    const std::string pa = pa_sigma_path();
    const RunResult none = run("orderings --sigma " + pa);
    REQUIRE(none.exit_code == 1);
    REQUIRE(none.out == "NONE\n");
    const RunResult noneone = run("orderings --sigma " + pa + " --one");
    REQUIRE(noneone.exit_code == 1);
    REQUIRE(noneone.out == "NONE\n");
    REQUIRE(json::parse(run("orderings --sigma " + pa + " --one --json").out)["ordering"]
                .is_null());

    REQUIRE(run("orderings --sigma " + sig + " --all --one").exit_code == 2);
    REQUIRE(run("orderings").exit_code == 2);
}

TEST_CASE("simulate is seed-deterministic and thread-invariant") {
    const std::string spec = "simulate --random 3,0.5,0.2,0.8 --n 64 --seed 9 --out ";
    const std::string f1 = scratch_dir() + "/sim1.csv";
    const std::string f2 = scratch_dir() + "/sim2.csv";
    const std::string f3 = scratch_dir() + "/sim3.csv";
    const std::string f4 = scratch_dir() + "/sim4.csv";
    REQUIRE(run(spec + f1).exit_code == 0);
    REQUIRE(run(spec + f2).exit_code == 0);
    REQUIRE(run(spec + f3, "CISDAG_THREADS=4 ").exit_code == 0);
    REQUIRE(run(spec + f4, "CISDAG_THREADS=0 ").exit_code == 0);
    const std::string body = read_file(f1);
    REQUIRE(!body.empty());
    REQUIRE(body == read_file(f2));
    REQUIRE(body == read_file(f3));
    REQUIRE(body == read_file(f4));

    const std::string g = scratch_dir() + "/sim_other.csv";
    REQUIRE(run("simulate --random 3,0.5,0.2,0.8 --n 64 --seed 10 --out " + g).exit_code == 0);
    REQUIRE(read_file(g) != body);

    const RunResult stdout_run = run("simulate --random 2,1,0.5,0.5 --n 3 --seed 1");
    REQUIRE(stdout_run.exit_code == 0);
    REQUIRE(stdout_run.out.substr(0, 6) == "x1,x2\n");
    REQUIRE(std::count(stdout_run.out.begin(), stdout_run.out.end(), '\n') == 4);

    const json jsum = json::parse(
        run("simulate --random 2,1,0.5,0.5 --n 5 --seed 1 --json --out " + f1).out);
    REQUIRE(jsum["rows"] == 5);
    REQUIRE(jsum["cols"] == 2);
}

TEST_CASE("simulate validates its inputs") {
    REQUIRE(run("simulate --random 3,0.5,0.2,0.8 --n 0").exit_code == 2);
    REQUIRE(run("simulate --random 3,0.5,0.2,0.8").exit_code == 2);
    REQUIRE(run("simulate --n 5").exit_code == 2);
    REQUIRE(run("simulate --random 3,0.5,0.2,0.8 --sem x.json --n 5").exit_code == 2);
    REQUIRE(run("simulate --random 3,2,0.2,0.8 --n 5").exit_code == 2);
    REQUIRE(run("simulate --random 3,0.5,0.8,0.2 --n 5").exit_code == 2);
    REQUIRE(run("simulate --random 3,0.5 --n 5").exit_code == 2);
    REQUIRE(run("simulate --random 3,0.5,0.2,0.8 --n 5 --json").exit_code == 2);

    const std::string bad = scratch_dir() + "/bad_sem.json";
    write_file(bad, "{\"ordering\":[1,9],\"lambda\":[[0,0],[0,0]],\"noise_var\":[1,1]}");
    REQUIRE(run("simulate --sem " + bad + " --n 5").exit_code == 2);
    write_file(bad, "{\"ordering\":[1,2],\"lambda\":[[0,0]],\"noise_var\":[1,1]}");
    REQUIRE(run("simulate --sem " + bad + " --n 5").exit_code == 2);
    write_file(bad, "{\"ordering\":[1,2],\"lambda\":[[0,0.5],[0,0]],\"noise_var\":[1,1]}");
    REQUIRE(run("simulate --sem " + bad + " --n 5").exit_code == 2); // not ordering-compatible
}

TEST_CASE("recover round-trips a simulated four cycle") {
    const CovariancePair cp = CovariancePair::from_sigma(fixtures::fourcycle_sigma());
    const std::string sem = scratch_dir() + "/fourcycle_sem.json";
    write_file(sem, sem_json_text(precision_to_sem(cp, Ordering({0, 3, 2, 1}))));
    const std::string data = scratch_dir() + "/fourcycle_data.csv";
    REQUIRE(run("simulate --sem " + sem + " --n 5000 --seed 7100 --out " + data).exit_code == 0);

    const RunResult rec = run("recover --data " + data);
    REQUIRE(rec.exit_code == 0);
    REQUIRE(contains(rec.out, "ordering: 1,4,3,2"));
    REQUIRE(contains(rec.out, "epsilon: 0.059460"));
    REQUIRE(contains(rec.out, "position 4: variable 2 (min coefficient "));
    REQUIRE(contains(rec.out, "position 3: variable 3 (min coefficient "));

    const json j = json::parse(run("recover --data " + data + " --json").out);
    REQUIRE(j["ordering"] == json::array({1, 4, 3, 2}));
    REQUIRE(j["steps"].size() == 2);
    REQUIRE(j["steps"][0]["position"] == 4);
    REQUIRE(j["steps"][0]["variable"] == 2);
    REQUIRE(j["steps"][1]["position"] == 3);
    REQUIRE(j["steps"][1]["variable"] == 3);

    // flags parse; recovery itself consumes no randomness
    const RunResult flags =
        run("recover --data " + data + " --tie-break maxmin --seedless --epsilon-scale 0.7");
    REQUIRE(flags.exit_code == 0);

    REQUIRE(run("recover --data " + data + " --epsilon-scale 0").exit_code == 2);
    REQUIRE(run("recover --data " + data + " --tie-break bogus").exit_code == 2);
    REQUIRE(run("recover --data /nonexistent.csv").exit_code == 2);
}

TEST_CASE("recover reports failure on negatively dependent data") {
    const CovariancePair pa = CovariancePair::from_precision(fixtures::pa_precision());
    const std::string sem = scratch_dir() + "/pa_sem.json";
    write_file(sem, sem_json_text(precision_to_sem(pa, Ordering::identity(4))));
    const std::string data = scratch_dir() + "/pa_data.csv";
    REQUIRE(run("simulate --sem " + sem + " --n 5000 --seed 99 --out " + data).exit_code == 0);

    const RunResult rec = run("recover --data " + data);
    REQUIRE(rec.exit_code == 1);
    REQUIRE(contains(rec.err, "recover: no variable passes"));

    const RunResult jrec = run("recover --data " + data + " --json");
    REQUIRE(jrec.exit_code == 1);
    const json j = json::parse(jrec.out);
    REQUIRE(j["error"] == "no_candidate");
    REQUIRE(j["step"] == 1);
    REQUIRE(j["best_margin"].get<double>() < -0.1);
}

TEST_CASE("fit estimates a two variable model") {
    SemParams sem(Ordering::identity(2), Matrix::from_rows({{0, 0}, {0.8, 0}}),
                  PosDiagonal({1.0, 0.25}));
    const std::string semf = scratch_dir() + "/pair_sem.json";
    write_file(semf, sem_json_text(sem));
    const std::string data = scratch_dir() + "/pair_data.csv";
    REQUIRE(run("simulate --sem " + semf + " --n 500 --seed 5 --out " + data).exit_code == 0);

    const RunResult r = run("fit --data " + data);
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.out, "exists: true"));
    REQUIRE(contains(r.out, "ordering: 1,2"));
    REQUIRE(contains(r.out, "loglik: "));
    REQUIRE(contains(r.out, "lambda:"));
    REQUIRE(contains(r.out, "noise_var:"));

    const json j = json::parse(run("fit --data " + data + " --json").out);
    REQUIRE(j["exists"] == true);
    REQUIRE(j["n"] == 500);
    const double lam = j["lambda"][1][0].get<double>();
    REQUIRE(std::abs(lam - 0.8) < 0.1);
    for (std::size_t v = 0; v < 2; ++v) {
        const double prod = j["noise_var"][v].get<double>() * j["d_hat"][v].get<double>();
        REQUIRE(std::abs(prod - 1.0) < 1e-12);
    }

    // nonnegative and DAG-restricted variants agree here
    REQUIRE(run("fit --data " + data + " --nonneg").exit_code == 0);
    const std::string dag = scratch_dir() + "/pair_dag.txt";
    write_file(dag, "m 2\n1 2\n");
    const json jd = json::parse(run("fit --data " + data + " --dag " + dag + " --json").out);
    REQUIRE(std::abs(jd["lambda"][1][0].get<double>() - lam) < 1e-12);

    // an ordering that contradicts the DAG is a usage error
    REQUIRE(run("fit --data " + data + " --dag " + dag + " --ordering 2,1").exit_code == 2);
    const std::string dag3 = scratch_dir() + "/three_dag.txt";
    write_file(dag3, "m 3\n1 2\n");
    REQUIRE(run("fit --data " + data + " --dag " + dag3).exit_code == 2);
}

TEST_CASE("fit reports a nonexistent mle") {
    const std::string data = scratch_dir() + "/collinear.csv";
    write_file(data, "1,2\n2,4\n3,6\n-1,-2\n");
    const RunResult r = run("fit --data " + data);
    REQUIRE(r.exit_code == 1);
    REQUIRE(contains(r.err, "fit: "));
    const RunResult jr = run("fit --data " + data + " --json");
    REQUIRE(jr.exit_code == 1);
    REQUIRE(json::parse(jr.out)["exists"] == false);
}

TEST_CASE("equiv prints markov and cis classes") {
    const std::string chain = scratch_dir() + "/chain.txt";
    write_file(chain, "m 3\n1 2\n2 3\n");
    const RunResult markov = run("equiv --dag " + chain);
    REQUIRE(markov.exit_code == 0);
    REQUIRE(contains(markov.out, "class: markov"));
    REQUIRE(contains(markov.out, "size: 3"));
    REQUIRE(contains(markov.out, "1->2 2->3"));
    REQUIRE(contains(markov.out, "2->1 2->3"));
    REQUIRE(contains(markov.out, "2->1 3->2"));

    const RunResult cis = run("equiv --dag " + chain + " --class cis-markov");
    REQUIRE(cis.exit_code == 0);
    REQUIRE(contains(cis.out, "class: cis-markov"));
    REQUIRE(contains(cis.out, "size: 3"));

    const std::string collider = scratch_dir() + "/collider.txt";
    write_file(collider, "m 3\n1 3\n2 3\n");
    const json j = json::parse(run("equiv --dag " + collider + " --json").out);
    REQUIRE(j["size"] == 1);
    REQUIRE(j["members"][0] == json::array({json::array({1, 3}), json::array({2, 3})}));

    REQUIRE(run("equiv --dag " + chain + " --class bogus").exit_code == 2);
    const std::string cyc = scratch_dir() + "/cyc.txt";
    write_file(cyc, "m 3\n1 2\n2 3\n3 1\n");
    REQUIRE(run("equiv --dag " + cyc).exit_code == 2);
}

TEST_CASE("simulated data feeds the other commands end to end") {
    const std::string data = scratch_dir() + "/pipe.csv";
    REQUIRE(run("simulate --random 4,0.7,0.3,0.9 --n 4000 --seed 23 --out " + data).exit_code ==
            0);
    const RunResult rec = run("recover --data " + data);
    REQUIRE(rec.exit_code == 0);
    const RunResult fitres = run("fit --data " + data + " --nonneg --json");
    REQUIRE(fitres.exit_code == 0);
    REQUIRE(json::parse(fitres.out)["exists"] == true);
}
