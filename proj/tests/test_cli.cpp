#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

// End-to-end checks against the installed binary: exit codes, byte stability,
// config/flag precedence, and the unit-rescaling contract.

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = {}) {
    const std::string err_path = "/tmp/sp_cli_stderr.txt";
    const std::string cmd =
        env_prefix + std::string(CLI_BINARY_PATH) + " " + args + " 2>" + err_path;
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, n);
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err(err_path);
    std::stringstream err_buf;
    err_buf << err.rdbuf();
    res.err = err_buf.str();
    return res;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    REQUIRE(f.good());
    f << content;
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

// Five-point rephasing curve of an EPR r=3 state, pair II, used as synthetic
// measurement data for the estimate subcommand.
const char* kSynthCsv =
    "delta_t,observed,pair\n"
    "0.01,0.0394406435563,II\n"
    "0.0375,0.41428682623,II\n"
    "0.065,0.67093946307,II\n"
    "0.0925,0.517145134526,II\n"
    "0.12,0.211816044615,II\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("dynamics emits the trace schema, byte-stable across runs") {
    const std::string args = "dynamics --state epr --r 5 --consecutive --dt 0.025 --steps 200";
    const RunResult a = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(first_line(a.out) == "t,abs_k1,abs_k2,abs_k12,abs_l12,re_k12,im_k12,re_l12,im_l12");

    // Past both windows the rephased coherence sits on its plateau.
    const std::string tail = a.out.substr(0, a.out.size() - 1);  // drop final \n
    const std::string last = tail.substr(tail.rfind('\n') + 1);
    const std::vector<std::string> fields = split(last, ',');
    REQUIRE(fields.size() == 9);
    CHECK(std::stod(fields[0]) == doctest::Approx(0.051).epsilon(1e-12));
    CHECK(std::stod(fields[4]) == doctest::Approx(0.814298903717).epsilon(1e-9));

    const RunResult b = run_cli(args);
    CHECK(b.code == 0);
    CHECK(b.out == a.out);
}

TEST_CASE("measure reproduces the frozen backflow value") {
    const RunResult res = run_cli("measure --state mts --r 4 --consecutive --dt 0.025");
    REQUIRE(res.code == 0);
    CHECK(res.out.rfind("{\"measure\": 0.835332410913, \"best_pair\": \"II\"", 0) == 0);

    const RunResult gap =
        run_cli("measure --state epr --r 3 --consecutive --dt 0.025 --gap 0.01");
    CHECK(gap.code == 0);
    CHECK(gap.out.rfind("{\"measure\": ", 0) == 0);
    CHECK(gap.out != run_cli("measure --state epr --r 3 --consecutive --dt 0.025").out);
}

TEST_CASE("exit codes separate unphysical states from config errors") {
    CHECK(run_cli("measure --state sts --r 1 --n1 -1 --consecutive --dt 0.025").code == 2);
    CHECK(run_cli("measure --state bogus --consecutive --dt 0.025").code == 3);
    CHECK(run_cli("").code == 3);                      // missing subcommand
    CHECK(run_cli("measure --no-such-flag 1").code == 3);
    CHECK(run_cli("sweep --state epr --dt-min 0.1 --dt-max 0.05").code == 3);

    // The closed form is derived for a window-1 start at zero; shifted windows
    // are the oracle's job.
    const std::string shifted =
        "--t1-start 0.5 --t1-end 0.55 --t2-start 0.55 --t2-end 0.6";
    CHECK(run_cli("dynamics " + shifted).code == 3);
    const RunResult orc = run_cli("dynamics --oracle --modes 2000 --samples 20 " + shifted);
    CHECK(orc.code == 0);
}

TEST_CASE("custom covariance files") {
    write_file("/tmp/sp_cli_epr.json",
               "{\"a\": 1.8810978455418157, \"b\": 1.8810978455418157, "
               "\"c_plus\": 1.8134302039235092, \"c_minus\": -1.8134302039235092}\n");
    const RunResult ok = run_cli(
        "measure --state custom --covariance /tmp/sp_cli_epr.json --consecutive --dt 0.05");
    CHECK(ok.code == 0);

    write_file("/tmp/sp_cli_bad.json",
               "{\"a\": 0.5, \"b\": 0.5, \"c_plus\": 0.5, \"c_minus\": -0.5}\n");
    const RunResult bad = run_cli(
        "measure --state custom --covariance /tmp/sp_cli_bad.json --consecutive --dt 0.05");
    CHECK(bad.code == 2);
    CHECK(bad.err.find("unphysical") != std::string::npos);

    CHECK(run_cli("measure --state custom --covariance /tmp/sp_cli_missing.json "
                  "--consecutive --dt 0.05")
              .code == 3);
    CHECK(run_cli("measure --state custom --consecutive --dt 0.05").code == 3);
}

TEST_CASE("config file supplies defaults, flags win") {
    write_file("/tmp/sp_cli_cfg.json",
               "{\"state\": \"mts\", \"r\": 4.0, \"consecutive\": true, \"dt\": 0.025}\n");
    const RunResult from_cfg = run_cli("measure --config /tmp/sp_cli_cfg.json");
    const RunResult from_flags = run_cli("measure --state mts --r 4 --consecutive --dt 0.025");
    REQUIRE(from_cfg.code == 0);
    CHECK(from_cfg.out == from_flags.out);

    const RunResult overridden = run_cli("measure --config /tmp/sp_cli_cfg.json --r 3");
    const RunResult direct = run_cli("measure --state mts --r 3 --consecutive --dt 0.025");
    CHECK(overridden.out == direct.out);
    CHECK(overridden.out != from_cfg.out);

    write_file("/tmp/sp_cli_cfg_bad.json", "{not json\n");
    CHECK(run_cli("measure --config /tmp/sp_cli_cfg_bad.json").code == 3);
    CHECK(run_cli("measure --config /tmp/sp_cli_cfg_nowhere.json").code == 3);
}

TEST_CASE("omega-c rescales the input times and splittings") {
    const RunResult scaled = run_cli(
        "dynamics --state epr --r 2 --consecutive --dt 0.05 --eps1 0.6 --omega-c 2 "
        "--steps 150");
    const RunResult direct = run_cli(
        "dynamics --state epr --r 2 --consecutive --dt 0.1 --eps1 0.3 --steps 150");
    REQUIRE(scaled.code == 0);
    CHECK(scaled.out == direct.out);
    CHECK(run_cli("measure --state epr --consecutive --dt 0.025 --omega-c 0").code == 3);
}

TEST_CASE("estimate subcommand") {
    write_file("/tmp/sp_cli_synth.csv", kSynthCsv);

    const RunResult fit = run_cli(
        "estimate --state epr --input /tmp/sp_cli_synth.csv --bracket 0 6");
    REQUIRE(fit.code == 0);
    CHECK(fit.out.rfind("{\"r_hat\": 3.0000", 0) == 0);
    CHECK(fit.out.find("\"phi_hat\": null") != std::string::npos);
    CHECK(fit.out.find("\"warnings\": []") != std::string::npos);

    // A bracket that excludes the truth pins the edge and raises a warning;
    // --strict promotes it to exit 4 after still emitting the JSON.
    const RunResult edge = run_cli(
        "estimate --state epr --input /tmp/sp_cli_synth.csv --bracket 0 1");
    CHECK(edge.code == 0);
    CHECK(edge.out.rfind("{\"r_hat\": 1, ", 0) == 0);
    CHECK(edge.out.find("bracket edge") != std::string::npos);

    const RunResult strict = run_cli(
        "estimate --state epr --input /tmp/sp_cli_synth.csv --bracket 0 1 --strict");
    CHECK(strict.code == 4);
    CHECK(strict.out.rfind("{\"r_hat\": 1, ", 0) == 0);
    CHECK(strict.err.find("warning:") != std::string::npos);

    CHECK(run_cli("estimate --state epr --bracket 0 6").code == 3);  // no input
    CHECK(run_cli("estimate --state custom --input /tmp/sp_cli_synth.csv").code == 3);
    CHECK(run_cli("estimate --state epr --n1 -1 --input /tmp/sp_cli_synth.csv").code == 2);
}

TEST_CASE("thread cap leaves the bytes unchanged") {
    const std::string args =
        "sweep --state epr --r 3 --dt-min 0.02 --dt-max 0.06 --dt-count 5 --steps 500";
    const RunResult one = run_cli(args, "SQUEEZE_PROBE_THREADS=1 ");
    const RunResult three = run_cli(args, "SQUEEZE_PROBE_THREADS=3 ");
    REQUIRE(one.code == 0);
    REQUIRE(three.code == 0);
    CHECK(first_line(one.out) == "delta_t,measure,best_pair");
    CHECK(one.out == three.out);
}

TEST_CASE("output flag writes the same bytes to a file") {
    const std::string args = "measure --state epr --r 3 --consecutive --dt 0.025";
    const RunResult direct = run_cli(args);
    const RunResult to_file = run_cli(args + " --output /tmp/sp_cli_out.json");
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    std::ifstream f("/tmp/sp_cli_out.json", std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    CHECK(buf.str() == direct.out);
}

TEST_CASE("oracle comparison stays within discretization error") {
    const RunResult res = run_cli(
        "oracle --compare --state sts --r 1 --phi 0.7853981633974483 --consecutive "
        "--dt 0.025 --modes 4000 --samples 25");
    REQUIRE(res.code == 0);
    const std::string tail = res.out.substr(0, res.out.size() - 1);
    const std::string last = tail.substr(tail.rfind('\n') + 1);
    REQUIRE(last.rfind("# max_deviation = ", 0) == 0);
    const double dev = std::stod(last.substr(last.rfind('=') + 1));
    CHECK(dev < 1e-3);
    CHECK(dev >= 0.0);
    CHECK(first_line(res.out) ==
          "t,abs_k1,abs_k2,abs_k12,abs_l12,re_k12,im_k12,re_l12,im_l12,deviation");
}

}  // TEST_SUITE
