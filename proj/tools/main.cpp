// squeeze_probe: command-line front end for the dephasing-probe library.
//
// Subcommands: dynamics, measure, sweep, optimal, estimate, oracle, approx.
// Exit codes: 0 success, 2 unphysical state, 3 config error, 4 estimator
// warning promoted by --strict. Times are accepted in units of 1/omega_c;
// --omega-c rescales inputs only, all output is in the dimensionless units.
// SQUEEZE_PROBE_THREADS caps worker threads.

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "squeezeprobe/approx.hpp"
#include "squeezeprobe/coherence.hpp"
#include "squeezeprobe/covariance.hpp"
#include "squeezeprobe/estimator.hpp"
#include "squeezeprobe/io.hpp"
#include "squeezeprobe/mode_oracle.hpp"
#include "squeezeprobe/nonmarkov.hpp"
#include "squeezeprobe/numeric.hpp"
#include "squeezeprobe/schedule.hpp"

namespace sp = squeezeprobe;

namespace {

// Thrown when the requested Gaussian state itself is invalid (exit code 2, as
// opposed to configuration errors, which exit 3).
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string state = "epr";
    double r = 1.0, phi = 0.0, n1 = 0.0, n2 = 0.0;
    std::string covariance_file;

    double alpha1 = 1.0, alpha2 = 1.0, eps1 = 0.0, eps2 = 0.0, omega_c = 1.0;

    bool consecutive = false;
    double dt = 0.0, gap = 0.0;
    double t1_start = 0.0, t1_end = 0.0, t2_start = 0.0, t2_end = 0.0;

    int steps = 4000;
    double margin = 1e-3;
    std::string output;
    std::string config_file;  // consumed by the pre-scan; registered so CLI11 accepts it

    bool use_oracle = false, compare = false;
    int modes = 20000;
    double omega_max = 40.0;
    int samples = 200;

    double dt_min = 0.0, dt_max = 0.0;
    int dt_count = 60;
    int coarse = 96;
    std::string pair_label;

    std::string input_file;
    std::vector<double> bracket{0.0, 6.0};
    bool joint = false, strict = false;
    int coarse_points = 64;
    double r_tol = 1e-4, mismatch_threshold = 1e-2;
};

template <typename T>
T cfg_get(const nlohmann::json& cfg, const char* key, T fallback) {
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return fallback;
}

// Locate --config before CLI11 runs so its values become flag defaults
// (flags passed on the command line then win by overwriting them).
nlohmann::json prescan_config(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            path = argv[i + 1];
        } else if (arg.rfind("--config=", 0) == 0) {
            path = arg.substr(9);
        }
    }
    if (path.empty()) return nlohmann::json::object();
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    return nlohmann::json::parse(f);  // throws on malformed JSON
}

void apply_config(Options& o, const nlohmann::json& cfg) {
    o.state = cfg_get(cfg, "state", o.state);
    o.r = cfg_get(cfg, "r", o.r);
    o.phi = cfg_get(cfg, "phi", o.phi);
    o.n1 = cfg_get(cfg, "n1", o.n1);
    o.n2 = cfg_get(cfg, "n2", o.n2);
    o.covariance_file = cfg_get(cfg, "covariance", o.covariance_file);
    o.alpha1 = cfg_get(cfg, "alpha1", o.alpha1);
    o.alpha2 = cfg_get(cfg, "alpha2", o.alpha2);
    o.eps1 = cfg_get(cfg, "eps1", o.eps1);
    o.eps2 = cfg_get(cfg, "eps2", o.eps2);
    o.omega_c = cfg_get(cfg, "omega_c", o.omega_c);
    o.consecutive = cfg_get(cfg, "consecutive", o.consecutive);
    o.dt = cfg_get(cfg, "dt", o.dt);
    o.gap = cfg_get(cfg, "gap", o.gap);
    o.t1_start = cfg_get(cfg, "t1_start", o.t1_start);
    o.t1_end = cfg_get(cfg, "t1_end", o.t1_end);
    o.t2_start = cfg_get(cfg, "t2_start", o.t2_start);
    o.t2_end = cfg_get(cfg, "t2_end", o.t2_end);
    o.steps = cfg_get(cfg, "steps", o.steps);
    o.margin = cfg_get(cfg, "margin", o.margin);
    o.output = cfg_get(cfg, "output", o.output);
    o.use_oracle = cfg_get(cfg, "oracle", o.use_oracle);
    o.compare = cfg_get(cfg, "compare", o.compare);
    o.modes = cfg_get(cfg, "modes", o.modes);
    o.omega_max = cfg_get(cfg, "omega_max", o.omega_max);
    o.samples = cfg_get(cfg, "samples", o.samples);
    o.dt_min = cfg_get(cfg, "dt_min", o.dt_min);
    o.dt_max = cfg_get(cfg, "dt_max", o.dt_max);
    o.dt_count = cfg_get(cfg, "dt_count", o.dt_count);
    o.coarse = cfg_get(cfg, "coarse", o.coarse);
    o.pair_label = cfg_get(cfg, "pair", o.pair_label);
    o.input_file = cfg_get(cfg, "input", o.input_file);
    o.bracket = cfg_get(cfg, "bracket", o.bracket);
    o.joint = cfg_get(cfg, "joint", o.joint);
    o.strict = cfg_get(cfg, "strict", o.strict);
    o.coarse_points = cfg_get(cfg, "coarse_points", o.coarse_points);
    o.r_tol = cfg_get(cfg, "r_tol", o.r_tol);
    o.mismatch_threshold = cfg_get(cfg, "mismatch_threshold", o.mismatch_threshold);
}

void add_state_options(CLI::App* sub, Options& o) {
    sub->add_option("--state", o.state, "State kind: epr, mts, sts, custom");
    sub->add_option("--r", o.r, "Squeezing parameter");
    sub->add_option("--phi", o.phi, "Squeezing angle (sts)");
    sub->add_option("--n1", o.n1, "Mean photon number, mode 1");
    sub->add_option("--n2", o.n2, "Mean photon number, mode 2");
    sub->add_option("--covariance", o.covariance_file,
                    "JSON covariance file for --state custom");
    sub->add_option("--alpha1", o.alpha1, "Coupling strength, bath 1");
    sub->add_option("--alpha2", o.alpha2, "Coupling strength, bath 2");
    sub->add_option("--eps1", o.eps1, "Qubit 1 level splitting");
    sub->add_option("--eps2", o.eps2, "Qubit 2 level splitting");
    sub->add_option("--omega-c", o.omega_c,
                    "Cutoff frequency used to rescale input times (default 1)");
    sub->add_option("--config", o.config_file, "JSON file with flag defaults");
    sub->add_option("--output", o.output, "Write output to this file instead of stdout");
}

void add_schedule_options(CLI::App* sub, Options& o) {
    sub->add_flag("--consecutive", o.consecutive,
                  "Windows (0, dt) then (dt + gap, 2 dt + gap)");
    sub->add_option("--dt", o.dt, "Window duration for --consecutive");
    sub->add_option("--gap", o.gap, "Idle time between consecutive windows");
    sub->add_option("--t1-start", o.t1_start, "Window 1 switch-on time");
    sub->add_option("--t1-end", o.t1_end, "Window 1 switch-off time");
    sub->add_option("--t2-start", o.t2_start, "Window 2 switch-on time");
    sub->add_option("--t2-end", o.t2_end, "Window 2 switch-off time");
    sub->add_option("--steps", o.steps, "Grid points per window (default 4000)");
    sub->add_option("--margin", o.margin, "Time-grid margin past the last window");
}

sp::GaussianStateSpec make_state(const Options& o) {
    sp::GaussianStateSpec spec;
    if (o.state == "epr") {
        spec.kind = sp::StateKind::EPR;
    } else if (o.state == "mts") {
        spec.kind = sp::StateKind::MTS;
    } else if (o.state == "sts") {
        spec.kind = sp::StateKind::STS;
    } else if (o.state == "custom") {
        spec.kind = sp::StateKind::Custom;
    } else {
        throw std::invalid_argument("unknown state kind: " + o.state);
    }
    spec.r = o.r;
    spec.phi = o.phi;
    spec.n1 = o.n1;
    spec.n2 = o.n2;
    if (spec.kind == sp::StateKind::Custom) {
        if (o.covariance_file.empty()) {
            throw std::invalid_argument("--state custom requires --covariance FILE");
        }
        std::ifstream f(o.covariance_file);
        if (!f) throw std::invalid_argument("cannot open " + o.covariance_file);
        std::stringstream buf;
        buf << f.rdbuf();
        spec.custom = sp::io::covariance_from_json(buf.str());
    }
    return spec;
}

sp::TwoModeCovariance make_covariance(const sp::GaussianStateSpec& spec) {
    try {
        const sp::TwoModeCovariance S = spec.covariance();
        if (!sp::validate_physical(S)) {
            throw std::invalid_argument("covariance violates the uncertainty bound");
        }
        return S;
    } catch (const std::exception& e) {
        throw StateError(e.what());
    }
}

sp::BathSpec make_bath(const Options& o) {
    if (!(o.omega_c > 0.0)) throw std::invalid_argument("--omega-c must be positive");
    sp::BathSpec bath;
    bath.alpha1 = o.alpha1;
    bath.alpha2 = o.alpha2;
    bath.omega_c = 1.0;  // inputs are rescaled to dimensionless units below
    bath.eps1 = o.eps1 / o.omega_c;
    bath.eps2 = o.eps2 / o.omega_c;
    sp::validate_bath(bath);
    return bath;
}

sp::Schedule make_schedule(const Options& o) {
    const double wc = o.omega_c;
    if (o.consecutive || o.dt > 0.0) {
        if (!(o.dt > 0.0)) throw std::invalid_argument("--consecutive requires --dt > 0");
        return sp::consecutive_windows(o.dt * wc, o.gap * wc);
    }
    const sp::Schedule sched{o.t1_start * wc, o.t1_end * wc, o.t2_start * wc,
                             o.t2_end * wc};
    sp::validate_schedule(sched);
    return sched;
}

sp::TimeGridSpec make_grid(const Options& o) {
    return sp::TimeGridSpec{o.steps, o.margin};
}

int emit(const Options& o, const std::string& text) {
    if (o.output.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return 0;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot open output file %s\n", o.output.c_str());
        return 3;
    }
    f << text;
    return 0;
}

std::vector<double> sample_times(const Options& o, const sp::Schedule& sched) {
    if (o.samples < 2) throw std::invalid_argument("--samples must be >= 2");
    return sp::linspace(0.0, sched.t2_end + o.margin, static_cast<std::size_t>(o.samples));
}

int run_dynamics(const Options& o) {
    const sp::GaussianStateSpec spec = make_state(o);
    const sp::TwoModeCovariance S = make_covariance(spec);
    const sp::BathSpec bath = make_bath(o);
    const sp::Schedule sched = make_schedule(o);
    sp::CoherenceTrace trace;
    if (o.use_oracle) {
        trace = sp::oracle_trace(sample_times(o, sched), sched, bath, spec,
                                 {o.modes, o.omega_max});
    } else {
        trace = sp::coherence_trace(sp::build_time_grid(sched, make_grid(o)), sched, bath, S);
    }
    return emit(o, sp::io::trace_to_csv(trace));
}

int run_measure(const Options& o) {
    const sp::TwoModeCovariance S = make_covariance(make_state(o));
    const sp::NonMarkovResult res =
        sp::blp_measure(make_schedule(o), make_bath(o), S, make_grid(o));
    return emit(o, sp::io::nonmarkov_to_json(res));
}

int run_sweep(const Options& o) {
    const sp::TwoModeCovariance S = make_covariance(make_state(o));
    const sp::BathSpec bath = make_bath(o);
    if (!(o.dt_min > 0.0) || !(o.dt_max > o.dt_min) || o.dt_count < 2) {
        throw std::invalid_argument("sweep needs 0 < --dt-min < --dt-max and --dt-count >= 2");
    }
    const std::vector<double> dts = sp::linspace(
        o.dt_min * o.omega_c, o.dt_max * o.omega_c, static_cast<std::size_t>(o.dt_count));
    std::vector<sp::SweepPoint> points;
    if (o.pair_label.empty()) {
        points = sp::measure_vs_duration(bath, S, dts, o.gap * o.omega_c, make_grid(o));
    } else {
        points = sp::rephasing_vs_duration(bath, S, dts, sp::io::pair_from_string(o.pair_label),
                                           o.gap * o.omega_c, make_grid(o));
    }
    return emit(o, sp::io::sweep_to_csv(points));
}

int run_optimal(const Options& o) {
    const sp::TwoModeCovariance S = make_covariance(make_state(o));
    const sp::OptimalResult res =
        sp::optimal_duration(make_bath(o), S, o.dt_min * o.omega_c, o.dt_max * o.omega_c,
                             o.coarse, make_grid(o));
    if (res.on_edge) {
        std::fprintf(stderr,
                     "warning: maximum sits on the search-bracket edge; widen "
                     "[--dt-min, --dt-max]\n");
    }
    return emit(o, sp::io::optimal_to_json(res));
}

int run_estimate(const Options& o) {
    const sp::GaussianStateSpec spec = make_state(o);
    if (spec.kind == sp::StateKind::Custom) {
        throw std::invalid_argument("estimate needs a parametrized kind: epr, mts, or sts");
    }
    if (o.n1 < 0.0 || o.n2 < 0.0) throw StateError("negative photon number");
    if (o.input_file.empty()) throw std::invalid_argument("estimate requires --input FILE");
    std::ifstream f(o.input_file);
    if (!f) throw std::invalid_argument("cannot open " + o.input_file);
    std::stringstream buf;
    buf << f.rdbuf();
    std::vector<sp::Measurement> meas = sp::io::measurements_from_csv(buf.str());
    for (sp::Measurement& m : meas) m.delta_t *= o.omega_c;
    if (o.bracket.size() != 2) throw std::invalid_argument("--bracket needs two values");

    const sp::BathSpec bath = make_bath(o);
    sp::EstimateOptions opts;
    opts.coarse_points = o.coarse_points;
    opts.r_tol = o.r_tol;
    opts.mismatch_threshold = o.mismatch_threshold;
    opts.grid = make_grid(o);

    sp::EstimationResult res;
    if (o.joint) {
        res = sp::estimate_r_phi(meas, o.n1, o.n2, bath, {o.bracket[0], o.bracket[1]}, {},
                                 opts);
    } else {
        res = sp::estimate_r(meas, spec.kind, o.n1, o.n2, o.phi, bath,
                             {o.bracket[0], o.bracket[1]}, opts);
    }
    const int rc = emit(o, sp::io::estimate_to_json(res));
    if (rc != 0) return rc;
    if (o.strict && !res.warnings.empty()) {
        for (const std::string& w : res.warnings) {
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        }
        return 4;
    }
    return 0;
}

int run_oracle(const Options& o) {
    const sp::GaussianStateSpec spec = make_state(o);
    const sp::TwoModeCovariance S = make_covariance(spec);
    const sp::BathSpec bath = make_bath(o);
    const sp::Schedule sched = make_schedule(o);
    const std::vector<double> times = sample_times(o, sched);
    const sp::CoherenceTrace otrace =
        sp::oracle_trace(times, sched, bath, spec, {o.modes, o.omega_max});
    if (!o.compare) return emit(o, sp::io::trace_to_csv(otrace));
    const sp::CoherenceTrace closed = sp::coherence_trace(times, sched, bath, S);
    return emit(o, sp::io::compare_to_csv(otrace, closed));
}

int run_approx(const Options& o) {
    if (o.alpha1 != o.alpha2) {
        throw std::invalid_argument("approx requires equal couplings (--alpha1 == --alpha2)");
    }
    const sp::TwoModeCovariance S = make_covariance(make_state(o));
    const sp::Schedule sched = make_schedule(o);
    const sp::CoherenceTrace trace = sp::approx_trace(
        sp::build_time_grid(sched, make_grid(o)), sched, o.alpha1, 1.0, S);
    return emit(o, sp::io::trace_to_csv(trace));
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const StateError& e) {
        std::fprintf(stderr, "error: unphysical state: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    try {
        apply_config(o, prescan_config(argc, argv));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }

    CLI::App app{
        "squeeze_probe: switchable-dephasing probe of two-mode Gaussian environments.\n"
        "Times are in units of 1/omega_c; SQUEEZE_PROBE_THREADS caps parallelism."};
    app.require_subcommand(1);
    int rc = 0;

    CLI::App* dyn = app.add_subcommand(
        "dynamics", "Coherence-factor trace (closed form, or mode oracle with --oracle)");
    add_state_options(dyn, o);
    add_schedule_options(dyn, o);
    dyn->add_flag("--oracle", o.use_oracle, "Evaluate via the discretized mode sum");
    dyn->add_option("--modes", o.modes, "Oracle mode count");
    dyn->add_option("--omega-max", o.omega_max, "Oracle frequency cutoff");
    dyn->add_option("--samples", o.samples, "Oracle trace sample count");
    dyn->callback([&]() { rc = guarded([&]() { return run_dynamics(o); }); });

    CLI::App* mea = app.add_subcommand(
        "measure", "Information-backflow measure for one schedule (JSON)");
    add_state_options(mea, o);
    add_schedule_options(mea, o);
    mea->callback([&]() { rc = guarded([&]() { return run_measure(o); }); });

    CLI::App* swp = app.add_subcommand(
        "sweep", "Measure versus window duration (CSV)");
    add_state_options(swp, o);
    add_schedule_options(swp, o);
    swp->add_option("--dt-min", o.dt_min, "Smallest window duration");
    swp->add_option("--dt-max", o.dt_max, "Largest window duration");
    swp->add_option("--dt-count", o.dt_count, "Number of sweep points");
    swp->add_option("--pair", o.pair_label, "Fix the Bell pair (I or II)");
    swp->callback([&]() { rc = guarded([&]() { return run_sweep(o); }); });

    CLI::App* opt = app.add_subcommand(
        "optimal", "Window duration maximizing the measure (JSON)");
    add_state_options(opt, o);
    add_schedule_options(opt, o);
    opt->add_option("--dt-min", o.dt_min, "Search bracket lower edge");
    opt->add_option("--dt-max", o.dt_max, "Search bracket upper edge");
    opt->add_option("--coarse", o.coarse, "Coarse scan points");
    opt->callback([&]() { rc = guarded([&]() { return run_optimal(o); }); });

    CLI::App* est = app.add_subcommand(
        "estimate", "Infer squeezing from measured rephasing data (JSON)");
    add_state_options(est, o);
    add_schedule_options(est, o);
    est->add_option("--input", o.input_file, "Measurement CSV: delta_t,observed,pair");
    est->add_option("--bracket", o.bracket, "Squeezing search bracket")->expected(2);
    est->add_flag("--joint", o.joint, "Estimate the angle too (sts)");
    est->add_flag("--strict", o.strict, "Exit 4 when the fit raises warnings");
    est->add_option("--coarse-points", o.coarse_points, "Coarse scan points");
    est->add_option("--r-tol", o.r_tol, "Refinement tolerance");
    est->add_option("--mismatch-threshold", o.mismatch_threshold,
                    "Residual level that triggers a warning");
    est->callback([&]() { rc = guarded([&]() { return run_estimate(o); }); });

    CLI::App* orc = app.add_subcommand(
        "oracle", "Mode-sum trace; --compare adds closed-form deviations");
    add_state_options(orc, o);
    add_schedule_options(orc, o);
    orc->add_flag("--compare", o.compare, "Append deviation column and summary");
    orc->add_option("--modes", o.modes, "Mode count");
    orc->add_option("--omega-max", o.omega_max, "Frequency cutoff");
    orc->add_option("--samples", o.samples, "Trace sample count");
    orc->callback([&]() { rc = guarded([&]() { return run_oracle(o); }); });

    CLI::App* apx = app.add_subcommand(
        "approx", "Short-time Gaussian approximants (CSV, same schema as dynamics)");
    add_state_options(apx, o);
    add_schedule_options(apx, o);
    apx->callback([&]() { rc = guarded([&]() { return run_approx(o); }); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }
    return rc;
}
