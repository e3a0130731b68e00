#include "ocmdp/cli.hpp"

#include "ocmdp/approx.hpp"
#include "ocmdp/bounds.hpp"
#include "ocmdp/hardness.hpp"
#include "ocmdp/oracle.hpp"
#include "ocmdp/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace ocmdp::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw UsageError("cannot write " + path);
    o << text;
}

Rational rational_arg(const std::string& flag, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError(flag + ": expected an integer or a/b, got '" + text + "'");
    }
}

BigInt counter_arg(const std::string& text) {
    BigInt c;
    try {
        c = parse_bigint(text);
    } catch (const std::exception&) {
        throw UsageError("counter: expected a nonnegative integer, got '" + text + "'");
    }
    if (c < 0) throw UsageError("counter must be nonnegative");
    return c;
}

int state_arg(const OcMdp& a, const std::string& name) {
    int q = a.find_state(name);
    if (q < 0) throw UsageError("unknown state '" + name + "'");
    return q;
}

/// Small integers as JSON numbers, larger ones as strings.
Json big_json(const BigInt& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

Json ext_json(const ExtRational& v) { return v.str(); }

std::string names(const OcMdp& a, const std::vector<bool>& set) {
    std::string s;
    for (int q = 0; q < a.num_states(); ++q)
        if (set[q]) s += (s.empty() ? "" : " ") + a.state(q).name;
    return s;
}

struct Options {
    bool json = false;
    std::string model, state, counter, eps, cap_k_text, strategy, out_path, dimacs, upper_slope, upper_intercept;
    long samples = 1000, step_cap = 100000, cap = 0, sweeps = 0;
    int pump = 0;
    std::uint64_t seed = 1;
    bool unit_counter = false, binary_split = false, summary_only = false;
};

std::optional<long> cap_k_of(const Options& o) {
    if (o.cap_k_text.empty()) return std::nullopt;
    BigInt v = counter_arg(o.cap_k_text);
    if (!v.fits_slong_p()) throw UsageError("--cap-k too large");
    return v.get_si();
}

int cmd_validate(const Options& o, std::ostream& out) {
    OcMdp a = parse_ocmdp(read_file(o.model));
    if (o.json)
        out << Json{{"valid", true}, {"states", a.num_states()}, {"rules", a.num_rules()}}.dump() << "\n";
    else
        out << "ok " << a.num_states() << " states " << a.num_rules() << " rules\n";
    return kExitOk;
}

int cmd_info(const Options& o, std::ostream& out) {
    OcMdp a = parse_ocmdp(read_file(o.model));
    QfinResult qf = compute_qfin(a);
    const auto& dec = qf.dec;
    Json j;
    j["states"] = a.num_states();
    j["rules"] = a.num_rules();
    j["p_min"] = to_string(a.p_min());
    Json mecs = Json::array();
    for (size_t c = 0; c < dec.mecs.size(); ++c) {
        Json names_c = Json::array();
        for (int q : dec.mecs[c]) names_c.push_back(a.state(q).name);
        mecs.push_back({{"states", names_c}, {"trend", to_string(dec.trend[c])}, {"V", to_string(qf.mecs[c].ts.V)}});
    }
    j["mecs"] = mecs;
    j["H"] = names(a, dec.H);
    j["Q_fin"] = names(a, dec.Q_fin);
    Json tq = Json::object();
    for (int q = 0; q < a.num_states(); ++q)
        if (dec.t_q[q]) tq[a.state(q).name] = to_string(*dec.t_q[q]);
    j["t_q"] = tq;
    const bool sc = dec.mecs.size() == 1 && static_cast<int>(dec.mecs[0].size()) == a.num_states();
    if (sc && dec.trend[0] < 0) j["U"] = to_string(u_strongly_connected(qf.mecs[0].ts, a));
    if (std::find(dec.Q_fin.begin(), dec.Q_fin.end(), true) != dec.Q_fin.end()) {
        TqResult t = trends_tq(a, dec);
        auto sigma = general_sigma(a, dec, qf.mecs, t);
        BoundsTable bt = general_constants(a, dec, qf.mecs, t, sigma);
        j["bounds"] = {{"xbar0", to_string(bt.xbar0)},    {"V", to_string(bt.V)},
                       {"U_scc", to_string(bt.U_scc)},    {"tA", bt.tA},
                       {"U_gen", to_string(bt.U_gen)},    {"K", to_string(bt.K_const)},
                       {"K'", to_string(bt.Kp_const)},    {"L", to_string(bt.L_const)}};
    }
    if (o.json) {
        out << j.dump() << "\n";
        return kExitOk;
    }
    out << "states " << a.num_states() << "\nrules " << a.num_rules() << "\np_min " << to_string(a.p_min()) << "\n";
    for (size_t c = 0; c < dec.mecs.size(); ++c) {
        out << "mec " << c << " trend " << to_string(dec.trend[c]) << " V " << to_string(qf.mecs[c].ts.V) << " :";
        for (int q : dec.mecs[c]) out << " " << a.state(q).name;
        out << "\n";
    }
    out << "H " << names(a, dec.H) << "\nQ_fin " << names(a, dec.Q_fin) << "\n";
    for (auto& [k, v] : j["t_q"].items()) out << "t_q " << k << " " << v.get<std::string>() << "\n";
    if (j.contains("U")) out << "U " << j["U"].get<std::string>() << "\n";
    if (j.contains("bounds"))
        for (auto& [k, v] : j["bounds"].items())
            out << "bound " << k << " " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    return kExitOk;
}

int cmd_finite(const Options& o, std::ostream& out) {
    OcMdp a = parse_ocmdp(read_file(o.model));
    Config c{state_arg(a, o.state), counter_arg(o.counter)};
    bool fin = is_value_finite(a, c);
    if (o.json)
        out << Json{{"state", o.state}, {"counter", big_json(c.counter)}, {"finite", fin}}.dump() << "\n";
    else
        out << (fin ? "finite" : "infinite") << "\n";
    return kExitOk;
}

int cmd_approx(const Options& o, std::ostream& out) {
    OcMdp a = parse_ocmdp(read_file(o.model));
    Config c{state_arg(a, o.state), counter_arg(o.counter)};
    Rational eps = rational_arg("--eps", o.eps);
    if (eps <= 0) throw UsageError("--eps must be positive");
    ApproxResult r = approx_value(a, c, eps, cap_k_of(o));
    std::string strategy = r.strategy ? export_strategy(a, *r.strategy) : "";
    if (!o.out_path.empty() && r.strategy) write_file(o.out_path, strategy);
    if (o.json) {
        Json j{{"state", o.state}, {"counter", big_json(c.counter)}, {"eps", to_string(eps)},
               {"value", ext_json(r.value)}, {"achieved_eps", ext_json(r.achieved_eps)}};
        if (r.strategy) {
            const auto& p = r.strategy->provenance;
            j["mode"] = p.mode;
            j["k_required"] = big_json(p.k_required);
            j["k_used"] = big_json(p.k_used);
            j["threshold"] = r.strategy->threshold();
        }
        out << j.dump() << "\n";
        return kExitOk;
    }
    out << "# value " << r.value.str() << "\n";
    if (r.value.is_finite()) out << "# value_decimal " << std::setprecision(12) << to_double(r.value.value()) << "\n";
    out << "# achieved_eps " << r.achieved_eps.str() << "\n";
    if (r.strategy && o.out_path.empty()) out << strategy;
    return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    OcMdp a = parse_ocmdp(read_file(o.model));
    Config c{state_arg(a, o.state), counter_arg(o.counter)};
    if (o.samples < 1) throw UsageError("-n must be positive");
    if (o.step_cap < 1) throw UsageError("--cap must be positive");
    FiniteStrategy s;
    if (o.strategy == "builtin:first")
        s = counterless(a, std::vector<int>(a.num_states(), -1));
    else
        s = import_strategy(a, read_file(o.strategy));
    Simulator sim(a);
    if (!o.summary_only && !o.json) out << "seed,terminated,steps,switches\n";
    for (long r = 0; r < o.samples; ++r) {
        std::uint64_t seed = o.seed + static_cast<std::uint64_t>(r);
        RunOutcome run = sim.run(s, c, seed, o.step_cap);
        if (o.summary_only) continue;
        if (o.json)
            out << Json{{"seed", seed}, {"terminated", run.terminated}, {"steps", run.steps},
                        {"switches", run.switches}}.dump()
                << "\n";
        else
            out << seed << "," << (run.terminated ? 1 : 0) << "," << run.steps << "," << run.switches << "\n";
    }
    Estimate e = estimate_expected_T(a, s, c, o.samples, o.step_cap, o.seed);
    const long terminated = e.n, capped = e.cap_hits;
    if (o.json) {
        out << Json{{"runs", o.samples}, {"terminated", terminated}, {"capped", capped}, {"mean", e.mean},
                    {"stderr", e.stderr_}, {"prng", std::string(kPrngName)}}.dump()
            << "\n";
    } else {
        std::ostringstream line;
        line << std::setprecision(10) << "# runs " << o.samples << " terminated " << terminated << " capped " << capped
             << " mean " << e.mean << " stderr " << e.stderr_ << " prng " << kPrngName << "\n";
        out << line.str();
    }
    return kExitOk;
}

int cmd_reduce(const Options& o, std::ostream& out) {
    CnfFormula phi = parse_dimacs(read_file(o.dimacs));
    ReductionOptions ro{o.binary_split};
    Json meta;
    std::string model;
    auto base_meta = [&](const ReductionOutput& r) {
        meta["vars"] = phi.num_vars;
        meta["clauses"] = r.clauses;
        meta["K"] = big_json(r.K);
        meta["N"] = big_json(r.N);
        meta["p_state"] = r.A.state(r.p_state).name;
        meta["relays"] = r.relays;
        meta["binary_split"] = o.binary_split;
        if (o.binary_split) meta["split_states"] = r.split_states;
    };
    if (o.unit_counter) {
        UnitCounterOutput u = reduce_sat_unit_counter(phi, ro);
        base_meta(u.base);
        meta["states"] = u.B.num_states();
        meta["rules"] = u.B.num_rules();
        meta["m2"] = u.m2;
        meta["unsat_value"] = big_json(u.unsat_value);
        meta["start_state"] = u.B.state(u.q1_state).name;
        meta["start_counter"] = 1;
        model = serialize_ocmdp(u.B);
    } else {
        ReductionOutput r = reduce_sat(phi, ro);
        base_meta(r);
        meta["states"] = r.A.num_states();
        meta["rules"] = r.A.num_rules();
        meta["start_state"] = r.A.state(r.p_state).name;
        meta["start_counter"] = big_json(r.K);
        model = serialize_ocmdp(r.A);
    }
    if (!o.out_path.empty()) {
        write_file(o.out_path, model);
        write_file(o.out_path + ".json", meta.dump(2) + "\n");
        out << meta.dump() << "\n";
    } else {
        out << "# meta: " << meta.dump() << "\n" << model;
    }
    return kExitOk;
}

int cmd_gadget(const Options& o, std::ostream& out) {
    if (o.pump < 1) throw UsageError("--pump must be at least 1");
    OcMdp g = chain_gadget(o.pump);
    Json meta{{"k", o.pump}, {"states", g.num_states()}, {"rules", g.num_rules()},
              {"start_state", "p" + std::to_string(o.pump)}, {"start_counter", 1}, {"sink", "p0"}};
    if (!o.out_path.empty()) {
        write_file(o.out_path, serialize_ocmdp(g));
        out << meta.dump() << "\n";
    } else {
        out << "# meta: " << meta.dump() << "\n" << serialize_ocmdp(g);
    }
    return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
    OcMdp a = parse_ocmdp(read_file(o.model));
    if (o.cap < 1) throw UsageError("--cap must be at least 1");
    if (o.sweeps < 0) throw UsageError("--sweeps must be nonnegative");
    AffineSeed seed(a.num_states());
    if (!o.upper_slope.empty() || !o.upper_intercept.empty()) {
        Rational slope = o.upper_slope.empty() ? Rational(0) : rational_arg("--upper-slope", o.upper_slope);
        Rational icpt = o.upper_intercept.empty() ? Rational(0) : rational_arg("--upper-intercept", o.upper_intercept);
        for (auto& s : seed) s = std::make_pair(slope, icpt);
    }
    Bracket b = bracket_values(a, o.cap, o.sweeps, seed);
    auto fix = lower_fixpoint(a, o.cap);
    if (!o.json) out << "state,counter,lower,upper,fixpoint\n";
    for (long j = 0; j <= o.cap; ++j)
        for (int q = 0; q < a.num_states(); ++q) {
            if (o.json)
                out << Json{{"state", a.state(q).name}, {"counter", j}, {"lower", to_string(b.lower[j][q])},
                            {"upper", b.upper[j][q].str()}, {"fixpoint", fix[j][q].str()}}.dump()
                    << "\n";
            else
                out << a.state(q).name << "," << j << "," << to_string(b.lower[j][q]) << "," << b.upper[j][q].str()
                    << "," << fix[j][q].str() << "\n";
        }
    return kExitOk;
}

void error_line(std::ostream& err, const std::string& kind, const std::string& message, int line = 0) {
    Json j{{"error", kind}, {"message", message}};
    if (line > 0) j["line"] = line;
    err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Solver suite for one-counter MDPs: finiteness, approximation, simulation, hardness instances.",
                 "ocmdp"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "Machine-readable JSON-lines output");

    auto* validate = app.add_subcommand("validate", "Parse and validate a model");
    validate->add_option("model", o.model, "Model file (- for stdin)")->required();

    auto* info = app.add_subcommand("info", "MECs, trends, Q_fin, t_q and bound constants");
    info->add_option("model", o.model, "Model file")->required();

    auto* finite = app.add_subcommand("finite", "Decide whether Val(q(i)) is finite");
    finite->add_option("model", o.model, "Model file")->required();
    finite->add_option("state", o.state, "Control state")->required();
    finite->add_option("counter", o.counter, "Counter value")->required();

    auto* approx = app.add_subcommand("approx", "Approximate Val(q(i)) and export an eps-optimal strategy");
    approx->add_option("model", o.model, "Model file")->required();
    approx->add_option("state", o.state, "Control state")->required();
    approx->add_option("counter", o.counter, "Counter value")->required();
    approx->add_option("--eps", o.eps, "Absolute error (integer or a/b)")->required();
    approx->add_option("--cap-k", o.cap_k_text, "Upper limit on the truncation height k");
    approx->add_option("--out", o.out_path, "Write the strategy here instead of stdout");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs under a strategy");
    simulate->add_option("model", o.model, "Model file")->required();
    simulate->add_option("strategy", o.strategy, "Strategy file or builtin:first")->required();
    simulate->add_option("state", o.state, "Control state")->required();
    simulate->add_option("counter", o.counter, "Counter value")->required();
    simulate->add_option("-n", o.samples, "Number of runs");
    simulate->add_option("--seed", o.seed, "Seed of the first run; run r uses seed + r");
    simulate->add_option("--cap", o.step_cap, "Step cap per run");
    simulate->add_flag("--summary-only", o.summary_only, "Only print the summary line");

    auto* reduce = app.add_subcommand("reduce-sat", "Generate the counter instance of a CNF formula");
    reduce->add_option("dimacs", o.dimacs, "DIMACS CNF file")->required();
    reduce->add_flag("--unit-counter", o.unit_counter, "Prefix the pump gadget (start counter 1)");
    reduce->add_flag("--binary-split", o.binary_split, "Use only 1/2 coins in the clause fan-out");
    reduce->add_option("--out", o.out_path, "Write the model here and metadata to <out>.json");

    auto* gadget = app.add_subcommand("gadget", "Emit the pump gadget G_k");
    gadget->add_option("--pump", o.pump, "k")->required();
    gadget->add_option("--out", o.out_path, "Write the model here");

    auto* oracle = app.add_subcommand("oracle", "Exact value brackets on counters 0..cap");
    oracle->add_option("model", o.model, "Model file")->required();
    oracle->add_option("--cap", o.cap, "Counter cap")->required();
    oracle->add_option("--sweeps", o.sweeps, "Value iteration sweeps")->required();
    oracle->add_option("--upper-slope", o.upper_slope, "Upper seed slope for every state");
    oracle->add_option("--upper-intercept", o.upper_intercept, "Upper seed intercept for every state");

    std::vector<std::string> argv_store{"ocmdp"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        error_line(err, "usage", e.what());
        return kExitUsage;
    }

    try {
        if (*validate) return cmd_validate(o, out);
        if (*info) return cmd_info(o, out);
        if (*finite) return cmd_finite(o, out);
        if (*approx) return cmd_approx(o, out);
        if (*simulate) return cmd_simulate(o, out);
        if (*reduce) return cmd_reduce(o, out);
        if (*gadget) return cmd_gadget(o, out);
        if (*oracle) return cmd_oracle(o, out);
    } catch (const UsageError& e) {
        error_line(err, "usage", e.what());
        return kExitUsage;
    } catch (const ModelError& e) {
        error_line(err, "validation", e.what(), e.line());
        return kExitInvalid;
    } catch (const std::exception& e) {
        error_line(err, "failed", e.what());
        return kExitInvalid;
    }
    return kExitUsage;
}

}  // namespace ocmdp::cli
