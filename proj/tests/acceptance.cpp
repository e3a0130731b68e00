#include "brute.hpp"
#include "generators.hpp"
#include "ocmdp/approx.hpp"
#include "ocmdp/bounds.hpp"
#include "ocmdp/cli.hpp"
#include "ocmdp/finmdp.hpp"
#include "ocmdp/hardness.hpp"
#include "ocmdp/lp.hpp"
#include "ocmdp/oracle.hpp"
#include "ocmdp/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <unistd.h>

using namespace ocmdp;
using testsupport::Rng;

namespace {

// Pinned tolerances and corpus sizes.
constexpr int kTrendCorpus = 60;
constexpr double kTrendSeconds = 10.0;
constexpr long kSandwichMaxI = 25;
constexpr long kSandwichCapMargin = 40;
constexpr long kDivergenceThreshold = 10000;
constexpr long kDivergenceMaxCap = 1L << 16;
constexpr int kPositiveCorpus = 8;
const Rational kRuinEps(1, 100);
constexpr long kRuinCapK = 400;
constexpr long kSimRuns = 100000;
constexpr long kSimStepCap = 1000000;
constexpr double kSigmas = 3.0;
constexpr double kRuinSeconds = 60.0;
constexpr int kGeneralCorpus = 100;
constexpr long kGeneralDivergenceThreshold = 50;
constexpr long kGeneralDivergenceMaxCap = 1024;
constexpr long kConvergenceCap = 256;
constexpr long kConvergenceMaxCap = 2048;
const Rational kConvergenceTol(1, 100);
constexpr int kSatFormulas = 12;
constexpr double kSatSeconds = 120.0;
constexpr long kUnitCounterCap = 64;
const Rational kUnitCounterTarget(15);
const Rational kUnitCounterWidth(1, 16);
constexpr long kBellmanMinAssertions = 1000;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

std::string dstr(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

std::string rstr(const Rational& r) { return dstr(to_double(r)); }

std::string estr(const ExtRational& e) { return e.is_inf() ? "inf" : rstr(e.value()); }

std::vector<OcMdp> strongly_connected_corpus(std::uint64_t seed, int count) {
    Rng rng(seed);
    std::vector<OcMdp> out;
    for (int i = 0; i < count; ++i) out.push_back(testsupport::random_strongly_connected(rng, 6, 3, 8));
    return out;
}

/// Random general models with at least two MECs.
std::vector<OcMdp> multi_mec_corpus(std::uint64_t seed, int count) {
    Rng rng(seed);
    std::vector<OcMdp> out;
    while (static_cast<int>(out.size()) < count) {
        auto a = testsupport::random_general(rng, 8, 3, 8);
        if (mec_decompose(underlying_mdp(a)).mecs.size() >= 2) out.push_back(std::move(a));
    }
    return out;
}

Outcome trend_exactness() {
    auto t0 = std::chrono::steady_clock::now();
    auto corpus = strongly_connected_corpus(1001, kTrendCorpus);
    int mismatches = 0, below = 0;
    for (const auto& a : corpus) {
        auto ts = trend_solution(a);
        if (ts.xbar != testsupport::trend_by_vertices(a)) ++mismatches;
        if (ts.xbar < -1) ++below;
    }
    double secs = seconds_since(t0);
    Outcome o;
    o.pass = mismatches == 0 && below == 0 && secs < kTrendSeconds;
    o.detail = std::to_string(corpus.size()) + " instances, " + std::to_string(mismatches) + " mismatches, " +
               std::to_string(below) + " below -1, " + dstr(secs) + " s";
    return o;
}

Outcome sandwich() {
    auto corpus = strongly_connected_corpus(2002, kTrendCorpus);
    for (const auto& down : {Rational(2, 3), Rational(3, 4), Rational(5, 8)}) corpus.push_back(testsupport::twin_walk(down));
    int instances = 0;
    long checks = 0, violations = 0;
    for (const auto& a : corpus) {
        auto ts = trend_solution(a);
        if (ts.xbar >= 0) continue;
        ++instances;
        Rational x = -ts.xbar;
        Rational U = u_strongly_connected(ts, a);
        const long cap = kSandwichMaxI + kSandwichCapMargin;
        auto lower = lower_fixpoint(a, cap);
        std::vector<ExtRational> boundary(a.num_states(), ExtRational(Rational((cap + U) / x)));
        auto upper = exact_small_solve(a, cap, boundary);
        for (long i = 0; i <= kSandwichMaxI; ++i)
            for (int q = 0; q < a.num_states(); ++q) {
                ++checks;
                Rational lo_bound = (i - ts.V) / x, hi_bound = (i + U) / x;
                bool ok = upper[i][q] >= ExtRational(lo_bound) && lower[i][q] <= ExtRational(hi_bound) &&
                          lower[i][q] <= upper[i][q];
                if (!ok) ++violations;
            }
    }
    Outcome o;
    o.pass = violations == 0 && instances > 0;
    o.detail = std::to_string(instances) + " negative-trend instances, " + std::to_string(checks) + " checks, " +
               std::to_string(violations) + " violations";
    return o;
}

Outcome infinite_values() {
    std::vector<OcMdp> corpus{testsupport::twin_walk(Rational(1, 2))};
    Rng rng(3003);
    while (static_cast<int>(corpus.size()) < kPositiveCorpus + 1) {
        auto a = testsupport::random_strongly_connected(rng, 6, 3, 8);
        if (trend_solution(a).xbar >= 0) corpus.push_back(std::move(a));
    }
    long disagreements = 0, checks = 0, certified = 0;
    long max_cap_used = 0;
    for (const auto& a : corpus) {
        const long n = a.num_states();
        auto qf = compute_qfin(a);
        std::vector<BigInt> counters;
        for (long i = n; i <= n + 10; ++i) counters.emplace_back(i);
        counters.emplace_back(1000000);
        counters.push_back(BigInt("1000000000000000000000000000000"));
        for (int q = 0; q < n; ++q)
            for (const auto& i : counters) {
                ++checks;
                if (is_value_finite(a, qf, Config{q, i})) ++disagreements;
            }
        auto d = divergence_certificate(a, Config{0, BigInt(n)}, Rational(kDivergenceThreshold), kDivergenceMaxCap);
        if (d.reached) ++certified;
        max_cap_used = std::max(max_cap_used, d.cap);
    }
    Outcome o;
    o.pass = disagreements == 0 && certified == static_cast<long>(corpus.size());
    o.detail = std::to_string(corpus.size()) + " instances, " + std::to_string(checks) + " finiteness checks, " +
               std::to_string(disagreements) + " reported finite, divergence >= " +
               std::to_string(kDivergenceThreshold) + " certified on " + std::to_string(certified) + " (largest cap " +
               std::to_string(max_cap_used) + ")";
    return o;
}

Outcome gamblers_ruin() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;
    std::uint64_t seed = 4004;
    for (const auto& down : {Rational(2, 3), Rational(3, 4), Rational(5, 8)}) {
        auto a = testsupport::twin_walk(down);
        Rational drift = 2 * down - 1;
        for (long i : {1L, 4L, 10L}) {
            Config c{a.state_index("q"), BigInt(i)};
            auto r = approx_value(a, c, kRuinEps, kRuinCapK);
            Rational exact = Rational(i) / drift;
            bool value_ok = r.value.is_finite() && abs_r(r.value.value() - exact) <= kRuinEps;
            bool sim_ok = false;
            Estimate est;
            if (r.strategy) {
                est = estimate_expected_T(a, *r.strategy, c, kSimRuns, kSimStepCap, seed);
                double nu = value_ok ? to_double(r.value.value()) : 0.0;
                sim_ok = est.cap_hits == 0 && est.n == kSimRuns && std::fabs(est.mean - nu) <= kSigmas * est.stderr_;
            }
            seed += kSimRuns;
            ok = ok && value_ok && sim_ok;
            detail << " p=" << to_string(down) << ",i=" << i << ": nu=" << estr(r.value) << " exact=" << rstr(exact)
                   << " sim=" << dstr(est.mean) << "+-" << dstr(est.stderr_) << " achieved_eps=" << estr(r.achieved_eps)
                   << (value_ok && sim_ok ? "" : " [bad]") << ";";
        }
    }
    double secs = seconds_since(t0);
    Outcome o;
    o.pass = ok && secs < kRuinSeconds;
    o.detail = dstr(secs) + " s;" + detail.str();
    return o;
}

Outcome qfin_agreement() {
    auto corpus = multi_mec_corpus(5005, kGeneralCorpus);
    long disagreements = 0, divergent = 0, divergent_certified = 0, convergent = 0, convergent_certified = 0;
    for (const auto& a : corpus) {
        const long n = a.num_states();
        auto qf = compute_qfin(a);
        auto brute = testsupport::brute_finite_high(a);
        std::vector<bool> algo(n);
        for (int q = 0; q < n; ++q) algo[q] = qf.dec.Q_fin[q];
        if (algo != brute) ++disagreements;
        std::map<long, std::vector<std::vector<ExtRational>>> lower;
        auto lower_at = [&](long cap) -> const std::vector<std::vector<ExtRational>>& {
            auto it = lower.find(cap);
            if (it == lower.end()) it = lower.emplace(cap, lower_fixpoint(a, cap)).first;
            return it->second;
        };
        for (int q = 0; q < n; ++q) {
            if (brute[q]) {
                ++convergent;
                // Successive doublings of the cap until the lower fixpoint settles.
                for (long cap = kConvergenceCap; 2 * cap <= kConvergenceMaxCap; cap *= 2) {
                    const auto& x = lower_at(cap)[n][q];
                    const auto& y = lower_at(2 * cap)[n][q];
                    if (x.is_finite() && y.is_finite() && y.value() - x.value() <= kConvergenceTol * (1 + x.value())) {
                        ++convergent_certified;
                        break;
                    }
                }
            } else {
                ++divergent;
                auto d = divergence_certificate(a, Config{q, BigInt(n)}, Rational(kGeneralDivergenceThreshold),
                                                kGeneralDivergenceMaxCap);
                if (d.reached) ++divergent_certified;
            }
        }
    }
    Outcome o;
    o.pass = disagreements == 0 && divergent_certified == divergent && convergent_certified == convergent;
    o.detail = std::to_string(corpus.size()) + " instances, " + std::to_string(disagreements) +
               " Q_fin disagreements with enumeration; oracle at counter |Q|: " + std::to_string(convergent_certified) +
               "/" + std::to_string(convergent) + " finite states converge, " + std::to_string(divergent_certified) +
               "/" + std::to_string(divergent) + " infinite states exceed " +
               std::to_string(kGeneralDivergenceThreshold);
    return o;
}

Outcome low_boundary_fixpoint() {
    auto corpus = multi_mec_corpus(5005, kGeneralCorpus);
    long violations = 0, checks = 0;
    for (const auto& a : corpus) {
        const long n = a.num_states();
        const long cap = n + 2;
        auto qf = compute_qfin(a);
        auto brute = testsupport::brute_finite_high(a);
        std::vector<ExtRational> boundary(n, ExtRational::infinity());
        bool any_finite = false;
        for (int q = 0; q < n; ++q) any_finite = any_finite || qf.dec.Q_fin[q];
        if (any_finite) {
            auto tq = trends_tq(a, qf.dec);
            auto sigma = general_sigma(a, qf.dec, qf.mecs, tq);
            auto bt = general_constants(a, qf.dec, qf.mecs, tq, sigma);
            for (int r = 0; r < n; ++r)
                if (qf.dec.Q_fin[r]) boundary[r] = ExtRational(Rational(Rational(cap) / abs_r(*tq.t_q[r]) + bt.U_gen));
        }
        auto vals = exact_small_solve(a, cap, boundary);
        auto infinite_set = [&](long k) {
            std::vector<bool> s(n);
            for (int q = 0; q < n; ++q) s[q] = vals[k][q].is_inf();
            return s;
        };
        auto b0 = infinite_set(n), b1 = infinite_set(n + 1), b2 = infinite_set(n + 2);
        ++checks;
        bool ok = b0 == b1 && b1 == b2;
        for (int q = 0; q < n; ++q) ok = ok && b0[q] == !brute[q];
        for (long k = 1; k <= cap; ++k)
            for (int q = 0; q < n; ++q) ok = ok && is_value_finite(a, qf, Config{q, BigInt(k)}) == vals[k][q].is_finite();
        if (!ok) ++violations;
    }
    Outcome o;
    o.pass = violations == 0;
    o.detail = std::to_string(checks) + " instances, " + std::to_string(violations) + " violations";
    return o;
}

bool satisfiable(const CnfFormula& f) {
    for (long mask = 0; mask < (1L << f.num_vars); ++mask) {
        bool all = true;
        for (const auto& c : f.clauses) {
            bool any = false;
            for (int lit : c) {
                bool v = (mask >> (std::abs(lit) - 1)) & 1;
                any = any || (lit > 0 ? v : !v);
            }
            all = all && any;
        }
        if (all) return true;
    }
    return false;
}

Outcome sat_gap() {
    Rng rng(7007);
    std::vector<CnfFormula> formulas;
    int sat = 0, unsat = 0;
    while (static_cast<int>(formulas.size()) < kSatFormulas) {
        int m = 1 + static_cast<int>(rng() % 2);
        CnfFormula f{m, {}};
        for (int c = 0; c < 5; ++c) {
            std::vector<int> cl;
            int len = 1 + static_cast<int>(rng() % 2);
            for (int l = 0; l < len; ++l) {
                int v = 1 + static_cast<int>(rng() % m);
                cl.push_back(rng() % 2 ? v : -v);
            }
            f.clauses.push_back(cl);
        }
        bool s = satisfiable(f);
        if ((s && sat >= kSatFormulas / 2) || (!s && unsat >= kSatFormulas / 2)) continue;
        (s ? sat : unsat)++;
        formulas.push_back(f);
    }
    long wrong = 0;
    double slowest = 0;
    int m2 = 0;
    for (const auto& f : formulas) {
        auto t0 = std::chrono::steady_clock::now();
        auto out = reduce_sat(f);
        long K = to_int64(out.K);
        auto v = exact_small_solve(out.A, K + 1)[K][out.p_state];
        slowest = std::max(slowest, seconds_since(t0));
        Rational expect = satisfiable(f) ? Rational(out.N - 1) : Rational(out.N);
        if (v != ExtRational(expect)) ++wrong;
        if (f.num_vars == 2) ++m2;
    }
    Outcome o;
    o.pass = wrong == 0 && slowest < kSatSeconds;
    o.detail = std::to_string(formulas.size()) + " formulas (" + std::to_string(sat) + " sat, " +
               std::to_string(unsat) + " unsat, " + std::to_string(m2) + " with m = 2), " + std::to_string(wrong) +
               " wrong values, slowest " + dstr(slowest) + " s";
    return o;
}

Outcome pump_gadget() {
    bool ok = true;
    std::ostringstream detail;
    for (int k : {3, 4, 5}) {
        auto g = chain_gadget(k);
        auto est = estimate_pump_probability(g, g.state_index("p" + std::to_string(k)), g.state_index("p0"), k,
                                             kSimRuns, kSimStepCap, 8008 + k);
        bool good = est.mean > 0.25 - kSigmas * est.stderr_;
        ok = ok && good;
        detail << " k=" << k << ": " << dstr(est.mean) << "+-" << dstr(est.stderr_) << (good ? "" : " [bad]") << ";";
    }
    Outcome o;
    o.pass = ok;
    o.detail = "P(reach p0 with counter >= 2^k), n = " + std::to_string(kSimRuns) + ";" + detail.str();
    return o;
}

Outcome unit_counter() {
    // Upper seed: the affine bound 6j + 36 dominates the value of every
    // configuration of the m = 1 instances.
    auto bracket = [](const UnitCounterOutput& u) {
        auto lo = lower_fixpoint(u.B, kUnitCounterCap)[1][u.q1_state];
        std::vector<ExtRational> bound(u.B.num_states(), ExtRational(Rational(6 * kUnitCounterCap + 36)));
        auto hi = exact_small_solve(u.B, kUnitCounterCap, bound)[1][u.q1_state];
        return std::make_pair(lo.value(), hi.value());
    };
    auto unsat = reduce_sat_unit_counter(CnfFormula{1, {{1}, {-1}}});
    auto sat = reduce_sat_unit_counter(CnfFormula{1, {{1}}});
    auto [ulo, uhi] = bracket(unsat);
    auto [slo, shi] = bracket(sat);
    bool unsat_ok = uhi - ulo <= kUnitCounterWidth && ulo - kUnitCounterWidth <= kUnitCounterTarget &&
                    kUnitCounterTarget <= uhi + kUnitCounterWidth;
    bool sat_ok = shi <= kUnitCounterTarget - Rational(1, 4) + kUnitCounterWidth;
    Outcome o;
    o.pass = unsat_ok && sat_ok;
    o.detail = "unsat bracket [" + rstr(ulo) + ", " + rstr(uhi) + "] vs target " + to_string(kUnitCounterTarget) +
               (unsat_ok ? "" : " [bad]") + "; sat bracket [" + rstr(slo) + ", " + rstr(shi) + "] vs bound " +
               to_string(kUnitCounterTarget - Rational(1, 4) + kUnitCounterWidth) + (sat_ok ? "" : " [bad]");
    return o;
}

Outcome bellman_residuals() {
    Rng rng(10010);
    long assertions = 0, failures = 0, equations = 0;
    auto record = [&](long r) {
        ++assertions;
        if (r < 0)
            ++failures;
        else
            equations += r;
    };
    for (int it = 0; it < 400; ++it) {
        auto a = it % 2 ? testsupport::random_general(rng, 6, 3, 8) : testsupport::random_strongly_connected(rng, 5, 3, 8);
        long cap = 2 + it % 7;
        auto g = build_truncated(a, cap);
        auto steps = min_expected_steps_to_zero(g);
        record(ssp_bellman_check(g.mdp, g.target, truncated_costs(g), steps));
        auto gr = build_truncated(a, cap, Rational(1 + it % 5, 1 + it % 3));
        auto rew = min_total_reward(gr);
        record(ssp_bellman_check(gr.mdp, gr.target, truncated_costs(gr), rew));
        std::vector<std::optional<Rational>> entry(a.num_states());
        for (int q = 0; q < a.num_states(); ++q)
            if ((q + it) % 3) entry[q] = Rational(q + 1, 2);
        auto gp = build_truncated(a, cap, entry);
        auto per = min_total_reward(gp);
        record(ssp_bellman_check(gp.mdp, gp.target, truncated_costs(gp), per));
        if (it % 4 == 0) {
            auto avg = max_average_reward(gr.mdp);
            record(gain_optimality_check(gr.mdp, avg.gain));
        }
        if (it % 2 == 0) {
            auto qf = compute_qfin(a);
            for (int q = 0; q < a.num_states(); ++q) {
                if (!qf.dec.Q_fin[q]) continue;
                auto r = approx_value(a, Config{q, BigInt(1 + it % 4)}, Rational(1), 12 + it % 5);
                if (!r.table) continue;
                const auto& t = *r.truncated;
                record(ssp_bellman_check(t.mdp, t.target, truncated_costs(t), *r.table));
                break;
            }
        }
    }
    Outcome o;
    o.pass = failures == 0 && assertions >= kBellmanMinAssertions;
    o.detail = std::to_string(assertions) + " result checks (" + std::to_string(equations) +
               " optimality equations), " + std::to_string(failures) + " nonzero residuals";
    return o;
}

struct CliRun {
    int code;
    std::string out, err;
};

CliRun cli_run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("ocmdp_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        auto p = (dir / name).string();
        std::ofstream(p) << text;
        return p;
    };
    auto m = write("biased.ocmdp", "state q stochastic\nstate r stochastic\n"
                                   "rule q -1 r 2/3\nrule q +1 q 1/3\nrule r -1 q 2/3\nrule r +1 r 1/3\n");
    auto bad = write("bad.ocmdp", "state q stochastic\nrule q -1 q 1/2\n");
    auto unsat = write("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    auto sat = write("sat.cnf", "p cnf 2 3\n1 2 0\n-1 0\n2 0\n");
    auto strat_text = cli_run({"approx", m, "q", "3", "--eps", "1/2", "--cap-k", "60"}).out;
    auto strat = write("s.txt", strat_text);
    auto out_file = (dir / "out.txt").string();

    std::vector<std::vector<std::string>> cmds = {
        {"validate", m},
        {"validate", bad},
        {"info", m},
        {"finite", m, "q", "3"},
        {"finite", m, "r", "0"},
        {"approx", m, "q", "3", "--eps", "1/2", "--cap-k", "60"},
        {"approx", m, "q", "3", "--eps", "1/2"},
        {"simulate", m, strat, "q", "3", "-n", "200", "--seed", "5"},
        {"simulate", m, "builtin:first", "r", "2", "-n", "100", "--seed", "9", "--summary-only"},
        {"simulate", m, strat, "q", "3", "-n", "50", "--cap", "20"},
        {"reduce-sat", unsat},
        {"reduce-sat", sat, "--binary-split"},
        {"reduce-sat", unsat, "--unit-counter"},
        {"reduce-sat", sat, "--unit-counter", "--binary-split"},
        {"gadget", "--pump", "3"},
        {"gadget", "--pump", "5"},
        {"oracle", m, "--cap", "6", "--sweeps", "5"},
        {"oracle", m, "--cap", "6", "--sweeps", "5", "--upper-slope", "3", "--upper-intercept", "2"},
        {"frobnicate"},
        {"--help"},
    };
    std::vector<std::vector<std::string>> with_json;
    for (const auto& c : cmds) {
        with_json.push_back(c);
        auto j = c;
        j.insert(j.begin(), "--json");
        with_json.push_back(j);
    }
    long compared = 0, differing = 0;
    for (const auto& c : with_json) {
        auto a = cli_run(c), b = cli_run(c);
        ++compared;
        if (a.code != b.code || a.out != b.out || a.err != b.err) ++differing;
    }
    std::vector<std::vector<std::string>> file_cmds = {
        {"approx", m, "q", "3", "--eps", "1/2", "--cap-k", "60", "--out", out_file},
        {"reduce-sat", unsat, "--out", out_file},
        {"reduce-sat", sat, "--unit-counter", "--out", out_file},
    };
    for (const auto& c : file_cmds) {
        auto a = cli_run(c);
        auto fa = slurp(out_file), ja = slurp(out_file + ".json");
        auto b = cli_run(c);
        auto fb = slurp(out_file), jb = slurp(out_file + ".json");
        ++compared;
        if (a.code != b.code || a.out != b.out || a.err != b.err || fa != fb || ja != jb || fa.empty()) ++differing;
    }
    fs::remove_all(dir);
    Outcome o;
    o.pass = differing == 0;
    o.detail = std::to_string(compared) + " commands run twice, " + std::to_string(differing) + " differ";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> only(argv + 1, argv + argc);
    struct Criterion {
        const char* id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {"C1", "trend LP exactness", trend_exactness},
        {"C2", "value sandwich on negative trends", sandwich},
        {"C3", "infinite values for nonnegative trends", infinite_values},
        {"C4", "gambler's ruin values and simulation", gamblers_ruin},
        {"C5", "Q_fin agrees with brute force", qfin_agreement},
        {"C6", "infinite-value sets stabilise at |Q|", low_boundary_fixpoint},
        {"C7", "SAT reduction gap", sat_gap},
        {"C8", "pump gadget probability", pump_gadget},
        {"C9", "unit-counter combined instance", unit_counter},
        {"C10", "exact Bellman residuals", bellman_residuals},
        {"C11", "CLI determinism", determinism},
    };
    int failed = 0, ran = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        ++ran;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << " " << c.name << ": " << o.detail << " ["
                  << dstr(seconds_since(t0)) << " s]" << std::endl;
    }
    std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
