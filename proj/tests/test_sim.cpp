#include <doctest.h>

#include "generators.hpp"
#include "ocmdp/sim.hpp"

#include <cmath>

using namespace ocmdp;
using testsupport::parse;

namespace {

FiniteStrategy none(const OcMdp& a) { return counterless(a, std::vector<int>(a.num_states(), -1)); }

/// Chain gadget G_k: p_i moves up one to p_{i-1} or p_k with probability 1/2.
OcMdp chain(int k) {
    std::string t;
    for (int i = 0; i <= k; ++i) t += "state p" + std::to_string(i) + " stochastic\n";
    t += "rule p0 0 p0 1\n";
    for (int i = 1; i <= k; ++i) {
        std::string p = "p" + std::to_string(i);
        if (i == k)
            t += "rule " + p + " +1 p" + std::to_string(i - 1) + " 1/2\nrule " + p + " +1 " + p + " 1/2\n";
        else
            t += "rule " + p + " +1 p" + std::to_string(i - 1) + " 1/2\nrule " + p + " +1 p" + std::to_string(k) +
                 " 1/2\n";
    }
    return parse(t);
}

}  // namespace

TEST_CASE("splitmix64 reference values") {
    SplitMix64 g(1234567);
    CHECK(g.next() == 6457827717110365317ULL);
    CHECK(g.next() == 3203168211198807973ULL);
    SplitMix64 z(0);
    CHECK(z.next() == 0xe220a8397b1dcdafULL);
}

TEST_CASE("sampling thresholds are exact") {
    auto a = parse("state q stochastic\nstate r stochastic\nrule q -1 q 1/3\nrule q 0 r 2/3\nrule r -1 q 1\n");
    Simulator sim(a);
    // ceil(2^64 / 3) = 6148914691236517206
    CHECK(sim.sample(0, 6148914691236517205ULL) == 0);
    CHECK(sim.sample(0, 6148914691236517206ULL) == 1);
    CHECK(sim.sample(0, 0) == 0);
    CHECK(sim.sample(0, ~0ULL) == 1);
}

TEST_CASE("deterministic runs") {
    auto a = testsupport::decrement_chain();
    for (std::uint64_t seed : {0ULL, 7ULL, 99ULL}) {
        auto o = simulate_run(a, none(a), Config{0, 3}, seed, 100);
        CHECK(o.terminated);
        CHECK(o.steps == 3);
        CHECK(o.final_counter == 0);
    }
    auto z = simulate_run(a, none(a), Config{0, 0}, 1, 1);
    CHECK(z.terminated);
    CHECK(z.steps == 0);
    auto e = estimate_expected_T(a, none(a), Config{0, 5}, 50, 100, 3);
    CHECK(e.mean == 5);
    CHECK(e.stderr_ == 0);
    CHECK(e.n == 50);
}

TEST_CASE("seed determinism") {
    auto a = testsupport::twin_walk(Rational(1, 2));
    Simulator sim(a);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto x = sim.run(none(a), Config{0, 1}, seed, 10);
        auto y = sim.run(none(a), Config{0, 1}, seed, 10);
        CHECK(x.steps == y.steps);
        CHECK(x.terminated == y.terminated);
        CHECK(x.final_counter == y.final_counter);
        CHECK(x.final_state == y.final_state);
        CHECK((x.terminated != x.capped));
    }
}

TEST_CASE("biased walk mean") {
    // Down with 2/3: E T from i is 3i.
    auto a = testsupport::twin_walk(Rational(2, 3));
    auto e = estimate_expected_T(a, none(a), Config{0, 4}, 20000, 100000, 11);
    CHECK(e.cap_hits == 0);
    CHECK(std::fabs(e.mean - 12) <= 3 * e.stderr_);
}

TEST_CASE("symmetric walk reports cap hits") {
    auto a = testsupport::twin_walk(Rational(1, 2));
    auto e = estimate_expected_T(a, none(a), Config{0, 1}, 2000, 200, 5);
    CHECK(e.cap_hits > 0);
    CHECK(e.n + e.cap_hits == 2000);
}

TEST_CASE("strategy errors and choices") {
    auto a = parse("state c choice\nstate d choice\nrule c -1 c\nrule c +1 d\nrule d +1 c\n");
    FiniteStrategy bad(2, 1, {}, {-1, 2});
    CHECK_THROWS(simulate_run(a, bad, Config{0, 2}, 1, 10));
    FiniteStrategy up(2, 1, {}, {1, 2});
    auto o = simulate_run(a, up, Config{0, 2}, 1, 10);
    CHECK(o.capped);
    CHECK(o.final_counter == 12);
    // Decrement below the threshold 4, increment from there on.
    FiniteStrategy thr(2, 4, {0, 2, 0, 2, 0, 2}, {1, 2});
    CHECK(simulate_run(a, thr, Config{0, 3}, 1, 10).steps == 3);
    CHECK(simulate_run(a, thr, Config{0, 4}, 1, 10).capped);
}

TEST_CASE("switch counting") {
    // a (decrementing loop) -> b (decrementing loop) once.
    auto a = parse("state a stochastic\nstate b stochastic\n"
                   "rule a 0 b 1/2\nrule a -1 a 1/2\nrule b -1 b 1\n");
    auto o = simulate_run(a, none(a), Config{0, 30}, 4, 1000);
    CHECK(o.terminated);
    CHECK(o.switches <= 1);
    CHECK(switch_rate_bound(a) == 1 / (1 + Rational(1, 16)));
    CHECK(switch_tail_bound(a, 1) == doctest::Approx(16.0 / (1 - 16.0 / 17.0)));
}

TEST_CASE("pump probability") {
    auto g = chain(4);
    auto e = estimate_pump_probability(g, 4, 0, 4, 20000, 100000, 17);
    CHECK(e.mean > 0.25 - 3 * e.stderr_);
    CHECK(e.cap_hits == 0);
    // k = 1: every step increments, so p0 is entered with counter >= 2.
    auto g1 = chain(1);
    CHECK(estimate_pump_probability(g1, 1, 0, 1, 2000, 1000, 3).mean == 1);
    auto one = estimate_pump_probability(g, 4, 0, 4, 1, 1000, 9);
    CHECK((one.mean == 0 || one.mean == 1));
}
