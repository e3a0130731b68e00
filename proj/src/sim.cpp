#include "ocmdp/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace ocmdp {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

unsigned __int128 scaled_threshold(const Rational& cum) {
    BigInt num = cum.get_num();
    num <<= 64;
    BigInt t;
    mpz_cdiv_q(t.get_mpz_t(), num.get_mpz_t(), cum.get_den().get_mpz_t());
    unsigned __int128 r = 0;
    for (int word = 1; word >= 0; --word) {
        BigInt part = t >> (64 * word);
        part &= BigInt("18446744073709551615");
        r = (r << 64) | static_cast<unsigned __int128>(std::stoull(part.get_str()));
    }
    return r;
}

struct Moments {
    long n = 0;
    double mean = 0;
    double m2 = 0;
    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double stderr_() const {
        if (n < 2) return 0;
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

}  // namespace

Simulator::Simulator(const OcMdp& a) : a_(&a), thresholds_(a.num_states()) {
    for (int q = 0; q < a.num_states(); ++q) {
        if (a.is_choice(q)) continue;
        Rational cum = 0;
        for (int r : a.out(q)) {
            cum += *a.rule(r).prob;
            thresholds_[q].push_back(scaled_threshold(cum));
        }
    }
    mec_of_ = mec_decompose(underlying_mdp(a)).mec_of;
}

int Simulator::sample(int q, std::uint64_t u) const {
    const auto& t = thresholds_.at(q);
    const auto& out = a_->out(q);
    for (size_t i = 0; i < t.size(); ++i)
        if (static_cast<unsigned __int128>(u) < t[i]) return out[i];
    return out.back();
}

RunOutcome Simulator::run(const FiniteStrategy& s, const Config& c, std::uint64_t seed, long step_cap) const {
    if (step_cap < 1) throw std::invalid_argument("step cap must be positive");
    if (c.counter < 0) throw std::invalid_argument("negative counter");
    const OcMdp& a = *a_;
    SplitMix64 rng(seed);
    RunOutcome out;
    int q = c.state;
    long j = to_int64(c.counter);
    bool switched = false;
    while (true) {
        if (j == 0) {
            out.terminated = true;
            break;
        }
        if (out.steps >= step_cap) {
            out.capped = true;
            break;
        }
        int r;
        if (a.is_choice(q)) {
            r = s.choose(q, j, switched);
            if (r < 0 || r >= a.num_rules() || a.rule(r).src != q)
                throw std::runtime_error("strategy undefined at " + a.state(q).name + "(" + std::to_string(j) + ")");
        } else {
            r = sample(q, rng.next());
        }
        const Rule& rule = a.rule(r);
        if (mec_of_[q] != mec_of_[rule.dst]) ++out.switches;
        q = rule.dst;
        j += rule.delta;
        ++out.steps;
    }
    out.final_counter = j;
    out.final_state = q;
    return out;
}

RunOutcome simulate_run(const OcMdp& a, const FiniteStrategy& s, const Config& c, std::uint64_t seed,
                        long step_cap) {
    return Simulator(a).run(s, c, seed, step_cap);
}

Estimate estimate_expected_T(const OcMdp& a, const FiniteStrategy& s, const Config& c, long n, long step_cap,
                             std::uint64_t base_seed) {
    if (n < 1) throw std::invalid_argument("need at least one run");
    Simulator sim(a);
    Moments m;
    Estimate e;
    for (long r = 0; r < n; ++r) {
        auto o = sim.run(s, c, base_seed + static_cast<std::uint64_t>(r), step_cap);
        if (o.terminated)
            m.add(static_cast<double>(o.steps));
        else
            ++e.cap_hits;
    }
    e.n = m.n;
    e.mean = m.mean;
    e.stderr_ = m.stderr_();
    return e;
}

Estimate estimate_pump_probability(const OcMdp& g, int start, int sink, int k, long n, long step_cap,
                                   std::uint64_t base_seed) {
    if (n < 1) throw std::invalid_argument("need at least one run");
    if (k < 0 || k > 62) throw std::invalid_argument("k out of range");
    const long goal = 1L << k;
    Simulator sim(g);
    FiniteStrategy none = counterless(g, std::vector<int>(g.num_states(), -1));
    long hits = 0;
    Estimate e;
    for (long r = 0; r < n; ++r) {
        SplitMix64 rng(base_seed + static_cast<std::uint64_t>(r));
        int q = start;
        long j = 1;
        long steps = 0;
        bool switched = false;
        while (q != sink && steps < step_cap) {
            int rule = g.is_choice(q) ? none.choose(q, j, switched) : sim.sample(q, rng.next());
            j += g.rule(rule).delta;
            q = g.rule(rule).dst;
            ++steps;
        }
        if (q != sink) ++e.cap_hits;
        if (j >= goal) ++hits;
    }
    e.n = n;
    e.mean = static_cast<double>(hits) / static_cast<double>(n);
    e.stderr_ = std::sqrt(e.mean * (1 - e.mean) / static_cast<double>(n));
    return e;
}

Rational switch_rate_bound(const OcMdp& a) {
    const long n = a.num_states();
    return 1 / (1 + rpow(a.p_min(), n) / (2 * Rational(n)));
}

double switch_tail_bound(const OcMdp& a, long k) {
    const Rational c = switch_rate_bound(a);
    const double cd = to_double(c);
    const double one_minus = to_double(Rational(1 - c));
    return 8.0 * a.num_states() * std::pow(cd, static_cast<double>(k - 1)) / one_minus;
}

}  // namespace ocmdp
