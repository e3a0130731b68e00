#include "ocmdp/oracle.hpp"

#include "ocmdp/finmdp.hpp"

#include <stdexcept>

namespace ocmdp {

namespace {

template <typename T>
using Table = std::vector<std::vector<T>>;

/// One Bellman step at q(j), 0 < j < cap, reading values from `v`.
template <typename T>
T bellman(const OcMdp& a, const Table<T>& v, int q, long j) {
    T best;
    bool have = false;
    T acc = T(Rational(0));
    for (int r : a.out(q)) {
        const Rule& rule = a.rule(r);
        const T& next = v[j + rule.delta][rule.dst];
        if (a.is_choice(q)) {
            T cand = T(Rational(1)) + next;
            if (!have || cand < best) best = cand;
            have = true;
        } else {
            acc = acc + *rule.prob * next;
        }
    }
    return a.is_choice(q) ? best : T(Rational(1)) + acc;
}

Rational bellman_lower(const OcMdp& a, const Table<Rational>& v, int q, long j) {
    Rational best;
    bool have = false;
    Rational acc = 0;
    for (int r : a.out(q)) {
        const Rule& rule = a.rule(r);
        const Rational& next = v[j + rule.delta][rule.dst];
        if (a.is_choice(q)) {
            if (!have || next < best) best = next;
            have = true;
        } else {
            acc += *rule.prob * next;
        }
    }
    return a.is_choice(q) ? Rational(best + 1) : Rational(acc + 1);
}

}  // namespace

Bracket bracket_values(const OcMdp& a, long cap, long iterations, const AffineSeed& seed) {
    const int n = a.num_states();
    if (cap < 1) throw std::invalid_argument("cap must be at least 1");
    if (static_cast<int>(seed.size()) != n) throw std::invalid_argument("seed size differs from |Q|");
    Bracket b;
    b.cap = cap;
    b.iterations = iterations;
    b.lower.assign(cap + 1, std::vector<Rational>(n, Rational(0)));
    b.upper.assign(cap + 1, std::vector<ExtRational>(n, ExtRational::infinity()));
    for (long j = 0; j <= cap; ++j)
        for (int q = 0; q < n; ++q) {
            if (j == 0)
                b.upper[j][q] = Rational(0);
            else if (seed[q])
                b.upper[j][q] = Rational(seed[q]->first * j + seed[q]->second);
        }
    for (long s = 0; s < iterations; ++s) {
        auto lo = b.lower;
        auto up = b.upper;
        for (long j = 1; j < cap; ++j)
            for (int q = 0; q < n; ++q) {
                lo[j][q] = bellman_lower(a, b.lower, q, j);
                ExtRational t = bellman(a, b.upper, q, j);
                if (t < up[j][q]) up[j][q] = t;
            }
        b.lower = std::move(lo);
        b.upper = std::move(up);
    }
    return b;
}

std::vector<std::vector<ExtRational>> lower_fixpoint(const OcMdp& a, long cap) {
    return exact_small_solve(a, cap, std::vector<ExtRational>(a.num_states(), ExtRational(0)));
}

std::vector<std::vector<ExtRational>> exact_small_solve(const OcMdp& a, long cap,
                                                        const std::optional<std::vector<ExtRational>>& boundary) {
    const int n = a.num_states();
    if (cap < 1) throw std::invalid_argument("cap must be at least 1");
    std::vector<std::optional<Rational>> entry(n);
    if (boundary) {
        if (static_cast<int>(boundary->size()) != n) throw std::invalid_argument("boundary size differs from |Q|");
        for (int r = 0; r < n; ++r)
            if ((*boundary)[r].is_finite()) entry[r] = Rational(1 + (*boundary)[r].value());
    }
    TruncatedMdp g = build_truncated(a, cap, entry);
    SolveResult sol = min_total_reward(g);
    std::vector<std::vector<ExtRational>> out(cap + 1, std::vector<ExtRational>(n));
    for (long j = 0; j <= cap; ++j)
        for (int q = 0; q < n; ++q) {
            if (j == cap)
                out[j][q] = boundary ? (*boundary)[q] : ExtRational::infinity();
            else
                out[j][q] = sol.value[g.id(q, j)];
        }
    return out;
}

Divergence divergence_certificate(const OcMdp& a, const Config& c, const Rational& threshold, long max_cap) {
    Divergence d;
    const long i = to_int64(c.counter);
    for (long cap = std::max(2L, i + 1); cap <= max_cap; cap *= 2) {
        auto lo = lower_fixpoint(a, cap);
        d.cap = cap;
        d.lower = lo[i][c.state];
        if (d.lower >= ExtRational(threshold)) {
            d.reached = true;
            break;
        }
    }
    return d;
}

}  // namespace ocmdp
