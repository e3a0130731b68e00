#include "ocmdp/bounds.hpp"

#include "ocmdp/finmdp.hpp"

#include <algorithm>
#include <stdexcept>

namespace ocmdp {

Rational u_bound(const Rational& V, long n, const Rational& p_min) {
    Rational nn(n);
    return V + 2 * nn + 16 * nn * nn / rpow(p_min, 2 * n);
}

Rational u_strongly_connected(const TrendSolution& ts, const OcMdp& a) {
    if (ts.xbar >= 0) throw std::invalid_argument("U is defined for negative trends only");
    return u_bound(ts.V, a.num_states(), a.p_min());
}

BigInt truncation_k(const BigInt& i, const Rational& U, const Rational& V, const Rational& x_abs,
                    const Rational& eps) {
    if (x_abs <= 0 || eps <= 0 || i < 0) throw std::invalid_argument("truncation_k: bad arguments");
    Rational bound = (Rational(i) + U) * (U + V) / (eps * x_abs) + V - Rational(i);
    BigInt k = ceil_rational(bound);
    return k < 0 ? BigInt(0) : k;
}

ExtRational certified_eps(const BigInt& i, const Rational& U, const Rational& V, const Rational& x_abs,
                          const BigInt& k) {
    Rational slack = Rational(k) + Rational(i) - V;
    if (slack <= 0) return ExtRational::infinity();
    return ExtRational(Rational((Rational(i) + U) * (U + V) / (x_abs * slack)));
}

TqResult trends_tq(const OcMdp& a, const MecDecomposition& dec) {
    const int n = a.num_states();
    std::vector<int> keep;
    for (int q = 0; q < n; ++q)
        if (dec.Q_fin.at(q)) keep.push_back(q);
    if (keep.empty()) throw std::invalid_argument("trends_tq: Q_fin is empty");

    Rational xbar0;
    bool have = false;
    for (size_t c = 0; c < dec.mecs.size(); ++c)
        if (dec.trend.at(c) < 0 && (!have || dec.trend[c] > xbar0)) {
            xbar0 = dec.trend[c];
            have = true;
        }
    if (!have) throw std::logic_error("trends_tq: no negative MEC");
    const Rational outside = (1 / xbar0 - 1) / rpow(a.p_min(), n);

    std::vector<int> rule_map;
    OcMdp fin = restrict_ocmdp(a, keep, &rule_map);
    FiniteMdp m = underlying_mdp(fin);
    for (int e = 0; e < m.num_edges(); ++e) {
        const auto& rule = a.rule(rule_map[e]);
        int c = dec.mec_of[rule.src];
        if (c >= 0 && c == dec.mec_of[rule.dst] && dec.trend[c] < 0)
            m.mutable_edge(e).reward = 1 / dec.trend[c];
        else
            m.mutable_edge(e).reward = outside;
    }
    auto avg = max_average_reward(m);

    TqResult res;
    res.t_q.assign(n, std::nullopt);
    res.gain.assign(n, std::nullopt);
    res.sigma_R.assign(n, -1);
    for (size_t i = 0; i < keep.size(); ++i) {
        int q = keep[i];
        res.gain[q] = avg.gain[i];
        res.t_q[q] = 1 / avg.gain[i];
        if (avg.strategy[i] >= 0) res.sigma_R[q] = rule_map[avg.strategy[i]];
    }
    return res;
}

namespace {

/// BSCCs of A^sigma on the sub-model Q_fin (global state ids).
std::vector<std::vector<int>> qfin_bsccs(const OcMdp& a, const MecDecomposition& dec, const std::vector<int>& sigma) {
    std::vector<int> keep;
    for (int q = 0; q < a.num_states(); ++q)
        if (dec.Q_fin[q]) keep.push_back(q);
    std::vector<int> rule_map;
    OcMdp fin = restrict_ocmdp(a, keep, &rule_map);
    std::vector<int> back(a.num_rules(), -1);
    for (size_t r = 0; r < rule_map.size(); ++r) back[rule_map[r]] = static_cast<int>(r);
    std::vector<int> local(keep.size(), -1);
    for (size_t i = 0; i < keep.size(); ++i)
        if (fin.is_choice(static_cast<int>(i))) {
            int r = back.at(sigma.at(keep[i]));
            if (r < 0) throw std::logic_error("strategy leaves Q_fin");
            local[i] = r;
        }
    auto bs = bsccs_of_induced_chain(underlying_mdp(fin), local);
    for (auto& b : bs)
        for (auto& s : b) s = keep[s];
    return bs;
}

}  // namespace

std::vector<int> general_sigma(const OcMdp& a, const MecDecomposition& dec, const std::vector<MecTrend>& mecs,
                               const TqResult& tq) {
    std::vector<int> sigma = tq.sigma_R;
    std::vector<bool> switched(dec.mecs.size(), false);
    for (const auto& b : qfin_bsccs(a, dec, tq.sigma_R)) {
        int c = dec.mec_of[b.front()];
        if (c < 0 || dec.trend[c] >= 0) throw std::logic_error("BSCC of sigma_R outside a negative MEC");
        if (switched[c]) continue;
        switched[c] = true;
        const auto& mt = mecs.at(c);
        for (size_t i = 0; i < mt.states.size(); ++i) sigma[mt.states[i]] = mt.sigma[i];
    }
    return sigma;
}

BoundsTable general_constants(const OcMdp& a, const MecDecomposition& dec, const std::vector<MecTrend>& mecs,
                              const TqResult& tq, const std::vector<int>& sigma) {
    const long n = a.num_states();
    BoundsTable t;
    t.p_min = a.p_min();
    t.t_q = tq.t_q;
    bool have0 = false, haveV = false;
    for (size_t c = 0; c < dec.mecs.size(); ++c) {
        const auto& ts = mecs.at(c).ts;
        if (!haveV || ts.V > t.V) t.V = ts.V;
        haveV = true;
        if (ts.xbar < 0 && (!have0 || ts.xbar > t.xbar0)) {
            t.xbar0 = ts.xbar;
            have0 = true;
        }
    }
    if (!have0) throw std::logic_error("general_constants: no negative MEC");
    bool haveU = false;
    for (const auto& b : qfin_bsccs(a, dec, sigma)) {
        int c = dec.mec_of[b.front()];
        Rational u = u_bound(mecs.at(c).ts.V, n, t.p_min);
        if (!haveU || u > t.U_scc) t.U_scc = u;
        haveU = true;
    }
    t.tA = transient_successor_bound(a, dec);
    const Rational x0 = -t.xbar0;
    const Rational nn(n);
    t.U_gen = (2 * nn + t.U_scc) / x0 + 16 * nn * nn / (x0 * rpow(t.p_min, 2 * n));
    const Rational ta(t.tA);
    Rational k1 = 16 * ta * ta / (rpow(t.p_min, 2 * t.tA) * x0);
    Rational k2 = (1 + t.V) / x0;
    t.K_const = std::max(k1, k2);
    t.Kp_const = 32 * nn * nn / rpow(t.p_min, n);
    t.L_const = t.K_const * t.Kp_const;
    return t;
}

}  // namespace ocmdp
