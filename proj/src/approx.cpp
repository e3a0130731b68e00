#include "ocmdp/approx.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ocmdp {

QfinResult compute_qfin(const OcMdp& a) {
    QfinResult r;
    const int n = a.num_states();
    FiniteMdp m = underlying_mdp(a);
    r.dec = mec_decompose(m);
    r.dec.H.assign(n, false);
    for (const auto& c : r.dec.mecs) {
        r.mecs.push_back(mec_trend(a, c));
        r.dec.trend.push_back(r.mecs.back().ts.xbar);
        if (r.dec.trend.back() < 0)
            for (int q : c) r.dec.H[q] = true;
    }
    r.dec.Q_lt0 = almost_sure_reach(m, r.dec.H).in;
    r.dec.Q_fin = r.dec.Q_lt0;
    r.dec.t_q.assign(n, std::nullopt);
    if (std::find(r.dec.Q_fin.begin(), r.dec.Q_fin.end(), true) != r.dec.Q_fin.end())
        r.dec.t_q = trends_tq(a, r.dec).t_q;
    return r;
}

bool is_value_finite(const OcMdp& a, const Config& c) { return is_value_finite(a, compute_qfin(a), c); }

bool is_value_finite(const OcMdp& a, const QfinResult& qf, const Config& c) {
    const long n = a.num_states();
    if (c.counter < 0) throw std::invalid_argument("negative counter");
    if (c.counter == 0) return true;
    if (c.counter >= n) return qf.dec.Q_fin.at(c.state);
    TruncatedMdp g = build_truncated(a, n);
    std::vector<bool> target(g.mdp.num_states(), false);
    for (int q = 0; q < n; ++q) {
        target[g.id(q, 0)] = true;
        target[g.id(q, n)] = qf.dec.Q_fin[q];
    }
    return almost_sure_reach(g.mdp, target).in[g.id(c.state, to_int64(c.counter))];
}

FiniteStrategy::FiniteStrategy(int num_states, long threshold, std::vector<int> low, std::vector<int> tail)
    : n_(num_states), B_(threshold), low_(std::move(low)), tail_(std::move(tail)) {
    if (B_ < 1) throw std::invalid_argument("threshold must be at least 1");
    if (static_cast<long>(tail_.size()) != n_ || static_cast<long>(low_.size()) != (B_ - 1) * n_)
        throw std::invalid_argument("strategy table has the wrong size");
}

int FiniteStrategy::choose(int q, long j, bool& switched) const {
    if (j >= B_) switched = true;
    if (switched || j < 1) return tail(q);
    return low(q, j);
}

FiniteStrategy stitch(const TruncatedMdp& g, const std::vector<int>& low, const std::vector<int>& tail, long B) {
    const int n = g.num_base_states();
    if (B < 1 || B > g.cap) throw std::invalid_argument("stitch: threshold outside the truncation");
    std::vector<int> table(static_cast<size_t>(B - 1) * n, -1);
    for (long j = 1; j < B; ++j)
        for (int q = 0; q < n; ++q) {
            if (!g.base.is_choice(q)) continue;
            int e = low.at(g.id(q, j));
            int rule = e >= 0 ? g.mdp.edge(e).label : -1;
            table[static_cast<size_t>(j - 1) * n + q] = rule >= 0 ? rule : tail.at(q);
        }
    return FiniteStrategy(n, B, std::move(table), tail);
}

namespace {

std::vector<int> default_tail(const OcMdp& a) {
    std::vector<int> t(a.num_states(), -1);
    for (int q = 0; q < a.num_states(); ++q)
        if (a.is_choice(q)) t[q] = a.out(q).front();
    return t;
}

std::vector<int> complete_tail(const OcMdp& a, std::vector<int> t) {
    auto d = default_tail(a);
    for (int q = 0; q < a.num_states(); ++q)
        if (a.is_choice(q) && t[q] < 0) t[q] = d[q];
    return t;
}

}  // namespace

FiniteStrategy counterless(const OcMdp& a, const std::vector<int>& tail) {
    return FiniteStrategy(a.num_states(), 1, {}, complete_tail(a, tail));
}

std::string export_strategy(const OcMdp& a, const FiniteStrategy& s) {
    std::ostringstream os;
    const auto& p = s.provenance;
    os << "strategy v1\n";
    os << "threshold " << s.threshold() << "\n";
    if (!p.mode.empty()) os << "provenance mode " << p.mode << "\n";
    os << "provenance eps " << to_string(p.eps_requested) << "\n";
    os << "provenance nu " << p.nu.str() << "\n";
    os << "provenance k_required " << p.k_required.get_str() << "\n";
    os << "provenance k_used " << p.k_used.get_str() << "\n";
    for (const auto& [k, v] : p.constants) os << "provenance const." << k << " " << v << "\n";
    for (long j = 1; j < s.threshold(); ++j)
        for (int q = 0; q < a.num_states(); ++q)
            if (a.is_choice(q)) os << "low " << a.state(q).name << " " << j << " " << s.low(q, j) << "\n";
    for (int q = 0; q < a.num_states(); ++q)
        if (a.is_choice(q)) os << "tail " << a.state(q).name << " " << s.tail(q) << "\n";
    return os.str();
}

FiniteStrategy import_strategy(const OcMdp& a, std::string_view text) {
    const int n = a.num_states();
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool header = false;
    long B = 0;
    Provenance prov;
    std::vector<int> low, tail(n, -1);
    auto rule_of = [&](int q, const std::string& tok) {
        int r;
        try {
            size_t used = 0;
            r = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ModelError("bad rule index '" + tok + "'", lineno);
        }
        if (r < 0 || r >= a.num_rules() || a.rule(r).src != q)
            throw ModelError("rule " + tok + " does not leave state " + a.state(q).name, lineno);
        return r;
    };
    auto state_of = [&](const std::string& name) {
        int q = a.find_state(name);
        if (q < 0) throw ModelError("unknown state '" + name + "'", lineno);
        if (!a.is_choice(q)) throw ModelError("state '" + name + "' is not a choice state", lineno);
        return q;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (!header) {
            if (tok.size() != 2 || tok[0] != "strategy" || tok[1] != "v1")
                throw ModelError("expected 'strategy v1'", lineno);
            header = true;
            continue;
        }
        if (tok[0] == "threshold") {
            if (tok.size() != 2 || B != 0) throw ModelError("bad threshold line", lineno);
            try {
                B = std::stol(tok[1]);
            } catch (const std::exception&) {
                B = 0;
            }
            if (B < 1) throw ModelError("threshold must be a positive integer", lineno);
            low.assign(static_cast<size_t>(B - 1) * n, -1);
        } else if (tok[0] == "provenance") {
            if (tok.size() < 3) throw ModelError("bad provenance line", lineno);
            std::string v = tok[2];
            for (size_t t = 3; t < tok.size(); ++t) v += " " + tok[t];
            try {
                if (tok[1] == "mode")
                    prov.mode = v;
                else if (tok[1] == "eps")
                    prov.eps_requested = parse_rational(v);
                else if (tok[1] == "nu")
                    prov.nu = v == "inf" ? ExtRational::infinity() : ExtRational(parse_rational(v));
                else if (tok[1] == "k_required")
                    prov.k_required = parse_bigint(v);
                else if (tok[1] == "k_used")
                    prov.k_used = parse_bigint(v);
                else if (tok[1].rfind("const.", 0) == 0)
                    prov.constants.emplace_back(tok[1].substr(6), v);
                else
                    throw ModelError("unknown provenance key '" + tok[1] + "'", lineno);
            } catch (const ModelError&) {
                throw;
            } catch (const std::exception&) {
                throw ModelError("bad provenance value '" + v + "'", lineno);
            }
        } else if (tok[0] == "low") {
            if (B == 0) throw ModelError("low entry before threshold", lineno);
            if (tok.size() != 4) throw ModelError("expected 'low <state> <counter> <rule>'", lineno);
            int q = state_of(tok[1]);
            long j;
            try {
                j = std::stol(tok[2]);
            } catch (const std::exception&) {
                j = 0;
            }
            if (j < 1 || j >= B) throw ModelError("counter outside [1, threshold)", lineno);
            auto& slot = low[static_cast<size_t>(j - 1) * n + q];
            if (slot >= 0) throw ModelError("duplicate low entry", lineno);
            slot = rule_of(q, tok[3]);
        } else if (tok[0] == "tail") {
            if (tok.size() != 3) throw ModelError("expected 'tail <state> <rule>'", lineno);
            int q = state_of(tok[1]);
            if (tail[q] >= 0) throw ModelError("duplicate tail entry", lineno);
            tail[q] = rule_of(q, tok[2]);
        } else {
            throw ModelError("unknown directive '" + tok[0] + "'", lineno);
        }
    }
    if (!header) throw ModelError("empty strategy");
    if (B == 0) throw ModelError("missing threshold");
    for (int q = 0; q < n; ++q) {
        if (!a.is_choice(q)) continue;
        if (tail[q] < 0) throw ModelError("no tail entry for state " + a.state(q).name);
        for (long j = 1; j < B; ++j)
            if (low[static_cast<size_t>(j - 1) * n + q] < 0)
                throw ModelError("no low entry for state " + a.state(q).name + " at counter " + std::to_string(j));
    }
    FiniteStrategy s(n, B, std::move(low), std::move(tail));
    s.provenance = prov;
    return s;
}

namespace {

struct Truncation {
    BigInt k_used;
    long cap = 0;
};

Truncation choose_cap(const OcMdp& a, const BigInt& i, const BigInt& k, std::optional<long> cap_k) {
    Truncation t;
    t.k_used = k;
    if (cap_k && t.k_used > *cap_k) t.k_used = *cap_k;
    if (t.k_used < 1) t.k_used = 1;
    BigInt total = i + t.k_used;
    BigInt states = total + 1;
    states *= a.num_states();
    if (states > kMaxTruncatedStates)
        throw std::length_error("truncated MDP needs " + states.get_str() + " configurations (k = " +
                                k.get_str() + "); limit the truncation with a cap on k");
    t.cap = to_int64(total);
    return t;
}

struct Solved {
    std::shared_ptr<const TruncatedMdp> g;
    std::shared_ptr<const SolveResult> sol;
};

Solved solve_on(const OcMdp& a, long cap, const std::vector<std::optional<Rational>>& entry) {
    auto g = std::make_shared<TruncatedMdp>(build_truncated(a, cap, entry));
    auto sol = std::make_shared<SolveResult>(min_total_reward(*g));
    return {g, sol};
}

void finish(ApproxResult& r, const OcMdp& a, const Config& c, const Solved& s, const std::vector<int>& tail,
            Provenance prov) {
    r.truncated = s.g;
    r.table = s.sol;
    r.value = s.sol->value.at(s.g->id(c.state, to_int64(c.counter)));
    prov.nu = r.value;
    FiniteStrategy st = stitch(*s.g, s.sol->strategy, complete_tail(a, tail), s.g->cap);
    st.provenance = std::move(prov);
    r.strategy = std::move(st);
}

}  // namespace

ApproxResult approx_value(const OcMdp& a, const Config& c, const Rational& eps, std::optional<long> cap_k) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    if (c.counter < 0) throw std::invalid_argument("negative counter");
    if (c.state < 0 || c.state >= a.num_states()) throw std::invalid_argument("state out of range");
    if (cap_k && *cap_k < 0) throw std::invalid_argument("negative cap on k");
    const long n = a.num_states();
    const BigInt& i = c.counter;
    const int q = c.state;
    ApproxResult r;
    Provenance prov;
    prov.eps_requested = eps;

    if (i == 0) {
        r.value = Rational(0);
        r.achieved_eps = Rational(0);
        FiniteStrategy s = counterless(a, default_tail(a));
        prov.mode = "zero-counter";
        prov.nu = r.value;
        s.provenance = prov;
        r.strategy = std::move(s);
        return r;
    }

    QfinResult qf = compute_qfin(a);
    if (!is_value_finite(a, qf, c)) {
        r.value = ExtRational::infinity();
        r.achieved_eps = Rational(0);
        return r;
    }
    const auto& dec = qf.dec;
    const bool sc = dec.mecs.size() == 1 && static_cast<long>(dec.mecs[0].size()) == n;

    if (sc && dec.trend[0] < 0) {
        const auto& mt = qf.mecs[0];
        const Rational x = -mt.ts.xbar;
        const Rational U = u_strongly_connected(mt.ts, a);
        BigInt k = truncation_k(i, U, mt.ts.V, x, eps);
        Truncation t = choose_cap(a, i, k, cap_k);
        Rational entry = (Rational(t.cap) + U) / x;
        Solved s = solve_on(a, t.cap, std::vector<std::optional<Rational>>(n, entry));
        prov.mode = "strongly-connected";
        prov.k_required = k;
        prov.k_used = t.k_used;
        prov.constants = {{"xbar", to_string(mt.ts.xbar)}, {"V", to_string(mt.ts.V)}, {"U", to_string(U)}};
        r.achieved_eps = t.k_used >= k ? ExtRational(eps) : certified_eps(i, U, mt.ts.V, x, t.k_used);
        // mt.states is the identity here, so local rule ids are global ones.
        finish(r, a, c, s, mt.sigma, prov);
        return r;
    }

    const bool any_fin = std::find(dec.Q_fin.begin(), dec.Q_fin.end(), true) != dec.Q_fin.end();
    if (!any_fin) {
        // Finite values only below |Q|, computed exactly on G_|Q|.
        auto g = std::make_shared<TruncatedMdp>(build_truncated(a, n));
        auto sol = std::make_shared<SolveResult>(min_expected_steps_to_zero(*g));
        prov.mode = "exact-low-counter";
        prov.k_required = BigInt(n) - i;
        prov.k_used = prov.k_required;
        r.achieved_eps = Rational(0);
        finish(r, a, c, Solved{g, sol}, default_tail(a), prov);
        return r;
    }

    TqResult tq = trends_tq(a, dec);
    std::vector<int> sigma = general_sigma(a, dec, qf.mecs, tq);
    BoundsTable bt = general_constants(a, dec, qf.mecs, tq, sigma);
    auto entries = [&](long cap) {
        std::vector<std::optional<Rational>> e(n);
        for (int s = 0; s < n; ++s)
            if (dec.Q_fin[s]) e[s] = Rational(cap) / -*tq.t_q[s] + bt.U_gen;
        return e;
    };
    prov.constants = {{"t_q", to_string(*tq.t_q[q])}, {"xbar0", to_string(bt.xbar0)},
                      {"U_gen", to_string(bt.U_gen)},  {"K", to_string(bt.K_const)},
                      {"K'", to_string(bt.Kp_const)},  {"L", to_string(bt.L_const)}};

    if (i >= n) {
        const Rational x = -*tq.t_q[q];
        BigInt k = truncation_k(i, bt.U_gen, bt.L_const, x, eps);
        Truncation t = choose_cap(a, i, k, cap_k);
        Solved s = solve_on(a, t.cap, entries(t.cap));
        prov.mode = "general";
        prov.k_required = k;
        prov.k_used = t.k_used;
        r.achieved_eps =
            t.k_used >= k ? ExtRational(eps) : certified_eps(i, bt.U_gen, bt.L_const, x, t.k_used);
        finish(r, a, c, s, sigma, prov);
        return r;
    }

    // Low counter: bound the value through G_|Q| first, then truncate high
    // enough that the boundary error is below eps.
    Solved up = solve_on(a, n, entries(n));
    ExtRational b_up = up.sol->value.at(up.g->id(q, to_int64(i)));
    if (b_up.is_inf()) throw std::logic_error("low-counter upper bound is infinite for a finite value");
    const Rational scale = b_up.value() * (bt.U_gen + bt.L_const);
    BigInt k = ceil_rational(scale / eps + bt.L_const - Rational(i));
    if (k < BigInt(n) - i) k = BigInt(n) - i;
    Truncation t = choose_cap(a, i, k, cap_k);
    Solved s = solve_on(a, t.cap, entries(t.cap));
    prov.mode = "general-low-counter";
    prov.k_required = k;
    prov.k_used = t.k_used;
    prov.constants.emplace_back("B_up", to_string(b_up.value()));
    if (t.k_used >= k) {
        r.achieved_eps = eps;
    } else {
        Rational slack = Rational(t.k_used) + Rational(i) - bt.L_const;
        r.achieved_eps = slack > 0 ? ExtRational(Rational(scale / slack)) : ExtRational::infinity();
    }
    finish(r, a, c, s, sigma, prov);
    return r;
}

std::vector<std::vector<ExtRational>> exact_low_counter_values(const OcMdp& a, const Rational& eps,
                                                               std::optional<long> cap_k) {
    const long n = a.num_states();
    QfinResult qf = compute_qfin(a);
    std::vector<std::optional<Rational>> entry(n);
    std::vector<ExtRational> nu(n, ExtRational::infinity());
    for (int r = 0; r < n; ++r) {
        if (!qf.dec.Q_fin[r]) continue;
        nu[r] = approx_value(a, Config{r, BigInt(n)}, eps, cap_k).value;
        entry[r] = Rational(1 + nu[r].value());
    }
    TruncatedMdp g = build_truncated(a, n, entry);
    SolveResult sol = min_total_reward(g);
    std::vector<std::vector<ExtRational>> out(n + 1, std::vector<ExtRational>(n));
    for (long j = 0; j <= n; ++j)
        for (int q = 0; q < n; ++q) {
            if (j == 0)
                out[j][q] = Rational(0);
            else if (j == n)
                out[j][q] = nu[q];
            else
                out[j][q] = sol.value[g.id(q, j)];
        }
    return out;
}

}  // namespace ocmdp
