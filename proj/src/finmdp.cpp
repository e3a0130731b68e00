#include "ocmdp/finmdp.hpp"

#include "ocmdp/linsolve.hpp"
#include "ocmdp/lp.hpp"

#include <climits>
#include <stdexcept>

namespace ocmdp {

namespace {

TruncatedMdp build_impl(const OcMdp& a, long cap, const std::vector<std::optional<Rational>>* cap_entry) {
    if (cap < 1) throw std::invalid_argument("truncation cap must be at least 1");
    const long n = a.num_states();
    if ((cap + 1) * n > INT_MAX / 2) throw std::length_error("truncated MDP too large");
    TruncatedMdp g;
    g.base = a;
    g.cap = cap;
    g.has_reward = cap_entry != nullptr;
    auto& m = g.mdp;
    for (long j = 0; j <= cap; ++j)
        for (int q = 0; q < n; ++q) m.add_state(a.kind(q));
    g.target.assign(m.num_states(), false);
    auto loop = [&](int s) {
        std::optional<Rational> p;
        if (m.kind(s) == StateKind::stochastic) p = Rational(1);
        std::optional<Rational> rw;
        if (g.has_reward) rw = Rational(0);
        m.add_edge({s, s, p, rw, -1});
    };
    for (long j = 0; j <= cap; ++j) {
        for (int q = 0; q < n; ++q) {
            int s = g.id(q, j);
            if (j == 0 || j == cap) {
                loop(s);
                if (j == 0) g.target[s] = true;
                if (j == cap && cap_entry && (*cap_entry)[q]) g.target[s] = true;
                continue;
            }
            for (int r : a.out(q)) {
                const auto& rule = a.rule(r);
                long dj = j + rule.delta;
                std::optional<Rational> rw;
                if (g.has_reward) {
                    if (dj == cap && (*cap_entry)[rule.dst])
                        rw = *(*cap_entry)[rule.dst];
                    else
                        rw = Rational(1);
                }
                m.add_edge({s, g.id(rule.dst, dj), rule.prob, rw, r});
            }
        }
    }
    return g;
}

}  // namespace

TruncatedMdp build_truncated(const OcMdp& a, long cap) { return build_impl(a, cap, nullptr); }

TruncatedMdp build_truncated(const OcMdp& a, long cap, const Rational& cap_entry) {
    std::vector<std::optional<Rational>> v(a.num_states(), cap_entry);
    return build_impl(a, cap, &v);
}

TruncatedMdp build_truncated(const OcMdp& a, long cap, const std::vector<std::optional<Rational>>& cap_entry) {
    if (static_cast<int>(cap_entry.size()) != a.num_states())
        throw std::invalid_argument("cap-entry reward vector has wrong size");
    return build_impl(a, cap, &cap_entry);
}

std::vector<Rational> truncated_costs(const TruncatedMdp& g) {
    const auto& m = g.mdp;
    std::vector<Rational> cost(m.num_edges());
    for (int e = 0; e < m.num_edges(); ++e) {
        const auto& ed = m.edge(e);
        if (g.has_reward)
            cost[e] = *ed.reward;
        else
            cost[e] = ed.src == ed.dst && ed.label < 0 ? 0 : 1;
    }
    return cost;
}

SolveResult solve_ssp(const FiniteMdp& m, const std::vector<bool>& target, const std::vector<Rational>& cost) {
    const int n = m.num_states();
    auto reach = almost_sure_reach(m, target);
    const auto& AS = reach.in;

    std::vector<int> var(n, -1);
    int nv = 0;
    for (int s = 0; s < n; ++s)
        if (AS[s] && !target[s]) var[s] = nv++;

    std::vector<int> policy(n, -1);
    for (int s = 0; s < n; ++s) {
        if (var[s] < 0) continue;
        for (int e : m.out(s)) {
            if (m.is_choice(s) && !AS[m.edge(e).dst]) continue;
            if (cost[e] <= 0) throw std::invalid_argument("solve_ssp: nonpositive cost on a non-target edge");
        }
        if (m.is_choice(s)) policy[s] = reach.witness[s];
    }

    std::vector<Rational> v;
    while (true) {
        SparseSystem sys(nv);
        for (int s = 0; s < n; ++s) {
            int row = var[s];
            if (row < 0) continue;
            sys.add(row, row, 1);
            auto use = [&](int e, const Rational& p) {
                sys.add_rhs(row, p * cost[e]);
                int d = var[m.edge(e).dst];
                if (d >= 0) sys.add(row, d, -p);
            };
            if (m.is_choice(s))
                use(policy[s], Rational(1));
            else
                for (int e : m.out(s)) use(e, *m.edge(e).prob);
        }
        v = sys.solve();
        bool changed = false;
        Rational q;
        for (int s = 0; s < n; ++s) {
            if (var[s] < 0 || !m.is_choice(s)) continue;
            auto value_via = [&](int e, Rational& out) {
                int d = m.edge(e).dst;
                out = cost[e];
                if (var[d] >= 0) out += v[var[d]];
            };
            Rational best;
            value_via(policy[s], best);
            int pick = policy[s];
            for (int e : m.out(s)) {
                if (!AS[m.edge(e).dst]) continue;
                value_via(e, q);
                if (q < best) {
                    best = q;
                    pick = e;
                }
            }
            if (pick != policy[s]) {
                policy[s] = pick;
                changed = true;
            }
        }
        if (!changed) break;
    }

    SolveResult res;
    res.value.resize(n);
    res.strategy.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (target[s])
            res.value[s] = ExtRational(Rational(0));
        else if (var[s] >= 0)
            res.value[s] = ExtRational(v[var[s]]);
        else
            res.value[s] = ExtRational::infinity();
        if (m.is_choice(s)) res.strategy[s] = policy[s] >= 0 ? policy[s] : m.out(s).front();
    }
    return res;
}

SolveResult min_expected_steps_to_zero(const TruncatedMdp& g) {
    std::vector<bool> target(g.mdp.num_states(), false);
    for (int q = 0; q < g.num_base_states(); ++q) target[g.id(q, 0)] = true;
    std::vector<Rational> cost(g.mdp.num_edges());
    for (int e = 0; e < g.mdp.num_edges(); ++e) {
        const auto& ed = g.mdp.edge(e);
        cost[e] = ed.label < 0 ? 0 : 1;
    }
    return solve_ssp(g.mdp, target, cost);
}

SolveResult min_total_reward(const TruncatedMdp& g) {
    if (!g.has_reward) throw std::invalid_argument("min_total_reward needs a reward truncation");
    return solve_ssp(g.mdp, g.target, truncated_costs(g));
}

long ssp_bellman_check(const FiniteMdp& m, const std::vector<bool>& target, const std::vector<Rational>& cost,
                       const SolveResult& res) {
    long count = 0;
    for (int s = 0; s < m.num_states(); ++s) {
        ++count;
        if (target[s]) {
            if (res.value[s] != ExtRational(Rational(0))) return -1;
            continue;
        }
        auto via = [&](int e) { return ExtRational(cost[e]) + res.value[m.edge(e).dst]; };
        ExtRational rhs;
        if (m.is_choice(s)) {
            rhs = ExtRational::infinity();
            for (int e : m.out(s)) {
                auto x = via(e);
                if (x < rhs) rhs = x;
            }
            if (via(res.strategy[s]) != rhs) return -1;
        } else {
            rhs = ExtRational(Rational(0));
            for (int e : m.out(s)) rhs = rhs + (*m.edge(e).prob) * via(e);
        }
        if (rhs != res.value[s]) return -1;
    }
    return count;
}

namespace {

Rational expected_reward(const FiniteMdp& m, int s, const std::vector<int>& strategy) {
    auto rw = [&](int e) { return m.edge(e).reward ? *m.edge(e).reward : Rational(0); };
    if (m.is_choice(s)) return rw(strategy[s]);
    Rational r = 0;
    for (int e : m.out(s)) r += *m.edge(e).prob * rw(e);
    return r;
}

}  // namespace

std::vector<Rational> induced_chain_gain(const FiniteMdp& m, const std::vector<int>& strategy) {
    const int n = m.num_states();
    auto bsccs = bsccs_of_induced_chain(m, strategy);
    std::vector<bool> known(n, false);
    std::vector<Rational> gain(n, Rational(0));
    for (const auto& b : bsccs) {
        auto pi = stationary_distribution(m, strategy, b);
        Rational g = 0;
        for (size_t i = 0; i < b.size(); ++i) g += pi[i] * expected_reward(m, b[i], strategy);
        for (int s : b) {
            gain[s] = g;
            known[s] = true;
        }
    }
    std::vector<int> var(n, -1);
    int nv = 0;
    for (int s = 0; s < n; ++s)
        if (!known[s]) var[s] = nv++;
    SparseSystem sys(nv);
    for (int s = 0; s < n; ++s) {
        if (var[s] < 0) continue;
        sys.add(var[s], var[s], 1);
        auto use = [&](int e, const Rational& p) {
            int d = m.edge(e).dst;
            if (var[d] >= 0)
                sys.add(var[s], var[d], -p);
            else
                sys.add_rhs(var[s], p * gain[d]);
        };
        if (m.is_choice(s))
            use(strategy[s], Rational(1));
        else
            for (int e : m.out(s)) use(e, *m.edge(e).prob);
    }
    auto x = sys.solve();
    for (int s = 0; s < n; ++s)
        if (var[s] >= 0) gain[s] = x[var[s]];
    return gain;
}

long gain_optimality_check(const FiniteMdp& m, const std::vector<Rational>& gain) {
    long count = 0;
    for (int s = 0; s < m.num_states(); ++s) {
        Rational rhs;
        if (m.is_choice(s)) {
            bool first = true;
            for (int e : m.out(s)) {
                const Rational& g = gain[m.edge(e).dst];
                if (first || g > rhs) rhs = g;
                first = false;
            }
        } else {
            rhs = 0;
            for (int e : m.out(s)) rhs += *m.edge(e).prob * gain[m.edge(e).dst];
        }
        if (rhs != gain[s]) return -1;
        ++count;
    }
    return count;
}

AverageResult max_average_reward(const FiniteMdp& m) {
    m.validate();
    const int n = m.num_states();
    auto rw = [&](int e) { return m.edge(e).reward ? *m.edge(e).reward : Rational(0); };

    // Multichain primal: minimise sum g/n s.t. g >= P g, g + h >= r + P h.
    LinearProgram lp;
    for (int s = 0; s < n; ++s) lp.add_variable("g" + std::to_string(s), true, Rational(-1, n));
    for (int s = 0; s < n; ++s) lp.add_variable("h" + std::to_string(s), true);
    auto add_action = [&](int s, const std::vector<std::pair<int, Rational>>& dist, const Rational& r) {
        std::vector<Rational> cg(n, Rational(0));
        cg[s] += 1;
        for (const auto& [d, p] : dist) cg[d] -= p;
        std::vector<std::pair<int, Rational>> t1, t2;
        for (int k = 0; k < n; ++k)
            if (cg[k] != 0) {
                t1.push_back({k, cg[k]});
                t2.push_back({n + k, cg[k]});
            }
        lp.add_row(t1, Relation::ge, 0);
        t2.push_back({s, 1});
        lp.add_row(t2, Relation::ge, r);
    };
    for (int s = 0; s < n; ++s) {
        if (m.is_choice(s)) {
            for (int e : m.out(s)) add_action(s, {{m.edge(e).dst, Rational(1)}}, rw(e));
        } else {
            std::vector<std::pair<int, Rational>> dist;
            Rational r = 0;
            for (int e : m.out(s)) {
                dist.push_back({m.edge(e).dst, *m.edge(e).prob});
                r += *m.edge(e).prob * rw(e);
            }
            add_action(s, dist, r);
        }
    }
    auto sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) throw std::logic_error("average-reward LP not optimal");
    AverageResult res;
    res.gain.assign(sol.primal.begin(), sol.primal.begin() + n);
    res.bias.assign(sol.primal.begin() + n, sol.primal.end());

    // Strategy: inside MECs attaining the optimal gain play the MEC's
    // gain-optimal recurrent strategy, elsewhere move along gain-preserving
    // edges toward such MECs.
    auto dec = mec_decompose(m);
    std::vector<int> strategy(n, -1);
    std::vector<bool> stop(n, false);
    for (const auto& mec : dec.mecs) {
        std::vector<int> local(n, -1);
        std::vector<State> states;
        for (int s : mec) {
            local[s] = static_cast<int>(states.size());
            states.push_back({"s" + std::to_string(s), m.kind(s)});
        }
        std::vector<Rule> rules;
        std::vector<int> edge_of;
        std::vector<Rational> weights;
        for (int s : mec)
            for (int e : m.out(s)) {
                int d = m.edge(e).dst;
                if (local[d] < 0) continue;
                rules.push_back({local[s], 0, local[d], m.edge(e).prob});
                edge_of.push_back(e);
                weights.push_back(-rw(e));
            }
        OcMdp c(std::move(states), std::move(rules));
        auto ts = trend_solution(c, &weights);
        Rational g_c = -ts.xbar;
        if (g_c != res.gain[mec.front()]) continue;
        auto sigma = recurrent_strategy(c, ts);
        for (int s : mec) {
            stop[s] = true;
            if (m.is_choice(s)) strategy[s] = edge_of[sigma[local[s]]];
        }
    }
    std::vector<bool> preserving(m.num_edges(), false);
    for (int e = 0; e < m.num_edges(); ++e)
        preserving[e] = res.gain[m.edge(e).dst] == res.gain[m.edge(e).src];
    auto reach = almost_sure_reach(m, stop, &preserving);
    for (int s = 0; s < n; ++s) {
        if (!reach.in[s]) throw std::logic_error("gain-optimal MECs not reachable along gain-preserving edges");
        if (m.is_choice(s) && !stop[s]) strategy[s] = reach.witness[s];
    }
    if (induced_chain_gain(m, strategy) != res.gain)
        throw std::logic_error("assembled strategy does not attain the optimal gain");
    res.strategy = std::move(strategy);
    return res;
}

}  // namespace ocmdp
