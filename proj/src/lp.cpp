#include "ocmdp/lp.hpp"

#include "ocmdp/linsolve.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ocmdp {

std::string_view status_name(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::infeasible: return "infeasible";
    }
    return "?";
}

int LinearProgram::add_variable(std::string name, bool free_var, Rational obj) {
    names.push_back(std::move(name));
    is_free.push_back(free_var);
    objective.push_back(std::move(obj));
    return static_cast<int>(names.size()) - 1;
}

int LinearProgram::add_row(std::vector<std::pair<int, Rational>> terms, Relation rel, Rational rhs) {
    rows.push_back({std::move(terms), rel, std::move(rhs)});
    return static_cast<int>(rows.size()) - 1;
}

std::string LinearProgram::dump() const {
    std::ostringstream os;
    os << "maximize";
    for (size_t j = 0; j < names.size(); ++j)
        if (objective[j] != 0) os << " + " << to_string(objective[j]) << "*" << names[j];
    os << "\n";
    for (const auto& r : rows) {
        for (const auto& [j, v] : r.terms) os << " + " << to_string(v) << "*" << names[j];
        os << (r.rel == Relation::le ? " <= " : r.rel == Relation::ge ? " >= " : " = ") << to_string(r.rhs) << "\n";
    }
    for (size_t j = 0; j < names.size(); ++j)
        if (is_free[j]) os << "free " << names[j] << "\n";
    return os.str();
}

bool certify_optimal(const LinearProgram& lp, const std::vector<Rational>& x, const std::vector<Rational>& y,
                     std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const size_t n = lp.names.size();
    if (x.size() != n || y.size() != lp.rows.size()) return fail("dimension mismatch");
    for (size_t j = 0; j < n; ++j)
        if (!lp.is_free[j] && x[j] < 0) return fail("negative primal variable " + lp.names[j]);
    std::vector<Rational> ya(n, Rational(0));
    Rational dual_obj = 0;
    for (size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& r = lp.rows[i];
        Rational lhs = 0;
        for (const auto& [j, v] : r.terms) {
            lhs += v * x[j];
            ya[j] += y[i] * v;
        }
        switch (r.rel) {
            case Relation::le:
                if (lhs > r.rhs) return fail("primal row " + std::to_string(i) + " violated");
                if (y[i] < 0) return fail("dual sign on row " + std::to_string(i));
                break;
            case Relation::ge:
                if (lhs < r.rhs) return fail("primal row " + std::to_string(i) + " violated");
                if (y[i] > 0) return fail("dual sign on row " + std::to_string(i));
                break;
            case Relation::eq:
                if (lhs != r.rhs) return fail("primal row " + std::to_string(i) + " violated");
                break;
        }
        dual_obj += y[i] * r.rhs;
    }
    Rational primal_obj = 0;
    for (size_t j = 0; j < n; ++j) {
        primal_obj += lp.objective[j] * x[j];
        if (lp.is_free[j] ? ya[j] != lp.objective[j] : ya[j] < lp.objective[j])
            return fail("dual constraint for " + lp.names[j] + " violated");
    }
    if (primal_obj != dual_obj) return fail("duality gap");
    return true;
}

namespace {

class Tableau {
public:
    std::vector<std::vector<Rational>> t;  // m rows, last column is rhs
    std::vector<Rational> d;               // reduced costs (maximisation)
    Rational zval;                         // objective value
    std::vector<int> basis;
    int ncols = 0;

    void pivot(int r, int c) {
        const int m = static_cast<int>(t.size());
        Rational p = t[r][c];
        for (auto& v : t[r]) v /= p;
        for (int i = 0; i < m; ++i) {
            if (i == r || t[i][c] == 0) continue;
            Rational f = t[i][c];
            for (int j = 0; j <= ncols; ++j)
                if (t[r][j] != 0) t[i][j] -= f * t[r][j];
        }
        if (d[c] != 0) {
            Rational f = d[c];
            for (int j = 0; j < ncols; ++j)
                if (t[r][j] != 0) d[j] -= f * t[r][j];
            zval += f * t[r][ncols];
        }
        basis[r] = c;
    }

    /// Runs Bland's rule; returns false when unbounded.
    bool optimize(const std::vector<bool>& barred) {
        const int m = static_cast<int>(t.size());
        while (true) {
            int enter = -1;
            for (int j = 0; j < ncols; ++j)
                if (!barred[j] && d[j] > 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rational best;
            for (int i = 0; i < m; ++i) {
                if (t[i][enter] <= 0) continue;
                Rational ratio = t[i][ncols] / t[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    void set_costs(const std::vector<Rational>& c) {
        const int m = static_cast<int>(t.size());
        d = c;
        zval = 0;
        for (int i = 0; i < m; ++i) {
            const Rational& cb = c[basis[i]];
            if (cb == 0) continue;
            for (int j = 0; j < ncols; ++j)
                if (t[i][j] != 0) d[j] -= cb * t[i][j];
            zval += cb * t[i][ncols];
        }
    }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
    const int nvar = static_cast<int>(lp.names.size());
    const int m = static_cast<int>(lp.rows.size());

    // Column layout: structural columns (free variables split in two), then
    // one slack/surplus per inequality row, then one artificial per >= or = row.
    std::vector<int> plus_col(nvar), minus_col(nvar, -1);
    int ncols = 0;
    for (int j = 0; j < nvar; ++j) {
        plus_col[j] = ncols++;
        if (lp.is_free[j]) minus_col[j] = ncols++;
    }
    std::vector<int> sign(m, 1);
    std::vector<Relation> rel(m);
    for (int i = 0; i < m; ++i) {
        rel[i] = lp.rows[i].rel;
        if (lp.rows[i].rhs < 0) {
            sign[i] = -1;
            if (rel[i] == Relation::le)
                rel[i] = Relation::ge;
            else if (rel[i] == Relation::ge)
                rel[i] = Relation::le;
        }
    }
    std::vector<int> slack_col(m, -1), art_col(m, -1), id_col(m);
    for (int i = 0; i < m; ++i)
        if (rel[i] != Relation::eq) slack_col[i] = ncols++;
    for (int i = 0; i < m; ++i)
        if (rel[i] != Relation::le) art_col[i] = ncols++;
    for (int i = 0; i < m; ++i) id_col[i] = rel[i] == Relation::le ? slack_col[i] : art_col[i];

    Tableau tab;
    tab.ncols = ncols;
    tab.t.assign(m, std::vector<Rational>(ncols + 1, Rational(0)));
    tab.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        auto& row = tab.t[i];
        for (const auto& [j, v] : lp.rows[i].terms) {
            row[plus_col[j]] += sign[i] * v;
            if (minus_col[j] >= 0) row[minus_col[j]] -= sign[i] * v;
        }
        row[ncols] = sign[i] * lp.rows[i].rhs;
        if (rel[i] == Relation::le) row[slack_col[i]] = 1;
        if (rel[i] == Relation::ge) row[slack_col[i]] = -1;
        if (art_col[i] >= 0) row[art_col[i]] = 1;
        tab.basis[i] = id_col[i];
    }

    std::vector<bool> is_art(ncols, false);
    for (int i = 0; i < m; ++i)
        if (art_col[i] >= 0) is_art[art_col[i]] = true;

    LpResult res;
    std::vector<bool> none(ncols, false);
    std::vector<Rational> phase1(ncols, Rational(0));
    bool any_art = false;
    for (int j = 0; j < ncols; ++j)
        if (is_art[j]) {
            phase1[j] = -1;
            any_art = true;
        }
    if (any_art) {
        tab.set_costs(phase1);
        tab.optimize(none);
        if (tab.zval < 0) {
            res.status = LpStatus::infeasible;
            return res;
        }
        for (int i = 0; i < m; ++i) {
            if (!is_art[tab.basis[i]]) continue;
            for (int j = 0; j < ncols; ++j)
                if (!is_art[j] && tab.t[i][j] != 0) {
                    tab.pivot(i, j);
                    break;
                }
        }
    }
    std::vector<Rational> cost(ncols, Rational(0));
    for (int j = 0; j < nvar; ++j) {
        cost[plus_col[j]] = lp.objective[j];
        if (minus_col[j] >= 0) cost[minus_col[j]] = -lp.objective[j];
    }
    tab.set_costs(cost);
    if (!tab.optimize(is_art)) {
        res.status = LpStatus::unbounded;
        return res;
    }

    std::vector<Rational> colval(ncols, Rational(0));
    for (int i = 0; i < m; ++i) colval[tab.basis[i]] = tab.t[i][ncols];
    res.status = LpStatus::optimal;
    res.primal.resize(nvar);
    for (int j = 0; j < nvar; ++j) {
        res.primal[j] = colval[plus_col[j]];
        if (minus_col[j] >= 0) res.primal[j] -= colval[minus_col[j]];
    }
    res.dual.assign(m, Rational(0));
    for (int k = 0; k < m; ++k) {
        Rational y = 0;
        for (int i = 0; i < m; ++i) {
            const Rational& cb = cost[tab.basis[i]];
            if (cb != 0 && tab.t[i][id_col[k]] != 0) y += cb * tab.t[i][id_col[k]];
        }
        res.dual[k] = sign[k] * y;
    }
    res.objective = tab.zval;
    std::string why;
    if (!certify_optimal(lp, res.primal, res.dual, &why)) throw std::logic_error("simplex certificate failed: " + why);
    return res;
}

LinearProgram trend_program(const OcMdp& c, const std::vector<Rational>* weights) {
    auto w = [&](int r) { return weights ? (*weights)[r] : Rational(c.rule(r).delta); };
    LinearProgram lp;
    lp.add_variable("x", true, 1);
    for (const auto& s : c.states()) lp.add_variable("z_" + s.name, true);
    for (int q = 0; q < c.num_states(); ++q) {
        if (!c.is_choice(q)) continue;
        for (int r : c.out(q)) {
            int dst = c.rule(r).dst;
            std::vector<std::pair<int, Rational>> terms{{0, 1}};
            if (dst == q) {
                lp.add_row(terms, Relation::le, w(r));
            } else {
                terms.push_back({1 + q, 1});
                terms.push_back({1 + dst, -1});
                lp.add_row(terms, Relation::le, w(r));
            }
        }
    }
    for (int q = 0; q < c.num_states(); ++q) {
        if (c.is_choice(q)) continue;
        std::vector<Rational> coef(c.num_states(), Rational(0));
        coef[q] += 1;
        Rational rhs = 0;
        for (int r : c.out(q)) {
            const auto& rule = c.rule(r);
            coef[rule.dst] -= *rule.prob;
            rhs += *rule.prob * w(r);
        }
        std::vector<std::pair<int, Rational>> terms{{0, 1}};
        for (int s = 0; s < c.num_states(); ++s)
            if (coef[s] != 0) terms.push_back({1 + s, coef[s]});
        lp.add_row(terms, Relation::le, rhs);
    }
    return lp;
}

std::vector<Rational> stationary_distribution(const FiniteMdp& m, const std::vector<int>& strategy,
                                              const std::vector<int>& members) {
    const int k = static_cast<int>(members.size());
    std::vector<int> local(m.num_states(), -1);
    for (int i = 0; i < k; ++i) local[members[i]] = i;
    // Equations: sum pi = 1 (row 0), and balance pi_t = sum_s pi_s P(s,t) for t != members[0].
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k, Rational(0)));
    std::vector<Rational> b(k, Rational(0));
    for (int i = 0; i < k; ++i) a[0][i] = 1;
    b[0] = 1;
    for (int t = 1; t < k; ++t) a[t][t] += 1;
    for (int i = 0; i < k; ++i) {
        int s = members[i];
        auto add = [&](int e, const Rational& p) {
            int dst = local.at(m.edge(e).dst);
            if (dst < 0) throw std::logic_error("stationary_distribution: set not closed");
            if (dst != 0) a[dst][i] -= p;
        };
        if (m.is_choice(s))
            add(strategy.at(s), Rational(1));
        else
            for (int e : m.out(s)) add(e, *m.edge(e).prob);
    }
    return solve_dense(std::move(a), std::move(b));
}

namespace {

std::vector<int> strategy_toward(const OcMdp& c, const FiniteMdp& m, const std::vector<bool>& target,
                                 const std::vector<int>& fixed) {
    auto reach = almost_sure_reach(m, target);
    std::vector<int> sigma(c.num_states(), -1);
    for (int q = 0; q < c.num_states(); ++q) {
        if (!c.is_choice(q)) continue;
        sigma[q] = fixed[q] >= 0 ? fixed[q] : reach.witness[q];
    }
    return sigma;
}

}  // namespace

TrendSolution trend_solution(const OcMdp& c, const std::vector<Rational>* weights) {
    FiniteMdp m = underlying_mdp(c);
    if (!strongly_connected(m)) throw std::invalid_argument("trend_solution: OC-MDP is not strongly connected");
    LinearProgram lp = trend_program(c, weights);
    LpResult res = solve_lp(lp);
    if (res.status != LpStatus::optimal)
        throw std::logic_error("trend program not optimal: " + std::string(status_name(res.status)));

    const int n = c.num_states();
    TrendSolution ts;
    ts.xbar = res.primal[0];
    ts.zbar.assign(res.primal.begin() + 1, res.primal.end());
    ts.V = *std::max_element(ts.zbar.begin(), ts.zbar.end()) - *std::min_element(ts.zbar.begin(), ts.zbar.end());

    // Row layout mirrors trend_program.
    std::vector<Rational> y_rule(c.num_rules(), Rational(0)), y_state(n, Rational(0));
    {
        int row = 0;
        for (int q = 0; q < n; ++q)
            if (c.is_choice(q))
                for (int r : c.out(q)) y_rule[r] = res.dual[row++];
        for (int q = 0; q < n; ++q)
            if (!c.is_choice(q)) y_state[q] = res.dual[row++];
    }
    std::vector<bool> D0(n, false);
    std::vector<int> fixed(n, -1);
    for (int q = 0; q < n; ++q) {
        if (c.is_choice(q)) {
            for (int r : c.out(q))
                if (y_rule[r] > 0) {
                    D0[q] = true;
                    fixed[q] = r;
                    break;
                }
        } else {
            D0[q] = y_state[q] > 0;
        }
    }
    auto sigma0 = strategy_toward(c, m, D0, fixed);
    auto bsccs = bsccs_of_induced_chain(m, sigma0);

    ts.D.assign(n, false);
    ts.dual_rule.assign(c.num_rules(), Rational(0));
    ts.dual_state.assign(n, Rational(0));
    Rational w(1, static_cast<long>(bsccs.size()));
    w.canonicalize();
    for (const auto& b : bsccs) {
        auto pi = stationary_distribution(m, sigma0, b);
        for (size_t i = 0; i < b.size(); ++i) {
            int q = b[i];
            ts.D[q] = true;
            if (c.is_choice(q))
                ts.dual_rule[sigma0[q]] = w * pi[i];
            else
                ts.dual_state[q] = w * pi[i];
        }
    }
    std::vector<Rational> y;
    for (int q = 0; q < n; ++q)
        if (c.is_choice(q))
            for (int r : c.out(q)) y.push_back(ts.dual_rule[r]);
    for (int q = 0; q < n; ++q)
        if (!c.is_choice(q)) y.push_back(ts.dual_state[q]);
    std::string why;
    if (!certify_optimal(lp, res.primal, y, &why))
        throw std::logic_error("post-selected dual is not optimal: " + why);
    return ts;
}

std::vector<int> recurrent_strategy(const OcMdp& c, const TrendSolution& ts) {
    const int n = c.num_states();
    std::vector<int> fixed(n, -1);
    for (int q = 0; q < n; ++q) {
        if (!c.is_choice(q) || !ts.D[q]) continue;
        for (int r : c.out(q))
            if (ts.dual_rule[r] > 0) {
                fixed[q] = r;
                break;
            }
    }
    return strategy_toward(c, underlying_mdp(c), ts.D, fixed);
}

std::vector<int> counterless_sigma_scc(const OcMdp& c, const TrendSolution& ts) {
    if (ts.xbar >= 0) throw std::invalid_argument("counterless strategy requires a negative trend");
    return recurrent_strategy(c, ts);
}

MecTrend mec_trend(const OcMdp& a, const std::vector<int>& states) {
    MecTrend mt;
    mt.states = states;
    mt.model = restrict_ocmdp(a, states, &mt.rule_map);
    mt.ts = trend_solution(mt.model);
    mt.sigma.assign(states.size(), -1);
    if (mt.ts.xbar < 0) {
        auto local = counterless_sigma_scc(mt.model, mt.ts);
        for (size_t i = 0; i < states.size(); ++i)
            if (local[i] >= 0) mt.sigma[i] = mt.rule_map[local[i]];
    }
    return mt;
}

}  // namespace ocmdp
