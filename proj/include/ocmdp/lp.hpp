#pragma once

#include "ocmdp/graph.hpp"
#include "ocmdp/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ocmdp {

enum class Relation { le, ge, eq };
enum class LpStatus { optimal, unbounded, infeasible };

std::string_view status_name(LpStatus s);

/// maximize objective . x subject to rows; variables are nonnegative unless
/// declared free.
struct LinearProgram {
    struct Row {
        std::vector<std::pair<int, Rational>> terms;
        Relation rel;
        Rational rhs;
    };
    std::vector<std::string> names;
    std::vector<bool> is_free;
    std::vector<Rational> objective;
    std::vector<Row> rows;

    int add_variable(std::string name, bool free_var = false, Rational obj = 0);
    int add_row(std::vector<std::pair<int, Rational>> terms, Relation rel, Rational rhs);

    std::string dump() const;
};

/// Dual values follow the maximisation convention: y >= 0 on <= rows,
/// y <= 0 on >= rows, free on = rows, and y^T A >= c (= c for free columns).
struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<Rational> primal;
    std::vector<Rational> dual;
    Rational objective;
};

/// Two-phase dense tableau simplex with Bland's rule. Optimal results are
/// re-verified (primal and dual feasibility, strong duality) and a failed
/// check throws std::logic_error.
LpResult solve_lp(const LinearProgram& lp);

/// Exact optimality certificate check for a claimed primal/dual pair.
bool certify_optimal(const LinearProgram& lp, const std::vector<Rational>& x, const std::vector<Rational>& y,
                     std::string* why = nullptr);

/// Solution of the trend program on a strongly connected OC-MDP.
/// `weights` overrides the rule deltas as the per-rule gain (used for reward
/// MDPs); by default the counter deltas are used.
struct TrendSolution {
    Rational xbar;
    std::vector<Rational> zbar;        // per state
    Rational V;
    std::vector<Rational> dual_state;  // y_q for stochastic q (0 for choice)
    std::vector<Rational> dual_rule;   // y_(q,i,r) for rules of choice q (0 otherwise)
    std::vector<bool> D;
};

/// The trend program as an explicit LP (variable 0 is x, variable 1+q is z_q).
/// Rows: one per rule of a choice state, then one per stochastic state.
LinearProgram trend_program(const OcMdp& c, const std::vector<Rational>* weights = nullptr);

TrendSolution trend_solution(const OcMdp& c, const std::vector<Rational>* weights = nullptr);

/// Counterless strategy (rule index per state, -1 on stochastic states):
/// the dual-positive rule on D, the attractor toward D elsewhere.
/// Throws std::invalid_argument when xbar >= 0.
std::vector<int> counterless_sigma_scc(const OcMdp& c, const TrendSolution& ts);

/// Same construction without the sign precondition (for reward MDPs).
std::vector<int> recurrent_strategy(const OcMdp& c, const TrendSolution& ts);

/// Stationary distribution of an irreducible chain given by (rows of) a
/// strategy-fixed OC-MDP restricted to `members` (must be closed).
std::vector<Rational> stationary_distribution(const FiniteMdp& m, const std::vector<int>& strategy,
                                              const std::vector<int>& members);

/// Trend data of one MEC of A: the restricted model, its trend solution and
/// (when the trend is negative) its counterless strategy in global rule ids.
struct MecTrend {
    std::vector<int> states;
    OcMdp model;
    std::vector<int> rule_map;  // local rule -> rule of A
    TrendSolution ts;
    std::vector<int> sigma;     // per local state: global rule id or -1
};

MecTrend mec_trend(const OcMdp& a, const std::vector<int>& states);

}  // namespace ocmdp
