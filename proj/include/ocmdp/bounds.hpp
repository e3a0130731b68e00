#pragma once

#include "ocmdp/graph.hpp"
#include "ocmdp/lp.hpp"
#include "ocmdp/model.hpp"

#include <optional>
#include <vector>

namespace ocmdp {

/// Certified constants of the general case. Every field is a rational
/// over-bound of the corresponding analytic constant.
struct BoundsTable {
    Rational p_min;
    Rational V;      // largest V_C over the MECs with a trend solution
    Rational U_scc;  // U' : largest U_C over MECs holding a BSCC of A^sigma
    Rational xbar0;  // largest negative MEC trend
    std::vector<std::optional<Rational>> t_q;
    int tA = 1;
    Rational U_gen;
    Rational K_const;
    Rational Kp_const;
    Rational L_const;
};

/// V + 2n + 16 n^2 / p_min^(2n).
Rational u_bound(const Rational& V, long n, const Rational& p_min);

/// U for a strongly connected model with negative trend.
Rational u_strongly_connected(const TrendSolution& ts, const OcMdp& a);

/// Smallest k >= 0 with k >= (i+U)(U+V)/(eps*x_abs) + V - i.
BigInt truncation_k(const BigInt& i, const Rational& U, const Rational& V, const Rational& x_abs,
                    const Rational& eps);

/// The eps certified by a given k (inverse of truncation_k), or +infinity when
/// k + i - V <= 0.
ExtRational certified_eps(const BigInt& i, const Rational& U, const Rational& V, const Rational& x_abs,
                          const BigInt& k);

struct TqResult {
    std::vector<std::optional<Rational>> t_q;   // on Q_fin
    std::vector<std::optional<Rational>> gain;  // optimal average reward of A_R
    std::vector<int> sigma_R;                   // rule of A per choice state of Q_fin, -1 elsewhere
};

/// Builds the reward MDP A_R on Q_fin, solves it for the maximal average
/// reward and sets t_q = 1/gain(q). Requires dec.trend and dec.Q_fin.
TqResult trends_tq(const OcMdp& a, const MecDecomposition& dec);

/// sigma_R with every MEC that contains a BSCC of A^{sigma_R} switched to the
/// MEC's own counterless strategy.
std::vector<int> general_sigma(const OcMdp& a, const MecDecomposition& dec, const std::vector<MecTrend>& mecs,
                               const TqResult& tq);

BoundsTable general_constants(const OcMdp& a, const MecDecomposition& dec, const std::vector<MecTrend>& mecs,
                              const TqResult& tq, const std::vector<int>& sigma);

}  // namespace ocmdp
