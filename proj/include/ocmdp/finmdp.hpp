#pragma once

#include "ocmdp/graph.hpp"
#include "ocmdp/model.hpp"

#include <optional>
#include <vector>

namespace ocmdp {

/// G_K: configurations q(j), 0 <= j <= K, stored at index j*|Q| + q.
/// Counter-0 and counter-K configurations carry only a self-loop.
struct TruncatedMdp {
    OcMdp base;
    long cap = 0;
    FiniteMdp mdp;
    bool has_reward = false;
    std::vector<bool> target;  // absorbing configurations that end the objective

    int num_base_states() const { return base.num_states(); }
    int id(int q, long j) const { return static_cast<int>(j * base.num_states() + q); }
    int state_of(int s) const { return s % base.num_states(); }
    long counter_of(int s) const { return s / base.num_states(); }
};

/// Without rewards: targets are the counter-0 configurations and every
/// non-loop edge costs one step.
TruncatedMdp build_truncated(const OcMdp& a, long cap);

/// Reward form with one cap-entry reward for all states: loops at 0 and at
/// the cap earn 0, edges into counter-cap configurations earn `cap_entry`,
/// every other edge earns 1. Cap configurations are targets.
TruncatedMdp build_truncated(const OcMdp& a, long cap, const Rational& cap_entry);

/// Per-state cap-entry rewards; a missing entry makes r(cap) a non-target
/// absorbing configuration (value +infinity).
TruncatedMdp build_truncated(const OcMdp& a, long cap, const std::vector<std::optional<Rational>>& cap_entry);

struct SolveResult {
    std::vector<ExtRational> value;  // per finite-MDP state
    std::vector<int> strategy;       // edge per choice state, -1 elsewhere
};

/// Stochastic shortest path: minimal expected accumulated edge cost until a
/// target state. Values are +infinity exactly outside the almost-sure
/// reachability set of the targets. Costs on edges leaving non-target states
/// must be positive. Policy iteration from the attractor strategy with exact
/// sparse policy evaluation; improvement only on strict decrease, lowest edge
/// order among the minimisers.
SolveResult solve_ssp(const FiniteMdp& m, const std::vector<bool>& target, const std::vector<Rational>& cost);

/// Edge costs of a truncated MDP (its rewards, or 1 per step without rewards).
std::vector<Rational> truncated_costs(const TruncatedMdp& g);

SolveResult min_expected_steps_to_zero(const TruncatedMdp& g);
SolveResult min_total_reward(const TruncatedMdp& g);

/// Exact check that `res` satisfies the SSP optimality equations and that its
/// strategy attains the minimum; returns the number of equations verified,
/// or -1 on the first violation.
long ssp_bellman_check(const FiniteMdp& m, const std::vector<bool>& target, const std::vector<Rational>& cost,
                       const SolveResult& res);

struct AverageResult {
    std::vector<Rational> gain;
    std::vector<Rational> bias;
    std::vector<int> strategy;  // edge per choice state, -1 elsewhere
};

/// Maximal long-run average edge reward (edge.reward, default 0). Gains from
/// the multichain LP; the strategy is assembled per MEC and checked to
/// induce exactly the optimal gain.
AverageResult max_average_reward(const FiniteMdp& m);

/// Gain of the Markov chain induced by a memoryless deterministic strategy.
std::vector<Rational> induced_chain_gain(const FiniteMdp& m, const std::vector<int>& strategy);

/// Exact check of g(s) = max_a sum_t p(t|s,a) g(t); returns count or -1.
long gain_optimality_check(const FiniteMdp& m, const std::vector<Rational>& gain);

}  // namespace ocmdp
