#pragma once

#include "ocmdp/model.hpp"

#include <functional>
#include <vector>

namespace testsupport {

using ocmdp::FiniteMdp;
using ocmdp::OcMdp;
using ocmdp::Rational;

/// Independent dense Gaussian elimination (full pivot search); throws on singular.
std::vector<Rational> gauss(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

/// Calls f for every memoryless deterministic strategy (rule index per state,
/// -1 on stochastic states) of A.
void for_each_strategy(const OcMdp& a, const std::function<void(const std::vector<int>&)>& f);

/// Bottom SCCs of A^sigma, computed by plain reachability closure.
std::vector<std::vector<int>> chain_bsccs(const OcMdp& a, const std::vector<int>& sigma);

/// Mean counter change per step in a closed class of A^sigma.
Rational class_drift(const OcMdp& a, const std::vector<int>& sigma, const std::vector<int>& cls);

/// Optimum of the trend program with z of the first state fixed to 0, by
/// enumerating every vertex (square subsystems of tight constraints).
Rational trend_by_vertices(const OcMdp& a);

/// Minimal BSCC drift over all counterless strategies (strongly connected A).
Rational trend_by_strategies(const OcMdp& a);

/// All maximal end components by subset enumeration (n <= 12).
std::vector<std::vector<int>> brute_mecs(const FiniteMdp& m);

/// Almost-sure reachability by enumerating memoryless strategies.
std::vector<bool> brute_as_reach(const FiniteMdp& m, const std::vector<bool>& target);

/// Finiteness of Val(q(i)) for i >= |Q|: some counterless strategy makes every
/// BSCC reachable from q drift strictly downward.
std::vector<bool> brute_finite_high(const OcMdp& a);

}  // namespace testsupport
