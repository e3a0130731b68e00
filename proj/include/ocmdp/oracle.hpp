#pragma once

#include "ocmdp/model.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ocmdp {

/// Per-state affine upper seed slope*j + intercept; nullopt seeds +infinity.
using AffineSeed = std::vector<std::optional<std::pair<Rational, Rational>>>;

/// Value brackets on counters 0..cap, indexed [j][q].
struct Bracket {
    long cap = 0;
    long iterations = 0;
    std::vector<std::vector<Rational>> lower;
    std::vector<std::vector<ExtRational>> upper;
};

/// Exact Jacobi value iteration on counters 0..cap. The lower sequence starts
/// from 0 and holds the cap configurations at 0; the upper sequence starts
/// from the seed, holds the cap configurations at the seed and takes
/// u <- min(u, T u). Lower <= Val always; Val <= upper whenever the seed is an
/// upper bound of the value.
Bracket bracket_values(const OcMdp& a, long cap, long iterations, const AffineSeed& seed);

/// Limit of the lower iteration: expected steps until counter 0 or the cap,
/// optimised exactly. A lower bound on the value, indexed [j][q].
std::vector<std::vector<ExtRational>> lower_fixpoint(const OcMdp& a, long cap);

/// Exact optimal expected steps to counter 0 on counters 0..cap, where
/// reaching r(cap) ends the run with extra cost boundary[r] (absent: the
/// cap configurations are absorbing with value +infinity). Indexed [j][q].
std::vector<std::vector<ExtRational>> exact_small_solve(const OcMdp& a, long cap,
                                                        const std::optional<std::vector<ExtRational>>& boundary = {});

/// Evidence that Val(c) >= threshold (or is infinite): the smallest cap from
/// a doubling sequence whose lower fixpoint at c reaches the threshold.
struct Divergence {
    bool reached = false;
    long cap = 0;
    ExtRational lower;
};

Divergence divergence_certificate(const OcMdp& a, const Config& c, const Rational& threshold, long max_cap);

}  // namespace ocmdp
