#pragma once

#include "ocmdp/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ocmdp {

struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;  // literals: +v / -v, variables 1..num_vars
};

/// Parses DIMACS CNF ("c" comments, one "p cnf V C" header, 0-terminated
/// clauses). Throws ModelError on malformed input or empty clauses.
CnfFormula parse_dimacs(std::string_view text);

/// Copy with at least five clauses, duplicating the last one.
CnfFormula pad_clauses(const CnfFormula& phi);

/// The first m primes in ascending order.
std::vector<long> first_m_primes(int m);

struct ReductionOptions {
    /// Replace the 1/n clause fan-out by a balanced tree of 1/2 coins.
    bool binary_split = false;
};

struct ReductionOutput {
    OcMdp A;
    int p_state = -1;
    BigInt K;       // product of the first m primes
    BigInt N;       // K(n+1) - n + 4
    int clauses = 0;  // n after padding
    int relays = 0;   // relay states inserted to keep (source, target) pairs unique
    int split_states = 0;
};

/// Counter-decreasing instance: per-variable prime cycles, clause choices,
/// the fan-out state and the delay chain back to p.
ReductionOutput reduce_sat(const CnfFormula& phi, const ReductionOptions& opt = {});

/// G_k: states <prefix>0..<prefix>k, all stochastic; <prefix>i (i >= 1) moves
/// +1 to <prefix>(i-1) or <prefix>k with probability 1/2; <prefix>0 loops
/// with delta 0. The start state is <prefix>k.
OcMdp chain_gadget(int k, const std::string& prefix = "p");

struct UnitCounterOutput {
    ReductionOutput base;
    OcMdp B;
    int q1_state = -1;  // start, at counter 1
    int p_state = -1;
    long m2 = 0;
    BigInt unsat_value;  // (n+2)(2^(m^2+1) - 1) - 6
};

/// G_{m^2} whose sink is replaced by p of reduce_sat(phi).
UnitCounterOutput reduce_sat_unit_counter(const CnfFormula& phi, const ReductionOptions& opt = {});

}  // namespace ocmdp
