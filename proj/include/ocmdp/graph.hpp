#pragma once

#include "ocmdp/model.hpp"

#include <optional>
#include <vector>

namespace ocmdp {

/// MEC structure of M_A plus the trend data attached by later stages.
struct MecDecomposition {
    std::vector<std::vector<int>> mecs;  // sorted, ordered by smallest member
    std::vector<int> mec_of;             // -1 for states in no end component
    std::vector<Rational> trend;         // per MEC, filled by the trend LP
    std::vector<bool> H;                 // union of MECs with negative trend
    std::vector<bool> Q_lt0;             // states reaching H almost surely
    std::vector<bool> Q_fin;             // equal to Q_lt0
    std::vector<std::optional<Rational>> t_q;  // trends t_q on Q_fin
};

/// Strongly connected components of the graph restricted to `alive` states
/// and edges accepted by `edge_ok` (null accepts all). Returns the component
/// id per state (-1 when not alive); components are numbered in reverse
/// topological order (sinks first).
std::vector<int> scc_ids(const FiniteMdp& m, const std::vector<bool>& alive,
                         const std::vector<bool>* edge_ok, int* num_components);

MecDecomposition mec_decompose(const FiniteMdp& m);

struct ReachResult {
    std::vector<bool> in;     // states that reach the target almost surely
    std::vector<int> witness; // chosen edge per choice state (-1 otherwise)
    std::vector<int> layer;   // attractor layer (0 for targets, -1 outside)
};

/// Almost-sure reachability. Witness strategies follow the layered attractor:
/// each choice state takes its lowest-order edge into a strictly lower layer.
/// `edge_ok` optionally restricts the edges available at choice states.
ReachResult almost_sure_reach(const FiniteMdp& m, const std::vector<bool>& target,
                              const std::vector<bool>* edge_ok = nullptr);

/// Bottom SCCs of the Markov chain obtained by fixing `strategy` (edge index
/// per choice state, ignored for stochastic states).
std::vector<std::vector<int>> bsccs_of_induced_chain(const FiniteMdp& m, const std::vector<int>& strategy);

/// Maximal number of non-MEC states reachable from a non-MEC state along
/// MEC-avoiding paths (including itself); 1 when every state is in a MEC.
int transient_successor_bound(const OcMdp& a, const MecDecomposition& dec);

/// True iff M is strongly connected.
bool strongly_connected(const FiniteMdp& m);

}  // namespace ocmdp
