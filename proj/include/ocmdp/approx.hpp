#pragma once

#include "ocmdp/bounds.hpp"
#include "ocmdp/finmdp.hpp"
#include "ocmdp/graph.hpp"
#include "ocmdp/lp.hpp"
#include "ocmdp/model.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ocmdp {

struct QfinResult {
    MecDecomposition dec;
    std::vector<MecTrend> mecs;
};

/// MECs, per-MEC trends, H, Q_<0 = Q_fin (and t_q when Q_fin is nonempty).
QfinResult compute_qfin(const OcMdp& a);

bool is_value_finite(const OcMdp& a, const Config& c);
bool is_value_finite(const OcMdp& a, const QfinResult& qf, const Config& c);

struct Provenance {
    Rational eps_requested;
    ExtRational nu;
    BigInt k_required;
    BigInt k_used;
    std::string mode;
    std::vector<std::pair<std::string, std::string>> constants;
};

/// Threshold-switch strategy: a counter-indexed table below B, a counterless
/// tail from the first time the counter reaches B on.
class FiniteStrategy {
public:
    FiniteStrategy() = default;
    FiniteStrategy(int num_states, long threshold, std::vector<int> low, std::vector<int> tail);

    long threshold() const { return B_; }
    int num_states() const { return n_; }
    /// Rule chosen at a choice state below the threshold (1 <= j < B).
    int low(int q, long j) const { return low_.at(static_cast<size_t>(j - 1) * n_ + q); }
    int tail(int q) const { return tail_.at(q); }
    const std::vector<int>& low_table() const { return low_; }
    const std::vector<int>& tail_table() const { return tail_; }

    /// Rule to play at q with counter j; `switched` is the permanent
    /// switch flag, updated here.
    int choose(int q, long j, bool& switched) const;

    Provenance provenance;

    friend bool operator==(const FiniteStrategy& a, const FiniteStrategy& b) {
        return a.n_ == b.n_ && a.B_ == b.B_ && a.low_ == b.low_ && a.tail_ == b.tail_;
    }

private:
    int n_ = 0;
    long B_ = 1;
    std::vector<int> low_;
    std::vector<int> tail_;
};

/// Strategy that plays `low` (an SSP strategy on g) below B and `tail` from B on.
FiniteStrategy stitch(const TruncatedMdp& g, const std::vector<int>& low, const std::vector<int>& tail, long B);

/// Pure counterless strategy (B = 1).
FiniteStrategy counterless(const OcMdp& a, const std::vector<int>& tail);

std::string export_strategy(const OcMdp& a, const FiniteStrategy& s);
/// Throws ModelError on malformed input or a table that is not total.
FiniteStrategy import_strategy(const OcMdp& a, std::string_view text);

struct ApproxResult {
    ExtRational value;
    std::optional<FiniteStrategy> strategy;
    ExtRational achieved_eps;
    /// The truncated MDP and its solution behind `value` (absent for the
    /// trivial and infinite cases).
    std::shared_ptr<const TruncatedMdp> truncated;
    std::shared_ptr<const SolveResult> table;
};

/// Configurations above this many states are refused unless cap_k is given.
inline constexpr long kMaxTruncatedStates = 4'000'000;

ApproxResult approx_value(const OcMdp& a, const Config& c, const Rational& eps, std::optional<long> cap_k = {});

/// Values of all q(j), 0 <= j <= |Q|: exact SSP on G_|Q| whose boundary edges
/// into r(|Q|) earn 1 + nu_r (nu_r from approx_value), +infinity for r not in
/// Q_fin. Indexed [j][q].
std::vector<std::vector<ExtRational>> exact_low_counter_values(const OcMdp& a, const Rational& eps,
                                                               std::optional<long> cap_k = {});

}  // namespace ocmdp
