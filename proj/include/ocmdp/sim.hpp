#pragma once

#include "ocmdp/approx.hpp"
#include "ocmdp/model.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace ocmdp {

/// Name of the pinned generator; bump when the sampling scheme changes.
inline constexpr std::string_view kPrngName = "splitmix64-v1";

/// SplitMix64 (Steele, Lea, Flood): state += golden gamma, then mix.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();

private:
    std::uint64_t state_;
};

struct RunOutcome {
    bool terminated = false;
    long steps = 0;
    bool capped = false;
    long switches = 0;
    long final_counter = 0;
    int final_state = 0;
};

struct Estimate {
    double mean = 0;
    double stderr_ = 0;
    long n = 0;
    long cap_hits = 0;
};

/// Precomputed sampling tables for one model. Stochastic states pick the
/// first rule whose cumulative threshold ceil(P(rule <= r) * 2^64) exceeds a
/// uniform 64-bit draw.
class Simulator {
public:
    explicit Simulator(const OcMdp& a);

    RunOutcome run(const FiniteStrategy& s, const Config& c, std::uint64_t seed, long step_cap) const;
    /// Rule sampled at stochastic state q for the draw u.
    int sample(int q, std::uint64_t u) const;
    const std::vector<int>& mec_of() const { return mec_of_; }

private:
    const OcMdp* a_;
    std::vector<std::vector<unsigned __int128>> thresholds_;
    std::vector<int> mec_of_;
};

RunOutcome simulate_run(const OcMdp& a, const FiniteStrategy& s, const Config& c, std::uint64_t seed,
                        long step_cap);

/// Mean and standard error of T over the terminated runs; runs hitting the
/// step cap are only counted in cap_hits. Run r uses seed base_seed + r.
Estimate estimate_expected_T(const OcMdp& a, const FiniteStrategy& s, const Config& c, long n, long step_cap,
                             std::uint64_t base_seed);

/// Frequency of runs from start(1) that reach `sink` with counter >= 2^k, with
/// binomial standard error. The counter of a chain gadget never decreases, so
/// a run capped with counter >= 2^k counts as a success.
Estimate estimate_pump_probability(const OcMdp& g, int start, int sink, int k, long n, long step_cap,
                                   std::uint64_t base_seed);

/// Rational over-bound c' = 1/(1 + p_min^|Q| / (2|Q|)) of the switch decay rate.
Rational switch_rate_bound(const OcMdp& a);

/// 8|Q| c'^(k-1) / (1 - c'): the bound on P(W >= k).
double switch_tail_bound(const OcMdp& a, long k);

}  // namespace ocmdp
