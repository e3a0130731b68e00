#pragma once

#include "ocmdp/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ocmdp {

enum class StateKind { stochastic, choice };

std::string_view kind_name(StateKind k);

/// Raised for malformed model text or a violated model invariant. `line` is
/// 1-based, or 0 when the error is not tied to a line.
class ModelError : public std::runtime_error {
public:
    ModelError(const std::string& what, int line = 0);
    int line() const { return line_; }

private:
    int line_;
};

struct State {
    std::string name;
    StateKind kind;
};

struct Rule {
    int src;
    int delta;  // -1, 0 or +1
    int dst;
    std::optional<Rational> prob;  // present iff src is stochastic
};

/// A one-counter MDP. Immutable once constructed; the constructor validates
/// every invariant and throws ModelError on violation.
class OcMdp {
public:
    OcMdp() = default;
    OcMdp(std::vector<State> states, std::vector<Rule> rules);

    int num_states() const { return static_cast<int>(states_.size()); }
    int num_rules() const { return static_cast<int>(rules_.size()); }
    const std::vector<State>& states() const { return states_; }
    const std::vector<Rule>& rules() const { return rules_; }
    const State& state(int q) const { return states_.at(q); }
    const Rule& rule(int r) const { return rules_.at(r); }
    StateKind kind(int q) const { return states_.at(q).kind; }
    bool is_choice(int q) const { return states_.at(q).kind == StateKind::choice; }
    /// Rule indices leaving q, in file order.
    const std::vector<int>& out(int q) const { return out_.at(q); }

    /// State index by name, or -1.
    int find_state(std::string_view name) const;
    /// State index by name; throws ModelError when unknown.
    int state_index(std::string_view name) const;

    /// Smallest positive transition probability (1 when there is none).
    Rational p_min() const;

    friend bool operator==(const OcMdp& a, const OcMdp& b);

private:
    std::vector<State> states_;
    std::vector<Rule> rules_;
    std::vector<std::vector<int>> out_;
};

/// A configuration q(i).
struct Config {
    int state;
    BigInt counter;
};

OcMdp parse_ocmdp(std::string_view text);
std::string serialize_ocmdp(const OcMdp& a);

/// Sub-model on `keep` (sorted state ids). Choice-state rules leaving `keep`
/// are dropped; a stochastic state with a successor outside `keep` is a
/// precondition violation. `rule_map`, if given, receives the original rule
/// index of each retained rule.
OcMdp restrict_ocmdp(const OcMdp& a, const std::vector<int>& keep, std::vector<int>* rule_map = nullptr);

/// Finite MDP edge. `label` links back to the generating rule (-1 if none).
struct Edge {
    int src;
    int dst;
    std::optional<Rational> prob;
    std::optional<Rational> reward;
    int label = -1;
};

class FiniteMdp {
public:
    int add_state(StateKind k);
    int add_edge(Edge e);

    int num_states() const { return static_cast<int>(kind_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    StateKind kind(int s) const { return kind_.at(s); }
    bool is_choice(int s) const { return kind_[s] == StateKind::choice; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& out(int s) const { return out_[s]; }
    Edge& mutable_edge(int e) { return edges_[e]; }

    /// Throws ModelError unless the edge relation is total and every
    /// stochastic distribution is positive and sums to 1.
    void validate() const;

private:
    std::vector<StateKind> kind_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_;
};

/// M_A: same states, one edge per rule (edge index == rule index).
FiniteMdp underlying_mdp(const OcMdp& a);

}  // namespace ocmdp
