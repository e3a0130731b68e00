#include "ocmdp/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ocmdp {

std::string_view kind_name(StateKind k) {
    return k == StateKind::stochastic ? "stochastic" : "choice";
}

ModelError::ModelError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

}  // namespace

OcMdp::OcMdp(std::vector<State> states, std::vector<Rule> rules)
    : states_(std::move(states)), rules_(std::move(rules)), out_(states_.size()) {
    std::set<std::string> names;
    for (const auto& s : states_) {
        if (!valid_name(s.name)) throw ModelError("invalid state name '" + s.name + "'");
        if (!names.insert(s.name).second) throw ModelError("duplicate state '" + s.name + "'");
    }
    std::set<std::pair<int, int>> pairs;
    const int n = num_states();
    for (int r = 0; r < num_rules(); ++r) {
        auto& rule = rules_[r];
        if (rule.src < 0 || rule.src >= n || rule.dst < 0 || rule.dst >= n)
            throw ModelError("rule " + std::to_string(r) + " refers to an unknown state");
        if (rule.delta < -1 || rule.delta > 1) throw ModelError("rule delta must be -1, 0 or +1");
        const auto& src = states_[rule.src];
        if (!pairs.insert({rule.src, rule.dst}).second)
            throw ModelError("duplicate rule pair (" + src.name + ", " + states_[rule.dst].name + ")");
        if (src.kind == StateKind::stochastic) {
            if (!rule.prob) throw ModelError("missing probability on rule out of stochastic state '" + src.name + "'");
            rule.prob->canonicalize();
            if (*rule.prob <= 0) throw ModelError("nonpositive probability on rule out of '" + src.name + "'");
        } else if (rule.prob) {
            throw ModelError("probability given on rule out of choice state '" + src.name + "'");
        }
        out_[rule.src].push_back(r);
    }
    for (int q = 0; q < n; ++q) {
        if (out_[q].empty()) throw ModelError("state '" + states_[q].name + "' has no outgoing rule");
        if (states_[q].kind == StateKind::stochastic) {
            Rational sum = 0;
            for (int r : out_[q]) sum += *rules_[r].prob;
            if (sum != 1)
                throw ModelError("distribution sum ≠ 1 at state '" + states_[q].name + "' (sum " + to_string(sum) + ")");
        }
    }
}

int OcMdp::find_state(std::string_view name) const {
    for (int q = 0; q < num_states(); ++q)
        if (states_[q].name == name) return q;
    return -1;
}

int OcMdp::state_index(std::string_view name) const {
    int q = find_state(name);
    if (q < 0) throw ModelError("unknown state '" + std::string(name) + "'");
    return q;
}

Rational OcMdp::p_min() const {
    Rational m = 1;
    for (const auto& r : rules_)
        if (r.prob && *r.prob < m) m = *r.prob;
    return m;
}

bool operator==(const OcMdp& a, const OcMdp& b) {
    if (a.states_.size() != b.states_.size() || a.rules_.size() != b.rules_.size()) return false;
    for (size_t i = 0; i < a.states_.size(); ++i)
        if (a.states_[i].name != b.states_[i].name || a.states_[i].kind != b.states_[i].kind) return false;
    for (size_t i = 0; i < a.rules_.size(); ++i) {
        const auto& x = a.rules_[i];
        const auto& y = b.rules_[i];
        if (x.src != y.src || x.dst != y.dst || x.delta != y.delta || x.prob != y.prob) return false;
    }
    return true;
}

OcMdp parse_ocmdp(std::string_view text) {
    struct RawRule {
        std::string src, dst;
        int delta;
        std::optional<Rational> prob;
        int line;
    };
    std::vector<State> states;
    std::map<std::string, int> index;
    std::vector<RawRule> raw;
    std::vector<int> declared;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "state") {
            if (tok.size() != 3) throw ModelError("syntax error: expected 'state <name> (stochastic|choice)'", lineno);
            if (!valid_name(tok[1])) throw ModelError("syntax error: invalid state name '" + tok[1] + "'", lineno);
            StateKind k;
            if (tok[2] == "stochastic")
                k = StateKind::stochastic;
            else if (tok[2] == "choice")
                k = StateKind::choice;
            else
                throw ModelError("syntax error: unknown state kind '" + tok[2] + "'", lineno);
            if (index.count(tok[1])) throw ModelError("duplicate state '" + tok[1] + "'", lineno);
            index[tok[1]] = static_cast<int>(states.size());
            states.push_back({tok[1], k});
            declared.push_back(lineno);
        } else if (tok[0] == "rule") {
            if (tok.size() != 4 && tok.size() != 5)
                throw ModelError("syntax error: expected 'rule <src> (-1|0|+1) <dst> [<num>/<den>]'", lineno);
            int delta;
            if (tok[2] == "-1")
                delta = -1;
            else if (tok[2] == "0")
                delta = 0;
            else if (tok[2] == "+1")
                delta = 1;
            else
                throw ModelError("syntax error: delta must be -1, 0 or +1, got '" + tok[2] + "'", lineno);
            std::optional<Rational> prob;
            if (tok.size() == 5) {
                try {
                    prob = parse_rational(tok[4]);
                } catch (const std::invalid_argument&) {
                    throw ModelError("syntax error: bad probability '" + tok[4] + "'", lineno);
                }
            }
            raw.push_back({tok[1], tok[3], delta, prob, lineno});
        } else {
            throw ModelError("syntax error: unknown directive '" + tok[0] + "'", lineno);
        }
    }

    std::vector<Rule> rules;
    std::set<std::pair<int, int>> pairs;
    for (const auto& r : raw) {
        auto s = index.find(r.src);
        auto d = index.find(r.dst);
        if (s == index.end()) throw ModelError("unknown state '" + r.src + "'", r.line);
        if (d == index.end()) throw ModelError("unknown state '" + r.dst + "'", r.line);
        if (!pairs.insert({s->second, d->second}).second)
            throw ModelError("duplicate rule pair (" + r.src + ", " + r.dst + ")", r.line);
        bool stochastic = states[s->second].kind == StateKind::stochastic;
        if (stochastic && !r.prob)
            throw ModelError("missing probability on rule out of stochastic state '" + r.src + "'", r.line);
        if (!stochastic && r.prob)
            throw ModelError("probability given on rule out of choice state '" + r.src + "'", r.line);
        if (r.prob && *r.prob <= 0) throw ModelError("nonpositive probability", r.line);
        rules.push_back({s->second, r.delta, d->second, r.prob});
    }
    // Per-state checks, reported at the state's declaration.
    std::vector<Rational> sum(states.size(), Rational(0));
    std::vector<int> outdeg(states.size(), 0);
    for (const auto& r : rules) {
        ++outdeg[r.src];
        if (r.prob) sum[r.src] += *r.prob;
    }
    for (size_t q = 0; q < states.size(); ++q) {
        if (outdeg[q] == 0) throw ModelError("state '" + states[q].name + "' has no outgoing rule", declared[q]);
        if (states[q].kind == StateKind::stochastic && sum[q] != 1)
            throw ModelError("distribution sum ≠ 1 at state '" + states[q].name + "' (sum " + to_string(sum[q]) + ")",
                             declared[q]);
    }
    return OcMdp(std::move(states), std::move(rules));
}

std::string serialize_ocmdp(const OcMdp& a) {
    std::string s;
    for (const auto& st : a.states()) s += "state " + st.name + " " + std::string(kind_name(st.kind)) + "\n";
    for (const auto& r : a.rules()) {
        s += "rule " + a.state(r.src).name + " " + (r.delta < 0 ? "-1" : r.delta > 0 ? "+1" : "0") + " " +
             a.state(r.dst).name;
        if (r.prob) s += " " + to_fraction_string(*r.prob);
        s += "\n";
    }
    return s;
}

OcMdp restrict_ocmdp(const OcMdp& a, const std::vector<int>& keep, std::vector<int>* rule_map) {
    std::vector<int> local(a.num_states(), -1);
    std::vector<State> states;
    for (int q : keep) {
        local[q] = static_cast<int>(states.size());
        states.push_back(a.state(q));
    }
    std::vector<Rule> rules;
    if (rule_map) rule_map->clear();
    for (int r = 0; r < a.num_rules(); ++r) {
        const auto& rule = a.rule(r);
        if (local[rule.src] < 0) continue;
        if (local[rule.dst] < 0) {
            if (!a.is_choice(rule.src))
                throw ModelError("restriction leaves stochastic state '" + a.state(rule.src).name + "' open");
            continue;
        }
        rules.push_back({local[rule.src], rule.delta, local[rule.dst], rule.prob});
        if (rule_map) rule_map->push_back(r);
    }
    return OcMdp(std::move(states), std::move(rules));
}

int FiniteMdp::add_state(StateKind k) {
    kind_.push_back(k);
    out_.emplace_back();
    return static_cast<int>(kind_.size()) - 1;
}

int FiniteMdp::add_edge(Edge e) {
    int id = static_cast<int>(edges_.size());
    out_.at(e.src).push_back(id);
    edges_.push_back(std::move(e));
    return id;
}

void FiniteMdp::validate() const {
    for (int s = 0; s < num_states(); ++s) {
        if (out_[s].empty()) throw ModelError("finite MDP state " + std::to_string(s) + " has no outgoing edge");
        if (kind_[s] == StateKind::stochastic) {
            Rational sum = 0;
            for (int e : out_[s]) {
                const auto& p = edges_[e].prob;
                if (!p || *p <= 0) throw ModelError("finite MDP stochastic edge without positive probability");
                sum += *p;
            }
            if (sum != 1) throw ModelError("distribution sum ≠ 1 at finite MDP state " + std::to_string(s));
        }
    }
}

FiniteMdp underlying_mdp(const OcMdp& a) {
    FiniteMdp m;
    for (const auto& s : a.states()) m.add_state(s.kind);
    for (int r = 0; r < a.num_rules(); ++r) {
        const auto& rule = a.rule(r);
        m.add_edge({rule.src, rule.dst, rule.prob, std::nullopt, r});
    }
    return m;
}

}  // namespace ocmdp
