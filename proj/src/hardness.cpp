#include "ocmdp/hardness.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ocmdp {

CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula f;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool header = false;
    long declared = 0;
    std::vector<int> cur;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first == "c" || first[0] == 'c' || first == "%") continue;
        if (first == "p") {
            std::string fmt;
            long v = -1, c = -1;
            if (header || !(ls >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
                throw ModelError("bad DIMACS header", lineno);
            header = true;
            f.num_vars = static_cast<int>(v);
            declared = c;
            continue;
        }
        if (!header) throw ModelError("clause before the DIMACS header", lineno);
        std::istringstream toks(line);
        for (std::string t; toks >> t;) {
            long lit;
            try {
                size_t used = 0;
                lit = std::stol(t, &used);
                if (used != t.size()) throw std::invalid_argument(t);
            } catch (const std::exception&) {
                throw ModelError("bad literal '" + t + "'", lineno);
            }
            if (lit == 0) {
                if (cur.empty()) throw ModelError("empty clause", lineno);
                f.clauses.push_back(cur);
                cur.clear();
            } else {
                if (std::labs(lit) > f.num_vars) throw ModelError("literal out of range: " + t, lineno);
                cur.push_back(static_cast<int>(lit));
            }
        }
    }
    if (!header) throw ModelError("missing DIMACS header");
    if (!cur.empty()) f.clauses.push_back(cur);
    if (f.clauses.empty()) throw ModelError("formula has no clauses");
    if (static_cast<long>(f.clauses.size()) != declared)
        throw ModelError("header declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(f.clauses.size()));
    if (f.num_vars < 1) throw ModelError("formula has no variables");
    return f;
}

CnfFormula pad_clauses(const CnfFormula& phi) {
    if (phi.clauses.empty()) throw std::invalid_argument("formula has no clauses");
    CnfFormula f = phi;
    while (f.clauses.size() < 5) f.clauses.push_back(f.clauses.back());
    return f;
}

std::vector<long> first_m_primes(int m) {
    if (m < 1) throw std::invalid_argument("m must be positive");
    std::vector<long> p;
    for (long c = 2; static_cast<int>(p.size()) < m; ++c) {
        bool prime = true;
        for (long d : p) {
            if (d * d > c) break;
            if (c % d == 0) {
                prime = false;
                break;
            }
        }
        if (prime) p.push_back(c);
    }
    return p;
}

namespace {

/// Accumulates states and rules; a second rule on an existing (src, dst)
/// pair goes through a fresh 0-delta relay state.
class Builder {
public:
    int add_state(const std::string& name, StateKind kind) {
        if (index_.count(name)) throw std::logic_error("duplicate generated state " + name);
        index_[name] = static_cast<int>(states_.size());
        states_.push_back({name, kind});
        return index_[name];
    }
    void add_rule(int src, int delta, int dst, std::optional<Rational> prob) {
        if (pairs_.count({src, dst})) {
            int relay = add_state(states_[src].name + "_relay" + std::to_string(++relays_), StateKind::stochastic);
            rules_.push_back({src, delta, relay, prob});
            rules_.push_back({relay, 0, dst, Rational(1)});
            pairs_.insert({src, relay});
            pairs_.insert({relay, dst});
            return;
        }
        pairs_.insert({src, dst});
        rules_.push_back({src, delta, dst, std::move(prob)});
    }
    int relays() const { return relays_; }
    OcMdp build() const { return OcMdp(states_, rules_); }

private:
    std::vector<State> states_;
    std::vector<Rule> rules_;
    std::map<std::string, int> index_;
    std::set<std::pair<int, int>> pairs_;
    int relays_ = 0;
};

std::string gadget_name(int i, long j, int l) {
    return "x" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(l);
}

/// Everything of reduce_sat except the final OcMdp, so the unit-counter form
/// can extend the same builder.
struct Reduction {
    Builder b;
    int p = -1;
    BigInt K;
    int n = 0;
    int split_states = 0;
};

Reduction build_reduction(const CnfFormula& raw, const ReductionOptions& opt) {
    CnfFormula phi = pad_clauses(raw);
    const int m = phi.num_vars;
    const int n = static_cast<int>(phi.clauses.size());
    Reduction r;
    r.n = n;
    auto primes = first_m_primes(m);
    r.K = 1;
    for (long p : primes) r.K *= p;
    Builder& b = r.b;

    // Prime cycles: row 1 decrements on entry, every later row on exit.
    std::vector<std::vector<int>> entry(m);
    for (int i = 0; i < m; ++i) {
        const long pi = primes[i];
        std::vector<std::vector<int>> q(pi, std::vector<int>(n + 1));
        for (long j = 0; j < pi; ++j)
            for (int l = 0; l <= n; ++l) q[j][l] = b.add_state(gadget_name(i + 1, j + 1, l + 1), StateKind::stochastic);
        for (long j = 0; j < pi; ++j) {
            for (int l = 0; l < n; ++l) b.add_rule(q[j][l], (j == 0 && l == 0) ? -1 : 0, q[j][l + 1], Rational(1));
            b.add_rule(q[j][n], j == 0 ? 0 : -1, q[(j + 1) % pi][0], Rational(1));
            entry[i].push_back(q[j][0]);
        }
    }

    std::vector<int> clause(n);
    for (int l = 0; l < n; ++l) clause[l] = b.add_state("c" + std::to_string(l + 1), StateKind::choice);
    const int qphi = b.add_state("qphi", StateKind::stochastic);
    r.p = b.add_state("p", StateKind::choice);
    std::vector<int> d(n);
    for (int j = 0; j < n; ++j) d[j] = b.add_state("d" + std::to_string(j + 1), StateKind::stochastic);

    for (int l = 0; l < n; ++l) {
        std::set<int> targets;
        for (int lit : phi.clauses[l]) {
            int v = std::abs(lit) - 1;
            if (lit > 0)
                targets.insert(entry[v][0]);
            else
                for (size_t j = 1; j < entry[v].size(); ++j) targets.insert(entry[v][j]);
        }
        for (int t : targets) b.add_rule(clause[l], 0, t, std::nullopt);
    }

    if (!opt.binary_split) {
        for (int l = 0; l < n; ++l) b.add_rule(qphi, 0, clause[l], Rational(1, n));
    } else {
        // Balanced coin tree over 2^depth leaves; leaves past n restart at qphi.
        long width = 1;
        while (width < n) width *= 2;
        const int reject = -1;
        std::function<int(long, long, bool)> node = [&](long lo, long hi, bool root) -> int {
            if (lo >= n) return reject;
            if (hi - lo == 1) return clause[lo];
            long mid = (lo + hi) / 2;
            int left = node(lo, mid, false), right = node(mid, hi, false);
            if (left == reject && right == reject) return reject;
            int s = root ? qphi : b.add_state("qphi_" + std::to_string(++r.split_states), StateKind::stochastic);
            b.add_rule(s, 0, left == reject ? qphi : left, Rational(1, 2));
            b.add_rule(s, 0, right == reject ? qphi : right, Rational(1, 2));
            return s;
        };
        if (n == 1)
            b.add_rule(qphi, 0, clause[0], Rational(1));
        else
            node(0, width, true);
    }

    b.add_rule(r.p, 0, qphi, std::nullopt);
    b.add_rule(r.p, 0, d[0], std::nullopt);
    for (int j = 0; j + 1 < n; ++j) b.add_rule(d[j], j == 3 ? -1 : 0, d[j + 1], Rational(1));
    b.add_rule(d[n - 1], 0, r.p, Rational(1));
    return r;
}

ReductionOutput finish(const Reduction& r) {
    ReductionOutput out{r.b.build(), r.p, r.K, r.K * (r.n + 1) - r.n + 4, r.n, r.b.relays(), r.split_states};
    return out;
}

}  // namespace

ReductionOutput reduce_sat(const CnfFormula& phi, const ReductionOptions& opt) {
    return finish(build_reduction(phi, opt));
}

OcMdp chain_gadget(int k, const std::string& prefix) {
    if (k < 1) throw std::invalid_argument("chain gadget needs k >= 1");
    Builder b;
    std::vector<int> p(k + 1);
    for (int i = 0; i <= k; ++i) p[i] = b.add_state(prefix + std::to_string(i), StateKind::stochastic);
    b.add_rule(p[0], 0, p[0], Rational(1));
    for (int i = 1; i <= k; ++i) {
        b.add_rule(p[i], 1, p[i - 1], Rational(1, 2));
        b.add_rule(p[i], 1, p[k], Rational(1, 2));
    }
    return b.build();
}

UnitCounterOutput reduce_sat_unit_counter(const CnfFormula& phi, const ReductionOptions& opt) {
    Reduction r = build_reduction(phi, opt);
    const long m2 = static_cast<long>(phi.num_vars) * phi.num_vars;
    if (m2 > 4096) throw std::invalid_argument("too many variables for the unit-counter form");
    UnitCounterOutput out;
    out.base = finish(r);
    Builder& b = r.b;
    std::vector<int> g(m2 + 1);
    g[0] = r.p;
    for (long i = 1; i <= m2; ++i) g[i] = b.add_state("pump" + std::to_string(i), StateKind::stochastic);
    for (long i = 1; i <= m2; ++i) {
        b.add_rule(g[i], 1, g[i - 1], Rational(1, 2));
        b.add_rule(g[i], 1, g[m2], Rational(1, 2));
    }
    out.B = b.build();
    out.q1_state = g[m2];
    out.p_state = r.p;
    out.m2 = m2;
    BigInt pow2 = 1;
    pow2 <<= static_cast<mp_bitcnt_t>(m2 + 1);
    out.unsat_value = BigInt(r.n + 2) * (pow2 - 1) - 6;
    return out;
}

}  // namespace ocmdp
