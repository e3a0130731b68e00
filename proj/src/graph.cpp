#include "ocmdp/graph.hpp"

#include <algorithm>
#include <deque>

namespace ocmdp {

std::vector<int> scc_ids(const FiniteMdp& m, const std::vector<bool>& alive,
                         const std::vector<bool>* edge_ok, int* num_components) {
    const int n = m.num_states();
    std::vector<int> comp(n, -1), index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int counter = 0, ncomp = 0;

    auto usable = [&](int e) {
        const auto& ed = m.edge(e);
        return alive[ed.dst] && (!edge_ok || (*edge_ok)[e]);
    };

    struct Frame {
        int v;
        size_t next;
    };
    std::vector<Frame> call;
    for (int root = 0; root < n; ++root) {
        if (!alive[root] || index[root] >= 0) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& f = call.back();
            const auto& outs = m.out(f.v);
            if (f.next < outs.size()) {
                int e = outs[f.next++];
                if (!usable(e)) continue;
                int w = m.edge(e).dst;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            int v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
        }
    }
    if (num_components) *num_components = ncomp;
    return comp;
}

namespace {

std::vector<std::vector<int>> group(const std::vector<int>& id, int count) {
    std::vector<std::vector<int>> out(count);
    for (int s = 0; s < static_cast<int>(id.size()); ++s)
        if (id[s] >= 0) out[id[s]].push_back(s);
    std::erase_if(out, [](const auto& v) { return v.empty(); });
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace

MecDecomposition mec_decompose(const FiniteMdp& m) {
    const int n = m.num_states();
    std::vector<bool> alive(n, true);
    std::vector<int> comp(n, 0);
    std::vector<bool> edge_ok(m.num_edges());
    int ncomp = 0;
    while (true) {
        for (int e = 0; e < m.num_edges(); ++e) {
            const auto& ed = m.edge(e);
            edge_ok[e] = alive[ed.src] && alive[ed.dst] && comp[ed.src] == comp[ed.dst];
        }
        comp = scc_ids(m, alive, &edge_ok, &ncomp);
        bool removed = false;
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            bool keep;
            if (m.is_choice(s)) {
                keep = false;
                for (int e : m.out(s)) {
                    int d = m.edge(e).dst;
                    if (alive[d] && comp[d] == comp[s]) keep = true;
                }
            } else {
                keep = true;
                for (int e : m.out(s)) {
                    int d = m.edge(e).dst;
                    if (!alive[d] || comp[d] != comp[s]) keep = false;
                }
            }
            if (!keep) {
                alive[s] = false;
                removed = true;
            }
        }
        if (!removed) break;
        for (int s = 0; s < n; ++s)
            if (!alive[s]) comp[s] = -1;
    }
    MecDecomposition dec;
    for (int s = 0; s < n; ++s)
        if (!alive[s]) comp[s] = -1;
    dec.mecs = group(comp, ncomp);
    dec.mec_of.assign(n, -1);
    for (int c = 0; c < static_cast<int>(dec.mecs.size()); ++c)
        for (int s : dec.mecs[c]) dec.mec_of[s] = c;
    return dec;
}

ReachResult almost_sure_reach(const FiniteMdp& m, const std::vector<bool>& target, const std::vector<bool>* edge_ok) {
    const int n = m.num_states();
    std::vector<std::vector<int>> in_edges(n);
    for (int e = 0; e < m.num_edges(); ++e) in_edges[m.edge(e).dst].push_back(e);
    auto allowed = [&](int e) { return !edge_ok || (*edge_ok)[e]; };

    std::vector<bool> Z(n, true);
    std::vector<int> choice_count(n, 0);
    for (int s = 0; s < n; ++s)
        if (m.is_choice(s))
            for (int e : m.out(s))
                if (allowed(e)) ++choice_count[s];

    std::vector<bool> Y(n);
    std::deque<int> queue;
    while (true) {
        // States of Z that reach the target with positive probability inside Z.
        std::fill(Y.begin(), Y.end(), false);
        for (int s = 0; s < n; ++s)
            if (target[s] && Z[s]) {
                Y[s] = true;
                queue.push_back(s);
            }
        while (!queue.empty()) {
            int t = queue.front();
            queue.pop_front();
            for (int e : in_edges[t]) {
                int s = m.edge(e).src;
                if (!Z[s] || Y[s]) continue;
                if (m.is_choice(s) && !allowed(e)) continue;
                Y[s] = true;
                queue.push_back(s);
            }
        }
        std::vector<int> bad;
        for (int s = 0; s < n; ++s)
            if (Z[s] && !Y[s]) bad.push_back(s);
        if (bad.empty()) break;
        // Remove the bad states and everything forced into them.
        for (int s : bad) {
            Z[s] = false;
            queue.push_back(s);
        }
        while (!queue.empty()) {
            int t = queue.front();
            queue.pop_front();
            for (int e : in_edges[t]) {
                int s = m.edge(e).src;
                if (!Z[s] || target[s]) continue;
                if (m.is_choice(s)) {
                    if (!allowed(e)) continue;
                    if (--choice_count[s] > 0) continue;
                }
                Z[s] = false;
                queue.push_back(s);
            }
        }
    }

    ReachResult res;
    res.in = Z;
    res.layer.assign(n, -1);
    res.witness.assign(n, -1);
    for (int s = 0; s < n; ++s)
        if (target[s]) {
            res.layer[s] = 0;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (int e : in_edges[t]) {
            int s = m.edge(e).src;
            if (!Z[s] || res.layer[s] >= 0) continue;
            if (m.is_choice(s) && !allowed(e)) continue;
            res.layer[s] = res.layer[t] + 1;
            queue.push_back(s);
        }
    }
    for (int s = 0; s < n; ++s) {
        if (!m.is_choice(s)) continue;
        int pick = -1;
        if (Z[s] && !target[s]) {
            for (int e : m.out(s)) {
                int d = m.edge(e).dst;
                if (allowed(e) && res.layer[d] >= 0 && res.layer[d] < res.layer[s]) {
                    pick = e;
                    break;
                }
            }
        } else if (Z[s]) {
            for (int e : m.out(s))
                if (allowed(e) && Z[m.edge(e).dst]) {
                    pick = e;
                    break;
                }
        }
        if (pick < 0)
            for (int e : m.out(s))
                if (allowed(e)) {
                    pick = e;
                    break;
                }
        if (pick < 0) pick = m.out(s).front();
        res.witness[s] = pick;
    }
    return res;
}

std::vector<std::vector<int>> bsccs_of_induced_chain(const FiniteMdp& m, const std::vector<int>& strategy) {
    const int n = m.num_states();
    std::vector<bool> edge_ok(m.num_edges(), false);
    for (int s = 0; s < n; ++s) {
        if (m.is_choice(s))
            edge_ok.at(strategy.at(s)) = true;
        else
            for (int e : m.out(s)) edge_ok[e] = true;
    }
    std::vector<bool> alive(n, true);
    int ncomp = 0;
    auto comp = scc_ids(m, alive, &edge_ok, &ncomp);
    std::vector<bool> bottom(ncomp, true);
    for (int e = 0; e < m.num_edges(); ++e) {
        if (!edge_ok[e]) continue;
        const auto& ed = m.edge(e);
        if (comp[ed.src] != comp[ed.dst]) bottom[comp[ed.src]] = false;
    }
    for (int s = 0; s < n; ++s)
        if (!bottom[comp[s]]) comp[s] = -1;
    return group(comp, ncomp);
}

int transient_successor_bound(const OcMdp& a, const MecDecomposition& dec) {
    const int n = a.num_states();
    int best = 1;
    std::vector<int> seen(n, -1);
    std::vector<int> stack;
    for (int q = 0; q < n; ++q) {
        if (dec.mec_of[q] >= 0) continue;
        int count = 0;
        stack.push_back(q);
        seen[q] = q;
        while (!stack.empty()) {
            int s = stack.back();
            stack.pop_back();
            ++count;
            for (int r : a.out(s)) {
                int d = a.rule(r).dst;
                if (dec.mec_of[d] < 0 && seen[d] != q) {
                    seen[d] = q;
                    stack.push_back(d);
                }
            }
        }
        best = std::max(best, count);
    }
    return best;
}

bool strongly_connected(const FiniteMdp& m) {
    if (m.num_states() == 0) return false;
    std::vector<bool> alive(m.num_states(), true);
    int ncomp = 0;
    scc_ids(m, alive, nullptr, &ncomp);
    return ncomp == 1;
}

}  // namespace ocmdp
