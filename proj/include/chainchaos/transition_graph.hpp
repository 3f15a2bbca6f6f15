#pragma once

#include <algorithm>
#include <numeric>
#include <queue>
#include <vector>

#include "chainchaos/errors.hpp"
#include "chainchaos/finite_system.hpp"

namespace chainchaos {

// jump graph at tolerance delta: u -> v when some successor of u lies
// within delta of v
struct delta_graph {
    double delta = 0;
    std::vector<std::vector<int>> adj;
    int n() const { return static_cast<int>(adj.size()); }
};

inline delta_graph build_delta_graph(const finite_system& fs, double delta) {
    if (delta < 0 || !std::isfinite(delta))
        throw bad_delta_error("delta = " + fmt_double(delta));
    const int n = fs.n();
    delta_graph g;
    g.delta = delta;
    g.adj.resize(n);
    std::vector<char> row(n);
    for (int u = 0; u < n; ++u) {
        std::fill(row.begin(), row.end(), 0);
        for (int z : fs.succ[u]) {
            if (delta == 0) {
                row[z] = 1;
                continue;
            }
            for (int v = 0; v < n; ++v)
                if (!row[v] && fs.dist(z, v) <= delta) row[v] = 1;
        }
        for (int v = 0; v < n; ++v)
            if (row[v]) g.adj[u].push_back(v);
    }
    return g;
}

// strongly connected components, iterative Tarjan; ids are assigned in pop
// order, so every edge u -> v has comp[u] >= comp[v] (sinks first)
struct scc_result {
    std::vector<int> comp;
    int count = 0;
};

inline scc_result strongly_connected_components(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    scc_result out;
    out.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    int next_index = 0;
    struct frame {
        int v;
        size_t edge;
    };
    std::vector<frame> call;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& f = call.back();
            const int v = f.v;
            if (f.edge == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.edge < adj[v].size()) {
                const int w = adj[v][f.edge++];
                if (index[w] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    out.comp[w] = out.count;
                    if (w == v) break;
                }
                ++out.count;
            }
            call.pop_back();
            if (!call.empty()) {
                const int parent = call.back().v;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return out;
}

// full chain-level picture of a finite system at one delta
struct chain_structure {
    delta_graph g;
    std::vector<int> comp;                      // scc id per vertex, sink-first
    int comp_count = 0;
    std::vector<std::vector<int>> comp_vertices;
    std::vector<char> comp_cyclic;              // component contains a cycle
    std::vector<char> recurrent;                // per vertex
    std::vector<int> recurrent_comps;           // ascending comp ids
    std::vector<std::vector<char>> comp_reach;  // reflexive reachability over comps
};

inline chain_structure build_chain_structure(const finite_system& fs, double delta) {
    chain_structure cs;
    cs.g = build_delta_graph(fs, delta);
    const int n = cs.g.n();
    auto scc = strongly_connected_components(cs.g.adj);
    cs.comp = std::move(scc.comp);
    cs.comp_count = scc.count;
    cs.comp_vertices.resize(cs.comp_count);
    for (int v = 0; v < n; ++v) cs.comp_vertices[cs.comp[v]].push_back(v);

    cs.comp_cyclic.assign(cs.comp_count, 0);
    for (int v = 0; v < n; ++v)
        for (int w : cs.g.adj[v])
            if (cs.comp[v] == cs.comp[w]) cs.comp_cyclic[cs.comp[v]] = 1;

    cs.recurrent.assign(n, 0);
    for (int v = 0; v < n; ++v) cs.recurrent[v] = cs.comp_cyclic[cs.comp[v]];
    for (int c = 0; c < cs.comp_count; ++c)
        if (cs.comp_cyclic[c]) cs.recurrent_comps.push_back(c);

    // sink-first ids let one ascending sweep fill the closure
    cs.comp_reach.assign(cs.comp_count, std::vector<char>(cs.comp_count, 0));
    for (int c = 0; c < cs.comp_count; ++c) cs.comp_reach[c][c] = 1;
    for (int c = 0; c < cs.comp_count; ++c)
        for (int v : cs.comp_vertices[c])
            for (int w : cs.g.adj[v]) {
                const int d = cs.comp[w];
                if (d == c) continue;
                for (int t = 0; t < cs.comp_count; ++t)
                    if (cs.comp_reach[d][t]) cs.comp_reach[c][t] = 1;
            }
    return cs;
}

// reachability by a path with at least one edge
inline bool vertex_reach(const chain_structure& cs, int u, int v) {
    for (int w : cs.g.adj[u])
        if (cs.comp_reach[cs.comp[w]][cs.comp[v]]) return true;
    return false;
}

inline bool chain_recurrent_vertex(const chain_structure& cs, int v) {
    return cs.recurrent[v] != 0;
}

// gcd of cycle lengths within one recurrent component
inline int component_period(const chain_structure& cs, int comp_id) {
    if (comp_id < 0 || comp_id >= cs.comp_count) throw not_a_component_error("bad component id");
    if (!cs.comp_cyclic[comp_id])
        throw not_strongly_connected_error("component " + std::to_string(comp_id) +
                                           " has no cycle");
    const auto& verts = cs.comp_vertices[comp_id];
    std::vector<int> level(cs.g.n(), -1);
    std::queue<int> q;
    level[verts[0]] = 0;
    q.push(verts[0]);
    int g = 0;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int w : cs.g.adj[u]) {
            if (cs.comp[w] != comp_id) continue;
            if (level[w] == -1) {
                level[w] = level[u] + 1;
                q.push(w);
            } else {
                g = std::gcd(g, std::abs(level[u] + 1 - level[w]));
            }
        }
    }
    return g == 0 ? 1 : g;
}

inline bool chain_transitive(const chain_structure& cs) {
    return cs.comp_count == 1 && cs.comp_cyclic[0];
}

inline bool chain_mixing(const chain_structure& cs) {
    return chain_transitive(cs) && component_period(cs, 0) == 1;
}

// a recurrent component is stable when every jump path out of it stays
// within eps of the component
inline std::vector<char> stable_components(const chain_structure& cs, const finite_system& fs,
                                           double eps) {
    if (eps < 0 || !std::isfinite(eps)) throw bad_threshold_error("eps = " + fmt_double(eps));
    std::vector<char> stable(cs.comp_count, 0);
    const int n = cs.g.n();
    std::vector<char> seen(n);
    for (int c : cs.recurrent_comps) {
        std::fill(seen.begin(), seen.end(), 0);
        std::queue<int> q;
        for (int v : cs.comp_vertices[c]) {
            seen[v] = 1;
            q.push(v);
        }
        bool ok = true;
        while (!q.empty() && ok) {
            const int u = q.front();
            q.pop();
            for (int w : cs.g.adj[u]) {
                if (seen[w]) continue;
                seen[w] = 1;
                double best = fs.diam + 1;
                for (int v : cs.comp_vertices[c]) best = std::min(best, fs.dist(w, v));
                if (best > eps) {
                    ok = false;
                    break;
                }
                q.push(w);
            }
        }
        stable[c] = ok;
    }
    return stable;
}

// every vertex can follow jump edges into some stable component
struct reach_stable_report {
    bool all_reach = true;
    std::vector<int> failing;  // vertices with no route into a stable component
    int stable_count = 0;
};

inline reach_stable_report verify_every_point_reaches_stable(const chain_structure& cs,
                                                             const std::vector<char>& stable) {
    const int n = cs.g.n();
    std::vector<std::vector<int>> radj(n);
    for (int u = 0; u < n; ++u)
        for (int w : cs.g.adj[u]) radj[w].push_back(u);
    std::vector<char> reaches(n, 0);
    std::queue<int> q;
    reach_stable_report rep;
    for (int c = 0; c < cs.comp_count; ++c) {
        if (c < static_cast<int>(stable.size()) && stable[c]) {
            ++rep.stable_count;
            for (int v : cs.comp_vertices[c]) {
                reaches[v] = 1;
                q.push(v);
            }
        }
    }
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int p : radj[u])
            if (!reaches[p]) {
                reaches[p] = 1;
                q.push(p);
            }
    }
    for (int v = 0; v < n; ++v)
        if (!reaches[v]) rep.failing.push_back(v);
    rep.all_reach = rep.failing.empty();
    return rep;
}

} // namespace chainchaos
