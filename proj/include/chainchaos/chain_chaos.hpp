#pragma once

#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chainchaos/transition_graph.hpp"

namespace chainchaos {

// all pair analyses run on the synchronous product of the jump graph with
// itself; pairs are kept implicit as p*n+q so nothing quadratic in edges is
// ever materialized
inline constexpr long long product_state_cap = 1ll << 22;

namespace detail {

inline void check_product_size(int n) {
    const long long total = static_cast<long long>(n) * n;
    if (total > product_state_cap)
        throw state_space_cap_error("product needs " + std::to_string(total) + " states");
}

inline std::vector<std::vector<int>> reverse_adj(const delta_graph& g) {
    std::vector<std::vector<int>> radj(g.n());
    for (int u = 0; u < g.n(); ++u)
        for (int v : g.adj[u]) radj[v].push_back(u);
    return radj;
}

// iterative Tarjan over the implicit product graph, restricted to pairs where
// alive(s) holds; ids are sink-first like the base version
struct product_scc {
    std::vector<int> comp;
    int count = 0;
};

template <class Alive>
product_scc product_tarjan(const delta_graph& g, Alive&& alive) {
    const int n = g.n();
    check_product_size(n);
    const int total = n * n;
    product_scc out;
    out.comp.assign(total, -1);
    std::vector<int> index(total, -1), low(total, 0), stack;
    std::vector<char> on_stack(total, 0);
    struct frame {
        int s, i, j;
    };
    std::vector<frame> call;
    int next_index = 0;
    for (int root = 0; root < total; ++root) {
        if (index[root] != -1 || !alive(root)) continue;
        call.push_back({root, 0, 0});
        while (!call.empty()) {
            frame& f = call.back();
            const int s = f.s;
            if (index[s] == -1) {
                index[s] = low[s] = next_index++;
                stack.push_back(s);
                on_stack[s] = 1;
            }
            const auto& ap = g.adj[s / n];
            const auto& aq = g.adj[s % n];
            bool descended = false;
            while (f.i < static_cast<int>(ap.size())) {
                const int t = ap[f.i] * n + aq[f.j];
                if (++f.j >= static_cast<int>(aq.size())) {
                    f.j = 0;
                    ++f.i;
                }
                if (!alive(t)) continue;
                if (index[t] == -1) {
                    call.push_back({t, 0, 0});
                    descended = true;
                    break;
                }
                if (on_stack[t]) low[s] = std::min(low[s], index[t]);
            }
            if (descended) continue;
            if (low[s] == index[s]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    out.comp[w] = out.count;
                    if (w == s) break;
                }
                ++out.count;
            }
            call.pop_back();
            if (!call.empty()) low[call.back().s] = std::min(low[call.back().s], low[s]);
        }
    }
    return out;
}

// pairwise distance table; product analyses hit it heavily
struct dist_table {
    int n = 0;
    std::vector<double> d;
    double at(int p, int q) const { return d[static_cast<size_t>(p) * n + q]; }
};

inline dist_table make_dist_table(const finite_system& fs) {
    dist_table t;
    t.n = fs.n();
    t.d.resize(static_cast<size_t>(t.n) * t.n);
    for (int p = 0; p < t.n; ++p)
        for (int q = 0; q < t.n; ++q) t.d[static_cast<size_t>(p) * t.n + q] = fs.dist(p, q);
    return t;
}

} // namespace detail

// every ordered pair can run synchronized jump chains into the diagonal
struct proximal_report {
    bool all_pairs = false;
    int failing_x = -1, failing_y = -1;  // first unreaching pair, if any
};

inline proximal_report chain_proximal_report(const finite_system& fs, const delta_graph& g) {
    const int n = g.n();
    detail::check_product_size(n);
    auto radj = detail::reverse_adj(g);
    std::vector<char> reaches(static_cast<size_t>(n) * n, 0);
    std::deque<int> q;
    for (int p = 0; p < n; ++p) {
        reaches[static_cast<size_t>(p) * n + p] = 1;
        q.push_back(p * n + p);
    }
    while (!q.empty()) {
        const int s = q.front();
        q.pop_front();
        const int p = s / n, r = s % n;
        for (int a : radj[p])
            for (int b : radj[r]) {
                const int t = a * n + b;
                if (!reaches[t]) {
                    reaches[t] = 1;
                    q.push_back(t);
                }
            }
    }
    proximal_report rep;
    rep.all_pairs = true;
    for (int s = 0; s < n * n; ++s)
        if (!reaches[s]) {
            rep.all_pairs = false;
            rep.failing_x = s / n;
            rep.failing_y = s % n;
            break;
        }
    (void)fs;
    return rep;
}

inline bool chain_proximal_at(const finite_system& fs, double delta) {
    return chain_proximal_report(fs, build_delta_graph(fs, delta)).all_pairs;
}

// exactly one stable component, aperiodic, and globally attracting
inline bool chain_proximal_structural(const finite_system& fs, const chain_structure& cs,
                                      double eps) {
    auto stable = stable_components(cs, fs, eps);
    int stable_comp = -1;
    for (int c = 0; c < cs.comp_count; ++c)
        if (stable[c]) {
            if (stable_comp != -1) return false;
            stable_comp = c;
        }
    if (stable_comp == -1) return false;
    if (component_period(cs, stable_comp) != 1) return false;
    return verify_every_point_reaches_stable(cs, stable).all_reach;
}

// how far apart synchronized chains can be driven from each diagonal start
struct sensitivity_report {
    std::vector<double> per_vertex;
    double global = 0;
};

inline sensitivity_report chain_sensitivity_radius(const finite_system& fs,
                                                   const delta_graph& g) {
    const int n = g.n();
    auto table = detail::make_dist_table(fs);
    auto scc = detail::product_tarjan(g, [](int) { return true; });
    std::vector<double> best(scc.count, 0);
    const int total = n * n;
    for (int s = 0; s < total; ++s) {
        double& b = best[scc.comp[s]];
        b = std::max(b, table.at(s / n, s % n));
    }
    // sink-first ids: sweep vertices grouped by ascending component id so every
    // cross edge reads a finished value
    std::vector<int> order(total);
    std::vector<int> offset(scc.count + 1, 0);
    for (int s = 0; s < total; ++s) ++offset[scc.comp[s] + 1];
    for (int c = 0; c < scc.count; ++c) offset[c + 1] += offset[c];
    {
        std::vector<int> cursor = offset;
        for (int s = 0; s < total; ++s) order[cursor[scc.comp[s]]++] = s;
    }
    for (int idx = 0; idx < total; ++idx) {
        const int s = order[idx];
        const auto& ap = g.adj[s / n];
        const auto& aq = g.adj[s % n];
        double& b = best[scc.comp[s]];
        for (int a : ap)
            for (int c2 : aq) b = std::max(b, best[scc.comp[a * n + c2]]);
    }
    sensitivity_report rep;
    rep.per_vertex.resize(n);
    rep.global = std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x) {
        rep.per_vertex[x] = best[scc.comp[x * n + x]];
        rep.global = std::min(rep.global, rep.per_vertex[x]);
    }
    if (n == 0) rep.global = 0;
    return rep;
}

inline sensitivity_report chain_sensitivity_radius(const finite_system& fs, double delta) {
    return chain_sensitivity_radius(fs, build_delta_graph(fs, delta));
}

namespace detail {

// does every pair reach a cycle staying strictly farther apart than e?
inline bool separation_persists(const delta_graph& g, const dist_table& table, double e) {
    const int n = g.n();
    const int total = n * n;
    auto alive = [&](int s) { return table.at(s / n, s % n) > e; };
    auto scc = product_tarjan(g, alive);
    std::vector<int> comp_size(scc.count, 0);
    for (int s = 0; s < total; ++s)
        if (scc.comp[s] >= 0) ++comp_size[scc.comp[s]];
    std::vector<char> marked(total, 0);
    bool any = false;
    for (int s = 0; s < total; ++s) {
        if (scc.comp[s] < 0) continue;
        bool cyclic = comp_size[scc.comp[s]] >= 2;
        if (!cyclic) {
            // singleton class: cyclic only via a self edge
            const int p = s / n, q = s % n;
            const auto& ap = g.adj[p];
            const auto& aq = g.adj[q];
            cyclic = std::find(ap.begin(), ap.end(), p) != ap.end() &&
                     std::find(aq.begin(), aq.end(), q) != aq.end();
        }
        if (cyclic) {
            marked[s] = 1;
            any = true;
        }
    }
    if (!any) return false;
    auto radj = reverse_adj(g);
    std::vector<char> reach = marked;
    std::deque<int> q;
    int seen = 0;
    for (int s = 0; s < total; ++s)
        if (reach[s]) {
            q.push_back(s);
            ++seen;
        }
    while (!q.empty()) {
        const int s = q.front();
        q.pop_front();
        for (int a : radj[s / n])
            for (int b : radj[s % n]) {
                const int t = a * n + b;
                if (!reach[t]) {
                    reach[t] = 1;
                    ++seen;
                    q.push_back(t);
                }
            }
    }
    return seen == total;
}

} // namespace detail

// largest realized distance e such that every pair can reach a cycle kept
// strictly farther apart than e; 0 when no threshold works
inline double property_s_radius(const finite_system& fs, const delta_graph& g) {
    const int n = g.n();
    detail::check_product_size(n);
    auto table = detail::make_dist_table(fs);
    std::vector<double> levels = table.d;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    // feasibility is antitone in e: binary search for the last passing level
    int lo = 0, hi = static_cast<int>(levels.size()) - 1, best = -1;
    while (lo <= hi) {
        const int mid = lo + (hi - lo) / 2;
        if (detail::separation_persists(g, table, levels[mid])) {
            best = mid;
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    return best < 0 ? 0.0 : levels[best];
}

inline double property_s_radius(const finite_system& fs, double delta) {
    return property_s_radius(fs, build_delta_graph(fs, delta));
}

// search one component for a pair whose synchronized futures stay strictly
// farther apart than the threshold
struct distal_witness {
    int x = -1, y = -1;
    double floor = 0;  // smallest separation along the witnessed cycle/orbit
};

inline std::optional<distal_witness> distal_pair_in_component(const finite_system& fs,
                                                              const chain_structure& cs,
                                                              int comp_id, double threshold) {
    if (comp_id < 0 || comp_id >= cs.comp_count)
        throw not_a_component_error("component id " + std::to_string(comp_id));
    if (threshold <= 0) throw bad_threshold_error("threshold = " + fmt_double(threshold));
    const int n = cs.g.n();
    detail::check_product_size(n);
    const auto& verts = cs.comp_vertices[comp_id];
    std::vector<char> in_c(n, 0);
    for (int v : verts) in_c[v] = 1;

    bool single_valued = true;
    for (int v : verts) single_valued &= cs.g.adj[v].size() == 1;

    auto table = detail::make_dist_table(fs);
    if (single_valued) {
        // exact synchronized orbits: finite state, so walk until a repeat
        std::vector<int> stamp(static_cast<size_t>(n) * n, -1);
        int walk = 0;
        for (int x : verts)
            for (int y : verts) {
                if (table.at(x, y) <= threshold) continue;
                ++walk;
                int p = x, q = y;
                double floor = std::numeric_limits<double>::infinity();
                bool far = true;
                while (true) {
                    const int s = p * n + q;
                    if (stamp[s] == walk) break;
                    stamp[s] = walk;
                    const double d = table.at(p, q);
                    if (d <= threshold) {
                        far = false;
                        break;
                    }
                    floor = std::min(floor, d);
                    p = cs.g.adj[p][0];
                    q = cs.g.adj[q][0];
                }
                if (far) return distal_witness{x, y, floor};
            }
        return std::nullopt;
    }

    // multivalued: cycles within the component product staying past a level e.
    // Existence is antitone in e, so push e as high as possible: the surviving
    // cycle has the widest floor
    const int total = n * n;
    struct level_scan {
        int pick_first = -1;
        double pick_floor = 0;
        bool any = false;
    };
    auto scan = [&](double e) {
        auto alive = [&](int s) {
            const int p = s / n, q = s % n;
            return in_c[p] && in_c[q] && table.at(p, q) > e;
        };
        auto scc = detail::product_tarjan(cs.g, alive);
        std::vector<int> comp_size(scc.count, 0);
        std::vector<double> comp_floor(scc.count, std::numeric_limits<double>::infinity());
        std::vector<int> comp_first(scc.count, -1);
        for (int s = 0; s < total; ++s) {
            const int c = scc.comp[s];
            if (c < 0) continue;
            ++comp_size[c];
            comp_floor[c] = std::min(comp_floor[c], table.at(s / n, s % n));
            if (comp_first[c] == -1) comp_first[c] = s;
        }
        level_scan out;
        for (int s = 0; s < total; ++s) {
            const int c = scc.comp[s];
            if (c < 0 || comp_first[c] != s) continue;  // visit each class once
            bool cyclic = comp_size[c] >= 2;
            if (!cyclic) {
                const int p = s / n, q = s % n;
                const auto& ap = cs.g.adj[p];
                const auto& aq = cs.g.adj[q];
                cyclic = std::find(ap.begin(), ap.end(), p) != ap.end() &&
                         std::find(aq.begin(), aq.end(), q) != aq.end();
            }
            if (!cyclic) continue;
            if (!out.any || comp_floor[c] > out.pick_floor ||
                (comp_floor[c] == out.pick_floor && comp_first[c] < out.pick_first)) {
                out.any = true;
                out.pick_floor = comp_floor[c];
                out.pick_first = comp_first[c];
            }
        }
        return out;
    };
    if (!scan(threshold).any) return std::nullopt;
    std::vector<double> levels;
    for (int x : verts)
        for (int y : verts) {
            const double d = table.at(x, y);
            if (d > threshold) levels.push_back(d);
        }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double best_e = threshold;
    int lo = 0, hi = static_cast<int>(levels.size()) - 1;
    while (lo <= hi) {
        const int mid = lo + (hi - lo) / 2;
        if (scan(levels[mid]).any) {
            best_e = levels[mid];
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    auto final_scan = scan(best_e);
    return distal_witness{final_scan.pick_first / n, final_scan.pick_first % n,
                          final_scan.pick_floor};
}

// smallest gap between distinct recurrent components; infinity when fewer
// than two exist
inline double min_intercomponent_distance(const finite_system& fs, const chain_structure& cs) {
    double best = std::numeric_limits<double>::infinity();
    const auto& rc = cs.recurrent_comps;
    for (size_t a = 0; a < rc.size(); ++a)
        for (size_t b = a + 1; b < rc.size(); ++b)
            for (int u : cs.comp_vertices[rc[a]])
                for (int v : cs.comp_vertices[rc[b]]) best = std::min(best, fs.dist(u, v));
    return best;
}

// when the whole graph is one strongly connected piece, aperiodicity, product
// transitivity, and pair-funneling coincide; report all three
struct mixing_equivalence {
    bool applicable = false;
    bool period_one = false;
    bool product_strongly_connected = false;
    bool proximal = false;
    bool agree = false;
};

inline mixing_equivalence mixing_equivalence_report(const finite_system& fs,
                                                    const chain_structure& cs) {
    mixing_equivalence rep;
    rep.applicable = chain_transitive(cs);
    if (!rep.applicable) return rep;
    rep.period_one = component_period(cs, 0) == 1;
    auto scc = detail::product_tarjan(cs.g, [](int) { return true; });
    rep.product_strongly_connected = scc.count == 1;
    rep.proximal = chain_proximal_report(fs, cs.g).all_pairs;
    rep.agree = rep.period_one == rep.product_strongly_connected &&
                rep.product_strongly_connected == rep.proximal;
    return rep;
}

// combined prediction at one probe scale; each chaos class is evaluated by
// two independent routes that are expected to agree
struct verdict {
    double delta = 0, eps = 0, e_thr = 0;
    bool chain_proximal = false;
    int stable_count = 0;
    int stable_comp = -1;
    bool unique_stable = false;
    bool stable_singleton = false;
    bool stable_mixing = false;
    double sensitivity_e = 0;
    double property_s_e = 0;
    bool distal_pair_found = false;
    int distal_x = -1, distal_y = -1;
    double distal_floor = 0;
    bool guc_route_sensitivity = false;
    bool guc_route_structure = false;
    bool guc_agree = false;
    bool gudc1_route_separation = false;
    bool gudc1_route_distal = false;
    bool gudc1_agree = false;
    std::string summary;
};

inline verdict chaos_verdict(const finite_system& fs, double delta, double eps) {
    verdict v;
    v.delta = delta;
    v.eps = eps;
    v.e_thr = 0.3 * fs.diam;
    auto cs = build_chain_structure(fs, delta);
    auto stable = stable_components(cs, fs, eps);
    for (int c = 0; c < cs.comp_count; ++c)
        if (stable[c]) {
            ++v.stable_count;
            v.stable_comp = c;
        }
    v.unique_stable = v.stable_count == 1;
    if (v.unique_stable) {
        v.stable_singleton = cs.comp_vertices[v.stable_comp].size() == 1;
        v.stable_mixing = component_period(cs, v.stable_comp) == 1;
    } else {
        v.stable_comp = -1;
    }
    v.chain_proximal = chain_proximal_report(fs, cs.g).all_pairs;
    v.sensitivity_e = chain_sensitivity_radius(fs, cs.g).global;
    v.property_s_e = property_s_radius(fs, cs.g);
    if (v.unique_stable && v.e_thr > 0) {
        auto w = distal_pair_in_component(fs, cs, v.stable_comp, v.e_thr);
        if (w) {
            v.distal_pair_found = true;
            v.distal_x = w->x;
            v.distal_y = w->y;
            v.distal_floor = w->floor;
        }
    }
    v.guc_route_sensitivity = v.chain_proximal && v.sensitivity_e > 2 * eps;
    v.guc_route_structure = v.chain_proximal && v.unique_stable && !v.stable_singleton;
    v.guc_agree = v.guc_route_sensitivity == v.guc_route_structure;
    v.gudc1_route_separation = v.chain_proximal && v.property_s_e > v.e_thr;
    v.gudc1_route_distal = v.chain_proximal && v.unique_stable && v.distal_pair_found;
    v.gudc1_agree = v.gudc1_route_separation == v.gudc1_route_distal;

    if (!v.guc_agree || !v.gudc1_agree)
        v.summary = "discrepancy";
    else if (!v.chain_proximal)
        v.summary = "no-chaos";
    else if (v.gudc1_route_separation)
        v.summary = "guDC1-predicted";
    else if (v.guc_route_sensitivity)
        v.summary = "guC-predicted";
    else if (v.unique_stable && v.stable_singleton)
        v.summary = "gC-fails";
    else
        v.summary = "no-chaos";
    return v;
}

} // namespace chainchaos
