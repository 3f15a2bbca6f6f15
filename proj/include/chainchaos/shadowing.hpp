#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "chainchaos/errors.hpp"
#include "chainchaos/finite_system.hpp"
#include "chainchaos/maps.hpp"
#include "chainchaos/shift_rules.hpp"
#include "chainchaos/symbolic_point.hpp"
#include "chainchaos/textio.hpp"

namespace chainchaos {

// finite run of points claimed to follow a map within a per-step tolerance
struct pseudo_orbit {
    std::vector<symbolic_point> points;
    double delta = 0;
    map_id map = map_id::shift;
};

struct orbit_check {
    bool ok = true;
    long long first_bad = -1;  // first link i with d(f(x_i), x_{i+1}) > delta
    double worst = 0;          // largest link deviation
    long long worst_index = -1;
};

inline symbolic_point apply_map(const symbolic_point& x, map_id m) {
    switch (m) {
        case map_id::shift: return x.shifted();
        case map_id::ex41: return ex41_map(x);
        case map_id::ex42:
            throw param_mismatch_error("this map needs fiber coordinates; no symbolic-only step");
    }
    throw unknown_map_error("apply_map");
}

inline orbit_check is_pseudo_orbit(const pseudo_orbit& po) {
    if (po.points.empty()) throw param_mismatch_error("pseudo-orbit has no points");
    if (po.delta < 0) throw bad_delta_error("delta must be >= 0, got " + fmt_double(po.delta));
    orbit_check out;
    for (size_t i = 0; i + 1 < po.points.size(); ++i) {
        const double d = sym_distance(apply_map(po.points[i], po.map), po.points[i + 1]);
        if (d > out.worst) {
            out.worst = d;
            out.worst_index = static_cast<long long>(i);
        }
        if (d > po.delta && out.ok) {
            out.ok = false;
            out.first_bad = static_cast<long long>(i);
        }
    }
    return out;
}

// text form: header "delta=<value> map=<id>", then one point per line
inline std::string pseudo_orbit_to_text(const pseudo_orbit& po) {
    std::string out = "delta=" + fmt_double(po.delta) + " map=" + to_string(po.map) + "\n";
    for (const auto& p : po.points) out += p.to_text() + "\n";
    return out;
}

inline pseudo_orbit parse_pseudo_orbit(const std::string& text) {
    pseudo_orbit po;
    bool have_header = false, have_delta = false, have_map = false;
    for (const auto& raw : split(text, '\n')) {
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (!have_header) {
            for (const auto& tok : split(line, ' ')) {
                if (trim(tok).empty()) continue;
                const auto kv = split(tok, '=');
                if (kv.size() != 2) throw parse_error("pseudo-orbit header token '" + tok + "'");
                if (kv[0] == "delta") {
                    po.delta = parse_double(kv[1]);
                    have_delta = true;
                } else if (kv[0] == "map") {
                    po.map = parse_map_id(kv[1]);
                    have_map = true;
                } else {
                    throw parse_error("unknown pseudo-orbit header key '" + kv[0] + "'");
                }
            }
            if (!have_delta || !have_map)
                throw parse_error("pseudo-orbit header needs delta= and map=");
            have_header = true;
            continue;
        }
        po.points.push_back(symbolic_point::parse(line));
    }
    if (!have_header) throw parse_error("pseudo-orbit text is empty");
    if (po.points.empty()) throw parse_error("pseudo-orbit has no points");
    return po;
}

namespace detail {

// letters admissible after a letter of modulus cur_mod, drawn uniformly; for the
// unconstrained binary shift that is a coin flip, for the graded-modulus family the
// modulus can only stay or drop, so long runs drift toward the all-zero tail
inline void append_admissible_letters(example_id id, const example_params& p, double cur_mod,
                                      int count, rng64& r, std::vector<double>& out) {
    for (int i = 0; i < count; ++i) {
        if (id == example_id::fullshift) {
            out.push_back(static_cast<double>(r.below(2)));
            continue;
        }
        std::vector<double> opts{0.0};
        for (int k = 0; k < p.k_max; ++k)
            if (p.s[static_cast<size_t>(k)] <= cur_mod) {
                opts.push_back(p.s[static_cast<size_t>(k)]);
                opts.push_back(-p.s[static_cast<size_t>(k)]);
            }
        const double a = opts[r.below(opts.size())];
        out.push_back(a);
        cur_mod = std::abs(a);
    }
}

inline void require_admissible_point(example_id id, const example_params& p,
                                     const symbolic_point& x) {
    std::vector<double> w = x.preperiod();
    for (int rep = 0; rep < 2; ++rep)
        for (double a : x.period()) w.push_back(a);
    if (!member_word(id, p, w))
        throw param_mismatch_error("start point is not admissible for " + to_string(id));
}

} // namespace detail

// iterate the shift from x0; after each step rewrite everything from the first
// position whose weight is already <= delta (a random admissible window, then a quiet
// tail), so every link deviation stays <= delta by construction
inline pseudo_orbit perturb_orbit(const symbolic_point& x0, example_id id, long long length,
                                  double delta, uint64_t seed, int window_len = 12) {
    if (id != example_id::fullshift && id != example_id::ex45)
        throw param_mismatch_error("perturbation rules exist for fullshift and ex45 only");
    if (length < 1) throw param_mismatch_error("orbit length must be >= 1");
    if (delta < 0) throw bad_delta_error("delta must be >= 0, got " + fmt_double(delta));
    if (window_len < 1) throw param_mismatch_error("window length must be >= 1");
    const example_params p = default_params(id);
    detail::require_admissible_point(id, p, x0);
    pseudo_orbit po;
    po.delta = delta;
    po.map = map_id::shift;
    po.points.reserve(static_cast<size_t>(length));
    po.points.push_back(x0);
    if (delta == 0) {
        for (long long t = 1; t < length; ++t) po.points.push_back(po.points.back().shifted());
        return po;
    }
    size_t K = 0;  // rewriting positions >= K costs at most 2^-(K+1) <= delta
    while (std::ldexp(1.0, -static_cast<int>(K) - 1) > delta) ++K;
    rng64 r(seed);
    for (long long t = 1; t < length; ++t) {
        const symbolic_point fy = po.points.back().shifted();
        std::vector<double> pre;
        pre.reserve(K + static_cast<size_t>(window_len));
        for (size_t i = 0; i < K; ++i) pre.push_back(fy.letter(i));
        const double cur = K ? std::abs(fy.letter(K - 1)) : (id == example_id::fullshift ? 1.0 : p.s[0]);
        detail::append_admissible_letters(id, p, cur, window_len, r, pre);
        po.points.emplace_back(std::move(pre), std::vector<double>{0.0});
    }
    return po;
}

struct shadow_check {
    bool ok = false;
    double worst = 0;
    long long worst_index = -1;
};

// does the true orbit of x stay within eps of every pseudo-orbit point?
inline shadow_check verify_shadow(const symbolic_point& x, const pseudo_orbit& po, double eps) {
    if (po.points.empty()) throw param_mismatch_error("pseudo-orbit has no points");
    if (eps < 0) throw bad_threshold_error("eps must be >= 0");
    shadow_check out;
    if (po.map == map_id::shift) {
        for (size_t i = 0; i < po.points.size(); ++i) {
            const double d = offset_distance(x, i, po.points[i], 0);
            if (d > out.worst) {
                out.worst = d;
                out.worst_index = static_cast<long long>(i);
            }
        }
    } else {
        symbolic_point cur = x;
        for (size_t i = 0; i < po.points.size(); ++i) {
            const double d = sym_distance(cur, po.points[i]);
            if (d > out.worst) {
                out.worst = d;
                out.worst_index = static_cast<long long>(i);
            }
            if (i + 1 < po.points.size()) cur = apply_map(cur, po.map);
        }
    }
    out.ok = out.worst <= eps;
    return out;
}

// the point whose j-th letter is the j-th pseudo-orbit point's first letter, continued
// past the run by the last point itself; with delta <= 1/4 consecutive points agree on
// their leading letters deeply enough that this orbit tracks the run within 4*delta
inline symbolic_point full_shift_shadow(const pseudo_orbit& po) {
    if (po.map != map_id::shift)
        throw param_mismatch_error("the letter-graft shadow exists for the plain shift only");
    if (po.points.empty()) throw param_mismatch_error("pseudo-orbit has no points");
    if (po.delta > 0.25)
        throw bad_delta_error("leading letters are only forced for delta <= 1/4, got " +
                              fmt_double(po.delta));
    for (const auto& pt : po.points) {
        for (double a : pt.preperiod())
            if (a != 0.0 && a != 1.0)
                throw param_mismatch_error("shadow construction needs binary letters");
        for (double a : pt.period())
            if (a != 0.0 && a != 1.0)
                throw param_mismatch_error("shadow construction needs binary letters");
    }
    const auto& last = po.points.back();
    std::vector<double> pre;
    pre.reserve(po.points.size() - 1 + last.preperiod().size());
    for (size_t j = 0; j + 1 < po.points.size(); ++j) pre.push_back(po.points[j].letter(0));
    for (double a : last.preperiod()) pre.push_back(a);
    return symbolic_point(std::move(pre), last.period());
}

struct shadow_trial_row {
    uint64_t seed = 0;
    bool ok = false;
    double worst = 0;
};

struct shadow_batch_report {
    long long trials = 0, passed = 0;
    long long length = 0;
    double delta = 0, eps = 0;
    double max_deviation = 0;
    std::vector<shadow_trial_row> rows;
};

// seeded end-to-end drill on the full shift: random start, perturbed run, constructed
// shadow, verification at eps; trial i depends only on (seed, i)
inline shadow_batch_report shadow_batch(long long trials, long long length, double delta,
                                        double eps, uint64_t seed, int start_len = 8) {
    if (trials < 1) throw param_mismatch_error("need at least one trial");
    shadow_batch_report rep;
    rep.trials = trials;
    rep.length = length;
    rep.delta = delta;
    rep.eps = eps;
    const example_params p = default_params(example_id::fullshift);
    for (long long t = 0; t < trials; ++t) {
        shadow_trial_row row;
        row.seed = mix_seed(seed, static_cast<uint64_t>(t));
        rng64 r(row.seed);
        std::vector<double> w;
        detail::append_admissible_letters(example_id::fullshift, p, 1.0, start_len, r, w);
        const symbolic_point x0(std::move(w), {0.0});
        const pseudo_orbit po = perturb_orbit(x0, example_id::fullshift, length, delta, r.next());
        const symbolic_point z = full_shift_shadow(po);
        const shadow_check vc = verify_shadow(z, po, eps);
        row.ok = vc.ok;
        row.worst = vc.worst;
        rep.passed += vc.ok;
        rep.max_deviation = std::max(rep.max_deviation, vc.worst);
        rep.rows.push_back(row);
    }
    return rep;
}

// ---- finite-system route (windowed subshift models and arbitrary finite systems) ----

inline orbit_check is_finite_pseudo_orbit(const finite_system& fs, const std::vector<int>& po,
                                          double delta) {
    if (po.empty()) throw param_mismatch_error("pseudo-orbit has no points");
    if (delta < 0) throw bad_delta_error("delta must be >= 0");
    for (int v : po)
        if (v < 0 || v >= fs.n()) throw param_mismatch_error("pseudo-orbit index out of range");
    orbit_check out;
    for (size_t i = 0; i + 1 < po.size(); ++i) {
        double d = std::numeric_limits<double>::infinity();
        for (int z : fs.succ[po[i]]) d = std::min(d, fs.dist(z, po[i + 1]));
        if (d > out.worst) {
            out.worst = d;
            out.worst_index = static_cast<long long>(i);
        }
        if (d > delta && out.ok) {
            out.ok = false;
            out.first_bad = static_cast<long long>(i);
        }
    }
    return out;
}

inline std::vector<int> perturb_finite_orbit(const finite_system& fs, int start, long long length,
                                             double delta, uint64_t seed) {
    if (start < 0 || start >= fs.n()) throw param_mismatch_error("start index out of range");
    if (length < 1) throw param_mismatch_error("orbit length must be >= 1");
    if (delta < 0) throw bad_delta_error("delta must be >= 0");
    std::vector<int> po{start};
    rng64 r(seed);
    for (long long t = 1; t < length; ++t) {
        std::vector<int> cand;
        for (int v = 0; v < fs.n(); ++v) {
            double d = std::numeric_limits<double>::infinity();
            for (int z : fs.succ[po.back()]) d = std::min(d, fs.dist(z, v));
            if (d <= delta) cand.push_back(v);
        }
        po.push_back(cand[r.below(cand.size())]);  // true successors always qualify
    }
    return po;
}

struct finite_shadow_result {
    double best_eps = 0;     // smallest achievable max deviation over true vertex paths
    std::vector<int> path;   // a witness path attaining it
};

// min-max dynamic program over all successor paths: D_t(v) = best achievable max
// deviation among paths ending at v after t steps
inline finite_shadow_result finite_shadowing_probe(const finite_system& fs,
                                                   const std::vector<int>& po) {
    if (po.empty()) throw param_mismatch_error("pseudo-orbit has no points");
    for (int v : po)
        if (v < 0 || v >= fs.n()) throw param_mismatch_error("pseudo-orbit index out of range");
    const int n = fs.n();
    const size_t L = po.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cur(n), nxt;
    std::vector<std::vector<int>> back(L, std::vector<int>(n, -1));
    for (int v = 0; v < n; ++v) cur[v] = fs.dist(v, po[0]);
    for (size_t t = 1; t < L; ++t) {
        nxt.assign(n, inf);
        for (int u = 0; u < n; ++u) {
            if (cur[u] == inf) continue;
            for (int v : fs.succ[u]) {
                const double cand = std::max(cur[u], fs.dist(v, po[t]));
                if (cand < nxt[v]) {
                    nxt[v] = cand;
                    back[t][v] = u;
                }
            }
        }
        cur.swap(nxt);
    }
    int best = 0;
    for (int v = 1; v < n; ++v)
        if (cur[v] < cur[best]) best = v;
    finite_shadow_result out;
    out.best_eps = cur[best];
    out.path.assign(L, -1);
    out.path[L - 1] = best;
    for (size_t t = L - 1; t > 0; --t) out.path[t - 1] = back[t][out.path[t]];
    return out;
}

// ---- sparse-spike points and time densities near the quiet tail ----

// 1 at the given position of an otherwise all-zero binary point
inline symbolic_point single_spike_point(long long pos) {
    if (pos < 0) throw param_mismatch_error("spike position must be >= 0");
    std::vector<double> pre(static_cast<size_t>(pos), 0.0);
    pre.push_back(1.0);
    return symbolic_point(std::move(pre), {0.0});
}

// 1 exactly at the given strictly increasing positions, 0 elsewhere
inline symbolic_point spike_train_point(const std::vector<long long>& positions) {
    if (positions.empty()) return symbolic_point::constant(0.0);
    for (size_t j = 0; j < positions.size(); ++j) {
        if (positions[j] < 0) throw param_mismatch_error("spike position must be >= 0");
        if (j && positions[j] <= positions[j - 1])
            throw param_mismatch_error("spike positions must strictly increase");
    }
    std::vector<double> pre(static_cast<size_t>(positions.back()) + 1, 0.0);
    for (long long t : positions) pre[static_cast<size_t>(t)] = 1.0;
    return symbolic_point(std::move(pre), {0.0});
}

inline long long triangular_position(long long j) { return j * (j + 1) / 2; }

// wrap a finite ascending list as an unbounded position rule
inline std::function<long long(long long)> positions_from(std::vector<long long> v) {
    auto shared = std::make_shared<std::vector<long long>>(std::move(v));
    return [shared](long long j) {
        if (j < static_cast<long long>(shared->size())) return (*shared)[static_cast<size_t>(j)];
        return (1LL << 62) + j;
    };
}

struct tail_density_result {
    long long horizon = 0;
    long long near_count = 0;
    double fraction = 0;
    double eps = 0;
};

// fraction of times i < N at which the tail from i is eps-close to the all-zero point,
// for a binary point whose 1-positions come from pos(j) (strictly increasing); counted
// by interval union over blocked ranges, so the cost scales with the number of spikes
// below N rather than with N
inline tail_density_result near_zero_time_density(const std::function<long long(long long)>& pos,
                                                  long long N, double eps) {
    if (N < 1) throw param_mismatch_error("horizon must be >= 1");
    if (!(eps > 0)) throw bad_threshold_error("eps must be positive");
    long long K = 0;  // d = 2^-(gap+1) < eps exactly when gap >= K
    while (std::ldexp(1.0, -static_cast<int>(K) - 1) >= eps) ++K;
    tail_density_result out;
    out.horizon = N;
    out.eps = eps;
    long long blocked = 0;
    if (K > 0) {
        long long prev_end = -1, prev_t = -1;
        for (long long j = 0;; ++j) {
            const long long t = pos(j);
            if (t <= prev_t) throw param_mismatch_error("spike positions must strictly increase");
            prev_t = t;
            if (t - K + 1 >= N) break;  // later spikes block nothing below N
            const long long lo = std::max({0LL, t - K + 1, prev_end + 1});
            const long long hi = std::min(t, N - 1);
            if (lo <= hi) {
                blocked += hi - lo + 1;
                prev_end = hi;
            }
        }
    }
    out.near_count = N - blocked;
    out.fraction = static_cast<double>(out.near_count) / static_cast<double>(N);
    return out;
}

// ---- finite-horizon evidence for vanishing-tolerance tracking ----

// pseudo-orbit generator with a per-step tolerance currently in force
struct limit_orbit {
    std::function<symbolic_point(long long)> point_at;
    std::function<double(long long)> tol_at;
};

// blockwise spike-chasing run: between consecutive target spikes the run follows the
// single-spike point of the upcoming target exactly; the jump at each boundary costs
// 2^-(gap), so gaps growing without bound drive the in-force tolerance to zero
inline limit_orbit snapped_spike_orbit(std::vector<long long> spikes) {
    if (spikes.empty()) throw param_mismatch_error("need at least one target spike");
    for (size_t j = 0; j < spikes.size(); ++j) {
        if (spikes[j] < 0) throw param_mismatch_error("spike position must be >= 0");
        if (j && spikes[j] <= spikes[j - 1])
            throw param_mismatch_error("spike positions must strictly increase");
    }
    auto shared = std::make_shared<std::vector<long long>>(std::move(spikes));
    limit_orbit out;
    out.point_at = [shared](long long i) {
        if (i < 0) throw param_mismatch_error("step must be >= 0");
        const auto it = std::lower_bound(shared->begin(), shared->end(), i);
        if (it == shared->end()) return symbolic_point::constant(0.0);
        return single_spike_point(*it - i);
    };
    out.tol_at = [shared](long long i) {
        if (i < 0) throw param_mismatch_error("step must be >= 0");
        const auto it = std::lower_bound(shared->begin(), shared->end(), i);
        if (it == shared->end() || it + 1 == shared->end()) return 0.0;
        const long long gap = std::min<long long>(*(it + 1) - *it, 1074);
        return std::ldexp(1.0, -static_cast<int>(gap));
    };
    return out;
}

// the run as its own exact generator (tolerance identically zero)
inline limit_orbit exact_orbit_of(const symbolic_point& x) {
    auto shared = std::make_shared<symbolic_point>(x);
    limit_orbit out;
    out.point_at = [shared](long long i) {
        if (i < 0) throw param_mismatch_error("step must be >= 0");
        const auto& pre = shared->preperiod();
        if (static_cast<size_t>(i) <= pre.size())
            return symbolic_point(
                std::vector<double>(pre.begin() + static_cast<std::ptrdiff_t>(i), pre.end()),
                shared->period());
        const auto& per = shared->period();
        const size_t ph = (static_cast<size_t>(i) - pre.size()) % per.size();
        std::vector<double> rot(per.begin() + static_cast<std::ptrdiff_t>(ph), per.end());
        rot.insert(rot.end(), per.begin(), per.begin() + static_cast<std::ptrdiff_t>(ph));
        return symbolic_point(std::vector<double>{}, std::move(rot));
    };
    out.tol_at = [](long long) { return 0.0; };
    return out;
}

struct limit_checkpoint {
    long long step = 0;
    double deviation = 0;
    double tol = 0;
};

struct limit_shadow_report {
    std::vector<limit_checkpoint> rows;
    // finite-horizon evidence only: the last sampled deviation sits within the
    // tolerance in force there; no asymptotic claim
    bool consistent = false;
};

inline limit_shadow_report limit_shadow_check(const symbolic_point& x, const limit_orbit& po,
                                              const std::vector<long long>& checkpoints) {
    if (checkpoints.empty()) throw param_mismatch_error("need at least one checkpoint");
    for (size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 0) throw param_mismatch_error("checkpoints must be >= 0");
        if (i && checkpoints[i] <= checkpoints[i - 1])
            throw param_mismatch_error("checkpoints must strictly increase");
    }
    limit_shadow_report rep;
    for (long long c : checkpoints) {
        limit_checkpoint row;
        row.step = c;
        const symbolic_point p = po.point_at(c);
        row.deviation = offset_distance(x, static_cast<size_t>(c), p, 0);
        row.tol = po.tol_at(c);
        rep.rows.push_back(row);
    }
    rep.consistent = rep.rows.back().deviation <= rep.rows.back().tol;
    return rep;
}

} // namespace chainchaos
