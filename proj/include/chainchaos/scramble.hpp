#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chainchaos/errors.hpp"
#include "chainchaos/maps.hpp"
#include "chainchaos/shift_rules.hpp"
#include "chainchaos/symbolic_point.hpp"
#include "chainchaos/textio.hpp"

namespace chainchaos {

// distances d_i = d(f^i x, f^i y) for i = 0..N-1, plus cycle bookkeeping for the
// synchronized pair orbit; when a cycle is reported every statistic on the series
// can be extended to the infinite orbit exactly
struct series_report {
    std::vector<double> values;
    bool cycle_detected = false;
    long long cycle_start = -1;  // first index of a cycle (not necessarily minimal)
    long long cycle_len = 0;
};

inline long long default_burn_in(long long N) { return std::max<long long>(1, N / 50); }

// shift pairs are eventually periodic outright, so the whole series comes from one
// exact seed at the far end plus the backward step d_i = max(|x_i - y_i|, d_{i+1}) / 2
inline series_report shift_distance_series(const symbolic_point& x, const symbolic_point& y,
                                           long long N) {
    if (N < 1) throw param_mismatch_error("series length must be >= 1");
    series_report out;
    out.values.resize(static_cast<size_t>(N));
    out.values[N - 1] = offset_distance(x, static_cast<size_t>(N - 1), y,
                                        static_cast<size_t>(N - 1));
    for (long long i = N - 2; i >= 0; --i)
        out.values[i] =
            std::max(std::abs(x.letter(static_cast<size_t>(i)) - y.letter(static_cast<size_t>(i))),
                     out.values[i + 1]) *
            0.5;
    out.cycle_detected = true;
    out.cycle_start = static_cast<long long>(std::max(x.preperiod().size(), y.preperiod().size()));
    out.cycle_len = static_cast<long long>(
        std::lcm<unsigned long long>(x.period().size(), y.period().size()));
    return out;
}

namespace detail {

// stepwise pair walker with exact-state cycle detection; Step advances a state,
// Dist evaluates the pair distance, Hash keys the lookup buckets
template <class State, class Step, class Dist, class Hash>
inline series_report walk_pair_series(State sx, State sy, long long N, Step step, Dist dist,
                                      Hash hash, size_t store_cap = size_t(1) << 22) {
    if (N < 1) throw param_mismatch_error("series length must be >= 1");
    series_report out;
    out.values.reserve(static_cast<size_t>(N));
    std::vector<std::pair<State, State>> seen;
    std::unordered_map<uint64_t, std::vector<long long>> by_hash;
    bool tracking = true;
    size_t stored = 0;
    for (long long i = 0; i < N; ++i) {
        if (tracking) {
            const uint64_t h = hash(sx) * 0x9e3779b97f4a7c15ull ^ hash(sy);
            auto& bucket = by_hash[h];
            for (long long j : bucket)
                if (seen[j].first == sx && seen[j].second == sy) {
                    out.cycle_detected = true;
                    out.cycle_start = j;
                    out.cycle_len = i - j;
                    for (long long t = i; t < N; ++t)
                        out.values.push_back(out.values[j + (t - j) % out.cycle_len]);
                    return out;
                }
            bucket.push_back(i);
            seen.emplace_back(sx, sy);
            stored += 2;
            if (stored > store_cap) {  // give up on detection rather than hoard states
                tracking = false;
                seen.clear();
                by_hash.clear();
            }
        }
        out.values.push_back(dist(sx, sy));
        State nx = step(sx);
        State ny = step(sy);
        sx = std::move(nx);
        sy = std::move(ny);
    }
    return out;
}

} // namespace detail

inline series_report ex41_distance_series(const symbolic_point& x, const symbolic_point& y,
                                          long long N) {
    return detail::walk_pair_series(
        x, y, N, [](const symbolic_point& s) { return ex41_map(s); },
        [](const symbolic_point& a, const symbolic_point& b) { return sym_distance(a, b); },
        [](const symbolic_point& s) { return s.hash(); });
}

inline series_report skew_distance_series(const skew_state& a, const skew_state& b, long long N) {
    auto hash = [](const skew_state& s) {
        static_assert(sizeof(uint64_t) == sizeof(double));
        uint64_t tb;
        std::memcpy(&tb, &s.t, sizeof tb);
        return s.x.hash() ^ (tb * 0xbf58476d1ce4e5b9ull);
    };
    auto dist = [](const skew_state& u, const skew_state& v) {
        return std::max(sym_distance(u.x, v.x), std::abs(u.t - v.t));
    };
    return detail::walk_pair_series(
        a, b, N, [](const skew_state& s) { return skew_step(s); }, dist, hash);
}

inline series_report distance_series(const symbolic_point& x, const symbolic_point& y, map_id m,
                                     long long N) {
    switch (m) {
        case map_id::shift: return shift_distance_series(x, y, N);
        case map_id::ex41: return ex41_distance_series(x, y, N);
        case map_id::ex42:
            throw param_mismatch_error("this map needs fiber coordinates; use the skew overload");
    }
    throw unknown_map_error("distance series");
}

inline series_report distance_series(const skew_state& a, const skew_state& b, long long N) {
    return skew_distance_series(a, b, N);
}

// running-fraction statistics of one pair orbit: for each threshold t, the fraction
// of early times with d_i < t, minimized/maximized over window ends n in [B, N]
struct scramble_profile {
    long long horizon = 0, burn_in = 0;
    double delta = 0, eta = 0;
    std::vector<double> thresholds;   // ascending
    std::vector<double> fhat, fstar;  // aligned with thresholds
    double fhat_delta = 0, fstar_delta = 0;
    double liminf_hat = 0, limsup_hat = 0;  // min/max d_i over the tail window [B, N)
    bool exact_limits = false;
    bool flag_c = false, flag_dc1 = false, flag_dc2 = false;
    bool class_flags_consistent = true;  // dc1 => dc2 => c on this profile
};

// the smallest rung sits below eta*delta for every stock (delta, eta) combination, so
// a persistent gap wide enough to block C also breaks the DC star condition
inline std::vector<double> default_thresholds() {
    return {0.001953125, 0.03125, 0.0625, 0.125, 0.25};
}

inline scramble_profile profile_from_series(const std::vector<double>& d, double delta,
                                            const std::vector<double>& t_list, double eta,
                                            long long burn_in = -1, bool exact_limits = false) {
    const long long N = static_cast<long long>(d.size());
    if (N < 1) throw param_mismatch_error("profile needs a nonempty series");
    if (!(eta > 0.0 && eta < 0.5))
        throw bad_threshold_error("eta must lie in (0, 0.5), got " + fmt_double(eta));
    if (!(delta > 0.0)) throw bad_threshold_error("delta must be positive, got " + fmt_double(delta));
    if (t_list.empty()) throw bad_threshold_error("threshold list is empty");
    for (size_t i = 0; i < t_list.size(); ++i) {
        if (!(t_list[i] > 0.0)) throw bad_threshold_error("thresholds must be positive");
        if (i && t_list[i] <= t_list[i - 1])
            throw bad_threshold_error("thresholds must strictly increase");
    }
    scramble_profile out;
    out.horizon = N;
    out.burn_in = burn_in < 0 ? default_burn_in(N) : burn_in;
    if (out.burn_in < 1 || out.burn_in > N)
        throw param_mismatch_error("burn-in outside [1, N]: " + std::to_string(out.burn_in));
    out.delta = delta;
    out.eta = eta;
    out.thresholds = t_list;
    out.exact_limits = exact_limits;

    const size_t T = t_list.size();
    std::vector<long long> cnt(T + 1, 0);  // last slot tracks delta
    std::vector<double> lo(T + 1, 2.0), hi(T + 1, -1.0);
    for (long long n = 1; n <= N; ++n) {
        const double di = d[static_cast<size_t>(n - 1)];
        for (size_t j = 0; j < T; ++j) cnt[j] += di < t_list[j];
        cnt[T] += di < delta;
        if (n >= out.burn_in)
            for (size_t j = 0; j <= T; ++j) {
                const double f = static_cast<double>(cnt[j]) / static_cast<double>(n);
                lo[j] = std::min(lo[j], f);
                hi[j] = std::max(hi[j], f);
            }
    }
    out.fhat.assign(lo.begin(), lo.begin() + T);
    out.fstar.assign(hi.begin(), hi.begin() + T);
    out.fhat_delta = lo[T];
    out.fstar_delta = hi[T];

    const long long w0 = std::min(out.burn_in, N - 1);
    out.liminf_hat = std::numeric_limits<double>::infinity();
    out.limsup_hat = 0.0;
    for (long long i = w0; i < N; ++i) {
        out.liminf_hat = std::min(out.liminf_hat, d[static_cast<size_t>(i)]);
        out.limsup_hat = std::max(out.limsup_hat, d[static_cast<size_t>(i)]);
    }

    bool star_all = true;
    for (size_t j = 0; j < T; ++j) star_all = star_all && out.fstar[j] >= 1.0 - eta;
    out.flag_c = out.limsup_hat >= delta && out.liminf_hat <= eta * delta;
    out.flag_dc1 = out.fhat_delta <= eta && star_all;
    out.flag_dc2 = out.fhat_delta <= 1.0 - 2.0 * eta && star_all;
    out.class_flags_consistent =
        (!out.flag_dc1 || out.flag_dc2) && (!out.flag_dc2 || out.flag_c);
    return out;
}

inline scramble_profile profile(const symbolic_point& x, const symbolic_point& y, map_id m,
                                long long N, double delta, const std::vector<double>& t_list,
                                double eta, long long burn_in = -1) {
    const auto sr = distance_series(x, y, m, N);
    return profile_from_series(sr.values, delta, t_list, eta, burn_in, sr.cycle_detected);
}

inline scramble_profile profile(const skew_state& a, const skew_state& b, long long N,
                                double delta, const std::vector<double>& t_list, double eta,
                                long long burn_in = -1) {
    const auto sr = distance_series(a, b, N);
    return profile_from_series(sr.values, delta, t_list, eta, burn_in, sr.cycle_detected);
}

// reference pair for the full shift: x = 0^inf, y alternates 1-runs and 0-runs with
// rapidly growing lengths and then settles at 0^inf; the running near-fraction first
// dips (long disagreement) and later climbs (infinite agreement tail)
inline std::pair<symbolic_point, symbolic_point> block_oscillation_pair(
    const std::vector<long long>& runs = {2, 4, 8, 16, 420}) {
    if (runs.empty()) throw param_mismatch_error("block pair needs at least one run");
    std::vector<double> pre;
    double v = 1.0;
    for (long long len : runs) {
        if (len < 1) throw param_mismatch_error("run lengths must be >= 1");
        for (long long i = 0; i < len; ++i) pre.push_back(v);
        v = 1.0 - v;
    }
    return {symbolic_point::constant(0.0), symbolic_point(std::move(pre), {0.0})};
}

enum class pair_verdict { proximal, distal, inconclusive };

inline const char* to_string(pair_verdict v) {
    switch (v) {
        case pair_verdict::proximal: return "proximal";
        case pair_verdict::distal: return "distal";
        case pair_verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct pair_class_report {
    pair_verdict verdict = pair_verdict::inconclusive;
    bool exact = false;       // a full pair cycle fit inside the horizon
    double liminf_hat = 0;    // tail floor (exact over one cycle when exact)
    double min_all = 0;       // min over every observed time
    double scale = 0;         // the diameter bound the eta cutoff multiplies
};

inline pair_class_report classify_pair_series(const series_report& sr, double eta, double scale,
                                            long long burn_in = -1) {
    const long long N = static_cast<long long>(sr.values.size());
    if (N < 1) throw param_mismatch_error("empty series");
    if (!(eta > 0.0 && eta < 0.5)) throw bad_threshold_error("eta must lie in (0, 0.5)");
    pair_class_report out;
    out.scale = scale;
    out.exact = sr.cycle_detected && sr.cycle_start + sr.cycle_len <= N;
    long long tail_lo, tail_hi, all_hi;
    if (out.exact) {
        tail_lo = sr.cycle_start;
        tail_hi = sr.cycle_start + sr.cycle_len;
        all_hi = tail_hi;
    } else {
        const long long B = burn_in < 0 ? default_burn_in(N) : burn_in;
        tail_lo = std::min(B, N - 1);
        tail_hi = N;
        all_hi = N;
    }
    out.liminf_hat = std::numeric_limits<double>::infinity();
    for (long long i = tail_lo; i < tail_hi; ++i)
        out.liminf_hat = std::min(out.liminf_hat, sr.values[static_cast<size_t>(i)]);
    out.min_all = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < all_hi; ++i)
        out.min_all = std::min(out.min_all, sr.values[static_cast<size_t>(i)]);
    if (out.liminf_hat <= eta * scale)
        out.verdict = pair_verdict::proximal;
    else if (out.min_all > eta * scale)
        out.verdict = pair_verdict::distal;
    else
        out.verdict = pair_verdict::inconclusive;
    return out;
}

inline pair_class_report proximal_estimate(const symbolic_point& x, const symbolic_point& y,
                                         map_id m, long long N, double eta,
                                         long long burn_in = -1) {
    const auto sr = distance_series(x, y, m, N);
    const double scale = (x.max_abs_letter() + y.max_abs_letter()) * 0.5;
    return classify_pair_series(sr, eta, scale, burn_in);
}

inline pair_class_report proximal_estimate(const skew_state& a, const skew_state& b, long long N,
                                         double eta, long long burn_in = -1) {
    const auto sr = distance_series(a, b, N);
    const double scale =
        std::max((a.x.max_abs_letter() + b.x.max_abs_letter()) * 0.5, 1.0);  // fiber spans [0,1]
    return classify_pair_series(sr, eta, scale, burn_in);
}

// ---- admissible word enumeration (prefix-pruned, lexicographic) ----

inline std::vector<std::vector<double>> enumerate_admissible_words(
    example_id id, const example_params& p, int len, size_t cap = 2'000'000,
    const std::vector<double>* alpha_override = nullptr) {
    validate_params(id, p);
    if (len < 1) throw param_mismatch_error("word length must be >= 1");
    const std::vector<double> alpha = alpha_override ? *alpha_override : alphabet(id, p);
    std::vector<std::vector<double>> out;
    std::vector<double> w;
    // explicit stack of next-letter indices; prefixes stay admissible throughout
    std::vector<size_t> next;
    next.reserve(static_cast<size_t>(len) + 2);  // the in-loop reference must not move
    next.push_back(0);
    while (!next.empty()) {
        if (static_cast<int>(w.size()) == len) {
            out.push_back(w);
            if (out.size() > cap)
                throw state_space_cap_error(std::to_string(out.size()) + " words");
            w.pop_back();
            next.pop_back();
            continue;
        }
        bool advanced = false;
        for (size_t& i = next.back(); i < alpha.size();) {
            w.push_back(alpha[i]);
            ++i;
            if (member_word(id, p, w)) {
                next.push_back(0);
                advanced = true;
                break;
            }
            w.pop_back();
        }
        if (!advanced) {
            if (!w.empty()) w.pop_back();
            next.pop_back();
        }
    }
    if (out.empty()) throw empty_shift_error(to_string(id));
    return out;
}

// constant-modulus family member: rung-k word plus its quiet -s_k tail, finishing
// any run the last spike forces
inline symbolic_point zk_point(example_id id, const example_params& p, int k,
                               std::vector<double> w) {
    if (k < 0 || k >= p.k_max) throw param_mismatch_error("rung outside the ladder");
    const double s = p.s[static_cast<size_t>(k)];
    if (id == example_id::ex43)
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i] == s)
                for (size_t j = w.size(); j <= i + static_cast<size_t>(k) + 1; ++j)
                    w.push_back(-s);
    return symbolic_point(std::move(w), {-s});
}

// ---- pair sampling ----

enum class pair_sampler { uniform_words, zk_blocks, diagonal_words };

inline const char* to_string(pair_sampler s) {
    switch (s) {
        case pair_sampler::uniform_words: return "uniform";
        case pair_sampler::zk_blocks: return "zk";
        case pair_sampler::diagonal_words: return "diagonal";
    }
    return "?";
}

inline pair_sampler parse_pair_sampler(const std::string& s) {
    if (s == "uniform") return pair_sampler::uniform_words;
    if (s == "zk") return pair_sampler::zk_blocks;
    if (s == "diagonal") return pair_sampler::diagonal_words;
    throw param_mismatch_error("unknown sampler: " + s);
}

inline map_id example_map(example_id id) {
    switch (id) {
        case example_id::fullshift:
        case example_id::ex43:
        case example_id::ex44:
        case example_id::ex45: return map_id::shift;
        case example_id::ex41: return map_id::ex41;
        case example_id::ex42: return map_id::ex42;
        case example_id::twofix: break;
    }
    throw unknown_map_error("no orbit map for " + to_string(id));
}

struct sampled_pair {
    symbolic_point x, y;
    double t_x = 0, t_y = 0;
    bool has_fiber = false;
    uint64_t seed = 0;
    std::string note;
};

// deterministic stream of pairs: pair i depends only on (seed, i), so evaluation
// order cannot change a report
class pair_source {
public:
    pair_source(example_id id, example_params p, pair_sampler sampler, uint64_t seed,
                long long horizon, int word_len = 8)
        : id_(id), p_(std::move(p)), sampler_(sampler), seed_(seed), horizon_(horizon),
          word_len_(word_len) {
        validate_params(id_, p_);
        if (word_len_ < 1) throw param_mismatch_error("word length must be >= 1");
        if (horizon_ < 1) throw param_mismatch_error("horizon must be >= 1");
        if (id_ == example_id::twofix) throw unknown_example_error("twofix has no orbit pairs");
        if (sampler_ == pair_sampler::zk_blocks && id_ != example_id::ex43 &&
            id_ != example_id::ex45)
            throw param_mismatch_error("zk sampling fits the graded-modulus families only");
    }

    sampled_pair make(long long index) {
        sampled_pair out;
        out.seed = mix_seed(seed_, static_cast<uint64_t>(index));
        rng64 r(out.seed);
        switch (sampler_) {
            case pair_sampler::diagonal_words: {
                const auto& P = pool();
                out.x = out.y = absorb_tail(id_, p_, P[r.below(P.size())]);
                if (id_ == example_id::ex42) {
                    out.has_fiber = true;
                    out.t_x = out.t_y = grid_t(r);
                }
                out.note = "diagonal";
                return out;
            }
            case pair_sampler::uniform_words: {
                const auto& P = pool();
                out.x = absorb_tail(id_, p_, P[r.below(P.size())]);
                out.y = absorb_tail(id_, p_, P[r.below(P.size())]);
                if (id_ == example_id::ex42) {
                    out.has_fiber = true;
                    out.t_x = grid_t(r);
                    out.t_y = grid_t(r);
                }
                out.note = "uniform";
                return out;
            }
            case pair_sampler::zk_blocks: {
                const int k = static_cast<int>(index % p_.k_max);
                const double s = p_.s[static_cast<size_t>(k)];
                if (index % 2 == 0) {
                    // far block, verbatim-copy block, far tail: the running near
                    // fraction is 0 at n = a and ~1 at n = b for every threshold
                    const long long B = default_burn_in(horizon_);
                    const long long a0 =
                        B + static_cast<long long>(
                                r.below(static_cast<uint64_t>(std::max<long long>(1, B / 2))));
                    long long per = 1, ph = 0;
                    if (id_ == example_id::ex43) {
                        per = k + 2;
                        std::vector<double> block{s};
                        for (int j = 0; j <= k; ++j) block.push_back(-s);
                        ph = static_cast<long long>(r.below(static_cast<uint64_t>(per)));
                        std::vector<double> rot(static_cast<size_t>(per));
                        for (long long j = 0; j < per; ++j)
                            rot[static_cast<size_t>(j)] =
                                block[static_cast<size_t>((ph + j) % per)];
                        out.x = symbolic_point({}, std::move(rot));
                    } else {
                        out.x = symbolic_point::constant(s);
                    }
                    // align a so the last far-block position holds a spike: then no
                    // time before a is close to the copy, and the near count at a is 0
                    const long long a = a0 + (((1 - ph - a0) % per) + per) % per;
                    const long long b = 20 * (a + 8) + static_cast<long long>(r.below(8));
                    std::vector<double> pre;
                    pre.reserve(static_cast<size_t>(b));
                    for (long long i = 0; i < a; ++i) pre.push_back(-s);
                    for (long long i = a; i < b; ++i)
                        pre.push_back(out.x.letter(static_cast<size_t>(i)));
                    out.y = symbolic_point(std::move(pre), {-s});
                    out.note = "zk engineered k=" + std::to_string(k + 1) + " a=" +
                               std::to_string(a) + " b=" + std::to_string(b);
                } else {
                    const auto& P = rung_pool(k);
                    out.x = zk_point(id_, p_, k, P[r.below(P.size())]);
                    out.y = zk_point(id_, p_, k, P[r.below(P.size())]);
                    out.note = "zk random k=" + std::to_string(k + 1);
                }
                return out;
            }
        }
        throw param_mismatch_error("unknown sampler");
    }

    const example_params& params() const { return p_; }

private:
    double grid_t(rng64& r) const {
        return static_cast<double>(r.below(static_cast<uint64_t>(p_.grid_n))) /
               static_cast<double>(p_.grid_n - 1);
    }

    const std::vector<std::vector<double>>& pool() {
        if (pool_.empty()) pool_ = enumerate_admissible_words(id_, p_, word_len_);
        return pool_;
    }

    const std::vector<std::vector<double>>& rung_pool(int k) {
        auto it = rung_pools_.find(k);
        if (it == rung_pools_.end()) {
            const double s = p_.s[static_cast<size_t>(k)];
            const std::vector<double> alpha{-s, s};
            it = rung_pools_
                     .emplace(k, enumerate_admissible_words(id_, p_, word_len_, 2'000'000, &alpha))
                     .first;
        }
        return it->second;
    }

    example_id id_;
    example_params p_;
    pair_sampler sampler_;
    uint64_t seed_;
    long long horizon_;
    int word_len_;
    std::vector<std::vector<double>> pool_;
    std::map<int, std::vector<std::vector<double>>> rung_pools_;
};

// ---- sampled pair-space density ----

struct pair_row {
    long long pair_id = 0;
    uint64_t seed = 0;
    bool c = false, dc1 = false, dc2 = false, exact = false;
    double liminf_hat = 0, limsup_hat = 0;
    double fhat_delta = 0, fstar_delta = 0;
    std::vector<double> fhat, fstar;
    std::string note;
};

struct density_report {
    std::string example, sampler;
    long long count = 0, horizon = 0, burn_in = 0;
    double delta = 0, eta = 0;
    uint64_t seed = 0;
    int word_len = 0;
    std::vector<double> thresholds;
    double frac_c = 0, frac_dc1 = 0, frac_dc2 = 0;
    long long witness_c = -1, witness_dc1 = -1, witness_dc2 = -1;
    bool fractions_nested = true;    // dc1 count <= dc2 count <= c count
    bool all_rows_consistent = true; // every row's own flags nest
    std::vector<pair_row> rows;
};

inline density_report sample_pair_density(example_id id, const example_params& p,
                                          pair_sampler sampler, long long count, long long N,
                                          double delta, const std::vector<double>& t_list,
                                          double eta, uint64_t seed, int word_len = 8,
                                          long long burn_in = -1) {
    if (count < 1) throw param_mismatch_error("pair count must be >= 1");
    pair_source src(id, p, sampler, seed, N, word_len);
    density_report rep;
    rep.example = to_string(id);
    rep.sampler = to_string(sampler);
    rep.count = count;
    rep.horizon = N;
    rep.burn_in = burn_in < 0 ? default_burn_in(N) : burn_in;
    rep.delta = delta;
    rep.eta = eta;
    rep.seed = seed;
    rep.word_len = word_len;
    rep.thresholds = t_list;
    long long nc = 0, n1 = 0, n2 = 0;
    for (long long i = 0; i < count; ++i) {
        auto sp = src.make(i);
        const scramble_profile pr =
            id == example_id::ex42
                ? profile(skew_state{sp.x, sp.t_x}, skew_state{sp.y, sp.t_y}, N, delta, t_list,
                          eta, rep.burn_in)
                : profile(sp.x, sp.y, example_map(id), N, delta, t_list, eta, rep.burn_in);
        pair_row row;
        row.pair_id = i;
        row.seed = sp.seed;
        row.c = pr.flag_c;
        row.dc1 = pr.flag_dc1;
        row.dc2 = pr.flag_dc2;
        row.exact = pr.exact_limits;
        row.liminf_hat = pr.liminf_hat;
        row.limsup_hat = pr.limsup_hat;
        row.fhat_delta = pr.fhat_delta;
        row.fstar_delta = pr.fstar_delta;
        row.fhat = pr.fhat;
        row.fstar = pr.fstar;
        row.note = sp.note;
        nc += row.c;
        n1 += row.dc1;
        n2 += row.dc2;
        if (row.c && rep.witness_c < 0) rep.witness_c = i;
        if (row.dc1 && rep.witness_dc1 < 0) rep.witness_dc1 = i;
        if (row.dc2 && rep.witness_dc2 < 0) rep.witness_dc2 = i;
        rep.all_rows_consistent = rep.all_rows_consistent && pr.class_flags_consistent;
        rep.rows.push_back(std::move(row));
    }
    rep.frac_c = static_cast<double>(nc) / static_cast<double>(count);
    rep.frac_dc1 = static_cast<double>(n1) / static_cast<double>(count);
    rep.frac_dc2 = static_cast<double>(n2) / static_cast<double>(count);
    rep.fractions_nested = n1 <= n2 && n2 <= nc;
    return rep;
}

inline std::string density_table(const density_report& rep) {
    std::string out;
    out += "# density example=" + rep.example + " sampler=" + rep.sampler +
           " count=" + std::to_string(rep.count) + " horizon=" + std::to_string(rep.horizon) +
           " burn_in=" + std::to_string(rep.burn_in) + " delta=" + fmt_double(rep.delta) +
           " eta=" + fmt_double(rep.eta) + " seed=" + std::to_string(rep.seed) +
           " word_len=" + std::to_string(rep.word_len) + "\n";
    out += "# thresholds=";
    for (size_t j = 0; j < rep.thresholds.size(); ++j) {
        if (j) out += ',';
        out += fmt_double(rep.thresholds[j]);
    }
    out += "\n# fractions c=" + fmt_double(rep.frac_c) + " dc1=" + fmt_double(rep.frac_dc1) +
           " dc2=" + fmt_double(rep.frac_dc2) +
           " nested=" + std::to_string(rep.fractions_nested ? 1 : 0) + "\n";
    out += "pair\tseed\tc\tdc1\tdc2\texact\tliminf\tlimsup\tfhat_delta\tfstar_delta";
    for (double t : rep.thresholds) out += "\tfhat@" + fmt_double(t);
    for (double t : rep.thresholds) out += "\tfstar@" + fmt_double(t);
    out += "\tnote\n";
    for (const auto& row : rep.rows) {
        out += std::to_string(row.pair_id) + "\t" + std::to_string(row.seed) + "\t" +
               std::to_string(row.c ? 1 : 0) + "\t" + std::to_string(row.dc1 ? 1 : 0) + "\t" +
               std::to_string(row.dc2 ? 1 : 0) + "\t" + std::to_string(row.exact ? 1 : 0) + "\t" +
               fmt_double(row.liminf_hat) + "\t" + fmt_double(row.limsup_hat) + "\t" +
               fmt_double(row.fhat_delta) + "\t" + fmt_double(row.fstar_delta);
        for (double v : row.fhat) out += "\t" + fmt_double(v);
        for (double v : row.fstar) out += "\t" + fmt_double(v);
        out += "\t" + row.note + "\n";
    }
    return out;
}

// ---- constructive probes on the unconstrained shift ----

// letters of head below position m, letters of tail from m on
inline symbolic_point splice_point(const symbolic_point& head, size_t m,
                                   const symbolic_point& tail) {
    const size_t cut = std::max(m, tail.preperiod().size());
    std::vector<double> pre(cut);
    for (size_t i = 0; i < cut; ++i) pre[i] = i < m ? head.letter(i) : tail.letter(i);
    const auto& P = tail.period();
    const size_t ph = (cut - tail.preperiod().size()) % P.size();
    std::vector<double> per(P.size());
    for (size_t j = 0; j < P.size(); ++j) per[j] = P[(ph + j) % P.size()];
    return symbolic_point(std::move(pre), std::move(per));
}

struct regional_probe_result {
    symbolic_point z, w;
    long long time = 0;
    double d_xz = 0, d_yw = 0, d_meet = 0;
    bool ok = false;
};

// near any pair, a nearby pair whose orbits meet within eps: keep x, graft x's tail
// onto y past a long matching prefix; only the unconstrained shift admits every graft
inline regional_probe_result regional_proximal_probe(const symbolic_point& x,
                                                     const symbolic_point& y, double eps,
                                                     example_id id = example_id::fullshift) {
    if (id != example_id::fullshift)
        throw param_mismatch_error("splice probes need the unconstrained shift");
    if (!(eps > 0.0)) throw bad_threshold_error("eps must be positive");
    const double range = x.max_abs_letter() + y.max_abs_letter();
    size_t m = 1;
    while (std::ldexp(range, -static_cast<int>(m + 1)) > eps && m < 4096) ++m;
    regional_probe_result out;
    out.z = x;
    out.w = splice_point(y, m, x);
    out.time = static_cast<long long>(m);
    out.d_xz = sym_distance(x, out.z);
    out.d_yw = sym_distance(y, out.w);
    out.d_meet = offset_distance(out.z, m, out.w, m);
    out.ok = out.d_xz <= eps && out.d_yw <= eps && out.d_meet <= eps;
    return out;
}

struct sensitivity_probe_result {
    symbolic_point y;
    long long time = 0;
    double d_close = 0, d_far = 0;
    bool ok = false;
};

// a single flipped letter far out keeps the new point eps-close while the orbits
// separate to half the letter range once the flip reaches the front
inline sensitivity_probe_result sensitivity_splice_probe(const symbolic_point& x, double eps,
                                                         double e,
                                                         example_id id = example_id::fullshift) {
    if (id != example_id::fullshift)
        throw param_mismatch_error("splice probes need the unconstrained shift");
    if (!(eps > 0.0) || !(e > 0.0)) throw bad_threshold_error("eps and e must be positive");
    size_t m = 1;
    while (std::ldexp(1.0, -static_cast<int>(m + 1)) > eps && m < 4096) ++m;
    const double a = x.letter(m);
    if (a != 0.0 && a != 1.0)
        throw param_mismatch_error("flip probe needs binary letters, got " + fmt_double(a));
    sensitivity_probe_result out;
    std::vector<double> pre(std::max(m + 1, x.preperiod().size()));
    for (size_t i = 0; i < pre.size(); ++i) pre[i] = i == m ? 1.0 - a : x.letter(i);
    const auto& P = x.period();
    const size_t ph = (pre.size() - x.preperiod().size()) % P.size();
    std::vector<double> per(P.size());
    for (size_t j = 0; j < P.size(); ++j) per[j] = P[(ph + j) % P.size()];
    out.y = symbolic_point(std::move(pre), std::move(per));
    out.time = static_cast<long long>(m);
    out.d_close = sym_distance(x, out.y);
    out.d_far = offset_distance(x, m, out.y, m);
    out.ok = out.d_close <= eps && out.d_far >= e;
    return out;
}

} // namespace chainchaos
