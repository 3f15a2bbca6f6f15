#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chainchaos/errors.hpp"
#include "chainchaos/symbolic_point.hpp"

namespace chainchaos {

enum class example_id { fullshift, ex41, ex42, ex43, ex44, ex45, twofix };

inline std::string to_string(example_id id) {
    switch (id) {
        case example_id::fullshift: return "fullshift";
        case example_id::ex41: return "ex41";
        case example_id::ex42: return "ex42";
        case example_id::ex43: return "ex43";
        case example_id::ex44: return "ex44";
        case example_id::ex45: return "ex45";
        case example_id::twofix: return "twofix";
    }
    return "?";
}

inline example_id parse_example_id(const std::string& s) {
    for (example_id id : {example_id::fullshift, example_id::ex41, example_id::ex42,
                          example_id::ex43, example_id::ex44, example_id::ex45,
                          example_id::twofix})
        if (s == to_string(id)) return id;
    throw unknown_example_error(s);
}

struct example_params {
    std::vector<double> s;   // modulus ladder; meaning depends on the example family
    int k_max = 3;
    int window = 5;          // word length for discretized models
    int grid_n = 41;         // t-grid size for the skew product model
    // reporting-only scale ladders used by the containment diagnostics
    std::vector<double> delta_seq, eps_seq;
};

inline example_params default_params(example_id id) {
    example_params p;
    switch (id) {
        case example_id::ex43:
        case example_id::ex44:
            p.s = {0.5, 0.75, 0.875};  // increasing toward 1
            p.window = 5;
            break;
        case example_id::ex45:
            p.s = {0.5, 0.25, 0.125};  // decreasing toward 0
            p.window = 4;
            break;
        case example_id::ex42:
            p.window = 4;
            p.grid_n = 41;
            break;
        case example_id::ex41:
            p.window = 5;
            break;
        case example_id::fullshift:
            p.window = 4;
            break;
        case example_id::twofix:
            break;
    }
    for (int k = 1; k <= p.k_max; ++k) {
        p.delta_seq.push_back(std::ldexp(1.0, -k - 3));
        p.eps_seq.push_back(std::ldexp(1.0, -k - 2));
    }
    return p;
}

inline void validate_params(example_id id, const example_params& p) {
    if (p.window < 1) throw param_mismatch_error("window must be >= 1");
    if (id == example_id::ex42 && p.grid_n < 2)
        throw degenerate_grid_error("grid_n = " + std::to_string(p.grid_n));
    if (id == example_id::ex43 || id == example_id::ex44 || id == example_id::ex45) {
        if (p.k_max < 1 || p.k_max > static_cast<int>(p.s.size()))
            throw param_mismatch_error("k_max must index into s");
        const bool increasing = id != example_id::ex45;
        for (int k = 0; k < p.k_max; ++k) {
            if (p.s[k] <= 0 || p.s[k] >= 1)
                throw param_mismatch_error("s values must lie in (0,1)");
            if (k > 0 && (increasing ? p.s[k] <= p.s[k - 1] : p.s[k] >= p.s[k - 1]))
                throw param_mismatch_error(increasing ? "s must increase" : "s must decrease");
        }
    }
    for (size_t i = 1; i < p.delta_seq.size(); ++i)
        if (p.delta_seq[i] >= p.delta_seq[i - 1])
            throw param_mismatch_error("delta_seq must strictly decrease");
    for (size_t i = 1; i < p.eps_seq.size(); ++i)
        if (p.eps_seq[i] >= p.eps_seq[i - 1])
            throw param_mismatch_error("eps_seq must strictly decrease");
}

// letter values a word over this example may use, sorted ascending
inline std::vector<double> alphabet(example_id id, const example_params& p) {
    std::vector<double> a;
    switch (id) {
        case example_id::fullshift:
        case example_id::ex41:
        case example_id::ex42:
            a = {0.0, 1.0};
            break;
        case example_id::ex43:
        case example_id::ex44:
            a.push_back(-1.0);
            for (int k = p.k_max - 1; k >= 0; --k) a.push_back(-p.s[k]);
            for (int k = 0; k < p.k_max; ++k) a.push_back(p.s[k]);
            a.push_back(1.0);
            std::sort(a.begin(), a.end());
            break;
        case example_id::ex45:
            a.push_back(0.0);
            for (int k = 0; k < p.k_max; ++k) {
                a.push_back(p.s[k]);
                a.push_back(-p.s[k]);
            }
            std::sort(a.begin(), a.end());
            break;
        case example_id::twofix:
            throw unknown_example_error("twofix has no word alphabet");
    }
    return a;
}

namespace detail {

// which rung of the s ladder a positive modulus sits on; -1 if none
inline int s_index(const example_params& p, double v) {
    for (int k = 0; k < p.k_max; ++k)
        if (v == p.s[k]) return k;
    return -1;
}

} // namespace detail

// finite-word admissibility; constraints whose trigger or scope falls outside the
// word are treated as satisfied, so every prefix/subword of an admissible word passes
inline bool member_word(example_id id, const example_params& p, const std::vector<double>& w) {
    const auto alpha = id == example_id::twofix ? std::vector<double>{} : alphabet(id, p);
    for (double a : w)
        if (std::find(alpha.begin(), alpha.end(), a) == alpha.end()) return false;
    const size_t n = w.size();
    switch (id) {
        case example_id::fullshift:
        case example_id::ex42:
            return true;
        case example_id::ex41: {
            // the one-spike class: at most a single 1
            int ones = 0;
            for (double a : w) ones += a == 1.0;
            return ones <= 1;
        }
        case example_id::ex43: {
            for (size_t i = 0; i + 1 < n; ++i)
                if (std::abs(w[i]) > std::abs(w[i + 1])) return false;
            for (size_t i = 0; i < n; ++i) {
                if (w[i] == 1.0) {
                    for (size_t j = i + 1; j < n; ++j)
                        if (w[j] != -1.0) return false;
                } else if (w[i] > 0) {
                    const int k = detail::s_index(p, w[i]);
                    if (k < 0) return false;
                    for (size_t j = 1; j <= static_cast<size_t>(k + 1) && i + j < n; ++j)
                        if (w[i + j] != -w[i]) return false;
                }
            }
            return true;
        }
        case example_id::ex44: {
            for (size_t i = 0; i + 1 < n; ++i)
                if (std::abs(w[i]) > std::abs(w[i + 1])) return false;
            for (size_t i = 0; i + 1 < n; ++i) {
                if (w[i] < 0 && w[i + 1] > 0) {
                    // upward sign switch: the new positive value must persist
                    if (w[i + 1] == 1.0) {
                        for (size_t j = i + 2; j < n; ++j)
                            if (w[j] != 1.0) return false;
                    } else {
                        const int k = detail::s_index(p, w[i + 1]);
                        if (k < 0) return false;
                        for (size_t j = 1; j <= static_cast<size_t>(k + 1) && i + j < n; ++j)
                            if (w[i + j] != w[i + 1]) return false;
                    }
                } else if (w[i] > 0 && w[i + 1] < 0) {
                    if (w[i + 1] == -1.0) {
                        for (size_t j = i + 2; j < n; ++j)
                            if (w[j] != -1.0) return false;
                    } else {
                        const int k = detail::s_index(p, -w[i + 1]);
                        if (k < 0) return false;
                        for (size_t j = 1; j <= static_cast<size_t>(k + 1) && i + j < n; ++j)
                            if (w[i + j] != w[i + 1]) return false;
                    }
                }
            }
            return true;
        }
        case example_id::ex45: {
            for (size_t i = 0; i + 1 < n; ++i)
                if (std::abs(w[i]) < std::abs(w[i + 1])) return false;
            return true;
        }
        case example_id::twofix:
            return false;
    }
    return false;
}

// extend a finite admissible word to an admissible eventually periodic point by
// finishing any forced run and settling into a quiet tail
inline symbolic_point absorb_tail(example_id id, const example_params& p,
                                  std::vector<double> w) {
    if (!member_word(id, p, w))
        throw param_mismatch_error("absorb_tail needs an admissible word");
    switch (id) {
        case example_id::fullshift:
        case example_id::ex41:
        case example_id::ex42:
            return symbolic_point(std::move(w), {0.0});
        case example_id::ex43: {
            // finish a pending -s_k run, then constants at -1 forever
            if (!w.empty() && w.back() == 1.0) return symbolic_point(std::move(w), {-1.0});
            for (size_t i = 0; i < w.size(); ++i) {
                if (w[i] > 0 && w[i] != 1.0) {
                    const int k = detail::s_index(p, w[i]);
                    for (size_t j = w.size(); j <= i + static_cast<size_t>(k + 1); ++j)
                        w.push_back(-w[i]);
                }
            }
            return symbolic_point(std::move(w), {-1.0});
        }
        case example_id::ex44: {
            // finish a pending switch run, then repeat the final letter forever
            for (size_t i = 0; i + 1 < w.size(); ++i) {
                if ((w[i] < 0 && w[i + 1] > 0) || (w[i] > 0 && w[i + 1] < 0)) {
                    const double v = w[i + 1];
                    if (v == 1.0 || v == -1.0) continue;  // constant tail handles it
                    const int k = detail::s_index(p, std::abs(v));
                    for (size_t j = w.size(); j <= i + static_cast<size_t>(k + 1); ++j)
                        w.push_back(v);
                }
            }
            const double tail = w.empty() ? -p.s[0] : w.back();
            return symbolic_point(std::move(w), {tail});
        }
        case example_id::ex45:
            return symbolic_point(std::move(w), {0.0});
        case example_id::twofix:
            throw unknown_example_error("twofix has no symbolic points");
    }
    throw unknown_example_error("absorb_tail");
}

} // namespace chainchaos
