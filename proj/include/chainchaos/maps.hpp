#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "chainchaos/errors.hpp"
#include "chainchaos/symbolic_point.hpp"

namespace chainchaos {

enum class map_id { shift, ex41, ex42 };

inline std::string to_string(map_id m) {
    switch (m) {
        case map_id::shift: return "shift";
        case map_id::ex41: return "ex41";
        case map_id::ex42: return "ex42";
    }
    return "?";
}

inline map_id parse_map_id(const std::string& s) {
    if (s == "shift" || s == "fullshift") return map_id::shift;
    if (s == "ex41") return map_id::ex41;
    if (s == "ex42") return map_id::ex42;
    throw unknown_map_error(s);
}

namespace detail {

inline std::vector<double> substitute_10(const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(v.size() * 2);
    for (double a : v) {
        if (a == 1.0) {
            out.push_back(1.0);
            out.push_back(0.0);
        } else if (a == 0.0) {
            out.push_back(0.0);
        } else {
            throw param_mismatch_error("substitution needs binary letters, got " + fmt_double(a));
        }
    }
    return out;
}

} // namespace detail

// substitute 1 -> 10, 0 -> 0 over the whole stream, then shift once; the substitution
// is letter-local, so applying it to preperiod and period separately is exact
inline symbolic_point ex41_map(const symbolic_point& x, size_t rep_cap = size_t(2) << 20) {
    std::vector<double> pre = detail::substitute_10(x.preperiod());
    std::vector<double> per = detail::substitute_10(x.period());
    if (pre.size() + per.size() > rep_cap)
        throw symbolic_growth_error("image of " + std::to_string(pre.size() + per.size()) +
                                    " letters");
    if (!pre.empty()) {
        pre.erase(pre.begin());
        return symbolic_point(std::move(pre), std::move(per));
    }
    return symbolic_point({}, std::move(per)).shifted();
}

// exponent 1 + sum_{i>=1} 2^-i x_i, summed exactly over the preperiod and in closed
// form over the periodic tail (geometric series)
inline double skew_exponent(const symbolic_point& x) {
    double head = 0;
    const auto& pre = x.preperiod();
    const auto& per = x.period();
    for (size_t i = 0; i < pre.size(); ++i) head += std::ldexp(pre[i], -static_cast<int>(i + 1));
    double block = 0;
    for (size_t j = 0; j < per.size(); ++j) block += std::ldexp(per[j], -static_cast<int>(j + 1));
    const int P = static_cast<int>(pre.size());
    const int L = static_cast<int>(per.size());
    const double tail = std::ldexp(block, -P) / (1.0 - std::ldexp(1.0, -L));
    return 1.0 + head + tail;
}

// truncated exponent over a finite window, used by the discretized model
inline double skew_exponent_window(const std::vector<double>& w) {
    double v = 1.0;
    for (size_t i = 0; i < w.size(); ++i) v += std::ldexp(w[i], -static_cast<int>(i + 1));
    return v;
}

struct skew_state {
    symbolic_point x;
    double t = 0;
    bool operator==(const skew_state& o) const { return x == o.x && t == o.t; }
};

// fiber map t -> t^phi(x) over the substitution-shift base
inline skew_state skew_step(const skew_state& s) {
    if (s.t < 0.0 || s.t > 1.0) throw param_mismatch_error("skew fiber needs t in [0,1]");
    const double e = skew_exponent(s.x);
    double t2 = std::pow(s.t, e);
    if (t2 > 1.0) t2 = 1.0;
    if (t2 < 0.0) t2 = 0.0;
    return {ex41_map(s.x), t2};
}

} // namespace chainchaos
