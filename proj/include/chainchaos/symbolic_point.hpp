#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include "chainchaos/errors.hpp"
#include "chainchaos/textio.hpp"

namespace chainchaos {

// eventually periodic sequence over a real-valued alphabet, kept in canonical form:
// the period is primitive and the preperiod is as short as possible
class symbolic_point {
public:
    symbolic_point() : per_{0.0} {}

    symbolic_point(std::vector<double> pre, std::vector<double> per)
        : pre_(std::move(pre)), per_(std::move(per)) {
        if (per_.empty()) throw parse_error("symbolic point needs a nonempty period");
        canonicalize();
    }

    static symbolic_point constant(double a) { return symbolic_point({}, {a}); }

    // w followed by tail^inf
    static symbolic_point word_then(std::vector<double> w, double tail) {
        return symbolic_point(std::move(w), {tail});
    }

    const std::vector<double>& preperiod() const { return pre_; }
    const std::vector<double>& period() const { return per_; }
    size_t rep_size() const { return pre_.size() + per_.size(); }

    double letter(size_t i) const {
        if (i < pre_.size()) return pre_[i];
        return per_[(i - pre_.size()) % per_.size()];
    }

    symbolic_point shifted() const {
        if (!pre_.empty())
            return symbolic_point(std::vector<double>(pre_.begin() + 1, pre_.end()), per_);
        std::vector<double> rot(per_.begin() + 1, per_.end());
        rot.push_back(per_.front());
        return symbolic_point({}, std::move(rot));
    }

    double max_abs_letter() const {
        double m = 0;
        for (double a : pre_) m = std::max(m, std::abs(a));
        for (double a : per_) m = std::max(m, std::abs(a));
        return m;
    }

    bool operator==(const symbolic_point& o) const { return pre_ == o.pre_ && per_ == o.per_; }
    bool operator!=(const symbolic_point& o) const { return !(*this == o); }

    uint64_t hash() const {
        uint64_t h = 0xcbf29ce484222325ull;
        auto mix = [&h](uint64_t v) {
            h ^= v;
            h *= 0x100000001b3ull;
        };
        mix(pre_.size());
        for (double a : pre_) mix(bits(a));
        mix(0x716f6b656eull);
        for (double a : per_) mix(bits(a));
        return h;
    }

    // text form: preperiod letters, '|', period letters; letters comma-separated
    std::string to_text() const {
        std::string out;
        for (size_t i = 0; i < pre_.size(); ++i) {
            if (i) out += ',';
            out += fmt_double(pre_[i]);
        }
        out += '|';
        for (size_t i = 0; i < per_.size(); ++i) {
            if (i) out += ',';
            out += fmt_double(per_[i]);
        }
        return out;
    }

    static symbolic_point parse(const std::string& s) {
        const auto parts = split(s, '|');
        if (parts.size() != 2) throw parse_error("symbolic point needs exactly one '|': " + s);
        auto letters = [](const std::string& part) {
            std::vector<double> v;
            if (trim(part).empty()) return v;
            for (const auto& tok : split(part, ',')) v.push_back(parse_double(tok));
            return v;
        };
        auto per = letters(parts[1]);
        if (per.empty()) throw parse_error("symbolic point needs a nonempty period: " + s);
        return symbolic_point(letters(parts[0]), std::move(per));
    }

private:
    static uint64_t bits(double a) {
        uint64_t b;
        std::memcpy(&b, &a, sizeof b);
        return b;
    }

    void canonicalize() {
        // primitive period: shortest divisor-length block that tiles it
        const size_t n = per_.size();
        for (size_t d = 1; d < n; ++d) {
            if (n % d) continue;
            bool tiles = true;
            for (size_t i = d; i < n && tiles; ++i) tiles = per_[i] == per_[i % d];
            if (tiles) {
                per_.resize(d);
                break;
            }
        }
        // absorb preperiod letters that already match the rotating period
        while (!pre_.empty() && pre_.back() == per_.back()) {
            pre_.pop_back();
            per_.insert(per_.begin(), per_.back());
            per_.pop_back();
        }
    }

    std::vector<double> pre_, per_;
};

// sup over r >= 0 of weight_base^-(r+1) * |x(i+r) - y(j+r)|, exact for eventually
// periodic points: the scan is capped at the joint preperiod plus one joint period,
// and cut early once the remaining tail cannot beat the current maximum
inline double offset_distance(const symbolic_point& x, size_t i, const symbolic_point& y,
                              size_t j, double range_bound = -1.0, double weight_base = 2.0,
                              size_t scan_cap = size_t(1) << 26) {
    if (range_bound < 0) range_bound = x.max_abs_letter() + y.max_abs_letter();
    if (range_bound == 0) return 0.0;
    const size_t px = x.preperiod().size() > i ? x.preperiod().size() - i : 0;
    const size_t py = y.preperiod().size() > j ? y.preperiod().size() - j : 0;
    const size_t total = std::max(px, py) + std::lcm(x.period().size(), y.period().size());
    if (total > scan_cap)
        throw symbolic_growth_error("distance scan of " + std::to_string(total) + " positions");
    double best = 0;
    for (size_t r = 0; r < total; ++r) {
        const double w = weight_base == 2.0 ? std::ldexp(1.0, -static_cast<int>(r + 1))
                                            : std::pow(weight_base, -static_cast<double>(r + 1));
        if (w * range_bound <= best) break;
        const double d = w * std::abs(x.letter(i + r) - y.letter(j + r));
        if (d > best) best = d;
    }
    return best;
}

inline double sym_distance(const symbolic_point& x, const symbolic_point& y,
                           double weight_base = 2.0) {
    if (x == y) return 0.0;
    return offset_distance(x, 0, y, 0, -1.0, weight_base);
}

} // namespace chainchaos
