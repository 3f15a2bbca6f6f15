#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "chainchaos/errors.hpp"
#include "chainchaos/shift_rules.hpp"
#include "chainchaos/textio.hpp"

namespace chainchaos {

// finite model of a dynamical system: points with labels, a successor relation
// (possibly multivalued), and an exact metric
struct finite_system {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> succ;
    std::function<double(int, int)> dist;
    double diam = 0;
    int n() const { return static_cast<int>(succ.size()); }
};

inline finite_system make_finite_system(std::vector<std::string> labels,
                                        std::vector<std::vector<int>> succ,
                                        std::function<double(int, int)> dist,
                                        uint64_t check_seed = 0x5eed) {
    const int n = static_cast<int>(succ.size());
    if (n == 0) throw config_error("finite system needs at least one point");
    if (labels.empty())
        for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    if (static_cast<int>(labels.size()) != n)
        throw config_error("labels/successors size mismatch");
    for (int i = 0; i < n; ++i) {
        auto& s = succ[i];
        if (s.empty()) throw empty_successor_error(labels[i]);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (int v : s)
            if (v < 0 || v >= n) throw config_error("successor index out of range");
    }

    // metric sanity: exhaustively when small, sampled otherwise
    const double tol = 1e-12;
    auto check_triple = [&](int a, int b, int c) {
        const double ab = dist(a, b), ba = dist(b, a), ac = dist(a, c), cb = dist(c, b);
        const char* what = nullptr;
        if (a == b && ab != 0) what = "d(x,x) != 0";
        if (ab < 0) what = "negative distance";
        if (a != b && ab == 0) what = "zero distance between distinct points";
        if (ab != ba) what = "asymmetric";
        if (ab > ac + cb + tol) what = "triangle inequality";
        if (what)
            throw metric_violation_error(std::string(what) + " at (" + labels[a] + ", " +
                                         labels[b] + ", " + labels[c] + ")");
    };
    const long long total = static_cast<long long>(n) * n * n;
    if (total <= 100000) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) check_triple(a, b, c);
    } else {
        rng64 r(check_seed);
        for (int trial = 0; trial < 100000; ++trial)
            check_triple(static_cast<int>(r.below(n)), static_cast<int>(r.below(n)),
                         static_cast<int>(r.below(n)));
    }

    finite_system fs{std::move(labels), std::move(succ), std::move(dist), 0.0};
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) fs.diam = std::max(fs.diam, fs.dist(a, b));
    return fs;
}

// grid model of a self-map of [0,1]; images snap to the nearest grid point,
// ties resolved toward the smaller index
inline finite_system discretize_interval_map(const std::function<double(double)>& f, int grid_n,
                                             const std::string& name = "interval") {
    if (grid_n < 2) throw degenerate_grid_error(name + " grid_n = " + std::to_string(grid_n));
    std::vector<double> grid(grid_n);
    for (int i = 0; i < grid_n; ++i) grid[i] = static_cast<double>(i) / (grid_n - 1);
    std::vector<std::string> labels(grid_n);
    std::vector<std::vector<int>> succ(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        labels[i] = fmt_double(grid[i]);
        double v = f(grid[i]);
        v = std::min(1.0, std::max(0.0, v));
        const double scaled = v * (grid_n - 1);
        int lo = static_cast<int>(std::floor(scaled));
        lo = std::min(lo, grid_n - 1);
        int pick = lo;
        if (lo + 1 < grid_n && (grid[lo + 1] - v) < (v - grid[lo])) pick = lo + 1;
        succ[i] = {pick};
    }
    auto g = std::make_shared<std::vector<double>>(std::move(grid));
    return make_finite_system(std::move(labels), std::move(succ),
                              [g](int a, int b) { return std::abs((*g)[a] - (*g)[b]); });
}

// all admissible words of one length under an example's rule, with the
// shift-successor relation w1..wL -> w2..wL a and the weighted sup metric
struct word_system {
    finite_system sys;
    std::vector<std::vector<double>> words;
    example_id id = example_id::fullshift;
    example_params params;
    int window = 0;
    double weight_base = 2.0;

    int index_of(const std::vector<double>& w) const {
        const auto it = index.find(w);
        return it == index.end() ? -1 : it->second;
    }
    std::map<std::vector<double>, int> index;
};

inline double word_distance(const std::vector<double>& a, const std::vector<double>& b,
                            double weight_base = 2.0) {
    double best = 0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        const double w = weight_base == 2.0
                             ? std::ldexp(1.0, -static_cast<int>(i + 1))
                             : std::pow(weight_base, -static_cast<double>(i + 1));
        best = std::max(best, w * std::abs(a[i] - b[i]));
    }
    return best;
}

inline std::string word_label(const std::vector<double>& w) {
    std::vector<std::string> parts;
    bool binaryish = true;
    for (double a : w) binaryish &= a == 0.0 || a == 1.0;
    if (binaryish) {
        std::string s;
        for (double a : w) s += a == 1.0 ? '1' : '0';
        return s;
    }
    for (double a : w) parts.push_back(fmt_double(a));
    return join(parts, ",");
}

inline word_system discretize_subshift(example_id id, const example_params& p, int window,
                                       size_t cap = 2'000'000) {
    validate_params(id, p);
    if (window < 1) throw param_mismatch_error("window must be >= 1");
    const auto alpha = alphabet(id, p);
    word_system ws;
    ws.id = id;
    ws.params = p;
    ws.window = window;

    std::vector<std::vector<double>> frontier{{}};
    for (int i = 0; i < window; ++i) {
        std::vector<std::vector<double>> next;
        for (const auto& w : frontier)
            for (double a : alpha) {
                std::vector<double> w2 = w;
                w2.push_back(a);
                if (member_word(id, p, w2)) next.push_back(std::move(w2));
            }
        frontier = std::move(next);
        if (frontier.size() > cap)
            throw state_space_cap_error(std::to_string(frontier.size()) + " words at length " +
                                        std::to_string(i + 1));
        if (frontier.empty()) break;
    }
    if (frontier.empty()) throw empty_shift_error(to_string(id));
    ws.words = std::move(frontier);  // lexicographic by construction
    for (size_t i = 0; i < ws.words.size(); ++i) ws.index[ws.words[i]] = static_cast<int>(i);

    const int n = static_cast<int>(ws.words.size());
    std::vector<std::string> labels(n);
    std::vector<std::vector<int>> succ(n);
    for (int i = 0; i < n; ++i) {
        labels[i] = word_label(ws.words[i]);
        std::vector<double> tail(ws.words[i].begin() + 1, ws.words[i].end());
        for (double a : alpha) {
            tail.push_back(a);
            if (member_word(id, p, tail)) {
                const int j = ws.index_of(tail);
                if (j >= 0) succ[i].push_back(j);
            }
            tail.pop_back();
        }
        if (succ[i].empty()) throw empty_successor_error(labels[i]);
    }

    auto words_shared = std::make_shared<std::vector<std::vector<double>>>(ws.words);
    const double wb = ws.weight_base;
    ws.sys = make_finite_system(std::move(labels), std::move(succ),
                                [words_shared, wb](int a, int b) {
                                    return word_distance((*words_shared)[a], (*words_shared)[b],
                                                         wb);
                                });
    return ws;
}

// plain-text export: one "i j dist" line per pair (i < j), then "i -> j" successors
inline std::string export_system(const finite_system& fs) {
    std::string out;
    out += "n = " + std::to_string(fs.n()) + "\n";
    for (int i = 0; i < fs.n(); ++i)
        out += "label " + std::to_string(i) + " " + fs.labels[i] + "\n";
    for (int i = 0; i < fs.n(); ++i)
        for (int j = i + 1; j < fs.n(); ++j)
            out += std::to_string(i) + " " + std::to_string(j) + " " + fmt_double(fs.dist(i, j)) +
                   "\n";
    for (int i = 0; i < fs.n(); ++i)
        for (int j : fs.succ[i]) out += std::to_string(i) + " -> " + std::to_string(j) + "\n";
    return out;
}

} // namespace chainchaos
