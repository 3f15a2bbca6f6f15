#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "chainchaos/shift_rules.hpp"
#include "chainchaos/textio.hpp"

using namespace chainchaos;
using word = std::vector<double>;

namespace {

// every admissible word of a given length, by brute-force enumeration
std::vector<word> enumerate_words(example_id id, const example_params& p, int len) {
    const auto alpha = alphabet(id, p);
    std::vector<word> out, frontier{word{}};
    for (int i = 0; i < len; ++i) {
        std::vector<word> next;
        for (const auto& w : frontier)
            for (double a : alpha) {
                word w2 = w;
                w2.push_back(a);
                if (member_word(id, p, w2)) next.push_back(std::move(w2));
            }
        frontier = std::move(next);
    }
    return frontier;
}

} // namespace

TEST_CASE("example ids parse and print") {
    CHECK(parse_example_id("ex43") == example_id::ex43);
    CHECK(to_string(example_id::fullshift) == "fullshift");
    CHECK_THROWS_AS(parse_example_id("ex99"), unknown_example_error);
}

TEST_CASE("parameter validation") {
    auto p = default_params(example_id::ex43);
    CHECK_NOTHROW(validate_params(example_id::ex43, p));
    p.s = {0.5, 0.4, 0.9};
    CHECK_THROWS_AS(validate_params(example_id::ex43, p), param_mismatch_error);
    auto q = default_params(example_id::ex45);
    CHECK_NOTHROW(validate_params(example_id::ex45, q));
    q.s = {0.5, 0.6, 0.125};
    CHECK_THROWS_AS(validate_params(example_id::ex45, q), param_mismatch_error);
    auto r = default_params(example_id::ex42);
    r.grid_n = 1;
    CHECK_THROWS_AS(validate_params(example_id::ex42, r), degenerate_grid_error);
    auto t = default_params(example_id::ex44);
    t.k_max = 5;
    CHECK_THROWS_AS(validate_params(example_id::ex44, t), param_mismatch_error);
}

TEST_CASE("alphabets") {
    const auto p43 = default_params(example_id::ex43);
    CHECK(alphabet(example_id::ex43, p43) ==
          word{-1, -0.875, -0.75, -0.5, 0.5, 0.75, 0.875, 1});
    const auto p45 = default_params(example_id::ex45);
    CHECK(alphabet(example_id::ex45, p45) ==
          word{-0.5, -0.25, -0.125, 0, 0.125, 0.25, 0.5});
    CHECK(alphabet(example_id::fullshift, default_params(example_id::fullshift)) == word{0, 1});
}

TEST_CASE("one-spike membership") {
    const auto p = default_params(example_id::ex41);
    CHECK(member_word(example_id::ex41, p, {0, 0, 0}));
    CHECK(member_word(example_id::ex41, p, {0, 1, 0}));
    CHECK_FALSE(member_word(example_id::ex41, p, {1, 1, 0}));
    CHECK_FALSE(member_word(example_id::ex41, p, {0, 0.5}));
    CHECK(enumerate_words(example_id::ex41, p, 3).size() == 4);  // 000 100 010 001
    CHECK(enumerate_words(example_id::ex41, p, 5).size() == 6);
}

TEST_CASE("increasing-modulus family membership") {
    const auto p = default_params(example_id::ex43);
    const double s1 = 0.5, s2 = 0.75;
    CHECK(member_word(example_id::ex43, p, {s1, -s1, s1, -s1}));      // alternating ok
    CHECK_FALSE(member_word(example_id::ex43, p, {s1, s1}));          // run not honored
    CHECK(member_word(example_id::ex43, p, {s2, -s2, -s2}));          // k=2 run of two
    CHECK_FALSE(member_word(example_id::ex43, p, {s2, -s2, s2}));     // run cut short
    CHECK_FALSE(member_word(example_id::ex43, p, {s2, -s1}));         // modulus drops
    CHECK(member_word(example_id::ex43, p, {-s1, -s2, -1}));          // climbing ok
    CHECK(member_word(example_id::ex43, p, {1, -1, -1}));             // spike then floor
    CHECK_FALSE(member_word(example_id::ex43, p, {1, -1, 1}));        // floor violated
    CHECK(member_word(example_id::ex43, p, {s1, -s1, -1}));           // run then climb
    // switch-persistence family: runs attach to sign switches instead
    const auto q = default_params(example_id::ex44);
    CHECK(member_word(example_id::ex44, q, {-s1, s1, -s1, s1}));      // k=1 free flips
    CHECK(member_word(example_id::ex44, q, {-s2, s2, s2, -s2, -s2}));
    CHECK_FALSE(member_word(example_id::ex44, q, {-s2, s2, -s2}));    // run cut short
    CHECK(member_word(example_id::ex44, q, {-s1, 1, 1, 1}));
    CHECK_FALSE(member_word(example_id::ex44, q, {-s1, 1, 1, -1}));   // constant tail broken
    CHECK(member_word(example_id::ex44, q, {s1, -1, -1}));
    CHECK_FALSE(member_word(example_id::ex44, q, {s2, -s2, s2}));     // k=2 run cut short
}

TEST_CASE("decreasing-modulus family membership") {
    const auto p = default_params(example_id::ex45);
    CHECK(member_word(example_id::ex45, p, {0.5, 0.25, 0.25, 0}));
    CHECK(member_word(example_id::ex45, p, {-0.5, 0.5, -0.5}));
    CHECK_FALSE(member_word(example_id::ex45, p, {0.25, 0.5}));
    CHECK(member_word(example_id::ex45, p, {0, 0, 0}));
    CHECK_FALSE(member_word(example_id::ex45, p, {0, 0.125}));
}

TEST_CASE("admissibility is closed under subwords") {
    for (example_id id : {example_id::ex43, example_id::ex44, example_id::ex45}) {
        const auto p = default_params(id);
        for (const auto& w : enumerate_words(id, p, 5)) {
            for (size_t a = 0; a < w.size(); ++a)
                for (size_t b = a; b <= w.size(); ++b) {
                    word sub(w.begin() + a, w.begin() + b);
                    INFO(to_string(id));
                    CHECK(member_word(id, p, sub));
                }
        }
    }
}

TEST_CASE("word counts for the default windows") {
    CHECK(enumerate_words(example_id::fullshift, default_params(example_id::fullshift), 4).size()
          == 16);
    const auto p43 = default_params(example_id::ex43);
    // single-modulus classes at length 5: no-double-plus 13, run-of-2 9, run-of-3 7, spikes 6
    int x1 = 0, x2 = 0, x3 = 0, top = 0;
    for (const auto& w : enumerate_words(example_id::ex43, p43, 5)) {
        bool only1 = true, only2 = true, only3 = true, onlytop = true;
        for (double a : w) {
            only1 &= std::abs(a) == 0.5;
            only2 &= std::abs(a) == 0.75;
            only3 &= std::abs(a) == 0.875;
            onlytop &= std::abs(a) == 1.0;
        }
        x1 += only1;
        x2 += only2;
        x3 += only3;
        top += onlytop;
    }
    CHECK(x1 == 13);
    CHECK(x2 == 9);
    CHECK(x3 == 7);
    CHECK(top == 6);
}

TEST_CASE("absorbed tails stay admissible") {
    rng64 rng(77);
    for (example_id id : {example_id::fullshift, example_id::ex41, example_id::ex43,
                          example_id::ex44, example_id::ex45}) {
        const auto p = default_params(id);
        const auto words = enumerate_words(id, p, 4);
        for (const auto& w : words) {
            const symbolic_point pt = absorb_tail(id, p, w);
            for (size_t i = 0; i < w.size(); ++i) CHECK(pt.letter(i) == w[i]);
            // every long prefix of the completed point must be admissible
            word prefix;
            for (size_t i = 0; i < w.size() + 12; ++i) prefix.push_back(pt.letter(i));
            INFO(to_string(id) << " word " << symbolic_point(w, {w.empty() ? 0 : w.back()}).to_text());
            CHECK(member_word(id, p, prefix));
        }
    }
    CHECK_THROWS_AS(absorb_tail(example_id::ex43, default_params(example_id::ex43), {0.5, 0.5}),
                    param_mismatch_error);
}
