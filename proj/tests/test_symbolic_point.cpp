#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "chainchaos/symbolic_point.hpp"
#include "chainchaos/textio.hpp"

using namespace chainchaos;
using sp = symbolic_point;

namespace {

// independent reference: expand both streams far enough and take the sup directly
double brute_distance(const sp& x, const sp& y, size_t scan = 512) {
    double best = 0;
    for (size_t r = 0; r < scan; ++r)
        best = std::max(best, std::ldexp(std::abs(x.letter(r) - y.letter(r)),
                                         -static_cast<int>(r + 1)));
    return best;
}

sp random_point(rng64& r, const std::vector<double>& alphabet) {
    std::vector<double> pre(r.below(5)), per(1 + r.below(4));
    for (auto& a : pre) a = alphabet[r.below(alphabet.size())];
    for (auto& a : per) a = alphabet[r.below(alphabet.size())];
    return sp(pre, per);
}

} // namespace

TEST_CASE("canonical form: primitive period") {
    sp p({}, {1, 0, 1, 0});
    CHECK(p.period() == std::vector<double>{1, 0});
    CHECK(p.preperiod().empty());
    sp q({}, {1, 1, 1});
    CHECK(q.period() == std::vector<double>{1});
}

TEST_CASE("canonical form: preperiod absorbed into rotated period") {
    // 0 1 0 (1 0)^inf is just (0 1)^inf
    sp p({0, 1, 0}, {1, 0});
    CHECK(p.preperiod().empty());
    CHECK(p.period() == std::vector<double>{0, 1});
    for (size_t i = 0; i < 12; ++i) CHECK(p.letter(i) == (i % 2 == 0 ? 0 : 1));
}

TEST_CASE("canonicalization is idempotent and letter-preserving") {
    rng64 r(11);
    const std::vector<double> alpha{0, 1, 0.5, -0.5};
    for (int trial = 0; trial < 200; ++trial) {
        sp p = random_point(r, alpha);
        sp again(p.preperiod(), p.period());
        CHECK(p == again);
        // rebuilding from any expanded prefix must land on the same canonical form
        const size_t cut = r.below(8);
        std::vector<double> pre2;
        for (size_t i = 0; i < p.preperiod().size() + cut; ++i) pre2.push_back(p.letter(i));
        std::vector<double> per2;
        const size_t off = (pre2.size() >= p.preperiod().size())
                               ? (pre2.size() - p.preperiod().size()) % p.period().size()
                               : 0;
        for (size_t i = 0; i < p.period().size(); ++i)
            per2.push_back(p.period()[(off + i) % p.period().size()]);
        CHECK(sp(pre2, per2) == p);
    }
}

TEST_CASE("shift drops one letter") {
    CHECK(sp({1}, {0}).shifted() == sp::constant(0));        // 1 0^inf -> 0^inf
    CHECK(sp({}, {0, 1}).shifted() == sp({}, {1, 0}));       // (01)^inf -> (10)^inf
    CHECK(sp({0, 1, 1}, {0}).shifted() == sp({1, 1}, {0}));  // 011 0^inf -> 11 0^inf
    rng64 r(5);
    const std::vector<double> alpha{0, 1, 0.75};
    for (int trial = 0; trial < 100; ++trial) {
        sp p = random_point(r, alpha);
        sp s = p.shifted();
        for (size_t i = 0; i < 20; ++i) CHECK(s.letter(i) == p.letter(i + 1));
    }
}

TEST_CASE("text form round-trips") {
    sp p({1, 0.5}, {-0.25, 0});
    CHECK(p.to_text() == "1,0.5|-0.25,0");
    CHECK(sp::parse(p.to_text()) == p);
    CHECK(sp::parse("|0") == sp::constant(0));
    CHECK(sp::parse("1|0") == sp({1}, {0}));
    CHECK(sp::parse(" 1 , 0 | 1 ") == sp({1, 0}, {1}));
    CHECK_THROWS_AS(sp::parse("1,0"), parse_error);
    CHECK_THROWS_AS(sp::parse("1|"), parse_error);
    CHECK_THROWS_AS(sp::parse("1|0|1"), parse_error);
    CHECK_THROWS_AS(sp::parse("a|b"), parse_error);
}

TEST_CASE("distance golden values") {
    const sp zero = sp::constant(0);
    CHECK(sym_distance(zero, sp({1}, {0})) == 0.5);          // differ at the first letter
    CHECK(sym_distance(zero, sp({0, 0, 1}, {0})) == 0.125);  // differ at the third
    CHECK(sym_distance(sp::constant(0.5), sp::constant(-0.5)) == 0.5);
    CHECK(sym_distance(sp({}, {0, 1}), sp({}, {1, 0})) == 0.5);
    CHECK(sym_distance(zero, zero) == 0.0);
    // one-sided tail difference: x = 0^inf vs y = 0^5 (1 0)^inf
    CHECK(sym_distance(zero, sp({0, 0, 0, 0, 0}, {1, 0})) == std::ldexp(1.0, -6));
}

TEST_CASE("distance agrees with brute-force sup on random pairs") {
    rng64 r(99);
    const std::vector<double> alpha{0, 1, 0.5, -0.5, 0.875};
    for (int trial = 0; trial < 300; ++trial) {
        sp x = random_point(r, alpha), y = random_point(r, alpha);
        CHECK(sym_distance(x, y) == brute_distance(x, y));
    }
}

TEST_CASE("distance is a metric on sampled triples") {
    rng64 r(2024);
    const std::vector<double> alpha{0, 1, -1, 0.25};
    for (int trial = 0; trial < 200; ++trial) {
        sp x = random_point(r, alpha), y = random_point(r, alpha), z = random_point(r, alpha);
        const double dxy = sym_distance(x, y), dyx = sym_distance(y, x);
        CHECK(dxy == dyx);
        CHECK(dxy >= 0);
        if (dxy == 0) CHECK(x == y);
        CHECK(sym_distance(x, z) <= dxy + sym_distance(y, z) + 1e-15);
    }
}

TEST_CASE("offset distance matches shifted points") {
    rng64 r(31);
    const std::vector<double> alpha{0, 1};
    for (int trial = 0; trial < 100; ++trial) {
        sp x = random_point(r, alpha), y = random_point(r, alpha);
        sp xs = x, ys = y;
        const size_t i = r.below(6), j = r.below(6);
        for (size_t k = 0; k < i; ++k) xs = xs.shifted();
        for (size_t k = 0; k < j; ++k) ys = ys.shifted();
        CHECK(offset_distance(x, i, y, j) == sym_distance(xs, ys));
    }
}

TEST_CASE("hash separates distinct canonical points") {
    CHECK(sp({1}, {0}).hash() != sp::constant(0).hash());
    CHECK(sp({}, {0, 1}).hash() != sp({}, {1, 0}).hash());
    CHECK(sp({1}, {0}).hash() == sp({1, 0}, {0, 0}).hash());  // same canonical form
}

TEST_CASE("growth guard trips on absurd scans") {
    // two coprime long periods force a scan near their lcm
    std::vector<double> a(9973, 0), b(9967, 0);
    a[17] = 1;
    b[23] = 1;
    CHECK_THROWS_AS(offset_distance(sp({}, a), 0, sp({}, b), 0, -1.0, 2.0, 1 << 20),
                    symbolic_growth_error);
}
