#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "chainchaos/shadowing.hpp"

using namespace chainchaos;
using sp = symbolic_point;

namespace {

const sp zero = sp::constant(0.0);

// slow letter-by-letter deviation of the z-orbit against the run, exact for
// 0-tailed points when the horizon clears every preperiod
double brute_worst(const sp& z, const pseudo_orbit& po, size_t horizon = 64) {
    double worst = 0;
    for (size_t i = 0; i < po.points.size(); ++i)
        for (size_t p = 0; p < horizon; ++p) {
            const double d =
                std::ldexp(std::abs(z.letter(i + p) - po.points[i].letter(p)), -(int)(p + 1));
            worst = std::max(worst, d);
        }
    return worst;
}

} // namespace

TEST_CASE("true orbits pass at zero tolerance and loose tolerances absorb anything") {
    const sp x0({1, 0, 1, 1, 0}, {0});
    const pseudo_orbit po = perturb_orbit(x0, example_id::fullshift, 40, 0.0, 99);
    REQUIRE(po.points.size() == 40);
    CHECK(po.delta == 0.0);
    CHECK(po.map == map_id::shift);
    sp cur = x0;
    for (size_t i = 0; i < po.points.size(); ++i) {
        CHECK(po.points[i] == cur);
        cur = cur.shifted();
    }
    const orbit_check chk = is_pseudo_orbit(po);
    CHECK(chk.ok);
    CHECK(chk.worst == 0.0);
    CHECK(chk.first_bad == -1);

    // binary points never sit further than 1/2 apart, so delta = 1/2 accepts any list
    pseudo_orbit loose;
    loose.delta = 0.5;
    loose.map = map_id::shift;
    loose.points = {sp::constant(1.0), zero, sp({1, 0, 1}, {0}), sp::constant(1.0)};
    CHECK(is_pseudo_orbit(loose).ok);
}

TEST_CASE("a deep letter flip passes loose tolerances and trips tight ones") {
    // third point carries a 1 at position 1; the run is otherwise the quiet point
    pseudo_orbit po;
    po.map = map_id::shift;
    po.points = {zero, zero, sp({0, 1}, {0}), zero, zero};

    po.delta = 0.5;  // the flip emerges to position 0 one step later and costs 1/2
    orbit_check chk = is_pseudo_orbit(po);
    CHECK(chk.ok);
    CHECK(chk.worst == 0.5);
    CHECK(chk.worst_index == 2);

    po.delta = 0.25;  // link into the flipped point costs exactly 1/4, next link 1/2
    chk = is_pseudo_orbit(po);
    CHECK_FALSE(chk.ok);
    CHECK(chk.first_bad == 2);

    po.delta = 0.2;
    chk = is_pseudo_orbit(po);
    CHECK_FALSE(chk.ok);
    CHECK(chk.first_bad == 1);
    CHECK(chk.worst == 0.5);
    CHECK(chk.worst_index == 2);

    po.delta = -0.1;
    CHECK_THROWS_AS(is_pseudo_orbit(po), bad_delta_error);
    po.delta = 0.25;
    po.points.clear();
    CHECK_THROWS_AS(is_pseudo_orbit(po), param_mismatch_error);
}

TEST_CASE("pseudo-orbit text round-trips through the header form") {
    pseudo_orbit po;
    po.delta = 0.25;
    po.map = map_id::shift;
    po.points = {sp({1, 0}, {0}), sp({0, 1}, {0}), sp::constant(1.0)};

    const std::string text = pseudo_orbit_to_text(po);
    CHECK(text.substr(0, text.find('\n')) == "delta=0.25 map=shift");
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);

    const pseudo_orbit back = parse_pseudo_orbit(text);
    CHECK(back.delta == po.delta);
    CHECK(back.map == po.map);
    REQUIRE(back.points.size() == po.points.size());
    for (size_t i = 0; i < po.points.size(); ++i) CHECK(back.points[i] == po.points[i]);

    // blank lines and the fullshift alias are tolerated
    const pseudo_orbit spaced = parse_pseudo_orbit("\n  delta=0.125 map=fullshift  \n\n|0\n\n");
    CHECK(spaced.delta == 0.125);
    CHECK(spaced.map == map_id::shift);
    REQUIRE(spaced.points.size() == 1);
    CHECK(spaced.points[0] == zero);

    CHECK_THROWS_AS(parse_pseudo_orbit(""), parse_error);
    CHECK_THROWS_AS(parse_pseudo_orbit("delta=0.25\n|0\n"), parse_error);
    CHECK_THROWS_AS(parse_pseudo_orbit("map=shift\n|0\n"), parse_error);
    CHECK_THROWS_AS(parse_pseudo_orbit("delta=zzz map=shift\n|0\n"), parse_error);
    CHECK_THROWS_AS(parse_pseudo_orbit("delta=0.1 map=shift extra=1\n|0\n"), parse_error);
    CHECK_THROWS_AS(parse_pseudo_orbit("delta=0.1 map=shift\n"), parse_error);
}

TEST_CASE("perturbed runs respect their tolerance, their letters, and their seed") {
    SECTION("unconstrained binary shift") {
        const sp x0({1, 0, 1}, {0});
        const pseudo_orbit po = perturb_orbit(x0, example_id::fullshift, 100, 0.03125, 7);
        REQUIRE(po.points.size() == 100);
        CHECK(po.delta == 0.03125);
        const orbit_check chk = is_pseudo_orbit(po);
        CHECK(chk.ok);
        CHECK(chk.worst <= 0.03125);
        const example_params p = default_params(example_id::fullshift);
        for (const auto& pt : po.points) {
            std::vector<double> w = pt.preperiod();
            w.push_back(pt.period()[0]);
            CHECK(member_word(example_id::fullshift, p, w));
        }

        const pseudo_orbit again = perturb_orbit(x0, example_id::fullshift, 100, 0.03125, 7);
        REQUIRE(again.points.size() == po.points.size());
        for (size_t i = 0; i < po.points.size(); ++i) REQUIRE(again.points[i] == po.points[i]);

        const pseudo_orbit other = perturb_orbit(x0, example_id::fullshift, 100, 0.03125, 8);
        bool same = true;
        for (size_t i = 0; i < po.points.size(); ++i) same = same && other.points[i] == po.points[i];
        CHECK_FALSE(same);
    }

    SECTION("graded family with falling moduli drifts to the quiet point") {
        const sp x0({0.5, -0.5, 0.25}, {0});
        const pseudo_orbit po = perturb_orbit(x0, example_id::ex45, 60, 0.0625, 11);
        REQUIRE(po.points.size() == 60);
        CHECK(is_pseudo_orbit(po).ok);
        const example_params p = default_params(example_id::ex45);
        for (const auto& pt : po.points) {
            std::vector<double> w = pt.preperiod();
            for (int rep = 0; rep < 2; ++rep)
                for (double a : pt.period()) w.push_back(a);
            CHECK(member_word(example_id::ex45, p, w));
        }
        CHECK(sym_distance(po.points.back(), zero) < 0.25);
    }

    SECTION("rejections") {
        CHECK_THROWS_AS(perturb_orbit(sp({0.25, 0.5}, {0}), example_id::ex45, 10, 0.1, 1),
                        param_mismatch_error);
        CHECK_THROWS_AS(perturb_orbit(zero, example_id::ex43, 10, 0.1, 1), param_mismatch_error);
        CHECK_THROWS_AS(perturb_orbit(zero, example_id::fullshift, 0, 0.1, 1),
                        param_mismatch_error);
        CHECK_THROWS_AS(perturb_orbit(zero, example_id::fullshift, 10, -0.5, 1), bad_delta_error);
        CHECK_THROWS_AS(perturb_orbit(sp({0.3}, {0}), example_id::fullshift, 10, 0.1, 1),
                        param_mismatch_error);
    }
}

TEST_CASE("the letter-graft shadow reproduces exact runs and tracks noisy ones") {
    SECTION("an exact run grafts back to its own start") {
        const sp x0({1, 1, 0, 1}, {0});
        const pseudo_orbit po = perturb_orbit(x0, example_id::fullshift, 25, 0.0, 1);
        const sp z = full_shift_shadow(po);
        CHECK(z == x0);
        const shadow_check vc = verify_shadow(z, po, 0.0);
        CHECK(vc.ok);
        CHECK(vc.worst == 0.0);
    }

    SECTION("one noisy run, checked by hand") {
        const pseudo_orbit po = perturb_orbit(sp({1, 1, 1, 1}, {0}), example_id::fullshift, 3,
                                              0.0625, 5);
        const sp z = full_shift_shadow(po);
        CHECK(z.letter(0) == po.points[0].letter(0));
        CHECK(z.letter(1) == po.points[1].letter(0));
        const shadow_check vc = verify_shadow(z, po, 0.25);
        CHECK(vc.ok);
        CHECK(vc.worst == brute_worst(z, po));
    }

    SECTION("seeded batch: every run tracked within four delta") {
        const double delta = 0.00390625;  // 2^-8
        const shadow_batch_report rep = shadow_batch(100, 500, delta, 4 * delta, 3);
        CHECK(rep.trials == 100);
        CHECK(rep.passed == 100);
        REQUIRE(rep.rows.size() == 100);
        CHECK(rep.max_deviation <= 4 * delta);
        // observed margin is even tighter: letters chain far enough that the
        // constructed orbit never strays past delta itself
        CHECK(rep.max_deviation <= delta);
        for (const auto& row : rep.rows) CHECK(row.ok);
        const shadow_batch_report again = shadow_batch(100, 500, delta, 4 * delta, 3);
        for (size_t i = 0; i < 100; ++i) {
            CHECK(again.rows[i].seed == rep.rows[i].seed);
            CHECK(again.rows[i].worst == rep.rows[i].worst);
        }
    }

    SECTION("rejections") {
        pseudo_orbit po;
        po.map = map_id::shift;
        po.delta = 0.3;
        po.points = {zero, zero};
        CHECK_THROWS_AS(full_shift_shadow(po), bad_delta_error);
        po.delta = 0.25;
        po.map = map_id::ex41;
        CHECK_THROWS_AS(full_shift_shadow(po), param_mismatch_error);
        po.map = map_id::shift;
        po.points = {sp({0.5}, {0}), zero};
        CHECK_THROWS_AS(full_shift_shadow(po), param_mismatch_error);
        po.points.clear();
        CHECK_THROWS_AS(full_shift_shadow(po), param_mismatch_error);
    }
}

TEST_CASE("exhaustive sweep over short word runs meets the four-delta bound") {
    // all runs of length <= 4 whose points are 5-letter binary words with quiet
    // tails, under delta = 2^-4; links filtered by the actual metric
    const double delta = 0.0625;
    std::vector<sp> pts;
    for (int m = 0; m < 32; ++m) {
        std::vector<double> w(5);
        for (int b = 0; b < 5; ++b) w[b] = (m >> b) & 1;
        pts.emplace_back(w, std::vector<double>{0});
    }
    std::vector<std::vector<int>> edge(32);
    for (int u = 0; u < 32; ++u) {
        const sp fu = pts[u].shifted();
        for (int v = 0; v < 32; ++v)
            if (sym_distance(fu, pts[v]) <= delta) edge[u].push_back(v);
        CHECK(edge[u].size() == 4);  // three leading letters forced, two free
    }

    long long seen = 0;
    std::vector<int> path;
    std::function<void(int, int)> walk = [&](int v, int depth) {
        path.push_back(v);
        pseudo_orbit po;
        po.delta = delta;
        po.map = map_id::shift;
        for (int i : path) po.points.push_back(pts[i]);
        REQUIRE(is_pseudo_orbit(po).ok);
        const sp z = full_shift_shadow(po);
        const shadow_check vc = verify_shadow(z, po, 4 * delta);
        REQUIRE(vc.ok);
        REQUIRE(vc.worst == brute_worst(z, po));
        ++seen;
        if (depth < 4)
            for (int nx : edge[v]) walk(nx, depth + 1);
        path.pop_back();
    };
    for (int v = 0; v < 32; ++v) walk(v, 1);
    CHECK(seen == 32 * (1 + 4 + 16 + 64));
}

TEST_CASE("shadow verification is monotone in eps and pins the worst offset") {
    const pseudo_orbit po = perturb_orbit(sp({1, 0}, {0}), example_id::fullshift, 50, 0.03125, 21);
    const sp z = full_shift_shadow(po);
    const std::vector<double> grid{0.0078125, 0.015625, 0.03125, 0.0625, 0.125, 1.0};
    bool prev_ok = false;
    double worst = -1;
    for (double eps : grid) {
        const shadow_check vc = verify_shadow(z, po, eps);
        if (prev_ok) CHECK(vc.ok);  // once passing, stays passing as eps grows
        prev_ok = vc.ok;
        if (worst >= 0) CHECK(vc.worst == worst);
        worst = vc.worst;
    }
    CHECK(verify_shadow(z, po, 4 * po.delta).ok);

    pseudo_orbit quiet;
    quiet.delta = 0;
    quiet.map = map_id::shift;
    quiet.points.assign(10, zero);
    const shadow_check far = verify_shadow(sp::constant(1.0), quiet, 0.4);
    CHECK_FALSE(far.ok);
    CHECK(far.worst == 0.5);
    CHECK(verify_shadow(sp::constant(1.0), quiet, 0.5).ok);
    CHECK_THROWS_AS(verify_shadow(zero, quiet, -0.1), bad_threshold_error);
}

TEST_CASE("finite-system runs: validation, perturbation, and the min-max radius") {
    // four points on a line, successor structure a -> b -> c -> d -> d
    auto line = make_finite_system(
        {"a", "b", "c", "d"}, {{1}, {2}, {3}, {3}},
        [](int a, int b) { return std::abs(a - b) / 3.0; });

    SECTION("validation mirrors the symbolic one") {
        CHECK(is_finite_pseudo_orbit(line, {0, 1, 2, 3}, 0.0).ok);
        const orbit_check chk = is_finite_pseudo_orbit(line, {0, 1, 3, 3}, 0.2);
        CHECK_FALSE(chk.ok);
        CHECK(chk.first_bad == 1);
        CHECK(chk.worst == 1.0 / 3.0);
        CHECK(is_finite_pseudo_orbit(line, {0, 1, 3, 3}, 1.0 / 3.0).ok);
        CHECK_THROWS_AS(is_finite_pseudo_orbit(line, {}, 0.1), param_mismatch_error);
        CHECK_THROWS_AS(is_finite_pseudo_orbit(line, {0, 9}, 0.1), param_mismatch_error);
        CHECK_THROWS_AS(is_finite_pseudo_orbit(line, {0, 1}, -0.1), bad_delta_error);
    }

    SECTION("zero tolerance forces the true orbit") {
        const std::vector<int> po = perturb_finite_orbit(line, 0, 8, 0.0, 5);
        CHECK(po == std::vector<int>{0, 1, 2, 3, 3, 3, 3, 3});
        const std::vector<int> fuzzy = perturb_finite_orbit(line, 0, 10, 0.34, 5);
        CHECK(is_finite_pseudo_orbit(line, fuzzy, 0.34).ok);
        CHECK(fuzzy == perturb_finite_orbit(line, 0, 10, 0.34, 5));
        CHECK_THROWS_AS(perturb_finite_orbit(line, 9, 5, 0.1, 1), param_mismatch_error);
        CHECK_THROWS_AS(perturb_finite_orbit(line, 0, 0, 0.1, 1), param_mismatch_error);
    }

    SECTION("min-max radius on the line, by hand") {
        const finite_shadow_result res = finite_shadowing_probe(line, {0, 1, 3, 3});
        CHECK(res.best_eps == 1.0 / 3.0);
        REQUIRE(res.path.size() == 4);
        double dev = 0;
        for (size_t t = 0; t < 4; ++t) {
            if (t) {
                const auto& s = line.succ[res.path[t - 1]];
                CHECK(std::find(s.begin(), s.end(), res.path[t]) != s.end());
            }
            dev = std::max(dev, line.dist(res.path[t], (std::vector<int>{0, 1, 3, 3})[t]));
        }
        CHECK(dev == res.best_eps);
        const finite_shadow_result exact = finite_shadowing_probe(line, {1, 2, 3, 3, 3});
        CHECK(exact.best_eps == 0.0);
        CHECK(exact.path == std::vector<int>{1, 2, 3, 3, 3});
    }

    SECTION("random systems agree with brute path enumeration") {
        for (uint64_t trial = 0; trial < 20; ++trial) {
            rng64 r(mix_seed(505, trial));
            const int n = 2 + static_cast<int>(r.below(5));
            std::vector<std::string> labels(n);
            std::vector<std::vector<int>> succ(n);
            std::vector<double> pos(n);
            for (int v = 0; v < n; ++v) {
                labels[v] = "v" + std::to_string(v);
                pos[v] = static_cast<double>(v) / n;
                const size_t deg = 1 + r.below(3);
                for (size_t e = 0; e < deg; ++e) succ[v].push_back(static_cast<int>(r.below(n)));
            }
            auto fs = make_finite_system(std::move(labels), std::move(succ), [pos](int a, int b) {
                return std::abs(pos[a] - pos[b]);
            });
            const size_t L = 2 + r.below(4);
            std::vector<int> po(L);
            for (auto& v : po) v = static_cast<int>(r.below(n));

            double best = std::numeric_limits<double>::infinity();
            std::function<void(int, size_t, double)> brute = [&](int v, size_t t, double acc) {
                acc = std::max(acc, fs.dist(v, po[t]));
                if (acc >= best) return;  // max can only grow along the path
                if (t + 1 == L) {
                    best = acc;
                    return;
                }
                for (int nx : fs.succ[v]) brute(nx, t + 1, acc);
            };
            for (int v = 0; v < fs.n(); ++v) brute(v, 0, 0.0);

            const finite_shadow_result res = finite_shadowing_probe(fs, po);
            REQUIRE(res.best_eps == best);
            double dev = 0;
            for (size_t t = 0; t < L; ++t) {
                if (t) {
                    const auto& s = fs.succ[res.path[t - 1]];
                    REQUIRE(std::find(s.begin(), s.end(), res.path[t]) != s.end());
                }
                dev = std::max(dev, fs.dist(res.path[t], po[t]));
            }
            REQUIRE(dev == res.best_eps);
        }
    }
}

TEST_CASE("spike helpers build the intended letters") {
    const sp s3 = single_spike_point(3);
    const std::vector<double> want{0, 0, 0, 1, 0, 0};
    for (size_t i = 0; i < want.size(); ++i) CHECK(s3.letter(i) == want[i]);
    CHECK(single_spike_point(0) == sp({1}, {0}));

    const sp train = spike_train_point({0, 2, 3});
    const std::vector<double> tw{1, 0, 1, 1, 0, 0};
    for (size_t i = 0; i < tw.size(); ++i) CHECK(train.letter(i) == tw[i]);
    CHECK(spike_train_point({}) == zero);

    CHECK(triangular_position(0) == 0);
    CHECK(triangular_position(1) == 1);
    CHECK(triangular_position(2) == 3);
    CHECK(triangular_position(3) == 6);
    CHECK(triangular_position(13) == 91);

    const auto posfn = positions_from({4, 9});
    CHECK(posfn(0) == 4);
    CHECK(posfn(1) == 9);
    CHECK(posfn(2) > (1LL << 61));
    CHECK(posfn(3) > posfn(2));

    CHECK_THROWS_AS(single_spike_point(-1), param_mismatch_error);
    CHECK_THROWS_AS(spike_train_point({2, 2}), param_mismatch_error);
    CHECK_THROWS_AS(spike_train_point({-1, 2}), param_mismatch_error);
}

TEST_CASE("near-zero time density counts exactly what a letter scan counts") {
    SECTION("degenerate spike patterns") {
        const auto none = positions_from({});
        const tail_density_result full = near_zero_time_density(none, 1000, 0.25);
        CHECK(full.near_count == 1000);
        CHECK(full.fraction == 1.0);

        const auto everywhere = [](long long j) { return j; };
        CHECK(near_zero_time_density(everywhere, 500, 0.5).fraction == 0.0);
        CHECK(near_zero_time_density(everywhere, 500, 0.6).fraction == 1.0);
    }

    SECTION("triangular gaps against a brute letter scan") {
        const long long N = 1000;
        std::vector<bool> one(N + 4, false);
        for (long long j = 0; triangular_position(j) < N + 4; ++j)
            one[static_cast<size_t>(triangular_position(j))] = true;
        long long brute = 0;
        for (long long i = 0; i < N; ++i)
            brute += !one[static_cast<size_t>(i)] && !one[static_cast<size_t>(i + 1)];
        const tail_density_result res = near_zero_time_density(triangular_position, N, 0.25);
        CHECK(res.near_count == brute);
        CHECK(res.fraction == static_cast<double>(brute) / N);
        CHECK(res.horizon == N);
    }

    SECTION("triangular gaps sweep up toward full density") {
        const double f3 = near_zero_time_density(triangular_position, 1000, 0.25).fraction;
        const double f4 = near_zero_time_density(triangular_position, 10000, 0.25).fraction;
        const double f5 = near_zero_time_density(triangular_position, 100000, 0.25).fraction;
        CHECK(f3 >= 0.90);
        CHECK(f4 >= 0.90);
        CHECK(f5 >= 0.95);
        CHECK(f3 <= f4);
        CHECK(f4 <= f5);
        // interval-union counting keeps huge horizons cheap
        CHECK(near_zero_time_density(triangular_position, 10000000, 0.25).fraction >= 0.995);
    }

    SECTION("density is nondecreasing in eps") {
        double prev = -1;
        for (double eps : {0.03125, 0.0625, 0.125, 0.25, 0.5, 0.6}) {
            const double f = near_zero_time_density(triangular_position, 2000, eps).fraction;
            if (prev >= 0) CHECK(f >= prev);
            prev = f;
        }
    }

    SECTION("rejections") {
        CHECK_THROWS_AS(near_zero_time_density(triangular_position, 0, 0.25),
                        param_mismatch_error);
        CHECK_THROWS_AS(near_zero_time_density(triangular_position, 100, 0.0),
                        bad_threshold_error);
        const auto flat = [](long long) { return 5LL; };
        CHECK_THROWS_AS(near_zero_time_density(flat, 100, 0.25), param_mismatch_error);
    }
}

TEST_CASE("checkpoint evidence for vanishing-tolerance tracking") {
    SECTION("a point issues and passes its own exact run") {
        const sp x({1, 0, 0, 1}, {0, 1});
        const limit_orbit lo = exact_orbit_of(x);
        sp cur = x;
        for (long long i = 0; i < 10; ++i) {
            CHECK(lo.point_at(i) == cur);
            CHECK(lo.tol_at(i) == 0.0);
            cur = cur.shifted();
        }
        const limit_shadow_report rep = limit_shadow_check(x, lo, {0, 3, 7, 50});
        REQUIRE(rep.rows.size() == 4);
        for (const auto& row : rep.rows) {
            CHECK(row.deviation == 0.0);
            CHECK(row.tol == 0.0);
        }
        CHECK(rep.consistent);
    }

    SECTION("snapped spike-chasing run: block structure and jump costs") {
        const limit_orbit lo = snapped_spike_orbit({3, 10});
        CHECK(lo.point_at(0) == single_spike_point(3));
        CHECK(lo.point_at(3) == single_spike_point(0));
        CHECK(lo.point_at(4) == single_spike_point(6));
        CHECK(lo.point_at(10) == single_spike_point(0));
        CHECK(lo.point_at(11) == zero);
        CHECK(lo.tol_at(2) == std::ldexp(1.0, -7));
        CHECK(lo.tol_at(3) == std::ldexp(1.0, -7));
        CHECK(lo.tol_at(4) == 0.0);
        CHECK(lo.tol_at(11) == 0.0);
        // each link deviation stays within the tolerance in force at its step
        for (long long i = 0; i < 20; ++i)
            CHECK(sym_distance(lo.point_at(i).shifted(), lo.point_at(i + 1)) <= lo.tol_at(i));
    }

    SECTION("triangular targets: deviations sink well below the shrinking tolerance") {
        std::vector<long long> spikes;
        for (long long j = 0; triangular_position(j) <= 11000; ++j)
            spikes.push_back(triangular_position(j));
        const limit_orbit lo = snapped_spike_orbit(spikes);
        const sp x = spike_train_point(spikes);

        const limit_shadow_report rep = limit_shadow_check(x, lo, {100, 1000, 10000});
        REQUIRE(rep.rows.size() == 3);
        CHECK(rep.rows[0].deviation == std::ldexp(1.0, -21));
        CHECK(rep.rows[1].deviation == std::ldexp(1.0, -82));
        CHECK(rep.rows[2].deviation == std::ldexp(1.0, -154));
        CHECK(rep.rows[0].tol == std::ldexp(1.0, -15));
        CHECK(rep.rows[1].tol == std::ldexp(1.0, -46));
        CHECK(rep.rows[2].tol == std::ldexp(1.0, -142));
        for (const auto& row : rep.rows) CHECK(row.deviation <= row.tol);
        CHECK(rep.consistent);

        // the quiet point is no candidate: its deviation dwarfs the tolerance
        const limit_shadow_report bad = limit_shadow_check(zero, lo, {100, 1000, 10000});
        CHECK(bad.rows[2].deviation == std::ldexp(1.0, -12));
        CHECK_FALSE(bad.consistent);

        // premature truncation of the candidate's spikes is caught at the horizon
        std::vector<long long> early(spikes.begin(),
                                     spikes.begin() + 50);  // t_49 = 1225 is the last kept
        const limit_shadow_report trunc =
            limit_shadow_check(spike_train_point(early), lo, {100, 1000, 10000});
        CHECK(trunc.rows[2].deviation == std::ldexp(1.0, -12));
        CHECK_FALSE(trunc.consistent);
    }

    SECTION("rejections") {
        const limit_orbit lo = snapped_spike_orbit({3, 10});
        CHECK_THROWS_AS(limit_shadow_check(zero, lo, {}), param_mismatch_error);
        CHECK_THROWS_AS(limit_shadow_check(zero, lo, {5, 5}), param_mismatch_error);
        CHECK_THROWS_AS(limit_shadow_check(zero, lo, {-1, 5}), param_mismatch_error);
        CHECK_THROWS_AS(snapped_spike_orbit({}), param_mismatch_error);
        CHECK_THROWS_AS(snapped_spike_orbit({4, 4}), param_mismatch_error);
        CHECK_THROWS_AS(lo.point_at(-1), param_mismatch_error);
    }
}
