// command-line front end: every subcommand prints one plain-text report with a
// stable field order, so identical config + seed gives byte-identical output
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "chainchaos/example_catalog.hpp"
#include "chainchaos/shadowing.hpp"
#include "chainchaos/version.hpp"

using namespace chainchaos;

namespace {

std::string header(const std::string& resolved) {
    return std::string("# chainchaos v") + version_string + "\n# cmd: " + resolved + "\n";
}

// print to stdout and, when asked, mirror into a file under the output directory
void emit(const std::string& text, const std::string& out_name, const std::string& out_dir) {
    std::cout << text;
    if (out_name.empty()) return;
    std::filesystem::path p(out_name);
    if (p.is_relative()) p = std::filesystem::path(out_dir.empty() ? "." : out_dir) / p;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw config_error("cannot open --out target " + p.string());
    f << text;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt_double(v[i]);
    }
    return s;
}

struct model {
    example_id id = example_id::twofix;
    finite_system fs;
    bool cataloged = false;
    probe_scales probe;  // meaningful only when cataloged
};

// toy system: two fixed points a unit apart; nothing funnels, so no chaos class fires
finite_system two_fixed_points() {
    return make_finite_system({"fix0", "fix1"}, {{0}, {1}},
                              [](int a, int b) { return a == b ? 0.0 : 1.0; });
}

model build_model(const std::string& name, int window, int k_max, int grid_n) {
    model m;
    m.id = parse_example_id(name);
    if (m.id == example_id::twofix) {
        m.fs = two_fixed_points();
        return m;
    }
    example_params p = default_params(m.id);
    if (window > 0) p.window = window;
    if (k_max > 0) p.k_max = k_max;
    if (grid_n > 0) p.grid_n = grid_n;
    const example_bundle b = build_example(m.id, p);
    m.fs = b.system;
    m.cataloged = true;
    m.probe = b.entry.probe;
    return m;
}

std::string stable_component_list(const chain_structure& cs, const finite_system& fs,
                                  const std::vector<char>& stable) {
    std::string s;
    for (int c = 0; c < cs.comp_count; ++c) {
        if (!stable[c]) continue;
        if (!s.empty()) s += ';';
        s += std::to_string(c) + "(size=" + std::to_string(cs.comp_vertices[c].size()) +
             ",first=" + fs.labels[cs.comp_vertices[c].front()] + ")";
    }
    return s.empty() ? "none" : s;
}

std::string chains_cell(const finite_system& fs, double delta, double eps) {
    const auto cs = build_chain_structure(fs, delta);
    const auto stable = stable_components(cs, fs, eps);
    const auto reach = verify_every_point_reaches_stable(cs, stable);
    std::string ids, sizes, periods;
    for (int c : cs.recurrent_comps) {
        if (!ids.empty()) {
            ids += ',';
            sizes += ',';
            periods += ',';
        }
        ids += std::to_string(c);
        sizes += std::to_string(cs.comp_vertices[c].size());
        periods += std::to_string(component_period(cs, c));
    }
    std::string b = "## scan delta=" + fmt_double(delta) + " eps=" + fmt_double(eps) + "\n";
    b += "n=" + std::to_string(fs.n()) + "\n";
    b += "components=" + std::to_string(cs.comp_count) + "\n";
    b += "recurrent_components=" + std::to_string(cs.recurrent_comps.size()) + "\n";
    b += "recurrent_ids=" + (ids.empty() ? "none" : ids) + "\n";
    b += "recurrent_sizes=" + (sizes.empty() ? "none" : sizes) + "\n";
    b += "recurrent_periods=" + (periods.empty() ? "none" : periods) + "\n";
    b += "chain_transitive=" + std::to_string(chain_transitive(cs) ? 1 : 0) + "\n";
    b += "chain_mixing=" + std::to_string(chain_mixing(cs) ? 1 : 0) + "\n";
    b += "stable_count=" + std::to_string(reach.stable_count) + "\n";
    b += "stable_components=" + stable_component_list(cs, fs, stable) + "\n";
    b += "all_reach_stable=" + std::to_string(reach.all_reach ? 1 : 0) + "\n";
    if (!reach.all_reach && !reach.failing.empty())
        b += "first_unfunneled=" + fs.labels[reach.failing.front()] + "\n";
    b += "min_intercomponent_distance=" + fmt_double(min_intercomponent_distance(fs, cs)) + "\n";
    return b;
}

std::string verdict_cell(const finite_system& fs, double delta, double eps) {
    const verdict v = chaos_verdict(fs, delta, eps);
    std::string b = "## verdict delta=" + fmt_double(delta) + " eps=" + fmt_double(eps) + "\n";
    b += "e_thr=" + fmt_double(v.e_thr) + "\n";
    b += "chain_proximal=" + std::to_string(v.chain_proximal ? 1 : 0) + "\n";
    b += "stable_count=" + std::to_string(v.stable_count) + "\n";
    b += "unique_stable=" + std::to_string(v.unique_stable ? 1 : 0) + "\n";
    b += "stable_singleton=" + std::to_string(v.stable_singleton ? 1 : 0) + "\n";
    b += "stable_mixing=" + std::to_string(v.stable_mixing ? 1 : 0) + "\n";
    b += "sensitivity_e=" + fmt_double(v.sensitivity_e) + "\n";
    b += "property_s_e=" + fmt_double(v.property_s_e) + "\n";
    b += "distal_pair_found=" + std::to_string(v.distal_pair_found ? 1 : 0) + "\n";
    b += "distal_x=" + (v.distal_pair_found ? fs.labels[v.distal_x] : std::string("-")) + "\n";
    b += "distal_y=" + (v.distal_pair_found ? fs.labels[v.distal_y] : std::string("-")) + "\n";
    b += "distal_floor=" + fmt_double(v.distal_floor) + "\n";
    b += "guc_route_sensitivity=" + std::to_string(v.guc_route_sensitivity ? 1 : 0) + "\n";
    b += "guc_route_structure=" + std::to_string(v.guc_route_structure ? 1 : 0) + "\n";
    b += "guc_agree=" + std::to_string(v.guc_agree ? 1 : 0) + "\n";
    b += "gudc1_route_separation=" + std::to_string(v.gudc1_route_separation ? 1 : 0) + "\n";
    b += "gudc1_route_distal=" + std::to_string(v.gudc1_route_distal ? 1 : 0) + "\n";
    b += "gudc1_agree=" + std::to_string(v.gudc1_agree ? 1 : 0) + "\n";
    b += "summary=" + v.summary + "\n";
    return b;
}

std::string shadow_batch_body(const shadow_batch_report& rep) {
    std::string b;
    b += "trials=" + std::to_string(rep.trials) + "\n";
    b += "length=" + std::to_string(rep.length) + "\n";
    b += "delta=" + fmt_double(rep.delta) + "\n";
    b += "eps=" + fmt_double(rep.eps) + "\n";
    b += "passed=" + std::to_string(rep.passed) + "\n";
    b += "max_deviation=" + fmt_double(rep.max_deviation) + "\n";
    b += "trial\tseed\tok\tworst\n";
    for (size_t i = 0; i < rep.rows.size(); ++i)
        b += std::to_string(i) + "\t" + std::to_string(rep.rows[i].seed) + "\t" +
             std::to_string(rep.rows[i].ok ? 1 : 0) + "\t" + fmt_double(rep.rows[i].worst) + "\n";
    return b;
}

// density run at an example's stock orbit settings with the given seed
density_report stock_density(const catalog_entry& e, uint64_t seed) {
    return sample_pair_density(e.id, default_params(e.id), e.orbit.sampler, e.orbit.pairs,
                               e.orbit.horizon, e.orbit.delta, default_thresholds(), e.orbit.eta,
                               seed, e.orbit.word_len, e.orbit.burn_in);
}

struct expectation {
    std::string what;
    bool pass = false;
};

std::string expectation_lines(const std::vector<expectation>& checks) {
    std::string b;
    for (const auto& c : checks)
        b += "expect " + c.what + " pass=" + std::to_string(c.pass ? 1 : 0) + "\n";
    return b;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chain-structure, scrambled-pair, and shadowing analyses on "
                 "discretized symbolic systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("chainchaos v") + version_string);
    app.set_config("--config", "", "key = value file; [subcommand] sections select the command");

    std::string out_name, out_dir = ".";
    auto add_output_opts = [&](CLI::App* sub) {
        sub->add_option("--out", out_name, "also write the report to this file");
        sub->add_option("--out-dir", out_dir, "directory for --out (default: env or .)")
            ->envname("CHAINCHAOS_OUT");
    };

    // ---- catalog ----
    auto* cmd_catalog = app.add_subcommand("catalog", "list the bundled example systems");
    add_output_opts(cmd_catalog);

    // ---- chains ----
    auto* cmd_chains =
        app.add_subcommand("chains", "chain components, stability, mixing over a scale scan");
    std::string ch_example;
    int ch_window = -1, ch_kmax = -1, ch_gridn = -1;
    std::vector<double> ch_delta, ch_eps;
    cmd_chains->add_option("--example", ch_example, "system id (see catalog; twofix = toy)")
        ->required();
    cmd_chains->add_option("--window", ch_window, "word length of the discretization");
    cmd_chains->add_option("--k-max", ch_kmax, "ladder depth for graded families");
    cmd_chains->add_option("--grid-n", ch_gridn, "fiber grid size (skew product)");
    cmd_chains->add_option("--delta", ch_delta, "chain tolerance(s)")->delimiter(',')->required();
    cmd_chains->add_option("--eps", ch_eps, "stability radius(es); default: stock probe scale")
        ->delimiter(',');
    add_output_opts(cmd_chains);

    // ---- verdict ----
    auto* cmd_verdict =
        app.add_subcommand("verdict", "two-route chaos-class prediction at probe scales");
    std::string vd_example;
    int vd_window = -1, vd_kmax = -1, vd_gridn = -1;
    std::vector<double> vd_delta, vd_eps;
    cmd_verdict->add_option("--example", vd_example, "system id (see catalog; twofix = toy)")
        ->required();
    cmd_verdict->add_option("--window", vd_window, "word length of the discretization");
    cmd_verdict->add_option("--k-max", vd_kmax, "ladder depth for graded families");
    cmd_verdict->add_option("--grid-n", vd_gridn, "fiber grid size (skew product)");
    cmd_verdict->add_option("--delta", vd_delta, "chain tolerance(s); default: stock probe scale")
        ->delimiter(',');
    cmd_verdict->add_option("--eps", vd_eps, "stability radius(es); default: stock probe scale")
        ->delimiter(',');
    add_output_opts(cmd_verdict);

    // ---- orbit ----
    auto* cmd_orbit =
        app.add_subcommand("orbit", "sampled pair statistics on exact symbolic orbits");
    std::string ob_example, ob_sampler;
    long long ob_pairs = -1, ob_N = -1, ob_burnin = -2;
    int ob_wordlen = -1;
    double ob_delta = -1, ob_eta = -1;
    uint64_t ob_seed = 0;
    std::vector<double> ob_thresholds;
    cmd_orbit->add_option("--example", ob_example, "system id (see catalog)")->required();
    cmd_orbit->add_option("--pairs", ob_pairs, "number of sampled pairs");
    cmd_orbit->add_option("--N", ob_N, "orbit horizon");
    cmd_orbit->add_option("--seed", ob_seed, "sampling seed")->required();
    cmd_orbit->add_option("--delta", ob_delta, "separation scale");
    cmd_orbit->add_option("--eta", ob_eta, "density margin");
    cmd_orbit->add_option("--sampler", ob_sampler, "uniform | zk | diagonal");
    cmd_orbit->add_option("--word-len", ob_wordlen, "sampled word length");
    cmd_orbit->add_option("--burn-in", ob_burnin, "window start; -1 = horizon/50");
    cmd_orbit->add_option("--thresholds", ob_thresholds, "ascending closeness thresholds")
        ->delimiter(',');
    add_output_opts(cmd_orbit);

    // ---- shadow ----
    auto* cmd_shadow =
        app.add_subcommand("shadow", "pseudo-orbit construction, tracking, and tail densities");
    std::string sh_map = "fullshift", sh_gaps = "triangular", sh_save_po, sh_load_po;
    long long sh_len = 500, sh_trials = 100, sh_N = 100000;
    double sh_delta = -1, sh_eps = -1;
    uint64_t sh_seed = 0;
    bool sh_near_zero = false;
    cmd_shadow->add_option("--map", sh_map, "system to drill (fullshift)");
    cmd_shadow->add_option("--delta", sh_delta, "per-step tolerance");
    cmd_shadow->add_option("--len", sh_len, "pseudo-orbit length");
    cmd_shadow->add_option("--trials", sh_trials, "number of seeded trials");
    cmd_shadow->add_option("--seed", sh_seed, "trial seed");
    cmd_shadow->add_option("--eps", sh_eps, "tracking radius; default 4*delta");
    cmd_shadow->add_flag("--near-zero-density", sh_near_zero,
                         "fraction of times the tail sits near the quiet point");
    cmd_shadow->add_option("--gaps", sh_gaps, "spike-gap schedule (triangular)");
    cmd_shadow->add_option("--N", sh_N, "horizon for --near-zero-density");
    cmd_shadow->add_option("--save-po", sh_save_po, "write trial 0's pseudo-orbit to this file");
    cmd_shadow->add_option("--load-po", sh_load_po, "verify a saved pseudo-orbit instead");
    add_output_opts(cmd_shadow);

    // ---- all ----
    auto* cmd_all = app.add_subcommand(
        "all", "golden expectations plus stock seeded runs; exit 1 on any mismatch");
    std::string al_example;
    cmd_all->add_option("--example", al_example, "restrict to one system id");
    add_output_opts(cmd_all);

    try {
        app.parse(argc, argv);

        if (*cmd_catalog) {
            emit(header("catalog") + catalog_text(), out_name, out_dir);
            return 0;
        }

        if (*cmd_chains) {
            const model m = build_model(ch_example, ch_window, ch_kmax, ch_gridn);
            if (ch_eps.empty()) ch_eps.push_back(m.cataloged ? m.probe.eps : 0.25);
            std::sort(ch_delta.begin(), ch_delta.end());
            std::sort(ch_eps.begin(), ch_eps.end());
            std::string text = header("chains example=" + ch_example +
                                      " n=" + std::to_string(m.fs.n()) +
                                      " delta=" + join_doubles(ch_delta) +
                                      " eps=" + join_doubles(ch_eps));
            for (double d : ch_delta)
                for (double e : ch_eps) text += chains_cell(m.fs, d, e);
            emit(text, out_name, out_dir);
            return 0;
        }

        if (*cmd_verdict) {
            const model m = build_model(vd_example, vd_window, vd_kmax, vd_gridn);
            if (vd_delta.empty()) vd_delta.push_back(m.cataloged ? m.probe.delta : 0.0);
            if (vd_eps.empty()) vd_eps.push_back(m.cataloged ? m.probe.eps : 0.25);
            std::sort(vd_delta.begin(), vd_delta.end());
            std::sort(vd_eps.begin(), vd_eps.end());
            std::string text = header("verdict example=" + vd_example +
                                      " n=" + std::to_string(m.fs.n()) +
                                      " delta=" + join_doubles(vd_delta) +
                                      " eps=" + join_doubles(vd_eps));
            for (double d : vd_delta)
                for (double e : vd_eps) text += verdict_cell(m.fs, d, e);
            emit(text, out_name, out_dir);
            return 0;
        }

        if (*cmd_orbit) {
            const example_id id = parse_example_id(ob_example);
            const catalog_entry& e = catalog_entry_for(id);  // twofix rejected here
            if (ob_pairs < 0) ob_pairs = e.orbit.pairs;
            if (ob_N < 0) ob_N = e.orbit.horizon;
            if (ob_delta < 0) ob_delta = e.orbit.delta;
            if (ob_eta < 0) ob_eta = e.orbit.eta;
            if (ob_wordlen < 0) ob_wordlen = e.orbit.word_len;
            if (ob_burnin < -1) ob_burnin = e.orbit.burn_in;
            if (ob_thresholds.empty()) ob_thresholds = default_thresholds();
            const pair_sampler sampler =
                ob_sampler.empty() ? e.orbit.sampler : parse_pair_sampler(ob_sampler);
            const auto rep =
                sample_pair_density(id, default_params(id), sampler, ob_pairs, ob_N, ob_delta,
                                    ob_thresholds, ob_eta, ob_seed, ob_wordlen, ob_burnin);
            std::string text = header(
                "orbit example=" + ob_example + " sampler=" + std::string(to_string(sampler)) +
                " pairs=" + std::to_string(ob_pairs) + " N=" + std::to_string(ob_N) +
                " delta=" + fmt_double(ob_delta) + " eta=" + fmt_double(ob_eta) +
                " word_len=" + std::to_string(ob_wordlen) +
                " burn_in=" + std::to_string(ob_burnin) +
                " thresholds=" + join_doubles(ob_thresholds) + " seed=" + std::to_string(ob_seed));
            text += density_table(rep);
            emit(text, out_name, out_dir);
            return 0;
        }

        if (*cmd_shadow) {
            if (sh_near_zero) {
                if (sh_gaps != "triangular")
                    throw config_error("--gaps: unknown schedule '" + sh_gaps + "'");
                if (sh_eps < 0) sh_eps = 0.25;
                const auto res = near_zero_time_density(triangular_position, sh_N, sh_eps);
                std::string text =
                    header("shadow near_zero_density=1 gaps=" + sh_gaps +
                           " N=" + std::to_string(sh_N) + " eps=" + fmt_double(sh_eps));
                text += "gaps=" + sh_gaps + "\n";
                text += "N=" + std::to_string(res.horizon) + "\n";
                text += "eps=" + fmt_double(res.eps) + "\n";
                text += "near_count=" + std::to_string(res.near_count) + "\n";
                text += "fraction=" + fmt_double(res.fraction) + "\n";
                emit(text, out_name, out_dir);
                return 0;
            }
            if (!sh_load_po.empty()) {
                std::ifstream f(sh_load_po, std::ios::binary);
                if (!f) throw config_error("--load-po: cannot open " + sh_load_po);
                std::string blob((std::istreambuf_iterator<char>(f)),
                                 std::istreambuf_iterator<char>());
                const pseudo_orbit po = parse_pseudo_orbit(blob);
                if (sh_eps < 0) sh_eps = 4 * po.delta;
                const auto link = is_pseudo_orbit(po);
                const symbolic_point z = full_shift_shadow(po);
                const auto vc = verify_shadow(z, po, sh_eps);
                std::string text = header("shadow load_po=" + sh_load_po +
                                          " eps=" + fmt_double(sh_eps));
                text += "points=" + std::to_string(po.points.size()) + "\n";
                text += "po_delta=" + fmt_double(po.delta) + "\n";
                text += "po_map=" + std::string(to_string(po.map)) + "\n";
                text += "links_ok=" + std::to_string(link.ok ? 1 : 0) + "\n";
                text += "worst_link=" + fmt_double(link.worst) + "\n";
                text += "shadow_ok=" + std::to_string(vc.ok ? 1 : 0) + "\n";
                text += "worst_deviation=" + fmt_double(vc.worst) + "\n";
                text += "eps=" + fmt_double(sh_eps) + "\n";
                emit(text, out_name, out_dir);
                return 0;
            }
            if (sh_map != "fullshift") throw unknown_map_error("--map: " + sh_map);
            if (sh_delta < 0) throw config_error("missing --delta");
            if (!cmd_shadow->count("--seed")) throw config_error("missing --seed");
            if (sh_eps < 0) sh_eps = 4 * sh_delta;
            const auto rep = shadow_batch(sh_trials, sh_len, sh_delta, sh_eps, sh_seed);
            std::string text = header(
                "shadow map=" + sh_map + " trials=" + std::to_string(sh_trials) +
                " len=" + std::to_string(sh_len) + " delta=" + fmt_double(sh_delta) +
                " eps=" + fmt_double(sh_eps) + " seed=" + std::to_string(sh_seed));
            text += shadow_batch_body(rep);
            if (!sh_save_po.empty()) {
                // regenerate trial 0 exactly as the batch drill does
                rng64 r(mix_seed(sh_seed, 0));
                std::vector<double> w;
                detail::append_admissible_letters(example_id::fullshift,
                                                  default_params(example_id::fullshift), 1.0, 8, r,
                                                  w);
                const symbolic_point x0(std::move(w), {0.0});
                const pseudo_orbit po =
                    perturb_orbit(x0, example_id::fullshift, sh_len, sh_delta, r.next());
                std::filesystem::path p(sh_save_po);
                if (p.is_relative())
                    p = std::filesystem::path(out_dir.empty() ? "." : out_dir) / p;
                std::ofstream f(p, std::ios::binary);
                if (!f) throw config_error("--save-po: cannot open " + p.string());
                f << pseudo_orbit_to_text(po);
                text += "saved_po=" + sh_save_po + "\n";
            }
            emit(text, out_name, out_dir);
            return 0;
        }

        if (*cmd_all) {
            std::vector<const catalog_entry*> picks;
            for (const auto& e : example_catalog())
                if (al_example.empty() || al_example == to_string(e.id)) picks.push_back(&e);
            if (picks.empty()) throw unknown_example_error("--example: " + al_example);
            std::string ids;
            for (const auto* e : picks) {
                if (!ids.empty()) ids += ',';
                ids += to_string(e->id);
            }
            std::string text =
                header("all examples=" + ids + " orbit_seed=1 shadow_seed=3");
            std::vector<expectation> checks;
            bool include_fullshift = false;
            for (const auto* e : picks) {
                include_fullshift = include_fullshift || e->id == example_id::fullshift;
                const auto rep = evaluate_golden_facts(build_example(e->id));
                text += golden_report_text(rep);
                checks.push_back({"golden " + to_string(e->id), rep.all_pass});
                text += expectation_lines({checks.back()});

                const auto den = stock_density(*e, 1);
                text += density_table(den);
                std::vector<expectation> dchecks;
                dchecks.push_back({"density " + to_string(e->id) + " fractions_nested",
                                   den.fractions_nested});
                dchecks.push_back({"density " + to_string(e->id) + " rows_consistent",
                                   den.all_rows_consistent});
                if (e->id == example_id::ex41)
                    dchecks.push_back({"density ex41 dc2<=0.05", den.frac_dc2 <= 0.05});
                if (e->id == example_id::ex43)
                    dchecks.push_back({"density ex43 dc1>=0.25", den.frac_dc1 >= 0.25});
                if (e->id == example_id::ex45)
                    dchecks.push_back({"density ex45 dc1>=0.25", den.frac_dc1 >= 0.25});
                text += expectation_lines(dchecks);
                for (const auto& c : dchecks) checks.push_back(c);
            }
            if (include_fullshift) {
                const auto rep = shadow_batch(100, 500, 0.00390625, 4 * 0.00390625, 3);
                text += "## shadow map=fullshift trials=100 len=500 delta=0.00390625 "
                        "eps=0.015625 seed=3\n";
                text += shadow_batch_body(rep);
                checks.push_back({"shadow 100/100", rep.passed == rep.trials});
                text += expectation_lines({checks.back()});

                const auto den = near_zero_time_density(triangular_position, 100000, 0.25);
                text += "## near_zero_density gaps=triangular N=100000 eps=0.25\n";
                text += "near_count=" + std::to_string(den.near_count) + "\n";
                text += "fraction=" + fmt_double(den.fraction) + "\n";
                checks.push_back({"near-zero fraction>=0.95", den.fraction >= 0.95});
                text += expectation_lines({checks.back()});
            }
            bool all_pass = true;
            for (const auto& c : checks) all_pass = all_pass && c.pass;
            text += "harness_pass=" + std::to_string(all_pass ? 1 : 0) + "\n";
            emit(text, out_name, out_dir);
            return all_pass ? 0 : 1;
        }
    } catch (const CLI::ParseError& e) {
        const int code = e.get_exit_code();
        if (code == 0) {  // --help / --version
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
