#include "pwmap/csv.hpp"
#include "pwmap/experiment.hpp"
#include "pwmap/map_spec.hpp"
#include "pwmap/measure.hpp"
#include "pwmap/orbit.hpp"
#include "pwmap/periodic.hpp"
#include "pwmap/sampling.hpp"
#include "pwmap/symbolic.hpp"
#include "pwmap/tower.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace pwmap;

struct common_opts {
    std::string map_path;
    std::string backend; // empty = take the spec file's choice
    std::string out;
};

void add_common(CLI::App* cmd, common_opts& c) {
    cmd->add_option("--map", c.map_path, "map spec file")->required();
    cmd->add_option("--backend", c.backend, "numeric backend: float or rational")
        ->check(CLI::IsMember({"float", "rational"}));
    cmd->add_option("--out", c.out, "output CSV path (default: stdout)");
}

backend_kind resolve_backend(const map_document& doc, const std::string& flag) {
    if (flag == "float") return backend_kind::float_backend;
    if (flag == "rational") return backend_kind::rational_backend;
    return doc.backend;
}

void write_output(const std::string& out_path, const std::string& body) {
    if (out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw map_error("cannot open output file '" + out_path + "'");
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw map_error("write failed for '" + out_path + "'");
}

std::string word_to_string(const itinerary& w) {
    bool small = true;
    for (int s : w)
        if (s > 9) small = false;
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!small && i) out += '-';
        out += std::to_string(w[i]);
    }
    return out;
}

// x0 is parsed exactly (fractions allowed) so the rational backend sees the
// literal value from the command line, not a double round-trip.
rational parse_point(const std::string& text) { return parse_spec_number(text, 0); }

template <class R>
std::string run_orbit(const piecewise_monotonic_map<R>& map, const R& x0, std::size_t length) {
    const orbit_trace<R> tr = iterate(map, x0, length);
    std::string body = csv::join_row({"step", "x", "symbol"});
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
        std::string sym = i < tr.word.size() ? std::to_string(tr.word[i]) : std::string();
        body += csv::join_row({std::to_string(i), csv::format_double(to_double(tr.points[i])), sym});
    }
    return body;
}

template <class R>
std::string run_cylinders(const piecewise_monotonic_map<R>& map, std::size_t depth,
                          const std::optional<R>& point) {
    std::string body;
    if (point) {
        body = csv::join_row({"k", "word", "lo", "hi", "diameter"});
        for (std::size_t k = 0; k <= depth; ++k) {
            const cylinder<R> c = cylinder_of_point(map, *point, k);
            body += csv::join_row({std::to_string(k), word_to_string(c.word),
                                   csv::format_double(to_double(c.interval.lo)),
                                   csv::format_double(to_double(c.interval.hi)),
                                   csv::format_double(to_double(c.interval.length()))});
        }
        return body;
    }
    body = csv::join_row({"word", "lo", "hi", "diameter"});
    for (const cylinder<R>& c : enumerate_cylinders(map, depth)) {
        body += csv::join_row({word_to_string(c.word),
                               csv::format_double(to_double(c.interval.lo)),
                               csv::format_double(to_double(c.interval.hi)),
                               csv::format_double(to_double(c.interval.length()))});
    }
    return body;
}

template <class R>
std::string run_tower(const piecewise_monotonic_map<R>& map, const R& x0, std::size_t l_max,
                      double margin) {
    std::string body =
        csv::join_row({"l", "symbol", "c_lo", "c_hi", "d_lo", "d_hi", "cut", "covering"});
    if (l_max == 0) return body;
    tower_tracker<R> s = init_tracker(map, x0);
    for (std::size_t l = 1; l <= l_max; ++l) {
        const bool cov = strictly_covers(s.image, s.pulled, R(margin));
        const bool cut = !s.cut_flags.empty() && s.cut_flags.back();
        body += csv::join_row({std::to_string(l), std::to_string(s.word[l - 1]),
                               csv::format_double(to_double(s.pulled.lo)),
                               csv::format_double(to_double(s.pulled.hi)),
                               csv::format_double(to_double(s.image.lo)),
                               csv::format_double(to_double(s.image.hi)),
                               cut ? "1" : "0", cov ? "1" : "0"});
        if (l == l_max) break;
        s = advance(map, s);
        if (s.dead()) break;
    }
    return body;
}

template <class R>
std::string run_periodic(const piecewise_monotonic_map<R>& map, const R& x0, std::size_t l_max,
                         double margin, double tol) {
    const covering_scan<R> scan = covering_times(map, x0, l_max, R(margin));
    std::string body = csv::join_row({"l", "p", "minimal_period", "residual", "word"});
    for (const covering_time<R>& ct : scan.times) {
        try {
            const cylinder<R> cyl{ct.word, ct.pulled};
            const periodic_orbit<R> po = find_periodic_point(map, cyl, tol, margin);
            body += csv::join_row({std::to_string(ct.l), csv::format_double(to_double(po.point)),
                                   std::to_string(po.minimal_period),
                                   csv::format_double(to_double(po.residual)),
                                   word_to_string(po.word)});
        } catch (const map_error& e) {
            std::cerr << "note: extraction failed at l=" << ct.l << ": " << e.what() << "\n";
        }
    }
    return body;
}

std::string run_entropy(const piecewise_monotonic_map<double>& map, std::uint64_t seed,
                        std::size_t length, std::size_t block_n, double dither) {
    splitmix64 rng(seed);
    const sampled_orbit sample = sample_orbit(map, rng, length, dither);
    std::string body = csv::join_row({"metric", "n", "value"});
    for (std::size_t n = 1; n <= block_n; ++n) {
        const entropy_estimate e = block_entropy(sample.trace.word, n);
        body += csv::join_row({"block_entropy", std::to_string(n),
                               csv::format_double(e.block_entropy_nats)});
        body += csv::join_row({"rate", std::to_string(n), csv::format_double(e.rate)});
        if (e.undersampled)
            std::cerr << "note: block length " << n << " is undersampled for this stream\n";
    }
    for (std::size_t n = 1; n < block_n; ++n)
        body += csv::join_row({"conditional_information", std::to_string(n),
                               csv::format_double(conditional_information(sample.trace.word, n))});
    try {
        body += csv::join_row(
            {"lyapunov", "", csv::format_double(lyapunov_entropy(map, sample.trace))});
    } catch (const non_affine_error&) {
        std::cerr << "note: Lyapunov estimator skipped (map has non-affine branches)\n";
    }
    return body;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"computational ergodic theory of piecewise monotonic interval maps"};
    app.require_subcommand(1);

    common_opts orbit_c, cyl_c, tower_c, per_c, approx_c, ent_c;
    std::string orbit_x0, tower_x0, per_x0, cyl_point;
    std::size_t orbit_len = 100;
    std::size_t cyl_depth = 4;
    std::size_t tower_lmax = 16, per_lmax = 16;
    double tower_margin = 0, per_margin = 0, per_tol = 1e-9;

    auto* orbit_cmd = app.add_subcommand("orbit", "iterate a point and dump the itinerary");
    add_common(orbit_cmd, orbit_c);
    orbit_cmd->add_option("--x0", orbit_x0, "starting point (exact, fractions allowed)")
        ->required();
    orbit_cmd->add_option("--length", orbit_len, "iteration count");

    auto* cyl_cmd = app.add_subcommand("cylinders", "enumerate cylinders or refine around a point");
    add_common(cyl_cmd, cyl_c);
    cyl_cmd->add_option("--depth", cyl_depth, "word length");
    cyl_cmd->add_option("--point", cyl_point, "report the cylinders containing this point");

    auto* tower_cmd = app.add_subcommand("tower", "trace the (C_l, D_l) tracker");
    add_common(tower_cmd, tower_c);
    tower_cmd->add_option("--x0", tower_x0, "base point")->required();
    tower_cmd->add_option("--l-max", tower_lmax, "scan depth");
    tower_cmd->add_option("--margin", tower_margin, "covering margin");

    auto* per_cmd = app.add_subcommand("periodic", "extract periodic points at covering times");
    add_common(per_cmd, per_c);
    per_cmd->add_option("--x0", per_x0, "base point")->required();
    per_cmd->add_option("--l-max", per_lmax, "scan depth");
    per_cmd->add_option("--margin", per_margin, "covering margin");
    per_cmd->add_option("--tol", per_tol, "residual tolerance");

    experiment_config cfg;
    auto* approx_cmd = app.add_subcommand("approximate", "periodic approximation pipeline");
    add_common(approx_cmd, approx_c);
    approx_cmd->add_option("--seed", cfg.seeds, "orbit seed(s), repeatable");
    approx_cmd->add_option("--length", cfg.orbit_length, "target orbit length");
    approx_cmd->add_option("--burn-in", cfg.burn_in, "discarded prefix");
    approx_cmd->add_option("--l-max", cfg.l_max, "covering scan depth");
    approx_cmd->add_option("--margin", cfg.margin, "covering margin");
    approx_cmd->add_option("--depth-m", cfg.depth_m, "cylinder depth for discrepancy");
    approx_cmd->add_option("--bases", cfg.bases, "base points per seed (extra ones by recurrence)");
    approx_cmd->add_option("--workers", cfg.workers, "concurrent seeds");
    approx_cmd->add_option("--dither", cfg.dither, "sampler dither amplitude");
    approx_cmd->add_option("--tol", cfg.tol, "extraction residual tolerance");

    std::uint64_t ent_seed = 1;
    std::size_t ent_len = 1'000'000, ent_block = 12;
    double ent_dither = 1e-13;
    auto* ent_cmd = app.add_subcommand("entropy", "block/conditional/Lyapunov entropy report");
    add_common(ent_cmd, ent_c);
    ent_cmd->add_option("--seed", ent_seed, "orbit seed");
    ent_cmd->add_option("--length", ent_len, "orbit length");
    ent_cmd->add_option("--block-n", ent_block, "largest block length");
    ent_cmd->add_option("--dither", ent_dither, "sampler dither amplitude");

    CLI11_PARSE(app, argc, argv);

    try {
        if (orbit_cmd->parsed()) {
            const map_document doc = load_map_file(orbit_c.map_path);
            const rational x0 = parse_point(orbit_x0);
            if (resolve_backend(doc, orbit_c.backend) == backend_kind::rational_backend)
                write_output(orbit_c.out, run_orbit(doc.build_rational(), x0, orbit_len));
            else
                write_output(orbit_c.out,
                             run_orbit(doc.build_double(), to_double(x0), orbit_len));
        } else if (cyl_cmd->parsed()) {
            const map_document doc = load_map_file(cyl_c.map_path);
            if (resolve_backend(doc, cyl_c.backend) == backend_kind::rational_backend) {
                std::optional<rational> pt;
                if (!cyl_point.empty()) pt = parse_point(cyl_point);
                write_output(cyl_c.out, run_cylinders(doc.build_rational(), cyl_depth, pt));
            } else {
                std::optional<double> pt;
                if (!cyl_point.empty()) pt = to_double(parse_point(cyl_point));
                write_output(cyl_c.out, run_cylinders(doc.build_double(), cyl_depth, pt));
            }
        } else if (tower_cmd->parsed()) {
            const map_document doc = load_map_file(tower_c.map_path);
            const rational x0 = parse_point(tower_x0);
            if (resolve_backend(doc, tower_c.backend) == backend_kind::rational_backend)
                write_output(tower_c.out,
                             run_tower(doc.build_rational(), x0, tower_lmax, tower_margin));
            else
                write_output(tower_c.out, run_tower(doc.build_double(), to_double(x0),
                                                    tower_lmax, tower_margin));
        } else if (per_cmd->parsed()) {
            const map_document doc = load_map_file(per_c.map_path);
            const rational x0 = parse_point(per_x0);
            if (resolve_backend(doc, per_c.backend) == backend_kind::rational_backend)
                write_output(per_c.out, run_periodic(doc.build_rational(), x0, per_lmax,
                                                     per_margin, per_tol));
            else
                write_output(per_c.out, run_periodic(doc.build_double(), to_double(x0), per_lmax,
                                                     per_margin, per_tol));
        } else if (approx_cmd->parsed()) {
            cfg.spec = load_map_file(approx_c.map_path);
            cfg.backend = resolve_backend(cfg.spec, approx_c.backend);
            if (cfg.seeds.empty()) cfg.seeds.push_back(1);
            const auto reports = run_approximation_experiment(cfg);
            for (const auto& rep : reports) {
                if (rep.entropy_warning)
                    std::cerr << "warning: seed " << rep.seed << " target entropy rate "
                              << rep.entropy_rate
                              << " <= 0.1; positive-entropy hypothesis doubtful\n";
                if (rep.no_covering_times)
                    std::cerr << "warning: seed " << rep.seed
                              << " produced no covering times up to l_max; "
                                 "try a longer scan or another seed\n";
            }
            write_output(approx_c.out, render_report(reports));
        } else if (ent_cmd->parsed()) {
            const map_document doc = load_map_file(ent_c.map_path);
            write_output(ent_c.out,
                         run_entropy(doc.build_double(), ent_seed, ent_len, ent_block, ent_dither));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
