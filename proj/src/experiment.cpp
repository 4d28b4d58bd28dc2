#include "pwmap/experiment.hpp"

#include "pwmap/csv.hpp"
#include "pwmap/measure.hpp"
#include "pwmap/periodic.hpp"
#include "pwmap/sampling.hpp"
#include "pwmap/tower.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <thread>
#include <type_traits>
#include <utility>

namespace pwmap {

namespace {

// Prime (2^61 + 15) with a huge multiplicative order of 2 and coprime to the
// small factors appearing in the zoo maps' slopes, so exact orbits of u/q
// never land on a critical point and never collapse to short dyadic cycles.
constexpr std::uint64_t rational_base_denominator = 2305843009213693967ULL;

rational to_rational_base(double y) {
    const double qd = static_cast<double>(rational_base_denominator);
    long long u = std::llround(y * qd);
    if (u < 1) u = 1;
    if (static_cast<std::uint64_t>(u) >= rational_base_denominator)
        u = static_cast<long long>(rational_base_denominator) - 1;
    return rational(bigint(u), bigint(rational_base_denominator));
}

// Post-burn-in indices whose orbit point returns closest to itself within
// the scan horizon; near-recurrent points tend to produce early covering
// times. Chosen points are kept at least 1e-3 apart so the extra bases do
// not all probe the same neighborhood.
std::vector<double> recurrence_bases(const std::vector<double>& pts, std::size_t burn_in,
                                     std::size_t horizon, std::size_t count,
                                     double primary_base) {
    std::vector<double> chosen;
    if (count == 0 || horizon == 0) return chosen;
    if (pts.size() < burn_in + horizon + 2) return chosen;
    const std::size_t first = burn_in;
    const std::size_t last = pts.size() - 1 - horizon; // inclusive
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(last - first + 1);
    for (std::size_t i = first; i <= last; ++i) {
        double s = 2.0;
        for (std::size_t k = 1; k <= horizon; ++k)
            s = std::min(s, std::fabs(pts[i + k] - pts[i]));
        scored.emplace_back(s, i);
    }
    std::sort(scored.begin(), scored.end());
    constexpr double separation = 1e-3;
    for (const auto& [score, i] : scored) {
        const double x = pts[i];
        bool close = std::fabs(x - primary_base) < separation;
        for (double c : chosen)
            if (std::fabs(x - c) < separation) { close = true; break; }
        if (close) continue;
        chosen.push_back(x);
        if (chosen.size() >= count) break;
    }
    return chosen;
}

struct candidate {
    approximation_row row;
    discrete_measure<double> mu;
};

seed_report run_seed(const experiment_config& cfg, const piecewise_monotonic_map<double>& dmap,
                     const piecewise_monotonic_map<rational>* rmap, std::uint64_t seed) {
    seed_report rep;
    rep.seed = seed;
    splitmix64 rng(seed);
    sampled_orbit sample = sample_orbit(dmap, rng, cfg.orbit_length, cfg.dither);
    rep.reseeds = sample.reseeds;
    const discrete_measure<double> target = empirical_measure(sample.trace, cfg.burn_in);

    if (!sample.trace.word.empty()) {
        const std::size_t n = std::min<std::size_t>(10, sample.trace.word.size());
        const entropy_estimate e = block_entropy(sample.trace.word, n);
        rep.entropy_rate = e.rate;
        rep.entropy_warning = e.rate <= 0.1;
    }

    std::vector<double> base_pts{sample.trace.points[cfg.burn_in]};
    if (cfg.bases > 1) {
        auto extra = recurrence_bases(sample.trace.points, cfg.burn_in,
                                      std::max<std::size_t>(cfg.l_max, 1), cfg.bases - 1,
                                      base_pts[0]);
        base_pts.insert(base_pts.end(), extra.begin(), extra.end());
    }

    std::map<std::size_t, candidate> best;
    auto process = [&](const auto& map, const auto& y) {
        using R = std::decay_t<decltype(y)>;
        const auto scan = covering_times(map, y, cfg.l_max, R(cfg.margin));
        for (const auto& ct : scan.times) {
            ++rep.covering_candidates;
            try {
                const cylinder<R> cyl{ct.word, ct.pulled};
                const auto po = find_periodic_point(map, cyl, cfg.tol, cfg.margin);
                std::vector<std::pair<double, double>> atoms;
                atoms.reserve(po.orbit.size());
                for (const auto& x : po.orbit) atoms.emplace_back(to_double(x), 1.0);
                auto mu = discrete_measure<double>::from_atoms(std::move(atoms));
                const double w1 = w1_distance(mu, target);
                auto it = best.find(ct.l);
                if (it == best.end() || w1 < it->second.row.w1) {
                    candidate c{approximation_row{seed, ct.l, to_double(po.point),
                                                  po.minimal_period, w1, 0.0,
                                                  to_double(po.residual)},
                                std::move(mu)};
                    best.insert_or_assign(ct.l, std::move(c));
                }
            } catch (const map_error&) {
                ++rep.extraction_failures;
            }
        }
    };
    for (double by : base_pts) {
        if (rmap)
            process(*rmap, to_rational_base(by));
        else
            process(dmap, by);
    }

    rep.rows.reserve(best.size());
    for (auto& [l, c] : best) {
        c.row.discrepancy_m =
            to_double(cylinder_discrepancy(dmap, c.mu, target, cfg.depth_m).value);
        rep.rows.push_back(c.row);
    }
    rep.no_covering_times = rep.rows.empty();
    return rep;
}

void validate(const experiment_config& cfg) {
    if (cfg.seeds.empty()) throw validation_error("experiment needs at least one seed");
    if (cfg.orbit_length == 0) throw validation_error("orbit length must be positive");
    if (cfg.burn_in >= cfg.orbit_length)
        throw validation_error("burn-in must be shorter than the orbit");
    if (cfg.margin < 0) throw validation_error("covering margin must be nonnegative");
    if (cfg.dither < 0) throw validation_error("dither must be nonnegative");
    if (cfg.tol <= 0) throw validation_error("residual tolerance must be positive");
    if (cfg.bases == 0) throw validation_error("bases must be positive");
    if (cfg.workers == 0) throw validation_error("workers must be positive");
    if (cfg.depth_m == 0) throw validation_error("discrepancy depth must be positive");
}

} // namespace

std::vector<seed_report> run_approximation_experiment(const experiment_config& cfg) {
    validate(cfg);
    const piecewise_monotonic_map<double> dmap = cfg.spec.build_double();
    std::optional<piecewise_monotonic_map<rational>> rmap;
    if (cfg.backend == backend_kind::rational_backend) rmap.emplace(cfg.spec.build_rational());
    const piecewise_monotonic_map<rational>* rptr = rmap ? &*rmap : nullptr;

    const std::size_t n = cfg.seeds.size();
    std::vector<seed_report> out(n);
    const std::size_t nw = std::min<std::size_t>(cfg.workers, n);
    if (nw <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = run_seed(cfg, dmap, rptr, cfg.seeds[i]);
        return out;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                out[i] = run_seed(cfg, dmap, rptr, cfg.seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t t = 0; t < nw; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::string render_report(const std::vector<seed_report>& reports) {
    const bool multi = reports.size() > 1;
    std::string out;
    std::vector<std::string> head;
    if (multi) head.push_back("seed");
    for (const char* h : {"l", "p", "minimal_period", "w1", "discrepancy_m", "residual"})
        head.emplace_back(h);
    out += csv::join_row(head);
    for (const auto& rep : reports) {
        for (const auto& r : rep.rows) {
            std::vector<std::string> f;
            if (multi) f.push_back(std::to_string(r.seed));
            f.push_back(std::to_string(r.l));
            f.push_back(csv::format_double(r.point));
            f.push_back(std::to_string(r.minimal_period));
            f.push_back(csv::format_double(r.w1));
            f.push_back(csv::format_double(r.discrepancy_m));
            f.push_back(csv::format_double(r.residual));
            out += csv::join_row(f);
        }
    }
    return out;
}

void emit_report(const std::vector<seed_report>& reports, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw map_error("cannot open output file '" + path + "'");
    const std::string body = render_report(reports);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw map_error("write failed for '" + path + "'");
}

} // namespace pwmap
