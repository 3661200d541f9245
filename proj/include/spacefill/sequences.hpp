#pragma once

#include <memory>
#include <optional>
#include <string>

#include "metrics.hpp"

namespace spacefill {

struct GreedyConfig {
    Domain domain;
    FiniteSet candidates;        // selection pool, a subset of the domain
    Norm norm = Norm::L2;
    std::optional<Point> x1;     // default: domain center / lex-smallest candidate
    int n_max = 0;
    double tie_tol = 0;          // 0 = exact ties (dyadic grids); >0 forces sequential scan
    int threads = 0;             // 0 = SPACEFILL_THREADS env var, else all cores
};

/// Where CR is measured. Without an eval set the candidate set is the
/// reference and CR is exact on it (cr_lower == cr_upper). With an eval set,
/// CR is exact on the eval set and cr_slack (the eval set's covering radius in
/// the ambient domain) widens cr_upper into a bound for the continuous CR.
struct TraceSpec {
    std::optional<FiniteSet> eval;
    double cr_slack = 0;
};

struct RelaxationSchedule {
    double a = 1.0;
    std::function<double(int)> alpha;  // n -> alpha_n in [a, 1]; empty means constant a
};

enum class RelaxSelector { Argmax, BallPerturbation };

struct RelaxedConfig {
    GreedyConfig base;
    RelaxationSchedule schedule;
    RelaxSelector selector = RelaxSelector::Argmax;
    std::uint64_t seed = 1;
};

struct BoundaryPhobicConfig {
    GreedyConfig base;
    double beta = std::numeric_limits<double>::infinity();  // infinity: plain greedy
};

struct RunMetadata {
    std::string algorithm;
    std::string tie_break = "lexicographic-smallest";
    std::string prng;  // "mt19937_64" when randomness is used, empty otherwise
    std::uint64_t seed = 0;
    int achieved_n = 0;
    bool exhausted_candidates = false;
};

struct RunResult {
    Design design;
    MetricsTrace trace;       // CR on the reference set (eval if given, else candidates)
    MetricsTrace cand_trace;  // CR on the candidate set (drives the relaxation bookkeeping)
    std::vector<double> step_min_dist;     // d(x_n, X_{n-1}) for n = 2.., index n-2
    std::vector<double> cr_candidates_by_n;  // CR on candidates after n points, index n-1
    RunMetadata meta;
};

namespace detail {

struct SweepResult {
    double max_min_dist = 0;
    FieldArgmax best;
};

/// Fused pass: fold x_new into the field, then report both the field maximum
/// (the candidate-set CR) and the argmax of score(j, min_dist[j]) with
/// lexicographic tie-breaking. Chunk layout is thread-count independent and
/// per-chunk bests merge under a total order, so results are bit-identical
/// for any thread count.
template <class Score>
inline SweepResult sweep_insert_and_scan(DistanceField& f, const Point& x_new, int design_index,
                                         Score score, double tie_tol, int threads) {
    const auto& pts = f.candidates.points;
    const std::size_t n = pts.size();

    if (tie_tol > 0) {
        distance_field_insert(f, x_new, design_index, 1);
        SweepResult r;
        r.best = field_argmax_by(f, [&](std::size_t j) { return score(j, f.min_dist[j]); },
                                 tie_tol, 1);
        r.max_min_dist = field_max(f);
        return r;
    }

    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<SweepResult> partial(n_chunks);
    for_each_chunk(n, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
        SweepResult r;
        for (std::size_t j = b; j < e; ++j) {
            const double d = distance(pts[j], x_new, f.norm);
            if (d < f.min_dist[j]) {
                f.min_dist[j] = d;
                f.argmin_index[j] = design_index;
            }
            const double md = f.min_dist[j];
            r.max_min_dist = std::max(r.max_min_dist, md);
            const double v = score(j, md);
            if (v > r.best.value ||
                (v == r.best.value && r.best.index >= 0 &&
                 lex_less(pts[j], pts[static_cast<std::size_t>(r.best.index)]))) {
                r.best.index = static_cast<std::ptrdiff_t>(j);
                r.best.value = v;
            }
        }
        partial[c] = r;
    });
    SweepResult out;
    for (const auto& r : partial) {
        out.max_min_dist = std::max(out.max_min_dist, r.max_min_dist);
        if (r.best.index < 0) continue;
        if (out.best.index < 0 || r.best.value > out.best.value ||
            (r.best.value == out.best.value &&
             lex_less(pts[static_cast<std::size_t>(r.best.index)],
                      pts[static_cast<std::size_t>(out.best.index)])))
            out.best = r.best;
    }
    return out;
}

/// Update-only pass for the evaluation field; returns the new field maximum.
inline double sweep_insert_and_max(DistanceField& f, const Point& x_new, int design_index,
                                   int threads) {
    const auto& pts = f.candidates.points;
    const std::size_t n = pts.size();
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(n_chunks, 0.0);
    for_each_chunk(n, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
        double m = 0;
        for (std::size_t j = b; j < e; ++j) {
            const double d = distance(pts[j], x_new, f.norm);
            if (d < f.min_dist[j]) {
                f.min_dist[j] = d;
                f.argmin_index[j] = design_index;
            }
            m = std::max(m, f.min_dist[j]);
        }
        partial[c] = m;
    });
    double m = 0;
    for (double v : partial) m = std::max(m, v);
    return m;
}

inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t r;
    do {
        r = rng();
    } while (r < threshold);
    return r % bound;
}

inline std::size_t find_candidate_index(const FiniteSet& candidates, const Point& x) {
    const auto it = std::find(candidates.points.begin(), candidates.points.end(), x);
    if (it == candidates.points.end())
        throw std::invalid_argument("x1 is not a candidate point");
    return static_cast<std::size_t>(it - candidates.points.begin());
}

struct MinDistScore {
    double operator()(std::size_t, double md) const { return md; }
};

/// Boundary-phobic score D_beta(x) = min(min-dist, beta * boundary distance).
/// An infinite beta short-circuits to the plain min-dist (and avoids inf*0).
struct BoundaryScore {
    const std::vector<double>* bdist = nullptr;
    double beta = std::numeric_limits<double>::infinity();
    double operator()(std::size_t j, double md) const {
        if (!std::isfinite(beta)) return md;
        return std::min(md, beta * (*bdist)[j]);
    }
};

/// Chooser contract: given the scan of the current state (w.r.t. X_n) return
/// the index of x_{n+1}, or -1 to stop.
template <class Score, class Choose>
inline RunResult run_packing(const GreedyConfig& cfg, const TraceSpec& tspec, Score score,
                             Choose choose, RunMetadata meta) {
    validate_domain(cfg.domain);
    if (cfg.candidates.points.empty()) throw std::invalid_argument("no candidates");
    if (cfg.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const int threads = resolve_threads(cfg.threads);
    const int dim = dimension_of(cfg.domain);
    for (const auto& c : cfg.candidates.points)
        if (static_cast<int>(c.size()) != dim)
            throw std::invalid_argument("candidate dimension mismatch");

    const Point x1 = cfg.x1 ? *cfg.x1 : default_start_point(cfg.domain);
    const std::size_t x1_idx = find_candidate_index(cfg.candidates, x1);
    if (!contains(cfg.domain, x1)) throw std::invalid_argument("x1 outside domain");

    const int n_stop = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(cfg.n_max), cfg.candidates.points.size()));

    RunResult out;
    out.design.dimension = dim;
    out.design.norm = cfg.norm;
    out.design.domain = cfg.domain;
    out.design.points.reserve(static_cast<std::size_t>(n_stop));
    out.design.points.push_back(x1);

    DistanceField cand = make_distance_field(cfg.candidates, cfg.norm);
    std::optional<DistanceField> eval;
    if (tspec.eval) eval = make_distance_field(*tspec.eval, cfg.norm);

    SweepResult scan = sweep_insert_and_scan(cand, x1, 0, score, cfg.tie_tol, threads);
    double cr_ref = eval ? sweep_insert_and_max(*eval, x1, 0, threads) : scan.max_min_dist;
    out.cr_candidates_by_n.push_back(scan.max_min_dist);

    double sr = std::numeric_limits<double>::infinity();
    while (static_cast<int>(out.design.points.size()) < n_stop) {
        const int n_before = static_cast<int>(out.design.points.size());
        const std::ptrdiff_t sel = choose(scan, cand, n_before);
        if (sel < 0) break;
        const double step = cand.min_dist[static_cast<std::size_t>(sel)];
        if (!(step > 0)) break;  // candidate pool saturated

        const Point& x = cand.candidates.points[static_cast<std::size_t>(sel)];
        out.design.points.push_back(x);
        out.step_min_dist.push_back(step);
        sr = std::min(sr, step / 2);

        const int idx = n_before;  // design index of the new point
        scan = sweep_insert_and_scan(cand, x, idx, score, cfg.tie_tol, threads);
        cr_ref = eval ? sweep_insert_and_max(*eval, x, idx, threads) : scan.max_min_dist;
        out.cr_candidates_by_n.push_back(scan.max_min_dist);

        const int n = n_before + 1;
        out.cand_trace.rows.push_back(make_trace_row(n, sr, scan.max_min_dist, scan.max_min_dist));
        out.trace.rows.push_back(make_trace_row(n, sr, cr_ref, cr_ref + tspec.cr_slack));
    }

    meta.achieved_n = static_cast<int>(out.design.points.size());
    meta.exhausted_candidates = meta.achieved_n < cfg.n_max;
    out.meta = std::move(meta);
    validate_design(out.design);
    (void)x1_idx;
    return out;
}

}  // namespace detail

/// Algorithm 1: always take a point farthest from the current design.
inline RunResult greedy_packing(const GreedyConfig& cfg, const TraceSpec& tspec = {}) {
    RunMetadata meta;
    meta.algorithm = "greedy";
    auto choose = [](const detail::SweepResult& scan, const DistanceField&, int) {
        return scan.best.index;
    };
    return detail::run_packing(cfg, tspec, detail::MinDistScore{}, choose, std::move(meta));
}

/// Relaxed packing: any point whose min-distance is at least alpha_n times the
/// candidate-set CR qualifies. The argmax selector reduces to greedy; the
/// ball-perturbation selector samples uniformly (seeded) among candidates
/// inside B(x*, (1 - alpha_n) CR) that satisfy the step inequality.
inline RunResult relaxed_greedy_packing(const RelaxedConfig& cfg, const TraceSpec& tspec = {}) {
    if (!(cfg.schedule.a > 0) || cfg.schedule.a > 1)
        throw std::invalid_argument("relaxation floor a must lie in (0, 1]");
    RunMetadata meta;
    meta.algorithm = "relaxed";
    if (cfg.selector == RelaxSelector::BallPerturbation) {
        meta.prng = "mt19937_64";
        meta.seed = cfg.seed;
    }
    auto rng = std::make_shared<std::mt19937_64>(cfg.seed);
    auto alpha_at = [sched = cfg.schedule](int n) {
        const double a_n = sched.alpha ? sched.alpha(n) : sched.a;
        if (a_n < sched.a || a_n > 1)
            throw std::invalid_argument("alpha_n escaped [a, 1]");
        return a_n;
    };
    auto choose = [selector = cfg.selector, rng, alpha_at](const detail::SweepResult& scan,
                                                           const DistanceField& f,
                                                           int n) -> std::ptrdiff_t {
        if (scan.best.index < 0 || !(scan.best.value > 0)) return -1;
        const double alpha_n = alpha_at(n);  // validated even when argmax ignores it
        if (selector == RelaxSelector::Argmax) return scan.best.index;
        const double cr = scan.best.value;  // candidate-set CR(X_n)
        const double threshold = alpha_n * cr;
        const double ball_r = (1 - alpha_n) * cr;
        const Point& star = f.candidates.points[static_cast<std::size_t>(scan.best.index)];
        std::vector<std::size_t> qualifying;
        for (std::size_t j = 0; j < f.candidates.points.size(); ++j) {
            if (f.min_dist[j] < threshold) continue;
            if (distance(f.candidates.points[j], star, f.norm) <= ball_r) qualifying.push_back(j);
        }
        if (qualifying.empty())
            throw std::runtime_error("relaxed packing: no candidate satisfies the step inequality");
        const std::size_t pick =
            static_cast<std::size_t>(detail::bounded_rand(*rng, qualifying.size()));
        const std::size_t j = qualifying[pick];
        if (f.min_dist[j] < threshold)
            throw std::runtime_error("relaxed packing: accepted point violates the step inequality");
        return static_cast<std::ptrdiff_t>(j);
    };
    return detail::run_packing(cfg.base, tspec, detail::MinDistScore{}, choose, std::move(meta));
}

/// Boundary-phobic packing: maximizes min(min-dist, beta * distance to the
/// domain boundary). beta = infinity is exactly greedy_packing, tie-breaks
/// included.
inline RunResult boundary_phobic_packing(const BoundaryPhobicConfig& cfg,
                                         const TraceSpec& tspec = {}) {
    if (!(cfg.beta > 0)) throw std::invalid_argument("beta must be positive");
    if (std::holds_alternative<FiniteSet>(cfg.base.domain))
        throw std::invalid_argument("boundary-phobic packing needs a hypercube or ball domain");
    RunMetadata meta;
    meta.algorithm = "boundary-phobic";
    auto bdist = std::make_shared<std::vector<double>>();
    bdist->reserve(cfg.base.candidates.points.size());
    for (const auto& c : cfg.base.candidates.points)
        bdist->push_back(boundary_distance(cfg.base.domain, c));
    detail::BoundaryScore score{bdist.get(), cfg.beta};
    auto choose = [bdist](const detail::SweepResult& scan, const DistanceField&, int) {
        return scan.best.index;
    };
    return detail::run_packing(cfg.base, tspec, score, choose, std::move(meta));
}

/// Suggested beta so that by n_max the boundary gap beta steers toward matches
/// the expected fill distance scale: (d/2) (n_max V_d)^(1/d) - sqrt(d).
/// Nonpositive results mean "do not bother" and callers should warn.
inline double beta_recommended(int n_max, int d) {
    if (n_max < 1 || d < 1) throw std::invalid_argument("beta_recommended: bad arguments");
    const double vd = unit_ball_volume(d, Norm::L2);
    return (d / 2.0) * std::pow(n_max * vd, 1.0 / d) - std::sqrt(static_cast<double>(d));
}

namespace detail {

inline double radical_inverse_base2(std::uint64_t k) {
    double v = 0;
    double f = 0.5;
    while (k) {
        if (k & 1) v += f;
        f /= 2;
        k >>= 1;
    }
    return v;
}

inline RunResult make_interval_result(IntervalGapTracker&& tracker, RunMetadata meta,
                                      std::vector<double> step_min_dist,
                                      std::vector<double> cr_by_n, MetricsTrace trace) {
    RunResult out;
    out.design.dimension = 1;
    out.design.norm = Norm::L2;
    out.design.domain = Hypercube{{tracker.lo()}, {tracker.hi()}};
    out.trace = trace;
    out.cand_trace = std::move(trace);
    out.step_min_dist = std::move(step_min_dist);
    out.cr_candidates_by_n = std::move(cr_by_n);
    out.meta = std::move(meta);
    return out;
}

}  // namespace detail

/// Exact greedy packing on an interval. Candidates are the interval endpoints
/// and gap midpoints; ties go to the leftmost. All metrics are exact.
inline RunResult greedy_packing_interval(double lo, double hi, std::optional<double> x1_opt,
                                         int n_max) {
    if (!(lo < hi)) throw std::invalid_argument("greedy interval: bad interval");
    if (n_max < 1) throw std::invalid_argument("greedy interval: n_max must be >= 1");
    const double x1 = x1_opt ? *x1_opt : lo + (hi - lo) / 2;
    if (x1 < lo || x1 > hi) throw std::invalid_argument("greedy interval: x1 outside interval");

    IntervalGapTracker tracker(lo, hi);
    tracker.insert(x1);
    std::vector<Point> order{{x1}};
    std::vector<double> steps, cr_by_n{tracker.cr()};
    MetricsTrace trace;
    double sr = std::numeric_limits<double>::infinity();

    while (tracker.size() < n_max) {
        const auto& pts = tracker.points();
        double best_val = pts.front() - lo;
        double best_pos = lo;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double g = pts[i] - pts[i - 1];
            if (g / 2 > best_val) {
                best_val = g / 2;
                best_pos = pts[i - 1] + g / 2;
            }
        }
        if (hi - pts.back() > best_val) {
            best_val = hi - pts.back();
            best_pos = hi;
        }
        if (!(best_val > 0)) break;
        tracker.insert(best_pos);
        order.push_back({best_pos});
        steps.push_back(best_val);
        sr = std::min(sr, best_val / 2);
        cr_by_n.push_back(tracker.cr());
        const double cr = tracker.cr();
        trace.rows.push_back(make_trace_row(tracker.size(), sr, cr, cr));
    }

    RunMetadata meta;
    meta.algorithm = "interval-exact";
    meta.achieved_n = tracker.size();
    auto out = detail::make_interval_result(std::move(tracker), std::move(meta), std::move(steps),
                                            std::move(cr_by_n), std::move(trace));
    out.design.points = std::move(order);
    return out;
}

/// The base-2 radical-inverse sequence x_k, k = 1..n_max, with exact interval
/// metrics on [0, 1].
inline RunResult van_der_corput(int n_max) {
    if (n_max < 1) throw std::invalid_argument("van_der_corput: n_max must be >= 1");
    IntervalGapTracker tracker(0.0, 1.0);
    std::vector<Point> order;
    std::vector<double> steps, cr_by_n;
    MetricsTrace trace;
    double sr = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n_max; ++k) {
        const double x = detail::radical_inverse_base2(static_cast<std::uint64_t>(k));
        if (k > 1) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& p : order) nearest = std::min(nearest, std::abs(p[0] - x));
            steps.push_back(nearest);
            sr = std::min(sr, nearest / 2);
        }
        tracker.insert(x);
        order.push_back({x});
        cr_by_n.push_back(tracker.cr());
        if (k > 1) {
            const double cr = tracker.cr();
            trace.rows.push_back(make_trace_row(k, sr, cr, cr));
        }
    }
    RunMetadata meta;
    meta.algorithm = "vdc";
    meta.achieved_n = n_max;
    auto out = detail::make_interval_result(std::move(tracker), std::move(meta), std::move(steps),
                                            std::move(cr_by_n), std::move(trace));
    out.design.points = std::move(order);
    return out;
}

}  // namespace spacefill
