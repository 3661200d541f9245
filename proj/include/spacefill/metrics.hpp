#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <set>
#include <thread>

#include "geometry.hpp"

namespace spacefill {

/// An ordered design. Every prefix is itself a valid design; traces are
/// indexed by prefix length n.
struct Design {
    int dimension = 0;
    Norm norm = Norm::L2;
    Domain domain;
    std::vector<Point> points;
};

inline void validate_design(const Design& d) {
    if (d.points.empty()) throw std::invalid_argument("design: empty");
    for (const auto& p : d.points) {
        if (static_cast<int>(p.size()) != d.dimension)
            throw std::invalid_argument("design: dimension mismatch");
        if (!contains(d.domain, p)) throw std::invalid_argument("design: point outside domain");
    }
    auto sorted = d.points;
    std::sort(sorted.begin(), sorted.end(), lex_less);
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1]) throw std::invalid_argument("design: duplicate point");
}

struct TraceRow {
    int n = 0;
    double sr = 0;
    double cr_lower = 0;
    double cr_upper = 0;
    double mr_lower = 0;
    double mr_upper = 0;
};

struct MetricsTrace {
    std::vector<TraceRow> rows;
};

inline double mesh_ratio(double cr, double sr) {
    if (!(sr > 0)) throw std::invalid_argument("mesh_ratio: separation radius must be positive");
    return cr / sr;
}

inline TraceRow make_trace_row(int n, double sr, double cr_lower, double cr_upper) {
    return TraceRow{n, sr, cr_lower, cr_upper, mesh_ratio(cr_lower, sr), mesh_ratio(cr_upper, sr)};
}

/// Half the smallest pairwise distance. O(n^2) reference implementation; the
/// run engines keep it incrementally via SR_{n+1} = min(SR_n, d(x_{n+1}, X_n)/2).
inline double separation_radius(const std::vector<Point>& pts, Norm norm) {
    if (pts.size() < 2) throw std::invalid_argument("separation_radius: need at least two points");
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::min(m, distance(pts[i], pts[j], norm));
    return m / 2;
}

inline double separation_radius(const Design& d) { return separation_radius(d.points, d.norm); }

/// SR of every prefix: out[k] = SR(X_{k+1}) for k >= 1 (out[0] unused infinity).
inline std::vector<double> prefix_separation_radii(const std::vector<Point>& pts, Norm norm) {
    std::vector<double> out(pts.size(), std::numeric_limits<double>::infinity());
    double sr = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < pts.size(); ++k) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) nearest = std::min(nearest, distance(pts[k], pts[i], norm));
        sr = std::min(sr, nearest / 2);
        out[k] = sr;
    }
    return out;
}

namespace detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPACEFILL_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

constexpr std::size_t kChunk = 16384;
constexpr std::size_t kParallelThreshold = 32768;

/// Runs fn(begin, end, chunk_id) over fixed-size chunks. The chunk layout is
/// independent of the thread count, and callers combine per-chunk results in
/// chunk order, so output is bit-identical for any thread count.
template <class Fn>
inline std::size_t for_each_chunk(std::size_t n, int threads, Fn&& fn) {
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    if (threads <= 1 || n < kParallelThreshold || n_chunks < 2) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c * kChunk, std::min(n, (c + 1) * kChunk), c);
        return n_chunks;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
            fn(c * kChunk, std::min(n, (c + 1) * kChunk), c);
    };
    std::vector<std::thread> pool;
    const int t = std::min<std::size_t>(static_cast<std::size_t>(threads), n_chunks);
    pool.reserve(static_cast<std::size_t>(t - 1));
    for (int i = 0; i < t - 1; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return n_chunks;
}

}  // namespace detail

/// min_dist[j] = distance from candidate j to the nearest design point,
/// argmin_index[j] = which design point attains it (-1 before any insertion).
/// Value-like: copy it to snapshot a state.
struct DistanceField {
    FiniteSet candidates;
    Norm norm = Norm::L2;
    std::vector<double> min_dist;
    std::vector<int> argmin_index;
};

inline DistanceField make_distance_field(FiniteSet candidates, Norm norm) {
    validate_domain(Domain{candidates});
    DistanceField f;
    f.norm = norm;
    f.min_dist.assign(candidates.points.size(), std::numeric_limits<double>::infinity());
    f.argmin_index.assign(candidates.points.size(), -1);
    f.candidates = std::move(candidates);
    return f;
}

/// One pass over the candidates: min_dist[j] <- min(min_dist[j], d(c_j, x)).
inline void distance_field_insert(DistanceField& f, const Point& x, int design_index,
                                  int threads = 1) {
    const auto& pts = f.candidates.points;
    detail::for_each_chunk(pts.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t j = b; j < e; ++j) {
            const double d = distance(pts[j], x, f.norm);
            if (d < f.min_dist[j]) {
                f.min_dist[j] = d;
                f.argmin_index[j] = design_index;
            }
        }
    });
}

struct FieldArgmax {
    std::ptrdiff_t index = -1;
    double value = -std::numeric_limits<double>::infinity();
};

namespace detail {

/// Argmax of score(j) with ties broken toward the lexicographically smallest
/// candidate point. tie_tol > 0 widens what counts as a tie and forces a
/// sequential scan (the tolerant comparator is order-dependent).
template <class Score>
inline FieldArgmax field_argmax_by(const DistanceField& f, Score&& score, double tie_tol,
                                   int threads) {
    const auto& pts = f.candidates.points;
    const std::size_t n = pts.size();
    if (n == 0) return {};
    auto scan = [&](std::size_t b, std::size_t e) {
        FieldArgmax best;
        for (std::size_t j = b; j < e; ++j) {
            const double v = score(j);
            if (best.index < 0 || v > best.value + tie_tol) {
                best.index = static_cast<std::ptrdiff_t>(j);
                best.value = v;
            } else if (v >= best.value - tie_tol &&
                       lex_less(pts[j], pts[static_cast<std::size_t>(best.index)])) {
                best.index = static_cast<std::ptrdiff_t>(j);
                best.value = std::max(best.value, v);
            }
        }
        return best;
    };
    if (tie_tol > 0) return scan(0, n);

    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<FieldArgmax> chunk_best(n_chunks);
    for_each_chunk(n, threads, [&](std::size_t b, std::size_t e, std::size_t c) {
        FieldArgmax best;
        for (std::size_t j = b; j < e; ++j) {
            const double v = score(j);
            if (v > best.value ||
                (v == best.value && best.index >= 0 &&
                 lex_less(pts[j], pts[static_cast<std::size_t>(best.index)]))) {
                best.index = static_cast<std::ptrdiff_t>(j);
                best.value = v;
            }
        }
        chunk_best[c] = best;
    });
    FieldArgmax best;
    for (const auto& cb : chunk_best) {
        if (cb.index < 0) continue;
        if (best.index < 0 || cb.value > best.value ||
            (cb.value == best.value && lex_less(pts[static_cast<std::size_t>(cb.index)],
                                                pts[static_cast<std::size_t>(best.index)])))
            best = cb;
    }
    return best;
}

}  // namespace detail

inline FieldArgmax field_argmax(const DistanceField& f, double tie_tol = 0, int threads = 1) {
    return detail::field_argmax_by(f, [&](std::size_t j) { return f.min_dist[j]; }, tie_tol,
                                   threads);
}

inline double field_max(const DistanceField& f) {
    double m = 0;
    for (double v : f.min_dist) m = std::max(m, v);
    return m;
}

/// Fill distance of the design measured over a finite evaluation set:
/// max over eval points of the distance to the nearest design point. Exact.
inline double fill_distance_finite(const std::vector<Point>& design, const FiniteSet& eval,
                                   Norm norm) {
    if (design.empty()) throw std::invalid_argument("fill_distance_finite: empty design");
    double worst = 0;
    for (const auto& q : eval.points) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& p : design) nearest = std::min(nearest, distance(q, p, norm));
        worst = std::max(worst, nearest);
    }
    return worst;
}

/// Exact fill distance on an interval: scan sorted gaps; edge gaps count in
/// full, interior gaps by their midpoint.
inline double fill_distance_interval(std::vector<double> xs, double lo, double hi) {
    if (xs.empty()) throw std::invalid_argument("fill_distance_interval: empty design");
    if (!(lo < hi)) throw std::invalid_argument("fill_distance_interval: bad interval");
    std::sort(xs.begin(), xs.end());
    if (xs.front() < lo || xs.back() > hi)
        throw std::invalid_argument("fill_distance_interval: point outside interval");
    double worst = std::max(xs.front() - lo, hi - xs.back());
    for (std::size_t i = 1; i < xs.size(); ++i) worst = std::max(worst, (xs[i] - xs[i - 1]) / 2);
    return worst;
}

struct FillBounds {
    double lower = 0;
    double upper = 0;
};

/// Sandwich for CR on a continuous domain: the finite evaluation set gives the
/// exact lower side, and adding the eval set's own covering radius (supplied
/// by the caller; half grid step under Linf for dyadic grids) bounds it above.
inline FillBounds fill_distance_bounds(const std::vector<Point>& design, const FiniteSet& eval,
                                       Norm norm, double eval_cr) {
    if (eval_cr < 0) throw std::invalid_argument("fill_distance_bounds: eval_cr must be >= 0");
    const double lower = fill_distance_finite(design, eval, norm);
    return FillBounds{lower, lower + eval_cr};
}

/// Exact incremental interval metrics: sorted points plus a gap multiset.
/// SR is half the smallest gap; CR is the largest of the two edge gaps and
/// half the largest interior gap. All arithmetic stays dyadic for dyadic input.
class IntervalGapTracker {
  public:
    IntervalGapTracker(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo < hi)) throw std::invalid_argument("interval tracker: bad interval");
    }

    void insert(double x) {
        if (x < lo_ || x > hi_) throw std::invalid_argument("interval tracker: point outside");
        const auto it = std::lower_bound(pts_.begin(), pts_.end(), x);
        if (it != pts_.end() && *it == x) throw std::invalid_argument("interval tracker: duplicate");
        if (it != pts_.begin() && it != pts_.end()) {
            gaps_.erase(gaps_.find(*it - *(it - 1)));
        }
        if (it != pts_.begin()) gaps_.insert(x - *(it - 1));
        if (it != pts_.end()) gaps_.insert(*it - x);
        pts_.insert(it, x);
    }

    int size() const { return static_cast<int>(pts_.size()); }

    double sr() const {
        if (gaps_.empty()) throw std::invalid_argument("interval tracker: need two points for sr");
        return *gaps_.begin() / 2;
    }

    double cr() const {
        if (pts_.empty()) throw std::invalid_argument("interval tracker: empty");
        double worst = std::max(pts_.front() - lo_, hi_ - pts_.back());
        if (!gaps_.empty()) worst = std::max(worst, *gaps_.rbegin() / 2);
        return worst;
    }

    const std::vector<double>& points() const { return pts_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

  private:
    double lo_, hi_;
    std::vector<double> pts_;
    std::multiset<double> gaps_;
};

}  // namespace spacefill
