#pragma once

#include <string>

#include "metrics.hpp"

namespace spacefill {

/// Exact representation of 2^e or sqrt(2) * 2^e. Closed under division, and
/// value() is correctly rounded (one sqrt, one exact power-of-two scaling), so
/// predicted schedule entries can be compared bit-for-bit against measured
/// metrics that arise the same way.
struct DyadicSqrt2 {
    int e = 0;
    bool sqrt2 = false;

    double value() const { return std::ldexp(sqrt2 ? std::sqrt(2.0) : 1.0, e); }
};

inline bool operator==(const DyadicSqrt2& a, const DyadicSqrt2& b) {
    return a.e == b.e && a.sqrt2 == b.sqrt2;
}

inline DyadicSqrt2 operator/(const DyadicSqrt2& a, const DyadicSqrt2& b) {
    DyadicSqrt2 r;
    r.sqrt2 = a.sqrt2 != b.sqrt2;
    r.e = a.e - b.e - ((!a.sqrt2 && b.sqrt2) ? 1 : 0);  // 1/sqrt2 = sqrt2 * 2^-1
    return r;
}

enum class SchedulePhase { CycleStart, GridFill, GridComplete, CenterFill };

inline std::string to_string(SchedulePhase p) {
    switch (p) {
        case SchedulePhase::CycleStart: return "cycle-start";
        case SchedulePhase::GridFill: return "grid-fill";
        case SchedulePhase::GridComplete: return "grid-complete";
        case SchedulePhase::CenterFill: return "center-fill";
    }
    throw std::logic_error("unknown phase");
}

struct ScheduleExact {
    long long n = 0;
    DyadicSqrt2 sr, cr, mr;
    SchedulePhase phase = SchedulePhase::CycleStart;
};

/// Floating-point realization of a ScheduleExact row. mr is realized as the
/// quotient cr/sr — the only form a measured trace can produce — so a trace
/// that matches sr and cr bitwise also matches mr bitwise. (Realizing mr from
/// its own exact form differs by one ulp whenever sqrt(2) splits across the
/// quotient.)
struct PredictedRow {
    long long n = 0;
    double sr = 0, cr = 0, mr = 0;
    SchedulePhase phase = SchedulePhase::CycleStart;
};

inline PredictedRow to_predicted(const ScheduleExact& s) {
    const double sr = s.sr.value();
    const double cr = s.cr.value();
    return {s.n, sr, cr, cr / sr, s.phase};
}

namespace detail {

inline long long pow2ll(int k) {
    if (k < 0 || k > 62) throw std::invalid_argument("pow2ll: exponent out of range");
    return 1LL << k;
}

}  // namespace detail

/// d=2 cycle boundaries: the square-grid design sizes where the greedy
/// sequence on [0,1]^2 starts cycle m and completes the refined grid.
inline long long cycle_start_2d(int m) {
    const long long p = detail::pow2ll(m) + 1;
    return p * p + detail::pow2ll(2 * m);
}

inline long long grid_complete_2d(int m) {
    const long long q = detail::pow2ll(m + 1) + 1;
    return q * q;
}

/// d=4 cycle boundaries and the length of the first (face-filling) phase.
inline long long cycle_start_4d(int m) {
    const long long p = detail::pow2ll(m) + 1;
    return p * p * p * p + detail::pow2ll(4 * m);
}

inline long long fill_count_4d(int m) {
    const long long p = detail::pow2ll(m) + 1;
    return 6 * detail::pow2ll(2 * m) * p * p;
}

/// Which refinement cycle a d=2 design size belongs to. Exact at the cycle
/// boundaries: cycle_start_2d(m)/2 - 1/4 = (2^m + 1/2)^2 is a perfect dyadic
/// square, so sqrt and log2 land on representable values.
inline int cycle_index_2d(long long n) {
    if (n < 5) throw std::invalid_argument("cycle_index_2d: defined for n >= 5");
    const double t = std::sqrt(static_cast<double>(n) / 2 - 0.25) - 0.5;
    return static_cast<int>(std::floor(std::log2(t)));
}

inline ScheduleExact schedule_exact_2d(long long n) {
    const int m = cycle_index_2d(n);
    const long long nm = cycle_start_2d(m);
    const long long km = grid_complete_2d(m);
    ScheduleExact r;
    r.n = n;
    if (n == nm) {
        r.sr = {-m - 2, true};
        r.cr = {-m - 1, false};
        r.phase = SchedulePhase::CycleStart;
    } else if (n < km) {
        r.sr = {-m - 2, false};
        r.cr = {-m - 1, false};
        r.phase = SchedulePhase::GridFill;
    } else if (n == km) {
        r.sr = {-m - 2, false};
        r.cr = {-m - 2, true};
        r.phase = SchedulePhase::GridComplete;
    } else {
        r.sr = {-m - 3, true};
        r.cr = {-m - 2, true};
        r.phase = SchedulePhase::CenterFill;
    }
    r.mr = r.cr / r.sr;
    return r;
}

inline ScheduleExact schedule_exact_4d(long long n) {
    if (n < 17) throw std::invalid_argument("schedule_exact_4d: defined for n >= 17");
    int m = 0;
    while (cycle_start_4d(m + 1) <= n) ++m;
    const long long nm = cycle_start_4d(m);
    const long long mid = nm + fill_count_4d(m);
    ScheduleExact r;
    r.n = n;
    if (n == nm) {
        r.sr = {-m - 1, false};
        r.cr = {-m - 1, true};
        r.phase = SchedulePhase::CycleStart;
    } else if (n < mid) {
        r.sr = {-m - 2, true};
        r.cr = {-m - 1, true};
        r.phase = SchedulePhase::GridFill;
    } else if (n == mid) {
        r.sr = {-m - 2, true};
        r.cr = {-m - 1, false};
        r.phase = SchedulePhase::GridComplete;
    } else {
        r.sr = {-m - 2, false};
        r.cr = {-m - 1, false};
        r.phase = SchedulePhase::CenterFill;
    }
    r.mr = r.cr / r.sr;
    return r;
}

inline PredictedRow predicted_metrics_2d(long long n) { return to_predicted(schedule_exact_2d(n)); }
inline PredictedRow predicted_metrics_4d(long long n) { return to_predicted(schedule_exact_4d(n)); }

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

enum class CertStatus { Pass, Fail, Inconclusive };

inline std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::Pass: return "pass";
        case CertStatus::Fail: return "fail";
        case CertStatus::Inconclusive: return "inconclusive";
    }
    throw std::logic_error("unknown status");
}

struct CertRow {
    long long n = 0;
    double lhs = 0, rhs = 0;
    bool pass = false;
};

/// A checked family of inequalities lhs <= rhs, one row per design size (or
/// per point, for pointwise certificates). overall is the conjunction of the
/// row passes; status downgrades to Inconclusive when a precondition for a
/// decisive answer was not met (e.g. CR bounds that have not collapsed).
struct CertificateReport {
    std::string name;
    CertStatus status = CertStatus::Pass;
    bool overall = true;
    std::vector<CertRow> rows;
    std::string note;
};

namespace detail {

inline CertificateReport finalize_report(CertificateReport r, bool inconclusive = false) {
    r.overall = true;
    for (const auto& row : r.rows) r.overall = r.overall && row.pass;
    if (!r.overall)
        r.status = CertStatus::Fail;
    else
        r.status = inconclusive ? CertStatus::Inconclusive : CertStatus::Pass;
    return r;
}

}  // namespace detail

/// Compare a measured trace against the closed-form d=2 / d=4 schedule.
/// Requires exact (collapsed) CR bounds; rows where they differ make the
/// verdict inconclusive instead of pretending to a decision.
inline CertificateReport certify_against_schedule(const MetricsTrace& trace, int d,
                                                  double tol = 1e-9) {
    if (d != 2 && d != 4) throw std::invalid_argument("schedule certificates exist for d=2, d=4");
    if (!(tol >= 0)) throw std::invalid_argument("tolerance must be nonnegative");
    const long long n_min = d == 2 ? 5 : 17;
    CertificateReport rep;
    rep.name = d == 2 ? "schedule2d" : "schedule4d";
    bool inconclusive = false;
    for (const auto& row : trace.rows) {
        if (row.n < n_min) continue;
        if (row.cr_lower != row.cr_upper) {
            inconclusive = true;
            if (rep.note.empty())
                rep.note = "cr bounds not collapsed at n=" + std::to_string(row.n) +
                           "; measure CR exactly on a finite reference set";
            continue;
        }
        const PredictedRow p = d == 2 ? predicted_metrics_2d(row.n) : predicted_metrics_4d(row.n);
        const double lhs = std::max({std::abs(row.sr - p.sr), std::abs(row.cr_lower - p.cr),
                                     std::abs(row.mr_lower - p.mr)});
        rep.rows.push_back({row.n, lhs, tol, lhs <= tol});
    }
    return detail::finalize_report(std::move(rep), inconclusive);
}

/// Mesh-ratio bound MR <= 2/a for packings whose steps keep min-dist >= a*CR.
inline CertificateReport certify_mesh_ratio_bound(const MetricsTrace& trace, double a,
                                                  double slack = 1e-9) {
    if (!(a > 0) || a > 1) throw std::invalid_argument("a must lie in (0, 1]");
    CertificateReport rep;
    rep.name = "mr-bound";
    const double rhs = 2 / a + slack;
    for (const auto& row : trace.rows) rep.rows.push_back({row.n, row.mr_upper, rhs, row.mr_upper <= rhs});
    return detail::finalize_report(std::move(rep));
}

/// Certifiable per-step relaxation floors recovered from a candidate-set
/// trace: a step that lands within eps of the true argmax value cr admits
/// a_n = 1 - eps/cr. Rows with cr <= eps certify nothing.
struct AnRow {
    long long n = 0;
    double a_n = 0;
    bool certifiable = false;
};

inline std::vector<AnRow> a_n_lower_bound(double eps, const MetricsTrace& cand_trace) {
    if (!(eps >= 0)) throw std::invalid_argument("eps must be nonnegative");
    std::vector<AnRow> out;
    out.reserve(cand_trace.rows.size());
    for (const auto& row : cand_trace.rows) {
        AnRow r;
        r.n = row.n;
        const double cr = row.cr_lower;
        if (cr > 0) {
            r.a_n = 1 - eps / cr;
            r.certifiable = r.a_n > 0;
        } else {
            r.a_n = -std::numeric_limits<double>::infinity();
            r.certifiable = false;
        }
        out.push_back(r);
    }
    return out;
}

/// Per-n mesh-ratio bound MR(X_n) <= 2/a_n using recovered floors; rows
/// without a certifiable floor are skipped.
inline CertificateReport certify_mesh_ratio_bound(const MetricsTrace& trace,
                                                  const std::vector<AnRow>& floors,
                                                  double slack = 1e-9) {
    CertificateReport rep;
    rep.name = "mr-bound";
    for (const auto& row : trace.rows) {
        const AnRow* f = nullptr;
        for (const auto& g : floors)
            if (g.n == row.n) {
                f = &g;
                break;
            }
        if (!f || !f->certifiable) continue;
        const double rhs = 2 / f->a_n + slack;
        rep.rows.push_back({row.n, row.mr_upper, rhs, row.mr_upper <= rhs});
    }
    return detail::finalize_report(std::move(rep));
}

/// Volume lower bound on the fill distance: CR(X_n) >= (vol/V_d)^{1/d} n^{-1/d}.
/// Checked as bound <= cr_upper; finite-set domains have no volume and throw.
inline CertificateReport certify_fill_lower_bound(const MetricsTrace& trace, const Domain& domain,
                                                  Norm norm, double tol = 1e-12) {
    const double vol = volume(domain);
    const int d = dimension_of(domain);
    const double vd = unit_ball_volume(d, norm);
    const double c = std::pow(vol / vd, 1.0 / d);
    CertificateReport rep;
    rep.name = "fill-lower";
    for (const auto& row : trace.rows) {
        const double lhs = c * std::pow(static_cast<double>(row.n), -1.0 / d);
        const double rhs = row.cr_upper + tol;
        rep.rows.push_back({row.n, lhs, rhs, lhs <= rhs});
    }
    return detail::finalize_report(std::move(rep));
}

/// Volume upper bound on the separation radius. Balls of radius SR(X_n)
/// centered at the design pack into the domain inflated by SR(X_m), so for
/// n >= m: SR(X_n) <= (vol(inflated)/V_d)^{1/d} n^{-1/d}. The L1 inflated
/// volume is Monte Carlo; its 3-sigma upper band keeps the certificate sound.
inline CertificateReport certify_separation_upper_bound(const Design& design, int m,
                                                        double tol = 1e-12) {
    if (m < 2) throw std::invalid_argument("separation bound needs m >= 2");
    if (static_cast<int>(design.points.size()) < m)
        throw std::invalid_argument("design has fewer than m points");
    const auto* box = std::get_if<Hypercube>(&design.domain);
    if (!box) throw std::invalid_argument("separation bound implemented for hypercube domains");
    const auto prefix = prefix_separation_radii(design.points, design.norm);
    const double r = prefix[static_cast<std::size_t>(m - 1)];
    const InflatedVolume iv = inflated_volume(*box, r, design.norm);
    const double vol_hi = iv.value + 3 * iv.std_error;
    const int d = design.dimension;
    const double vd = unit_ball_volume(d, design.norm);
    const double c = std::pow(vol_hi / vd, 1.0 / d);
    CertificateReport rep;
    rep.name = "sep-upper";
    if (iv.std_error > 0)
        rep.note = "inflated volume estimated by monte carlo; using its 3-sigma upper band";
    for (int n = m; n <= static_cast<int>(design.points.size()); ++n) {
        const double lhs = prefix[static_cast<std::size_t>(n - 1)];
        const double rhs = c * std::pow(static_cast<double>(n), -1.0 / d) + tol;
        rep.rows.push_back({n, lhs, rhs, lhs <= rhs});
    }
    return detail::finalize_report(std::move(rep));
}

/// Pigeonhole: any n+1 points have two in a common fill ball of an n-point
/// design, so SR(X'_{n+1}) <= CR(X_n). CR is measured on the given reference
/// set, so the check is exact when that set is the (finite) domain.
inline CertificateReport certify_pigeonhole(const Design& a, const Design& b,
                                            const FiniteSet& eval, double slack = 0) {
    if (b.points.size() != a.points.size() + 1)
        throw std::invalid_argument("pigeonhole compares designs of sizes n and n+1");
    if (a.norm != b.norm || a.dimension != b.dimension)
        throw std::invalid_argument("pigeonhole: designs must share norm and dimension");
    CertificateReport rep;
    rep.name = "pigeonhole";
    const double lhs = separation_radius(b.points, b.norm);
    const double rhs = fill_distance_finite(a.points, eval, a.norm) + slack;
    rep.rows.push_back({static_cast<long long>(a.points.size()), lhs, rhs, lhs <= rhs});
    return detail::finalize_report(std::move(rep));
}

/// Finite-reference CR is monotone under reference refinement: for nested
/// reference sets, CR on the subset cannot exceed CR on the superset.
inline CertificateReport certify_fill_sandwich(const std::vector<Point>& design, Norm norm,
                                               const FiniteSet& subset_eval,
                                               const FiniteSet& superset_eval,
                                               double tol = 1e-12) {
    CertificateReport rep;
    rep.name = "sandwich";
    const double lhs = fill_distance_finite(design, subset_eval, norm);
    const double rhs = fill_distance_finite(design, superset_eval, norm) + tol;
    rep.rows.push_back({static_cast<long long>(design.size()), lhs, rhs, lhs <= rhs});
    return detail::finalize_report(std::move(rep));
}

/// d=4 structure check: at the fill-end size of cycle m the design, scaled by
/// 2^(m+1), is an integer lattice slice with even coordinate sums (the
/// four-dimensional checkerboard). lhs is the worst deviation, with a parity
/// violation reported as lhs = 1.
inline CertificateReport certify_d4_checkerboard(const Design& design, int m, double tol = 1e-9) {
    if (design.dimension != 4) throw std::invalid_argument("checkerboard check is d=4 only");
    const long long expected = cycle_start_4d(m) + fill_count_4d(m);
    if (static_cast<long long>(design.points.size()) != expected)
        throw std::invalid_argument("design size is not the fill-end size of cycle m");
    const double scale = std::ldexp(1.0, m + 1);
    CertificateReport rep;
    rep.name = "checkerboard";
    rep.note = "lhs is the max distance of scaled coordinates from integers; 1 marks odd parity";
    for (std::size_t i = 0; i < design.points.size(); ++i) {
        double dev = 0;
        long long sum = 0;
        for (double x : design.points[i]) {
            const double s = x * scale;
            const double r = std::round(s);
            dev = std::max(dev, std::abs(s - r));
            sum += static_cast<long long>(r);
        }
        const bool parity_ok = ((sum % 2) + 2) % 2 == 0;
        const double lhs = parity_ok ? dev : std::max(dev, 1.0);
        rep.rows.push_back({static_cast<long long>(i + 1), lhs, tol, lhs <= tol});
    }
    return detail::finalize_report(std::move(rep));
}

/// Empirical rate constants: rho = max mesh ratio, c1_hat the smallest
/// cr * n^(1/d) (fill never beats c1_hat n^{-1/d} on the trace), c2_hat the
/// largest rho * sr * n^(1/d).
struct RateReport {
    double rho = 0;
    double c1_hat = 0;
    double c2_hat = 0;
};

inline RateReport rate_report(const MetricsTrace& trace, int d) {
    if (trace.rows.empty()) throw std::invalid_argument("rate_report: empty trace");
    if (d < 1) throw std::invalid_argument("rate_report: bad dimension");
    RateReport r;
    r.c1_hat = std::numeric_limits<double>::infinity();
    for (const auto& row : trace.rows) r.rho = std::max(r.rho, row.mr_upper);
    for (const auto& row : trace.rows) {
        const double s = std::pow(static_cast<double>(row.n), 1.0 / d);
        r.c1_hat = std::min(r.c1_hat, row.cr_lower * s);
        r.c2_hat = std::max(r.c2_hat, r.rho * row.sr * s);
    }
    return r;
}

}  // namespace spacefill
