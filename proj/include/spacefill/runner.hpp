#pragma once

#include "io.hpp"

namespace spacefill {

/// One flat configuration for every algorithm; fields that do not apply to
/// the chosen algorithm must stay unset (validated below).
struct RunConfig {
    std::string algorithm = "greedy";  // greedy | relaxed | boundary-phobic | vdc | interval-exact
    int dimension = 0;                 // required for grid algorithms; forced to 1 for d=1 ones
    Norm norm = Norm::L2;
    std::string domain_type = "hypercube";  // hypercube ([0,1]^d) or ball (unit ball at origin)
    int grid_k = -1;                        // dyadic candidate grid level
    int eval_k = -1;                        // CR reference grid level; default grid_k + 2
    bool eval_set_given = false;
    std::string x1 = "center";  // "center" or comma-separated coordinates
    int n_max = 0;
    std::optional<double> beta;         // boundary-phobic only; <= 0 invalid, "auto" resolves it
    bool beta_auto = false;
    std::optional<double> a;            // relaxed only
    std::string selector = "argmax";    // relaxed only: argmax | ball
    bool selector_given = false;
    std::optional<std::uint64_t> seed;  // relaxed ball selector only
    bool add_cr_slack = false;          // widen cr_upper by the eval grid cover radius
    double tie_tol = 0;
    int threads = 0;
};

struct RunOutput {
    RunResult run;
    std::optional<FiniteSet> candidate_set;  // selection pool for grid algorithms
    std::optional<FiniteSet> eval_set;       // CR reference set for grid algorithms
    nlohmann::json config;                   // echo of the resolved configuration
};

namespace detail {

inline Point parse_point(const std::string& text) {
    Point p;
    std::istringstream is(text);
    std::string cell;
    while (std::getline(is, cell, ',')) {
        std::size_t used = 0;
        p.push_back(std::stod(cell, &used));
    }
    if (p.empty()) throw std::invalid_argument("empty point literal");
    return p;
}

inline FiniteSet filter_to_domain(const FiniteSet& grid, const Domain& domain) {
    FiniteSet out;
    for (const auto& p : grid.points)
        if (contains(domain, p)) out.points.push_back(p);
    return out;
}

/// Echo of the resolved configuration. Uses the same keys as
/// run_config_from_json so the echo embedded in a design file can be fed
/// straight back to `compare` or scripting.
inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["algorithm"] = c.algorithm;
    j["norm"] = to_string(c.norm);
    j["n"] = c.n_max;
    if (c.algorithm == "greedy" || c.algorithm == "relaxed" || c.algorithm == "boundary-phobic") {
        j["dim"] = c.dimension;
        j["domain"] = c.domain_type;
        j["grid_k"] = c.grid_k;
        if (c.eval_k >= 0) j["eval_k"] = c.eval_k;
        j["x1"] = c.x1;
        if (c.add_cr_slack) j["slack"] = true;
        if (c.tie_tol > 0) j["tie_tol"] = c.tie_tol;
    }
    if (c.beta_auto)
        j["beta"] = "auto";
    else if (c.beta)
        j["beta"] = *c.beta;
    if (c.a) j["a"] = *c.a;
    if (c.algorithm == "relaxed") j["selector"] = c.selector;
    if (c.seed) j["seed"] = *c.seed;
    return j;
}

}  // namespace detail

/// Flat JSON form of RunConfig (used by `compare` and scripting). Unknown
/// keys are rejected so typos surface as config errors.
inline RunConfig run_config_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "algorithm", "dim", "norm", "domain", "grid_k", "eval_k", "x1",
        "n",         "beta", "a",    "selector", "seed",  "slack",  "tie_tol",
        "threads"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::invalid_argument("unknown config key: " + it.key());
    RunConfig c;
    c.algorithm = j.value("algorithm", std::string("greedy"));
    c.dimension = j.value("dim", 0);
    if (j.contains("norm")) c.norm = norm_from_string(j["norm"].get<std::string>());
    c.domain_type = j.value("domain", std::string("hypercube"));
    c.grid_k = j.value("grid_k", -1);
    if (j.contains("eval_k")) {
        c.eval_k = j["eval_k"].get<int>();
        c.eval_set_given = true;
    }
    c.x1 = j.value("x1", std::string("center"));
    c.n_max = j.value("n", 0);
    if (j.contains("beta")) {
        if (j["beta"].is_string()) {
            if (j["beta"].get<std::string>() != "auto")
                throw std::invalid_argument("beta must be a number or \"auto\"");
            c.beta_auto = true;
        } else {
            c.beta = j["beta"].get<double>();
        }
    }
    if (j.contains("a")) c.a = j["a"].get<double>();
    if (j.contains("selector")) {
        c.selector = j["selector"].get<std::string>();
        c.selector_given = true;
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    c.add_cr_slack = j.value("slack", false);
    c.tie_tol = j.value("tie_tol", 0.0);
    c.threads = j.value("threads", 0);
    return c;
}

inline void validate_config(const RunConfig& c) {
    const std::string& alg = c.algorithm;
    const bool is_grid = alg == "greedy" || alg == "relaxed" || alg == "boundary-phobic";
    if (!is_grid && alg != "vdc" && alg != "interval-exact")
        throw std::invalid_argument("unknown algorithm: " + alg);
    if (c.n_max < 1) throw std::invalid_argument("n_max must be >= 1 (pass --n)");
    if (is_grid) {
        if (c.dimension < 1) throw std::invalid_argument("grid algorithms need --dim >= 1");
        if (c.grid_k < 0) throw std::invalid_argument("grid algorithms need --grid-k >= 0");
        if (c.domain_type != "hypercube" && c.domain_type != "ball")
            throw std::invalid_argument("domain must be hypercube or ball");
        if (c.domain_type == "ball" && c.grid_k < 1)
            throw std::invalid_argument("ball domain needs --grid-k >= 1 so the center is a candidate");
        if (c.eval_set_given && c.eval_k < 0)
            throw std::invalid_argument("--eval-k must be >= 0");
        if (c.add_cr_slack && c.domain_type != "hypercube")
            throw std::invalid_argument("--slack is available for hypercube domains only");
    } else {
        if (c.dimension != 0 && c.dimension != 1)
            throw std::invalid_argument(alg + " is one-dimensional");
        if (c.grid_k >= 0 || c.eval_set_given)
            throw std::invalid_argument("grid levels do not apply to " + alg);
        if (c.add_cr_slack) throw std::invalid_argument("--slack does not apply to " + alg);
    }
    if (c.beta && alg != "boundary-phobic")
        throw std::invalid_argument("--beta applies to boundary-phobic only");
    if (c.beta_auto && alg != "boundary-phobic")
        throw std::invalid_argument("--beta applies to boundary-phobic only");
    if (alg == "boundary-phobic" && c.beta && !(*c.beta > 0))
        throw std::invalid_argument("beta must be positive");
    if (c.a && alg != "relaxed") throw std::invalid_argument("--a applies to relaxed only");
    if (c.selector_given && alg != "relaxed")
        throw std::invalid_argument("--selector applies to relaxed only");
    if (alg == "relaxed" && c.selector != "argmax" && c.selector != "ball")
        throw std::invalid_argument("selector must be argmax or ball");
    if (c.seed && !(alg == "relaxed" && c.selector == "ball"))
        throw std::invalid_argument("--seed applies to the relaxed ball selector only");
    if (alg == "vdc" && c.x1 != "center")
        throw std::invalid_argument("--x1 does not apply to vdc");
}

inline RunOutput execute_run(const RunConfig& cfg) {
    validate_config(cfg);
    RunOutput out;
    out.config = detail::config_to_json(cfg);

    if (cfg.algorithm == "vdc") {
        out.run = van_der_corput(cfg.n_max);
        return out;
    }
    if (cfg.algorithm == "interval-exact") {
        std::optional<double> x1;
        if (cfg.x1 != "center") x1 = detail::parse_point(cfg.x1).at(0);
        out.run = greedy_packing_interval(0.0, 1.0, x1, cfg.n_max);
        return out;
    }

    const int d = cfg.dimension;
    Hypercube grid_box;
    Domain domain;
    if (cfg.domain_type == "hypercube") {
        grid_box = Hypercube{Point(d, 0.0), Point(d, 1.0)};
        domain = grid_box;
    } else {
        grid_box = Hypercube{Point(d, -1.0), Point(d, 1.0)};
        domain = Ball{Point(d, 0.0), 1.0};
    }

    GreedyConfig base;
    base.domain = domain;
    base.norm = cfg.norm;
    base.n_max = cfg.n_max;
    base.tie_tol = cfg.tie_tol;
    base.threads = cfg.threads;
    base.candidates = detail::filter_to_domain(dyadic_grid(grid_box, cfg.grid_k), domain);
    if (cfg.x1 != "center") base.x1 = detail::parse_point(cfg.x1);
    out.candidate_set = base.candidates;

    const int eval_k = cfg.eval_set_given ? cfg.eval_k : cfg.grid_k + 2;
    TraceSpec tspec;
    tspec.eval = detail::filter_to_domain(dyadic_grid(grid_box, eval_k), domain);
    if (cfg.add_cr_slack) tspec.cr_slack = dyadic_grid_cover_radius(grid_box, eval_k, cfg.norm);
    out.eval_set = tspec.eval;

    if (cfg.algorithm == "greedy") {
        out.run = greedy_packing(base, tspec);
    } else if (cfg.algorithm == "relaxed") {
        RelaxedConfig rc;
        rc.base = std::move(base);
        rc.schedule.a = cfg.a.value_or(1.0);
        rc.selector = cfg.selector == "ball" ? RelaxSelector::BallPerturbation
                                             : RelaxSelector::Argmax;
        rc.seed = cfg.seed.value_or(1);
        out.run = relaxed_greedy_packing(rc, tspec);
    } else {
        BoundaryPhobicConfig bc;
        bc.base = std::move(base);
        bc.beta = cfg.beta_auto ? beta_recommended(cfg.n_max, d)
                                : cfg.beta.value_or(std::numeric_limits<double>::infinity());
        if (cfg.beta_auto) {
            out.config["beta"] = bc.beta;
            if (!(bc.beta > 0))
                throw std::invalid_argument(
                    "recommended beta is not positive at this n_max; boundary avoidance "
                    "would not engage — pass an explicit --beta");
        }
        out.run = boundary_phobic_packing(bc, tspec);
    }
    return out;
}

/// The per-step relaxation floor implied by the run: greedy and boundary-free
/// selectors are exact (a = 1); boundary-phobic packing satisfies the step
/// inequality with a = 1/(1 + sqrt(d)/beta).
inline double effective_relaxation_floor(const RunConfig& cfg) {
    if (cfg.algorithm == "relaxed") return cfg.a.value_or(1.0);
    if (cfg.algorithm == "boundary-phobic") {
        const double beta = cfg.beta_auto
                                ? beta_recommended(cfg.n_max, cfg.dimension)
                                : cfg.beta.value_or(std::numeric_limits<double>::infinity());
        if (!std::isfinite(beta)) return 1.0;
        return 1.0 / (1.0 + std::sqrt(static_cast<double>(cfg.dimension)) / beta);
    }
    return 1.0;
}

inline const std::vector<std::string>& certificate_names() {
    static const std::vector<std::string> names = {"schedule2d", "schedule4d", "mr-bound",
                                                   "fill-lower", "sep-upper", "pigeonhole",
                                                   "checkerboard", "sandwich"};
    return names;
}

/// Trace-internal pigeonhole check SR(X_n) <= CR(X_{n-1}) along one run.
inline CertificateReport certify_pigeonhole_trace(const MetricsTrace& trace, double slack = 0) {
    CertificateReport rep;
    rep.name = "pigeonhole";
    for (std::size_t i = 1; i < trace.rows.size(); ++i) {
        const auto& prev = trace.rows[i - 1];
        const auto& cur = trace.rows[i];
        if (cur.n != prev.n + 1) continue;
        const double rhs = prev.cr_upper + slack;
        rep.rows.push_back({cur.n, cur.sr, rhs, cur.sr <= rhs});
    }
    return detail::finalize_report(std::move(rep));
}

inline CertificateReport run_certificate(const std::string& name, const RunConfig& cfg,
                                         const RunOutput& out) {
    const RunResult& run = out.run;
    if (name == "schedule2d" || name == "schedule4d") {
        const int d = name == "schedule2d" ? 2 : 4;
        if (run.design.dimension != d)
            throw std::invalid_argument(name + " applies to dimension " + std::to_string(d));
        return certify_against_schedule(run.trace, d);
    }
    if (name == "mr-bound")
        return certify_mesh_ratio_bound(run.trace, effective_relaxation_floor(cfg));
    if (name == "fill-lower")
        return certify_fill_lower_bound(run.trace, run.design.domain, run.design.norm);
    if (name == "sep-upper") {
        if (run.design.points.size() < 2)
            throw std::invalid_argument("sep-upper needs at least 2 points");
        Design boxed = run.design;
        if (std::holds_alternative<Ball>(boxed.domain)) {
            // pack into the enclosing box; still a valid upper bound
            const auto& b = std::get<Ball>(boxed.domain);
            Hypercube h;
            for (std::size_t i = 0; i < b.center.size(); ++i) {
                h.lower.push_back(b.center[i] - b.radius);
                h.upper.push_back(b.center[i] + b.radius);
            }
            boxed.domain = h;
        }
        return certify_separation_upper_bound(boxed, 2);
    }
    if (name == "pigeonhole") return certify_pigeonhole_trace(run.trace);
    if (name == "checkerboard") {
        if (run.design.dimension != 4)
            throw std::invalid_argument("checkerboard applies to dimension 4");
        int m = -1;
        while (cycle_start_4d(m + 1) + fill_count_4d(m + 1) <=
               static_cast<long long>(run.design.points.size()))
            ++m;
        if (m < 0)
            throw std::invalid_argument("run too short for a checkerboard stage (needs n >= 41)");
        Design trunc = run.design;
        trunc.points.resize(static_cast<std::size_t>(cycle_start_4d(m) + fill_count_4d(m)));
        return certify_d4_checkerboard(trunc, m);
    }
    if (name == "sandwich") {
        if (!out.candidate_set || !out.eval_set)
            throw std::invalid_argument("sandwich needs a grid run with an eval reference set");
        const int eval_k = cfg.eval_set_given ? cfg.eval_k : cfg.grid_k + 2;
        if (eval_k < cfg.grid_k)
            throw std::invalid_argument("sandwich needs eval_k >= grid_k (nested references)");
        return certify_fill_sandwich(run.design.points, run.design.norm, *out.candidate_set,
                                     *out.eval_set);
    }
    throw std::invalid_argument("unknown certificate: " + name);
}

inline std::vector<CertificateReport> run_certificates(const std::vector<std::string>& names,
                                                       const RunConfig& cfg,
                                                       const RunOutput& out) {
    for (const auto& n : names) {
        const auto& known = certificate_names();
        if (std::find(known.begin(), known.end(), n) == known.end())
            throw std::invalid_argument("unknown certificate: " + n);
    }
    std::vector<CertificateReport> reps;
    reps.reserve(names.size());
    for (const auto& n : names) reps.push_back(run_certificate(n, cfg, out));
    return reps;
}

struct CompareResult {
    std::string csv;
    double max_dsr = 0, max_dcr = 0, max_dmr = 0;
};

/// Align two runs row-by-row and report per-n metrics plus absolute
/// differences. Runs must share n_max so the traces align.
inline CompareResult compare_runs(const RunConfig& a, const RunConfig& b) {
    if (a.n_max != b.n_max) throw std::invalid_argument("compare: runs must share n_max");
    const RunOutput ra = execute_run(a);
    const RunOutput rb = execute_run(b);
    const auto& ta = ra.run.trace.rows;
    const auto& tb = rb.run.trace.rows;
    if (ta.size() != tb.size()) throw std::invalid_argument("compare: traces have different lengths");
    CompareResult res;
    std::ostringstream os;
    os << "n,sr_a,cr_a,mr_a,sr_b,cr_b,mr_b,abs_dsr,abs_dcr,abs_dmr\n";
    for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i].n != tb[i].n) throw std::invalid_argument("compare: traces misaligned");
        const double dsr = std::abs(ta[i].sr - tb[i].sr);
        const double dcr = std::abs(ta[i].cr_lower - tb[i].cr_lower);
        const double dmr = std::abs(ta[i].mr_lower - tb[i].mr_lower);
        res.max_dsr = std::max(res.max_dsr, dsr);
        res.max_dcr = std::max(res.max_dcr, dcr);
        res.max_dmr = std::max(res.max_dmr, dmr);
        os << ta[i].n << ',' << detail::format_g17(ta[i].sr) << ','
           << detail::format_g17(ta[i].cr_lower) << ',' << detail::format_g17(ta[i].mr_lower)
           << ',' << detail::format_g17(tb[i].sr) << ',' << detail::format_g17(tb[i].cr_lower)
           << ',' << detail::format_g17(tb[i].mr_lower) << ',' << detail::format_g17(dsr) << ','
           << detail::format_g17(dcr) << ',' << detail::format_g17(dmr) << '\n';
    }
    os << "max,,,,,,," << detail::format_g17(res.max_dsr) << ',' << detail::format_g17(res.max_dcr)
       << ',' << detail::format_g17(res.max_dmr) << '\n';
    res.csv = os.str();
    return res;
}

/// Closed-form schedule table for d = 2 or 4 over [n_lo, n_hi].
inline std::string schedule_table(int d, long long n_lo, long long n_hi) {
    if (d != 2 && d != 4) throw std::invalid_argument("schedule table exists for d=2, d=4");
    const long long n_min = d == 2 ? 5 : 17;
    if (n_lo < n_min)
        throw std::invalid_argument("schedule starts at n=" + std::to_string(n_min));
    if (n_hi < n_lo) throw std::invalid_argument("empty range");
    std::ostringstream os;
    os << "n,phase,sr,cr,mr\n";
    for (long long n = n_lo; n <= n_hi; ++n) {
        const PredictedRow p = d == 2 ? predicted_metrics_2d(n) : predicted_metrics_4d(n);
        os << n << ',' << to_string(p.phase) << ',' << detail::format_g17(p.sr) << ','
           << detail::format_g17(p.cr) << ',' << detail::format_g17(p.mr) << '\n';
    }
    return os.str();
}

}  // namespace spacefill
