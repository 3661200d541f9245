#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <spacefill.hpp>

namespace {

using namespace spacefill;

struct RunFlags {
    std::string alg = "greedy";
    int dim = 0;
    std::string norm = "l2";
    std::string domain = "hypercube";
    int grid_k = -1;
    int eval_k = -1;
    std::string x1 = "center";
    int n = 0;
    std::string beta;  // number or "auto"
    double a = 1.0;
    std::string selector = "argmax";
    std::uint64_t seed = 1;
    bool slack = false;
    double tie_tol = 0;
    int threads = 0;

    CLI::Option* p_eval = nullptr;
    CLI::Option* p_beta = nullptr;
    CLI::Option* p_a = nullptr;
    CLI::Option* p_selector = nullptr;
    CLI::Option* p_seed = nullptr;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--alg", f.alg,
                    "algorithm: greedy | relaxed | boundary-phobic | vdc | interval-exact")
        ->capture_default_str();
    cmd->add_option("--dim", f.dim, "dimension (grid algorithms)");
    cmd->add_option("--norm", f.norm, "norm: l1 | l2 | linf")->capture_default_str();
    cmd->add_option("--domain", f.domain, "domain: hypercube ([0,1]^d) | ball (unit ball)")
        ->capture_default_str();
    cmd->add_option("--grid-k", f.grid_k, "dyadic candidate grid level");
    f.p_eval = cmd->add_option("--eval-k", f.eval_k,
                               "CR reference grid level (default: grid-k + 2)");
    cmd->add_option("--x1", f.x1, "first point: 'center' or comma-separated coordinates")
        ->capture_default_str();
    cmd->add_option("--n", f.n, "number of points to generate");
    f.p_beta = cmd->add_option("--beta", f.beta,
                               "boundary-avoidance weight (number or 'auto')");
    f.p_a = cmd->add_option("--a", f.a, "relaxation floor in (0,1] (relaxed)");
    f.p_selector =
        cmd->add_option("--selector", f.selector, "relaxed selector: argmax | ball");
    f.p_seed = cmd->add_option("--seed", f.seed, "PRNG seed (relaxed ball selector)");
    cmd->add_flag("--slack", f.slack,
                  "widen cr_upper by the reference grid cover radius (hypercube only)");
    cmd->add_option("--tie-tol", f.tie_tol, "treat argmax values within this as ties");
    cmd->add_option("--threads", f.threads,
                    "worker threads (0: SPACEFILL_THREADS env var, else all cores)");
}

RunConfig to_config(const RunFlags& f) {
    RunConfig c;
    c.algorithm = f.alg;
    c.dimension = f.dim;
    c.norm = norm_from_string(f.norm);
    c.domain_type = f.domain;
    c.grid_k = f.grid_k;
    if (f.p_eval->count() > 0) {
        c.eval_k = f.eval_k;
        c.eval_set_given = true;
    }
    c.x1 = f.x1;
    c.n_max = f.n;
    if (f.p_beta->count() > 0) {
        if (f.beta == "auto") {
            c.beta_auto = true;
        } else {
            std::size_t used = 0;
            c.beta = std::stod(f.beta, &used);
            if (used != f.beta.size()) throw std::invalid_argument("bad --beta value: " + f.beta);
        }
    }
    if (f.p_a->count() > 0) c.a = f.a;
    if (f.p_selector->count() > 0) {
        c.selector = f.selector;
        c.selector_given = true;
    }
    if (f.p_seed->count() > 0) c.seed = f.seed;
    c.add_cr_slack = f.slack;
    c.tie_tol = f.tie_tol;
    c.threads = f.threads;
    return c;
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-")
        std::cout << text;
    else
        write_text_file(path, text);
}

RunConfig config_from_arg(const std::string& arg) {
    std::string text = arg;
    if (!text.empty() && text.front() == '@') text = read_text_file(text.substr(1));
    return run_config_from_json(nlohmann::json::parse(text));
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string cell;
    while (std::getline(is, cell, ','))
        if (!cell.empty()) out.push_back(cell);
    return out;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"quasi-uniform designs by greedy packing, with metric traces and certificates"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "run an algorithm; write design JSON + trace CSV");
    RunFlags gen_flags;
    add_run_flags(gen, gen_flags);
    std::string out_design = "design.json";
    std::string out_trace = "trace.csv";
    gen->add_option("--out-design", out_design, "design JSON path ('-' for stdout)")
        ->capture_default_str();
    gen->add_option("--out-trace", out_trace, "trace CSV path ('-' for stdout)")
        ->capture_default_str();

    auto* ver = app.add_subcommand("verify", "run an algorithm and check certificates");
    RunFlags ver_flags;
    add_run_flags(ver, ver_flags);
    std::string certs;
    std::string report_path;
    ver->add_option("--cert", certs,
                    "comma-separated certificates: schedule2d, schedule4d, mr-bound, fill-lower, "
                    "sep-upper, pigeonhole, checkerboard, sandwich")
        ->required();
    ver->add_option("--report", report_path, "write JSON reports to this path");

    auto* cmp = app.add_subcommand("compare", "align two runs' traces and report differences");
    std::string cfg_a, cfg_b, cmp_out = "-";
    cmp->add_option("--a", cfg_a, "first run config: JSON string or @file")->required();
    cmp->add_option("--b", cfg_b, "second run config: JSON string or @file")->required();
    cmp->add_option("--out", cmp_out, "CSV output path ('-' for stdout)")->capture_default_str();

    auto* sch = app.add_subcommand("schedule", "print the closed-form d=2/d=4 schedule table");
    int sch_d = 2;
    long long sch_from = 0, sch_to = 0;
    std::string sch_out = "-";
    sch->add_option("--dim", sch_d, "dimension: 2 or 4")->required();
    sch->add_option("--from", sch_from, "first n")->required();
    sch->add_option("--to", sch_to, "last n")->required();
    sch->add_option("--out", sch_out, "CSV output path ('-' for stdout)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*gen) {
        const RunConfig cfg = to_config(gen_flags);
        const RunOutput out = execute_run(cfg);
        const nlohmann::json dj = design_to_json(out.run.design, out.run.meta, out.config);
        write_output(out_design, dj.dump(2) + "\n");
        write_output(out_trace, trace_to_csv(out.run.trace));
        std::cerr << "generated n=" << out.run.meta.achieved_n << " (" << out.run.meta.algorithm
                  << ")";
        if (!out.run.trace.rows.empty()) {
            const auto& last = out.run.trace.rows.back();
            std::cerr << "; final sr=" << last.sr << " cr=[" << last.cr_lower << ","
                      << last.cr_upper << "] mr<=" << last.mr_upper;
        }
        std::cerr << "\n";
        return 0;
    }

    if (*ver) {
        const RunConfig cfg = to_config(ver_flags);
        const std::vector<std::string> names = split_csv(certs);
        if (names.empty()) throw std::invalid_argument("--cert requires at least one name");
        const RunOutput out = execute_run(cfg);
        const auto reports = run_certificates(names, cfg, out);
        bool all_pass = true;
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& r : reports) {
            std::cout << r.name << ": " << to_string(r.status) << "\n";
            all_pass = all_pass && r.status == CertStatus::Pass;
            jr.push_back(report_to_json(r));
        }
        if (!report_path.empty()) write_output(report_path, jr.dump(2) + "\n");
        return all_pass ? 0 : 1;
    }

    if (*cmp) {
        const RunConfig a = config_from_arg(cfg_a);
        const RunConfig b = config_from_arg(cfg_b);
        const CompareResult res = compare_runs(a, b);
        write_output(cmp_out, res.csv);
        std::cerr << "max abs differences: sr=" << res.max_dsr << " cr=" << res.max_dcr
                  << " mr=" << res.max_dmr << "\n";
        return 0;
    }

    const std::string table = schedule_table(sch_d, sch_from, sch_to);
    write_output(sch_out, table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
