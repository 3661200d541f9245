#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <spacefill.hpp>
#include <spacefill/runner.hpp>

using namespace spacefill;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

const std::string kGoldenTraceCsv =
    "n,sr,cr_lower,cr_upper,mr_lower,mr_upper\n"
    "2,0.25,0.5,0.5,2,2\n"
    "3,0.25,0.25,0.25,1,1\n"
    "4,0.125,0.25,0.25,2,2\n"
    "5,0.125,0.125,0.125,1,1\n"
    "6,0.0625,0.125,0.125,2,2\n";

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "spacefill_io_cli";
    fs::create_directories(dir);
    return dir;
}

struct CmdResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = "'" + std::string(SPACEFILL_CLI_PATH) + "' " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult res;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
    const int status = ::pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("trace csv: golden file for the exact interval run") {
    const RunResult run = greedy_packing_interval(0.0, 1.0, std::nullopt, 6);
    CHECK(trace_to_csv(run.trace) == kGoldenTraceCsv);
    const MetricsTrace back = parse_trace_csv(kGoldenTraceCsv);
    REQUIRE(back.rows.size() == run.trace.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rows[i].n == run.trace.rows[i].n);
        CHECK(back.rows[i].sr == run.trace.rows[i].sr);
        CHECK(back.rows[i].cr_upper == run.trace.rows[i].cr_upper);
    }
}

TEST_CASE("trace csv round-trips awkward doubles exactly") {
    MetricsTrace t;
    t.rows.push_back(make_trace_row(2, 1.0 / 3, std::sqrt(2.0), std::sqrt(2.0) + 1e-15));
    t.rows.push_back(make_trace_row(3, 7.234e-17, 0.1, 0.30000000000000004));
    t.rows.push_back(make_trace_row(4, 1e308, 1e308, 1e308));
    const MetricsTrace back = parse_trace_csv(trace_to_csv(t));
    REQUIRE(back.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.rows[i].n == t.rows[i].n);
        CHECK(back.rows[i].sr == t.rows[i].sr);
        CHECK(back.rows[i].cr_lower == t.rows[i].cr_lower);
        CHECK(back.rows[i].cr_upper == t.rows[i].cr_upper);
        CHECK(back.rows[i].mr_lower == t.rows[i].mr_lower);
        CHECK(back.rows[i].mr_upper == t.rows[i].mr_upper);
    }
}

TEST_CASE("trace csv parser rejects malformed input") {
    CHECK_THROWS_AS(parse_trace_csv(std::string("")), std::invalid_argument);
    CHECK_THROWS_AS(parse_trace_csv(std::string("n,sr\n1,2\n")), std::invalid_argument);
    CHECK_THROWS_AS(
        parse_trace_csv(std::string("n,sr,cr_lower,cr_upper,mr_lower,mr_upper\n2,0.1,0.2\n")),
        std::invalid_argument);
    CHECK_THROWS(
        parse_trace_csv(std::string("n,sr,cr_lower,cr_upper,mr_lower,mr_upper\nx,a,b,c,d,e\n")));
    // carriage returns are tolerated, blank lines skipped
    const MetricsTrace t = parse_trace_csv(
        std::string("n,sr,cr_lower,cr_upper,mr_lower,mr_upper\r\n\r\n2,0.25,0.5,0.5,2,2\r\n"));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].cr_upper == 0.5);
}

TEST_CASE("design json round-trips every domain kind") {
    RunMetadata meta;
    meta.algorithm = "relaxed";
    meta.prng = "mt19937_64";
    meta.seed = 42;
    meta.achieved_n = 3;
    meta.exhausted_candidates = true;

    const std::vector<Domain> domains = {
        Domain(Hypercube{{0.0, -1.5}, {1.0, 2.5}}),
        Domain(Ball{{0.1, 0.2}, 3.0}),
        Domain(FiniteSet{{{0.1, 0.9}, {0.3, 0.3}, {1.0 / 3, 0.7}}}),
    };
    for (const Domain& dom : domains) {
        Design d;
        d.dimension = 2;
        d.norm = Norm::Linf;
        d.domain = dom;
        d.points = {{0.1, 0.9}, {0.3, 0.3}, {1.0 / 3, 0.7}};

        const nlohmann::json j = design_to_json(d, meta, nlohmann::json{{"n", 3}});
        // through text and back: nlohmann prints doubles round-trip exactly
        const DesignFile back = design_from_json(nlohmann::json::parse(j.dump()));
        CHECK(back.design.dimension == 2);
        CHECK(back.design.norm == Norm::Linf);
        CHECK(back.design.domain.index() == dom.index());
        CHECK(back.design.points == d.points);
        CHECK(back.meta.algorithm == "relaxed");
        CHECK(back.meta.prng == "mt19937_64");
        CHECK(back.meta.seed == 42);
        CHECK(back.meta.achieved_n == 3);
        CHECK(back.meta.exhausted_candidates);
        CHECK(back.config.at("n") == 3);
    }

    const Domain ball = Ball{{0.1, 0.2}, 3.0};
    const DesignFile bf =
        design_from_json(design_to_json(Design{2, Norm::L2, ball, {{0.1, 0.2}}}, meta));
    const auto* b = std::get_if<Ball>(&bf.design.domain);
    REQUIRE(b != nullptr);
    CHECK((b->center == Point{0.1, 0.2}));
    CHECK(b->radius == 3.0);
}

TEST_CASE("design json rejects bad payloads") {
    CHECK_THROWS(design_from_json(nlohmann::json::parse(R"({"dimension":2})")));
    CHECK_THROWS(design_from_json(nlohmann::json::parse(
        R"({"dimension":2,"norm":"l9","domain":{"type":"hypercube","lower":[0,0],"upper":[1,1]},"points":[[0.5,0.5]]})")));
    CHECK_THROWS(design_from_json(nlohmann::json::parse(
        R"({"dimension":2,"norm":"l2","domain":{"type":"wedge"},"points":[[0.5,0.5]]})")));
}

TEST_CASE("certificate reports serialize with stable keys") {
    MetricsTrace t;
    t.rows.push_back(make_trace_row(2, 0.25, 0.5, 0.5));
    const CertificateReport rep = certify_mesh_ratio_bound(t, 1.0);
    const nlohmann::json j = report_to_json(rep);
    CHECK(j.at("name") == "mr-bound");
    CHECK(j.at("status") == "pass");
    CHECK(j.at("overall") == true);
    REQUIRE(j.at("rows").size() == 1);
    CHECK(j["rows"][0].at("n") == 2);
    CHECK(j["rows"][0].at("pass") == true);
    CHECK(j["rows"][0].at("lhs") == 2.0);

    CertificateReport noted = rep;
    noted.note = "hello";
    CHECK(report_to_json(noted).at("note") == "hello");
    CHECK_FALSE(j.contains("note"));
}

TEST_CASE("run configs parse from json and round-trip") {
    const RunConfig c = run_config_from_json(nlohmann::json::parse(
        R"({"algorithm":"boundary-phobic","dim":2,"norm":"linf","grid_k":3,"eval_k":5,
            "x1":"0.5,0.5","n":10,"beta":"auto","tie_tol":0.0,"threads":2})"));
    CHECK(c.algorithm == "boundary-phobic");
    CHECK(c.dimension == 2);
    CHECK(c.norm == Norm::Linf);
    CHECK(c.grid_k == 3);
    CHECK(c.eval_k == 5);
    CHECK(c.eval_set_given);
    CHECK(c.x1 == "0.5,0.5");
    CHECK(c.n_max == 10);
    CHECK(c.beta_auto);
    CHECK_FALSE(c.beta.has_value());
    CHECK(c.threads == 2);
    validate_config(c);

    const RunConfig back = run_config_from_json(detail::config_to_json(c));
    CHECK(back.algorithm == c.algorithm);
    CHECK(back.dimension == c.dimension);
    CHECK(back.norm == c.norm);
    CHECK(back.grid_k == c.grid_k);
    CHECK(back.eval_k == c.eval_k);
    CHECK(back.x1 == c.x1);
    CHECK(back.n_max == c.n_max);
    CHECK(back.beta_auto == c.beta_auto);

    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"bogus":1})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(
                        R"({"algorithm":"greedy","dim":2,"grid_k":3,"n":5,"beta":"soon"})")),
                    std::invalid_argument);
}

TEST_CASE("config validation rejects cross-algorithm flags") {
    RunConfig c;
    c.algorithm = "greedy";
    c.dimension = 2;
    c.grid_k = 3;
    c.n_max = 10;
    validate_config(c);

    RunConfig bad = c;
    bad.a = 0.5;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = c;
    bad.beta = 4.0;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = c;
    bad.seed = 7;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad = c;
    bad.algorithm = "vdc";
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);  // grid flags on a d=1 run
    RunConfig vdc;
    vdc.algorithm = "vdc";
    vdc.n_max = 8;
    validate_config(vdc);
    vdc.dimension = 3;
    CHECK_THROWS_AS(validate_config(vdc), std::invalid_argument);
}

TEST_CASE("cli: generate writes the golden interval trace and a loadable design") {
    const fs::path dir = scratch_dir();
    const fs::path dpath = dir / "interval_design.json";
    const fs::path tpath = dir / "interval_trace.csv";
    const CmdResult res = run_cli("generate --alg interval-exact --n 6 --out-design '" +
                                  dpath.string() + "' --out-trace '" + tpath.string() + "'");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "generated n=6"));
    CHECK(slurp(tpath) == kGoldenTraceCsv);

    const DesignFile df = design_from_json(nlohmann::json::parse(slurp(dpath)));
    CHECK(df.meta.algorithm == "interval-exact");
    REQUIRE(df.design.points.size() == 6);
    CHECK(df.design.points[0] == Point{0.5});
    CHECK(df.design.points[5] == Point{0.125});
    CHECK(df.config.at("n") == 6);
}

TEST_CASE("cli: verify exit codes reflect certificate outcomes") {
    const fs::path report = scratch_dir() / "verify_report.json";
    const CmdResult ok = run_cli(
        "verify --alg greedy --dim 2 --grid-k 4 --eval-k 6 --n 81 "
        "--cert schedule2d,mr-bound,pigeonhole --report '" +
        report.string() + "'");
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.output, "schedule2d: pass"));
    CHECK(contains(ok.output, "mr-bound: pass"));
    CHECK(contains(ok.output, "pigeonhole: pass"));
    const nlohmann::json jr = nlohmann::json::parse(slurp(report));
    REQUIRE(jr.is_array());
    REQUIRE(jr.size() == 3);
    CHECK(jr[0].at("name") == "schedule2d");
    CHECK(jr[0].at("status") == "pass");

    // a van der corput run is not a relaxed packing; its mesh ratio breaks 2/a
    const CmdResult fail = run_cli("verify --alg vdc --n 64 --cert mr-bound");
    CHECK(fail.exit_code == 1);
    CHECK(contains(fail.output, "mr-bound: fail"));

    const CmdResult usage = run_cli("verify --alg vdc --n 8 --cert nonsense");
    CHECK(usage.exit_code == 2);
    CHECK(contains(usage.output, "error:"));
}

TEST_CASE("cli: schedule table") {
    const CmdResult ok = run_cli("schedule --dim 2 --from 5 --to 13 --out -");
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.output, "n,phase,sr,cr,mr"));
    CHECK(contains(ok.output, "5,cycle-start,"));
    CHECK(contains(ok.output, "9,grid-complete,"));
    CHECK(contains(ok.output, "13,cycle-start,"));

    CHECK(run_cli("schedule --dim 2 --from 4 --to 10").exit_code == 2);
    CHECK(run_cli("schedule --dim 3 --from 5 --to 10").exit_code == 2);
}

TEST_CASE("cli: compare aligns identical runs to zero difference") {
    const fs::path cfg = scratch_dir() / "cmp_cfg.json";
    write_text_file(cfg.string(), R"({"algorithm":"greedy","dim":2,"grid_k":3,"n":20})");
    const CmdResult res =
        run_cli("compare --a '@" + cfg.string() + "' --b '@" + cfg.string() + "' --out -");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "n,sr_a,cr_a,mr_a,sr_b,cr_b,mr_b,abs_dsr,abs_dcr,abs_dmr"));
    CHECK(contains(res.output, "max,,,,,,,0,0,0"));
}

TEST_CASE("cli: bad invocations exit 2, help exits 0") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("generate --alg greedy --dim 2 --n 10").exit_code == 2);  // missing grid
    const CmdResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.output, "generate"));
    CHECK(contains(help.output, "verify"));
}
