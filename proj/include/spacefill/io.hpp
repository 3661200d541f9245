#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sequences.hpp"
#include "theory.hpp"

namespace spacefill {

inline nlohmann::json domain_to_json(const Domain& domain) {
    nlohmann::json j;
    if (const auto* h = std::get_if<Hypercube>(&domain)) {
        j["type"] = "hypercube";
        j["lower"] = h->lower;
        j["upper"] = h->upper;
    } else if (const auto* b = std::get_if<Ball>(&domain)) {
        j["type"] = "ball";
        j["center"] = b->center;
        j["radius"] = b->radius;
    } else {
        const auto& f = std::get<FiniteSet>(domain);
        j["type"] = "finite";
        j["points"] = f.points;
    }
    return j;
}

inline Domain domain_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    Domain domain;
    if (type == "hypercube") {
        Hypercube h;
        h.lower = j.at("lower").get<Point>();
        h.upper = j.at("upper").get<Point>();
        domain = h;
    } else if (type == "ball") {
        Ball b;
        b.center = j.at("center").get<Point>();
        b.radius = j.at("radius").get<double>();
        domain = b;
    } else if (type == "finite") {
        FiniteSet f;
        f.points = j.at("points").get<std::vector<Point>>();
        domain = f;
    } else {
        throw std::invalid_argument("unknown domain type: " + type);
    }
    validate_domain(domain);
    return domain;
}

inline nlohmann::json meta_to_json(const RunMetadata& meta) {
    nlohmann::json j;
    j["algorithm"] = meta.algorithm;
    j["tie_break"] = meta.tie_break;
    if (!meta.prng.empty()) {
        j["prng"] = meta.prng;
        j["seed"] = meta.seed;
    }
    j["achieved_n"] = meta.achieved_n;
    j["exhausted_candidates"] = meta.exhausted_candidates;
    return j;
}

inline nlohmann::json design_to_json(const Design& design, const RunMetadata& meta,
                                     const nlohmann::json& config = nlohmann::json::object()) {
    nlohmann::json j;
    j["dimension"] = design.dimension;
    j["norm"] = to_string(design.norm);
    j["domain"] = domain_to_json(design.domain);
    j["algorithm"] = meta.algorithm;
    j["meta"] = meta_to_json(meta);
    j["config"] = config;
    j["points"] = design.points;
    return j;
}

struct DesignFile {
    Design design;
    RunMetadata meta;
    nlohmann::json config;
};

inline DesignFile design_from_json(const nlohmann::json& j) {
    DesignFile out;
    out.design.dimension = j.at("dimension").get<int>();
    out.design.norm = norm_from_string(j.at("norm").get<std::string>());
    out.design.domain = domain_from_json(j.at("domain"));
    out.design.points = j.at("points").get<std::vector<Point>>();
    if (j.contains("meta")) {
        const auto& m = j["meta"];
        out.meta.algorithm = m.value("algorithm", std::string());
        out.meta.tie_break = m.value("tie_break", std::string());
        out.meta.prng = m.value("prng", std::string());
        out.meta.seed = m.value("seed", std::uint64_t{0});
        out.meta.achieved_n = m.value("achieved_n", 0);
        out.meta.exhausted_candidates = m.value("exhausted_candidates", false);
    } else if (j.contains("algorithm")) {
        out.meta.algorithm = j["algorithm"].get<std::string>();
    }
    if (j.contains("config")) out.config = j["config"];
    validate_design(out.design);
    return out;
}

namespace detail {

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_trace_csv(const MetricsTrace& trace, std::ostream& os) {
    os << "n,sr,cr_lower,cr_upper,mr_lower,mr_upper\n";
    for (const auto& r : trace.rows) {
        os << r.n << ',' << detail::format_g17(r.sr) << ',' << detail::format_g17(r.cr_lower)
           << ',' << detail::format_g17(r.cr_upper) << ',' << detail::format_g17(r.mr_lower)
           << ',' << detail::format_g17(r.mr_upper) << '\n';
    }
}

inline std::string trace_to_csv(const MetricsTrace& trace) {
    std::ostringstream os;
    write_trace_csv(trace, os);
    return os.str();
}

inline MetricsTrace parse_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("empty trace csv");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "n,sr,cr_lower,cr_upper,mr_lower,mr_upper")
        throw std::invalid_argument("bad trace csv header: " + line);
    MetricsTrace trace;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) throw std::invalid_argument("bad trace csv row: " + line);
        TraceRow r;
        r.n = std::stoi(cells[0]);
        r.sr = std::stod(cells[1]);
        r.cr_lower = std::stod(cells[2]);
        r.cr_upper = std::stod(cells[3]);
        r.mr_lower = std::stod(cells[4]);
        r.mr_upper = std::stod(cells[5]);
        trace.rows.push_back(r);
    }
    return trace;
}

inline MetricsTrace parse_trace_csv(const std::string& text) {
    std::istringstream is(text);
    return parse_trace_csv(is);
}

inline nlohmann::json report_to_json(const CertificateReport& rep) {
    nlohmann::json j;
    j["name"] = rep.name;
    j["status"] = to_string(rep.status);
    j["overall"] = rep.overall;
    if (!rep.note.empty()) j["note"] = rep.note;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rep.rows)
        j["rows"].push_back({{"n", r.n}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"pass", r.pass}});
    return j;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace spacefill
