// Certify a full greedy run on [0,1]^2 against the closed-form schedule and
// the universal mesh-ratio bound.
#include <iostream>

#include <spacefill.hpp>

using namespace spacefill;

int main() {
    RunConfig cfg;
    cfg.algorithm = "greedy";
    cfg.dimension = 2;
    cfg.grid_k = 5;
    cfg.eval_k = 7;
    cfg.eval_set_given = true;
    cfg.n_max = 145;

    const RunOutput out = execute_run(cfg);
    for (const auto& name : {"schedule2d", "mr-bound", "pigeonhole", "sandwich"}) {
        const CertificateReport rep = run_certificate(name, cfg, out);
        std::cout << rep.name << ": " << to_string(rep.status) << " (" << rep.rows.size()
                  << " rows)\n";
    }
    return 0;
}
