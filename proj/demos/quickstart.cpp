// Minimal tour: greedy packing on a dyadic grid of the unit square,
// then the exact one-dimensional baseline sequence.
#include <iostream>

#include <spacefill.hpp>

using namespace spacefill;

int main() {
    Hypercube square{{0, 0}, {1, 1}};
    GreedyConfig cfg;
    cfg.domain = square;
    cfg.candidates = dyadic_grid(square, 4);
    cfg.norm = Norm::L2;
    cfg.n_max = 25;

    const RunResult run = greedy_packing(cfg);
    std::cout << "greedy on the unit square, n=" << run.meta.achieved_n << "\n";
    std::cout << "n,sr,cr,mr\n";
    for (const auto& row : run.trace.rows)
        std::cout << row.n << "," << row.sr << "," << row.cr_upper << "," << row.mr_upper << "\n";

    const RunResult vdc = van_der_corput(8);
    std::cout << "\nvan der corput, first 8 points:";
    for (const auto& p : vdc.design.points) std::cout << " " << p[0];
    std::cout << "\n";
    return 0;
}
