#pragma once

#include "sympcal/flow.hpp"
#include "sympcal/index_theory.hpp"

namespace sympcal {

struct PeriodicOrbit {
    Vec z0;
    int k = 1;
    double action = 0.0;
    Mat monodromy;
    IndexReport index;
    bool index_available = false;
    bool simple = true;
    int base_period = 1;  // smallest divisor j of k with phi^j(z0) = z0
    double closure = 0.0; // |phi^k(z0) - z0|
};

struct SeedGrid {
    double extent = 2.0;   // per-axis range [-extent, extent]
    int per_axis = 9;
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 50;
    double certify = 1e-9;      // final closure test factor
    double pair_tol = 1e-6;     // orbit deduplication
};

struct OrbitSearch {
    std::vector<PeriodicOrbit> orbits;
    int seeds = 0;
    int converged = 0;
    int newton_failures = 0;
};

// Damped Newton on phi^k(z) - z with the variational Jacobian; seeds on a
// full 2n-dimensional grid, deduplicated orbit-wise, deterministic under any
// thread count.
OrbitSearch find_periodic_points(const HamPtr& h, int k, const SeedGrid& grid,
                                 const NewtonOptions& newton = {}, const FlowOptions& flow = {},
                                 int threads = 1, bool with_index = true);

} // namespace sympcal
