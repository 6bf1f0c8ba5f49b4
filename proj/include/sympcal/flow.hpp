#pragma once

#include "sympcal/hamiltonian.hpp"
#include "sympcal/index_theory.hpp"

namespace sympcal {

struct FlowOptions {
    int steps_per_unit = 1024;
    double blowup_radius = 1e6;
};

// Classical RK4 on zdot = -J0 grad H(t, z); fixed step, deterministic.
Vec flow_point(const HamiltonianBase& h, const Vec& z0, double t0, double t1,
               const FlowOptions& opt = {});

struct FlowJac {
    Vec z;
    Mat jac;
};

// Trajectory plus the fundamental solution of the variational equation
// Jdot = -J0 Hess(t, z(t)) J.
FlowJac flow_with_jacobian(const HamiltonianBase& h, const Vec& z0, double t0, double t1,
                           const FlowOptions& opt = {});

struct Trajectory {
    double t0 = 0.0, t1 = 1.0;
    std::vector<double> times;
    std::vector<Vec> z;
    std::vector<Mat> jac;  // empty unless requested
};

Trajectory flow_trajectory(const HamiltonianBase& h, const Vec& z0, double t0, double t1,
                           bool with_jacobian, const FlowOptions& opt = {});

// Step-halving error estimate for the endpoint of flow_point.
double flow_error_estimate(const HamiltonianBase& h, const Vec& z0, double t0, double t1,
                           const FlowOptions& opt = {});

// Action functional 1/2 int <J0 zdot, z> - int H_t(z) over a stored
// one-periodic trajectory (composite Simpson; the step count must be even).
double action_of_trajectory(const HamiltonianBase& h, const Trajectory& traj);

// Action of the orbit through z0 (must close up to tol over [0,1]).
double action(const HamiltonianBase& h, const Vec& z0, double closure_tol = 1e-6,
              const FlowOptions& opt = {});

// The linearized path along a trajectory as a SymplecticPath on [0,1]
// (thinned to at most max_samples+1 samples).
SymplecticPath linearized_path(const Trajectory& traj, int max_samples = 2048);

} // namespace sympcal
