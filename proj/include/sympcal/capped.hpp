#pragma once

#include "sympcal/loops.hpp"

namespace sympcal {

// The two competing Hamiltonians of the cap construction, sharing the fixed
// points of H^{xk}: the sharp-composed H^{k (-) l} and the flattened
// H^{k (.) l} whose cap vanishes on the ball carrying the dynamics.
struct CappedPair {
    HamPtr h_kminus;      // (bar P^mu # H^{x(k-l)}) wedge H^{xl}
    HamPtr h_kodot;       // eta_{S0}(quadratic cap) wedge H^{xl}
    HamPtr zero_wedge;    // 0 wedge H^{xl}
    HamPtr h_iter_l;      // H^{xl}
    HamPtr pbar_sharp;    // bar P^mu # H^{x(k-l)}
    Mat bhat;
    double s0 = 0.0;
    double c_bound = 0.0;   // S0 + 2 + (k-l) ||h||_inf
    double h_sup = 0.0;
    bool h_sup_exact = true;
    double r0 = 0.0;
    long long k = 0, l = 0;
    int mu = 0;
};

CappedPair build_capped(const HamPtr& h, const QAtInfinity& q, const GeneratingLoop& loop,
                        const SmoothingProfile& profile, double r0);

// Flow of the flattened cap through z0: e^{-J0 eta'(H0) Bhat t} z0 with
// H0 = 1/2 <Bhat z0, z0> conserved.
Vec capped_flow_point(const Mat& bhat, double s0, const SmoothingProfile& profile, const Vec& z0,
                      double t);

// --- analysis constants -----------------------------------------------------

struct GrowthConstants {
    double c = 0.0;            // |X_K| <= c (1 + |z|)
    double c1 = 0.0;           // sup |X_{K - Khat}|
    double m1 = 0.0, m2 = 0.0; // sup ||Phi||, sup ||Phi^{-1}|| over [0,1]^2
    double c2 = 0.0;           // sup ||(I - Phi(1,s))^{-1} Phi(1,s)||
    double nonres_bound = 0.0; // M1 M2 (C2 + 1/sqrt2)(C1 + eps)
    double eps = 0.0;
};

// Certified (grid + Lipschitz padding) constants for the capped Hamiltonian;
// a singular I - Phi(1,s) raises NondegeneracyError.
GrowthConstants growth_constants(const CappedPair& pair, const QAtInfinity& q,
                                 const SmoothingProfile& profile, double eps = 0.1,
                                 int grid = 256);

} // namespace sympcal
