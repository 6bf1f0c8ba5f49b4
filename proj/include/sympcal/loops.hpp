#pragma once

#include <string>
#include <vector>

#include "sympcal/hamiltonian.hpp"
#include "sympcal/matrix_log.hpp"

namespace sympcal {

// Block data for the reduced quadratic form at infinity. Exp blocks have
// time-one map e^{mhat} (real or quadruple spectrum), NegExp blocks have
// -e^{mhat} (negative real spectrum), EllipticUniform blocks are uniformly
// oriented rotation planes theta * J0 on R^{2 mult} (Krein-definite).
struct InfinityBlock {
    enum class Kind { Exp, NegExp, EllipticUniform };
    Kind kind = Kind::Exp;
    Mat mhat;          // generator; EllipticUniform stores theta*J0
    double theta = 0;  // EllipticUniform only
    int mult = 1;      // EllipticUniform only
    int half_dim() const { return static_cast<int>(mhat.rows()) / 2; }

    static InfinityBlock exponential(const Mat& mhat);
    static InfinityBlock negative_exponential(const Mat& mhat);
    static InfinityBlock elliptic(double theta, int mult);
};

struct QAtInfinity {
    std::vector<InfinityBlock> blocks;
    int n() const;
    QuadraticForm quadratic() const;     // the reduced per-block form
    Mat time_one() const;                // diamond of (+-) e^{mhat}
    Mat time_one_power(long long l) const;
    Mat flow(double t) const;            // diamond of per-block flows
};

// --- loop reduction ------------------------------------------------------------

// Given Q with closed flow and phi^1_Q = sign e^{mhat} (through the generic
// exponential representation), produce the loop P with phi^1_P = I and the
// reduced form Qhat (time-independent, or the rotated kind for sign = -1).
struct LoopReduction {
    QuadraticForm p;       // sampled kind with closed flow phi_P(t)
    QuadraticForm q_hat;   // the explicit reduced form
    int sign = 1;
    Mat mhat;
};
LoopReduction build_leq_loop(const QuadraticForm& q, double tol = 1e-8);

// Blockwise variant for a diamond of independent factors.
std::vector<LoopReduction> build_leq_loop_blocks(const std::vector<QuadraticForm>& qs,
                                                 double tol = 1e-8);

// --- generating loops -----------------------------------------------------------

struct LoopBlockTrace {
    std::string case_tag;  // "hyperbolic", "negative", "elliptic-multi", "elliptic-plane"
    int mu = 0;
    double theta = 0.0;
    int mult = 0;
    double theta_mu = 0.0;
};

struct GeneratingLoop {
    QuadraticForm p;   // constant-kind loop quadratic P^mu
    int mu = 0;
    Mat bhat;          // bar(P^mu) # Q^{x(k-l)} = 1/2 <Bhat z, z>
    long long k = 0, l = 0;
    long long i_inf_k = 0, i_inf_l = 0;  // indices of the iterates at infinity
    std::vector<LoopBlockTrace> traces;
    Mat loop_flow(double t) const;       // e^{-J0 B^mu t}
};

// Lemma-level construction: unitary loop of Maslov index mu with
// 2 mu = i_inf(k) - i_inf(l), leaving bar(P)#Q^{x(k-l)} time-independent.
// k > l odd primes admissible for Q.
GeneratingLoop build_pmu(const QAtInfinity& q, long long k, long long l, double tol = 1e-9);

// --- nondegeneracy of the connecting path ---------------------------------------

struct NondegTracePoint {
    double t;
    double dist_to_one;
};

struct NondegReport {
    double min_dist = 0.0;
    std::vector<NondegTracePoint> trace;
    double angle_formula_mismatch = 0.0;  // elliptic blocks only
    bool nondegenerate = false;
};

// min over t in [0,1] of the spectral distance of
// phi^t_{bar(P)#Q^{x(k-l)}} phi^1_{Q^{xl}} from 1, with the closed-form
// eigenvalue angles cross-checked on elliptic blocks.
NondegReport check_nondeg_path(const QAtInfinity& q, const GeneratingLoop& loop, int samples = 512,
                               double fail_tol = 1e-8);

} // namespace sympcal
