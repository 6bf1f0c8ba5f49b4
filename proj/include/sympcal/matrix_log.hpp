#pragma once

#include <utility>
#include <vector>

#include "sympcal/normal_forms.hpp"

namespace sympcal {

// Logarithm of a symplectic matrix; tangent to Sp(2n) at I, with the largest
// |Im| over its spectrum recorded (must stay below pi for a principal branch).
struct InfinitesimallySymplectic {
    int n = 0;
    Mat x;
    double strip_certificate = 0.0;
};

InfinitesimallySymplectic certify_inf_symplectic(const Mat& x, double tol = 1e-8);

// Principal logarithm: complex Schur, inverse scaling-and-squaring on the
// triangular factor, certified realification. Spectrum touching the closed
// negative real axis (within tol) raises DomainError naming the eigenvalue.
Mat principal_log(const Mat& a, double tol = 1e-12);

// log(A) = \int_0^1 (A-I) [t(A-I)+I]^{-1} dt by Gauss-Legendre; the returned
// error estimate compares against the half-order rule.
struct IntegralLog {
    Mat x;
    double quadrature_error_estimate = 0.0;
};
IntegralLog integral_log(const Mat& a, int quadrature_nodes = 64);

// Closed-form logarithm families: M = sign * e^x.
struct SignedLog {
    int sign = 1;  // -1 marks the negative-spectrum families
    InfinitesimallySymplectic log;
};
SignedLog closed_form_log(const NormalFormBlock& block);

// Nilpotent Mercator series for log(I + N); terminates, used by the
// negative-unipotent family.
Mat nilpotent_log(const Mat& x_minus_i, double tol = 1e-13);

// --- semisimple + nilpotent generators for unit-circle Jordan data ---------

struct VGPair {
    int t_j = 0;
    double theta = 0.0;
    int epsilon = 1;
    Mat v;  // semisimple, V^T = -V
    Mat g;  // nilpotent, commutes with v
    Mat m() const { return v + g; }
};

// Assembles the (2t_j+2)-dimensional generator per the parity of t_j.
VGPair build_vg(int t_j, double theta, int epsilon);

// Uniformly oriented elliptic generator theta*J0 on R^{2c}: the semisimple
// Krein-definite model used by the generating-loop construction.
Mat uniform_elliptic_generator(double theta, int c);

// --- exponential representation --------------------------------------------

struct ExpBlock {
    int sign = 1;
    InfinitesimallySymplectic generator;
    int half_dim = 0;
};

struct ExpRepresentation {
    Mat conjugator;            // symplectic P
    std::vector<ExpBlock> blocks;
    double residual = 0.0;     // || P^{-1} M P - diamond(sign e^m) || / ||M||
};

// Generic route: requires semisimple, well-separated spectrum (the invariant
// subspace split must succeed at split_tol).
ExpRepresentation exp_representation(const Mat& m, double split_tol = 1e-6);

// Block route: the diamond structure is already known.
ExpRepresentation exp_representation_blocks(const std::vector<NormalFormBlock>& blocks,
                                            const Mat& conjugator);

} // namespace sympcal
