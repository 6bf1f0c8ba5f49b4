#pragma once

#include <vector>

#include "sympcal/matrices.hpp"

namespace sympcal {

enum class CanonicalBlockKind {
    Elliptic,            // R(angle), angle in (0, 2pi) \ {pi}, orientation measured
    MinusOnePair,        // -I_2
    PositiveHyperbolic,  // diag(lambda, 1/lambda), lambda > 1
    NegativeHyperbolic,  // diag(lambda, 1/lambda), lambda < -1
    Quadruple,           // [[rho R(angle), 0], [0, rho^{-1} R(angle)]], rho > 1
};

struct CanonicalBlock {
    CanonicalBlockKind kind = CanonicalBlockKind::Elliptic;
    double angle = 0.0;   // signed, from the realized block
    double lambda = 0.0;
    double rho = 0.0;
    Mat realized;         // the block P^{-1} M P actually restricts to
    int half_dim() const {
        return kind == CanonicalBlockKind::Quadruple ? 2 : 1;
    }
};

// Symplectic change of coordinates splitting a nondegenerate *semisimple*
// M into a diamond of canonical planes: P^{-1} M P = B_1 <> ... <> B_k.
// Eigenvalue 1 raises DegeneracyError; Jordan structure (eigenvector basis
// rank-deficient at tol) raises UnsupportedError.
struct DarbouxSplit {
    Mat p;
    std::vector<CanonicalBlock> blocks;
    double residual = 0.0;
};

DarbouxSplit darboux_split(const Mat& m, double tol = 1e-7);

// Realize the diamond of canonical blocks with per-block parameter overrides
// (used by the index closing arcs to slide parameters).
Mat realize_blocks(const std::vector<CanonicalBlock>& blocks);

} // namespace sympcal
