#pragma once

#include "sympcal/hamiltonian.hpp"

namespace sympcal {

// Second-order system u'' + grad F(t, u) = 0 in first-order Hamiltonian form
// H(q, p) = 1/2 |p|^2 + F(q), with grad F = A0 u + o(|u|) near the origin and
// grad F = Ainf u outside the ball of radius r0.
struct SecondOrderSpec {
    Mat a_zero;   // symmetric N x N
    Mat a_inf;    // symmetric N x N
    double r0 = 1.0;
};

struct SecondOrderSystem {
    HamPtr hamiltonian;
    QuadraticForm lin_at_zero;  // B = blockdiag(A0, I_N)
    QuadraticForm lin_at_inf;   // B = blockdiag(Ainf, I_N)
};

// Raises NondegeneracyError when the linear system at infinity is degenerate
// (1 in the spectrum of its time-one map).
SecondOrderSystem second_order_to_hamiltonian(const SecondOrderSpec& spec);

} // namespace sympcal
