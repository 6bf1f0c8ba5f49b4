#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sympcal/errors.hpp"

namespace sympcal {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Standard symplectic structure J0 = [[0, -I], [I, 0]] on R^{2n}.
Mat standard_j(int n);

// Relative Frobenius test of M^T J0 M = J0.
double symplectic_residual(const Mat& m);
bool is_symplectic(const Mat& m, double tol);

// Residual of J0 X + X^T J0 = 0, the tangent condition at the identity.
double inf_symplectic_residual(const Mat& x);

// 2x2 rotation [[c, -s], [s, c]].
Mat rot2(double theta);

// Block-interleaving product: acts blockwise on the (q, p) splitting so the
// factors sit on complementary symplectic subspaces.
Mat diamond(const Mat& m1, const Mat& m2);
Mat diamond_many(const std::vector<Mat>& blocks);

// Matrix exponential, Pade 13 with scaling and squaring.
Mat expm(const Mat& a);
CMat expm_complex(const CMat& a);

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Unitary factor of the polar decomposition (via SVD), and its complex form
// u = X + iY for a symplectic-orthogonal U = [[X, -Y], [Y, X]].
Mat polar_unitary(const Mat& m);
CMat complex_form(const Mat& u);
Complex rotation_det(const Mat& m);   // det_C of the polar-unitary factor

inline double frob(const Mat& m) { return m.norm(); }

} // namespace sympcal
