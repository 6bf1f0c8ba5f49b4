#include "sympcal/matrices.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace sympcal {

Mat standard_j(int n) {
    if (n < 1) throw DomainError("standard_j: n must be >= 1");
    Mat j = Mat::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = -Mat::Identity(n, n);
    j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    return j;
}

double symplectic_residual(const Mat& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0)
        throw DimensionError("symplectic_residual: matrix must be square of even dimension");
    const int n = static_cast<int>(m.rows()) / 2;
    const Mat j = standard_j(n);
    const double denom = std::max(1.0, m.squaredNorm());
    return (m.transpose() * j * m - j).norm() / denom;
}

bool is_symplectic(const Mat& m, double tol) {
    return symplectic_residual(m) <= tol;
}

double inf_symplectic_residual(const Mat& x) {
    if (x.rows() != x.cols() || x.rows() % 2 != 0)
        throw DimensionError("inf_symplectic_residual: matrix must be square of even dimension");
    const int n = static_cast<int>(x.rows()) / 2;
    const Mat j = standard_j(n);
    return (j * x + x.transpose() * j).norm() / std::max(1.0, x.norm());
}

Mat rot2(double theta) {
    Mat r(2, 2);
    const double c = std::cos(theta), s = std::sin(theta);
    r << c, -s, s, c;
    return r;
}

Mat diamond(const Mat& m1, const Mat& m2) {
    const int i = static_cast<int>(m1.rows()) / 2;
    const int j = static_cast<int>(m2.rows()) / 2;
    if (2 * i != m1.rows() || m1.rows() != m1.cols() || 2 * j != m2.rows() || m2.rows() != m2.cols())
        throw DimensionError("diamond: factors must be square of even dimension");
    Mat r = Mat::Zero(2 * (i + j), 2 * (i + j));
    const int n = i + j;
    r.block(0, 0, i, i) = m1.block(0, 0, i, i);
    r.block(0, n, i, i) = m1.block(0, i, i, i);
    r.block(n, 0, i, i) = m1.block(i, 0, i, i);
    r.block(n, n, i, i) = m1.block(i, i, i, i);
    r.block(i, i, j, j) = m2.block(0, 0, j, j);
    r.block(i, n + i, j, j) = m2.block(0, j, j, j);
    r.block(n + i, i, j, j) = m2.block(j, 0, j, j);
    r.block(n + i, n + i, j, j) = m2.block(j, j, j, j);
    return r;
}

Mat diamond_many(const std::vector<Mat>& blocks) {
    if (blocks.empty()) throw DomainError("diamond_many: empty block list");
    Mat acc = blocks[0];
    for (size_t k = 1; k < blocks.size(); ++k) acc = diamond(acc, blocks[k]);
    return acc;
}

// Higham's Pade-13 scaling-and-squaring.
template <typename M>
static M expm_impl(const M& a) {
    static const double b[] = {
        64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
        129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
        1323241920.,        40840800.,          960960.,           16380., 182., 1.};
    const int n = static_cast<int>(a.rows());
    const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    const double theta13 = 5.371920351148152;
    if (nrm > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
    M as = a / std::pow(2.0, squarings);
    const M i = M::Identity(n, n);
    const M a2 = as * as, a4 = a2 * a2, a6 = a2 * a4;
    M u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * i);
    M v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
    M r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

Mat expm(const Mat& a) { return expm_impl<Mat>(a); }
CMat expm_complex(const CMat& a) { return expm_impl<CMat>(a); }

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw DomainError("gauss_legendre_01: need at least one node");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // map from [-1,1] to [0,1]
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        const double w = 1.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

Mat polar_unitary(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

CMat complex_form(const Mat& u) {
    const int n = static_cast<int>(u.rows()) / 2;
    CMat c(n, n);
    c.real() = u.topLeftCorner(n, n);
    c.imag() = u.bottomLeftCorner(n, n);
    return c;
}

Complex rotation_det(const Mat& m) {
    const CMat u = complex_form(polar_unitary(m));
    return u.determinant();
}

} // namespace sympcal
