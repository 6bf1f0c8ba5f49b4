#include "sympcal/matrix_log.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "sympcal/darboux.hpp"

namespace sympcal {

InfinitesimallySymplectic certify_inf_symplectic(const Mat& x, double tol) {
    if (inf_symplectic_residual(x) > tol)
        throw DomainError("certify_inf_symplectic: J0 X + X^T J0 residual exceeds tolerance");
    InfinitesimallySymplectic out;
    out.n = static_cast<int>(x.rows()) / 2;
    out.x = x;
    Eigen::EigenSolver<Mat> es(x);
    out.strip_certificate = es.eigenvalues().imag().cwiseAbs().maxCoeff();
    if (out.strip_certificate >= M_PI)
        throw DomainError("certify_inf_symplectic: spectrum leaves the principal strip");
    return out;
}

// Upper-triangular principal square root (Bjorck-Hammarling recurrence).
static CMat triangular_sqrt(const CMat& t) {
    const int n = static_cast<int>(t.rows());
    CMat s = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) s(i, i) = std::sqrt(t(i, i));
    for (int d = 1; d < n; ++d) {
        for (int i = 0; i + d < n; ++i) {
            const int j = i + d;
            Complex acc = t(i, j);
            for (int k = i + 1; k < j; ++k) acc -= s(i, k) * s(k, j);
            s(i, j) = acc / (s(i, i) + s(j, j));
        }
    }
    return s;
}

// Mercator series for log(I + E), ||E|| expected <= ~0.3.
static CMat log_near_identity(const CMat& e) {
    const int n = static_cast<int>(e.rows());
    CMat term = e;
    CMat acc = CMat::Zero(n, n);
    for (int k = 1; k <= 64; ++k) {
        acc += (k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k) * term;
        term = term * e;
        if (term.norm() < 1e-18 * std::max(1.0, acc.norm())) break;
    }
    return acc;
}

Mat principal_log(const Mat& a, double tol) {
    if (a.rows() != a.cols()) throw DimensionError("principal_log: matrix must be square");
    const int n = static_cast<int>(a.rows());

    Eigen::ComplexSchur<Mat> schur(a);
    if (schur.info() != Eigen::Success) throw InternalError("principal_log: Schur failed");
    CMat t = schur.matrixT();
    const CMat u = schur.matrixU();

    for (int i = 0; i < n; ++i) {
        const Complex l = t(i, i);
        const double al = std::abs(l);
        if (al <= tol || (l.real() < 0.0 && std::abs(l.imag()) <= tol * al)) {
            std::ostringstream os;
            os << "principal_log: eigenvalue " << l.real() << "+" << l.imag()
               << "i lies on the closed negative real axis";
            throw DomainError(os.str());
        }
    }

    // inverse scaling: repeated triangular square roots until close to I
    int k = 0;
    CMat ts = t;
    while ((ts - CMat::Identity(n, n)).norm() > 0.25 && k < 60) {
        ts = triangular_sqrt(ts);
        ++k;
    }
    CMat logt = std::pow(2.0, k) * log_near_identity(ts - CMat::Identity(n, n));
    const CMat logc = u * logt * u.adjoint();

    const double imag_norm = logc.imag().norm();
    if (imag_norm > 1e-9 * std::max(1.0, logc.norm()))
        throw InternalError("principal_log: realification failed (input may not be real-diagonalizable over R)");
    Mat x = logc.real();

    // round-trip certification
    const double resid = (expm(x) - a).norm() / std::max(1.0, a.norm());
    if (resid > 1e-8)
        throw InternalError("principal_log: round-trip residual exceeds 1e-8");
    return x;
}

IntegralLog integral_log(const Mat& a, int quadrature_nodes) {
    if (a.rows() != a.cols()) throw DimensionError("integral_log: matrix must be square");
    if (quadrature_nodes < 2) throw DomainError("integral_log: need at least 2 nodes");
    const int n = static_cast<int>(a.rows());
    const Mat d = a - Mat::Identity(n, n);

    auto rule = [&](int nn) {
        std::vector<double> xs, ws;
        gauss_legendre_01(nn, xs, ws);
        Mat acc = Mat::Zero(n, n);
        for (int i = 0; i < nn; ++i) {
            Mat res = xs[i] * d + Mat::Identity(n, n);
            Eigen::PartialPivLU<Mat> lu(res);
            const double dt = std::abs(lu.determinant());
            if (dt < 1e-300 || !std::isfinite(dt))
                throw DomainError("integral_log: resolvent t(A-I)+I is singular on the path");
            acc += ws[i] * (d * lu.solve(Mat::Identity(n, n)));
        }
        return acc;
    };

    IntegralLog out;
    out.x = rule(quadrature_nodes);
    const Mat coarse = rule(std::max(2, quadrature_nodes / 2));
    out.quadrature_error_estimate = (out.x - coarse).norm();
    return out;
}

Mat nilpotent_log(const Mat& x_minus_i, double tol) {
    const int n = static_cast<int>(x_minus_i.rows());
    Mat term = x_minus_i;
    Mat acc = Mat::Zero(n, n);
    for (int k = 1; k <= 2 * n + 2; ++k) {
        acc += (k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k) * term;
        term = term * x_minus_i;
        if (term.norm() < tol) return acc;
    }
    throw DomainError("nilpotent_log: series did not terminate (argument not nilpotent)");
}

// Toeplitz upper-triangular log of a Jordan-type block, entries
// diag = d, k-th superdiagonal = coef(k).
static Mat toeplitz_upper(int m, double d, const std::vector<double>& coef) {
    Mat t = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = d;
        for (int k = 1; i + k < m; ++k) t(i, i + k) = coef[k - 1];
    }
    return t;
}

SignedLog closed_form_log(const NormalFormBlock& block) {
    struct V {
        SignedLog operator()(const N1Block& b) const {
            Mat x = Mat::Zero(2, 2);
            if (b.lambda == 1.0) {
                x(0, 1) = b.b;
                return {1, certify_inf_symplectic(x, 1e-12)};
            }
            // M = -e^x forces the off-diagonal sign flip relative to b
            x(0, 1) = -b.b;
            return {-1, certify_inf_symplectic(x, 1e-12)};
        }
        SignedLog operator()(const NmBlock& b) const {
            const Mat m = build_normal_form(NmBlock{b.lambda, b.b});
            const int d = static_cast<int>(m.rows());
            if (b.lambda == 1.0) {
                Mat x = nilpotent_log(m - Mat::Identity(d, d));
                return {1, certify_inf_symplectic(x, 1e-10)};
            }
            Mat x = nilpotent_log(-m - Mat::Identity(d, d));
            return {-1, certify_inf_symplectic(x, 1e-10)};
        }
        SignedLog operator()(const RotationBlock& b) const {
            Mat x(2, 2);
            x << 0.0, -b.theta, b.theta, 0.0;
            return {1, certify_inf_symplectic(x, 1e-12)};
        }
        SignedLog operator()(const N2mUnitBlock&) const {
            throw UnsupportedError("closed_form_log: unit-circle Jordan family goes through build_vg");
        }
        SignedLog operator()(const N2mPlus1UnitBlock&) const {
            throw UnsupportedError("closed_form_log: unit-circle Jordan family goes through build_vg");
        }
        SignedLog operator()(const MmBlock& b) const {
            const int m = b.m;
            const double lam = std::abs(b.lambda);
            std::vector<double> coef(std::max(0, m - 1));
            for (int k = 1; k < m; ++k) {
                coef[k - 1] = (b.lambda > 0 ? ((k % 2 == 1) ? 1.0 : -1.0) : -1.0) /
                              (k * std::pow(lam, k));
            }
            const Mat m1 = toeplitz_upper(m, std::log(lam), coef);
            Mat x = Mat::Zero(2 * m, 2 * m);
            x.topLeftCorner(m, m) = m1;
            x.bottomRightCorner(m, m) = -m1.transpose();
            return {b.lambda > 0 ? 1 : -1, certify_inf_symplectic(x, 1e-10)};
        }
        SignedLog operator()(const N2mQuadBlock& b) const {
            const int m = b.m;
            Mat logrot(2, 2);
            logrot << std::log(b.rho), -b.theta, b.theta, std::log(b.rho);
            const Mat base = b.rho * rot2(b.theta);
            const Mat binv = base.inverse();
            Mat m1 = Mat::Zero(2 * m, 2 * m);
            for (int i = 0; i < m; ++i) m1.block(2 * i, 2 * i, 2, 2) = logrot;
            // k-th superdiagonal block: (-1)^{k+1}/k (rho R(theta))^{-k}
            Mat ipow = Mat::Identity(2, 2);
            for (int k = 1; k < m; ++k) {
                ipow = ipow * binv;
                for (int i = 0; i + k < m; ++i)
                    m1.block(2 * i, 2 * (i + k), 2, 2) = ((k % 2 == 1) ? 1.0 : -1.0) / k * ipow;
            }
            Mat x = Mat::Zero(4 * m, 4 * m);
            x.topLeftCorner(2 * m, 2 * m) = m1;
            x.bottomRightCorner(2 * m, 2 * m) = -m1.transpose();
            return {1, certify_inf_symplectic(x, 1e-10)};
        }
    };
    SignedLog out = std::visit(V{}, block);
    // verify M = sign e^x against the constructor
    const Mat m = build_normal_form(block);
    const double resid = (out.sign * expm(out.log.x) - m).norm() / std::max(1.0, m.norm());
    if (resid > 1e-10) throw InternalError("closed_form_log: reconstruction residual exceeds 1e-10");
    return out;
}

VGPair build_vg(int t_j, double theta, int epsilon) {
    if (t_j < 0) throw DomainError("build_vg: t_j must be >= 0");
    if (!(theta > -M_PI && theta < M_PI) || theta == 0.0)
        throw DomainError("build_vg: theta must lie in (-pi, 0) U (0, pi)");
    if (epsilon != 1 && epsilon != -1) throw DomainError("build_vg: epsilon must be +-1");
    const int k = t_j + 1;     // half-dimension
    const double e = epsilon;
    VGPair out;
    out.t_j = t_j;
    out.theta = theta;
    out.epsilon = epsilon;
    out.v = Mat::Zero(2 * k, 2 * k);
    out.g = Mat::Zero(2 * k, 2 * k);
    const Mat l = (Mat(2, 2) << 0.0, -theta, theta, 0.0).finished();
    if (t_j % 2 == 1) {
        // L blocks down both halves; I on the q-subdiagonal, -I on the
        // p-superdiagonal, Delta in the lower-left corner slot.
        const int r = k / 2;
        for (int i = 0; i < r; ++i) {
            out.v.block(2 * i, 2 * i, 2, 2) = l;
            out.v.block(k + 2 * i, k + 2 * i, 2, 2) = l;
        }
        for (int i = 0; i + 1 < r; ++i) {
            out.g.block(2 * (i + 1), 2 * i, 2, 2) = Mat::Identity(2, 2);
            out.g.block(k + 2 * i, k + 2 * (i + 1), 2, 2) = -Mat::Identity(2, 2);
        }
        const double delta = ((r - 1) % 2 == 0 ? 1.0 : -1.0) * e;
        out.g.block(2 * k - 2, k - 2, 2, 2) = delta * Mat::Identity(2, 2);
    } else {
        // entrywise form: 1-subdiagonal / -1-superdiagonal nilpotent part and
        // the alternating anti-diagonal +-eps*theta semisimple part
        for (int r = 1; r <= k; ++r) {
            const double sgn_up = (r % 2 == 0) ? 1.0 : -1.0;
            out.v(r - 1, k + (k - r)) = sgn_up * e * theta;
            out.v(k + r - 1, k - r) = -sgn_up * e * theta;
        }
        for (int r = 1; r < k; ++r) {
            out.g(r, r - 1) = 1.0;
            out.g(k + r - 1, k + r) = -1.0;
        }
    }
    const Mat m = out.m();
    if (inf_symplectic_residual(m) > 1e-12 || inf_symplectic_residual(out.v) > 1e-12 ||
        inf_symplectic_residual(out.g) > 1e-12)
        throw InternalError("build_vg: assembled generator fails the tangent identity");
    if ((out.v * out.g - out.g * out.v).norm() > 1e-12)
        throw InternalError("build_vg: V and G do not commute");
    if ((out.v + out.v.transpose()).norm() > 1e-12)
        throw InternalError("build_vg: V is not skew");
    return out;
}

Mat uniform_elliptic_generator(double theta, int c) {
    if (c < 1) throw DomainError("uniform_elliptic_generator: multiplicity must be >= 1");
    return theta * standard_j(c);
}

ExpRepresentation exp_representation_blocks(const std::vector<NormalFormBlock>& blocks,
                                            const Mat& conjugator) {
    ExpRepresentation rep;
    rep.conjugator = conjugator;
    std::vector<Mat> pieces;
    for (const auto& b : blocks) {
        const SignedLog sl = closed_form_log(b);
        ExpBlock eb;
        eb.sign = sl.sign;
        eb.generator = sl.log;
        eb.half_dim = block_half_dim(b);
        rep.blocks.push_back(eb);
        pieces.push_back(sl.sign * expm(sl.log.x));
    }
    const Mat core = diamond_many(pieces);
    const Mat m = conjugator * core * conjugator.inverse();
    rep.residual = (conjugator.inverse() * m * conjugator - core).norm() / std::max(1.0, m.norm());
    return rep;
}

ExpRepresentation exp_representation(const Mat& m, double split_tol) {
    const DarbouxSplit split = darboux_split(m, split_tol);
    ExpRepresentation rep;
    rep.conjugator = split.p;
    std::vector<Mat> pieces;
    for (const auto& blk : split.blocks) {
        ExpBlock eb;
        eb.half_dim = blk.half_dim();
        switch (blk.kind) {
            case CanonicalBlockKind::Elliptic: {
                const double alpha = blk.angle < M_PI ? blk.angle : blk.angle - 2 * M_PI;
                Mat x(2, 2);
                x << 0.0, -alpha, alpha, 0.0;
                eb.sign = 1;
                eb.generator = certify_inf_symplectic(x, 1e-9);
                break;
            }
            case CanonicalBlockKind::MinusOnePair: {
                eb.sign = -1;
                eb.generator = certify_inf_symplectic(Mat::Zero(2, 2), 1e-12);
                break;
            }
            case CanonicalBlockKind::PositiveHyperbolic: {
                Mat x = Mat::Zero(2, 2);
                x(0, 0) = std::log(blk.lambda);
                x(1, 1) = -x(0, 0);
                eb.sign = 1;
                eb.generator = certify_inf_symplectic(x, 1e-12);
                break;
            }
            case CanonicalBlockKind::NegativeHyperbolic: {
                Mat x = Mat::Zero(2, 2);
                x(0, 0) = std::log(-blk.lambda);
                x(1, 1) = -x(0, 0);
                eb.sign = -1;
                eb.generator = certify_inf_symplectic(x, 1e-12);
                break;
            }
            case CanonicalBlockKind::Quadruple: {
                eb.sign = 1;
                eb.generator = certify_inf_symplectic(principal_log(blk.realized), 1e-8);
                break;
            }
        }
        rep.blocks.push_back(eb);
        pieces.push_back(eb.sign * expm(eb.generator.x));
    }
    const Mat core = diamond_many(pieces);
    const Mat lhs = split.p.partialPivLu().solve(m * split.p);
    rep.residual = (lhs - core).norm() / std::max(1.0, m.norm());
    if (rep.residual > 1e-8)
        throw UnsupportedError("exp_representation: reconstruction residual exceeds 1e-8 "
                               "(structure beyond the semisimple split)");
    return rep;
}

} // namespace sympcal
