#include "sympcal/capped.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sympcal/errors.hpp"

namespace sympcal {

CappedPair build_capped(const HamPtr& h, const QAtInfinity& q, const GeneratingLoop& loop,
                        const SmoothingProfile& profile, double r0) {
    if (h->n() != q.n()) throw DimensionError("build_capped: dimension mismatch");
    CappedPair out;
    out.k = loop.k;
    out.l = loop.l;
    out.mu = loop.mu;
    out.bhat = loop.bhat;
    out.r0 = r0;

    // S0 = max over |z| <= R0 of |1/2 <Bhat z, z>| + 1, exact from the
    // extreme eigenvalue of Bhat
    Eigen::SelfAdjointEigenSolver<Mat> es(loop.bhat);
    const double spec_max = es.eigenvalues().cwiseAbs().maxCoeff();
    out.s0 = 0.5 * r0 * r0 * spec_max + 1.0;

    const CompactPerturbation* pert = perturbation_part(*h);
    out.h_sup = pert ? pert->sup_norm() : 0.0;
    out.h_sup_exact = pert ? pert->sup_norm_exact() : true;
    out.c_bound = out.s0 + 2.0 + static_cast<double>(loop.k - loop.l) * out.h_sup;

    const int kl = static_cast<int>(loop.k - loop.l);
    const HamPtr p_ham = make_quadratic_ham(loop.p);
    out.pbar_sharp = sharp(bar(p_ham), iterate_ham(h, kl));
    out.h_iter_l = iterate_ham(h, static_cast<int>(loop.l));
    out.h_kminus = wedge(out.pbar_sharp, out.h_iter_l, profile);
    out.h_kodot =
        wedge(make_capped_quadratic(loop.bhat, out.s0, profile), out.h_iter_l, profile);
    out.zero_wedge = wedge(make_zero_ham(q.n()), out.h_iter_l, profile);
    return out;
}

Vec capped_flow_point(const Mat& bhat, double s0, const SmoothingProfile& profile, const Vec& z0,
                      double t) {
    const int n = static_cast<int>(bhat.rows()) / 2;
    const double h0 = 0.5 * z0.dot(bhat * z0);
    const double s = profile.eta_prime(s0, h0);
    return expm(-standard_j(n) * bhat * (s * t)) * z0;
}

namespace {

// fundamental solution of the flattened-cap quadratic, parametrized by the
// frozen slope s = eta'(H0) in [0,1]
Mat phi_ts(const QAtInfinity& q, const Mat& bhat, double l, const SmoothingProfile& prof,
           double t, double s) {
    const int n = q.n();
    if (t <= 0.5) return q.flow(l * prof.rho(2.0 * t));
    const Mat tail = expm(-standard_j(n) * bhat * (s * prof.rho(2.0 * t - 1.0)));
    return tail * q.flow(l);
}

} // namespace

GrowthConstants growth_constants(const CappedPair& pair, const QAtInfinity& q,
                                 const SmoothingProfile& profile, double eps, int grid) {
    GrowthConstants out;
    out.eps = eps;
    const int n = q.n();
    const Mat j = standard_j(n);
    const QuadraticForm qq = q.quadratic();
    const double l = static_cast<double>(pair.l);

    // structural linear-growth constant: 2 rho'_max times the stiffest
    // quadratic coefficient in either wedge half (eta' <= 1)
    double bq_sup = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        bq_sup = std::max(bq_sup, qq.b_matrix(t).operatorNorm());
    }
    const double bhat_norm = pair.bhat.operatorNorm();
    const double c_quad = 2.0 * profile.rho_prime_max() * std::max(l * bq_sup, bhat_norm);

    // compact part |X_{K - Khat}|: sample the gradient defect over the
    // supporting ball and pad; the defect vanishes outside the support
    double grad_sup = 0.0;
    {
        const double r = pair.r0 * 1.05 + 1e-9;
        const int probes = 512;
        for (int i = 0; i < probes; ++i) {
            const double ang = 2.0 * M_PI * i / probes;
            for (double rad : {0.15 * r, 0.4 * r, 0.7 * r, 0.95 * r}) {
                Vec z = Vec::Zero(2 * n);
                z(0) = rad * std::cos(ang);
                z(n) = rad * std::sin(ang);
                for (double t : {0.05, 0.2, 0.35, 0.45, 0.6, 0.75, 0.9}) {
                    Vec quad_part;
                    if (t <= 0.5)
                        quad_part = 2.0 * profile.rho_prime(2.0 * t) * l *
                                    qq.grad(l * profile.rho(2.0 * t), z);
                    else
                        quad_part = 2.0 * profile.rho_prime(2.0 * t - 1.0) * (pair.bhat * z);
                    const Vec defect = pair.h_kminus->grad(t, z) - quad_part;
                    grad_sup = std::max(grad_sup, defect.norm());
                }
            }
        }
        grad_sup *= 1.1;  // sampling pad
    }
    out.c1 = grad_sup;
    out.c = std::max(c_quad, out.c1);

    // M1, M2 over the compact (t,s) square with Lipschitz padding
    const double gen_norm = std::max(l * bq_sup, bhat_norm);
    double m1 = 0.0, m2 = 0.0;
    const int sgrid = std::max(8, grid / 4);
    for (int i = 0; i <= grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        for (int si = 0; si <= sgrid; ++si) {
            const double s = static_cast<double>(si) / sgrid;
            const Mat phi = phi_ts(q, pair.bhat, l, profile, t, s);
            m1 = std::max(m1, phi.operatorNorm());
            m2 = std::max(m2, phi.inverse().operatorNorm());
        }
    }
    const double pad = std::exp(2.0 * profile.rho_prime_max() * gen_norm / grid);
    out.m1 = m1 * pad;
    out.m2 = m2 * pad;

    double c2 = 0.0;
    const Mat phil = q.flow(l);
    const int cgrid = 4 * grid;
    for (int si = 0; si <= cgrid; ++si) {
        const double s = static_cast<double>(si) / cgrid;
        const Mat phi1 = expm(-j * pair.bhat * s) * phil;
        const Mat res = Mat::Identity(2 * n, 2 * n) - phi1;
        Eigen::PartialPivLU<Mat> lu(res);
        const double det = std::abs(lu.determinant());
        if (det < 1e-14)
            throw NondegeneracyError(
                "growth_constants: I - Phi(1,s) is singular on the slope range");
        c2 = std::max(c2, lu.solve(phi1).operatorNorm());
    }
    out.c2 = c2 * (1.0 + bhat_norm / cgrid);
    out.nonres_bound = out.m1 * out.m2 * (out.c2 + 1.0 / std::sqrt(2.0)) * (out.c1 + eps);
    return out;
}

} // namespace sympcal
