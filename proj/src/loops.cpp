#include "sympcal/loops.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "sympcal/errors.hpp"

namespace sympcal {

InfinityBlock InfinityBlock::exponential(const Mat& mhat) {
    InfinityBlock b;
    b.kind = Kind::Exp;
    b.mhat = mhat;
    if (inf_symplectic_residual(mhat) > 1e-9)
        throw DomainError("InfinityBlock: generator is not infinitesimally symplectic");
    return b;
}

InfinityBlock InfinityBlock::negative_exponential(const Mat& mhat) {
    InfinityBlock b = exponential(mhat);
    b.kind = Kind::NegExp;
    return b;
}

InfinityBlock InfinityBlock::elliptic(double theta, int mult) {
    if (theta == 0.0 || !(theta > -M_PI && theta < M_PI))
        throw DomainError("InfinityBlock: elliptic angle must lie in (-pi, pi) \\ {0}");
    if (mult < 1) throw DomainError("InfinityBlock: multiplicity must be >= 1");
    InfinityBlock b;
    b.kind = Kind::EllipticUniform;
    b.theta = theta;
    b.mult = mult;
    b.mhat = uniform_elliptic_generator(theta, mult);
    return b;
}

int QAtInfinity::n() const {
    int total = 0;
    for (const auto& b : blocks) total += b.half_dim();
    return total;
}

QuadraticForm QAtInfinity::quadratic() const {
    std::vector<QuadraticForm> qs;
    qs.reserve(blocks.size());
    for (const auto& b : blocks) {
        const int bn = b.half_dim();
        const Mat j = standard_j(bn);
        switch (b.kind) {
            case InfinityBlock::Kind::Exp:
            case InfinityBlock::Kind::EllipticUniform:
                qs.push_back(QuadraticForm::constant(0.5 * (j * b.mhat + (j * b.mhat).transpose())));
                break;
            case InfinityBlock::Kind::NegExp:
                qs.push_back(QuadraticForm::rotated(M_PI, b.mhat));
                break;
        }
    }
    return QuadraticForm::diamond_of(qs);
}

Mat QAtInfinity::time_one() const {
    std::vector<Mat> ms;
    ms.reserve(blocks.size());
    for (const auto& b : blocks) {
        const double sign = b.kind == InfinityBlock::Kind::NegExp ? -1.0 : 1.0;
        ms.push_back(sign * expm(b.mhat));
    }
    return diamond_many(ms);
}

Mat QAtInfinity::time_one_power(long long l) const {
    std::vector<Mat> ms;
    ms.reserve(blocks.size());
    for (const auto& b : blocks) {
        const double sign =
            (b.kind == InfinityBlock::Kind::NegExp && (l % 2 != 0)) ? -1.0 : 1.0;
        ms.push_back(sign * expm(static_cast<double>(l) * b.mhat));
    }
    return diamond_many(ms);
}

Mat QAtInfinity::flow(double t) const {
    std::vector<Mat> ms;
    ms.reserve(blocks.size());
    for (const auto& b : blocks) {
        if (b.kind == InfinityBlock::Kind::NegExp) {
            const int bn = b.half_dim();
            ms.push_back(expm(M_PI * t * standard_j(bn)) * expm(t * b.mhat));
        } else {
            ms.push_back(expm(t * b.mhat));
        }
    }
    return diamond_many(ms);
}

// --- loop reduction --------------------------------------------------------------

LoopReduction build_leq_loop(const QuadraticForm& q, double tol) {
    if (!q.has_closed_flow())
        throw UnsupportedError("build_leq_loop: the input quadratic needs a closed flow");
    const int n = q.n();
    const Mat j = standard_j(n);
    const Mat m1 = q.flow(1.0);

    // classify the time-one map into e^{mhat} or -e^{mhat}
    const ExpRepresentation rep = exp_representation(m1, std::max(tol, 1e-7));
    bool any_neg = false, any_pos = false;
    for (const auto& b : rep.blocks) (b.sign < 0 ? any_neg : any_pos) = true;
    if (any_neg && any_pos)
        throw UnsupportedError(
            "build_leq_loop: mixed sign blocks; reduce blockwise through build_leq_loop_blocks");

    LoopReduction out;
    if (!any_neg) {
        Mat x;
        try {
            x = principal_log(m1, tol);
        } catch (const DomainError&) {
            throw UnsupportedError("build_leq_loop: time-one map has negative real spectrum "
                                   "inconsistent with the sign split");
        }
        out.sign = 1;
        out.mhat = x;
        out.q_hat = QuadraticForm::constant(0.5 * ((j * x) + (j * x).transpose()));
    } else {
        const Mat x = principal_log(-m1, tol);
        out.sign = -1;
        out.mhat = x;
        out.q_hat = QuadraticForm::rotated(M_PI, x);
    }

    // P = Q1 # bar(Q) (sign +) or Q' # bar(Q) (sign -): flow phi_hat(t) phi_Q(t)^{-1}
    const QuadraticForm q_hat = out.q_hat;
    const QuadraticForm q_in = q;
    auto flow_p = [q_hat, q_in](double t) -> Mat {
        return q_hat.flow(t) * q_in.flow(t).inverse();
    };
    auto b_p = [q_hat, q_in](double t) -> Mat {
        // P_t(z) = Qhat_t(z) - Q_t(phi_Q phi_hat^{-1} z)
        const Mat w = q_in.flow(t) * q_hat.flow(t).inverse();
        const Mat bq = w.transpose() * q_in.b_matrix(t) * w;
        return q_hat.b_matrix(t) - 0.5 * (bq + bq.transpose());
    };
    out.p = QuadraticForm::sampled(n, b_p, flow_p);

    if ((out.p.flow(1.0) - Mat::Identity(2 * n, 2 * n)).norm() > 1e-8)
        throw InternalError("build_leq_loop: loop endpoint is not the identity");
    return out;
}

std::vector<LoopReduction> build_leq_loop_blocks(const std::vector<QuadraticForm>& qs, double tol) {
    std::vector<LoopReduction> out;
    out.reserve(qs.size());
    for (const auto& q : qs) out.push_back(build_leq_loop(q, tol));
    return out;
}

// --- generating loop --------------------------------------------------------------

namespace {

long long floor_div_angle(long long l, double theta) {
    return static_cast<long long>(std::floor(static_cast<double>(l) * std::abs(theta) / (2 * M_PI)));
}

} // namespace

Mat GeneratingLoop::loop_flow(double t) const { return p.flow(t); }

GeneratingLoop build_pmu(const QAtInfinity& q, long long k, long long l, double tol) {
    if (!(k > l && l >= 1)) throw DomainError("build_pmu: requires k > l >= 1");
    if (k % 2 == 0 || l % 2 == 0)
        throw AdmissibilityError("build_pmu: k and l must be odd (prime iterates)");

    GeneratingLoop out;
    out.k = k;
    out.l = l;

    std::vector<Mat> bmu_blocks, bhat_blocks;
    long long two_mu_total = 0;

    for (const auto& blk : q.blocks) {
        const int bn = blk.half_dim();
        const Mat id = Mat::Identity(2 * bn, 2 * bn);
        const Mat j = standard_j(bn);
        LoopBlockTrace trace;
        switch (blk.kind) {
            case InfinityBlock::Kind::Exp: {
                // hyperbolic / quadruple spectrum: indices vanish at all odd iterates
                Eigen::EigenSolver<Mat> es(blk.mhat);
                for (int i = 0; i < es.eigenvalues().size(); ++i) {
                    const Complex lam = es.eigenvalues()(i);
                    if (std::abs(lam.real()) < tol && std::abs(lam.imag()) > tol) {
                        throw AdmissibilityError(
                            "build_pmu: purely imaginary spectrum in an Exp block; model it as "
                            "an elliptic block");
                    }
                }
                trace.case_tag = "hyperbolic";
                trace.mu = 0;
                bmu_blocks.push_back(Mat::Zero(2 * bn, 2 * bn));
                bhat_blocks.push_back(static_cast<double>(k - l) * 0.5 *
                                      ((j * blk.mhat) + (j * blk.mhat).transpose()));
                break;
            }
            case InfinityBlock::Kind::NegExp: {
                // i_inf = -m per period, loop e^{(k-l) pi J0 t}
                const long long m = bn;
                const long long two_mu = -(k - l) * m;
                if (two_mu % 2 != 0) throw InternalError("build_pmu: odd 2mu in the negative case");
                trace.case_tag = "negative";
                trace.mu = static_cast<int>(two_mu / 2);
                two_mu_total += two_mu;
                out.i_inf_k += -m * k;
                out.i_inf_l += -m * l;
                bmu_blocks.push_back(-static_cast<double>(k - l) * M_PI * id);
                bhat_blocks.push_back(static_cast<double>(k - l) * 0.5 *
                                      ((j * blk.mhat) + (j * blk.mhat).transpose()));
                break;
            }
            case InfinityBlock::Kind::EllipticUniform: {
                const double theta = blk.theta;
                const int c = blk.mult;
                for (long long it : {k, l}) {
                    const double frac = std::abs(
                        std::remainder(static_cast<double>(it) * theta, 2.0 * M_PI));
                    if (frac < tol) {
                        std::ostringstream os;
                        os << "build_pmu: iterate " << it << " is inadmissible (l theta = 0 mod 2pi)";
                        throw AdmissibilityError(os.str());
                    }
                }
                const double sgn = theta > 0 ? 1.0 : -1.0;
                const long long fk = floor_div_angle(k, theta);
                const long long fl = floor_div_angle(l, theta);
                const long long ik = -static_cast<long long>(sgn) * c * (2 * fk + 1);
                const long long il = -static_cast<long long>(sgn) * c * (2 * fl + 1);
                const long long two_mu = ik - il;
                if (two_mu % 2 != 0) throw InternalError("build_pmu: odd 2mu in the elliptic case");
                const long long mu_b = two_mu / 2;
                const double theta_mu = -2.0 * M_PI * static_cast<double>(mu_b) / c;
                trace.case_tag = c >= 2 ? "elliptic-multi" : "elliptic-plane";
                trace.mu = static_cast<int>(mu_b);
                trace.theta = theta;
                trace.mult = c;
                trace.theta_mu = theta_mu;
                two_mu_total += two_mu;
                out.i_inf_k += ik;
                out.i_inf_l += il;
                // B^mu = J0 V(theta_mu) = -theta_mu I on this block
                bmu_blocks.push_back(-theta_mu * id);
                // Bhat = (theta_mu - (k-l) theta) I
                bhat_blocks.push_back((theta_mu - static_cast<double>(k - l) * theta) * id);
                break;
            }
        }
        out.traces.push_back(trace);
    }

    if (two_mu_total % 2 != 0) throw InternalError("build_pmu: total 2mu is odd");
    out.mu = static_cast<int>(two_mu_total / 2);
    const Mat bmu = diamond_many(bmu_blocks);
    out.bhat = diamond_many(bhat_blocks);
    out.p = QuadraticForm::constant(bmu);

    const int n = q.n();
    const Mat end = out.p.flow(1.0);
    if ((end - Mat::Identity(2 * n, 2 * n)).norm() > 1e-10)
        throw InternalError("build_pmu: loop endpoint misses the identity");
    return out;
}

NondegReport check_nondeg_path(const QAtInfinity& q, const GeneratingLoop& loop, int samples,
                               double fail_tol) {
    NondegReport rep;
    rep.min_dist = 1e300;
    const Mat ml = q.time_one_power(loop.l);
    const int n = q.n();
    const Mat j = standard_j(n);

    for (int i = 0; i <= samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        const Mat path = expm(-j * loop.bhat * t) * ml;
        Eigen::EigenSolver<Mat> es(path);
        const double dist = (es.eigenvalues().array() - Complex(1, 0)).abs().minCoeff();
        rep.trace.push_back({t, dist});
        rep.min_dist = std::min(rep.min_dist, dist);

        // elliptic blocks: compare against the closed-form angle sweep
        int offset = 0;
        size_t bi = 0;
        for (const auto& blk : q.blocks) {
            const auto& tr = loop.traces[bi++];
            const int bn = blk.half_dim();
            if (blk.kind == InfinityBlock::Kind::EllipticUniform) {
                const double kk = static_cast<double>(loop.k), lll = static_cast<double>(loop.l);
                const double frac_k = kk * blk.theta / (2 * M_PI) -
                                      std::floor(kk * blk.theta / (2 * M_PI));
                const double frac_l = lll * blk.theta / (2 * M_PI) -
                                      std::floor(lll * blk.theta / (2 * M_PI));
                const double angle = lll * blk.theta + 2 * M_PI * t * (frac_k - frac_l);
                // the same sweep from the construction data
                const double angle2 =
                    lll * blk.theta + t * ((kk - lll) * blk.theta - tr.theta_mu);
                rep.angle_formula_mismatch =
                    std::max(rep.angle_formula_mismatch, std::abs(angle - angle2));
                const Complex target = std::polar(1.0, angle);
                // block path eigenvalues must be e^{+- i angle}
                Eigen::EigenSolver<Mat> bes(
                    (expm(((kk - lll) * blk.theta - tr.theta_mu) * t * standard_j(bn)) *
                     expm(lll * blk.mhat))
                        .eval());
                double md = 1e300;
                for (int e = 0; e < bes.eigenvalues().size(); ++e)
                    md = std::min(md, std::abs(bes.eigenvalues()(e) - target));
                rep.angle_formula_mismatch = std::max(rep.angle_formula_mismatch, md);
            }
            offset += bn;
        }
    }
    rep.nondegenerate = rep.min_dist > fail_tol;
    return rep;
}

} // namespace sympcal
