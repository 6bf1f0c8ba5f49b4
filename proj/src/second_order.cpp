#include "sympcal/second_order.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sympcal/errors.hpp"

namespace sympcal {

namespace {

// cutoff chi(s): 1 for s <= 1/4, 0 for s >= 1, smooth monotone between
double chi(double s) { return SmoothingProfile::psi((1.0 - s) / 0.75); }
double chi_d(double s) { return -SmoothingProfile::psi_prime((1.0 - s) / 0.75) / 0.75; }
double chi_dd(double s) { return SmoothingProfile::psi_second((1.0 - s) / 0.75) / (0.75 * 0.75); }

class SecondOrderHam final : public HamiltonianBase {
  public:
    SecondOrderHam(Mat a0, Mat ai, double r0)
        : HamiltonianBase(static_cast<int>(a0.rows())),
          delta_(a0 - ai),
          ai_(std::move(ai)),
          r0_(r0) {}

    double value(double, const Vec& z) const override {
        const int nn = n();
        const Vec q = z.head(nn);
        const Vec p = z.tail(nn);
        const double s = q.squaredNorm() / (r0_ * r0_);
        return 0.5 * p.squaredNorm() + 0.5 * q.dot(ai_ * q) + 0.5 * chi(s) * q.dot(delta_ * q);
    }
    Vec grad(double, const Vec& z) const override {
        const int nn = n();
        const Vec q = z.head(nn);
        const Vec p = z.tail(nn);
        const double r2 = r0_ * r0_;
        const double s = q.squaredNorm() / r2;
        Vec g(2 * nn);
        const double quad = 0.5 * q.dot(delta_ * q);
        g.head(nn) = ai_ * q + chi(s) * (delta_ * q) + chi_d(s) * (2.0 / r2) * quad * q;
        g.tail(nn) = p;
        return g;
    }
    Mat hess(double, const Vec& z) const override {
        const int nn = n();
        const Vec q = z.head(nn);
        const double r2 = r0_ * r0_;
        const double s = q.squaredNorm() / r2;
        const double quad = 0.5 * q.dot(delta_ * q);
        const Vec dq = delta_ * q;
        Mat hqq = ai_ + chi(s) * delta_;
        // chi(s(q)) quad(q) second derivatives
        const Vec grad_s = (2.0 / r2) * q;
        hqq += chi_d(s) * (grad_s * dq.transpose() + dq * grad_s.transpose());
        hqq += quad * (chi_dd(s) * grad_s * grad_s.transpose() +
                       chi_d(s) * (2.0 / r2) * Mat::Identity(nn, nn));
        Mat hm = Mat::Zero(2 * nn, 2 * nn);
        hm.topLeftCorner(nn, nn) = 0.5 * (hqq + hqq.transpose());
        hm.bottomRightCorner(nn, nn) = Mat::Identity(nn, nn);
        return hm;
    }

  private:
    Mat delta_, ai_;
    double r0_;
};

Mat blockdiag_b(const Mat& a, int nn) {
    Mat b = Mat::Zero(2 * nn, 2 * nn);
    b.topLeftCorner(nn, nn) = a;
    b.bottomRightCorner(nn, nn) = Mat::Identity(nn, nn);
    return b;
}

} // namespace

SecondOrderSystem second_order_to_hamiltonian(const SecondOrderSpec& spec) {
    const int nn = static_cast<int>(spec.a_inf.rows());
    if (spec.a_inf.rows() != spec.a_inf.cols() || spec.a_zero.rows() != nn ||
        spec.a_zero.cols() != nn)
        throw DimensionError("second_order_to_hamiltonian: A matrices must be N x N");
    if ((spec.a_inf - spec.a_inf.transpose()).norm() > 1e-12 * std::max(1.0, spec.a_inf.norm()) ||
        (spec.a_zero - spec.a_zero.transpose()).norm() > 1e-12 * std::max(1.0, spec.a_zero.norm()))
        throw DomainError("second_order_to_hamiltonian: A matrices must be symmetric");
    if (!(spec.r0 > 0)) throw DomainError("second_order_to_hamiltonian: r0 must be positive");

    SecondOrderSystem out;
    out.lin_at_zero = QuadraticForm::constant(blockdiag_b(spec.a_zero, nn));
    out.lin_at_inf = QuadraticForm::constant(blockdiag_b(spec.a_inf, nn));

    const Mat m1 = out.lin_at_inf.flow(1.0);
    Eigen::EigenSolver<Mat> es(m1);
    if ((es.eigenvalues().array() - Complex(1, 0)).abs().minCoeff() < 1e-8)
        throw NondegeneracyError(
            "second_order_to_hamiltonian: linear system at infinity is degenerate");

    out.hamiltonian = std::make_shared<SecondOrderHam>(spec.a_zero, spec.a_inf, spec.r0);
    return out;
}

} // namespace sympcal
