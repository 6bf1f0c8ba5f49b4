#include "sympcal/quadratic.hpp"

#include <cmath>

#include "sympcal/errors.hpp"

namespace sympcal {

QuadraticForm QuadraticForm::constant(const Mat& b) {
    if (b.rows() != b.cols() || b.rows() % 2 != 0)
        throw DimensionError("QuadraticForm::constant: B must be square of even dimension");
    if ((b - b.transpose()).norm() > 1e-12 * std::max(1.0, b.norm()))
        throw DomainError("QuadraticForm::constant: B must be symmetric");
    QuadraticForm q;
    q.kind_ = Kind::Constant;
    q.n_ = static_cast<int>(b.rows()) / 2;
    q.b0_ = 0.5 * (b + b.transpose());
    return q;
}

QuadraticForm QuadraticForm::rotated(double c, const Mat& mhat) {
    if (mhat.rows() != mhat.cols() || mhat.rows() % 2 != 0)
        throw DimensionError("QuadraticForm::rotated: mhat must be square of even dimension");
    QuadraticForm q;
    q.kind_ = Kind::Rotated;
    q.n_ = static_cast<int>(mhat.rows()) / 2;
    q.c_ = c;
    q.mhat_ = mhat;
    return q;
}

QuadraticForm QuadraticForm::sampled(int n, std::function<Mat(double)> b,
                                     std::function<Mat(double)> flow) {
    QuadraticForm q;
    q.kind_ = Kind::Sampled;
    q.n_ = n;
    q.b_fn_ = std::move(b);
    q.flow_fn_ = std::move(flow);
    return q;
}

QuadraticForm QuadraticForm::diamond_of(const std::vector<QuadraticForm>& blocks) {
    if (blocks.empty()) throw DomainError("QuadraticForm::diamond_of: no blocks");
    int n = 0;
    bool closed = true;
    for (const auto& b : blocks) {
        n += b.n();
        closed = closed && b.has_closed_flow();
    }
    std::vector<QuadraticForm> copy = blocks;
    auto bfn = [copy](double t) {
        std::vector<Mat> bs;
        bs.reserve(copy.size());
        for (const auto& b : copy) bs.push_back(b.b_matrix(t));
        return diamond_many(bs);
    };
    std::function<Mat(double)> ffn;
    if (closed) {
        ffn = [copy](double t) {
            std::vector<Mat> fs;
            fs.reserve(copy.size());
            for (const auto& b : copy) fs.push_back(b.flow(t));
            return diamond_many(fs);
        };
    }
    return sampled(n, bfn, ffn);
}

Mat QuadraticForm::b_matrix(double t) const {
    switch (kind_) {
        case Kind::Constant: return b0_;
        case Kind::Rotated: {
            const Mat j = standard_j(n_);
            const Mat r = expm(c_ * t * j);
            const Mat core = r * (j * mhat_) * r.transpose();
            return -c_ * Mat::Identity(2 * n_, 2 * n_) + 0.5 * (core + core.transpose());
        }
        case Kind::Sampled: return b_fn_(t);
    }
    throw InternalError("QuadraticForm::b_matrix: bad kind");
}

bool QuadraticForm::has_closed_flow() const {
    return kind_ != Kind::Sampled || static_cast<bool>(flow_fn_);
}

Mat QuadraticForm::flow(double t) const {
    switch (kind_) {
        case Kind::Constant: return expm(-standard_j(n_) * b0_ * t);
        case Kind::Rotated: return expm(c_ * t * standard_j(n_)) * expm(t * mhat_);
        case Kind::Sampled:
            if (flow_fn_) return flow_fn_(t);
            throw UnsupportedError("QuadraticForm::flow: sampled kind has no closed flow");
    }
    throw InternalError("QuadraticForm::flow: bad kind");
}

double QuadraticForm::value(double t, const Vec& z) const { return 0.5 * z.dot(b_matrix(t) * z); }

Vec QuadraticForm::grad(double t, const Vec& z) const { return b_matrix(t) * z; }

const Mat& QuadraticForm::constant_b() const {
    if (kind_ != Kind::Constant) throw DomainError("QuadraticForm: not a constant kind");
    return b0_;
}
const Mat& QuadraticForm::rotated_mhat() const {
    if (kind_ != Kind::Rotated) throw DomainError("QuadraticForm: not a rotated kind");
    return mhat_;
}
double QuadraticForm::rotated_c() const {
    if (kind_ != Kind::Rotated) throw DomainError("QuadraticForm: not a rotated kind");
    return c_;
}

Mat linear_flow(const QuadraticForm& q, double t) {
    if (!q.has_closed_flow())
        throw UnsupportedError("linear_flow: sampled quadratic kinds go through the integrator");
    return q.flow(t);
}

} // namespace sympcal
