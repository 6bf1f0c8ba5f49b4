#include "sympcal/hamiltonian.hpp"

#include <cmath>

#include "sympcal/errors.hpp"
#include "sympcal/flow.hpp"

namespace sympcal {

// --- CompactPerturbation ------------------------------------------------------

CompactPerturbation::CompactPerturbation(int n, std::vector<BumpTerm> terms)
    : n_(n), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        if (t.center.size() != 2 * n_)
            throw DimensionError("CompactPerturbation: center dimension mismatch");
        if (!(t.radius > 0.0)) throw DomainError("CompactPerturbation: radius must be positive");
    }
}

double CompactPerturbation::support_radius() const {
    double r = 0.0;
    for (const auto& t : terms_) r = std::max(r, t.center.norm() + t.radius);
    return r;
}

bool CompactPerturbation::sup_norm_exact() const {
    for (size_t i = 0; i < terms_.size(); ++i)
        for (size_t j = i + 1; j < terms_.size(); ++j)
            if ((terms_[i].center - terms_[j].center).norm() <
                terms_[i].radius + terms_[j].radius)
                return false;
    return true;
}

double CompactPerturbation::sup_norm() const {
    if (terms_.empty()) return 0.0;
    if (sup_norm_exact()) {
        double m = 0.0;
        for (const auto& t : terms_) m = std::max(m, std::abs(t.amplitude));
        return m;  // bump peak is exactly |A| at the center
    }
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.amplitude);
    return s;
}

namespace {

// beta(s) = exp(1 - 1/(1-s)) on [0,1), 0 beyond; beta(0) = 1
double beta_val(double s) { return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0; }
double beta_d1(double s) {
    if (s >= 1.0) return 0.0;
    const double u = 1.0 - s;
    return -beta_val(s) / (u * u);
}
double beta_d2(double s) {
    if (s >= 1.0) return 0.0;
    const double u = 1.0 - s;
    return beta_val(s) * (1.0 / (u * u * u * u) - 2.0 / (u * u * u));
}

} // namespace

double CompactPerturbation::grad_sup_norm() const {
    // per term: |grad| = (2|A|/R) |beta'(s)| sqrt(s); 1-D maximum over s
    double total = 0.0;
    for (const auto& t : terms_) {
        double mx = 0.0;
        const int grid = 4096;
        for (int i = 0; i <= grid; ++i) {
            const double s = static_cast<double>(i) / grid;
            mx = std::max(mx, std::abs(beta_d1(s)) * std::sqrt(s));
        }
        total += 2.0 * std::abs(t.amplitude) / t.radius * mx * 1.0001;  // grid padding
    }
    return total;
}

double CompactPerturbation::value(const Vec& z) const {
    double acc = 0.0;
    for (const auto& t : terms_) {
        const double s = (z - t.center).squaredNorm() / (t.radius * t.radius);
        if (s < 1.0) acc += t.amplitude * beta_val(s);
    }
    return acc;
}

Vec CompactPerturbation::grad(const Vec& z) const {
    Vec g = Vec::Zero(2 * n_);
    for (const auto& t : terms_) {
        const Vec d = z - t.center;
        const double r2 = t.radius * t.radius;
        const double s = d.squaredNorm() / r2;
        if (s < 1.0) g += t.amplitude * beta_d1(s) * (2.0 / r2) * d;
    }
    return g;
}

Mat CompactPerturbation::hess(const Vec& z) const {
    Mat hm = Mat::Zero(2 * n_, 2 * n_);
    for (const auto& t : terms_) {
        const Vec d = z - t.center;
        const double r2 = t.radius * t.radius;
        const double s = d.squaredNorm() / r2;
        if (s < 1.0) {
            hm += t.amplitude * (beta_d2(s) * (4.0 / (r2 * r2)) * (d * d.transpose()) +
                                 beta_d1(s) * (2.0 / r2) * Mat::Identity(2 * n_, 2 * n_));
        }
    }
    return hm;
}

// --- HamiltonianBase -----------------------------------------------------------

Mat HamiltonianBase::hess(double, const Vec&) const {
    throw UnsupportedError("HamiltonianBase: no Hessian for this composition");
}

std::optional<Mat> HamiltonianBase::closed_flow(double) const { return std::nullopt; }

Vec hamiltonian_vector_field(const HamiltonianBase& h, double t, const Vec& z) {
    return -(standard_j(h.n()) * h.grad(t, z));
}

namespace {

class ZeroHam final : public HamiltonianBase {
  public:
    explicit ZeroHam(int n) : HamiltonianBase(n) {}
    double value(double, const Vec&) const override { return 0.0; }
    Vec grad(double, const Vec&) const override { return Vec::Zero(dim()); }
    Mat hess(double, const Vec&) const override { return Mat::Zero(dim(), dim()); }
    std::optional<Mat> closed_flow(double) const override {
        return Mat::Identity(dim(), dim());
    }
};

class QuadHam final : public HamiltonianBase {
  public:
    explicit QuadHam(QuadraticForm q) : HamiltonianBase(q.n()), q_(std::move(q)) {}
    double value(double t, const Vec& z) const override { return q_.value(t, z); }
    Vec grad(double t, const Vec& z) const override { return q_.grad(t, z); }
    Mat hess(double t, const Vec&) const override { return q_.b_matrix(t); }
    std::optional<Mat> closed_flow(double t) const override {
        if (q_.has_closed_flow()) return q_.flow(t);
        return std::nullopt;
    }
    const QuadraticForm& q() const { return q_; }

  private:
    QuadraticForm q_;
};

class PerturbedQuadHam final : public HamiltonianBase {
  public:
    PerturbedQuadHam(QuadraticForm q, CompactPerturbation h)
        : HamiltonianBase(q.n()), q_(std::move(q)), h_(std::move(h)) {}
    double value(double t, const Vec& z) const override {
        return q_.value(t, z) + h_.value(z);
    }
    Vec grad(double t, const Vec& z) const override { return q_.grad(t, z) + h_.grad(z); }
    Mat hess(double t, const Vec& z) const override { return q_.b_matrix(t) + h_.hess(z); }
    std::optional<Mat> closed_flow(double t) const override {
        if (h_.empty() && q_.has_closed_flow()) return q_.flow(t);
        return std::nullopt;
    }
    const QuadraticForm& q() const { return q_; }
    const CompactPerturbation& h() const { return h_; }

  private:
    QuadraticForm q_;
    CompactPerturbation h_;
};

// forward flow of a factor Hamiltonian, closed form when available
Mat factor_flow_or_throw(const HamiltonianBase& h, double t) {
    const auto cf = h.closed_flow(t);
    if (!cf) throw UnsupportedError("composition: factor lacks a closed flow for Hessians");
    return *cf;
}

class BarHam final : public HamiltonianBase {
  public:
    explicit BarHam(HamPtr f) : HamiltonianBase(f->n()), f_(std::move(f)) {}
    double value(double t, const Vec& z) const override {
        return -f_->value(t, f_->flow_between(0.0, t, z).z);
    }
    Vec grad(double t, const Vec& z) const override {
        if (const auto cf = f_->closed_flow(t))
            return -(cf->transpose() * f_->grad(t, (*cf) * z));
        const auto fj = f_->flow_between(0.0, t, z);
        return -(fj.jac.transpose() * f_->grad(t, fj.z));
    }
    Mat hess(double t, const Vec& z) const override {
        const Mat w = factor_flow_or_throw(*f_, t);
        return -(w.transpose() * f_->hess(t, w * z) * w);
    }
    std::optional<Mat> closed_flow(double t) const override {
        if (const auto cf = f_->closed_flow(t)) return cf->inverse();
        return std::nullopt;
    }
    // the bar flow from a to b is the factor flow from b to a
    PointJac flow_between(double t0, double t1, const Vec& z) const override {
        return f_->flow_between(t1, t0, z);
    }

  private:
    HamPtr f_;
};

class SharpHam final : public HamiltonianBase {
  public:
    SharpHam(HamPtr f, HamPtr g) : HamiltonianBase(f->n()), f_(std::move(f)), g_(std::move(g)) {
        if (f_->n() != g_->n()) throw DimensionError("sharp: dimension mismatch");
    }
    double value(double t, const Vec& z) const override {
        return f_->value(t, z) + g_->value(t, f_->flow_between(t, 0.0, z).z);
    }
    Vec grad(double t, const Vec& z) const override {
        if (const auto cf = f_->closed_flow(t)) {
            const Mat w = cf->inverse();
            return f_->grad(t, z) + w.transpose() * g_->grad(t, w * z);
        }
        const auto fj = f_->flow_between(t, 0.0, z);
        return f_->grad(t, z) + fj.jac.transpose() * g_->grad(t, fj.z);
    }
    Mat hess(double t, const Vec& z) const override {
        const Mat w = factor_flow_or_throw(*f_, t).inverse();
        return f_->hess(t, z) + w.transpose() * g_->hess(t, w * z) * w;
    }
    std::optional<Mat> closed_flow(double t) const override {
        const auto ff = f_->closed_flow(t);
        const auto gf = g_->closed_flow(t);
        if (ff && gf) return (*ff) * (*gf);
        return std::nullopt;
    }
    // phi^t = phi_F^t phi_G^t: pull back through time a, push through time b
    PointJac flow_between(double t0, double t1, const Vec& z) const override {
        const auto s1 = f_->flow_between(t0, 0.0, z);
        const auto s2 = g_->flow_between(t0, 0.0, s1.z);
        const auto s3 = g_->flow_between(0.0, t1, s2.z);
        const auto s4 = f_->flow_between(0.0, t1, s3.z);
        return {s4.z, s4.jac * s3.jac * s2.jac * s1.jac};
    }

  private:
    HamPtr f_, g_;
};

class WedgeHam final : public HamiltonianBase {
  public:
    WedgeHam(HamPtr f, HamPtr g, SmoothingProfile profile)
        : HamiltonianBase(f->n()), f_(std::move(f)), g_(std::move(g)), prof_(profile) {
        if (f_->n() != g_->n()) throw DimensionError("wedge: dimension mismatch");
    }
    double value(double t, const Vec& z) const override {
        const Piece p = piece(t);
        return p.weight * p.h->value(p.tau, z);
    }
    Vec grad(double t, const Vec& z) const override {
        const Piece p = piece(t);
        return p.weight * p.h->grad(p.tau, z);
    }
    Mat hess(double t, const Vec& z) const override {
        const Piece p = piece(t);
        return p.weight * p.h->hess(p.tau, z);
    }
    std::optional<Mat> closed_flow(double t) const override {
        double u = std::fmod(t, 1.0);
        if (u < 0) u += 1.0;
        if (t != 0.0 && u == 0.0) u = 1.0;
        if (u <= 0.5) return g_->closed_flow(prof_.rho(2.0 * u));
        const auto ff = f_->closed_flow(prof_.rho(2.0 * u - 1.0));
        const auto g1 = g_->closed_flow(1.0);
        if (ff && g1) return (*ff) * (*g1);
        return std::nullopt;
    }

  private:
    struct Piece {
        const HamiltonianBase* h;
        double tau;
        double weight;
    };
    Piece piece(double t) const {
        double u = std::fmod(t, 1.0);
        if (u < 0) u += 1.0;
        if (u <= 0.5) return {g_.get(), prof_.rho(2.0 * u), 2.0 * prof_.rho_prime(2.0 * u)};
        return {f_.get(), prof_.rho(2.0 * u - 1.0), 2.0 * prof_.rho_prime(2.0 * u - 1.0)};
    }
    HamPtr f_, g_;
    SmoothingProfile prof_;
};

class IterHam final : public HamiltonianBase {
  public:
    IterHam(HamPtr h, int k) : HamiltonianBase(h->n()), h_(std::move(h)), k_(k) {
        if (k < 1) throw DomainError("iterate: k must be >= 1");
    }
    double value(double t, const Vec& z) const override { return k_ * h_->value(k_ * t, z); }
    Vec grad(double t, const Vec& z) const override { return k_ * h_->grad(k_ * t, z); }
    Mat hess(double t, const Vec& z) const override { return k_ * h_->hess(k_ * t, z); }
    std::optional<Mat> closed_flow(double t) const override { return h_->closed_flow(k_ * t); }
    PointJac flow_between(double t0, double t1, const Vec& z) const override {
        return h_->flow_between(k_ * t0, k_ * t1, z);
    }

  private:
    HamPtr h_;
    int k_;
};

class CappedQuadHam final : public HamiltonianBase {
  public:
    CappedQuadHam(Mat bhat, double s0, SmoothingProfile profile)
        : HamiltonianBase(static_cast<int>(bhat.rows()) / 2),
          bhat_(std::move(bhat)),
          s0_(s0),
          prof_(profile) {
        if ((bhat_ - bhat_.transpose()).norm() > 1e-12 * std::max(1.0, bhat_.norm()))
            throw DomainError("capped quadratic: Bhat must be symmetric");
    }
    double value(double, const Vec& z) const override {
        return prof_.eta(s0_, 0.5 * z.dot(bhat_ * z));
    }
    Vec grad(double, const Vec& z) const override {
        return prof_.eta_prime(s0_, 0.5 * z.dot(bhat_ * z)) * (bhat_ * z);
    }
    Mat hess(double, const Vec& z) const override {
        const Vec bz = bhat_ * z;
        const double q = 0.5 * z.dot(bz);
        return prof_.eta_second(s0_, q) * (bz * bz.transpose()) +
               prof_.eta_prime(s0_, q) * bhat_;
    }
    const Mat& bhat() const { return bhat_; }
    double s0() const { return s0_; }

  private:
    Mat bhat_;
    double s0_;
    SmoothingProfile prof_;
};

} // namespace

HamPtr make_quadratic_ham(const QuadraticForm& q) { return std::make_shared<QuadHam>(q); }

HamPtr make_ham(const QuadraticForm& q, const CompactPerturbation& h) {
    if (!h.empty() && h.n() != q.n()) throw DimensionError("make_ham: dimension mismatch");
    return std::make_shared<PerturbedQuadHam>(q, h);
}

HamPtr make_zero_ham(int n) { return std::make_shared<ZeroHam>(n); }

HamPtr bar(const HamPtr& f) { return std::make_shared<BarHam>(f); }

HamPtr sharp(const HamPtr& f, const HamPtr& g) { return std::make_shared<SharpHam>(f, g); }

HamPtr wedge(const HamPtr& f, const HamPtr& g, const SmoothingProfile& profile) {
    return std::make_shared<WedgeHam>(f, g, profile);
}

HamPtr iterate_ham(const HamPtr& h, int k) { return std::make_shared<IterHam>(h, k); }

HamPtr make_capped_quadratic(const Mat& bhat, double s0, const SmoothingProfile& profile) {
    return std::make_shared<CappedQuadHam>(bhat, s0, profile);
}

const QuadraticForm* quadratic_part(const HamiltonianBase& h) {
    if (const auto* qh = dynamic_cast<const QuadHam*>(&h)) return &qh->q();
    if (const auto* ph = dynamic_cast<const PerturbedQuadHam*>(&h)) return &ph->q();
    return nullptr;
}

const CompactPerturbation* perturbation_part(const HamiltonianBase& h) {
    if (const auto* ph = dynamic_cast<const PerturbedQuadHam*>(&h)) return &ph->h();
    return nullptr;
}

} // namespace sympcal
