#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sympcal/profiles.hpp"
#include "sympcal/quadratic.hpp"

namespace sympcal {

// --- compactly supported perturbation ---------------------------------------

// One smooth radial bump: A * exp(1 - 1/(1 - s)), s = |z-c|^2 / R^2 < 1.
// Peak |A| at the center, identically zero outside the ball of radius R.
struct BumpTerm {
    double amplitude = 0.0;
    Vec center;
    double radius = 1.0;
};

class CompactPerturbation {
  public:
    CompactPerturbation() = default;
    CompactPerturbation(int n, std::vector<BumpTerm> terms);

    int n() const { return n_; }
    bool empty() const { return terms_.empty(); }
    const std::vector<BumpTerm>& terms() const { return terms_; }

    double support_radius() const;  // R0: h == 0 for |z| >= R0
    double sup_norm() const;        // exact for disjoint supports, else a bound
    bool sup_norm_exact() const;
    double grad_sup_norm() const;   // certified bound on |grad h|

    double value(const Vec& z) const;
    Vec grad(const Vec& z) const;
    Mat hess(const Vec& z) const;

  private:
    int n_ = 0;
    std::vector<BumpTerm> terms_;
};

// --- Hamiltonians -------------------------------------------------------------

// Smooth one-periodic Hamiltonian on R^{2n}. Values, gradients and (where
// available) Hessians are exact; flows of the vector field -J0 grad are the
// integrator's business.
class HamiltonianBase {
  public:
    explicit HamiltonianBase(int n) : n_(n) {}
    virtual ~HamiltonianBase() = default;

    int n() const { return n_; }
    int dim() const { return 2 * n_; }

    virtual double value(double t, const Vec& z) const = 0;
    virtual Vec grad(double t, const Vec& z) const = 0;
    virtual Mat hess(double t, const Vec& z) const;

    // Closed-form linear flow of the full Hamiltonian, when the structure
    // provides one (quadratic kinds and their compositions).
    virtual std::optional<Mat> closed_flow(double t) const;

    // Flow map from time t0 to time t1 with its Jacobian. The default
    // integrates the variational equations; compositions override it
    // structurally so nested bar/sharp evaluation never needs a Hessian.
    struct PointJac {
        Vec z;
        Mat jac;
    };
    virtual PointJac flow_between(double t0, double t1, const Vec& z) const;

  private:
    int n_;
};

using HamPtr = std::shared_ptr<const HamiltonianBase>;

Vec hamiltonian_vector_field(const HamiltonianBase& h, double t, const Vec& z);

// constructors
HamPtr make_quadratic_ham(const QuadraticForm& q);
HamPtr make_ham(const QuadraticForm& q, const CompactPerturbation& h);
HamPtr make_zero_ham(int n);

// F-bar_t(z) = -F_t(phi^t_F z); flow is the inverse flow of F.
HamPtr bar(const HamPtr& f);
// (F#G)_t(z) = F_t(z) + G_t((phi^t_F)^{-1} z); flow phi_F o phi_G.
HamPtr sharp(const HamPtr& f, const HamPtr& g);
// (F^G)(t): runs G on [0,1/2] and F on [1/2,1] through the profile clock.
HamPtr wedge(const HamPtr& f, const HamPtr& g, const SmoothingProfile& profile);
// H^{xk}(t,z) = k H(kt, z).
HamPtr iterate_ham(const HamPtr& h, int k);
// eta_{S0}(1/2 <Bhat z, z>): the flattened autonomous cap.
HamPtr make_capped_quadratic(const Mat& bhat, double s0, const SmoothingProfile& profile);

// access helpers for composed flows used by tests and suites
struct PerturbedQuadratic;  // opaque; the concrete Q + h type

const QuadraticForm* quadratic_part(const HamiltonianBase& h);
const CompactPerturbation* perturbation_part(const HamiltonianBase& h);

} // namespace sympcal
