#pragma once

namespace sympcal {

// Smooth reparametrization rho and cutoff eta_{S0}.
//
// rho' is a plateau bump: smooth-step up on [0,a], identically c on
// [a, 1-a], smooth-step down on [1-a, 1], normalized so rho(1) = 1. Its
// maximum c = 1/(1-a) stays strictly below 2, and it vanishes to all orders
// at 0 and 1, so wedge-glued Hamiltonians remain smooth at the seams.
// The classical single-bump exp(-1/(t(1-t))) profile normalizes to a peak
// of about 2.26 and violates the rho' < 2 requirement.
//
// eta_{S0} is odd, vanishes on [0, S0], equals t - (S0+1) for t >= S0+2,
// with eta' in [0,1] non-decreasing and |t - eta(t)| <= S0 + 2.
class SmoothingProfile {
  public:
    explicit SmoothingProfile(double plateau_edge = 0.25);

    double rho(double t) const;        // 2-periodic, rho(t) = rho(2-t)
    double rho_prime(double t) const;
    double rho_prime_max() const { return c_; }

    double eta(double s0, double t) const;
    double eta_prime(double s0, double t) const;
    double eta_second(double s0, double t) const;

    // smooth step psi: 0 on (-inf,0], 1 on [1,inf), strictly increasing between
    static double psi(double x);
    static double psi_prime(double x);
    static double psi_second(double x);
    // Psi(v) = int_0^v psi, tabulated once per process
    static double psi_integral(double v);

  private:
    double a_;  // plateau edge
    double c_;  // 1/(1-a), the rho' plateau height

    double rho_base(double t) const;  // on [0,1]
};

} // namespace sympcal
