#include "sympcal/profiles.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "sympcal/errors.hpp"
#include "sympcal/matrices.hpp"

namespace sympcal {

namespace {

double bump_f(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double bump_fp(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }
double bump_fpp(double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(-1.0 / s) * (1.0 / (s * s * s * s) - 2.0 / (s * s * s));
}

// Hermite-interpolated table of Psi(v) = int_0^v psi on [0,1]; the integrand
// is smooth so panelwise Gauss-Legendre drives the node values to rounding.
struct PsiTable {
    static constexpr int kNodes = 4096;
    std::array<double, kNodes + 1> value{};
    PsiTable() {
        std::vector<double> xs, ws;
        gauss_legendre_01(16, xs, ws);
        value[0] = 0.0;
        for (int i = 0; i < kNodes; ++i) {
            const double lo = static_cast<double>(i) / kNodes;
            const double hi = static_cast<double>(i + 1) / kNodes;
            double acc = 0.0;
            for (size_t q = 0; q < xs.size(); ++q)
                acc += ws[q] * SmoothingProfile::psi(lo + (hi - lo) * xs[q]);
            value[i + 1] = value[i] + (hi - lo) * acc;
        }
    }
};

const PsiTable& psi_table() {
    static const PsiTable table;
    return table;
}

} // namespace

double SmoothingProfile::psi(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double f = bump_f(x), g = bump_f(1.0 - x);
    return f / (f + g);
}

double SmoothingProfile::psi_prime(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double f = bump_f(x), g = bump_f(1.0 - x);
    const double fp = bump_fp(x), gp = -bump_fp(1.0 - x);
    const double den = (f + g) * (f + g);
    return (fp * g - f * gp) / den;
}

double SmoothingProfile::psi_second(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double f = bump_f(x), g = bump_f(1.0 - x);
    const double fp = bump_fp(x), gp = -bump_fp(1.0 - x);
    const double fpp = bump_fpp(x), gpp = bump_fpp(1.0 - x);
    const double d = f + g;
    return (fpp * g - f * gpp) / (d * d) - 2.0 * (fp * g - f * gp) * (fp + gp) / (d * d * d);
}

double SmoothingProfile::psi_integral(double v) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 0.5 + (v - 1.0);  // psi == 1 beyond the step
    const auto& tab = psi_table();
    const double x = v * PsiTable::kNodes;
    int i = static_cast<int>(x);
    if (i >= PsiTable::kNodes) i = PsiTable::kNodes - 1;
    const double h = 1.0 / PsiTable::kNodes;
    const double t = x - i;
    const double y0 = tab.value[i], y1 = tab.value[i + 1];
    const double d0 = psi(i * h), d1 = psi((i + 1) * h);
    // cubic Hermite with exact slopes
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

SmoothingProfile::SmoothingProfile(double plateau_edge) : a_(plateau_edge) {
    if (!(plateau_edge > 0.0 && plateau_edge < 0.5))
        throw DomainError("SmoothingProfile: plateau edge must lie in (0, 1/2)");
    c_ = 1.0 / (1.0 - a_);
}

double SmoothingProfile::rho_base(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (t <= a_) return c_ * a_ * psi_integral(t / a_);
    if (t <= 1.0 - a_) return c_ * (a_ * 0.5 + (t - a_));
    return 1.0 - c_ * a_ * psi_integral((1.0 - t) / a_);
}

double SmoothingProfile::rho(double t) const {
    double u = std::fmod(t, 2.0);
    if (u < 0) u += 2.0;
    return u <= 1.0 ? rho_base(u) : rho_base(2.0 - u);
}

double SmoothingProfile::rho_prime(double t) const {
    double u = std::fmod(t, 2.0);
    if (u < 0) u += 2.0;
    const double sign = u <= 1.0 ? 1.0 : -1.0;
    const double v = u <= 1.0 ? u : 2.0 - u;
    if (v <= 0.0 || v >= 1.0) return 0.0;
    return sign * c_ * psi(v / a_) * psi((1.0 - v) / a_);
}

double SmoothingProfile::eta(double s0, double t) const {
    if (t < 0.0) return -eta(s0, -t);
    if (t <= s0) return 0.0;
    if (t >= s0 + 2.0) return t - (s0 + 1.0);
    return 2.0 * psi_integral((t - s0) / 2.0);
}

double SmoothingProfile::eta_prime(double s0, double t) const {
    if (t < 0.0) return eta_prime(s0, -t);
    if (t <= s0) return 0.0;
    if (t >= s0 + 2.0) return 1.0;
    return psi((t - s0) / 2.0);
}

double SmoothingProfile::eta_second(double s0, double t) const {
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const double u = std::abs(t);
    if (u <= s0 || u >= s0 + 2.0) return 0.0;
    return sign * 0.5 * psi_prime((u - s0) / 2.0);
}

} // namespace sympcal
