#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "sympcal/matrices.hpp"

namespace sympcal {

// --- symplectic paths -------------------------------------------------------

// Closed-form generators. Exponential: t -> e^{tX}. RotatedExponential:
// t -> e^{c t J0} e^{tX}. PiecewiseFlow: arbitrary closed-form map.
struct ExponentialGen {
    Mat x;
};
struct RotatedExponentialGen {
    double c = 0.0;
    Mat x;
};
struct PiecewiseGen {
    std::function<Mat(double)> flow;  // must satisfy flow(0) = I
};
using PathGenerator = std::variant<ExponentialGen, RotatedExponentialGen, PiecewiseGen>;

// Sampled path t in [0,1] -> M(t), M(0) = I, with an optional generator used
// for refinement and closed-form index data.
struct SymplecticPath {
    int n = 0;
    std::vector<double> times;   // increasing, t0 = 0, tN = 1
    std::vector<Mat> samples;    // aligned with times
    std::optional<PathGenerator> generator;
    double time_scale = 1.0;     // samples cover [0, time_scale] of generator time

    const Mat& monodromy() const { return samples.back(); }
};

SymplecticPath path_from_generator(const PathGenerator& gen, int n, int min_samples = 128,
                                   double horizon = 1.0);
SymplecticPath path_from_samples(std::vector<double> times, std::vector<Mat> samples);

// gamma(t) = gamma(t-j) gamma(1)^j on [0,k], reparametrized to [0,1].
SymplecticPath iterate_path(const SymplecticPath& path, int k);

// --- indices -----------------------------------------------------------------

struct IndexReport {
    int cz = 0;
    double mean = 0.0;
    double mean_error = 0.0;          // certified bound (0 for closed forms)
    bool nondegenerate = false;
    std::vector<double> unit_angles;  // Krein-oriented angles in (0, 2pi)
    int r = 0;
};

// Conley-Zehnder index of a nondegenerate path, clockwise convention with
// cz(e^{t J0 S}) = Ind(S) - n. Winding of the polar-unitary determinant along
// the path plus a numerically constructed closing arc through the endpoint's
// canonical coordinates.
int cz_index(const SymplecticPath& path, double degeneracy_tol = 1e-8);

// Loop index, additive, normalized so the uniformly oriented elliptic loops
// carry their construction index; maslov(e^{2 pi J0 t}) = -1 on R^2.
int maslov_index(const SymplecticPath& loop, double loop_tol = 1e-10);

struct MeanIndex {
    double value = 0.0;
    double error_bound = 0.0;  // 0 when closed form
    int s_used = 0;            // 0 when closed form
};

// Exact for exponential-type generators (Krein-signature rate of the
// generator); otherwise i(s)/s with the |i(s) - s ihat| <= n certificate.
MeanIndex mean_index(const SymplecticPath& path, int s_max = 16, double tol = 1e-8);

IndexReport index_report(const SymplecticPath& path, int s_max = 16, double tol = 1e-8);

bool admissible(const Mat& monodromy, int k, double tol = 1e-8);

// Winding (radians) of det_C of the polar-unitary factor along samples;
// increments above pi/2 raise ResolutionError.
double winding_along(const std::vector<Mat>& samples);

// Krein-signed rotation rate of e^{tX}: sum over eigenvalue clusters i*beta
// (beta > 0) of signature(beta) * beta. The mean index of the path is
// -rate/pi.
double krein_rotation_rate(const Mat& x, double tol = 1e-9);

// Angles of unit-circle eigenvalue pairs of a nondegenerate monodromy,
// oriented by the Krein form, each in (0, 2pi).
std::vector<double> krein_unit_angles(const Mat& monodromy, double tol = 1e-8);

// --- aux ---------------------------------------------------------------------

struct SupportInterval {
    double lo = 0.0, hi = 0.0;
};
SupportInterval support_interval(double mean, int n);

struct TwistGap {
    bool disjoint = false;
    double margin = 0.0;
};
TwistGap twist_gap_check(double ihat_z, double ihat_z0, double ihat_inf, long long p_j,
                         long long p_jm, int n);

struct PrimeSequence {
    std::vector<long long> primes;
    double max_gap_ratio = 0.0;
};
PrimeSequence prime_sequence(long long start, int count);

// Index-parity case analysis for the low-dimensional argument. Flags the
// fixed points forced to be twist points by parity alone.
struct CaseAnalysis {
    std::string case_tag;           // "real-hyperbolic", "elliptic", "even-at-infinity"
    bool i_inf_integer = false;
    bool i_inf_odd = false;         // meaningful when non-integer mean at infinity
    std::vector<int> twist_flags;   // indices into the fixed point list
    std::vector<std::string> trail;
};

struct EigenClass;  // from normal_forms.hpp
CaseAnalysis theorem_low_dim_cases(int n, const std::vector<EigenClass>& phi1q_classes,
                                   const std::vector<IndexReport>& fixed_points);

} // namespace sympcal
