#include "sympcal/index_theory.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "sympcal/darboux.hpp"
#include "sympcal/errors.hpp"
#include "sympcal/normal_forms.hpp"

namespace sympcal {

namespace {

Mat eval_generator(const PathGenerator& gen, double t) {
    if (const auto* e = std::get_if<ExponentialGen>(&gen)) return expm(t * e->x);
    if (const auto* r = std::get_if<RotatedExponentialGen>(&gen)) {
        const int n = static_cast<int>(r->x.rows()) / 2;
        return expm(r->c * t * standard_j(n)) * expm(t * r->x);
    }
    return std::get<PiecewiseGen>(gen).flow(t);
}

double principal_increment(double a, double prev) {
    double da = a - prev;
    while (da > M_PI) da -= 2 * M_PI;
    while (da < -M_PI) da += 2 * M_PI;
    return da;
}

} // namespace

double winding_along(const std::vector<Mat>& samples) {
    double total = 0.0;
    double prev = 0.0;
    bool first = true;
    for (const auto& m : samples) {
        const Complex d = rotation_det(m);
        const double a = std::arg(d);
        if (!first) {
            const double da = principal_increment(a, prev);
            if (std::abs(da) > M_PI / 2) {
                std::ostringstream os;
                os << "winding_along: rotation increment " << da
                   << " exceeds pi/2; refine the path sampling";
                throw ResolutionError(os.str());
            }
            total += da;
        }
        prev = a;
        first = false;
    }
    return total;
}

// Winding of a smooth matrix family sampled adaptively until increments are
// tame and the value is stable under refinement.
static double winding_adaptive(const std::function<Mat(double)>& f, int initial) {
    int n = std::max(16, initial);
    double last = 0.0;
    for (int round = 0; round < 8; ++round) {
        std::vector<Mat> samples;
        samples.reserve(n + 1);
        for (int i = 0; i <= n; ++i) samples.push_back(f(static_cast<double>(i) / n));
        try {
            const double w = winding_along(samples);
            if (round > 0 && std::abs(w - last) < 1e-9) return w;
            last = w;
            n *= 2;
        } catch (const ResolutionError&) {
            n *= 2;
            round = std::max(-1, round - 1);  // retry at finer resolution
            last = 0.0;
        }
        if (n > (1 << 22)) throw ResolutionError("winding_adaptive: refinement cap exceeded");
    }
    return last;
}

SymplecticPath path_from_generator(const PathGenerator& gen, int n, int min_samples, double horizon) {
    SymplecticPath p;
    p.n = n;
    p.generator = gen;
    p.time_scale = horizon;
    int count = std::max(16, min_samples);
    for (int round = 0; round < 10; ++round) {
        p.times.clear();
        p.samples.clear();
        for (int i = 0; i <= count; ++i) {
            const double t = horizon * static_cast<double>(i) / count;
            p.times.push_back(static_cast<double>(i) / count);
            p.samples.push_back(eval_generator(gen, t));
        }
        try {
            winding_along(p.samples);
            return p;
        } catch (const ResolutionError&) {
            count *= 2;
        }
    }
    throw ResolutionError("path_from_generator: could not satisfy the increment bound");
}

SymplecticPath path_from_samples(std::vector<double> times, std::vector<Mat> samples) {
    if (times.size() != samples.size() || times.size() < 2)
        throw DomainError("path_from_samples: need matching, nonempty times/samples");
    if (std::abs(times.front()) > 1e-14 || std::abs(times.back() - 1.0) > 1e-12)
        throw DomainError("path_from_samples: domain must be [0,1]");
    if ((samples.front() - Mat::Identity(samples[0].rows(), samples[0].cols())).norm() > 1e-10)
        throw DomainError("path_from_samples: path must start at the identity");
    SymplecticPath p;
    p.n = static_cast<int>(samples[0].rows()) / 2;
    p.times = std::move(times);
    p.samples = std::move(samples);
    return p;
}

SymplecticPath iterate_path(const SymplecticPath& path, int k) {
    if (k < 1) throw DomainError("iterate_path: k must be >= 1");
    if (k == 1) return path;
    SymplecticPath out;
    out.n = path.n;
    if (path.generator) {
        if (const auto* e = std::get_if<ExponentialGen>(&*path.generator)) {
            // semigroup property: the generator extends to [0,k]
            return path_from_generator(ExponentialGen{*e}, path.n,
                                       static_cast<int>(path.samples.size() - 1) * k,
                                       path.time_scale * k);
        }
        if (const auto* r = std::get_if<RotatedExponentialGen>(&*path.generator)) {
            // valid extension only when the rotated form is the actual flow
            PathGenerator g = *path.generator;
            (void)r;
            return path_from_generator(g, path.n,
                                       static_cast<int>(path.samples.size() - 1) * k,
                                       path.time_scale * k);
        }
    }
    const Mat m1 = path.monodromy();
    Mat power = Mat::Identity(m1.rows(), m1.cols());
    const int per = static_cast<int>(path.samples.size()) - 1;
    out.times.reserve(per * k + 1);
    out.samples.reserve(per * k + 1);
    out.times.push_back(0.0);
    out.samples.push_back(path.samples.front());
    for (int j = 0; j < k; ++j) {
        for (int i = 1; i <= per; ++i) {
            out.times.push_back((j + path.times[i]) / k);
            out.samples.push_back(path.samples[i] * power);
        }
        power = m1 * power;
    }
    return out;
}

// -----------------------------------------------------------------------------
// Closing arc: slide the canonical blocks of the (semisimple) monodromy to the
// reference point, then unwind the conjugator; every arc stays nondegenerate.

namespace {

struct ClosingData {
    double winding = 0.0;
};

Mat blocks_at(const std::vector<CanonicalBlock>& blocks, double s) {
    std::vector<CanonicalBlock> cur = blocks;
    for (auto& b : cur) {
        switch (b.kind) {
            case CanonicalBlockKind::Elliptic:
                b.angle = (1.0 - s) * b.angle + s * M_PI;
                break;
            case CanonicalBlockKind::MinusOnePair:
                break;
            case CanonicalBlockKind::PositiveHyperbolic:
                b.lambda = std::exp((1.0 - s) * std::log(b.lambda) + s * std::log(2.0));
                break;
            case CanonicalBlockKind::NegativeHyperbolic:
                b.lambda = -std::exp((1.0 - s) * std::log(-b.lambda));
                break;
            case CanonicalBlockKind::Quadruple:
                b.rho = std::exp((1.0 - s) * std::log(b.rho) + s * std::log(2.0));
                b.angle = (1.0 - s) * b.angle;
                break;
        }
    }
    return realize_blocks(cur);
}

// Path from the symplectic conjugator P to the identity: unitary factor
// rotated to I through its eigenphases, positive factor through its
// symmetric logarithm.
std::function<Mat(double)> conjugator_path(const Mat& p) {
    const int n = static_cast<int>(p.rows()) / 2;
    const Mat u = polar_unitary(p);
    Mat h = u.transpose() * p;  // symmetric positive definite, symplectic
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> hs(h);
    const Mat logh = hs.eigenvectors() *
                     hs.eigenvalues().array().log().matrix().asDiagonal() *
                     hs.eigenvectors().transpose();
    const CMat uc = complex_form(u);
    Eigen::ComplexEigenSolver<CMat> ues(uc);
    const CVec phases = ues.eigenvalues();
    const CMat v = ues.eigenvectors();
    const CMat vinv = v.inverse();
    std::vector<double> phis(n);
    for (int i = 0; i < n; ++i) phis[i] = std::arg(phases(i));
    return [=](double s) {
        CVec d(n);
        for (int i = 0; i < n; ++i) d(i) = std::polar(1.0, (1.0 - s) * phis[i]);
        const CMat us = v * d.asDiagonal() * vinv;
        Mat ur(2 * n, 2 * n);
        ur.topLeftCorner(n, n) = us.real();
        ur.topRightCorner(n, n) = -us.imag();
        ur.bottomLeftCorner(n, n) = us.imag();
        ur.bottomRightCorner(n, n) = us.real();
        return (ur * expm((1.0 - s) * logh)).eval();
    };
}

ClosingData closing_arc_winding(const Mat& monodromy, double tol) {
    ClosingData out;
    const DarbouxSplit split = darboux_split(monodromy, tol);
    const Mat p = split.p;
    const Mat pinv = p.partialPivLu().solve(Mat::Identity(p.rows(), p.cols()));

    out.winding += winding_adaptive(
        [&](double s) { return (p * blocks_at(split.blocks, s) * pinv).eval(); }, 64);

    const Mat w = blocks_at(split.blocks, 1.0);
    const auto pc = conjugator_path(p);
    out.winding += winding_adaptive(
        [&](double s) {
            const Mat ps = pc(s);
            return (ps * w * ps.partialPivLu().solve(Mat::Identity(w.rows(), w.cols()))).eval();
        },
        64);
    return out;
}

} // namespace

int cz_index(const SymplecticPath& path, double degeneracy_tol) {
    const Mat& m1 = path.monodromy();
    Eigen::EigenSolver<Mat> es(m1);
    const double dist1 = (es.eigenvalues().array() - Complex(1, 0)).abs().minCoeff();
    if (dist1 <= degeneracy_tol)
        throw DegeneracyError("cz_index: monodromy has 1 as an eigenvalue at tolerance");

    const double w_path = winding_along(path.samples);
    const ClosingData close = closing_arc_winding(m1, std::max(degeneracy_tol, 1e-9));
    const double raw = -(w_path + close.winding) / M_PI;
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 5e-3)
        throw InternalError("cz_index: winding total is not an integer multiple of pi");
    return static_cast<int>(rounded);
}

int maslov_index(const SymplecticPath& loop, double loop_tol) {
    const Mat& m1 = loop.monodromy();
    if ((m1 - Mat::Identity(m1.rows(), m1.cols())).norm() > loop_tol)
        throw LoopError("maslov_index: path endpoint is not the identity");
    const double w = winding_along(loop.samples);
    const double raw = -w / (2 * M_PI);
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-6)
        throw InternalError("maslov_index: loop winding is not a multiple of 2 pi");
    return static_cast<int>(rounded);
}

// Krein signature of the generalized eigenspace of X for eigenvalue i*beta.
static int krein_signature(const Mat& x, double beta, double tol) {
    const int dim = static_cast<int>(x.rows());
    const int n = dim / 2;
    const Mat j = standard_j(n);
    CMat shifted = x.cast<Complex>() - Complex(0, beta) * CMat::Identity(dim, dim);
    CMat power = CMat::Identity(dim, dim);
    for (int i = 0; i < dim; ++i) power = power * shifted;
    Eigen::JacobiSVD<CMat> svd(power, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = std::max(1e-10, 1e-8 * sv(0));
    std::vector<int> kernel;
    for (int i = 0; i < dim; ++i)
        if (sv(i) < cutoff) kernel.push_back(i);
    if (kernel.empty()) return 0;
    const int k = static_cast<int>(kernel.size());
    CMat gram(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            gram(a, b) = Complex(0, -1) *
                         (svd.matrixV().col(kernel[a]).adjoint() *
                          (j.cast<Complex>() * svd.matrixV().col(kernel[b])))(0);
    Eigen::SelfAdjointEigenSolver<CMat> gs((gram + gram.adjoint()) / 2.0);
    int sig = 0;
    for (int a = 0; a < k; ++a) {
        if (gs.eigenvalues()(a) > tol) ++sig;
        else if (gs.eigenvalues()(a) < -tol) --sig;
        else throw UnsupportedError("krein_signature: degenerate Krein form");
    }
    return sig;
}

double krein_rotation_rate(const Mat& x, double tol) {
    Eigen::EigenSolver<Mat> es(x);
    const CVec lam = es.eigenvalues();
    // cluster positive imaginary parts of near-imaginary eigenvalues
    std::vector<double> betas;
    for (int i = 0; i < lam.size(); ++i) {
        const Complex l = lam(i);
        if (l.imag() <= tol) continue;
        if (std::abs(l.real()) > 1e-7 * std::max(1.0, std::abs(l))) continue;
        bool found = false;
        for (double b : betas)
            if (std::abs(b - l.imag()) < 1e-7 * std::max(1.0, b)) { found = true; break; }
        if (!found) betas.push_back(l.imag());
    }
    double rate = 0.0;
    for (double b : betas) rate += krein_signature(x, b, 1e-10) * b;
    return rate;
}

std::vector<double> krein_unit_angles(const Mat& monodromy, double tol) {
    // Darboux split orients each unit plane; elliptic block angles are the
    // Krein-positive representatives in (0, 2pi).
    std::vector<double> angles;
    const DarbouxSplit split = darboux_split(monodromy, tol);
    for (const auto& b : split.blocks) {
        if (b.kind == CanonicalBlockKind::Elliptic) angles.push_back(b.angle);
        else if (b.kind == CanonicalBlockKind::MinusOnePair) angles.push_back(M_PI);
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

MeanIndex mean_index(const SymplecticPath& path, int s_max, double tol) {
    MeanIndex out;
    if (path.generator) {
        if (const auto* e = std::get_if<ExponentialGen>(&*path.generator)) {
            out.value = -krein_rotation_rate(e->x) / M_PI * path.time_scale;
            return out;
        }
        if (const auto* r = std::get_if<RotatedExponentialGen>(&*path.generator)) {
            const int n = static_cast<int>(r->x.rows()) / 2;
            out.value = -(r->c * n + krein_rotation_rate(r->x)) / M_PI * path.time_scale;
            return out;
        }
    }
    // generic estimator i(s)/s, skipping to the nearest admissible iterate
    const Mat& m1 = path.monodromy();
    int s = s_max;
    while (s >= 1 && !admissible(m1, s, tol)) --s;
    if (s < 1) {
        s = s_max + 1;
        while (s <= 4 * s_max && !admissible(m1, s, tol)) ++s;
    }
    if (s < 1 || s > 4 * s_max)
        throw DegeneracyError("mean_index: no admissible iterate near s_max");
    const SymplecticPath it = iterate_path(path, s);
    const int idx = cz_index(it, tol);
    out.value = static_cast<double>(idx) / s;
    out.error_bound = static_cast<double>(path.n) / s;
    out.s_used = s;
    return out;
}

IndexReport index_report(const SymplecticPath& path, int s_max, double tol) {
    IndexReport rep;
    const Mat& m1 = path.monodromy();
    Eigen::EigenSolver<Mat> es(m1);
    const double dist1 = (es.eigenvalues().array() - Complex(1, 0)).abs().minCoeff();
    rep.nondegenerate = dist1 > tol;
    rep.cz = cz_index(path, tol);
    const MeanIndex mi = mean_index(path, s_max, tol);
    rep.mean = mi.value;
    rep.mean_error = mi.error_bound;
    rep.unit_angles = krein_unit_angles(m1, tol);
    rep.r = static_cast<int>(rep.unit_angles.size());
    return rep;
}

bool admissible(const Mat& monodromy, int k, double tol) {
    if (k < 1) throw DomainError("admissible: k must be >= 1");
    Eigen::EigenSolver<Mat> es(monodromy);
    const CVec lam = es.eigenvalues();
    for (int i = 0; i < lam.size(); ++i) {
        const Complex l = lam(i);
        if (std::abs(l - Complex(1, 0)) <= tol) continue;
        if (std::abs(std::pow(l, k) - Complex(1, 0)) <= tol) return false;
    }
    return true;
}

SupportInterval support_interval(double mean, int n) { return {mean - n, mean + n}; }

TwistGap twist_gap_check(double ihat_z, double ihat_z0, double ihat_inf, long long p_j,
                         long long p_jm, int n) {
    if (p_jm <= p_j) throw DomainError("twist_gap_check: requires p_{j+m} > p_j");
    const double lhs = std::abs(static_cast<double>(p_jm) * ihat_z -
                                static_cast<double>(p_j) * ihat_z0 -
                                static_cast<double>(p_jm - p_j) * ihat_inf);
    TwistGap out;
    out.margin = lhs - 3.0 * n;
    out.disjoint = lhs > 3.0 * n;
    return out;
}

PrimeSequence prime_sequence(long long start, int count) {
    if (start < 2) throw DomainError("prime_sequence: start must be >= 2");
    if (count < 1) throw DomainError("prime_sequence: count must be >= 1");
    auto is_prime = [](long long v) {
        if (v < 2) return false;
        if (v % 2 == 0) return v == 2;
        for (long long d = 3; d * d <= v; d += 2)
            if (v % d == 0) return false;
        return true;
    };
    PrimeSequence out;
    long long v = start;
    while (static_cast<int>(out.primes.size()) < count) {
        if (is_prime(v)) out.primes.push_back(v);
        ++v;
    }
    for (size_t i = 0; i + 1 < out.primes.size(); ++i) {
        const double ratio = static_cast<double>(out.primes[i + 1] - out.primes[i]) /
                             static_cast<double>(out.primes[i]);
        out.max_gap_ratio = std::max(out.max_gap_ratio, ratio);
    }
    return out;
}

CaseAnalysis theorem_low_dim_cases(int n, const std::vector<EigenClass>& phi1q_classes,
                                   const std::vector<IndexReport>& fixed_points) {
    if (n != 1 && n != 2) throw UnsupportedError("theorem_low_dim_cases: only n in {1,2}");
    for (const auto& fp : fixed_points)
        if (!fp.nondegenerate)
            throw DegeneracyError("theorem_low_dim_cases: all fixed points must be nondegenerate");

    bool all_real = true, all_positive = true, all_negative = true;
    bool elliptic_pair = false, quadruple = false;
    for (const auto& c : phi1q_classes) {
        switch (c.kind) {
            case EigenKind::PositiveReal: all_negative = false; break;
            case EigenKind::NegativeReal:
            case EigenKind::MinusOne: all_positive = false; break;
            case EigenKind::UnitNonReal:
                all_real = all_positive = all_negative = false;
                elliptic_pair = true;
                break;
            case EigenKind::ComplexQuadruple:
                all_real = all_positive = all_negative = false;
                quadruple = true;
                break;
            case EigenKind::One:
                throw DegeneracyError("theorem_low_dim_cases: quadratic form at infinity is degenerate");
        }
    }

    CaseAnalysis out;
    auto note = [&](const std::string& s) { out.trail.push_back(s); };

    if (n == 1) {
        if (all_real) {
            out.case_tag = "real-hyperbolic";
            out.i_inf_integer = true;
            note("spectrum at infinity real: mean index at infinity equals the integer index");
            // indices adjacent to the crowd must be twist points: flag any fixed
            // point whose cz differs by exactly 1 from another's
            for (size_t i = 0; i < fixed_points.size(); ++i)
                for (size_t j = 0; j < fixed_points.size(); ++j)
                    if (i != j && fixed_points[j].cz == fixed_points[i].cz + 1) {
                        out.twist_flags.push_back(static_cast<int>(j));
                        note("fixed point " + std::to_string(j) +
                             ": index one above a neighbor, |i - ihat| < 1 forces ihat != ihat_inf");
                    }
        } else if (elliptic_pair) {
            out.case_tag = "elliptic";
            out.i_inf_odd = true;
            note("elliptic spectrum at infinity: index at infinity is odd, mean non-integral");
            for (size_t i = 0; i < fixed_points.size(); ++i)
                if (fixed_points[i].cz % 2 == 0) {
                    out.twist_flags.push_back(static_cast<int>(i));
                    note("fixed point " + std::to_string(i) +
                         ": even index forces an integer mean, distinct from the mean at infinity");
                }
        } else {
            throw UnsupportedError("theorem_low_dim_cases: n=1 configuration not in the case list");
        }
    } else {
        if (!(all_positive || all_negative || (quadruple && !elliptic_pair)))
            throw UnsupportedError("theorem_low_dim_cases: n=2 hypothesis requires all-positive, "
                                   "all-negative, or quadruple spectrum");
        out.case_tag = "even-at-infinity";
        out.i_inf_integer = true;
        note("spectrum hypothesis: index at infinity is an even integer equal to its mean");
        for (size_t i = 0; i < fixed_points.size(); ++i)
            if (std::abs(fixed_points[i].cz) % 2 == 1) {
                out.twist_flags.push_back(static_cast<int>(i));
                note("fixed point " + std::to_string(i) +
                     ": odd index with |i - ihat| < 1 forces ihat != ihat_inf");
            }
    }
    std::sort(out.twist_flags.begin(), out.twist_flags.end());
    out.twist_flags.erase(std::unique(out.twist_flags.begin(), out.twist_flags.end()),
                          out.twist_flags.end());
    return out;
}

} // namespace sympcal
