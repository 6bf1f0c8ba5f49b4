#include "sympcal/normal_forms.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace sympcal {

SymplecticMatrix certify_symplectic(const Mat& m, double tol) {
    const double resid = symplectic_residual(m);
    if (resid > tol) {
        std::ostringstream os;
        os << "certify_symplectic: residual " << resid << " exceeds tolerance " << tol;
        throw DomainError(os.str());
    }
    SymplecticMatrix s;
    s.n = static_cast<int>(m.rows()) / 2;
    s.m = m;
    s.certified_tol = std::max(resid, tol);
    return s;
}

Mat jordan_a(double lambda, int m) {
    Mat a = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        a(i, i) = lambda;
        if (i + 1 < m) a(i, i + 1) = 1.0;
    }
    return a;
}

Mat lower_c(double lambda, int m) {
    Mat c = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) c(i, j) = -std::pow(-lambda, -(i - j + 1.0));
    return c;
}

Mat lower_b(double lambda, const std::vector<double>& b) {
    const int m = static_cast<int>(b.size());
    Mat bm = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) bm(i, j) = std::pow(-lambda, j) * b[i];
    return bm;
}

Mat block_jordan_a(const Mat& r, int m) {
    Mat a = Mat::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        a.block(2 * i, 2 * i, 2, 2) = r;
        if (i + 1 < m) a.block(2 * i, 2 * i + 2, 2, 2) = Mat::Identity(2, 2);
    }
    return a;
}

Mat block_lower_c(double theta, int m, double scale) {
    Mat c = Mat::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            const int k = i - j + 1;
            c.block(2 * i, 2 * j, 2, 2) = -std::pow(-scale, k) * rot2(k * theta);
        }
    return c;
}

static Mat assemble_upper(const Mat& a, const Mat& b, const Mat& c) {
    const int m = static_cast<int>(a.rows());
    Mat r = Mat::Zero(2 * m, 2 * m);
    r.topLeftCorner(m, m) = a;
    r.topRightCorner(m, m) = b;
    r.bottomRightCorner(m, m) = c;
    return r;
}

static void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

namespace {

struct Builder {
    Mat operator()(const N1Block& b) const {
        require(b.lambda == 1.0 || b.lambda == -1.0, "N1: lambda must be +-1");
        require(b.b == 0.0 || b.b == 1.0 || b.b == -1.0, "N1: b must be 0 or +-1");
        Mat m(2, 2);
        m << b.lambda, b.b, 0.0, b.lambda;
        return m;
    }
    Mat operator()(const NmBlock& b) const {
        const int m = static_cast<int>(b.b.size());
        require(m >= 2, "Nm: m must be >= 2");
        require(b.lambda == 1.0 || b.lambda == -1.0, "Nm: lambda must be +-1");
        return assemble_upper(jordan_a(b.lambda, m), lower_b(b.lambda, b.b), lower_c(b.lambda, m));
    }
    Mat operator()(const RotationBlock& b) const {
        require(b.theta > -M_PI && b.theta < M_PI && b.theta != 0.0,
                "R: theta must lie in (-pi, pi) \\ {0}");
        return rot2(b.theta);
    }
    Mat operator()(const N2mUnitBlock& b) const {
        require(b.m >= 1, "N2m unit: m must be >= 1");
        require(std::abs(b.theta) > 0.0 && std::abs(b.theta) < M_PI,
                "N2m unit: |theta| must lie in (0, pi)");
        const Mat a = block_jordan_a(rot2(b.theta), b.m);
        const Mat c = block_lower_c(b.theta, b.m, 1.0);
        Mat bb = b.b_blocks.value_or(Mat::Zero(2 * b.m, 2 * b.m));
        require(bb.rows() == 2 * b.m && bb.cols() == 2 * b.m, "N2m unit: B has wrong size");
        // symplectic constraint on the supplied blocks, verified not derived
        if ((bb.transpose() * c - c.transpose() * bb).norm() > 1e-10 * std::max(1.0, bb.norm()))
            throw DomainError("N2m unit: supplied B violates B^T C = C^T B");
        Mat m = assemble_upper(a, bb, c);
        if (symplectic_residual(m) > 1e-10)
            throw DomainError("N2m unit: assembled matrix is not symplectic");
        return m;
    }
    Mat operator()(const N2mPlus1UnitBlock& blk) const {
        require(blk.m >= 1, "N2m+1 unit: m must be >= 1");
        require(blk.theta > 0.0 && blk.theta < M_PI, "N2m+1 unit: theta must lie in (0, pi)");
        require(blk.b_last == 1 || blk.b_last == -1, "N2m+1 unit: b_{m+1} must be +-1");
        const double th = (blk.b_last == -1) ? blk.theta : -blk.theta;
        const double c0 = std::cos(th), s0 = std::sin(th);
        const int m = blk.m, n = 2 * m + 1;
        const Mat a = block_jordan_a(rot2(th), m);
        const Mat c = block_lower_c(th, m, 1.0);
        Vec d = Vec::Zero(2 * m), e = Vec::Zero(2 * m);
        if (blk.b_last == -1) { d(2 * m - 2) = 1.0; e(2 * m - 1) = 1.0; }
        else                  { d(2 * m - 1) = 1.0; e(2 * m - 2) = 1.0; }
        Vec f, g;
        Mat bb;
        if (blk.f && blk.g) {
            f = *blk.f; g = *blk.g;
            bb = blk.b_blocks.value_or(Mat::Zero(2 * m, 2 * m));
        } else {
            // Solve the symplectic constraints for the undetermined columns:
            //   s f - c g = C^T D,   c f + s g = C^T E,
            // then absorb the remaining skew defect of f g^T into B.
            const Vec dd = c.transpose() * d, ee = c.transpose() * e;
            f = s0 * dd + c0 * ee;
            g = -c0 * dd + s0 * ee;
            const Mat k = f * g.transpose();
            const Mat skew = 0.5 * (k - k.transpose());
            bb = c.transpose().partialPivLu().solve(skew);
        }
        Mat mmat = Mat::Zero(2 * n, 2 * n);
        mmat.block(0, 0, 2 * m, 2 * m) = a;
        mmat.block(0, 2 * m, 2 * m, 1) = d;
        mmat.block(0, n, 2 * m, 2 * m) = bb;
        mmat.block(0, 2 * n - 1, 2 * m, 1) = e;
        mmat(2 * m, 2 * m) = c0;
        mmat.block(2 * m, n, 1, 2 * m) = f.transpose();
        mmat(2 * m, 2 * n - 1) = -s0;
        mmat.block(n, n, 2 * m, 2 * m) = c;
        mmat(2 * n - 1, 2 * m) = s0;
        mmat.block(2 * n - 1, n, 1, 2 * m) = g.transpose();
        mmat(2 * n - 1, 2 * n - 1) = c0;
        if (symplectic_residual(mmat) > 1e-10)
            throw DomainError("N2m+1 unit: assembled matrix is not symplectic");
        return mmat;
    }
    Mat operator()(const MmBlock& b) const {
        require(b.m >= 1, "Mm: m must be >= 1");
        require(b.lambda != 0.0 && std::abs(b.lambda) != 1.0, "Mm: lambda must avoid {0, +-1}");
        Mat m = Mat::Zero(2 * b.m, 2 * b.m);
        m.topLeftCorner(b.m, b.m) = jordan_a(b.lambda, b.m);
        m.bottomRightCorner(b.m, b.m) = lower_c(b.lambda, b.m);
        return m;
    }
    Mat operator()(const N2mQuadBlock& b) const {
        require(b.m >= 1, "N2m quad: m must be >= 1");
        require(b.rho > 0.0 && b.rho != 1.0, "N2m quad: rho must be positive, != 1");
        require(b.theta > 0.0 && b.theta < M_PI, "N2m quad: theta must lie in (0, pi)");
        Mat m = Mat::Zero(4 * b.m, 4 * b.m);
        m.topLeftCorner(2 * b.m, 2 * b.m) = block_jordan_a(b.rho * rot2(b.theta), b.m);
        m.bottomRightCorner(2 * b.m, 2 * b.m) = block_lower_c(b.theta, b.m, 1.0 / b.rho);
        return m;
    }
};

} // namespace

Mat build_normal_form(const NormalFormBlock& block) {
    Mat m = std::visit(Builder{}, block);
    if (symplectic_residual(m) > 1e-12)
        throw InternalError("build_normal_form: constructor produced a non-symplectic matrix");
    return m;
}

int block_half_dim(const NormalFormBlock& block) {
    struct V {
        int operator()(const N1Block&) const { return 1; }
        int operator()(const NmBlock& b) const { return static_cast<int>(b.b.size()); }
        int operator()(const RotationBlock&) const { return 1; }
        int operator()(const N2mUnitBlock& b) const { return 2 * b.m; }
        int operator()(const N2mPlus1UnitBlock& b) const { return 2 * b.m + 1; }
        int operator()(const MmBlock& b) const { return b.m; }
        int operator()(const N2mQuadBlock& b) const { return 2 * b.m; }
    };
    return std::visit(V{}, block);
}

int EigenClass::cardinality() const {
    switch (kind) {
        case EigenKind::One:
        case EigenKind::MinusOne: return 1;
        case EigenKind::UnitNonReal:
        case EigenKind::PositiveReal:
        case EigenKind::NegativeReal: return 2;
        case EigenKind::ComplexQuadruple: return 4;
    }
    return 0;
}

int total_classified_dimension(const std::vector<EigenClass>& classes) {
    int d = 0;
    for (const auto& c : classes) d += c.cardinality() * c.multiplicity;
    return d;
}

std::vector<EigenClass> classify_eigenvalues(const Mat& m, double tol) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0)
        throw DimensionError("classify_eigenvalues: matrix must be square of even dimension");
    Eigen::EigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) throw InternalError("classify_eigenvalues: eigensolver failed");
    const CVec lam = es.eigenvalues();
    const int dim = static_cast<int>(lam.size());

    struct Raw {
        EigenKind kind;
        double theta, lambda, rho;
    };
    std::vector<Raw> raws;
    for (int i = 0; i < dim; ++i) {
        const Complex l = lam(i);
        const double al = std::abs(l);
        const bool near_unit = std::abs(al - 1.0) <= tol;
        const bool near_real = std::abs(l.imag()) <= tol * std::max(1.0, al);
        const bool near_one = std::abs(l - Complex(1, 0)) <= tol;
        const bool near_minus_one = std::abs(l + Complex(1, 0)) <= tol;
        Raw r{};
        if (near_one) {
            r.kind = EigenKind::One;
        } else if (near_minus_one) {
            r.kind = EigenKind::MinusOne;
        } else if (near_unit && near_real) {
            std::ostringstream os;
            os << "classify_eigenvalues: eigenvalue " << l.real() << "+" << l.imag()
               << "i sits within tol of both the unit circle and the real axis";
            throw AmbiguityError(os.str());
        } else if (near_unit) {
            if (l.imag() < 0) continue;  // conjugate partner carries the class
            r.kind = EigenKind::UnitNonReal;
            r.theta = std::atan2(l.imag(), l.real());  // in (0, pi)
        } else if (near_real) {
            const double lr = l.real();
            if (std::abs(lr) < 1.0) continue;  // 1/lambda partner carries the class
            r.kind = lr > 0 ? EigenKind::PositiveReal : EigenKind::NegativeReal;
            r.lambda = lr;
        } else {
            if (l.imag() < 0 || al < 1.0) continue;  // quadruple: keep rho>1, Im>0 corner
            r.kind = EigenKind::ComplexQuadruple;
            r.rho = al;
            r.theta = std::atan2(l.imag(), l.real());
        }
        raws.push_back(r);
    }

    // merge equal classes (within tol) into multiplicities
    std::vector<EigenClass> classes;
    for (const auto& r : raws) {
        bool merged = false;
        for (auto& c : classes) {
            if (c.kind != r.kind) continue;
            const bool same =
                (r.kind == EigenKind::One || r.kind == EigenKind::MinusOne) ||
                (r.kind == EigenKind::UnitNonReal && std::abs(c.theta - r.theta) <= 10 * tol) ||
                ((r.kind == EigenKind::PositiveReal || r.kind == EigenKind::NegativeReal) &&
                 std::abs(c.lambda - r.lambda) <= 10 * tol * std::abs(c.lambda)) ||
                (r.kind == EigenKind::ComplexQuadruple && std::abs(c.rho - r.rho) <= 10 * tol * c.rho &&
                 std::abs(c.theta - r.theta) <= 10 * tol);
            if (same) {
                ++c.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) {
            EigenClass c;
            c.kind = r.kind;
            c.theta = r.theta;
            c.lambda = r.lambda;
            c.rho = r.rho;
            c.multiplicity = 1;
            classes.push_back(c);
        }
    }

    if (total_classified_dimension(classes) != dim)
        throw AmbiguityError(
            "classify_eigenvalues: class dimensions do not account for the whole spectrum "
            "(pairing partner missing at this tolerance)");

    std::sort(classes.begin(), classes.end(), [](const EigenClass& a, const EigenClass& b) {
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.rho != b.rho) return a.rho < b.rho;
        return a.theta < b.theta;
    });
    return classes;
}

Mat random_symmetric(int dim, CounterRng& rng, double scale) {
    Mat s(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) s(i, j) = s(j, i) = scale * rng.normal();
    return s;
}

Mat random_symplectic_conjugator(int n, CounterRng& rng, double scale) {
    const Mat s = random_symmetric(2 * n, rng, scale);
    return expm(standard_j(n) * s);
}

RandomSymplectic random_symplectic(int n, std::uint64_t seed, const RandomSymplecticOptions& opt) {
    if (n < 1) throw DomainError("random_symplectic: n must be >= 1");
    CounterRng rng(seed);
    const double budget = std::max(0.1, opt.conditioning_budget);

    RandomSymplectic out;
    int remaining = n;
    while (remaining > 0) {
        const int kind = rng.uniform_int(0, 5);
        switch (kind) {
            case 0: {  // rotation plane
                if (!opt.allow_unit_eigenvalues) { continue; }
                double th = rng.uniform(-M_PI + 0.2, M_PI - 0.2);
                if (std::abs(th) < 0.1) th = th < 0 ? -0.1 : 0.1;
                out.blocks.push_back(RotationBlock{th});
                remaining -= 1;
                break;
            }
            case 1: {  // positive hyperbolic pair
                const double lam = std::exp(rng.uniform(0.1, 0.6 * budget));
                out.blocks.push_back(MmBlock{lam, 1});
                remaining -= 1;
                break;
            }
            case 2: {  // negative hyperbolic pair
                if (!opt.allow_negative_real) continue;
                const double lam = -std::exp(rng.uniform(0.1, 0.6 * budget));
                out.blocks.push_back(MmBlock{lam, 1});
                remaining -= 1;
                break;
            }
            case 3: {  // quadruple
                if (remaining < 2) continue;
                const double rho = std::exp(rng.uniform(0.1, 0.5 * budget));
                const double th = rng.uniform(0.2, M_PI - 0.2);
                out.blocks.push_back(N2mQuadBlock{rho, th, 1});
                remaining -= 2;
                break;
            }
            case 4: {  // hyperbolic Jordan pair
                if (!opt.jordan_blocks || remaining < 2) continue;
                const double lam = std::exp(rng.uniform(0.2, 0.5 * budget));
                out.blocks.push_back(MmBlock{opt.allow_negative_real && rng.uniform() < 0.3 ? -lam : lam, 2});
                remaining -= 2;
                break;
            }
            default: {  // parabolic +-1 block
                if (!opt.allow_unit_eigenvalues) continue;
                const double lam = (opt.allow_negative_real && rng.uniform() < 0.5) ? -1.0 : 1.0;
                const double b = static_cast<double>(rng.uniform_int(-1, 1));
                out.blocks.push_back(N1Block{lam, b});
                remaining -= 1;
                break;
            }
        }
    }

    std::vector<Mat> mats;
    mats.reserve(out.blocks.size());
    for (const auto& b : out.blocks) mats.push_back(build_normal_form(b));
    const Mat core = diamond_many(mats);
    out.conjugator = random_symplectic_conjugator(n, rng, 0.35 * budget);
    const Mat m = out.conjugator * core * out.conjugator.partialPivLu().solve(Mat::Identity(2 * n, 2 * n));
    out.matrix = certify_symplectic(m, 1e-9);
    out.classes = classify_eigenvalues(m, 1e-8);
    return out;
}

} // namespace sympcal
