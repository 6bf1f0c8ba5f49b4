#include "sympcal/darboux.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "sympcal/errors.hpp"

namespace sympcal {

namespace {

double sig(const Vec& a, const Vec& b, const Mat& j) { return a.dot(j * b); }

// Measured 2x2 restriction of m to the plane spanned by a Darboux pair
// (e, f) with sigma(f, e) = 1: coordinates [e f].
Mat restrict2(const Mat& m, const Vec& e, const Vec& f, const Mat& j) {
    Mat b(2, 2);
    const Vec me = m * e, mf = m * f;
    b(0, 0) = sig(f, me, j);
    b(1, 0) = -sig(e, me, j);
    b(0, 1) = sig(f, mf, j);
    b(1, 1) = -sig(e, mf, j);
    return b;
}

} // namespace

DarbouxSplit darboux_split(const Mat& m, double tol) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0)
        throw DimensionError("darboux_split: matrix must be square of even dimension");
    const int n = static_cast<int>(m.rows()) / 2;
    const Mat j = standard_j(n);

    Eigen::EigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) throw InternalError("darboux_split: eigensolver failed");
    const CVec lam = es.eigenvalues();
    const CMat vecs = es.eigenvectors();
    const int dim = 2 * n;

    for (int i = 0; i < dim; ++i)
        if (std::abs(lam(i) - Complex(1, 0)) <= tol)
            throw DegeneracyError("darboux_split: 1 is an eigenvalue at tolerance");

    std::vector<bool> used(dim, false);
    std::vector<Vec> qcols, pcols;
    std::vector<CanonicalBlock> blocks;

    // visit in decreasing modulus so inverse partners are consumed together
    std::vector<int> order(dim);
    for (int i = 0; i < dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(lam(a)), mb = std::abs(lam(b));
        if (ma != mb) return ma > mb;
        return lam(a).imag() > lam(b).imag();
    });

    auto gather = [&](const Complex& target, double scale) {
        std::vector<int> out;
        for (int i = 0; i < dim; ++i)
            if (!used[i] && std::abs(lam(i) - target) <= 20 * tol * std::max(1.0, scale)) out.push_back(i);
        return out;
    };

    for (int oi = 0; oi < dim; ++oi) {
        const int idx = order[oi];
        if (used[idx]) continue;
        const Complex l = lam(idx);
        const double al = std::abs(l);
        const bool near_unit = std::abs(al - 1.0) <= tol;
        const bool near_real = std::abs(l.imag()) <= tol * std::max(1.0, al);

        if (near_unit && near_real) {
            // -1 cluster (eigenvalue 1 excluded above)
            const auto sel = gather(Complex(-1, 0), 1.0);
            if (sel.empty()) throw UnsupportedError("darboux_split: unresolvable unit-real cluster");
            for (int i : sel) used[i] = true;
            const int k = static_cast<int>(sel.size());
            if (k % 2 != 0) throw UnsupportedError("darboux_split: odd -1 eigenspace");
            // real eigenspace basis
            Mat w(dim, k);
            for (int a = 0; a < k; ++a) w.col(a) = vecs.col(sel[a]).real();
            Eigen::ColPivHouseholderQR<Mat> qr(w);
            if (qr.rank() < k) {
                Mat wi(dim, 2 * k);
                for (int a = 0; a < k; ++a) {
                    wi.col(2 * a) = vecs.col(sel[a]).real();
                    wi.col(2 * a + 1) = vecs.col(sel[a]).imag();
                }
                Eigen::ColPivHouseholderQR<Mat> qr2(wi);
                if (qr2.rank() < k)
                    throw UnsupportedError("darboux_split: -1 eigenspace is Jordan-degenerate");
                w = qr2.householderQ() * Mat::Identity(dim, k);
            }
            // check semisimplicity: M w = -w on the span
            if ((m * w + w).norm() > 1e3 * tol * std::max(1.0, m.norm()))
                throw UnsupportedError("darboux_split: -1 block is not semisimple at tolerance");
            // symplectic Gram-Schmidt within the eigenspace
            std::vector<Vec> pool;
            for (int a = 0; a < k; ++a) pool.push_back(w.col(a));
            while (!pool.empty()) {
                Vec e = pool.front();
                pool.erase(pool.begin());
                int best = -1;
                double bv = 0.0;
                for (size_t a = 0; a < pool.size(); ++a) {
                    const double v = std::abs(sig(e, pool[a], j));
                    if (v > bv) { bv = v; best = static_cast<int>(a); }
                }
                if (best < 0 || bv < 1e-10)
                    throw UnsupportedError("darboux_split: omega degenerates on the -1 eigenspace");
                Vec f = pool[best];
                pool.erase(pool.begin() + best);
                f /= sig(f, e, j);
                for (auto& u : pool)
                    u = u - sig(f, u, j) * e + sig(e, u, j) * f;
                CanonicalBlock blk;
                blk.kind = CanonicalBlockKind::MinusOnePair;
                blk.realized = -Mat::Identity(2, 2);
                qcols.push_back(e);
                pcols.push_back(f);
                blocks.push_back(blk);
            }
            continue;
        }

        if (near_unit) {
            if (l.imag() < 0) { continue; }
            const auto sel = gather(l, 1.0);
            const auto selc = gather(std::conj(l), 1.0);
            for (int i : sel) used[i] = true;
            for (int i : selc) used[i] = true;
            if (sel.size() != selc.size())
                throw UnsupportedError("darboux_split: conjugate pairing failed on the unit circle");
            const int k = static_cast<int>(sel.size());
            // Krein form -i v* J w on the eigenspace
            CMat gram(k, k);
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    gram(a, b) = Complex(0, -1) * (vecs.col(sel[a]).adjoint() * (j * vecs.col(sel[b])))(0);
            Eigen::SelfAdjointEigenSolver<CMat> gs((gram + gram.adjoint()) / 2.0);
            for (int a = 0; a < k; ++a) {
                if (std::abs(gs.eigenvalues()(a)) < 1e-8)
                    throw UnsupportedError("darboux_split: Krein form degenerates on a unit eigenspace");
                CVec wv = CVec::Zero(dim);
                for (int b = 0; b < k; ++b) wv += gs.eigenvectors()(b, a) * vecs.col(sel[b]);
                const double nb = std::abs((Complex(0, -1) * (wv.adjoint() * (j * wv))(0)).real());
                wv /= std::sqrt(nb);
                Vec x = std::sqrt(2.0) * wv.real();
                Vec y = -std::sqrt(2.0) * wv.imag();
                const double sp = sig(y, x, j);
                if (std::abs(sp) < 1e-10)
                    throw UnsupportedError("darboux_split: degenerate unit plane");
                const double sc = std::sqrt(std::abs(sp));
                Vec e = x / sc;
                Vec f = y / (sp / sc);
                CanonicalBlock blk;
                blk.kind = CanonicalBlockKind::Elliptic;
                blk.realized = restrict2(m, e, f, j);
                double ang = std::atan2(blk.realized(1, 0), blk.realized(0, 0));
                if (ang < 0) ang += 2 * M_PI;
                blk.angle = ang;
                if ((blk.realized - rot2(ang)).norm() > 1e-5)
                    throw UnsupportedError("darboux_split: unit plane does not restrict to a rotation");
                qcols.push_back(e);
                pcols.push_back(f);
                blocks.push_back(blk);
            }
            continue;
        }

        if (near_real) {
            const double lr = l.real();
            if (std::abs(lr) < 1.0) continue;
            const auto sel = gather(Complex(lr, 0), std::abs(lr));
            const auto seli = gather(Complex(1.0 / lr, 0), 1.0);
            for (int i : sel) used[i] = true;
            for (int i : seli) used[i] = true;
            if (sel.size() != seli.size())
                throw UnsupportedError("darboux_split: inverse pairing failed for a real eigenvalue");
            const int k = static_cast<int>(sel.size());
            Mat e(dim, k), f(dim, k);
            for (int a = 0; a < k; ++a) {
                e.col(a) = vecs.col(sel[a]).real();
                f.col(a) = vecs.col(seli[a]).real();
            }
            if ((m * e - lr * e).norm() > 1e3 * tol * std::max(1.0, m.norm()) * e.norm())
                throw UnsupportedError("darboux_split: real eigenvalue block is not semisimple");
            const Mat pairing = f.transpose() * j * e;  // sigma(f_a, e_b)
            Eigen::PartialPivLU<Mat> lu(pairing);
            if (std::abs(lu.determinant()) < 1e-12)
                throw UnsupportedError("darboux_split: real eigenspace pairing degenerates");
            const Mat fd = f * lu.solve(Mat::Identity(k, k)).transpose();
            for (int a = 0; a < k; ++a) {
                CanonicalBlock blk;
                blk.kind = lr > 0 ? CanonicalBlockKind::PositiveHyperbolic
                                  : CanonicalBlockKind::NegativeHyperbolic;
                blk.lambda = lr;
                blk.realized = restrict2(m, e.col(a), fd.col(a), j);
                qcols.push_back(e.col(a));
                pcols.push_back(fd.col(a));
                blocks.push_back(blk);
            }
            continue;
        }

        // quadruple corner: |l| > 1, Im l > 0
        if (l.imag() < 0 || al < 1.0) continue;
        {
            const double rho = al;
            const auto sel = gather(l, al);
            const auto selp = gather(l / (rho * rho), 1.0);
            const auto selc = gather(std::conj(l), al);
            const auto selcp = gather(std::conj(l) / (rho * rho), 1.0);
            for (const auto* sv : {&sel, &selp, &selc, &selcp})
                for (int i : *sv) used[i] = true;
            if (sel.size() != selp.size())
                throw UnsupportedError("darboux_split: quadruple pairing failed");
            for (size_t a = 0; a < sel.size(); ++a) {
                CVec v = vecs.col(sel[a]);
                CVec w = vecs.col(selp[a]);
                Vec e1 = std::sqrt(2.0) * v.real();
                Vec e2 = -std::sqrt(2.0) * v.imag();
                Vec f1 = std::sqrt(2.0) * w.real();
                Vec f2 = -std::sqrt(2.0) * w.imag();
                Mat s2(2, 2);
                s2 << sig(f1, e1, j), sig(f1, e2, j), sig(f2, e1, j), sig(f2, e2, j);
                Eigen::PartialPivLU<Mat> lu(s2);
                if (std::abs(lu.determinant()) < 1e-12)
                    throw UnsupportedError("darboux_split: quadruple plane pairing degenerates");
                Mat fm(dim, 2);
                fm.col(0) = f1;
                fm.col(1) = f2;
                fm = fm * lu.solve(Mat::Identity(2, 2)).transpose();
                // assemble measured 4x4 block in (e1, e2 | f1, f2) coordinates
                CanonicalBlock blk;
                blk.kind = CanonicalBlockKind::Quadruple;
                blk.rho = rho;
                Mat b4(4, 4);
                const Vec cols[4] = {e1, e2, fm.col(0), fm.col(1)};
                for (int col = 0; col < 4; ++col) {
                    const Vec mc = m * cols[col];
                    b4(0, col) = sig(fm.col(0), mc, j);
                    b4(1, col) = sig(fm.col(1), mc, j);
                    b4(2, col) = -sig(e1, mc, j);
                    b4(3, col) = -sig(e2, mc, j);
                }
                blk.realized = b4;
                blk.angle = std::atan2(b4(1, 0), b4(0, 0));
                qcols.push_back(e1);
                qcols.push_back(e2);
                pcols.push_back(fm.col(0));
                pcols.push_back(fm.col(1));
                blocks.push_back(blk);
            }
            continue;
        }
    }

    DarbouxSplit out;
    out.p = Mat::Zero(dim, dim);
    for (size_t a = 0; a < qcols.size(); ++a) {
        out.p.col(static_cast<int>(a)) = qcols[a];
        out.p.col(n + static_cast<int>(a)) = pcols[a];
    }
    if (static_cast<int>(qcols.size()) != n)
        throw UnsupportedError("darboux_split: block dimensions do not fill the space");
    if (symplectic_residual(out.p) > 1e-6)
        throw UnsupportedError("darboux_split: assembled basis is not symplectic at tolerance");
    out.blocks = blocks;
    const Mat lhs = out.p.partialPivLu().solve(m * out.p);
    out.residual = (lhs - realize_blocks(blocks)).norm() / std::max(1.0, m.norm());
    if (out.residual > 1e-5)
        throw UnsupportedError("darboux_split: normal-coordinate residual too large");
    return out;
}

Mat realize_blocks(const std::vector<CanonicalBlock>& blocks) {
    std::vector<Mat> mats;
    mats.reserve(blocks.size());
    for (const auto& b : blocks) {
        switch (b.kind) {
            case CanonicalBlockKind::Elliptic: mats.push_back(rot2(b.angle)); break;
            case CanonicalBlockKind::MinusOnePair: mats.push_back(-Mat::Identity(2, 2)); break;
            case CanonicalBlockKind::PositiveHyperbolic:
            case CanonicalBlockKind::NegativeHyperbolic: {
                Mat d = Mat::Zero(2, 2);
                d(0, 0) = b.lambda;
                d(1, 1) = 1.0 / b.lambda;
                mats.push_back(d);
                break;
            }
            case CanonicalBlockKind::Quadruple: {
                Mat q = Mat::Zero(4, 4);
                q.topLeftCorner(2, 2) = b.rho * rot2(b.angle);
                q.bottomRightCorner(2, 2) = (1.0 / b.rho) * rot2(b.angle);
                mats.push_back(q);
                break;
            }
        }
    }
    return diamond_many(mats);
}

} // namespace sympcal
