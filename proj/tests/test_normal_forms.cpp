#include <doctest.h>

#include "sympcal/normal_forms.hpp"

using namespace sympcal;

TEST_CASE("N1 and Mm constructors match their displays") {
    const Mat n1 = build_normal_form(N1Block{1.0, 1.0});
    CHECK(n1(0, 0) == 1.0);
    CHECK(n1(0, 1) == 1.0);
    CHECK(n1(1, 0) == 0.0);

    const Mat m2 = build_normal_form(MmBlock{3.0, 2});
    // C_2(lambda) = [[1/l, 0], [-1/l^2, 1/l]]
    CHECK(m2(2, 2) == doctest::Approx(1.0 / 3.0));
    CHECK(m2(3, 2) == doctest::Approx(-1.0 / 9.0));
    CHECK(m2(3, 3) == doctest::Approx(1.0 / 3.0));
    CHECK(is_symplectic(m2, 1e-13));

    const Mat r = build_normal_form(RotationBlock{0.3});
    CHECK((r - rot2(0.3)).norm() == 0.0);
}

TEST_CASE("all families are symplectic to 1e-12") {
    std::vector<NormalFormBlock> blocks = {
        N1Block{1.0, -1.0},
        N1Block{-1.0, 1.0},
        NmBlock{1.0, {0.3, -1.2, 0.7}},
        NmBlock{-1.0, {1.1, 0.2}},
        RotationBlock{-2.2},
        N2mUnitBlock{0.9, 2, std::nullopt},
        N2mPlus1UnitBlock{0.9, -1, 1, std::nullopt, std::nullopt, std::nullopt},
        N2mPlus1UnitBlock{1.4, 1, 2, std::nullopt, std::nullopt, std::nullopt},
        MmBlock{2.5, 3},
        MmBlock{-1.7, 2},
        N2mQuadBlock{2.0, M_PI / 4, 1},
        N2mQuadBlock{0.6, 2.0, 2},
    };
    for (const auto& b : blocks) {
        const Mat m = build_normal_form(b);
        const double resid = (m.transpose() * standard_j(block_half_dim(b)) * m -
                              standard_j(block_half_dim(b)))
                                 .norm();
        CHECK(resid <= 1e-12 * m.squaredNorm());
    }
}

TEST_CASE("constructor parameter validation") {
    CHECK_THROWS_AS(build_normal_form(N1Block{2.0, 0.0}), DomainError);
    CHECK_THROWS_AS(build_normal_form(RotationBlock{0.0}), DomainError);
    CHECK_THROWS_AS(build_normal_form(MmBlock{1.0, 2}), DomainError);
    // B-block violating the symplectic relation
    Mat bad = Mat::Zero(2, 2);
    bad(0, 1) = 1.0;  // asymmetric against C = R(theta)
    CHECK_THROWS_AS(build_normal_form(N2mUnitBlock{0.9, 1, bad}), DomainError);
}

TEST_CASE("classification of canonical examples") {
    auto cls = classify_eigenvalues(rot2(M_PI / 3), 1e-8);
    REQUIRE(cls.size() == 1);
    CHECK(cls[0].kind == EigenKind::UnitNonReal);
    CHECK(cls[0].theta == doctest::Approx(M_PI / 3));
    CHECK(cls[0].multiplicity == 1);

    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    cls = classify_eigenvalues(d, 1e-8);
    REQUIRE(cls.size() == 1);
    CHECK(cls[0].kind == EigenKind::PositiveReal);
    CHECK(cls[0].lambda == doctest::Approx(2.0));

    cls = classify_eigenvalues(build_normal_form(N2mQuadBlock{2.0, M_PI / 4, 1}), 1e-8);
    REQUIRE(cls.size() == 1);
    CHECK(cls[0].kind == EigenKind::ComplexQuadruple);
    CHECK(cls[0].rho == doctest::Approx(2.0));
    CHECK(cls[0].theta == doctest::Approx(M_PI / 4));

    cls = classify_eigenvalues(-Mat::Identity(4, 4), 1e-8);
    REQUIRE(cls.size() == 1);
    CHECK(cls[0].kind == EigenKind::MinusOne);
    CHECK(cls[0].multiplicity == 4);
    CHECK(total_classified_dimension(cls) == 4);
}

TEST_CASE("classification multiplicities fill 2n and survive conjugation") {
    CounterRng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        auto rs = random_symplectic(n, 1000 + trial);
        CHECK(total_classified_dimension(rs.classes) == 2 * n);
        // conjugation invariance for well-separated spectra
        const Mat p = random_symplectic_conjugator(n, rng, 0.3);
        const Mat m2 = p * rs.matrix.m * p.inverse();
        try {
            auto cls2 = classify_eigenvalues(m2, 1e-6);
            CHECK(cls2.size() == rs.classes.size());
        } catch (const AmbiguityError&) {
            // borderline spectra may legitimately refuse at aashared tolerance
        }
    }
}

TEST_CASE("symplectic eigenvalue symmetry lambda <-> 1/lambda") {
    for (int trial = 0; trial < 10; ++trial) {
        auto rs = random_symplectic(3, 77 + trial);
        Eigen::EigenSolver<Mat> es(rs.matrix.m);
        const auto lam = es.eigenvalues();
        for (int i = 0; i < lam.size(); ++i) {
            if (std::abs(lam(i) - Complex(1, 0)) <= 1e-7) continue;
            double best = 1e9;
            for (int j = 0; j < lam.size(); ++j)
                best = std::min(best, std::abs(lam(i) * lam(j) - Complex(1, 0)));
            CHECK(best <= 1e-6 * (1.0 + std::norm(lam(i))));
        }
    }
}

TEST_CASE("ambiguity near two class boundaries is an error") {
    // eigenvalues 1 +- tol/2 off the unit circle and real axis simultaneously
    const double eps = 1e-9;
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1.0 + eps;
    m(1, 1) = 1.0 / (1.0 + eps);
    // lambda = 1+eps: within 1e-8 of both +1 and the unit circle -> classified One
    auto cls = classify_eigenvalues(m, 1e-8);
    CHECK(cls[0].kind == EigenKind::One);
    // complex eigenvalue close to both the unit circle and the real axis but
    // not within tol of +-1: the contradictory flags must surface
    const double a = 0.9e-6, d2 = 0.9e-6;
    const Mat m2 = (1.0 + a) * rot2(d2);
    CHECK_THROWS_AS(classify_eigenvalues(m2, 1e-6), AmbiguityError);
}

TEST_CASE("random_symplectic determinism and certification") {
    auto a = random_symplectic(2, 123);
    auto b = random_symplectic(2, 123);
    CHECK((a.matrix.m - b.matrix.m).norm() == 0.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 4;
        auto rs = random_symplectic(n, 9000 + trial);
        CHECK(symplectic_residual(rs.matrix.m) <= 1e-9);
    }
}
