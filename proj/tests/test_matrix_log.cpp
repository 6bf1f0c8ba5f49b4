#include <doctest.h>

#include "sympcal/matrix_log.hpp"

using namespace sympcal;

TEST_CASE("principal_log closed forms") {
    CHECK(principal_log(Mat::Identity(2, 2)).norm() < 1e-14);

    const Mat x = principal_log(rot2(1.1));
    CHECK(x(0, 1) == doctest::Approx(-1.1).epsilon(1e-12));
    CHECK(x(1, 0) == doctest::Approx(1.1).epsilon(1e-12));

    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0 / 3.0;
    const Mat xd = principal_log(d);
    CHECK(xd(0, 0) == doctest::Approx(std::log(3.0)).epsilon(1e-13));
    CHECK(xd(1, 1) == doctest::Approx(-std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("principal_log rejects the closed negative axis") {
    Mat neg = Mat::Zero(2, 2);
    neg(0, 0) = -2.0;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(principal_log(neg), DomainError);
    CHECK_THROWS_AS(principal_log(Mat::Zero(2, 2)), DomainError);
}

TEST_CASE("integral_log agrees with principal_log") {
    const Mat a = rot2(M_PI / 2);
    const IntegralLog il = integral_log(a, 64);
    CHECK((il.x - principal_log(a)).norm() <= 1e-10);

    const Mat i4 = Mat::Identity(4, 4);
    CHECK(integral_log(i4, 8).x.norm() < 1e-15);

    const Mat m = build_normal_form(MmBlock{3.0, 2});
    const IntegralLog il2 = integral_log(m, 96);
    CHECK((il2.x - closed_form_log(MmBlock{3.0, 2}).log.x).norm() <= 1e-10);
}

TEST_CASE("closed_form_log families reconstruct") {
    // N1(-1,b): sign -1, the generator carries -b off-diagonal
    const SignedLog s1 = closed_form_log(N1Block{-1.0, 1.0});
    CHECK(s1.sign == -1);
    CHECK(s1.log.x(0, 1) == doctest::Approx(-1.0));

    const SignedLog sr = closed_form_log(RotationBlock{0.8});
    CHECK(sr.sign == 1);
    CHECK(sr.log.x(1, 0) == doctest::Approx(0.8));

    // M_m(lambda) upper block: log-lambda diagonal, 1/lambda superdiagonal
    const SignedLog sm = closed_form_log(MmBlock{2.0, 3});
    CHECK(sm.sign == 1);
    CHECK(sm.log.x(0, 0) == doctest::Approx(std::log(2.0)));
    CHECK(sm.log.x(0, 1) == doctest::Approx(0.5));
    CHECK(sm.log.x(0, 2) == doctest::Approx(-1.0 / 8.0));

    // every supported family, m <= 3: reconstruction residual <= 1e-10
    std::vector<NormalFormBlock> blocks = {
        N1Block{-1.0, 0.0},  N1Block{-1.0, -1.0}, N1Block{1.0, 1.0},
        NmBlock{-1.0, {0.4, -0.9}}, NmBlock{-1.0, {1.0, 0.5, -0.25}}, NmBlock{1.0, {0.2, 0.3}},
        RotationBlock{-1.9}, MmBlock{2.0, 1},     MmBlock{2.0, 3},
        MmBlock{-3.0, 2},    MmBlock{-0.4, 3},    N2mQuadBlock{2.0, M_PI / 4, 1},
        N2mQuadBlock{1.5, 0.7, 3},
    };
    for (const auto& b : blocks) {
        const Mat m = build_normal_form(b);
        const SignedLog sl = closed_form_log(b);
        CHECK((sl.sign * expm(sl.log.x) - m).norm() <= 1e-10 * std::max(1.0, m.norm()));
        CHECK(inf_symplectic_residual(sl.log.x) <= 1e-10);
        CHECK(sl.log.strip_certificate < M_PI);
    }

    CHECK_THROWS_AS(closed_form_log(N2mUnitBlock{0.9, 1, std::nullopt}), UnsupportedError);
}

TEST_CASE("nilpotent series terminates exactly") {
    const Mat m = build_normal_form(NmBlock{-1.0, {0.7, -0.3}});
    const Mat arg = -m - Mat::Identity(4, 4);
    const Mat x = nilpotent_log(arg);
    CHECK((-expm(x) - m).norm() <= 1e-12);
}

TEST_CASE("build_vg identities (both parities)") {
    for (int tj : {1, 3}) {
        for (int eps : {1, -1}) {
            const VGPair vg = build_vg(tj, 0.7, eps);
            const int d = 2 * (tj + 1);
            CHECK((vg.v + vg.v.transpose()).norm() <= 1e-12);
            CHECK((vg.v * vg.g - vg.g * vg.v).norm() <= 1e-12);
            CHECK(inf_symplectic_residual(vg.v) <= 1e-12);
            CHECK(inf_symplectic_residual(vg.g) <= 1e-12);
            Mat gp = Mat::Identity(d, d);
            for (int k = 0; k <= tj; ++k) gp = gp * vg.g;
            CHECK(gp.norm() <= 1e-12);  // G^{t_j+1} = 0
            // spectrum {+-i theta}, multiplicity t_j+1: (m^2 + theta^2)^{t_j+1} = 0
            Mat chi = vg.m() * vg.m() + 0.49 * Mat::Identity(d, d);
            Mat chp = Mat::Identity(d, d);
            for (int k = 0; k <= tj; ++k) chp = chp * chi;
            CHECK(chp.norm() <= 1e-10);
            // numerical eigenvalues carry the usual Jordan sensitivity
            Eigen::EigenSolver<Mat> es(vg.m());
            for (int i = 0; i < es.eigenvalues().size(); ++i) {
                CHECK(std::abs(es.eigenvalues()(i).real()) < 1e-3);
                CHECK(std::abs(std::abs(es.eigenvalues()(i).imag()) - 0.7) < 1e-3);
            }
            // odd parity: e^V = diag(R(theta), ..., R(theta))
            Mat ev = expm(vg.v);
            Mat ref = Mat::Zero(d, d);
            for (int i = 0; i < tj + 1; ++i) ref.block(2 * i, 2 * i, 2, 2) = rot2(0.7);
            CHECK((ev - ref).norm() <= 1e-12);
        }
    }
    for (int tj : {0, 2, 4}) {
        for (int eps : {1, -1}) {
            const VGPair vg = build_vg(tj, -0.6, eps);
            const int d = 2 * (tj + 1);
            const Mat ev = expm(vg.v);
            // V^2 = -theta^2 I, so e^V = cos(theta) I + (sin(theta)/theta) V;
            // for eps = +1 this is the same as the sin(theta)/(eps theta) form
            CHECK((vg.v * vg.v + 0.36 * Mat::Identity(d, d)).norm() <= 1e-12);
            const Mat closed =
                std::cos(-0.6) * Mat::Identity(d, d) + std::sin(-0.6) / -0.6 * vg.v;
            CHECK((ev - closed).norm() <= 1e-12);
            if (eps == 1) {
                const Mat paper_form = std::cos(-0.6) * Mat::Identity(d, d) +
                                       std::sin(-0.6) / (eps * -0.6) * vg.v;
                CHECK((ev - paper_form).norm() <= 1e-12);
            }
            Mat gp = Mat::Identity(d, d);
            for (int k = 0; k <= tj; ++k) gp = gp * vg.g;
            CHECK(gp.norm() <= 1e-12);
        }
    }
    CHECK_THROWS_AS(build_vg(1, 0.0, 1), DomainError);
    CHECK_THROWS_AS(build_vg(1, M_PI, 1), DomainError);
}

TEST_CASE("exp_representation block route and generic route") {
    // single rotation: one block, sign +1
    auto rep = exp_representation(rot2(0.6));
    REQUIRE(rep.blocks.size() == 1);
    CHECK(rep.blocks[0].sign == 1);
    CHECK(rep.residual <= 1e-8);

    // -I2: one block, sign -1, zero generator
    rep = exp_representation(-Mat::Identity(2, 2));
    REQUIRE(rep.blocks.size() == 1);
    CHECK(rep.blocks[0].sign == -1);
    CHECK(rep.blocks[0].generator.x.norm() <= 1e-12);

    // conjugated M1(2) <> R(1): two blocks, residual <= 1e-8
    const Mat core = diamond(build_normal_form(MmBlock{2.0, 1}), rot2(1.0));
    CounterRng rng(3);
    const Mat p = random_symplectic_conjugator(2, rng, 0.4);
    const Mat m = p * core * p.inverse();
    rep = exp_representation(m);
    CHECK(rep.blocks.size() == 2);
    CHECK(rep.residual <= 1e-8);

    // negative pair through the sign split: no complex leak
    Mat neg = Mat::Zero(2, 2);
    neg(0, 0) = -2.0;
    neg(1, 1) = -0.5;
    rep = exp_representation(neg);
    CHECK(rep.blocks[0].sign == -1);
    CHECK(rep.blocks[0].generator.x(0, 0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("round trip and scaling law on random symplectics") {
    int done = 0;
    for (int trial = 0; done < 12 && trial < 40; ++trial) {
        auto rs = random_symplectic(2, 31000 + trial,
                                    RandomSymplecticOptions{1.0, false, false, false});
        const Mat m = rs.matrix.m;
        Mat x;
        try {
            x = principal_log(m);
        } catch (const DomainError&) {
            continue;
        }
        CHECK((expm(x) - m).norm() <= 1e-8 * std::max(1.0, m.norm()));
        CHECK(inf_symplectic_residual(x) <= 1e-8);
        // log(A^alpha) = alpha log(A) for alpha in {-1, 1/2}
        const Mat xinv = principal_log(m.inverse());
        CHECK((xinv + x).norm() <= 1e-8 * std::max(1.0, x.norm()));
        const Mat xsq = principal_log(expm(0.5 * x));
        CHECK((xsq - 0.5 * x).norm() <= 1e-8 * std::max(1.0, x.norm()));
        ++done;
    }
    CHECK(done >= 10);
}
