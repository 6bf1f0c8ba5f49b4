#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "sympcal/capped.hpp"
#include "sympcal/flow.hpp"
#include "sympcal/loops.hpp"
#include "sympcal/matrix_log.hpp"

using namespace sympcal;

namespace {

QAtInfinity hyperbolic_q(double a) {
    Mat mhat = Mat::Zero(2, 2);
    mhat(0, 0) = a;
    mhat(1, 1) = -a;
    QAtInfinity q;
    q.blocks.push_back(InfinityBlock::exponential(mhat));
    return q;
}

QAtInfinity negative_q(double a) {
    Mat mhat = Mat::Zero(2, 2);
    mhat(0, 0) = a;
    mhat(1, 1) = -a;
    QAtInfinity q;
    q.blocks.push_back(InfinityBlock::negative_exponential(mhat));
    return q;
}

QAtInfinity elliptic_q(double theta, int mult) {
    QAtInfinity q;
    q.blocks.push_back(InfinityBlock::elliptic(theta, mult));
    return q;
}

} // namespace

TEST_CASE("loop reduction: positive exponential route") {
    // Q with phi^1 = e^{mhat}: Qhat is the time-independent form
    Mat s(2, 2);
    s << 0.9, 0.3, 0.3, -0.6;  // B = s, flow e^{-J0 s t}, hyperbolic-ish
    const QuadraticForm q = QuadraticForm::constant(s);
    const LoopReduction red = build_leq_loop(q);
    CHECK(red.sign == 1);
    // phi^1_P = I
    CHECK((red.p.flow(1.0) - Mat::Identity(2, 2)).norm() < 1e-8);
    // Qhat = 1/2 <J0 mhat z, z> reproduces the monodromy through its own flow
    CHECK((red.q_hat.flow(1.0) - q.flow(1.0)).norm() < 1e-8);
    // P is a genuine loop quadratic: B_P symmetric along t
    for (double t : {0.0, 0.3, 0.7}) {
        const Mat bp = red.p.b_matrix(t);
        CHECK((bp - bp.transpose()).norm() < 1e-10);
    }
    // sharp of the loop with the original Q has the reduced quadratic form:
    // the flow of Qhat equals phi_P phi_Q
    for (double t : {0.25, 0.5, 0.9}) {
        CHECK((red.q_hat.flow(t) - red.p.flow(t) * q.flow(t)).norm() < 1e-8);
    }
}

TEST_CASE("loop reduction: negative route through the rotated form") {
    // phi^1_Q = -e^{mhat}: Qhat is the rotated kind of the sign split
    Mat mhat = Mat::Zero(2, 2);
    mhat(0, 0) = 0.4;
    mhat(1, 1) = -0.4;
    const QuadraticForm q = QuadraticForm::rotated(M_PI, mhat);
    const LoopReduction red = build_leq_loop(q);
    CHECK(red.sign == -1);
    CHECK((red.p.flow(1.0) - Mat::Identity(2, 2)).norm() < 1e-8);
    CHECK((red.q_hat.flow(1.0) + expm(red.mhat)).norm() < 1e-8);

    // blockwise assembly across a diamond of factors
    const QuadraticForm q2 = QuadraticForm::constant(Mat::Identity(2, 2) * 0.8);
    const auto reds = build_leq_loop_blocks({q, q2});
    CHECK(reds.size() == 2);
    CHECK(reds[0].sign == -1);
    CHECK(reds[1].sign == 1);
}

TEST_CASE("generating loop: hyperbolic case") {
    const QAtInfinity q = hyperbolic_q(0.8);
    const GeneratingLoop loop = build_pmu(q, 13, 11);
    CHECK(loop.mu == 0);
    CHECK(loop.p.constant_b().norm() == 0.0);
    CHECK((loop.bhat - 2.0 * 0.5 * ((standard_j(1) * q.blocks[0].mhat) +
                                    (standard_j(1) * q.blocks[0].mhat).transpose()))
              .norm() < 1e-12);
    const NondegReport rep = check_nondeg_path(q, loop, 256);
    CHECK(rep.nondegenerate);
    CHECK(rep.min_dist > 1e-3);  // eigenvalues e^{+-((k-l)t+l)a} never near 1
}

TEST_CASE("generating loop: negative case and the 2mu identity") {
    const QAtInfinity q = negative_q(0.5);
    const GeneratingLoop loop = build_pmu(q, 13, 11);
    // 2mu = -(k-l) m with m = 1
    CHECK(2 * loop.mu == -(13 - 11) * 1);
    // loop flow e^{(k-l) pi J0 t}: endpoint I, half-way -I... (k-l even)
    CHECK((loop.loop_flow(1.0) - Mat::Identity(2, 2)).norm() < 1e-10);
    CHECK((loop.loop_flow(0.5) - rot2(M_PI)).norm() < 1e-9);
    const SymplecticPath lp = path_from_generator(
        PiecewiseGen{[&](double t) { return loop.loop_flow(t); }}, 1, 512);
    CHECK(maslov_index(lp) == loop.mu);
    const NondegReport rep = check_nondeg_path(q, loop, 256);
    CHECK(rep.nondegenerate);  // spectrum stays on the negative axis
}

TEST_CASE("generating loop: elliptic cases, angles and maslov") {
    for (double theta : {1.0, 2.0, -0.7}) {
        for (int mult : {1, 2}) {
            const QAtInfinity q = elliptic_q(theta, mult);
            const GeneratingLoop loop = build_pmu(q, 13, 11);
            // index bookkeeping: 2mu = i_inf(k) - i_inf(l)
            CHECK(2 * loop.mu == loop.i_inf_k - loop.i_inf_l);
            // loop endpoint and Maslov index
            CHECK((loop.loop_flow(1.0) - Mat::Identity(2 * mult, 2 * mult)).norm() < 1e-10);
            const SymplecticPath lp = path_from_generator(
                PiecewiseGen{[&](double t) { return loop.loop_flow(t); }}, mult, 1024);
            CHECK(maslov_index(lp) == loop.mu);
            // nondegeneracy along the connecting path + angle formula
            const NondegReport rep = check_nondeg_path(q, loop, 512);
            CHECK(rep.nondegenerate);
            CHECK(rep.min_dist > 1e-3);
            CHECK(rep.angle_formula_mismatch < 1e-8);
        }
    }
    // deliberately inadmissible iterate: l theta = 0 mod 2pi
    const QAtInfinity bad = elliptic_q(2.0 * M_PI / 5.0, 1);
    CHECK_THROWS_AS(build_pmu(bad, 7, 5), AdmissibilityError);
}

TEST_CASE("2mu respects the mean-index window") {
    // 2mu = i(k) - i(l) with |i(s) - s ihat| <= n on each side, so the honest
    // window is (k-l) ihat +- 2n; the +-n window fails already at
    // theta = 1, (k,l) = (13,11) where 2mu = -2 and (k-l) ihat = -2/pi.
    for (double theta : {1.0, 2.0, -0.7}) {
        for (int mult : {1, 2}) {
            const QAtInfinity q = elliptic_q(theta, mult);
            for (auto [k, l] : std::vector<std::pair<long long, long long>>{
                     {13, 11}, {29, 23}, {101, 97}}) {
                const GeneratingLoop loop = build_pmu(q, k, l);
                const double ihat = -mult * theta / M_PI;
                // per-iterate certificates
                CHECK(std::abs(loop.i_inf_k - k * ihat) <= q.n() + 1e-9);
                CHECK(std::abs(loop.i_inf_l - l * ihat) <= q.n() + 1e-9);
                const double lo = (k - l) * ihat - 2 * q.n();
                const double hi = (k - l) * ihat + 2 * q.n();
                CHECK(2.0 * loop.mu >= lo - 1e-9);
                CHECK(2.0 * loop.mu <= hi + 1e-9);
            }
        }
    }
}

TEST_CASE("mixed diamond of blocks") {
    QAtInfinity q;
    q.blocks.push_back(InfinityBlock::elliptic(1.0, 1));
    Mat mh = Mat::Zero(2, 2);
    mh(0, 0) = 0.6;
    mh(1, 1) = -0.6;
    q.blocks.push_back(InfinityBlock::exponential(mh));
    CHECK(q.n() == 2);
    const GeneratingLoop loop = build_pmu(q, 13, 11);
    CHECK(2 * loop.mu == loop.i_inf_k - loop.i_inf_l);
    // the diamond quadratic's closed flow matches the blockwise flow
    const QuadraticForm qq = q.quadratic();
    CHECK((qq.flow(1.0) - q.time_one()).norm() < 1e-9);
    const NondegReport rep = check_nondeg_path(q, loop, 256);
    CHECK(rep.nondegenerate);
}
