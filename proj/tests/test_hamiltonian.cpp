#include <doctest.h>

#include "sympcal/capped.hpp"
#include "sympcal/flow.hpp"
#include "sympcal/loops.hpp"
#include "sympcal/orbits.hpp"
#include "sympcal/rational.hpp"
#include "sympcal/rng.hpp"
#include "sympcal/second_order.hpp"

using namespace sympcal;

namespace {

HamPtr radial_elliptic(double theta, double amp = 0.0, double cx = 0.0, double rad = 0.5) {
    // Q = theta/2 |z|^2 (flow e^{-theta J0 t}, clockwise for theta > 0) plus
    // an off-center bump when amp != 0
    const Mat b = theta * Mat::Identity(2, 2);
    std::vector<BumpTerm> terms;
    if (amp != 0.0) {
        Vec c(2);
        c << cx, 0.0;
        terms.push_back({amp, c, rad});
    }
    return make_ham(QuadraticForm::constant(b), CompactPerturbation(1, terms));
}

} // namespace

TEST_CASE("smoothing profile invariants") {
    SmoothingProfile prof;
    CHECK(prof.rho(0.0) == 0.0);
    CHECK(prof.rho(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prof.rho_prime_max() < 2.0);
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = i / 400.0;
        const double r = prof.rho(t);
        CHECK(r >= prev - 1e-12);  // non-decreasing
        prev = r;
        CHECK(prof.rho_prime(t) < 2.0);
        CHECK(prof.rho_prime(t) >= 0.0);
        CHECK(prof.rho(t) == doctest::Approx(prof.rho(2.0 - t)).epsilon(1e-10));  // symmetry
        // derivative consistency
        const double fd = (prof.rho(t + 1e-6) - prof.rho(t - 1e-6)) / 2e-6;
        CHECK(std::abs(fd - prof.rho_prime(t)) < 1e-5);
    }
    // eta
    const double s0 = 3.0;
    CHECK(prof.eta(s0, 2.9) == 0.0);
    CHECK(prof.eta(s0, -2.0) == 0.0);
    CHECK(prof.eta(s0, s0 + 2.0) == doctest::Approx(1.0));
    CHECK(prof.eta(s0, 10.0) == doctest::Approx(10.0 - s0 - 1.0));
    CHECK(prof.eta(s0, -10.0) == doctest::Approx(-(10.0 - s0 - 1.0)));  // odd
    double ep_prev = 0.0;
    for (int i = 0; i <= 300; ++i) {
        const double t = s0 - 0.5 + 3.0 * i / 300.0;
        const double ep = prof.eta_prime(s0, t);
        CHECK(ep >= ep_prev - 1e-9);  // non-decreasing slope
        CHECK(ep >= 0.0);
        CHECK(ep <= 1.0);
        ep_prev = ep;
        CHECK(std::abs(t - prof.eta(s0, t)) <= s0 + 2.0 + 1e-9);
    }
}

TEST_CASE("vector field and gradient consistency") {
    auto h = radial_elliptic(0.8, 0.4, 0.6);
    CounterRng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        Vec z(2);
        z << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
        const double t = rng.uniform(0, 1);
        // central-difference gradient check
        Vec g_fd(2);
        for (int i = 0; i < 2; ++i) {
            Vec zp = z, zm = z;
            zp(i) += 1e-6;
            zm(i) -= 1e-6;
            g_fd(i) = (h->value(t, zp) - h->value(t, zm)) / 2e-6;
        }
        const Vec g = h->grad(t, z);
        CHECK((g - g_fd).norm() <= 1e-6 * std::max(1.0, g.norm()) + 1e-7);
        // X = -J0 grad
        const Vec x = hamiltonian_vector_field(*h, t, z);
        CHECK((x + standard_j(1) * g).norm() == 0.0);
    }
    // outside the support the field is purely linear
    Vec far(2);
    far << 5.0, 0.0;
    const Vec xf = hamiltonian_vector_field(*h, 0.3, far);
    CHECK((xf - (-standard_j(1) * (0.8 * far))).norm() < 1e-14);
}

TEST_CASE("linear flow closed forms") {
    // defi-Q1-type constant block: B = J0 mhat with mhat = diag(a, -a)
    Mat mhat = Mat::Zero(2, 2);
    mhat(0, 0) = 0.7;
    mhat(1, 1) = -0.7;
    const Mat b = standard_j(1) * mhat;
    const QuadraticForm q = QuadraticForm::constant(0.5 * (b + b.transpose()));
    CHECK((q.flow(1.0) - expm(mhat)).norm() < 1e-12);

    // rotated kind: flow e^{pi J0 t} e^{mhat t}, endpoint -e^{mhat}
    const QuadraticForm qr = QuadraticForm::rotated(M_PI, mhat);
    CHECK((qr.flow(1.0) + expm(mhat)).norm() < 1e-11);
    CHECK(symplectic_residual(qr.flow(0.37)) < 1e-10);

    // flow solves the stated ODE: RK4 cross-check
    const HamPtr hh = make_quadratic_ham(qr);
    Vec z0(2);
    z0 << 0.8, -0.4;
    const Vec z1 = flow_point(*hh, z0, 0.0, 1.0, FlowOptions{2048, 1e6});
    CHECK((z1 - qr.flow(1.0) * z0).norm() < 1e-8);
}

TEST_CASE("flow matches linear closed form and certifies monodromy") {
    auto h = radial_elliptic(1.1);
    Vec z0(2);
    z0 << 0.9, 0.2;
    const Vec z1 = flow_point(*h, z0, 0.0, 1.0);
    CHECK((z1 - rot2(-1.1) * z0).norm() < 1e-9);  // e^{-theta J0} = R(-theta)

    CounterRng rng(77);
    for (int trial = 0; trial < 12; ++trial) {
        auto hp = radial_elliptic(rng.uniform(0.5, 2.0), rng.uniform(-0.5, 0.5),
                                  rng.uniform(0.2, 0.8));
        Vec z(2);
        z << rng.uniform(-1, 1), rng.uniform(-1, 1);
        const FlowJac fj = flow_with_jacobian(*hp, z, 0.0, 1.0);
        CHECK(symplectic_residual(fj.jac) <= 1e-7);
    }

    // autonomous energy conservation along the flow
    auto ha = radial_elliptic(0.9, 0.5, 0.5);
    Vec z(2);
    z << 0.4, -0.3;
    const double e0 = ha->value(0.0, z);
    const Trajectory traj = flow_trajectory(*ha, z, 0.0, 1.0, false);
    double drift = 0.0;
    for (size_t i = 0; i < traj.z.size(); ++i)
        drift = std::max(drift, std::abs(ha->value(0.0, traj.z[i]) - e0));
    CHECK(drift <= 1e-8);

    // step-halving certificate
    CHECK(flow_error_estimate(*ha, z, 0.0, 1.0) < 1e-10);
}

TEST_CASE("action functional basics") {
    // zero Hamiltonian, zero orbit
    auto hz = make_zero_ham(1);
    CHECK(action(*hz, Vec::Zero(2)) == doctest::Approx(0.0));

    // elliptic Q: orbit z=0 closes; action of the origin is 0
    auto h = radial_elliptic(0.7);
    CHECK(action(*h, Vec::Zero(2)) == doctest::Approx(0.0));

    // harmonic generator at a nonzero amplitude does not close in general
    Vec z1(2);
    z1 << 1.0, 0.0;
    CHECK_THROWS_AS(action(*h, z1), OrbitError);
}

TEST_CASE("bar, sharp, wedge flow composition laws") {
    SmoothingProfile prof;
    auto f = radial_elliptic(0.9, 0.3, 0.4);
    auto g = radial_elliptic(-0.5, 0.2, -0.3);

    CounterRng rng(5);
    for (int trial = 0; trial < 4; ++trial) {
        Vec z(2);
        z << rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8);
        const FlowOptions opt{2048, 1e6};

        // phi_{bar F} = phi_F^{-1}: composing gives the identity
        auto fb = bar(f);
        const Vec w = flow_point(*fb, z, 0.0, 1.0, opt);
        const Vec back = flow_point(*f, w, 0.0, 1.0, opt);
        CHECK((back - z).norm() < 1e-6);

        // phi_{F#G} = phi_F o phi_G
        auto fs = sharp(f, g);
        const Vec a = flow_point(*fs, z, 0.0, 1.0, opt);
        const Vec b = flow_point(*f, flow_point(*g, z, 0.0, 1.0, opt), 0.0, 1.0, opt);
        CHECK((a - b).norm() < 1e-6);

        // phi^1_{F wedge G} = phi^1_F o phi^1_G
        auto fw = wedge(f, g, prof);
        const Vec c = flow_point(*fw, z, 0.0, 1.0, opt);
        CHECK((c - b).norm() < 1e-6);

        // bar(bar(F)) flows like F
        auto fbb = bar(bar(f));
        for (double tt : {0.25, 0.5, 1.0}) {
            const Vec u1 = flow_point(*fbb, z, 0.0, tt, opt);
            const Vec u2 = flow_point(*f, z, 0.0, tt, opt);
            CHECK((u1 - u2).norm() < 1e-6);
        }
    }
}

TEST_CASE("iterate scales Hamiltonian and flow") {
    auto h = radial_elliptic(0.4, 0.3, 0.5);
    auto h3 = iterate_ham(h, 3);
    Vec z(2);
    z << 0.3, 0.1;
    CHECK(h3->value(0.2, z) == doctest::Approx(3.0 * h->value(0.6, z)));
    const Vec a = flow_point(*h3, z, 0.0, 1.0, FlowOptions{3072, 1e6});
    const Vec b = flow_point(*h, z, 0.0, 3.0);
    CHECK((a - b).norm() < 1e-7);
}

TEST_CASE("capped quadratic flow conserves the cap value") {
    SmoothingProfile prof;
    Mat bhat = Mat::Zero(2, 2);
    bhat(0, 0) = 1.3;
    bhat(1, 1) = 0.6;
    auto cap = make_capped_quadratic(bhat, 1.5, prof);
    CounterRng rng(9);
    for (int trial = 0; trial < 6; ++trial) {
        Vec z(2);
        z << rng.uniform(-3, 3), rng.uniform(-3, 3);
        const double v0 = 0.5 * z.dot(bhat * z);
        const Trajectory traj = flow_trajectory(*cap, z, 0.0, 1.0, false);
        for (const auto& zz : traj.z)
            CHECK(std::abs(0.5 * zz.dot(bhat * zz) - v0) <= 1e-9 * (1.0 + std::abs(v0)));
        // closed per-point flow agrees with the integrator
        const Vec closed = capped_flow_point(bhat, 1.5, prof, z, 1.0);
        CHECK((closed - traj.z.back()).norm() <= 1e-7 * (1.0 + z.norm()));
    }
}

TEST_CASE("orbit search on a pure nondegenerate quadratic finds only the origin") {
    auto h = radial_elliptic(0.9);
    const OrbitSearch res = find_periodic_points(h, 1, SeedGrid{1.5, 7}, NewtonOptions{},
                                                 FlowOptions{512, 1e6}, 2);
    REQUIRE(res.orbits.size() == 1);
    CHECK(res.orbits[0].z0.norm() < 1e-8);
    CHECK(res.orbits[0].index_available);
    // B = 0.9 I gives the path e^{t J0 S} with S = -0.9 I: Ind(S) - n = +1
    CHECK(res.orbits[0].index.cz == 1);
}

TEST_CASE("interval ledger exact arithmetic") {
    // C/p < eps/6 makes the union contained
    const IntervalLedger lg = interval_ledger(Rational(3, 2), Rational(1, 10), 101, Rational(1, 1));
    CHECK(lg.smallness_holds);
    CHECK(lg.union_contained);
    CHECK(!lg.all_equal);

    const IntervalLedger lg0 = interval_ledger(Rational(3, 2), Rational(1, 10), 101, Rational(0));
    CHECK(lg0.all_equal);
    CHECK(lg0.i.lo == lg0.i_plus_c.lo);
    CHECK(lg0.i.hi == lg0.i_plus_2c.hi);

    // violating smallness can break containment
    const IntervalLedger lg2 = interval_ledger(Rational(3, 2), Rational(1, 10), 11, Rational(2, 1));
    CHECK(!lg2.smallness_holds);
}

TEST_CASE("second order reduction") {
    // harmonic oscillator: rotation at frequency omega in each plane
    const double om = 1.7;
    SecondOrderSpec spec;
    spec.a_zero = om * om * Mat::Identity(1, 1);
    spec.a_inf = om * om * Mat::Identity(1, 1);
    spec.r0 = 1.0;
    const SecondOrderSystem sys = second_order_to_hamiltonian(spec);
    Vec z0(2);
    z0 << 1.0, 0.0;
    const Vec z1 = flow_point(*sys.hamiltonian, z0, 0.0, 2.0 * M_PI / om, FlowOptions{4096, 1e6});
    CHECK((z1 - z0).norm() < 1e-6);

    // companion matrix structure [[0, I], [-A, 0]]
    const Mat gen = -standard_j(1) * sys.lin_at_inf.constant_b();
    CHECK(gen(0, 1) == doctest::Approx(1.0));
    CHECK(gen(1, 0) == doctest::Approx(-om * om));

    // mean-index difference between the two companion systems
    SecondOrderSpec spec2 = spec;
    spec2.a_zero = 0.25 * Mat::Identity(1, 1);
    const SecondOrderSystem sys2 = second_order_to_hamiltonian(spec2);
    const auto p0 = path_from_generator(ExponentialGen{-standard_j(1) * sys2.lin_at_zero.constant_b()}, 1);
    const auto pi = path_from_generator(ExponentialGen{-standard_j(1) * sys2.lin_at_inf.constant_b()}, 1);
    const double m0 = mean_index(p0).value;
    const double mi = mean_index(pi).value;
    CHECK(std::abs(m0 - mi) > 0.1);

    // degenerate system at infinity rejected: A = (2 pi)^2 gives monodromy I
    SecondOrderSpec bad = spec;
    bad.a_inf = std::pow(2.0 * M_PI, 2) * Mat::Identity(1, 1);
    CHECK_THROWS_AS(second_order_to_hamiltonian(bad), NondegeneracyError);
}
