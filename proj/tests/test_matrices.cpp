#include <doctest.h>

#include "sympcal/matrices.hpp"
#include "sympcal/rng.hpp"

using namespace sympcal;

TEST_CASE("standard_j basics") {
    const Mat j1 = standard_j(1);
    CHECK(j1(0, 1) == -1.0);
    CHECK(j1(1, 0) == 1.0);
    CHECK(j1(0, 0) == 0.0);

    const Mat j2 = standard_j(2);
    CHECK((j2.topRightCorner(2, 2) + Mat::Identity(2, 2)).norm() == 0.0);
    CHECK((j2.bottomLeftCorner(2, 2) - Mat::Identity(2, 2)).norm() == 0.0);
    CHECK((j2 * j2 + Mat::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("is_symplectic") {
    CHECK(is_symplectic(standard_j(2), 1e-14));
    CHECK(is_symplectic(rot2(M_PI / 3), 1e-14));
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    CHECK(!is_symplectic(d, 1e-8));
    CHECK_THROWS_AS(is_symplectic(Mat::Identity(3, 3), 1e-8), DimensionError);
}

TEST_CASE("diamond layout and symplecticity") {
    const Mat i2 = Mat::Identity(2, 2);
    CHECK((diamond(i2, i2) - Mat::Identity(4, 4)).norm() == 0.0);

    Mat n1(2, 2);
    n1 << 1, 1, 0, 1;
    const Mat r = rot2(0.7);
    const Mat d = diamond(n1, r);
    // A-blocks interleave on the diagonal of the q-part
    CHECK(d(0, 0) == 1.0);
    CHECK(d(1, 1) == doctest::Approx(std::cos(0.7)));
    CHECK(d(0, 2) == 1.0);  // B-block of the first factor
    CHECK(is_symplectic(d, 1e-13));

    CounterRng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const Mat s1 = expm(standard_j(1) * ((Mat(2, 2) << rng.normal(), rng.normal(),
                                              0, rng.normal()).finished() +
                                             Mat::Identity(2, 2)).selfadjointView<Eigen::Upper>());
        const Mat s2 = expm(standard_j(2) * Mat::Identity(4, 4) * rng.uniform(-1, 1));
        CHECK(is_symplectic(diamond(s1, s2), 1e-10));
    }
}

TEST_CASE("expm agrees with closed forms") {
    Mat l(2, 2);
    l << 0, -1.3, 1.3, 0;
    CHECK((expm(l) - rot2(1.3)).norm() < 1e-14);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 0.4;
    d(1, 1) = -0.4;
    Mat e = expm(d);
    CHECK(e(0, 0) == doctest::Approx(std::exp(0.4)).epsilon(1e-14));
    // large-norm scaling path
    CHECK((expm(20.0 * l) - rot2(26.0)).norm() < 1e-11);
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre_01(8, x, w);
    double s0 = 0, s7 = 0;
    for (int i = 0; i < 8; ++i) {
        s0 += w[i];
        s7 += w[i] * std::pow(x[i], 7);
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s7 == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
}

TEST_CASE("rotation_det identifies the unitary factor") {
    CHECK(std::abs(rotation_det(rot2(0.9)) - Complex(std::cos(0.9), std::sin(0.9))) < 1e-14);
    // positive definite symplectic has trivial rotation
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    CHECK(std::abs(rotation_det(d) - Complex(1, 0)) < 1e-14);
}

TEST_CASE("counter rng is deterministic per seed") {
    CounterRng a(42), b(42), c(43);
    for (int i = 0; i < 16; ++i) {
        const double va = a.uniform();
        CHECK(va == b.uniform());
        (void)c.uniform();
    }
}
