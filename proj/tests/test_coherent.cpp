#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ktop/coherent.hpp"

using namespace ktop;

namespace {

Complex random_gamma(std::mt19937_64& gen, double radius) {
  std::uniform_real_distribution<double> r(0.0, radius), a(0.0, 2.0 * std::numbers::pi);
  return std::polar(r(gen), a(gen));
}

Complex matrix_expectation(SpinJ j, const PhasePoint& p, const CMatrix& op) {
  const CVector v = coherent_vector(j, p, true).components;
  return v.dot(op * v);
}

CVector unnormalized(SpinJ j, Complex gamma) {
  return coherent_vector(j, PhasePoint::from_gamma(gamma), false).components;
}

}  // namespace

TEST_SUITE("coherent") {

TEST_CASE("chart construction") {
  SUBCASE("north gamma = e^{i phi} tan(theta/2)") {
    const PhasePoint p = PhasePoint::from_angles(1.0, 0.7);
    CHECK(p.chart() == Chart::North);
    CHECK(std::abs(p.coordinate() - std::polar(std::tan(0.5), 0.7)) < 1e-15);
  }
  SUBCASE("southern hemisphere is stored on the south chart") {
    const PhasePoint p = PhasePoint::from_angles(2.5, -0.3);
    CHECK(p.chart() == Chart::South);
    CHECK(std::abs(*p.north_gamma() - std::polar(std::tan(1.25), -0.3)) < 1e-12);
    CHECK(std::abs(*p.south_w() - 1.0 / std::conj(*p.north_gamma())) < 1e-14);
  }
  SUBCASE("poles") {
    const PhasePoint south = PhasePoint::from_south(0.0);
    CHECK(!south.north_gamma().has_value());
    CHECK(south.cartesian().z == -1.0);
    CHECK(!PhasePoint::from_gamma(0.0).south_w().has_value());
    CHECK(PhasePoint::from_angles(std::numbers::pi, 0.0).cartesian().z == doctest::Approx(-1.0));
  }
  SUBCASE("X on both charts") {
    const Complex g(0.3, -0.8);
    const PhasePoint n = PhasePoint::from_gamma(g);
    const PhasePoint s = PhasePoint::from_south(1.0 / std::conj(g));
    CHECK(n.x() == doctest::Approx(2.0 * g.real() / (1.0 + std::norm(g))));
    CHECK(s.x() == doctest::Approx(n.x()).epsilon(1e-14));
  }
}

TEST_CASE("stereographic round trip away from the poles") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> th(0.05, std::numbers::pi - 0.05), ph(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double theta = th(gen), phi = ph(gen);
    const PhasePoint p = PhasePoint::from_angles(theta, phi);
    const SpherePoint c = p.cartesian();
    CHECK(std::abs(c.norm() - 1.0) < 1e-12);
    const PhasePoint q = PhasePoint::from_cartesian(c);
    CHECK(q.theta() == doctest::Approx(theta).epsilon(1e-12));
    CHECK(std::remainder(q.phi() - phi, 2.0 * std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    const auto g = p.north_gamma();
    REQUIRE(g.has_value());
    CHECK(std::abs(*g - Complex(c.x, c.y) / (1.0 + c.z)) < 1e-12 * (1.0 + std::abs(*g)));
  }
}

TEST_CASE("coherent_vector examples") {
  SUBCASE("gamma = 0 is the highest weight state") {
    for (int tj : {0, 1, 4, 9}) {
      const CVector v = coherent_vector(SpinJ(tj), PhasePoint::from_gamma(0.0), false).components;
      CHECK(v(0) == Complex(1.0));
      CHECK(v.tail(tj).norm() == 0.0);
    }
  }
  SUBCASE("j = 1/2 squared norm is 1 + |gamma|^2") {
    const Complex g(0.6, -1.7);
    CHECK(unnormalized(SpinJ(1), g).squaredNorm() == doctest::Approx(1.0 + std::norm(g)));
  }
  SUBCASE("Jz = j cos theta for normalized states") {
    for (int tj : {1, 2, 7, 20}) {
      const SpinRep s = make_spin_rep(SpinJ(tj));
      for (double theta : {0.0, 0.4, 1.9, 3.0, std::numbers::pi}) {
        const PhasePoint p = PhasePoint::from_angles(theta, 1.1);
        const Complex jz = matrix_expectation(s.j, p, s.jz);
        CHECK(std::abs(jz - s.j.value() * std::cos(theta)) < 1e-10);
      }
    }
  }
  SUBCASE("south pole is the lowest weight state") {
    const CVector v = coherent_vector(SpinJ(4), PhasePoint::from_south(0.0), true).components;
    CHECK(std::abs(v(4)) == doctest::Approx(1.0));
    CHECK(v.head(4).norm() == 0.0);
  }
  SUBCASE("south pole has no unnormalized form") {
    CHECK_THROWS_WITH_AS(coherent_vector(SpinJ(2), PhasePoint::from_south(0.0), false),
                         "chart conversion required", Error);
  }
  SUBCASE("south chart input equals its north-chart conversion") {
    const Complex g(1.3, 2.2);
    const CVector a = coherent_vector(SpinJ(6), PhasePoint::from_gamma(g), true).components;
    const CVector b = coherent_vector(SpinJ(6), PhasePoint::from_south(1.0 / std::conj(g)), true).components;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("norm identity (1 + |gamma|^2)^{2j}") {
  std::mt19937_64 gen(2024);
  for (int tj = 1; tj <= 40; ++tj) {
    for (int i = 0; i < 200; ++i) {
      const Complex g = random_gamma(gen, 5.0);
      const double expected = std::pow(1.0 + std::norm(g), tj);
      const double got = unnormalized(SpinJ(tj), g).squaredNorm();
      CHECK(std::abs(got - expected) / expected < 1e-9);
    }
  }
}

TEST_CASE("differential actions on the unnormalized state") {
  const double h = 1e-6;
  std::mt19937_64 gen(7);
  for (int tj : {1, 2, 5, 10}) {
    const SpinRep s = make_spin_rep(SpinJ(tj));
    const double j = s.j.value();
    for (int i = 0; i < 20; ++i) {
      const Complex g = random_gamma(gen, 1.5);
      const CVector v = unnormalized(s.j, g);
      const CVector dv = (unnormalized(s.j, g + h) - unnormalized(s.j, g - h)) / (2.0 * h);
      CHECK((s.jminus * v - dv).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((s.jplus * v - (2.0 * j * g * v - g * g * dv)).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((s.jz * v - (j * v - g * dv)).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("coherent_expectations") {
  SUBCASE("highest weight") {
    const CoherentExpectations e = coherent_expectations(SpinJ(5), PhasePoint::from_gamma(0.0));
    CHECK(e.jz == doctest::Approx(2.5));
    CHECK(std::abs(e.jplus) + std::abs(e.jminus) < 1e-15);
  }
  SUBCASE("j = 1/2, gamma = 1") {
    const CoherentExpectations e = coherent_expectations(SpinJ(1), PhasePoint::from_gamma(1.0));
    CHECK(std::abs(e.jz) < 1e-15);
    CHECK(e.jx() == doctest::Approx(0.5));
  }
  SUBCASE("matrix oracle and |<J>| = j") {
    std::mt19937_64 gen(99);
    for (int tj : {1, 3, 8, 15}) {
      const SpinRep s = make_spin_rep(SpinJ(tj));
      const double j = s.j.value();
      for (int i = 0; i < 30; ++i) {
        const Complex g = random_gamma(gen, 3.0);
        const PhasePoint p = PhasePoint::from_gamma(g);
        const CoherentExpectations e = coherent_expectations(s.j, p);
        CHECK(std::abs(e.jplus - matrix_expectation(s.j, p, s.jplus)) < 1e-10);
        CHECK(std::abs(e.jminus - matrix_expectation(s.j, p, s.jminus)) < 1e-10);
        CHECK(std::abs(e.jz - matrix_expectation(s.j, p, s.jz)) < 1e-10);
        CHECK(std::abs(e.jplus - 2.0 * j * g / (1.0 + std::norm(g))) < 1e-10);
        CHECK(std::abs(e.jx() * e.jx() + e.jy() * e.jy() + e.jz * e.jz - j * j) < 1e-10);
      }
    }
  }
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const GaussLegendre gl = gauss_legendre(12);
  REQUIRE(gl.nodes.size() == 12);
  for (int deg = 0; deg <= 23; ++deg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) sum += gl.weights[i] * std::pow(gl.nodes[i], deg);
    const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1.0);
    CHECK(sum == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("resolution of the identity") {
  CHECK(identity_resolution_residual(SpinJ(0)) < 1e-14);
  CHECK(identity_resolution_residual(SpinJ(1), {64, 64}) < 1e-10);
  CHECK(identity_resolution_residual(SpinJ(20), {128, 128}) < 1e-8);
  for (int tj = 1; tj <= 20; ++tj) {
    CAPTURE(tj);
    CHECK(identity_resolution_residual(SpinJ(tj)) < 1e-8);
  }
  SUBCASE("residual shrinks as nodes double") {
    double previous = identity_resolution_residual(SpinJ(6), {2, 2});
    for (int n : {4, 8, 16, 32, 64}) {
      const double r = identity_resolution_residual(SpinJ(6), {n, n});
      CAPTURE(n);
      CHECK((r <= 1.1 * previous || r < 1e-13));
      previous = r;
    }
    CHECK(previous < 1e-13);
  }
}

TEST_CASE("moments_from_delta") {
  SUBCASE("gamma = 0") {
    const MomentVector f = moments_from_delta(SpinJ(4), PhasePoint::from_gamma(0.0));
    CHECK(f(0, 0) == Complex(1.0));
    CHECK(f.values.cwiseAbs().sum() == doctest::Approx(1.0));
  }
  SUBCASE("j = 1/2, gamma = 1") {
    const MomentVector f = moments_from_delta(SpinJ(1), PhasePoint::from_gamma(1.0));
    for (int n = 0; n < 2; ++n)
      for (int m = 0; m < 2; ++m) CHECK(std::abs(f(n, m) - 0.5) < 1e-15);
  }
  SUBCASE("binomial sum of the diagonal is 1, and Hermitian symmetry") {
    std::mt19937_64 gen(5);
    for (int tj : {1, 6, 13, 30}) {
      const Eigen::VectorXd b = binomial_row(tj);
      for (int i = 0; i < 20; ++i) {
        const MomentVector f = moments_from_delta(SpinJ(tj), PhasePoint::from_gamma(random_gamma(gen, 4.0)));
        Complex sum = 0.0;
        for (int n = 0; n <= tj; ++n) sum += b(n) * f(n, n);
        CHECK(std::abs(sum - 1.0) < 1e-12);
        CHECK(f.hermitian_defect() < 1e-15);
      }
    }
  }
  SUBCASE("south chart agrees with north chart") {
    const Complex g(-0.4, 1.9);
    const MomentVector a = moments_from_delta(SpinJ(7), PhasePoint::from_gamma(g));
    const MomentVector b = moments_from_delta(SpinJ(7), PhasePoint::from_south(1.0 / std::conj(g)));
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-14);
    const MomentVector pole = moments_from_delta(SpinJ(3), PhasePoint::from_south(0.0));
    CHECK(pole(3, 3) == Complex(1.0));
    CHECK(pole.values.cwiseAbs().sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("moments and density matrices") {
  std::mt19937_64 gen(31);
  const SpinJ j(5);
  SUBCASE("coherent projector moments equal the delta moments") {
    const PhasePoint p = PhasePoint::from_gamma(random_gamma(gen, 2.0));
    const CVector v = coherent_vector(j, p, true).components;
    const MomentVector a = moments_from_density(j, v * v.adjoint());
    const MomentVector b = moments_from_delta(j, p);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("round trip") {
    CMatrix rho = CMatrix::Random(6, 6);
    rho = rho * rho.adjoint();
    rho /= rho.trace();
    CHECK((density_from_moments(moments_from_density(j, rho)) - rho).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("observable_coefficients") {
  SUBCASE("j = 1/2 Jz") {
    const auto c = observable_coefficients(SpinJ(1), Observable::Jz);
    REQUIRE(c.size() == 2);
    CHECK(c[0].n == 0);
    CHECK(c[0].m == 0);
    CHECK(c[0].coefficient == 0.5);
    CHECK(c[1].n == 1);
    CHECK(c[1].m == 1);
    CHECK(c[1].coefficient == -0.5);
  }
  SUBCASE("j = 1/2 Jminus") {
    const auto c = observable_coefficients(SpinJ(1), Observable::Jminus);
    REQUIRE(c.size() == 1);
    CHECK(c[0].n == 0);
    CHECK(c[0].m == 1);
    CHECK(c[0].coefficient == 1.0);
  }
  SUBCASE("delta moments reproduce coherent expectations") {
    std::mt19937_64 gen(77);
    for (int tj = 1; tj <= 24; ++tj) {
      for (int i = 0; i < 10; ++i) {
        const PhasePoint p = PhasePoint::from_gamma(random_gamma(gen, 2.5));
        const MomentVector f = moments_from_delta(SpinJ(tj), p);
        const CoherentExpectations e = coherent_expectations(SpinJ(tj), p);
        CHECK(std::abs(expectation_from_moments(f, Observable::Jz) - e.jz) < 1e-10);
        CHECK(std::abs(expectation_from_moments(f, Observable::Jplus) - e.jplus) < 1e-10);
        CHECK(std::abs(expectation_from_moments(f, Observable::Jminus) - e.jminus) < 1e-10);
        const SpinExpectations s = spin_expectations(f);
        CHECK(s.jx == doctest::Approx(e.jx()).epsilon(1e-10).scale(1.0));
        CHECK(s.jy == doctest::Approx(e.jy()).epsilon(1e-10).scale(1.0));
      }
    }
  }
  SUBCASE("arbitrary density matrices") {
    const SpinRep s = make_spin_rep(SpinJ(6));
    CMatrix rho = CMatrix::Random(7, 7);
    rho = rho * rho.adjoint();
    rho /= rho.trace();
    const MomentVector f = moments_from_density(s.j, rho);
    CHECK(std::abs(expectation_from_moments(f, Observable::Jz) - (rho * s.jz).trace()) < 1e-12);
    CHECK(std::abs(expectation_from_moments(f, Observable::Jplus) - (rho * s.jplus).trace()) < 1e-12);
  }
}

}  // TEST_SUITE
