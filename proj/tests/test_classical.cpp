#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

#include "ktop/classical.hpp"
#include "ktop/quantum.hpp"

using namespace ktop;

namespace {

double distance(const SpherePoint& a, const SpherePoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

SpherePoint random_point(std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  return SpherePoint{n(gen), n(gen), n(gen)}.normalized();
}

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("classical_step examples") {
  for (double k : {0.0, 1.0, 7.3}) {
    CHECK(distance(classical_step({0, 0, 1}, k), {1, 0, 0}) < 1e-15);
  }
  SUBCASE("k = 0 is (X, Y, Z) -> (Z, Y, -X) with period 4") {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 100; ++i) {
      const SpherePoint p = random_point(gen);
      CHECK(distance(classical_step(p, 0.0), {p.z, p.y, -p.x}) < 1e-15);
      SpherePoint q = p;
      for (int s = 0; s < 4; ++s) q = classical_step(q, 0.0);
      CHECK(distance(p, q) < 1e-12);
    }
  }
  SUBCASE("unit norm is kept over a long chaotic trajectory") {
    SpherePoint p = SpherePoint{0.3, 0.4, 0.5}.normalized();
    double worst = 0.0;
    for (int s = 0; s < 1000000; ++s) {
      p = classical_step(p, 6.0);
      if (s % 1000 == 0) worst = std::max(worst, std::abs(p.norm() - 1.0));
    }
    CHECK(worst < 1e-9);
    CHECK(std::abs(p.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("classical_step_stereo") {
  SUBCASE("gamma = 0 goes to gamma = 1") {
    const PhasePoint q = classical_step_stereo(PhasePoint::from_gamma(0.0), 4.0);
    CHECK(std::abs(*q.north_gamma() - 1.0) < 1e-15);
  }
  SUBCASE("imaginary gamma carries no kick phase") {
    const Complex g(0.0, 0.7);
    const PhasePoint q = classical_step_stereo(PhasePoint::from_gamma(g), 5.0);
    CHECK(std::abs(*q.north_gamma() - (1.0 + g) / (1.0 - g)) < 1e-14);
  }
  SUBCASE("agrees with the Cartesian map on 10^4 points") {
    std::mt19937_64 gen(17);
    for (double k : {0.0, 3.0, 10.0}) {
      double worst = 0.0;
      for (int i = 0; i < 10000; ++i) {
        const SpherePoint p = random_point(gen);
        const SpherePoint a = classical_step(p, k);
        const SpherePoint b = classical_step_stereo(PhasePoint::from_cartesian(p), k).cartesian();
        worst = std::max(worst, distance(a, b));
      }
      CHECK(worst < 1e-9);
    }
  }
  SUBCASE("Moebius pole and south pole") {
    const PhasePoint a = classical_step_stereo(PhasePoint::from_gamma(1.0), 2.0);
    CHECK(distance(a.cartesian(), {0, 0, -1}) < 1e-15);
    const PhasePoint b = classical_step_stereo(PhasePoint::from_south(0.0), 2.0);
    CHECK(distance(b.cartesian(), classical_step({0, 0, -1}, 2.0)) < 1e-15);
  }
  SUBCASE("results sit in their preferred chart") {
    std::mt19937_64 gen(23);
    for (int i = 0; i < 1000; ++i) {
      const PhasePoint q = classical_step_stereo(PhasePoint::from_cartesian(random_point(gen)), 3.0);
      CHECK(std::abs(q.coordinate()) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("Ensemble validation") {
  Ensemble e{{SpherePoint{}, SpherePoint{}}, {0.5, 0.5}, 0};
  CHECK_NOTHROW(e.validate());
  e.weights = {0.7, 0.7};
  CHECK_THROWS_AS(e.validate(), Error);
  e.weights = {1.5, -0.5};
  CHECK_THROWS_AS(e.validate(), Error);
  e.weights = {1.0};
  CHECK_THROWS_AS(e.validate(), Error);
  CHECK_THROWS_AS(sample_uniform_ensemble(0, 1), Error);
  CHECK_THROWS_AS(sample_coherent_ensemble(PhasePoint::from_gamma(0.0), SpinJ(2), 0, 1), Error);
  CHECK_NOTHROW(sample_uniform_ensemble(1000000, 5).validate());
}

TEST_CASE("sample_coherent_ensemble") {
  SUBCASE("deterministic across runs and worker counts") {
    const PhasePoint t = PhasePoint::from_angles(1.0, 0.7);
    const Ensemble a = sample_coherent_ensemble(t, SpinJ(10), 5000, 42, 1);
    const Ensemble b = sample_coherent_ensemble(t, SpinJ(10), 5000, 42, 4);
    const Ensemble c = sample_coherent_ensemble(t, SpinJ(10), 5000, 42, 3);
    bool same = true;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      same = same && a.points[i].x == b.points[i].x && a.points[i].y == b.points[i].y &&
             a.points[i].z == b.points[i].z && a.points[i].x == c.points[i].x;
    }
    CHECK(same);
    const Ensemble d = sample_coherent_ensemble(t, SpinJ(10), 5000, 43, 1);
    CHECK(d.points[0].x != a.points[0].x);
  }
  SUBCASE("north pole target: mean Z = j/(j+1) within 3 sigma") {
    const int n = 200000;
    for (int tj : {2, 10, 40}) {
      const double j = tj / 2.0;
      const Ensemble e = sample_coherent_ensemble(PhasePoint::from_gamma(0.0), SpinJ(tj), n, 9);
      double mean = 0.0, sq = 0.0;
      for (const auto& p : e.points) {
        mean += p.z;
        sq += p.z * p.z;
      }
      mean /= n;
      const double sigma = std::sqrt((sq / n - mean * mean) / n);
      CAPTURE(tj);
      CHECK(std::abs(mean - j / (j + 1.0)) < 3.0 * sigma);
      // Quantum <Jz>/j = 1; the surrogate sits 1/(j+1) below it.
      CHECK(std::abs(mean - 1.0) < 1.0 / (j + 1.0) + 3.0 * sigma);
    }
  }
  SUBCASE("large j concentrates on the target") {
    const PhasePoint t = PhasePoint::from_angles(2.0, -1.2);
    const Ensemble e = sample_coherent_ensemble(t, SpinJ(20000), 10000, 4);
    CHECK(distance(e.mean().normalized(), t.cartesian()) < 0.02);
  }
}

TEST_CASE("evolve_ensemble") {
  SUBCASE("single point follows classical_step") {
    const SpherePoint p = SpherePoint{0.1, -0.5, 0.8}.normalized();
    const EnsembleEvolution ev = evolve_ensemble(Ensemble{{p}, {1.0}, 0}, 3.0, 15, SpinJ(4));
    SpherePoint q = p;
    for (int s = 0; s <= 15; ++s) {
      CHECK(distance(ev.mean_xyz[s], q) < 1e-15);
      const MomentVector f = moments_from_delta(SpinJ(4), PhasePoint::from_cartesian(q));
      CHECK((ev.moments[s].values - f.values).cwiseAbs().maxCoeff() < 1e-15);
      q = classical_step(q, 3.0);
    }
    CHECK(ev.moments.size() == 16);
  }
  SUBCASE("uniform ensemble at k = 0 keeps a zero mean") {
    const std::size_t n = 40000;
    const EnsembleEvolution ev = evolve_ensemble(sample_uniform_ensemble(n, 8), 0.0, 8, std::nullopt);
    CHECK(ev.moments.empty());
    for (const auto& m : ev.mean_xyz) {
      CHECK(std::abs(m.x) < 3.0 / std::sqrt(double(n)));
      CHECK(std::abs(m.y) < 3.0 / std::sqrt(double(n)));
      CHECK(std::abs(m.z) < 3.0 / std::sqrt(double(n)));
    }
  }
  SUBCASE("bitwise independent of the worker count") {
    const Ensemble e = sample_coherent_ensemble(PhasePoint::from_angles(1.0, 0.7), SpinJ(6), 3001, 2);
    const EnsembleEvolution a = evolve_ensemble(e, 3.0, 10, SpinJ(3), 1);
    const EnsembleEvolution b = evolve_ensemble(e, 3.0, 10, SpinJ(3), 4);
    for (std::size_t s = 0; s < a.mean_xyz.size(); ++s) {
      CHECK(a.mean_xyz[s].x == b.mean_xyz[s].x);
      CHECK(a.mean_xyz[s].z == b.mean_xyz[s].z);
      CHECK((a.moments[s].values - b.moments[s].values).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("ensemble at j = 80 tracks the quantum mean after one step") {
    const SpinRep s = make_spin_rep(SpinJ(160));
    const PhasePoint p = PhasePoint::from_angles(1.0, 0.7);
    const EnsembleEvolution ev = evolve_ensemble(sample_coherent_ensemble(p, s.j, 20000, 1), 3.0, 1, std::nullopt);
    const CVector v = floquet_operator({s.j, 3.0}) * coherent_vector(s.j, p, true).components;
    const double quantum_x = v.dot(s.jx * v).real() / 80.0;
    CHECK(std::abs(ev.mean_xyz[1].x - quantum_x) < 5.0 / 80.0);
  }
  SUBCASE("negative steps") {
    CHECK_THROWS_AS(evolve_ensemble(Ensemble{{SpherePoint{}}, {1.0}, 0}, 1.0, -1, std::nullopt), Error);
  }
}

TEST_CASE("parallel_for") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 57) throw Error("boom");
                               }),
                  Error);
  std::atomic<int> calls{0};
  parallel_for(0, 4, [&](std::size_t) { ++calls; });
  CHECK(calls == 0);
}

}  // TEST_SUITE
