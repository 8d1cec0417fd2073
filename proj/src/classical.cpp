#include "ktop/classical.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ktop {

SpherePoint classical_step(const SpherePoint& p, double k) {
  const double c = std::cos(k * p.x);
  const double s = std::sin(k * p.x);
  return SpherePoint{p.z * c + p.y * s, -p.z * s + p.y * c, -p.x}.normalized();
}

PhasePoint classical_step_stereo(const PhasePoint& point, double k) {
  const double x = point.x();
  const Complex kick = std::polar(1.0, -k * x);
  if (x <= 0.0) {
    // Re(gamma) <= 0: the Moebius factor stays inside the unit disc.
    if (const auto gamma = point.north_gamma()) {
      return PhasePoint::from_gamma((1.0 + *gamma) / (1.0 - *gamma) * kick).in_preferred_chart();
    }
  }
  // Here Re(w) >= 0, so |w + 1| >= 1.
  const Complex w = *point.south_w();
  return PhasePoint::from_south(kick * (w - 1.0) / (w + 1.0)).in_preferred_chart();
}

void Ensemble::validate() const {
  if (points.size() != weights.size()) throw Error("ensemble: weights and points differ in size");
  // Compensated sum; a million equal weights would otherwise drift past 1e-12.
  double sum = 0.0, carry = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error("ensemble: weights must be non-negative");
    const double y = w - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error("ensemble: weights must sum to 1");
}

SpherePoint Ensemble::mean() const {
  SpherePoint m{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < points.size(); ++i) {
    m.x += weights[i] * points[i].x;
    m.y += weights[i] * points[i].y;
    m.z += weights[i] * points[i].z;
  }
  return m;
}

namespace {

std::mt19937_64 point_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// 53 random bits in [0, 1); spelled out so draws match across standard libraries.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::vector<double> equal_weights(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

// Fixed-size blocks keep floating-point reduction order independent of the worker count.
constexpr std::size_t kReductionBlock = 256;

}  // namespace

Ensemble sample_coherent_ensemble(const PhasePoint& target, SpinJ j, std::size_t n_samples,
                                  std::uint64_t seed, unsigned workers) {
  if (n_samples == 0) throw Error("sample_coherent_ensemble: n_samples must be >= 1");
  const double exponent = 1.0 / (j.two_j() + 1.0);
  const double ct = std::cos(target.theta()), st = std::sin(target.theta());
  const double cp = std::cos(target.phi()), sp = std::sin(target.phi());

  Ensemble e{std::vector<SpherePoint>(n_samples), equal_weights(n_samples), seed};
  parallel_for(n_samples, workers, [&](std::size_t i) {
    auto gen = point_stream(seed, i);
    // cos^2(Theta/2) has density proportional to c^{2j} on [0, 1].
    const double c = std::pow(uniform01(gen), exponent);
    const double cos_t = 2.0 * c - 1.0;
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    const double az = 2.0 * std::numbers::pi * uniform01(gen);
    const double lx = sin_t * std::cos(az), ly = sin_t * std::sin(az), lz = cos_t;
    // Rz(phi) Ry(theta) takes the z axis onto the target.
    const double rx = lx * ct + lz * st;
    const double rz = -lx * st + lz * ct;
    e.points[i] = SpherePoint{rx * cp - ly * sp, rx * sp + ly * cp, rz}.normalized();
  });
  return e;
}

Ensemble sample_uniform_ensemble(std::size_t n_samples, std::uint64_t seed, unsigned workers) {
  if (n_samples == 0) throw Error("sample_uniform_ensemble: n_samples must be >= 1");
  Ensemble e{std::vector<SpherePoint>(n_samples), equal_weights(n_samples), seed};
  parallel_for(n_samples, workers, [&](std::size_t i) {
    auto gen = point_stream(seed, i);
    const double z = 2.0 * uniform01(gen) - 1.0;
    const double az = 2.0 * std::numbers::pi * uniform01(gen);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    e.points[i] = SpherePoint{s * std::cos(az), s * std::sin(az), z};
  });
  return e;
}

namespace {

struct Averages {
  SpherePoint mean;
  std::optional<MomentVector> moments;
};

Averages ensemble_averages(const Ensemble& e, std::optional<SpinJ> moment_j, unsigned workers) {
  const int d = moment_j ? moment_j->dim() : 0;
  const std::size_t n = e.points.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<Eigen::Vector3d> partial_mean(blocks, Eigen::Vector3d::Zero());
  std::vector<CMatrix> partial_f(blocks, CMatrix::Zero(d, d));
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * kReductionBlock);
    for (std::size_t i = b * kReductionBlock; i < end; ++i) {
      const SpherePoint& p = e.points[i];
      const double w = e.weights[i];
      partial_mean[b] += w * Eigen::Vector3d(p.x, p.y, p.z);
      if (moment_j) {
        partial_f[b] += w * moments_from_delta(*moment_j, PhasePoint::from_cartesian(p)).values;
      }
    }
  });
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  CMatrix f = CMatrix::Zero(d, d);
  for (std::size_t b = 0; b < blocks; ++b) {
    mean += partial_mean[b];
    f += partial_f[b];
  }
  Averages a{SpherePoint{mean.x(), mean.y(), mean.z()}, std::nullopt};
  if (moment_j) a.moments = MomentVector{*moment_j, f};
  return a;
}

}  // namespace

EnsembleEvolution evolve_ensemble(const Ensemble& ensemble, double k, int steps,
                                  std::optional<SpinJ> moment_j, unsigned workers) {
  if (steps < 0) throw Error("evolve_ensemble: steps must be >= 0");
  ensemble.validate();
  EnsembleEvolution out{ensemble, {}, {}};
  auto record = [&] {
    Averages a = ensemble_averages(out.final, moment_j, workers);
    out.mean_xyz.push_back(a.mean);
    if (a.moments) out.moments.push_back(std::move(*a.moments));
  };
  record();
  for (int s = 0; s < steps; ++s) {
    parallel_for(out.final.points.size(), workers, [&](std::size_t i) {
      out.final.points[i] = classical_step(out.final.points[i], k);
    });
    record();
  }
  return out;
}

}  // namespace ktop
