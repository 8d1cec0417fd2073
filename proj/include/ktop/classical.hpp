#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ktop/coherent.hpp"
#include "ktop/geometry.hpp"

namespace ktop {

/// One period of the classical top: quarter turn about y, then a twist about z by k Z'.
///   X'' = Z cos(kX) + Y sin(kX),  Y'' = -Z sin(kX) + Y cos(kX),  Z'' = -X
/// The result is renormalized onto the sphere.
SpherePoint classical_step(const SpherePoint& point, double k);

/// Same map in the stereographic chart:
///   gamma'' = (1 + gamma)/(1 - gamma) exp(-i k X),  X = (gamma + gamma*)/(1 + |gamma|^2).
/// Points with Re(gamma) > 0, which the Moebius factor would send past the unit circle,
/// are advanced in the south chart, w'' = exp(-i k X)(w - 1)/(w + 1), so the pole at
/// gamma = 1 is never evaluated. The result is returned in its preferred chart.
PhasePoint classical_step_stereo(const PhasePoint& point, double k);

/// Moebius image of a point under the quarter turn alone (k = 0).
inline PhasePoint quarter_turn(const PhasePoint& point) { return classical_step_stereo(point, 0.0); }

struct Ensemble {
  std::vector<SpherePoint> points;
  std::vector<double> weights;
  std::uint64_t rng_seed = 0;

  /// Throws unless weights are non-negative, match points, and sum to 1 to 1e-12.
  void validate() const;
  SpherePoint mean() const;
};

/// Draws `n_samples` points with density proportional to cos^{4j}(Theta/2), Theta the
/// angle from `target`; equal weights. Each point uses its own RNG stream derived from
/// (seed, index), so the result does not depend on `workers`.
Ensemble sample_coherent_ensemble(const PhasePoint& target, SpinJ j, std::size_t n_samples,
                                  std::uint64_t seed, unsigned workers = 1);

/// Uniform distribution on the sphere, equal weights.
Ensemble sample_uniform_ensemble(std::size_t n_samples, std::uint64_t seed, unsigned workers = 1);

struct EnsembleEvolution {
  Ensemble final;
  /// Weighted mean (X, Y, Z) at steps 0..steps.
  std::vector<SpherePoint> mean_xyz;
  /// Weighted averages of f_nm at resolution `moment_j`, steps 0..steps; empty without one.
  std::vector<MomentVector> moments;
};

EnsembleEvolution evolve_ensemble(const Ensemble& ensemble, double k, int steps,
                                  std::optional<SpinJ> moment_j, unsigned workers = 1);

/// Runs body(i) for i in [0, n) on up to `workers` threads in contiguous blocks.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body);

}  // namespace ktop

#include "ktop/detail/parallel.hpp"
