#pragma once

#include "morselab/qg.hpp"
#include "morselab/rng.hpp"

namespace morselab {

// Rejection sampler over pruned random DFS: grows a path letter by letter in
// rng-shuffled order, keeping every prefix a (lambda,kappa)-quasi-geodesic,
// and backtracks on dead ends. All randomness comes from the caller's
// counter rng, so a (seed, stream) pair reproduces the draw exactly.
struct SamplerConfig {
  QGParams params;
  int target_length = 8;
  std::int64_t max_steps = 50000;

  // optional containment: vertices v with near_set[v] > near_radius are off
  // limits (near_set is a distance row, e.g. to another path)
  const std::vector<std::uint16_t>* near_set = nullptr;
  int near_radius = 0;

  // optional endpoint condition: finish within end_tolerance of end_near
  int end_near = -1;
  int end_tolerance = 0;
};

std::optional<DiscretePath> sample_qg_path(const CayleyBall& ball, int start,
                                           const SamplerConfig& cfg, CounterRng& rng);

}  // namespace morselab
