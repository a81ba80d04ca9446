#pragma once

#include <array>
#include <unordered_map>

#include "morselab/qg.hpp"

namespace morselab {

// Deterministic assignment of a quasi-geodesic line to every ordered vertex
// pair in scope. Shortlex combings compute lines greedily from distance
// rows; fixture combings come from explicit tables.
class Combing {
 public:
  enum class Kind { Shortlex, FixtureTable };

  static Combing shortlex(const CayleyBall& ball);
  // Table lines: `x y : v0 v1 ... vk`, vertices written as dot-joined letter
  // words ("t1.t1", "e"). The loader validates endpoints and adjacency.
  static Combing from_table_text(const CayleyBall& ball, const std::string& text,
                                 QGParams declared);

  const CayleyBall& ball() const { return *ball_; }
  Kind kind() const { return kind_; }
  const QGParams& declared_params() const { return declared_; }

  // Path from x to y; shortlex kind derives it, table kind looks it up
  // (missing pair -> PathError).
  DiscretePath line(int x, int y) const;

 private:
  Combing(const CayleyBall& ball, Kind kind, QGParams declared)
      : ball_(&ball), kind_(kind), declared_(declared) {}

  const CayleyBall* ball_;
  Kind kind_;
  QGParams declared_;
  std::unordered_map<std::uint64_t, std::vector<int>> table_;
};

Combing shortlex_combing(const CayleyBall& ball);

// Constant extension to all nonnegative times: the endpoint beyond the
// domain. Negative times are an error.
int constant_extension(const DiscretePath& line, int time);

enum class BoundednessScope { BasepointOnly, AllPairs };

struct BoundednessReport {
  int kappa0_hat = 0;
  BoundednessScope scope = BoundednessScope::BasepointOnly;
  int radius_cap = 0;
  std::int64_t triples_checked = 0;
};

// Minimal integer kappa with d(q_{x y1}(t), q_{x y2}(t)) <= kappa*d(y1,y2) +
// kappa over the scope, times synchronized by constant extension. Exact over
// the stated scope.
BoundednessReport boundedness_estimate(const Combing& combing, BoundednessScope scope,
                                       int radius_cap);

struct CombingQGReport {
  bool all_ok = true;
  int bad_x = -1, bad_y = -1;
};

// Every sampled line must pass is_quasi_geodesic(declared_params).
CombingQGReport verify_combing_qg(const Combing& combing,
                                  const std::vector<std::pair<int, int>>& sample_pairs);

// line(g x, g y) == g . line(x, y) wherever both sides stay in the ball;
// checked exactly over the samples (group-kind balls).
bool combing_equivariant(const Combing& combing,
                         const std::vector<std::array<int, 3>>& g_x_y_samples);

}  // namespace morselab
