#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "morselab/group_spec.hpp"

namespace morselab {

struct MarginError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using DistRow = std::shared_ptr<const std::vector<std::uint16_t>>;

constexpr std::uint16_t kUnreachable = 0xffff;

// Finite radius-R ball of a Cayley graph or fixture graph. Immutable after
// construction; distance rows are memoized behind a lock, so sharing one
// ball across threads is safe.
//
// `distance` is the metric of the ball graph itself. It provably equals the
// ambient (full group / full fixture) distance for a pair whenever
// `pair_metric_sound` holds: for the supported group kinds the full metric
// ball is ambient-convex, and for truncated fixture balls the sum rule
// d(o,u) + d(o,v) <= R guarantees some ambient geodesic stays inside.
class CayleyBall {
 public:
  int radius() const { return radius_; }
  int vertex_count() const { return static_cast<int>(parent_.size()); }
  int origin() const { return 0; }
  const GroupSpec& spec() const { return spec_; }
  const GroupEngine& engine() const { return *engine_; }
  int alphabet_size() const { return alphabet_; }
  const std::vector<LetterInfo>& letters() const { return engine_->letters(); }
  bool transitive() const { return engine_->transitive(); }

  bool exact_metric() const { return exact_metric_; }
  // 0 when the ball metric is ambient-exact everywhere; otherwise the
  // refusal buffer ceil(R/2): pairs with both endpoints at origin-distance
  // <= R - margin satisfy the sum rule.
  int validity_margin() const { return exact_metric_ ? 0 : (radius_ + 1) / 2; }

  int neighbor(int v, int letter) const { return adjacency_[static_cast<size_t>(v) * alphabet_ + letter]; }
  // True when the ambient graph has this edge but its far end lies outside
  // the ball; search routines use it to tell a radius cutoff from a genuinely
  // absent fixture edge.
  bool edge_clipped(int v, int letter) const {
    return (clipped_[v] >> letter) & 1u;
  }
  int letter_between(int u, int v) const;
  int degree(int v) const;

  int dist_to_origin(int v) const { return dist0_[v]; }
  std::vector<int> word_of(int v) const;  // letters of the shortlex label
  std::string vertex_name(int v) const;   // "e" or space-joined letters
  int find_by_word(const std::vector<int>& letters) const;  // -1 if it leaves the ball
  int find_by_name(const std::string& name) const;
  std::optional<int> apply_word(int start, const std::vector<int>& letters) const;

  int distance(int u, int v) const;
  bool pair_metric_sound(int u, int v) const {
    return exact_metric_ || dist_to_origin(u) + dist_to_origin(v) <= radius_;
  }
  // Margin-checked query per the declared-margin contract; throws MarginError.
  int distance_checked(int u, int v, int margin_needed) const;

  // True iff every ambient vertex within r of v is present in the ball, so
  // a search of reach r from v cannot be clipped by the boundary.
  bool region_complete(int v, int r) const { return dist_to_origin(v) + r <= radius_; }

  DistRow dist_row(int src) const;
  // True when every row was precomputed at construction (small balls); row
  // lookups are then contention-free and effectively free.
  bool rows_precomputed() const { return cache_->cap == 0; }

  std::string to_json_text() const;                 // versioned dump, canonical bytes
  static CayleyBall from_json_text(const std::string& text);
  std::uint64_t content_hash() const;

  friend CayleyBall build_ball(const GroupSpec& spec, int radius, std::int64_t vertex_budget);

 private:
  CayleyBall() = default;
  std::vector<std::uint16_t> bfs_row(int src) const;

  GroupSpec spec_;
  std::shared_ptr<GroupEngine> engine_;
  int radius_ = 0;
  int alphabet_ = 0;
  bool exact_metric_ = false;

  std::vector<int> parent_;       // BFS tree; -1 at origin
  std::vector<std::uint8_t> letter_in_;
  std::vector<std::uint16_t> dist0_;
  std::vector<int> adjacency_;    // dense V x alphabet, -1 for absent edges
  std::vector<std::uint32_t> clipped_;  // per-vertex bitmask of clipped letters
  std::unordered_map<std::string, int> key_to_id_;
  std::vector<std::string> keys_;

  // row memo; eagerly filled for small balls, LRU beyond that. Heap-held so
  // the ball stays movable.
  struct RowCache {
    std::mutex mutex;
    std::unordered_map<int, DistRow> rows;
    std::deque<int> order;
    size_t cap = 0;  // 0 = everything precomputed, no eviction
  };
  std::unique_ptr<RowCache> cache_ = std::make_unique<RowCache>();
};

// Builds the full metric ball. Vertex counts are cross-checked against the
// group's closed-form growth function; a mismatch is a construction bug and
// throws logic_error. Exceeding `vertex_budget` throws BudgetError with the
// attempted size.
CayleyBall build_ball(const GroupSpec& spec, int radius,
                      std::int64_t vertex_budget = 2'000'000);

}  // namespace morselab
