#include "morselab/sampler.hpp"

#include <algorithm>

namespace morselab {

std::optional<DiscretePath> sample_qg_path(const CayleyBall& ball, int start,
                                           const SamplerConfig& cfg, CounterRng& rng) {
  ScaledQG scaled(cfg.params);
  auto allowed = [&](int v) {
    return !cfg.near_set || static_cast<int>((*cfg.near_set)[v]) <= cfg.near_radius;
  };
  if (!allowed(start)) return std::nullopt;

  DistRow end_row;
  if (cfg.end_near >= 0) end_row = ball.dist_row(cfg.end_near);

  std::vector<int> verts{start};
  std::vector<DistRow> rows{ball.dist_row(start)};
  std::vector<std::vector<int>> order_stack;
  std::vector<size_t> cursor_stack;

  auto push_order = [&] {
    std::vector<int> order(ball.alphabet_size());
    for (int i = 0; i < ball.alphabet_size(); ++i) order[i] = i;
    for (int i = ball.alphabet_size() - 1; i > 0; --i)
      std::swap(order[i], order[rng.below(i + 1)]);
    order_stack.push_back(std::move(order));
    cursor_stack.push_back(0);
  };
  push_order();

  std::int64_t steps = 0;
  while (!verts.empty()) {
    int depth = static_cast<int>(verts.size()) - 1;
    if (depth == cfg.target_length) {
      if (cfg.end_near < 0 || static_cast<int>((*end_row)[verts.back()]) <= cfg.end_tolerance)
        return DiscretePath(ball, verts);
      verts.pop_back();
      rows.pop_back();
      order_stack.pop_back();
      cursor_stack.pop_back();
      continue;
    }
    if (++steps > cfg.max_steps) return std::nullopt;
    if (cursor_stack.back() >= order_stack.back().size()) {
      verts.pop_back();
      rows.pop_back();
      order_stack.pop_back();
      cursor_stack.pop_back();
      continue;
    }
    int l = order_stack.back()[cursor_stack.back()++];
    int x = ball.neighbor(verts.back(), l);
    if (x < 0 || !allowed(x)) continue;
    std::int64_t j = depth + 1;
    // remaining length must still be able to meet the endpoint condition
    if (cfg.end_near >= 0 &&
        (*end_row)[x] > cfg.target_length - j + cfg.end_tolerance)
      continue;
    bool ok = true;
    for (std::int64_t i = 0; i <= depth; ++i) {
      std::int64_t dist = (*rows[i])[x];
      if (dist == kUnreachable || !scaled.lower_ok(j - i, dist)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    verts.push_back(x);
    rows.push_back(ball.dist_row(x));
    push_order();
  }
  return std::nullopt;
}

}  // namespace morselab
