#include "morselab/morse.hpp"

#include <algorithm>
#include <queue>

namespace morselab {

namespace {

// min distance to a vertex set, one BFS
std::vector<std::uint16_t> multi_source_row(const CayleyBall& ball,
                                            const std::vector<int>& sources) {
  std::vector<std::uint16_t> dist(ball.vertex_count(), kUnreachable);
  std::vector<int> queue;
  queue.reserve(ball.vertex_count());
  for (int s : sources)
    if (dist[s] == kUnreachable) {
      dist[s] = 0;
      queue.push_back(s);
    }
  int alphabet = ball.alphabet_size();
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int l = 0; l < alphabet; ++l) {
      int w = ball.neighbor(v, l);
      if (w >= 0 && dist[w] == kUnreachable) {
        dist[w] = static_cast<std::uint16_t>(dist[v] + 1);
        queue.push_back(w);
      }
    }
  }
  return dist;
}

struct PuncturedBfs {
  std::vector<std::int32_t> dist;    // -1 unreachable
  std::vector<std::int32_t> parent;  // -1 at source / unreachable
};

PuncturedBfs punctured_bfs(const CayleyBall& ball, int src,
                           const std::vector<char>& allowed) {
  PuncturedBfs out;
  out.dist.assign(ball.vertex_count(), -1);
  out.parent.assign(ball.vertex_count(), -1);
  if (!allowed[src]) return out;
  std::vector<int> queue{src};
  out.dist[src] = 0;
  int alphabet = ball.alphabet_size();
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int l = 0; l < alphabet; ++l) {
      int w = ball.neighbor(v, l);
      if (w >= 0 && allowed[w] && out.dist[w] < 0) {
        out.dist[w] = out.dist[v] + 1;
        out.parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return out;
}

std::vector<int> reconstruct(const PuncturedBfs& bfs, int target) {
  std::vector<int> verts;
  for (int v = target; v >= 0; v = bfs.parent[v]) verts.push_back(v);
  std::reverse(verts.begin(), verts.end());
  return verts;
}

// smallest integer distance strictly greater than mu
int escape_threshold(const Rat& mu) {
  std::int64_t f = floor_rat(mu);
  return static_cast<int>((Rat(f) == mu) ? f + 1 : ceil_rat(mu));
}

// greedy shortlex-least geodesic toward target, following its distance row
std::vector<int> shortlex_geodesic_verts(const CayleyBall& ball, int from, int to) {
  auto row = ball.dist_row(to);
  std::vector<int> verts{from};
  int v = from;
  while (v != to) {
    int next = -1;
    for (int l = 0; l < ball.alphabet_size(); ++l) {
      int w = ball.neighbor(v, l);
      if (w >= 0 && (*row)[w] + 1 == (*row)[v]) {
        next = w;
        break;
      }
    }
    if (next < 0) throw std::logic_error("geodesic step failed");
    verts.push_back(next);
    v = next;
  }
  return verts;
}

// Shared setup for one endpoint pair of one gamma.
struct PairSearch {
  const CayleyBall& ball;
  const DiscretePath& gamma;
  int s, t;
  QGParams qg;
  ScaledQG scaled;
  int a, b;
  std::int64_t t_cap;                     // floor(Q*(d(a,b)+q))
  std::vector<std::int64_t> tmax_by_dist; // floor(Q*(d+q)) per distance
  std::vector<std::uint16_t> seg_dist;    // distance to gamma|[s..t]
  DistRow row_a, row_b;
  bool region_certified = false;
  Rat upper_bound{0};
  std::vector<int> extremal;              // candidate escape vertices, best first

  PairSearch(const DiscretePath& g, int s_, int t_, const QGParams& params)
      : ball(g.ball()), gamma(g), s(s_), t(t_), qg(params), scaled(params) {
    a = gamma.vertex(s);
    b = gamma.vertex(t);
    row_a = ball.dist_row(a);
    row_b = ball.dist_row(b);
    std::int64_t d_ab = (*row_a)[b];
    auto cap_for = [&](std::int64_t d) {
      return floor_rat(qg.lambda * (Rat(d) + qg.kappa));
    };
    t_cap = cap_for(d_ab);

    int reach = ball.dist_to_origin(a) + ball.dist_to_origin(b) +
                static_cast<int>(std::min<std::int64_t>(t_cap, 1 << 20));
    if (!ball.exact_metric() && reach > ball.radius())
      throw MarginError("weak-Morse search region is not metrically sound in this truncated ball");
    region_certified = reach <= 2 * ball.radius();

    int maxd = 2 * ball.radius() + 1;  // no two ball vertices are farther apart
    tmax_by_dist.resize(maxd + 1);
    for (int d = 0; d <= maxd; ++d) tmax_by_dist[d] = cap_for(d);

    std::vector<int> seg;
    for (int i = s; i <= t; ++i) seg.push_back(gamma.vertex(i));
    seg_dist = multi_source_row(ball, seg);

    if (region_certified) {
      std::vector<std::pair<int, int>> pool;  // (excursion, vertex)
      int best = 0;
      for (int z = 0; z < ball.vertex_count(); ++z) {
        if ((*row_a)[z] == kUnreachable || (*row_b)[z] == kUnreachable) continue;
        if ((*row_a)[z] + (*row_b)[z] > t_cap) continue;
        int e = seg_dist[z];
        best = std::max(best, e);
        if (e > 0) pool.push_back({e, z});
      }
      upper_bound = Rat(best);
      std::sort(pool.begin(), pool.end(),
                [](auto& x, auto& y) { return x.first != y.first ? x.first > y.first
                                                                 : x.second < y.second; });
      for (size_t i = 0; i < pool.size() && i < 12; ++i) extremal.push_back(pool[i].second);
    }
  }

  int excursion_of(const std::vector<int>& verts) const {
    int e = 0;
    for (int v : verts) e = std::max<int>(e, seg_dist[v]);
    return e;
  }

  bool valid_witness(const std::vector<int>& verts) const {
    if (verts.front() != a || verts.back() != b) return false;
    DiscretePath p(ball, verts, true);
    return is_quasi_geodesic(p, qg).ok;
  }

  // corner construction: geodesic a -> z -> b, validated exactly
  std::optional<std::vector<int>> construct_through(int z) const {
    auto first = shortlex_geodesic_verts(ball, a, z);
    auto second = shortlex_geodesic_verts(ball, z, b);
    first.insert(first.end(), second.begin() + 1, second.end());
    if (static_cast<std::int64_t>(first.size()) - 1 > t_cap) return std::nullopt;
    if (!valid_witness(first)) return std::nullopt;
    return first;
  }

  struct DfsOutcome {
    bool exhaustive = true;
    std::optional<std::vector<int>> witness;
    int best_excursion = -1;  // over complete witnesses only
    std::int64_t nodes = 0;
  };

  // Exhaustive DFS over unit-speed paths from a. Two modes of pruning:
  //
  //  - With precomputed rows (small balls) every extension is checked against
  //    the full all-prefix-pairs constraint, so every complete path reaching
  //    b is a valid witness by construction.
  //  - On large balls per-vertex rows are too expensive, so the search keeps
  //    only the exact constraints that are free to evaluate: pairs of equal
  //    vertices (via earliest-occurrence timestamps), pairs against the two
  //    endpoints (rows of a and b), and the running completion deadline.
  //    That explores a superset of the true witness space; candidates that
  //    reach b are then verified with the full predicate before being
  //    reported.
  //
  // Either way the outcome is exact when the loop runs to completion: a
  // found witness is always verified, and "no witness" means the superset
  // was empty of them.
  DfsOutcome dfs(int esc_min, bool sup_mode, int stop_at, std::int64_t max_nodes) const {
    const bool full_pairs = ball.rows_precomputed();
    DfsOutcome out;
    std::vector<int> verts{a};
    std::vector<DistRow> rows;
    if (full_pairs) rows.push_back(row_a);
    std::vector<std::int64_t> tmax_stack{t_cap};
    std::vector<int> exc_stack{static_cast<int>(seg_dist[a])};
    std::vector<int> letter_stack{0};
    std::vector<char> stamped_stack{1};
    std::unordered_map<int, int> earliest;  // vertex -> first time on the prefix
    earliest.emplace(a, 0);
    std::vector<int> geo = shortlex_geodesic_verts(ball, a, b);
    std::vector<int> best_witness;

    auto consider_candidate = [&] {
      int e = exc_stack.back();
      if (sup_mode ? e <= out.best_excursion : e < esc_min) return;
      if (!full_pairs && verts != geo) {
        DiscretePath candidate(ball, verts, true);
        if (!is_quasi_geodesic(candidate, qg).ok) return;
      }
      out.best_excursion = e;
      best_witness = verts;
    };
    if (a == b) consider_candidate();

    while (!verts.empty()) {
      if (!sup_mode && out.best_excursion >= esc_min) break;
      if (sup_mode && stop_at >= 0 && out.best_excursion >= stop_at) break;
      int depth = static_cast<int>(verts.size()) - 1;
      int& letter = letter_stack.back();
      if (letter >= ball.alphabet_size() ||
          static_cast<std::int64_t>(depth) >= tmax_stack.back()) {
        if (stamped_stack.back()) earliest.erase(verts.back());
        verts.pop_back();
        if (full_pairs) rows.pop_back();
        tmax_stack.pop_back();
        exc_stack.pop_back();
        letter_stack.pop_back();
        stamped_stack.pop_back();
        continue;
      }
      int l = letter++;
      int head = verts.back();
      int x = ball.neighbor(head, l);
      std::int64_t j = depth + 1;
      if (x < 0) {
        if (!ball.edge_clipped(head, l)) continue;  // no such ambient edge
        // The boundary clipped an extension. The unseen vertex sits at
        // distance >= d(head,b) - 1 from the target, so its cheapest
        // completion takes j + d(head,b) - 1 steps; if even that overruns
        // the running deadline the child was infeasible anyway.
        std::int64_t head_dist = (*row_b)[head];
        std::int64_t optimistic =
            j + std::max<std::int64_t>(static_cast<std::int64_t>(head_dist) - 1, 0);
        if (head_dist == kUnreachable || optimistic <= tmax_stack.back())
          out.exhaustive = false;
        continue;
      }
      if (++out.nodes > max_nodes) {
        out.exhaustive = false;
        break;
      }
      bool stamped = false;
      {
        auto it = earliest.find(x);
        if (it != earliest.end()) {
          // exact pair constraint against the first occurrence (distance 0);
          // smaller gaps to later occurrences are implied
          if (!scaled.lower_ok(j - it->second, 0)) continue;
        } else {
          stamped = true;
        }
      }
      std::int64_t dxa = (*row_a)[x];
      std::int64_t dxb = (*row_b)[x];
      if (dxa == kUnreachable || dxb == kUnreachable) continue;
      if (!scaled.lower_ok(j, dxa)) continue;  // pair against the start
      if (full_pairs) {
        bool ok = true;
        for (std::int64_t i = 1; i <= depth; ++i) {
          std::int64_t dist = (*rows[i])[x];
          if (dist == kUnreachable || !scaled.lower_ok(j - i, dist)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
      }
      std::int64_t tmax_next = std::min(tmax_stack.back(), j + tmax_by_dist[dxb]);
      if (j + dxb > tmax_next) continue;  // cannot reach the target in time

      if (stamped) earliest.emplace(x, static_cast<int>(j));
      verts.push_back(x);
      if (full_pairs) rows.push_back(ball.dist_row(x));
      tmax_stack.push_back(tmax_next);
      exc_stack.push_back(std::max(exc_stack.back(), static_cast<int>(seg_dist[x])));
      letter_stack.push_back(0);
      stamped_stack.push_back(stamped ? 1 : 0);
      if (x == b) consider_candidate();
    }

    if (out.best_excursion >= 0 && !best_witness.empty()) out.witness = best_witness;
    return out;
  }
};

}  // namespace

WeakMorseResult weak_morse_test(const DiscretePath& gamma, const WeakMorseQuery& query,
                                const SearchBudget& budget) {
  int s = query.s;
  int t = query.t < 0 ? gamma.domain_length() : query.t;
  if (s < 0 || t > gamma.domain_length() || s > t)
    throw std::invalid_argument("bad endpoint indices");
  PairSearch search(gamma, s, t, query.qg);
  int esc_min = escape_threshold(query.mu);

  WeakMorseResult result;
  result.excursion_upper_bound = search.upper_bound;
  result.upper_bound_valid = search.region_certified;

  auto adopt_witness = [&](const std::vector<int>& verts) {
    if (!search.valid_witness(verts))
      throw std::logic_error("search produced an invalid witness");
    result.holds = false;
    result.witness = DiscretePath(search.ball, verts, true);
    result.max_excursion = std::max(result.max_excursion, Rat(search.excursion_of(verts)));
  };

  // baseline witness: the shortlex geodesic between the endpoints
  {
    auto geo = shortlex_geodesic_verts(search.ball, search.a, search.b);
    result.max_excursion = Rat(search.excursion_of(geo));
    if (search.excursion_of(geo) >= esc_min) {
      adopt_witness(geo);
      return result;
    }
  }

  if (search.region_certified && search.upper_bound <= query.mu) {
    result.holds = true;
    result.search_exhaustive = true;  // certificate: no witness can leave N_mu
    return result;
  }

  // cheap extremal constructions before the exhaustive search
  for (int z : search.extremal) {
    if (search.seg_dist[z] < esc_min) break;  // sorted by excursion
    if (auto w = search.construct_through(z)) {
      adopt_witness(*w);
      return result;
    }
  }

  auto outcome = search.dfs(esc_min, /*sup_mode=*/false, -1, budget.max_nodes);
  result.nodes_expanded = outcome.nodes;
  if (outcome.best_excursion >= esc_min) {
    adopt_witness(*outcome.witness);
    return result;
  }
  if (outcome.best_excursion >= 0)
    result.max_excursion = std::max(result.max_excursion, Rat(outcome.best_excursion));
  result.holds = true;
  result.search_exhaustive = outcome.exhaustive;
  return result;
}

ExcursionBound max_excursion_bound(const DiscretePath& gamma, int s, int t,
                                   const QGParams& qg, const SearchBudget& budget) {
  PairSearch search(gamma, s, t, qg);
  ExcursionBound bound;

  auto geo = shortlex_geodesic_verts(search.ball, search.a, search.b);
  int best = search.excursion_of(geo);
  for (int z : search.extremal) {
    if (search.seg_dist[z] <= best) break;
    if (auto w = search.construct_through(z)) best = std::max(best, search.excursion_of(*w));
  }
  bound.lower = Rat(best);
  if (search.region_certified) {
    bound.upper = search.upper_bound;
    if (bound.lower == bound.upper) {
      bound.exact = true;
      return bound;
    }
  }

  int stop_at = search.region_certified ? static_cast<int>(floor_rat(search.upper_bound)) : -1;
  auto outcome = search.dfs(/*esc_min=*/0, /*sup_mode=*/true, stop_at, budget.max_nodes);
  bound.nodes_expanded = outcome.nodes;
  if (outcome.best_excursion > best) best = outcome.best_excursion;
  bound.lower = Rat(best);
  if (outcome.exhaustive || (search.region_certified && bound.lower == search.upper_bound)) {
    bound.exact = true;
    bound.upper = bound.lower;
  } else if (!search.region_certified) {
    bound.upper = bound.lower;  // no certificate; report the realized value only
  }
  return bound;
}

MorseGaugeProfile morse_profile(const DiscretePath& gamma, const std::vector<QGParams>& grid,
                                const SearchBudget& budget) {
  MorseGaugeProfile profile;
  for (const auto& qg : grid) {
    ProfileCell cell;
    cell.qg = qg;
    cell.exact = true;
    for (int s = 0; s <= gamma.domain_length(); ++s)
      for (int t = s; t <= gamma.domain_length(); ++t) {
        auto bound = max_excursion_bound(gamma, s, t, qg, budget);
        cell.mu_star = std::max(cell.mu_star, bound.lower);
        cell.exact = cell.exact && bound.exact;
        cell.nodes_expanded += bound.nodes_expanded;
      }
    profile.cells.push_back(cell);
  }
  return profile;
}

IndexRange t_middle(const DiscretePath& gamma, int a_idx, int b_idx, const Rat& t) {
  if (a_idx > b_idx || a_idx < 0 || b_idx > gamma.domain_length())
    throw std::invalid_argument("bad index range");
  const CayleyBall& ball = gamma.ball();
  int a = gamma.vertex(a_idx), b = gamma.vertex(b_idx);
  Rat d_ab{ball.distance(a, b)};
  if (d_ab == Rat(0)) return {a_idx, a_idx};
  Rat threshold = t * d_ab;
  auto row_a = ball.dist_row(a);
  auto row_b = ball.dist_row(b);
  IndexRange best;
  int run_start = -1;
  for (int i = a_idx; i <= b_idx + 1; ++i) {
    bool in = false;
    if (i <= b_idx) {
      int v = gamma.vertex(i);
      in = Rat(std::min<int>((*row_a)[v], (*row_b)[v])) >= threshold;
    }
    if (in && run_start < 0) run_start = i;
    if (!in && run_start >= 0) {
      if (i - run_start > best.size()) best = {run_start, i - 1};
      run_start = -1;
    }
  }
  return best;
}

std::optional<int> recurrence_estimate(const DiscretePath& gamma, int a_idx, int b_idx,
                                       const MiddleSpec& spec) {
  const CayleyBall& ball = gamma.ball();
  int a = gamma.vertex(a_idx), b = gamma.vertex(b_idx);
  int d_ab = ball.distance(a, b);
  std::int64_t len_cap = floor_rat(spec.c * Rat(d_ab));
  if (!ball.region_complete(a, static_cast<int>(len_cap)))
    throw MarginError("recurrence search region escapes the ball");

  IndexRange middle = t_middle(gamma, a_idx, b_idx, spec.t);
  if (middle.empty()) return std::nullopt;
  std::vector<int> mid_verts;
  for (int i = middle.lo; i <= middle.hi; ++i) mid_verts.push_back(gamma.vertex(i));
  auto dm = multi_source_row(ball, mid_verts);

  std::vector<char> allowed(ball.vertex_count(), 0);
  for (int r = 0;; ++r) {
    if (dm[a] <= r || dm[b] <= r) return r;  // endpoints already meet N_r
    for (int v = 0; v < ball.vertex_count(); ++v) allowed[v] = dm[v] > r;
    auto bfs = punctured_bfs(ball, a, allowed);
    if (bfs.dist[b] < 0 || bfs.dist[b] > len_cap) return r;  // no avoiding path
  }
}

ConsequenceProbe consequence_lemma_probe(const DiscretePath& gamma, int D, int ell,
                                         const LinearFn& sigma, const LinearFn& chi,
                                         const LinearFn& delta) {
  const CayleyBall& ball = gamma.ball();
  ConsequenceProbe probe;
  std::int64_t span_cap = floor_rat(sigma(Rat(ell)));
  std::int64_t len_cap = floor_rat(chi(Rat(ell)));
  Rat offset = delta(Rat(D));
  std::int64_t w_off_lo = ceil_rat(offset);
  std::int64_t w_off_hi = floor_rat(Rat(ell) - offset);
  bool any_window = false;

  for (int t1 = 0; t1 + ell <= gamma.domain_length(); ++t1) {
    int lo = static_cast<int>(t1 + w_off_lo);
    int hi = static_cast<int>(t1 + w_off_hi);
    if (lo > hi) continue;
    any_window = true;
    if (!ball.region_complete(gamma.vertex(t1), static_cast<int>(len_cap)))
      throw MarginError("probe search region escapes the ball");
    std::vector<int> window;
    for (int i = lo; i <= hi && i <= gamma.domain_length(); ++i)
      window.push_back(gamma.vertex(i));
    auto dw = multi_source_row(ball, window);
    std::vector<char> allowed(ball.vertex_count());
    for (int v = 0; v < ball.vertex_count(); ++v) allowed[v] = dw[v] >= D;
    auto bfs = punctured_bfs(ball, gamma.vertex(t1), allowed);
    for (int t2 = t1 + ell; t2 <= gamma.domain_length() && t2 - t1 <= span_cap; ++t2) {
      ++probe.pairs_searched;
      int target = gamma.vertex(t2);
      if (bfs.dist[target] >= 0 && bfs.dist[target] <= len_cap) {
        probe.violating_path = DiscretePath(ball, reconstruct(bfs, target), true);
        return probe;
      }
    }
  }
  probe.degenerate_window = !any_window;
  return probe;
}

std::vector<std::uint16_t> distance_to_set(const CayleyBall& ball,
                                           const std::vector<int>& sources) {
  return multi_source_row(ball, sources);
}

std::vector<DiscretePath> enumerate_geodesics(const CayleyBall& ball, int u, int v,
                                              std::size_t limit) {
  auto row = ball.dist_row(v);
  std::vector<DiscretePath> out;
  std::vector<int> current{u};
  // DFS over strictly distance-decreasing steps
  std::vector<int> letter_stack{0};
  while (!current.empty()) {
    if (current.back() == v) {
      if (out.size() >= limit) throw BudgetError("too many geodesics");
      out.emplace_back(ball, current, true);
      current.pop_back();
      letter_stack.pop_back();
      continue;
    }
    int& letter = letter_stack.back();
    if (letter >= ball.alphabet_size()) {
      current.pop_back();
      letter_stack.pop_back();
      continue;
    }
    int l = letter++;
    int w = ball.neighbor(current.back(), l);
    if (w >= 0 && (*row)[w] + 1 == (*row)[current.back()]) {
      current.push_back(w);
      letter_stack.push_back(0);
    }
  }
  return out;
}

}  // namespace morselab
