#pragma once

#include <optional>

#include "morselab/qg.hpp"

namespace morselab {

struct WeakMorseQuery {
  QGParams qg;       // (Q, q)
  Rat mu{0};
  int s = 0;         // endpoint indices into gamma
  int t = -1;        // -1 = last index
};

enum class SearchVerdict { Holds, Fails, Unknown };

struct SearchBudget {
  std::int64_t max_nodes = 2'000'000;
};

// Decision record for one endpoint pair. `holds` is only meaningful together
// with `search_exhaustive`: fails-with-witness is sound regardless, but a
// "holds" without exhaustiveness is the three-valued unknown.
struct WeakMorseResult {
  bool holds = true;
  bool search_exhaustive = false;
  std::optional<DiscretePath> witness;  // escaping witness when !holds
  Rat max_excursion{0};                 // sup of excursion over found witnesses
  Rat excursion_upper_bound{0};         // admissible-region certificate
  bool upper_bound_valid = false;
  std::int64_t nodes_expanded = 0;

  SearchVerdict verdict() const {
    if (!holds) return SearchVerdict::Fails;
    return search_exhaustive ? SearchVerdict::Holds : SearchVerdict::Unknown;
  }
};

// Is every (Q,q)-quasi-geodesic with endpoints gamma(s), gamma(t) contained
// in N_mu(gamma|[s,t])? Exact when it can be: a region certificate settles
// "holds" outright, an extremal construction settles "fails", and otherwise
// a pruned exhaustive DFS runs under the node budget. Witnesses returned are
// re-verified against is_quasi_geodesic before being reported.
WeakMorseResult weak_morse_test(const DiscretePath& gamma, const WeakMorseQuery& query,
                                const SearchBudget& budget = {});

// Exact interval for the minimal mu over one endpoint pair.
struct ExcursionBound {
  Rat lower{0};   // excursion realized by a verified witness
  Rat upper{0};   // admissible-region bound
  bool exact = false;
  std::int64_t nodes_expanded = 0;
};

ExcursionBound max_excursion_bound(const DiscretePath& gamma, int s, int t,
                                   const QGParams& qg, const SearchBudget& budget = {});

struct ProfileCell {
  QGParams qg;
  Rat mu_star{0};
  bool exact = false;
  std::int64_t nodes_expanded = 0;
};

struct MorseGaugeProfile {
  std::vector<ProfileCell> cells;
  bool all_exact() const {
    for (const auto& c : cells)
      if (!c.exact) return false;
    return true;
  }
};

// mu_star per grid cell, maximized over all endpoint pairs of gamma.
MorseGaugeProfile morse_profile(const DiscretePath& gamma, const std::vector<QGParams>& grid,
                                const SearchBudget& budget = {});

// --- middles and recurrence --------------------------------------------------

struct MiddleSpec {
  Rat t{1, 4};  // in (0, 1/2)
  Rat c{2};     // path-length multiplier, >= 1

  MiddleSpec() = default;
  MiddleSpec(Rat t_, Rat c_) : t(t_), c(c_) {
    if (t <= Rat(0) || t >= Rat(1, 2) || c < Rat(1))
      throw std::invalid_argument("need t in (0,1/2) and c >= 1");
  }
};

struct IndexRange {
  int lo = 0, hi = -1;
  bool empty() const { return hi < lo; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
};

// Maximal contiguous index range between a_idx and b_idx whose vertices are
// at distance >= t*d(a,b) from both endpoints (true ball distances, not
// index arithmetic). d(a,b) = 0 degenerates to the singleton {a_idx}.
IndexRange t_middle(const DiscretePath& gamma, int a_idx, int b_idx, const Rat& t);

// Minimal r such that every path from a to b of length <= c*d(a,b) meets
// N_r(middle), computed exactly by the punctured-ball sweep. nullopt when
// the middle is empty (no finite r exists). Throws MarginError when the
// c*d(a,b) search region is not fully contained in the ball.
std::optional<int> recurrence_estimate(const DiscretePath& gamma, int a_idx, int b_idx,
                                       const MiddleSpec& spec);

// --- consequence-of-recurrence probe ------------------------------------------

struct LinearFn {
  Rat slope{0}, intercept{0};
  Rat operator()(const Rat& x) const { return slope * x + intercept; }
};

struct ConsequenceProbe {
  bool degenerate_window = false;      // delta(D) emptied every window
  std::optional<DiscretePath> violating_path;
  int pairs_searched = 0;
};

// Searches for a path p with endpoints gamma(t1), gamma(t2) such that
//   (1) ell <= t2 - t1 <= sigma(ell)
//   (2) len(p) <= chi(ell)
//   (3) d(p, gamma|[t1+delta(D), t1+ell-delta(D)]) >= D,
// via punctured BFS between all admissible endpoint pairs.
ConsequenceProbe consequence_lemma_probe(const DiscretePath& gamma, int D, int ell,
                                         const LinearFn& sigma, const LinearFn& chi,
                                         const LinearFn& delta);

// All geodesics between two vertices (DFS over distance-descending steps);
// exact, intended for small desk-scale instances and cross-checks.
std::vector<DiscretePath> enumerate_geodesics(const CayleyBall& ball, int u, int v,
                                              std::size_t limit = 100000);

// Distance to a vertex set (single multi-source BFS over the ball graph).
std::vector<std::uint16_t> distance_to_set(const CayleyBall& ball,
                                           const std::vector<int>& sources);

}  // namespace morselab
