#pragma once

#include <unordered_set>

#include "morselab/combing.hpp"
#include "morselab/morse.hpp"

namespace morselab {

// The enumerable core of the sliding-window pipeline: every origin-based
// word of domain length <= scale that is a local_params quasi-geodesic and
// passes the weak-Morse test at (weak_qg, mu) for its own endpoints.
struct SegmentCatalog {
  int scale = 0;  // D
  QGParams local_params;
  QGParams weak_qg;
  Rat mu{0};
  int margin_used = 0;
  bool exhaustive = true;
  std::uint64_t ball_hash = 0;
  std::vector<std::string> words;  // sorted; "" is the constant word
  std::unordered_set<std::string> lookup;

  bool contains(const std::string& word) const { return lookup.count(word) > 0; }
};

SegmentCatalog build_catalog(const CayleyBall& ball, int scale, const QGParams& local_params,
                             const QGParams& weak_qg, const Rat& mu,
                             const SearchBudget& budget = {});

// Versioned text form; sorted word list, bit-exact across runs.
std::string catalog_to_text(const SegmentCatalog& catalog);
SegmentCatalog catalog_from_text(const CayleyBall& ball, const std::string& text);

enum class WindowVerdict { InCatalog, NotInCatalog, MarginRefused };
enum class CertifyOutcome { Certified, NotCertified, Conditional };

struct Certificate {
  CertifyOutcome outcome = CertifyOutcome::Conditional;
  std::vector<std::pair<int, WindowVerdict>> windows;  // (offset, verdict)
  FitResult fitted;
  std::optional<Rat> hausdorff_to_combing;
};

// Slides a domain-length-`scale` window over the path at stride 1, translates
// each window to the origin (letter words; needs a transitive ball) and looks
// it up. Certified only on full in-catalog coverage with an exhaustive
// catalog; margin refusals downgrade to Conditional, a definite miss is
// NotCertified.
Certificate certify_path(const SegmentCatalog& catalog, const DiscretePath& path,
                         const Combing* combing = nullptr,
                         const FitBudget& fit_budget = {});

// Spec-named alias of the kappa-first global fit.
inline FitResult empirical_global_params(const DiscretePath& path,
                                         const FitBudget& budget = {}) {
  return fit_global_params(path, budget);
}

// --- exit points --------------------------------------------------------------

struct ExitPointRecord {
  int t = -1;    // index on eta
  int t_e = -1;  // exit moment on gamma
  int D = 0, ell = 0;
  bool minimal = true;
  bool tied = false;  // another t shares the minimal exit moment
};

// Minimal (D,ell)-exit point of (eta, gamma): a pair (t, t_e) with
// d(eta(t), gamma(t_e)) <= D and d(eta|[t,end], gamma|[0, t_e+ell]) >= D,
// minimizing t_e then t. Requires a common start vertex.
std::optional<ExitPointRecord> exit_point(const DiscretePath& eta, const DiscretePath& gamma,
                                          int D, int ell);

struct ExitLemmaReport {
  bool minimal_exit_ok = true;  // for every s <= t_e some s' in [s,s+ell] is D-close to eta
  int first_bad_s = -1;
  Rat hausdorff{0};  // d_Haus(gamma|[0,t_e], eta|[0,t])
};

ExitLemmaReport check_exit_lemmas(const DiscretePath& eta, const DiscretePath& gamma,
                                  const ExitPointRecord& record);

// --- quasi-geodesics stay -------------------------------------------------------

struct StayMatches {
  int t1 = 0, s1 = 0;  // indices on gamma1
  int t2 = 0, s2 = 0;  // indices on gamma2
};

struct StayReport {
  bool hypotheses_ok = true;
  std::string hypothesis_failure;
  int delta_hat = 0;    // minimal window half-width making the conclusion hold
  Rat delta_bound{0};   // documented conservative delta(D)
  bool within_bound = false;
};

// Verifies the hypotheses exactly (both paths (lambda,kappa)-QGs, gamma2 in
// N_D(gamma1), matched points D-close), sweeps the minimal half-width
// delta_hat such that d(gamma2|[t2,s2], gamma1(t)) > D outside
// [t1-delta_hat, s1+delta_hat], and compares it against the conservative
//   delta(D) = lambda*(eps(D) + 2D) + kappa,
//   eps(D)   = lambda*(2D + lambda*(2*lambda*D + kappa) + kappa) + kappa,
// assembled from the triangle-inequality chain: the far match k1 on gamma1
// sits within 2D of t1's match, so k1 - t0 <= 2*lambda*D + kappa; pushing
// that through gamma2's lower bound gives eps, and one more application of
// gamma1's lower bound gives delta.
StayReport qg_stay_check(const DiscretePath& gamma1, const DiscretePath& gamma2,
                         const StayMatches& matches, int D, const QGParams& params);

// One-sided Hausdorff distance from the path to the combing line between its
// endpoints.
Rat combing_line_proximity(const Combing& combing, const DiscretePath& path);

// Least-squares slope (clamped nonnegative) with the intercept raised until
// the line dominates every sample; exact rational arithmetic.
struct EnvelopeFit {
  Rat slope{0}, intercept{0};
  Rat operator()(const Rat& x) const { return slope * x + intercept; }
};

EnvelopeFit fit_linear_envelope(const std::vector<std::pair<Rat, Rat>>& points);

}  // namespace morselab
