#pragma once

#include <optional>

#include "morselab/path.hpp"
#include "morselab/rational.hpp"

namespace morselab {

struct QGParams {
  Rat lambda{1};
  Rat kappa{0};

  QGParams() = default;
  QGParams(Rat l, Rat k) : lambda(l), kappa(k) {
    if (lambda < Rat(1) || kappa < Rat(0)) throw std::invalid_argument("need lambda >= 1, kappa >= 0");
  }
};

// Integer form of the two quasi-geodesic inequalities for unit-speed paths.
// With lambda = ln/ld and kappa = kn/kd:
//   lower: (j-i)/lambda - kappa <= d  <=>  (j-i)*ld*kd <= ln*kd*d + ln*kn
//   upper: d <= lambda*(j-i)+kappa    <=>  d*ld*kd <= ln*kd*(j-i) + kn*ld
struct ScaledQG {
  std::int64_t a, b, c_low, c_up;

  explicit ScaledQG(const QGParams& p) {
    std::int64_t ln = p.lambda.numerator(), ld = p.lambda.denominator();
    std::int64_t kn = p.kappa.numerator(), kd = p.kappa.denominator();
    a = ld * kd;
    b = ln * kd;
    c_low = ln * kn;
    c_up = kn * ld;
  }
  bool lower_ok(std::int64_t gap, std::int64_t dist) const {
    return gap * a <= b * dist + c_low;
  }
  bool upper_ok(std::int64_t gap, std::int64_t dist) const {
    return dist * a <= b * gap + c_up;
  }
};

struct QGCheck {
  bool ok = true;
  int violating_i = -1;  // lexicographically first violating pair when !ok
  int violating_j = -1;
};

// Checks all index pairs. The upper inequality cannot fail for unit-speed
// paths but is checked anyway.
QGCheck is_quasi_geodesic(const DiscretePath& path, const QGParams& params);

// Largest L such that every subpath of domain length <= L passes; equals the
// domain length when the path is globally a quasi-geodesic.
int local_qg_scale(const DiscretePath& path, const QGParams& params);

struct ImprovementConstants {
  Rat kappa_prime, k1, k2;
};

// kappa' = 2(lambda+kappa), k1 = lambda(lambda+kappa),
// k2 = (lambda*kappa' + 3)(lambda+kappa)
ImprovementConstants improvement_constants(const QGParams& params);

// Every subpath's length bounded by k1 * (endpoint distance) + k2.
bool is_tame(const DiscretePath& path, const ImprovementConstants& constants);

// mu' = (1 + 2 lambda^2) mu + lambda kappa + kappa
Rat reverse_inclusion_bound(const QGParams& params, const Rat& mu);

// lambda' = max((lambda+1)/(1-2 theta), 2 lambda + 1); requires 0 <= theta < 1/2
Rat concat_lambda(const QGParams& params, const Rat& theta);

struct HausdorffResult {
  Rat one_sided_ab;  // sup over a of d(a, B)
  Rat one_sided_ba;
  Rat symmetric;
};

HausdorffResult hausdorff(const DiscretePath& a, const DiscretePath& b);

// --- empirical global fitting -----------------------------------------------

struct FitBudget {
  Rat lambda_max{3};
  std::int64_t kappa_max = 6;
};

struct GlobalFit {
  Rat lambda, kappa;
};

struct FitResult {
  std::optional<GlobalFit> fit;
  // smallest additive constant that would work at lambda_max; meaningful
  // when no fit exists within budget
  Rat required_kappa_at_lambda_max{0};
  bool closed = false;
};

// Smallest kappa in {0..kappa_max}, then the exact minimal lambda for it;
// no fit when that lambda exceeds lambda_max for every kappa. Kappa-first
// ordering keeps geodesics at (1,0) and pins additive slack only when the
// multiplicative route is exhausted.
FitResult fit_global_params(const DiscretePath& path, const FitBudget& budget = {});

struct LocalNearQGReport {
  bool preconditions_ok = false;
  std::string precondition_failure;     // empty when ok
  Rat containment_radius{0};            // one-sided distance path -> gamma
  int actual_scale = 0;                 // local_qg_scale of path under local_params
  FitResult global;
};

// Empirical probe for the local-QG-near-a-QG scale question: verifies the
// hypotheses (containment in N_r(gamma), locality at `scale`) and reports
// the fitted global constants, if any.
LocalNearQGReport check_local_qg_near_qg(const DiscretePath& path, const DiscretePath& gamma,
                                         const Rat& r, const QGParams& local_params,
                                         int scale, const FitBudget& budget = {});

}  // namespace morselab
