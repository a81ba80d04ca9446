#include "morselab/qg.hpp"

#include <algorithm>

namespace morselab {

namespace {

// Pins one distance row per path vertex and enforces metric soundness for
// every pair the caller is about to query.
std::vector<DistRow> pin_rows(const DiscretePath& path) {
  const CayleyBall& ball = path.ball();
  if (!ball.exact_metric()) {
    for (int i = 0; i <= path.domain_length(); ++i)
      for (int j = i + 1; j <= path.domain_length(); ++j)
        if (!ball.pair_metric_sound(path.vertex(i), path.vertex(j)))
          throw MarginError("path pair (" + std::to_string(i) + "," + std::to_string(j) +
                            ") escapes the validity margin");
  }
  std::vector<DistRow> rows;
  rows.reserve(path.domain_length() + 1);
  for (int i = 0; i <= path.domain_length(); ++i)
    rows.push_back(ball.dist_row(path.vertex(i)));
  return rows;
}

}  // namespace

QGCheck is_quasi_geodesic(const DiscretePath& path, const QGParams& params) {
  auto rows = pin_rows(path);
  ScaledQG s(params);
  int n = path.domain_length();
  for (int i = 0; i < n; ++i) {
    const auto& row = *rows[i];
    for (int j = i + 1; j <= n; ++j) {
      std::int64_t dist = row[path.vertex(j)];
      std::int64_t gap = j - i;
      if (!s.lower_ok(gap, dist) || !s.upper_ok(gap, dist)) return {false, i, j};
    }
  }
  return {};
}

int local_qg_scale(const DiscretePath& path, const QGParams& params) {
  auto rows = pin_rows(path);
  ScaledQG s(params);
  int n = path.domain_length();
  int best = n;
  for (int i = 0; i < n; ++i) {
    const auto& row = *rows[i];
    for (int j = i + 1; j <= i + best && j <= n; ++j) {
      std::int64_t dist = row[path.vertex(j)];
      std::int64_t gap = j - i;
      if (!s.lower_ok(gap, dist) || !s.upper_ok(gap, dist)) {
        best = static_cast<int>(gap) - 1;
        break;
      }
    }
  }
  return best;
}

ImprovementConstants improvement_constants(const QGParams& p) {
  Rat sum = p.lambda + p.kappa;
  Rat kappa_prime = Rat(2) * sum;
  return {kappa_prime, p.lambda * sum, (p.lambda * kappa_prime + Rat(3)) * sum};
}

bool is_tame(const DiscretePath& path, const ImprovementConstants& c) {
  auto rows = pin_rows(path);
  int n = path.domain_length();
  for (int i = 0; i < n; ++i) {
    const auto& row = *rows[i];
    for (int j = i + 1; j <= n; ++j) {
      std::int64_t dist = row[path.vertex(j)];
      if (Rat(j - i) > c.k1 * Rat(dist) + c.k2) return false;
    }
  }
  return true;
}

Rat reverse_inclusion_bound(const QGParams& p, const Rat& mu) {
  return (Rat(1) + Rat(2) * p.lambda * p.lambda) * mu + p.lambda * p.kappa + p.kappa;
}

Rat concat_lambda(const QGParams& p, const Rat& theta) {
  if (theta < Rat(0) || theta >= Rat(1, 2))
    throw std::invalid_argument("theta must lie in [0, 1/2)");
  Rat branch = (p.lambda + Rat(1)) / (Rat(1) - Rat(2) * theta);
  Rat other = Rat(2) * p.lambda + Rat(1);
  return std::max(branch, other);
}

HausdorffResult hausdorff(const DiscretePath& a, const DiscretePath& b) {
  auto one_sided = [](const DiscretePath& from, const DiscretePath& to) -> Rat {
    std::int64_t worst = 0;
    for (int i = 0; i <= from.domain_length(); ++i) {
      auto row = from.ball().dist_row(from.vertex(i));
      std::int64_t best = kUnreachable;
      for (int j = 0; j <= to.domain_length(); ++j)
        best = std::min<std::int64_t>(best, (*row)[to.vertex(j)]);
      worst = std::max(worst, best);
    }
    return Rat(worst);
  };
  HausdorffResult r;
  r.one_sided_ab = one_sided(a, b);
  r.one_sided_ba = one_sided(b, a);
  r.symmetric = std::max(r.one_sided_ab, r.one_sided_ba);
  return r;
}

FitResult fit_global_params(const DiscretePath& path, const FitBudget& budget) {
  auto rows = pin_rows(path);
  int n = path.domain_length();
  FitResult result;
  result.closed = path.closed();

  // max_gap[d] = largest index gap realized at distance d
  std::vector<std::int64_t> max_gap(static_cast<size_t>(n) + 1, -1);
  for (int i = 0; i < n; ++i) {
    const auto& row = *rows[i];
    for (int j = i + 1; j <= n; ++j) {
      std::int64_t dist = row[path.vertex(j)];
      max_gap[dist] = std::max(max_gap[dist], static_cast<std::int64_t>(j - i));
    }
  }

  for (std::int64_t kappa = 0; kappa <= budget.kappa_max; ++kappa) {
    Rat lambda_min{1};
    bool feasible = true;
    for (std::int64_t d = 0; d <= n; ++d) {
      if (max_gap[d] < 0) continue;
      if (d + kappa == 0) {
        feasible = false;  // coincident vertices, no additive slack
        break;
      }
      lambda_min = std::max(lambda_min, Rat(max_gap[d], d + kappa));
    }
    if (feasible && lambda_min <= budget.lambda_max) {
      result.fit = GlobalFit{lambda_min, Rat(kappa)};
      return result;
    }
  }

  Rat required{0};
  for (std::int64_t d = 0; d <= n; ++d) {
    if (max_gap[d] < 0) continue;
    required = std::max(required, Rat(max_gap[d]) / budget.lambda_max - Rat(d));
  }
  result.required_kappa_at_lambda_max = required;
  return result;
}

LocalNearQGReport check_local_qg_near_qg(const DiscretePath& path, const DiscretePath& gamma,
                                         const Rat& r, const QGParams& local_params,
                                         int scale, const FitBudget& budget) {
  LocalNearQGReport report;
  auto h = hausdorff(path, gamma);
  report.containment_radius = h.one_sided_ab;
  if (h.one_sided_ab > r) {
    report.precondition_failure = "path not contained in the r-neighbourhood of gamma";
    return report;
  }
  report.actual_scale = local_qg_scale(path, local_params);
  if (report.actual_scale < scale) {
    report.precondition_failure = "path is not a local quasi-geodesic at the stated scale";
    return report;
  }
  report.preconditions_ok = true;
  report.global = fit_global_params(path, budget);
  return report;
}

}  // namespace morselab
