#include "morselab/localglobal.hpp"

#include <algorithm>

#include "morselab/strings.hpp"

namespace morselab {

namespace {

std::string word_string(const CayleyBall& ball, const std::vector<int>& letters) {
  if (letters.empty()) return "e";
  std::vector<std::string> parts;
  parts.reserve(letters.size());
  for (int l : letters) parts.push_back(ball.letters()[l].name);
  return join(parts, " ");
}

}  // namespace

SegmentCatalog build_catalog(const CayleyBall& ball, int scale, const QGParams& local_params,
                             const QGParams& weak_qg, const Rat& mu,
                             const SearchBudget& budget) {
  if (scale > ball.radius())
    throw MarginError("catalog scale exceeds the ball radius");
  SegmentCatalog catalog;
  catalog.scale = scale;
  catalog.local_params = local_params;
  catalog.weak_qg = weak_qg;
  catalog.mu = mu;
  catalog.margin_used = ball.validity_margin();
  catalog.ball_hash = ball.content_hash();

  ScaledQG scaled(local_params);
  std::vector<std::pair<int, std::vector<int>>> entries;  // (length, letters)

  // DFS over letter words from the origin; QG-ness is prefix-closed, so
  // pruning on the incremental pair check is sound.
  std::vector<int> word;
  std::vector<int> verts{ball.origin()};
  std::vector<DistRow> rows{ball.dist_row(ball.origin())};
  std::vector<int> cursor{0};

  auto test_current = [&] {
    DiscretePath path(ball, verts, true);
    WeakMorseQuery query{weak_qg, mu, 0, path.domain_length()};
    auto result = weak_morse_test(path, query, budget);
    switch (result.verdict()) {
      case SearchVerdict::Holds:
        entries.push_back({static_cast<int>(word.size()), word});
        break;
      case SearchVerdict::Unknown:
        catalog.exhaustive = false;
        break;
      case SearchVerdict::Fails:
        break;
    }
  };
  test_current();

  while (!verts.empty()) {
    if (static_cast<int>(word.size()) == scale || cursor.back() >= ball.alphabet_size()) {
      verts.pop_back();
      rows.pop_back();
      cursor.pop_back();
      if (!word.empty()) word.pop_back();
      continue;
    }
    int l = cursor.back()++;
    int x = ball.neighbor(verts.back(), l);
    if (x < 0) continue;
    std::int64_t j = static_cast<std::int64_t>(word.size()) + 1;
    bool ok = true;
    for (std::int64_t i = 0; i < j; ++i) {
      std::int64_t dist = (*rows[i])[x];
      if (!scaled.lower_ok(j - i, dist) || !scaled.upper_ok(j - i, dist)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    word.push_back(l);
    verts.push_back(x);
    rows.push_back(ball.dist_row(x));
    cursor.push_back(0);
    test_current();
  }

  std::sort(entries.begin(), entries.end());
  for (auto& [len, letters] : entries) {
    catalog.words.push_back(word_string(ball, letters));
    catalog.lookup.insert(catalog.words.back());
  }
  return catalog;
}

std::string catalog_to_text(const SegmentCatalog& catalog) {
  std::string out = "catalog/v1\n";
  out += "D=" + std::to_string(catalog.scale) + "\n";
  out += "local=" + to_string(catalog.local_params.lambda) + "," +
         to_string(catalog.local_params.kappa) + "\n";
  out += "weak=" + to_string(catalog.weak_qg.lambda) + "," +
         to_string(catalog.weak_qg.kappa) + "\n";
  out += "mu=" + to_string(catalog.mu) + "\n";
  out += "margin=" + std::to_string(catalog.margin_used) + "\n";
  out += "exhaustive=" + std::string(catalog.exhaustive ? "1" : "0") + "\n";
  out += "ball=" + std::to_string(catalog.ball_hash) + "\n";
  out += "words=" + std::to_string(catalog.words.size()) + "\n";
  for (const auto& w : catalog.words) out += w + "\n";
  return out;
}

SegmentCatalog catalog_from_text(const CayleyBall& ball, const std::string& text) {
  auto lines = split(text, '\n');
  if (lines.empty() || trim(lines[0]) != "catalog/v1")
    throw SpecError("unsupported catalog format");
  SegmentCatalog catalog;
  size_t i = 1;
  size_t expected_words = 0;
  for (; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError("bad catalog header line '" + line + "'");
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "D") catalog.scale = std::stoi(val);
    else if (key == "local" || key == "weak") {
      auto parts = split_clean(val, ',');
      QGParams p(parse_rat_or_throw(parts.at(0)), parse_rat_or_throw(parts.at(1)));
      (key == "local" ? catalog.local_params : catalog.weak_qg) = p;
    } else if (key == "mu") catalog.mu = parse_rat_or_throw(val);
    else if (key == "margin") catalog.margin_used = std::stoi(val);
    else if (key == "exhaustive") catalog.exhaustive = val == "1";
    else if (key == "ball") catalog.ball_hash = std::stoull(val);
    else if (key == "words") {
      expected_words = std::stoull(val);
      ++i;
      break;
    } else throw SpecError("unknown catalog key '" + key + "'");
  }
  for (; i < lines.size(); ++i) {
    if (i + 1 == lines.size() && trim(lines[i]).empty()) continue;
    catalog.words.push_back(lines[i]);
    catalog.lookup.insert(lines[i]);
  }
  if (catalog.words.size() != expected_words)
    throw SpecError("catalog word count mismatch");
  if (catalog.ball_hash != ball.content_hash())
    throw SpecError("catalog was built from a different ball");
  return catalog;
}

Certificate certify_path(const SegmentCatalog& catalog, const DiscretePath& path,
                         const Combing* combing, const FitBudget& fit_budget) {
  const CayleyBall& ball = path.ball();
  Certificate cert;
  int n = path.domain_length();
  int D = catalog.scale;
  auto letters = path.letter_seq();

  int last_offset = std::max(0, n - D);
  bool any_refused = false, any_missing = false;
  for (int i = 0; i <= last_offset; ++i) {
    int hi = std::min(i + D, n);
    WindowVerdict verdict;
    if (!ball.transitive()) {
      verdict = WindowVerdict::MarginRefused;
    } else {
      bool has_stay = false;
      std::vector<int> window(letters.begin() + i, letters.begin() + hi);
      for (int l : window) has_stay |= l < 0;
      if (has_stay) {
        verdict = WindowVerdict::MarginRefused;
      } else {
        verdict = catalog.contains(word_string(ball, window)) ? WindowVerdict::InCatalog
                                                              : WindowVerdict::NotInCatalog;
      }
    }
    any_refused |= verdict == WindowVerdict::MarginRefused;
    any_missing |= verdict == WindowVerdict::NotInCatalog;
    cert.windows.push_back({i, verdict});
  }

  if (any_missing)
    cert.outcome = CertifyOutcome::NotCertified;
  else if (any_refused || !catalog.exhaustive)
    cert.outcome = CertifyOutcome::Conditional;
  else
    cert.outcome = CertifyOutcome::Certified;

  cert.fitted = fit_global_params(path, fit_budget);
  if (combing) cert.hausdorff_to_combing = combing_line_proximity(*combing, path);
  return cert;
}

std::optional<ExitPointRecord> exit_point(const DiscretePath& eta, const DiscretePath& gamma,
                                          int D, int ell) {
  if (eta.start() != gamma.start())
    throw std::invalid_argument("exit points need a common start vertex");
  const CayleyBall& ball = eta.ball();
  int tn = eta.domain_length(), gn = gamma.domain_length();

  // cross-distance matrix and its suffix(t) x prefix(s) minima
  std::vector<std::vector<int>> m(tn + 1, std::vector<int>(gn + 1));
  for (int t = 0; t <= tn; ++t) {
    auto row = ball.dist_row(eta.vertex(t));
    for (int s = 0; s <= gn; ++s) m[t][s] = (*row)[gamma.vertex(s)];
  }
  std::vector<std::vector<int>> suffix_prefix_min(tn + 2,
                                                  std::vector<int>(gn + 1, 1 << 20));
  for (int t = tn; t >= 0; --t)
    for (int s = 0; s <= gn; ++s) {
      int best = m[t][s];
      best = std::min(best, suffix_prefix_min[t + 1][s]);
      if (s > 0) best = std::min(best, suffix_prefix_min[t][s - 1]);
      suffix_prefix_min[t][s] = best;
    }

  for (int te = 0; te <= gn; ++te) {
    int found_t = -1;
    bool tied = false;
    for (int t = 0; t <= tn; ++t) {
      if (m[t][te] > D) continue;
      if (suffix_prefix_min[t][std::min(te + ell, gn)] < D) continue;
      if (found_t < 0)
        found_t = t;
      else
        tied = true;
    }
    if (found_t >= 0) {
      ExitPointRecord rec;
      rec.t = found_t;
      rec.t_e = te;
      rec.D = D;
      rec.ell = ell;
      rec.minimal = true;
      rec.tied = tied;
      return rec;
    }
  }
  return std::nullopt;
}

ExitLemmaReport check_exit_lemmas(const DiscretePath& eta, const DiscretePath& gamma,
                                  const ExitPointRecord& record) {
  const CayleyBall& ball = eta.ball();
  ExitLemmaReport report;
  auto d_eta = distance_to_set(ball, eta.vertices());
  for (int s = 0; s <= record.t_e; ++s) {
    bool close = false;
    for (int s2 = s; s2 <= std::min(s + record.ell, gamma.domain_length()); ++s2)
      if (d_eta[gamma.vertex(s2)] <= record.D) {
        close = true;
        break;
      }
    if (!close) {
      report.minimal_exit_ok = false;
      report.first_bad_s = s;
      break;
    }
  }
  report.hausdorff =
      hausdorff(gamma.subpath(0, record.t_e), eta.subpath(0, record.t)).symmetric;
  return report;
}

StayReport qg_stay_check(const DiscretePath& gamma1, const DiscretePath& gamma2,
                         const StayMatches& matches, int D, const QGParams& params) {
  const CayleyBall& ball = gamma1.ball();
  StayReport report;
  auto fail = [&](const std::string& why) {
    report.hypotheses_ok = false;
    report.hypothesis_failure = why;
    return report;
  };
  if (matches.t1 < 0 || matches.t1 > matches.s1 || matches.s1 > gamma1.domain_length() ||
      matches.t2 < 0 || matches.t2 > matches.s2 || matches.s2 > gamma2.domain_length())
    return fail("match indices out of order");
  if (!is_quasi_geodesic(gamma1, params).ok || !is_quasi_geodesic(gamma2, params).ok)
    return fail("paths are not (lambda,kappa)-quasi-geodesics");
  if (hausdorff(gamma2, gamma1).one_sided_ab > Rat(D))
    return fail("gamma2 is not contained in N_D(gamma1)");
  if (ball.distance(gamma1.vertex(matches.t1), gamma2.vertex(matches.t2)) > D ||
      ball.distance(gamma1.vertex(matches.s1), gamma2.vertex(matches.s2)) > D)
    return fail("matched points are not D-close");

  std::vector<int> mid;
  for (int i = matches.t2; i <= matches.s2; ++i) mid.push_back(gamma2.vertex(i));
  auto d_mid = distance_to_set(ball, mid);
  int delta_hat = 0;
  for (int t = 0; t <= gamma1.domain_length(); ++t) {
    if (d_mid[gamma1.vertex(t)] > D) continue;
    if (t < matches.t1) delta_hat = std::max(delta_hat, matches.t1 - t);
    if (t > matches.s1) delta_hat = std::max(delta_hat, t - matches.s1);
  }
  report.delta_hat = delta_hat;
  Rat dd{D};
  Rat eps = params.lambda * (Rat(2) * dd + params.lambda * (Rat(2) * params.lambda * dd +
                                                            params.kappa) +
                             params.kappa) +
            params.kappa;
  report.delta_bound = params.lambda * (eps + Rat(2) * dd) + params.kappa;
  report.within_bound = Rat(delta_hat) <= report.delta_bound;
  return report;
}

Rat combing_line_proximity(const Combing& combing, const DiscretePath& path) {
  DiscretePath line = combing.line(path.start(), path.end());
  return hausdorff(path, line).one_sided_ab;
}

EnvelopeFit fit_linear_envelope(const std::vector<std::pair<Rat, Rat>>& points) {
  EnvelopeFit fit;
  if (points.empty()) return fit;
  Rat n{static_cast<std::int64_t>(points.size())};
  Rat sx{0}, sy{0}, sxy{0}, sxx{0};
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
  }
  Rat denom = n * sxx - sx * sx;
  if (denom != Rat(0)) fit.slope = (n * sxy - sx * sy) / denom;
  if (fit.slope < Rat(0)) fit.slope = Rat(0);
  bool first = true;
  for (const auto& [x, y] : points) {
    Rat needed = y - fit.slope * x;
    if (first || needed > fit.intercept) fit.intercept = needed;
    first = false;
  }
  return fit;
}

}  // namespace morselab
