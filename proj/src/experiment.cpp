#include "morselab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "morselab/strings.hpp"

namespace morselab {

namespace {

using nlohmann::json;

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  int workers = std::min(threads, n);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

QGParams parse_params(const std::string& text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw ConfigError("expected (lambda,kappa), got '" + text + "'");
  auto parts = split_clean(t.substr(1, t.size() - 2), ',');
  if (parts.size() != 2) throw ConfigError("expected (lambda,kappa), got '" + text + "'");
  try {
    return QGParams(parse_rat_or_throw(parts[0]), parse_rat_or_throw(parts[1]));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const std::vector<QGParams>& param_rotation() {
  static std::vector<QGParams> rotation{
      QGParams(Rat(1), Rat(0)), QGParams(Rat(2), Rat(0)), QGParams(Rat(2), Rat(1)),
      QGParams(Rat(3), Rat(2))};
  return rotation;
}

int pick_vertex(const std::vector<int>& candidates, CounterRng& rng) {
  return candidates[rng.below(candidates.size())];
}

std::string literal_or_e(const DiscretePath& p) {
  std::string s = p.to_literal();
  return s.empty() ? "e" : s;
}

// one row of the tidy plot CSV
json plot_row(const std::string& fixture, std::int64_t n, const std::string& quantity,
              const std::string& value) {
  return json{{"fixture", fixture}, {"n", n}, {"quantity", quantity}, {"value", value}};
}

struct TrialSlot {
  bool completed = false;
  std::string violation;               // empty = fine
  std::vector<std::pair<Rat, Rat>> points;  // suite-specific samples
  json item;
};

SuiteResult assemble(const std::string& name, int trials, std::vector<TrialSlot>& slots) {
  SuiteResult out;
  out.name = name;
  out.requested = trials;
  for (auto& slot : slots) {
    if (slot.completed) ++out.completed;
    if (!slot.violation.empty()) out.violations.push_back(slot.violation);
  }
  return out;
}

}  // namespace

// --- config ------------------------------------------------------------------

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw_text = text;
  bool have_kind = false;
  for (const auto& raw : split(text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("bad config line '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "kind") {
        cfg.kind = val;
        have_kind = true;
      } else if (key == "group") {
        cfg.group = parse_group_inline(val);
      } else if (key == "group_file") {
        std::ifstream in(val);
        if (!in) throw ConfigError("cannot open group file '" + val + "'");
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        cfg.group = parse_group_file_text(content);
      } else if (key == "radius") {
        cfg.radius = std::stoi(val);
      } else if (key == "seed") {
        cfg.seed = std::stoull(val);
      } else if (key == "threads") {
        cfg.threads = std::stoi(val);
      } else if (key == "budget") {
        cfg.budget_nodes = std::stoll(val);
      } else if (key == "out") {
        cfg.out_dir = val;
      } else if (key == "path") {
        cfg.path_literal = val;
      } else if (key == "grid") {
        cfg.grid.clear();
        for (const auto& part : split_top_level(val, ';')) cfg.grid.push_back(parse_params(part));
      } else if (key == "lengths") {
        cfg.lengths.clear();
        for (const auto& part : split_clean(val, ',')) cfg.lengths.push_back(std::stoi(part));
      } else if (key == "t") {
        cfg.t_values.clear();
        for (const auto& part : split_clean(val, ','))
          cfg.t_values.push_back(parse_rat_or_throw(part));
      } else if (key == "c") {
        cfg.c_values.clear();
        for (const auto& part : split_clean(val, ','))
          cfg.c_values.push_back(parse_rat_or_throw(part));
      } else if (key == "D") {
        cfg.scale = std::stoi(val);
      } else if (key == "exit_d") {
        cfg.exit_d = std::stoi(val);
      } else if (key == "ell") {
        cfg.ell = std::stoi(val);
      } else if (key == "local") {
        cfg.local_params = parse_params(val);
      } else if (key == "weak") {
        cfg.weak_qg = parse_params(val);
      } else if (key == "mu") {
        cfg.mu = parse_rat_or_throw(val);
      } else if (key == "trials") {
        cfg.trials = std::stoi(val);
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    } catch (const SpecError& e) {
      throw ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
  if (!have_kind) throw ConfigError("config needs a kind=");
  if (cfg.budget_nodes <= 0 || cfg.trials <= 0 || cfg.threads < 1 || cfg.radius < 0)
    throw ConfigError("budgets, trials and threads must be positive");
  static const std::vector<std::string> kinds{"profile",     "catalog",  "certify",
                                              "middle",      "exitpoints", "counterexample",
                                              "lemma-suite"};
  if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
    throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
  return cfg;
}

// --- suites -------------------------------------------------------------------

SuiteResult reverse_inclusion_suite(const CayleyBall& tree, const CayleyBall& grid,
                                    int trials, std::uint64_t seed, int threads) {
  std::vector<TrialSlot> slots(trials);
  parallel_for(trials, threads, [&](int idx) {
    CounterRng rng(seed, static_cast<std::uint64_t>(idx));
    const CayleyBall& ball = (idx % 2 == 0) ? tree : grid;
    const QGParams& params = param_rotation()[(idx / 2) % param_rotation().size()];
    TrialSlot& slot = slots[idx];
    for (int attempt = 0; attempt < 12 && !slot.completed; ++attempt) {
      SamplerConfig base_cfg;
      base_cfg.params = params;
      base_cfg.target_length = std::min(4 + static_cast<int>(rng.below(5)), ball.radius() - 1);
      auto gamma2 = sample_qg_path(ball, ball.origin(), base_cfg, rng);
      if (!gamma2) continue;
      int mu_int = 1 + static_cast<int>(rng.below(3));
      auto near = distance_to_set(ball, gamma2->vertices());
      auto start_row = ball.dist_row(gamma2->start());
      std::vector<int> starts;
      for (int v = 0; v < ball.vertex_count(); ++v)
        if (near[v] <= mu_int && (*start_row)[v] <= mu_int) starts.push_back(v);
      if (starts.empty()) continue;
      SamplerConfig cfg;
      cfg.params = params;
      cfg.near_set = &near;
      cfg.near_radius = mu_int;
      cfg.end_near = gamma2->end();
      cfg.end_tolerance = mu_int;
      int start1 = pick_vertex(starts, rng);
      cfg.target_length = std::min(3 + static_cast<int>(rng.below(6)),
                                   ball.radius() - ball.dist_to_origin(start1));
      if (cfg.target_length < 1) continue;
      auto gamma1 = sample_qg_path(ball, start1, cfg, rng);
      if (!gamma1) continue;

      // hypotheses, re-verified exactly
      Rat mu{mu_int};
      if (!is_quasi_geodesic(*gamma1, params).ok || !is_quasi_geodesic(*gamma2, params).ok)
        continue;
      if (hausdorff(*gamma1, *gamma2).one_sided_ab > mu) continue;
      if (Rat(ball.distance(gamma1->start(), gamma2->start())) > mu) continue;
      if (Rat(ball.distance(gamma1->end(), gamma2->end())) > mu) continue;

      slot.completed = true;
      Rat mu_prime = reverse_inclusion_bound(params, mu);
      Rat back = hausdorff(*gamma2, *gamma1).one_sided_ab;
      if (back > mu_prime) {
        json v;
        v["params"] = {{"lambda", to_string(params.lambda)}, {"kappa", to_string(params.kappa)}};
        v["mu"] = to_string(mu);
        v["mu_prime"] = to_string(mu_prime);
        v["observed"] = to_string(back);
        v["witness_paths"] = {literal_or_e(*gamma1), literal_or_e(*gamma2)};
        v["violating_pair"] = {idx, attempt};
        slot.violation = v.dump();
      }
    }
  });
  return assemble("reverse-inclusion", trials, slots);
}

SuiteResult concatenation_suite(const CayleyBall& tree, const CayleyBall& grid, int trials,
                                std::uint64_t seed, int threads) {
  static const std::vector<Rat> thetas{Rat(0), Rat(1, 5), Rat(1, 4), Rat(1, 3), Rat(2, 5)};
  std::vector<TrialSlot> slots(trials);
  parallel_for(trials, threads, [&](int idx) {
    CounterRng rng(seed ^ 0x636f6e63ULL, static_cast<std::uint64_t>(idx));
    const CayleyBall& ball = (idx % 2 == 0) ? tree : grid;
    const QGParams& params = param_rotation()[(idx / 2) % param_rotation().size()];
    const Rat& theta = thetas[idx % thetas.size()];
    TrialSlot& slot = slots[idx];
    for (int attempt = 0; attempt < 12 && !slot.completed; ++attempt) {
      SamplerConfig cfg;
      cfg.params = params;
      cfg.target_length = std::min(6 + static_cast<int>(rng.below(4)), ball.radius());
      auto gamma = sample_qg_path(ball, ball.origin(), cfg, rng);
      if (!gamma) continue;
      int n = gamma->domain_length();
      if (n < 3) continue;
      int s = static_cast<int>(rng.below(n - 2));
      int t = s + 2 + static_cast<int>(rng.below(n - s - 1));
      if (t > n) t = n;
      DiscretePath mid = gamma->subpath(s, t);
      int d_uu = ball.distance(mid.start(), mid.end());
      if (d_uu == 0) continue;
      std::int64_t cap = floor_rat(theta * Rat(d_uu));

      auto find_z = [&](int u) -> int {
        auto row_u = ball.dist_row(u);
        std::vector<int> candidates;
        for (int z = 0; z < ball.vertex_count(); ++z) {
          if ((*row_u)[z] > cap) continue;
          bool minimal = true;  // hypothesis (1): u is the closest point of mid to z
          auto row_z = ball.dist_row(z);
          for (int i = 0; i <= mid.domain_length() && minimal; ++i)
            if ((*row_z)[mid.vertex(i)] < (*row_u)[z]) minimal = false;
          if (minimal) candidates.push_back(z);
        }
        return candidates.empty() ? -1 : pick_vertex(candidates, rng);
      };
      int z1 = find_z(mid.start());
      int z2 = find_z(mid.end());
      if (z1 < 0 || z2 < 0) continue;

      auto geodesic_to = [&](int from, int to) {
        Combing c = shortlex_combing(ball);
        return c.line(from, to).vertices();
      };
      std::vector<int> alpha1 = geodesic_to(z1, mid.start());
      std::vector<int> alpha2 = geodesic_to(mid.end(), z2);

      auto concat = [&](std::initializer_list<const std::vector<int>*> pieces) {
        std::vector<int> verts;
        for (const auto* p : pieces) {
          if (verts.empty())
            verts = *p;
          else
            verts.insert(verts.end(), p->begin() + 1, p->end());
        }
        return DiscretePath(ball, verts, true);
      };
      const std::vector<int>& core = mid.vertices();
      DiscretePath single1 = concat({&alpha1, &core});
      DiscretePath single2 = concat({&core, &alpha2});
      DiscretePath both = concat({&alpha1, &core, &alpha2});

      slot.completed = true;
      QGParams single_params(Rat(2) * params.lambda + Rat(1), params.kappa);
      QGParams double_params(concat_lambda(params, theta), params.kappa);
      auto check1 = is_quasi_geodesic(single1, single_params);
      auto check2 = is_quasi_geodesic(single2, single_params);
      auto check3 = is_quasi_geodesic(both, double_params);
      if (!check1.ok || !check2.ok || !check3.ok) {
        json v;
        v["params"] = {{"lambda", to_string(params.lambda)}, {"kappa", to_string(params.kappa)}};
        v["theta"] = to_string(theta);
        v["witness_paths"] = {literal_or_e(single1), literal_or_e(single2), literal_or_e(both)};
        auto bad = !check1.ok ? check1 : (!check2.ok ? check2 : check3);
        v["violating_pair"] = {bad.violating_i, bad.violating_j};
        slot.violation = v.dump();
      }
    }
  });
  return assemble("concatenation", trials, slots);
}

SuiteResult exit_point_suite(const CayleyBall& tree, const CayleyBall& grid, int trials,
                             int D, int ell, std::uint64_t seed, int threads) {
  std::vector<TrialSlot> slots(trials);
  parallel_for(trials, threads, [&](int idx) {
    CounterRng rng(seed ^ 0x65786974ULL, static_cast<std::uint64_t>(idx));
    const CayleyBall& ball = (idx % 2 == 0) ? tree : grid;
    const QGParams& params = param_rotation()[(idx / 2) % param_rotation().size()];
    TrialSlot& slot = slots[idx];
    for (int attempt = 0; attempt < 12 && !slot.completed; ++attempt) {
      SamplerConfig cfg;
      cfg.params = params;
      cfg.target_length = std::min(6 + static_cast<int>(rng.below(4)), ball.radius());
      auto eta = sample_qg_path(ball, ball.origin(), cfg, rng);
      cfg.target_length = std::min(6 + static_cast<int>(rng.below(4)), ball.radius());
      auto gamma = sample_qg_path(ball, ball.origin(), cfg, rng);
      if (!eta || !gamma) continue;
      slot.completed = true;
      auto d_gamma = distance_to_set(ball, gamma->vertices());
      if (d_gamma[eta->end()] <= D) break;  // nothing to assert for this pair
      auto rec = exit_point(*eta, *gamma, D, ell);
      if (!rec) {
        slot.violation = "endpoint escapes N_D but no (D,l)-exit point found (trial " +
                         std::to_string(idx) + ")";
        break;
      }
      auto lemma = check_exit_lemmas(*eta, *gamma, *rec);
      if (!lemma.minimal_exit_ok) {
        json v;
        v["trial"] = idx;
        v["witness_paths"] = {literal_or_e(*eta), literal_or_e(*gamma)};
        v["bad_s"] = lemma.first_bad_s;
        slot.violation = v.dump();
        break;
      }
      slot.points.push_back({Rat(ell + D), lemma.hausdorff});
      slot.item = json{{"trial", idx},
                       {"t", rec->t},
                       {"t_e", rec->t_e},
                       {"hausdorff", to_string(lemma.hausdorff)}};
    }
  });
  auto out = assemble("exit-points", trials, slots);
  std::vector<std::pair<Rat, Rat>> points;
  for (auto& slot : slots)
    points.insert(points.end(), slot.points.begin(), slot.points.end());
  auto fit = fit_linear_envelope(points);
  for (const auto& [x, y] : points)
    if (fit(x) < y) out.violations.push_back("hausdorff above the fitted envelope");
  out.notes.push_back({"nu_slope", to_string(fit.slope)});
  out.notes.push_back({"nu_intercept", to_string(fit.intercept)});
  out.notes.push_back({"exit_points_found", std::to_string(points.size())});
  return out;
}

SuiteResult qg_stay_suite(const CayleyBall& tree, const CayleyBall& grid, int trials, int D,
                          std::uint64_t seed, int threads) {
  std::vector<TrialSlot> slots(trials);
  parallel_for(trials, threads, [&](int idx) {
    CounterRng rng(seed ^ 0x73746179ULL, static_cast<std::uint64_t>(idx));
    const CayleyBall& ball = (idx % 2 == 0) ? tree : grid;
    const QGParams& params = param_rotation()[(idx / 2) % param_rotation().size()];
    TrialSlot& slot = slots[idx];
    for (int attempt = 0; attempt < 12 && !slot.completed; ++attempt) {
      SamplerConfig cfg;
      cfg.params = params;
      cfg.target_length = std::min(6 + static_cast<int>(rng.below(5)), ball.radius());
      auto gamma1 = sample_qg_path(ball, ball.origin(), cfg, rng);
      if (!gamma1) continue;
      auto near = distance_to_set(ball, gamma1->vertices());
      auto row_start = ball.dist_row(gamma1->start());
      std::vector<int> starts;
      for (int v = 0; v < ball.vertex_count(); ++v)
        if (near[v] <= D && (*row_start)[v] <= D) starts.push_back(v);
      if (starts.empty()) continue;
      SamplerConfig cfg2;
      cfg2.params = params;
      cfg2.near_set = &near;
      cfg2.near_radius = D;
      int start2 = pick_vertex(starts, rng);
      cfg2.target_length = std::min(4 + static_cast<int>(rng.below(4)),
                                    ball.radius() - ball.dist_to_origin(start2));
      if (cfg2.target_length < 2) continue;
      auto gamma2 = sample_qg_path(ball, start2, cfg2, rng);
      if (!gamma2) continue;

      int n2 = gamma2->domain_length();
      int t2 = static_cast<int>(rng.below(n2));
      int s2 = t2 + 1 + static_cast<int>(rng.below(n2 - t2));
      auto closest_index = [&](int v) {
        auto row = ball.dist_row(v);
        int best = 0;
        for (int i = 1; i <= gamma1->domain_length(); ++i)
          if ((*row)[gamma1->vertex(i)] < (*row)[gamma1->vertex(best)]) best = i;
        return best;
      };
      StayMatches matches;
      matches.t2 = t2;
      matches.s2 = s2;
      matches.t1 = closest_index(gamma2->vertex(t2));
      matches.s1 = closest_index(gamma2->vertex(s2));
      if (matches.t1 > matches.s1) continue;  // orientation mismatch; resample

      auto report = qg_stay_check(*gamma1, *gamma2, matches, D, params);
      if (!report.hypotheses_ok) continue;
      slot.completed = true;
      if (!report.within_bound) {
        json v;
        v["trial"] = idx;
        v["delta_hat"] = report.delta_hat;
        v["delta_bound"] = to_string(report.delta_bound);
        v["witness_paths"] = {literal_or_e(*gamma1), literal_or_e(*gamma2)};
        slot.violation = v.dump();
      } else {
        slot.item = json{{"trial", idx}, {"delta_hat", report.delta_hat}};
      }
    }
  });
  return assemble("qg-stay", trials, slots);
}

// --- experiment dispatch --------------------------------------------------------

namespace {

json suite_to_json(const SuiteResult& suite) {
  json j;
  j["key"] = "suite:" + suite.name;
  j["name"] = suite.name;
  j["requested"] = suite.requested;
  j["completed"] = suite.completed;
  j["violations"] = suite.violations.size();
  for (const auto& [k, v] : suite.notes) j[k] = v;
  return j;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  Timer timer;
  RunReport run;
  json report;
  report["schema"] = "report/v1";
  report["version"] = kToolkitVersion;
  report["kind"] = cfg.kind;
  report["seed"] = cfg.seed;
  report["config"] = cfg.raw_text;
  json items = json::array();
  json violations = json::array();
  json summary;
  bool budget_trouble = false;

  SearchBudget budget{cfg.budget_nodes};

  if (cfg.kind == "profile") {
    CayleyBall ball = build_ball(cfg.group, cfg.radius);
    DiscretePath gamma = parse_path(ball, cfg.path_literal);
    std::string csv = "Q,q,mu_star,exhaustive,nodes_expanded\n";
    std::vector<QGParams> grid = cfg.grid;
    if (grid.empty()) {
      // empty grid is a legal config: zero rows, success
    }
    auto profile = morse_profile(gamma, grid, budget);
    for (const auto& cell : profile.cells) {
      json item;
      item["key"] = "cell:Q=" + to_string(cell.qg.lambda) + ",q=" + to_string(cell.qg.kappa);
      item["Q"] = to_string(cell.qg.lambda);
      item["q"] = to_string(cell.qg.kappa);
      item["mu_star"] = to_string(cell.mu_star);
      item["exhaustive"] = cell.exact;
      item["nodes_expanded"] = cell.nodes_expanded;
      item["plot"] = plot_row(cfg.group.to_inline(), gamma.domain_length(),
                              "mu_star(" + to_string(cell.qg.lambda) + "," +
                                  to_string(cell.qg.kappa) + ")",
                              to_string(cell.mu_star));
      items.push_back(item);
      csv += to_string(cell.qg.lambda) + "," + to_string(cell.qg.kappa) + "," +
             to_string(cell.mu_star) + "," + (cell.exact ? "1" : "0") + "," +
             std::to_string(cell.nodes_expanded) + "\n";
      budget_trouble |= !cell.exact;
    }
    run.csv_files.push_back({"profile.csv", csv});
    summary["cells"] = profile.cells.size();
    summary["all_exact"] = profile.all_exact();
  } else if (cfg.kind == "catalog") {
    CayleyBall ball = build_ball(cfg.group, cfg.radius);
    auto catalog =
        build_catalog(ball, cfg.scale, cfg.local_params, cfg.weak_qg, cfg.mu, budget);
    run.csv_files.push_back({"catalog.txt", catalog_to_text(catalog)});
    summary["words"] = catalog.words.size();
    summary["exhaustive"] = catalog.exhaustive;
    budget_trouble |= !catalog.exhaustive;
    json item;
    item["key"] = "catalog";
    item["words"] = catalog.words.size();
    item["exhaustive"] = catalog.exhaustive;
    items.push_back(item);
  } else if (cfg.kind == "certify") {
    CayleyBall ball = build_ball(cfg.group, cfg.radius);
    auto catalog =
        build_catalog(ball, cfg.scale, cfg.local_params, cfg.weak_qg, cfg.mu, budget);
    DiscretePath path = parse_path(ball, cfg.path_literal);
    std::optional<Combing> combing;
    if (ball.spec().is_group_kind()) combing.emplace(shortlex_combing(ball));
    auto cert = certify_path(catalog, path, combing ? &*combing : nullptr);
    json cert_json;
    cert_json["path"] = cfg.path_literal;
    cert_json["overall"] = cert.outcome == CertifyOutcome::Certified      ? "certified"
                           : cert.outcome == CertifyOutcome::NotCertified ? "not-certified"
                                                                          : "conditional";
    json windows = json::array();
    for (auto& [offset, verdict] : cert.windows)
      windows.push_back({{"offset", offset},
                         {"verdict", verdict == WindowVerdict::InCatalog      ? "in-catalog"
                                     : verdict == WindowVerdict::NotInCatalog ? "not-in-catalog"
                                                                              : "margin-refused"}});
    cert_json["windows"] = windows;
    if (cert.fitted.fit) {
      cert_json["fitted_params"] = {{"lambda", to_string(cert.fitted.fit->lambda)},
                                    {"kappa", to_string(cert.fitted.fit->kappa)}};
    } else {
      cert_json["fitted_params"] = nullptr;
      cert_json["required_kappa_at_lambda_max"] =
          to_string(cert.fitted.required_kappa_at_lambda_max);
    }
    if (cert.hausdorff_to_combing)
      cert_json["hausdorff"] = to_string(*cert.hausdorff_to_combing);
    run.csv_files.push_back({"certificate.json", cert_json.dump(2) + "\n"});
    json item = cert_json;
    item["key"] = "certificate";
    items.push_back(item);
    summary["overall"] = cert_json["overall"];
    budget_trouble |= !catalog.exhaustive;
  } else if (cfg.kind == "middle") {
    CayleyBall ball = build_ball(cfg.group, cfg.radius);
    std::string csv = "n,t,c,m_hat\n";
    for (int n : cfg.lengths)
      for (const Rat& t : cfg.t_values)
        for (const Rat& c : cfg.c_values) {
          DiscretePath gamma =
              DiscretePath::from_letters(ball, ball.origin(), std::vector<int>(n, 0));
          auto est = recurrence_estimate(gamma, 0, n, MiddleSpec(t, c));
          std::string value = est ? std::to_string(*est) : "none";
          json item;
          item["key"] = "middle:n=" + std::to_string(n) + ",t=" + to_string(t) +
                        ",c=" + to_string(c);
          item["n"] = n;
          item["t"] = to_string(t);
          item["c"] = to_string(c);
          item["m_hat"] = value;
          item["plot"] = plot_row(cfg.group.to_inline(), n,
                                  "m_hat(t=" + to_string(t) + ",c=" + to_string(c) + ")",
                                  value);
          items.push_back(item);
          csv += std::to_string(n) + "," + to_string(t) + "," + to_string(c) + "," + value +
                 "\n";
        }
    run.csv_files.push_back({"middle.csv", csv});
    summary["rows"] = items.size();
  } else if (cfg.kind == "exitpoints") {
    CayleyBall tree = build_ball(GroupSpec::free_group({"a", "b"}), cfg.radius);
    CayleyBall grid = build_ball(GroupSpec::free_abelian({"a", "b"}), cfg.radius);
    auto suite =
        exit_point_suite(tree, grid, cfg.trials, cfg.exit_d, cfg.ell, cfg.seed, cfg.threads);
    items.push_back(suite_to_json(suite));
    for (const auto& v : suite.violations) violations.push_back(v);
    summary["completed"] = suite.completed;
    budget_trouble |= suite.completed < suite.requested;
  } else if (cfg.kind == "counterexample") {
    if (cfg.group.kind != GroupSpec::Kind::WedgeOfCycles)
      throw ConfigError("counterexample runs on a wedge-of-cycles fixture");
    int need = 0;
    for (int c : cfg.group.cycles) need = std::max(need, (c + 1) / 2);
    CayleyBall ball = build_ball(cfg.group, std::max(cfg.radius, need));
    auto pre = build_catalog(ball, cfg.scale, cfg.local_params, cfg.weak_qg, Rat(1 << 20),
                             budget);
    Rat mu_fix{0};
    for (const auto& w : pre.words) {
      DiscretePath path = parse_path(ball, w == "e" ? "" : w);
      auto bound = max_excursion_bound(path, 0, path.domain_length(), cfg.weak_qg, budget);
      if (!bound.exact) budget_trouble = true;
      mu_fix = std::max(mu_fix, bound.lower);
    }
    auto catalog = build_catalog(ball, cfg.scale, cfg.local_params, cfg.weak_qg, mu_fix,
                                 budget);
    int loop_len = cfg.group.cycles.front();
    DiscretePath loop =
        DiscretePath::from_letters(ball, ball.origin(), std::vector<int>(loop_len, 0));
    auto cert = certify_path(catalog, loop);
    bool certified = cert.outcome == CertifyOutcome::Certified;
    bool fit_absent = !cert.fitted.fit.has_value();
    if (!certified) violations.push_back("loop failed certification at D=" +
                                         std::to_string(cfg.scale));
    if (!fit_absent) violations.push_back("closed loop unexpectedly admits a global QG fit");
    json item;
    item["key"] = "counterexample";
    item["mu_fix"] = to_string(mu_fix);
    item["certified"] = certified;
    item["global_fit_absent"] = fit_absent;
    item["required_kappa_at_lambda_max"] =
        to_string(cert.fitted.required_kappa_at_lambda_max);
    items.push_back(item);
    summary["certified"] = certified;
    summary["global_fit_absent"] = fit_absent;
  } else if (cfg.kind == "lemma-suite") {
    CayleyBall tree = build_ball(GroupSpec::free_group({"a", "b"}), cfg.radius);
    CayleyBall grid = build_ball(GroupSpec::free_abelian({"a", "b"}), cfg.radius);
    std::vector<SuiteResult> suites;
    suites.push_back(
        reverse_inclusion_suite(tree, grid, cfg.trials, cfg.seed, cfg.threads));
    suites.push_back(
        concatenation_suite(tree, grid, std::max(1, cfg.trials / 2), cfg.seed, cfg.threads));
    suites.push_back(exit_point_suite(tree, grid, std::max(1, cfg.trials / 10), cfg.exit_d,
                                      cfg.ell, cfg.seed, cfg.threads));
    suites.push_back(qg_stay_suite(tree, grid, std::max(1, cfg.trials / 5), cfg.exit_d,
                                   cfg.seed, cfg.threads));
    std::string csv = "suite,requested,completed,violations\n";
    int total_requested = 0, total_completed = 0;
    for (const auto& suite : suites) {
      total_requested += suite.requested;
      total_completed += suite.completed;
      items.push_back(suite_to_json(suite));
      for (const auto& v : suite.violations) violations.push_back(v);
      csv += suite.name + "," + std::to_string(suite.requested) + "," +
             std::to_string(suite.completed) + "," + std::to_string(suite.violations.size()) +
             "\n";
      budget_trouble |= suite.completed < suite.requested;
    }
    summary["requested"] = total_requested;
    summary["completed"] = total_completed;
    run.csv_files.push_back({"suites.csv", csv});
  }

  std::sort(items.begin(), items.end(), [](const json& a, const json& b) {
    return a.value("key", "") < b.value("key", "");
  });
  report["items"] = items;
  report["violations"] = violations;
  report["summary"] = summary;
  run.report_json = report.dump(2) + "\n";
  if (!violations.empty())
    run.exit_status = 1;
  else if (budget_trouble)
    run.exit_status = 3;
  json timing;
  timing["wall_ms"] = timer.ms();
  run.timing_json = timing.dump(2) + "\n";
  return run;
}

std::string emit_plotdata(const std::string& report_json) {
  std::string csv = "fixture,n,quantity,value\n";
  json report = json::parse(report_json);
  if (!report.contains("items")) return csv;
  for (const auto& item : report["items"]) {
    if (!item.contains("plot")) continue;
    const auto& p = item["plot"];
    csv += p["fixture"].get<std::string>() + "," + std::to_string(p["n"].get<std::int64_t>()) +
           "," + p["quantity"].get<std::string>() + "," + p["value"].get<std::string>() + "\n";
  }
  return csv;
}

void write_run_outputs(const RunReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    out << content;
  };
  write("report.json", report.report_json);
  for (const auto& [name, content] : report.csv_files) write(name, content);
  write("plotdata.csv", emit_plotdata(report.report_json));
  write("timing.json", report.timing_json);
}

}  // namespace morselab
