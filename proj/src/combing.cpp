#include "morselab/combing.hpp"

#include <algorithm>
#include <array>

#include "morselab/strings.hpp"

namespace morselab {

namespace {

std::uint64_t pair_key(int x, int y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint32_t>(y);
}

int parse_dotted_vertex(const CayleyBall& ball, const std::string& token) {
  if (token == "e") return ball.origin();
  std::vector<int> word;
  for (const auto& part : split_clean(token, '.')) {
    int l = find_letter(ball.letters(), part);
    if (l < 0) throw PathError("unknown letter '" + part + "' in combing table");
    word.push_back(l);
  }
  int v = ball.find_by_word(word);
  if (v < 0) throw PathError("combing table vertex '" + token + "' not in ball");
  return v;
}

}  // namespace

Combing Combing::shortlex(const CayleyBall& ball) {
  if (!ball.spec().is_group_kind())
    throw PathError("shortlex combing needs a group-kind ball; fixture combings "
                    "must be supplied as explicit tables");
  return Combing(ball, Kind::Shortlex, QGParams(Rat(1), Rat(0)));
}

Combing shortlex_combing(const CayleyBall& ball) { return Combing::shortlex(ball); }

Combing Combing::from_table_text(const CayleyBall& ball, const std::string& text,
                                 QGParams declared) {
  Combing combing(ball, Kind::FixtureTable, declared);
  for (const auto& raw : split(text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw PathError("bad combing table line '" + line + "'");
    auto head = split_clean(line.substr(0, colon), ' ');
    if (head.size() != 2) throw PathError("combing table line needs 'x y :'");
    int x = parse_dotted_vertex(ball, head[0]);
    int y = parse_dotted_vertex(ball, head[1]);
    std::vector<int> verts;
    for (const auto& tok : split_clean(line.substr(colon + 1), ' '))
      verts.push_back(parse_dotted_vertex(ball, tok));
    if (verts.empty() || verts.front() != x || verts.back() != y)
      throw PathError("combing line endpoints do not match its pair");
    DiscretePath path(ball, verts);  // validates adjacency
    combing.table_[pair_key(x, y)] = verts;
  }
  return combing;
}

DiscretePath Combing::line(int x, int y) const {
  if (kind_ == Kind::FixtureTable) {
    auto it = table_.find(pair_key(x, y));
    if (it == table_.end()) throw PathError("combing table has no line for this pair");
    return DiscretePath(*ball_, it->second);
  }
  // shortlex: at each step take the least letter that makes progress
  auto row = ball_->dist_row(y);
  std::vector<int> verts{x};
  int v = x;
  while (v != y) {
    int next = -1;
    for (int l = 0; l < ball_->alphabet_size(); ++l) {
      int w = ball_->neighbor(v, l);
      if (w >= 0 && (*row)[w] + 1 == (*row)[v]) {
        next = w;
        break;
      }
    }
    if (next < 0) throw PathError("combing line blocked; pair not connected in ball");
    verts.push_back(next);
    v = next;
  }
  return DiscretePath(*ball_, verts);
}

int constant_extension(const DiscretePath& line, int time) {
  if (time < 0) throw std::invalid_argument("constant extension needs t >= 0");
  return line.vertex(std::min(time, line.domain_length()));
}

BoundednessReport boundedness_estimate(const Combing& combing, BoundednessScope scope,
                                       int radius_cap) {
  const CayleyBall& ball = combing.ball();
  BoundednessReport report;
  report.scope = scope;
  report.radius_cap = radius_cap;

  std::vector<int> in_scope;
  for (int v = 0; v < ball.vertex_count(); ++v)
    if (ball.dist_to_origin(v) <= radius_cap) in_scope.push_back(v);
  std::vector<int> bases =
      scope == BoundednessScope::BasepointOnly ? std::vector<int>{ball.origin()} : in_scope;

  int kappa = 0;
  for (int x : bases) {
    std::vector<std::vector<int>> lines;
    lines.reserve(in_scope.size());
    for (int y : in_scope) lines.push_back(combing.line(x, y).vertices());
    for (size_t i = 0; i < in_scope.size(); ++i)
      for (size_t j = i + 1; j < in_scope.size(); ++j) {
        ++report.triples_checked;
        int dy = ball.distance(in_scope[i], in_scope[j]);
        const auto& li = lines[i];
        const auto& lj = lines[j];
        size_t horizon = std::max(li.size(), lj.size());
        int worst = 0;
        for (size_t t = 0; t < horizon; ++t) {
          int vi = li[std::min(t, li.size() - 1)];
          int vj = lj[std::min(t, lj.size() - 1)];
          worst = std::max(worst, ball.distance(vi, vj));
        }
        // least integer k with worst <= k*(dy + 1)
        kappa = std::max(kappa, (worst + dy) / (dy + 1));
      }
  }
  report.kappa0_hat = kappa;
  return report;
}

CombingQGReport verify_combing_qg(const Combing& combing,
                                  const std::vector<std::pair<int, int>>& sample_pairs) {
  CombingQGReport report;
  for (auto [x, y] : sample_pairs) {
    DiscretePath l = combing.line(x, y);
    if (!is_quasi_geodesic(l, combing.declared_params()).ok) {
      report.all_ok = false;
      report.bad_x = x;
      report.bad_y = y;
      return report;
    }
  }
  return report;
}

bool combing_equivariant(const Combing& combing,
                         const std::vector<std::array<int, 3>>& g_x_y_samples) {
  const CayleyBall& ball = combing.ball();
  for (const auto& [g, x, y] : g_x_y_samples) {
    auto gx = ball.apply_word(g, ball.word_of(x));
    auto gy = ball.apply_word(g, ball.word_of(y));
    if (!gx || !gy) continue;  // translate leaves the ball; skip sample
    DiscretePath base = combing.line(x, y);
    std::vector<int> mapped;
    bool ok = true;
    for (int v : base.vertices()) {
      auto gv = ball.apply_word(g, ball.word_of(v));
      if (!gv) {
        ok = false;
        break;
      }
      mapped.push_back(*gv);
    }
    if (!ok) continue;
    if (combing.line(*gx, *gy).vertices() != mapped) return false;
  }
  return true;
}

}  // namespace morselab
