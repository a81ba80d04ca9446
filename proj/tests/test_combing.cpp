#include "morselab/combing.hpp"

#include <algorithm>

#include "doctest.h"
#include "morselab/morse.hpp"
#include "morselab/strings.hpp"

using namespace morselab;

namespace {

CayleyBall& f2() {
  static CayleyBall ball = build_ball(GroupSpec::free_group({"a", "b"}), 6);
  return ball;
}

CayleyBall& z2() {
  static CayleyBall ball = build_ball(GroupSpec::free_abelian({"a", "b"}), 6);
  return ball;
}

std::string dotted(const CayleyBall& ball, int v) {
  std::string name = ball.vertex_name(v);
  std::replace(name.begin(), name.end(), ' ', '.');
  return name;
}

}  // namespace

TEST_CASE("shortlex combing lines") {
  Combing cf = shortlex_combing(f2());
  DiscretePath l = cf.line(f2().origin(), f2().find_by_name("a b"));
  CHECK(l.domain_length() == 2);
  CHECK(f2().vertex_name(l.vertex(1)) == "a");

  // Z^2: the shortlex-least geodesic puts all a-steps first; cross-check
  // against full geodesic enumeration
  Combing cz = shortlex_combing(z2());
  int target = z2().find_by_name("a a b b");
  DiscretePath line = cz.line(z2().origin(), target);
  auto geos = enumerate_geodesics(z2(), z2().origin(), target);
  CHECK(geos.size() == 6);
  std::vector<std::vector<int>> words;
  for (const auto& g : geos) words.push_back(g.letter_seq());
  std::sort(words.begin(), words.end());
  CHECK(line.letter_seq() == words.front());

  // degenerate pair
  DiscretePath still = cz.line(target, target);
  CHECK(still.domain_length() == 0);

  // fixtures have no canonical order
  CayleyBall wedge = build_ball(GroupSpec::wedge_of_cycles({6}), 3);
  CHECK_THROWS_AS(shortlex_combing(wedge), PathError);
}

TEST_CASE("constant extension clamps the domain") {
  Combing cf = shortlex_combing(f2());
  DiscretePath l = cf.line(f2().origin(), f2().find_by_name("a b a"));
  CHECK(constant_extension(l, 0) == l.start());
  CHECK(constant_extension(l, 2) == l.vertex(2));
  CHECK(constant_extension(l, 10) == l.end());
  CHECK_THROWS_AS(constant_extension(l, -1), std::invalid_argument);
}

TEST_CASE("boundedness estimates") {
  Combing cf = shortlex_combing(f2());
  auto tree = boundedness_estimate(cf, BoundednessScope::BasepointOnly, 4);
  CHECK(tree.kappa0_hat == 1);  // tree lines fellow-travel within d(y1,y2)

  // Z^2 needs 2: lines from a shifted basepoint to targets two apart can
  // diverge by 4 around the a-then-b corner (e.g. from (0,2) to (2,0) vs
  // (0,0))
  Combing cz = shortlex_combing(z2());
  auto grid = boundedness_estimate(cz, BoundednessScope::BasepointOnly, 4);
  CHECK(grid.kappa0_hat == 2);

  // monotone in the scope cap
  auto small = boundedness_estimate(cf, BoundednessScope::BasepointOnly, 2);
  CHECK(small.kappa0_hat <= tree.kappa0_hat);

  // Equivariance turns an all-pairs triple at cap c into a basepoint triple
  // whose targets sit at distance up to 2c, so the two scopes sandwich:
  //   base(c) <= all(c) <= base(2c).
  for (auto* ball : {&f2(), &z2()}) {
    Combing c = shortlex_combing(*ball);
    auto base = boundedness_estimate(c, BoundednessScope::BasepointOnly, 2);
    auto all = boundedness_estimate(c, BoundednessScope::AllPairs, 2);
    auto wide = boundedness_estimate(c, BoundednessScope::BasepointOnly, 4);
    CHECK(base.kappa0_hat <= all.kappa0_hat);
    CHECK(all.kappa0_hat <= wide.kappa0_hat);
    CHECK(all.triples_checked > base.triples_checked);
  }
  // in the tree every scope agrees
  auto tree_all = boundedness_estimate(cf, BoundednessScope::AllPairs, 2);
  CHECK(tree_all.kappa0_hat == 1);
}

TEST_CASE("tree fellow-traveling of adjacent targets") {
  Combing cf = shortlex_combing(f2());
  auto& ball = f2();
  for (int y1 = 0; y1 < ball.vertex_count(); ++y1) {
    if (ball.dist_to_origin(y1) > 5) continue;
    for (int l = 0; l < ball.alphabet_size(); ++l) {
      int y2 = ball.neighbor(y1, l);
      if (y2 < 0) continue;
      auto l1 = cf.line(ball.origin(), y1).vertices();
      auto l2 = cf.line(ball.origin(), y2).vertices();
      for (size_t t = 0; t < std::max(l1.size(), l2.size()); ++t) {
        int v1 = l1[std::min(t, l1.size() - 1)];
        int v2 = l2[std::min(t, l2.size() - 1)];
        CHECK(ball.distance(v1, v2) <= 2);
      }
    }
  }
}

TEST_CASE("combing lines pass their declared parameters") {
  Combing cf = shortlex_combing(f2());
  std::vector<std::pair<int, int>> pairs;
  for (int v = 0; v < f2().vertex_count(); v += 7) pairs.push_back({f2().origin(), v});
  CHECK(verify_combing_qg(cf, pairs).all_ok);
}

TEST_CASE("shortlex combing is translation equivariant") {
  for (auto* ball : {&f2(), &z2()}) {
    Combing c = shortlex_combing(*ball);
    std::vector<std::array<int, 3>> samples;
    for (int g = 1; g < ball->vertex_count(); g += 11)
      for (int x = 0; x < ball->vertex_count(); x += 13)
        for (int y = 1; y < ball->vertex_count(); y += 17)
          if (ball->dist_to_origin(g) <= 2 && ball->dist_to_origin(x) <= 2 &&
              ball->dist_to_origin(y) <= 2)
            samples.push_back({g, x, y});
    CHECK(combing_equivariant(c, samples));
  }
}

TEST_CASE("fixture combing tables: load, verify, negative control") {
  CayleyBall cycle = build_ball(GroupSpec::wedge_of_cycles({6}), 3);
  // build the short-arc combing for every ordered pair
  std::string text;
  auto arc = [&](int x, int y) {
    // BFS-shortest arc with forward ties first
    auto row = cycle.dist_row(y);
    std::vector<int> verts{x};
    int v = x;
    while (v != y) {
      for (int l = 0; l < cycle.alphabet_size(); ++l) {
        int w = cycle.neighbor(v, l);
        if (w >= 0 && (*row)[w] + 1 == (*row)[v]) {
          v = w;
          break;
        }
      }
      verts.push_back(v);
    }
    return verts;
  };
  for (int x = 0; x < cycle.vertex_count(); ++x)
    for (int y = 0; y < cycle.vertex_count(); ++y) {
      text += dotted(cycle, x) + " " + dotted(cycle, y) + " :";
      for (int v : arc(x, y)) text += " " + dotted(cycle, v);
      text += "\n";
    }
  Combing fixture = Combing::from_table_text(cycle, text, QGParams(Rat(1), Rat(0)));
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < cycle.vertex_count(); ++x)
    for (int y = 0; y < cycle.vertex_count(); ++y) pairs.push_back({x, y});
  CHECK(verify_combing_qg(fixture, pairs).all_ok);
  CHECK(fixture.line(1, 1).domain_length() == 0);

  // a deliberately corrupted line: the long way around, declared (1,0)
  std::string bad = text;
  {
    int x = cycle.origin();
    int y = cycle.find_by_name("t1");
    std::string key = dotted(cycle, x) + " " + dotted(cycle, y) + " :";
    std::string detour = key;
    int v = x;
    // walk backwards around the whole cycle
    for (int step = 0; step < 5; ++step) {
      detour += " " + dotted(cycle, v);
      v = cycle.neighbor(v, 1);  // t1^-1
    }
    detour += " " + dotted(cycle, y);
    size_t at = bad.find(key);
    size_t end = bad.find('\n', at);
    bad = bad.substr(0, at) + detour + bad.substr(end);
  }
  Combing corrupted = Combing::from_table_text(cycle, bad, QGParams(Rat(1), Rat(0)));
  auto report = verify_combing_qg(corrupted, pairs);
  CHECK_FALSE(report.all_ok);
  CHECK(report.bad_x == cycle.origin());

  // loader rejects non-adjacent steps
  CHECK_THROWS_AS(Combing::from_table_text(cycle, "e t1.t1 : e t1.t1\n",
                                           QGParams(Rat(1), Rat(0))),
                  PathError);
  // and mismatched endpoints
  CHECK_THROWS_AS(Combing::from_table_text(cycle, "e t1 : t1\n", QGParams(Rat(1), Rat(0))),
                  PathError);
}

TEST_CASE("a declared (2,0) combing of geodesic lines verifies by monotonicity") {
  CayleyBall cycle = build_ball(GroupSpec::wedge_of_cycles({6}), 3);
  std::string text;
  for (int y = 0; y < cycle.vertex_count(); ++y) {
    auto row = cycle.dist_row(y);
    std::vector<int> verts{0};
    int v = 0;
    while (v != y) {
      for (int l = 0; l < cycle.alphabet_size(); ++l) {
        int w = cycle.neighbor(v, l);
        if (w >= 0 && (*row)[w] + 1 == (*row)[v]) {
          v = w;
          break;
        }
      }
      verts.push_back(v);
    }
    text += "e " + dotted(cycle, y) + " :";
    for (int u : verts) text += " " + dotted(cycle, u);
    text += "\n";
  }
  Combing declared = Combing::from_table_text(cycle, text, QGParams(Rat(2), Rat(0)));
  std::vector<std::pair<int, int>> pairs;
  for (int y = 0; y < cycle.vertex_count(); ++y) pairs.push_back({0, y});
  CHECK(verify_combing_qg(declared, pairs).all_ok);
}
