#include "morselab/cayley_ball.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "morselab/strings.hpp"

namespace morselab {

namespace {
constexpr size_t kEagerRowLimit = 6000;       // precompute all rows below this
constexpr size_t kRowCacheBytes = 192u << 20;  // LRU budget above it
}  // namespace

CayleyBall build_ball(const GroupSpec& spec, int radius, std::int64_t vertex_budget) {
  if (radius < 0) throw SpecError("radius must be nonnegative");
  CayleyBall ball;
  ball.spec_ = spec;
  ball.engine_ = make_engine(spec);
  ball.radius_ = radius;
  ball.alphabet_ = ball.engine_->alphabet_size();

  const GroupEngine& eng = *ball.engine_;
  ball.keys_.push_back(eng.identity());
  ball.key_to_id_.emplace(eng.identity(), 0);
  ball.parent_.push_back(-1);
  ball.letter_in_.push_back(0);
  ball.dist0_.push_back(0);

  // Plain FIFO BFS, expanding letters in order. The frontier stays sorted by
  // shortlex label, so the first word reaching an element is its shortlex
  // normal form and vertex ids are shortlex-ordered.
  std::vector<std::int64_t> layer_counts{1};
  size_t head = 0;
  while (head < ball.keys_.size()) {
    int v = static_cast<int>(head++);
    if (ball.dist0_[v] == radius) continue;
    for (int letter = 0; letter < ball.alphabet_; ++letter) {
      auto next = eng.apply(ball.keys_[v], letter);
      if (!next) continue;
      if (ball.key_to_id_.count(*next)) continue;
      int id = static_cast<int>(ball.keys_.size());
      if (id >= vertex_budget)
        throw BudgetError("ball needs more than " + std::to_string(id) +
                          " vertices, over the budget of " + std::to_string(vertex_budget) +
                          " (spec " + spec.to_inline() + ", radius " +
                          std::to_string(radius) + ")");
      ball.key_to_id_.emplace(*next, id);
      ball.keys_.push_back(std::move(*next));
      ball.parent_.push_back(v);
      ball.letter_in_.push_back(static_cast<std::uint8_t>(letter));
      int d = ball.dist0_[v] + 1;
      ball.dist0_.push_back(static_cast<std::uint16_t>(d));
      if (static_cast<size_t>(d) >= layer_counts.size()) layer_counts.push_back(0);
      ++layer_counts[d];
    }
  }

  auto expected = eng.sphere_sizes(radius);
  for (int n = 0; n <= radius; ++n) {
    std::int64_t got = (static_cast<size_t>(n) < layer_counts.size()) ? layer_counts[n] : 0;
    if (got != expected[n])
      throw std::logic_error("growth mismatch for " + spec.to_inline() + " at distance " +
                             std::to_string(n) + ": built " + std::to_string(got) +
                             ", formula " + std::to_string(expected[n]));
  }

  size_t v_count = ball.keys_.size();
  if (ball.alphabet_ > 32) throw SpecError("alphabets above 32 letters are not supported");
  ball.adjacency_.assign(v_count * ball.alphabet_, -1);
  ball.clipped_.assign(v_count, 0);
  for (size_t v = 0; v < v_count; ++v)
    for (int letter = 0; letter < ball.alphabet_; ++letter) {
      auto next = eng.apply(ball.keys_[v], letter);
      if (!next) continue;  // no such ambient edge (fixtures)
      auto it = ball.key_to_id_.find(*next);
      if (it != ball.key_to_id_.end())
        ball.adjacency_[v * ball.alphabet_ + letter] = it->second;
      else
        ball.clipped_[v] |= 1u << letter;
    }

  if (spec.is_group_kind()) {
    ball.exact_metric_ = true;
  } else {
    int need = 0;
    for (int c : spec.cycles) need = std::max(need, (c + 1) / 2);
    ball.exact_metric_ = radius >= need;  // ball covers the whole wedge graph
  }

  if (v_count <= kEagerRowLimit) {
    for (size_t v = 0; v < v_count; ++v)
      ball.cache_->rows.emplace(static_cast<int>(v),
                                std::make_shared<std::vector<std::uint16_t>>(
                                    ball.bfs_row(static_cast<int>(v))));
    ball.cache_->cap = 0;
  } else {
    size_t row_bytes = v_count * sizeof(std::uint16_t);
    ball.cache_->cap = std::max<size_t>(16, kRowCacheBytes / row_bytes);
  }
  return ball;
}

std::vector<std::uint16_t> CayleyBall::bfs_row(int src) const {
  std::vector<std::uint16_t> dist(parent_.size(), kUnreachable);
  std::vector<int> queue;
  queue.reserve(parent_.size());
  dist[src] = 0;
  queue.push_back(src);
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    std::uint16_t d = dist[v];
    const int* nb = &adjacency_[static_cast<size_t>(v) * alphabet_];
    for (int l = 0; l < alphabet_; ++l) {
      int w = nb[l];
      if (w >= 0 && dist[w] == kUnreachable) {
        dist[w] = static_cast<std::uint16_t>(d + 1);
        queue.push_back(w);
      }
    }
  }
  return dist;
}

DistRow CayleyBall::dist_row(int src) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->rows.find(src);
  if (it != cache_->rows.end()) return it->second;
  auto row = std::make_shared<std::vector<std::uint16_t>>(bfs_row(src));
  cache_->rows.emplace(src, row);
  if (cache_->cap > 0) {
    cache_->order.push_back(src);
    while (cache_->order.size() > cache_->cap) {
      cache_->rows.erase(cache_->order.front());
      cache_->order.pop_front();
    }
  }
  return row;
}

int CayleyBall::distance(int u, int v) const {
  if (u == v) return 0;
  return (*dist_row(u))[v];
}

int CayleyBall::distance_checked(int u, int v, int margin_needed) const {
  int m = std::max(margin_needed, validity_margin());
  if (dist_to_origin(u) > radius_ - m || dist_to_origin(v) > radius_ - m)
    throw MarginError("distance query outside validity margin " + std::to_string(m) +
                      " of radius-" + std::to_string(radius_) + " ball");
  if (!pair_metric_sound(u, v))
    throw MarginError("pair not provably ambient-exact in truncated ball");
  return distance(u, v);
}

int CayleyBall::letter_between(int u, int v) const {
  for (int l = 0; l < alphabet_; ++l)
    if (neighbor(u, l) == v) return l;
  return -1;
}

int CayleyBall::degree(int v) const {
  int d = 0;
  for (int l = 0; l < alphabet_; ++l)
    if (neighbor(v, l) >= 0) ++d;
  return d;
}

std::vector<int> CayleyBall::word_of(int v) const {
  std::vector<int> letters;
  while (v != 0) {
    letters.push_back(letter_in_[v]);
    v = parent_[v];
  }
  std::reverse(letters.begin(), letters.end());
  return letters;
}

std::string CayleyBall::vertex_name(int v) const {
  if (v == 0) return "e";
  std::vector<std::string> parts;
  for (int l : word_of(v)) parts.push_back(letters()[l].name);
  return join(parts, " ");
}

std::optional<int> CayleyBall::apply_word(int start, const std::vector<int>& word) const {
  int v = start;
  for (int l : word) {
    v = neighbor(v, l);
    if (v < 0) return std::nullopt;
  }
  return v;
}

int CayleyBall::find_by_word(const std::vector<int>& word) const {
  auto v = apply_word(origin(), word);
  return v ? *v : -1;
}

int CayleyBall::find_by_name(const std::string& name) const {
  std::string t = trim(name);
  if (t == "e" || t.empty()) return origin();
  std::vector<int> word;
  for (const auto& tok : split_clean(t, ' ')) {
    int l = find_letter(letters(), tok);
    if (l < 0) return -1;
    word.push_back(l);
  }
  return find_by_word(word);
}

std::string CayleyBall::to_json_text() const {
  nlohmann::json j;
  j["schema"] = "ball/v1";
  j["group"] = spec_.to_inline();
  j["radius"] = radius_;
  j["margin"] = validity_margin();
  j["exact_metric"] = exact_metric_;
  std::vector<std::string> names;
  names.reserve(parent_.size());
  for (int v = 0; v < vertex_count(); ++v) names.push_back(vertex_name(v));
  j["vertices"] = names;
  std::vector<std::vector<int>> edges;
  for (int v = 0; v < vertex_count(); ++v)
    for (int l = 0; l < alphabet_; ++l) {
      int w = neighbor(v, l);
      if (w >= 0) edges.push_back({v, l, w});
    }
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

CayleyBall CayleyBall::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("schema").get<std::string>() != "ball/v1")
    throw SpecError("unsupported ball schema");
  GroupSpec spec = parse_group_inline(j.at("group").get<std::string>());
  CayleyBall ball = build_ball(spec, j.at("radius").get<int>());
  if (ball.to_json_text() != nlohmann::json::parse(text).dump(2) + "\n")
    throw SpecError("ball dump does not match canonical reconstruction");
  return ball;
}

std::uint64_t CayleyBall::content_hash() const {
  std::string text = to_json_text();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace morselab
