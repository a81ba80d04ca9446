#include "morselab/path.hpp"

#include "morselab/strings.hpp"

namespace morselab {

DiscretePath::DiscretePath(const CayleyBall& ball, std::vector<int> verts, bool allow_stays)
    : ball_(&ball), verts_(std::move(verts)) {
  if (verts_.empty()) throw PathError("a path needs at least one vertex");
  for (int v : verts_)
    if (v < 0 || v >= ball.vertex_count()) throw PathError("vertex outside ball");
  for (size_t i = 1; i < verts_.size(); ++i) {
    if (verts_[i] == verts_[i - 1]) {
      if (!allow_stays) throw PathError("stay step at index " + std::to_string(i - 1) +
                                        " (stays are disabled by default)");
      continue;
    }
    if (ball.letter_between(verts_[i - 1], verts_[i]) < 0)
      throw PathError("vertices at indices " + std::to_string(i - 1) + "," +
                      std::to_string(i) + " are not adjacent");
  }
}

DiscretePath DiscretePath::from_letters(const CayleyBall& ball, int start,
                                        const std::vector<int>& letters) {
  std::vector<int> verts{start};
  int v = start;
  for (int l : letters) {
    v = ball.neighbor(v, l);
    if (v < 0) throw PathError("letter walk leaves the ball");
    verts.push_back(v);
  }
  return DiscretePath(ball, std::move(verts));
}

DiscretePath DiscretePath::constant(const CayleyBall& ball, int vertex) {
  return DiscretePath(ball, {vertex});
}

std::vector<int> DiscretePath::letter_seq() const {
  std::vector<int> letters;
  letters.reserve(verts_.size());
  for (size_t i = 1; i < verts_.size(); ++i)
    letters.push_back(verts_[i] == verts_[i - 1]
                          ? -1
                          : ball_->letter_between(verts_[i - 1], verts_[i]));
  return letters;
}

DiscretePath DiscretePath::subpath(int i, int j) const {
  if (i < 0 || j >= static_cast<int>(verts_.size()) || i > j)
    throw PathError("bad subpath range");
  return DiscretePath(*ball_,
                      std::vector<int>(verts_.begin() + i, verts_.begin() + j + 1), true);
}

DiscretePath DiscretePath::reversed() const {
  return DiscretePath(*ball_, std::vector<int>(verts_.rbegin(), verts_.rend()), true);
}

std::string DiscretePath::to_literal() const {
  std::vector<std::string> parts;
  if (start() != ball_->origin()) parts.push_back("@" + ball_->vertex_name(start()) + " :");
  for (int l : letter_seq()) parts.push_back(l < 0 ? "." : ball_->letters()[l].name);
  return join(parts, " ");
}

DiscretePath parse_path(const CayleyBall& ball, const std::string& literal) {
  std::string text = trim(literal);
  if (starts_with(text, "ids:")) {
    std::vector<int> verts;
    for (const auto& tok : split_clean(text.substr(4), ','))
      verts.push_back(std::stoi(tok));
    return DiscretePath(ball, std::move(verts));
  }
  int start = ball.origin();
  if (!text.empty() && text[0] == '@') {
    auto colon = text.find(':');
    std::string name = trim(text.substr(1, colon == std::string::npos
                                               ? std::string::npos
                                               : colon - 1));
    start = ball.find_by_name(name);
    if (start < 0) throw PathError("unknown start vertex '" + name + "'");
    text = colon == std::string::npos ? "" : trim(text.substr(colon + 1));
  }
  std::vector<int> letters;
  for (const auto& tok : split_clean(text, ' ')) {
    int l = find_letter(ball.letters(), tok);
    if (l < 0) throw PathError("unknown letter '" + tok + "'");
    letters.push_back(l);
  }
  return DiscretePath::from_letters(ball, start, letters);
}

DiscretePath translate_to_origin(const DiscretePath& path) {
  const CayleyBall& ball = path.ball();
  if (path.start() == ball.origin()) return path;
  if (!ball.transitive())
    throw PathError("ball is not vertex-transitive; cannot translate");
  std::vector<int> verts{ball.origin()};
  int v = ball.origin();
  for (int l : path.letter_seq()) {
    if (l < 0) {
      verts.push_back(v);
      continue;
    }
    v = ball.neighbor(v, l);
    if (v < 0) throw PathError("translated path escapes the ball");
    verts.push_back(v);
  }
  return DiscretePath(ball, std::move(verts), true);
}

}  // namespace morselab
