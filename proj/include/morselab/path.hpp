#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "morselab/cayley_ball.hpp"

namespace morselab {

struct PathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unit-speed edge path: vertex i sits at time i. Consecutive vertices must
// be adjacent; equal consecutive vertices (stay steps) only when explicitly
// enabled.
class DiscretePath {
 public:
  DiscretePath(const CayleyBall& ball, std::vector<int> verts, bool allow_stays = false);

  static DiscretePath from_letters(const CayleyBall& ball, int start,
                                   const std::vector<int>& letters);
  static DiscretePath constant(const CayleyBall& ball, int vertex);

  const CayleyBall& ball() const { return *ball_; }
  int domain_length() const { return static_cast<int>(verts_.size()) - 1; }
  int vertex(int i) const { return verts_[i]; }
  int start() const { return verts_.front(); }
  int end() const { return verts_.back(); }
  const std::vector<int>& vertices() const { return verts_; }
  bool closed() const { return domain_length() > 0 && start() == end(); }

  // -1 marks a stay step
  std::vector<int> letter_seq() const;

  DiscretePath subpath(int i, int j) const;  // inclusive indices
  DiscretePath reversed() const;

  std::string to_literal() const;

 private:
  const CayleyBall* ball_;
  std::vector<int> verts_;
};

// Literal grammar:
//   ""              constant path at the origin
//   "a b a⁻¹"       letters walked from the origin ("a^-1" also accepted)
//   "@a b : b b"    letters walked from the named start vertex
//   "ids:0,4,7"     explicit vertex ids
DiscretePath parse_path(const CayleyBall& ball, const std::string& literal);

// Left-translation taking the start vertex to the origin; label-isometric.
// Requires a transitive ball (group kinds, single-cycle wedge). Throws
// PathError when the translated path leaves the ball or the ball is not
// transitive.
DiscretePath translate_to_origin(const DiscretePath& path);

}  // namespace morselab
