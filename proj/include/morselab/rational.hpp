#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace morselab {

// Every metric or parameter quantity in this library is an exact rational.
// Predicates never touch floating point; a tolerance would be able to mask
// a genuine violation of one of the checked inequalities.
//
// Comparisons must always be Rat-vs-Rat: boost's reversed mixed-type
// operator templates self-recurse when the scalar side is an `int` literal
// (IntType here is int64), so wrap literals as Rat(n).
using Rat = boost::rational<std::int64_t>;

inline Rat rat(std::int64_t num, std::int64_t den = 1) { return Rat(num, den); }

inline std::int64_t floor_rat(const Rat& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

inline std::int64_t ceil_rat(const Rat& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

inline std::string to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "3", "-2", "11/5", "  7 / 2 ".
inline std::optional<Rat> parse_rat(const std::string& text) {
  size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(std::stoll(text));
    std::int64_t num = std::stoll(text.substr(0, slash));
    std::int64_t den = std::stoll(text.substr(slash + 1));
    if (den == 0) return std::nullopt;
    return Rat(num, den);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline Rat parse_rat_or_throw(const std::string& text) {
  auto r = parse_rat(text);
  if (!r) throw std::invalid_argument("not a rational: '" + text + "'");
  return *r;
}

}  // namespace morselab
