#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace morselab {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Description of the generating data for a supported graph. Only kinds with
// an obvious confluent normal form are supported, so ball construction can
// be exact without any completion machinery.
struct GroupSpec {
  enum class Kind { Free, Abelian, DirectProduct, FreeProduct, WedgeOfCycles };

  Kind kind = Kind::Free;
  std::vector<std::string> generators;  // Free / Abelian
  std::vector<GroupSpec> factors;       // DirectProduct / FreeProduct
  std::vector<int> cycles;              // WedgeOfCycles fixture

  static GroupSpec free_group(std::vector<std::string> gens);
  static GroupSpec free_abelian(std::vector<std::string> gens);
  static GroupSpec direct_product(std::vector<GroupSpec> fs);
  static GroupSpec free_product(std::vector<GroupSpec> fs);
  static GroupSpec wedge_of_cycles(std::vector<int> lengths);

  bool is_group_kind() const { return kind != Kind::WedgeOfCycles; }

  void validate() const;           // throws SpecError
  std::string to_inline() const;   // e.g. "product(free(a,b);abelian(z))"
};

// Compact inline form: free(a,b) | abelian(x) | product(S;S;...) |
// freeproduct(S;S;...) | wedge(6,8).
GroupSpec parse_group_inline(const std::string& text);

// Line-oriented spec file:
//   kind=free|abelian|product|freeproduct|graph
//   generators=a,b
//   factors=[free(a,b); abelian(z)]
//   cycles=[6,8]
GroupSpec parse_group_file_text(const std::string& text);

struct LetterInfo {
  std::string name;  // "a" or "a⁻¹"
  int inverse = -1;  // index of the formal inverse letter
};

// Accepts "a⁻¹" and the ASCII fallback "a^-1"; -1 if unknown.
int find_letter(const std::vector<LetterInfo>& letters, const std::string& name);

// Normal-form oracle for one group / fixture. Elements are opaque canonical
// keys; two keys are equal iff the elements are. Letters come in inverse
// pairs and are ordered a < a⁻¹ < b < b⁻¹ < ..., which is the shortlex
// letter order used everywhere downstream.
class GroupEngine {
 public:
  virtual ~GroupEngine() = default;

  const std::vector<LetterInfo>& letters() const { return letters_; }
  int alphabet_size() const { return static_cast<int>(letters_.size()); }
  int inverse_letter(int l) const { return letters_[l].inverse; }

  virtual std::string identity() const = 0;
  // nullopt when no edge with this label leaves `key` (fixture graphs only;
  // group kinds are total).
  virtual std::optional<std::string> apply(const std::string& key, int letter) const = 0;
  virtual bool transitive() const = 0;
  // Expected sphere sizes s(0..radius); the growth cross-check for ball
  // construction.
  virtual std::vector<std::int64_t> sphere_sizes(int radius) const = 0;

 protected:
  std::vector<LetterInfo> letters_;
};

std::unique_ptr<GroupEngine> make_engine(const GroupSpec& spec);

}  // namespace morselab
