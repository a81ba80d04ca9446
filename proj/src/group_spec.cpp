#include "morselab/group_spec.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <utility>

#include "morselab/strings.hpp"

namespace morselab {

namespace {

constexpr const char* kInverseMark = "⁻¹";  // superscript -1

void collect_generator_names(const GroupSpec& spec, std::vector<std::string>& out) {
  switch (spec.kind) {
    case GroupSpec::Kind::Free:
    case GroupSpec::Kind::Abelian:
      for (const auto& g : spec.generators) out.push_back(g);
      break;
    case GroupSpec::Kind::DirectProduct:
    case GroupSpec::Kind::FreeProduct:
      for (const auto& f : spec.factors) collect_generator_names(f, out);
      break;
    case GroupSpec::Kind::WedgeOfCycles:
      for (size_t j = 0; j < spec.cycles.size(); ++j)
        out.push_back("t" + std::to_string(j + 1));
      break;
  }
}

std::vector<LetterInfo> letters_for_names(const std::vector<std::string>& names) {
  std::vector<LetterInfo> letters;
  letters.reserve(names.size() * 2);
  for (const auto& n : names) {
    int base = static_cast<int>(letters.size());
    letters.push_back({n, base + 1});
    letters.push_back({n + kInverseMark, base});
  }
  return letters;
}

void append_u32(std::string& s, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  s.append(buf, 4);
}

std::uint32_t read_u32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// ---------------------------------------------------------------------------

class FreeEngine : public GroupEngine {
 public:
  explicit FreeEngine(const std::vector<std::string>& names) {
    letters_ = letters_for_names(names);
  }

  std::string identity() const override { return {}; }

  std::optional<std::string> apply(const std::string& key, int letter) const override {
    std::string out = key;
    if (!out.empty() && static_cast<unsigned char>(out.back()) ==
                            static_cast<unsigned>(inverse_letter(letter))) {
      out.pop_back();
    } else {
      out.push_back(static_cast<char>(letter));
    }
    return out;
  }

  bool transitive() const override { return true; }

  std::vector<std::int64_t> sphere_sizes(int radius) const override {
    int k2 = alphabet_size();
    std::vector<std::int64_t> s(radius + 1, 0);
    s[0] = 1;
    if (radius >= 1) s[1] = k2;
    for (int n = 2; n <= radius; ++n) s[n] = s[n - 1] * (k2 - 1);
    return s;
  }
};

class AbelianEngine : public GroupEngine {
 public:
  explicit AbelianEngine(const std::vector<std::string>& names)
      : rank_(static_cast<int>(names.size())) {
    letters_ = letters_for_names(names);
  }

  std::string identity() const override {
    return std::string(static_cast<size_t>(rank_) * 4, '\0');
  }

  std::optional<std::string> apply(const std::string& key, int letter) const override {
    std::string out = key;
    int gen = letter / 2;
    std::int32_t v;
    std::memcpy(&v, out.data() + gen * 4, 4);
    v += (letter % 2 == 0) ? 1 : -1;
    std::memcpy(out.data() + gen * 4, &v, 4);
    return out;
  }

  bool transitive() const override { return true; }

  std::vector<std::int64_t> sphere_sizes(int radius) const override {
    auto ball = [&](int n) -> std::int64_t {
      if (n < 0) return 0;
      std::int64_t total = 0;
      for (int i = 0; i <= std::min(rank_, n); ++i)
        total += (std::int64_t{1} << i) * binomial(rank_, i) * binomial(n, i);
      return total;
    };
    std::vector<std::int64_t> s(radius + 1, 0);
    for (int n = 0; n <= radius; ++n) s[n] = ball(n) - ball(n - 1);
    return s;
  }

 private:
  int rank_;
};

// Common plumbing for the two product kinds: a global letter index maps to
// (factor, local letter).
class CompositeEngine : public GroupEngine {
 protected:
  explicit CompositeEngine(std::vector<std::unique_ptr<GroupEngine>> factors)
      : factors_(std::move(factors)) {
    for (size_t f = 0; f < factors_.size(); ++f) {
      int offset = static_cast<int>(letters_.size());
      for (const auto& l : factors_[f]->letters()) {
        letters_.push_back({l.name, l.inverse + offset});
        owner_.push_back(static_cast<int>(f));
        local_.push_back(static_cast<int>(letters_.size()) - 1 - offset);
      }
    }
  }

  std::vector<std::unique_ptr<GroupEngine>> factors_;
  std::vector<int> owner_;  // letter -> factor index
  std::vector<int> local_;  // letter -> letter index within factor

  static std::vector<std::int64_t> convolve(const std::vector<std::int64_t>& a,
                                            const std::vector<std::int64_t>& b) {
    std::vector<std::int64_t> c(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; i + j < a.size() && j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
  }
};

class DirectProductEngine : public CompositeEngine {
 public:
  explicit DirectProductEngine(std::vector<std::unique_ptr<GroupEngine>> factors)
      : CompositeEngine(std::move(factors)) {}

  std::string identity() const override {
    std::string out;
    for (const auto& f : factors_) {
      std::string id = f->identity();
      append_u32(out, static_cast<std::uint32_t>(id.size()));
      out += id;
    }
    return out;
  }

  std::optional<std::string> apply(const std::string& key, int letter) const override {
    int target = owner_[letter];
    std::string out;
    const char* p = key.data();
    for (size_t f = 0; f < factors_.size(); ++f) {
      std::uint32_t len = read_u32(p);
      p += 4;
      std::string part(p, len);
      p += len;
      if (static_cast<int>(f) == target)
        part = *factors_[f]->apply(part, local_[letter]);
      append_u32(out, static_cast<std::uint32_t>(part.size()));
      out += part;
    }
    return out;
  }

  bool transitive() const override { return true; }

  std::vector<std::int64_t> sphere_sizes(int radius) const override {
    std::vector<std::int64_t> s(radius + 1, 0);
    s[0] = 1;
    for (const auto& f : factors_) s = convolve(s, f->sphere_sizes(radius));
    return s;
  }
};

class FreeProductEngine : public CompositeEngine {
 public:
  explicit FreeProductEngine(std::vector<std::unique_ptr<GroupEngine>> factors)
      : CompositeEngine(std::move(factors)) {}

  std::string identity() const override { return {}; }

  std::optional<std::string> apply(const std::string& key, int letter) const override {
    // key = alternating syllables (factor, len, bytes); the last syllable
    // absorbs the letter when it belongs to the same factor.
    int target = owner_[letter];
    size_t last_off = 0;
    int last_factor = -1;
    std::uint32_t last_len = 0;
    for (size_t off = 0; off < key.size();) {
      last_off = off;
      last_factor = static_cast<unsigned char>(key[off]);
      last_len = read_u32(key.data() + off + 1);
      off += 5 + last_len;
    }
    if (last_factor == target) {
      std::string syl(key.data() + last_off + 5, last_len);
      std::string next = *factors_[target]->apply(syl, local_[letter]);
      std::string out = key.substr(0, last_off);
      if (next != factors_[target]->identity()) {
        out.push_back(static_cast<char>(target));
        append_u32(out, static_cast<std::uint32_t>(next.size()));
        out += next;
      }
      return out;
    }
    std::string syl = *factors_[target]->apply(factors_[target]->identity(), local_[letter]);
    std::string out = key;
    out.push_back(static_cast<char>(target));
    append_u32(out, static_cast<std::uint32_t>(syl.size()));
    out += syl;
    return out;
  }

  bool transitive() const override { return true; }

  std::vector<std::int64_t> sphere_sizes(int radius) const override {
    size_t m = factors_.size();
    std::vector<std::vector<std::int64_t>> fs;
    fs.reserve(m);
    for (const auto& f : factors_) fs.push_back(f->sphere_sizes(radius));
    // dp[n][f] = elements of length n >= 1 whose last syllable lies in f
    std::vector<std::vector<std::int64_t>> dp(radius + 1,
                                              std::vector<std::int64_t>(m, 0));
    for (int n = 1; n <= radius; ++n)
      for (size_t f = 0; f < m; ++f)
        for (int len = 1; len <= n; ++len) {
          if (fs[f][len] == 0) continue;
          std::int64_t prefixes = 0;
          if (n - len == 0) {
            prefixes = 1;
          } else {
            for (size_t g = 0; g < m; ++g)
              if (g != f) prefixes += dp[n - len][g];
          }
          dp[n][f] += fs[f][len] * prefixes;
        }
    std::vector<std::int64_t> s(radius + 1, 0);
    s[0] = 1;
    for (int n = 1; n <= radius; ++n)
      for (size_t f = 0; f < m; ++f) s[n] += dp[n][f];
    return s;
  }
};

class WedgeEngine : public GroupEngine {
 public:
  explicit WedgeEngine(std::vector<int> cycles) : cycles_(std::move(cycles)) {
    std::vector<std::string> names;
    for (size_t j = 0; j < cycles_.size(); ++j)
      names.push_back("t" + std::to_string(j + 1));
    letters_ = letters_for_names(names);
  }

  std::string identity() const override { return {}; }

  std::optional<std::string> apply(const std::string& key, int letter) const override {
    int cyc = letter / 2;
    int step = (letter % 2 == 0) ? 1 : -1;
    int len = cycles_[cyc];
    if (key.empty()) {
      int pos = (step == 1) ? 1 : len - 1;
      return encode(cyc, pos);
    }
    int at_cyc = static_cast<unsigned char>(key[0]);
    if (at_cyc != cyc) return std::nullopt;  // no such edge off this cycle
    int pos = static_cast<int>(read_u32(key.data() + 1)) + step;
    if (pos == 0 || pos == len) return identity();
    return encode(cyc, pos);
  }

  bool transitive() const override { return cycles_.size() == 1; }

  std::vector<std::int64_t> sphere_sizes(int radius) const override {
    std::vector<std::int64_t> s(radius + 1, 0);
    s[0] = 1;
    for (int n = 1; n <= radius; ++n)
      for (int len : cycles_) {
        if (2 * n < len)
          s[n] += 2;
        else if (2 * n == len)
          s[n] += 1;
      }
    return s;
  }

 private:
  std::string encode(int cyc, int pos) const {
    std::string out;
    out.push_back(static_cast<char>(cyc));
    append_u32(out, static_cast<std::uint32_t>(pos));
    return out;
  }

  std::vector<int> cycles_;
};

}  // namespace

// ---------------------------------------------------------------------------

GroupSpec GroupSpec::free_group(std::vector<std::string> gens) {
  GroupSpec s;
  s.kind = Kind::Free;
  s.generators = std::move(gens);
  return s;
}

GroupSpec GroupSpec::free_abelian(std::vector<std::string> gens) {
  GroupSpec s;
  s.kind = Kind::Abelian;
  s.generators = std::move(gens);
  return s;
}

GroupSpec GroupSpec::direct_product(std::vector<GroupSpec> fs) {
  GroupSpec s;
  s.kind = Kind::DirectProduct;
  s.factors = std::move(fs);
  return s;
}

GroupSpec GroupSpec::free_product(std::vector<GroupSpec> fs) {
  GroupSpec s;
  s.kind = Kind::FreeProduct;
  s.factors = std::move(fs);
  return s;
}

GroupSpec GroupSpec::wedge_of_cycles(std::vector<int> lengths) {
  GroupSpec s;
  s.kind = Kind::WedgeOfCycles;
  s.cycles = std::move(lengths);
  return s;
}

void GroupSpec::validate() const {
  switch (kind) {
    case Kind::Free:
    case Kind::Abelian:
      if (generators.empty()) throw SpecError("group kind needs at least one generator");
      for (const auto& g : generators) {
        if (g.empty()) throw SpecError("empty generator name");
        if (g.find_first_of(" \t,;()=") != std::string::npos ||
            g.find('^') != std::string::npos || g.find(kInverseMark) != std::string::npos)
          throw SpecError("bad generator name '" + g + "'");
      }
      break;
    case Kind::DirectProduct:
    case Kind::FreeProduct:
      if (factors.size() < 2) throw SpecError("product needs at least two factors");
      for (const auto& f : factors) {
        if (!f.is_group_kind()) throw SpecError("fixture graphs cannot be product factors");
        f.validate();
      }
      break;
    case Kind::WedgeOfCycles:
      if (cycles.empty()) throw SpecError("wedge fixture needs at least one cycle");
      for (int c : cycles)
        if (c < 3) throw SpecError("cycle lengths must be >= 3");
      break;
  }
  std::vector<std::string> names;
  collect_generator_names(*this, names);
  std::set<std::string> uniq(names.begin(), names.end());
  if (uniq.size() != names.size())
    throw SpecError("generator names must be distinct across all factors");
}

std::string GroupSpec::to_inline() const {
  switch (kind) {
    case Kind::Free:
      return "free(" + join(generators, ",") + ")";
    case Kind::Abelian:
      return "abelian(" + join(generators, ",") + ")";
    case Kind::DirectProduct:
    case Kind::FreeProduct: {
      std::vector<std::string> parts;
      for (const auto& f : factors) parts.push_back(f.to_inline());
      return (kind == Kind::DirectProduct ? "product(" : "freeproduct(") +
             join(parts, ";") + ")";
    }
    case Kind::WedgeOfCycles: {
      std::vector<std::string> parts;
      for (int c : cycles) parts.push_back(std::to_string(c));
      return "wedge(" + join(parts, ",") + ")";
    }
  }
  return {};
}

GroupSpec parse_group_inline(const std::string& text) {
  std::string t = trim(text);
  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')')
    throw SpecError("bad group expression '" + t + "'");
  std::string head = trim(t.substr(0, open));
  std::string body = t.substr(open + 1, t.size() - open - 2);
  GroupSpec spec;
  if (head == "free") {
    spec = GroupSpec::free_group(split_clean(body, ','));
  } else if (head == "abelian") {
    spec = GroupSpec::free_abelian(split_clean(body, ','));
  } else if (head == "product" || head == "freeproduct") {
    std::vector<GroupSpec> fs;
    for (const auto& part : split_top_level(body, ';')) fs.push_back(parse_group_inline(part));
    spec = (head == "product") ? GroupSpec::direct_product(std::move(fs))
                               : GroupSpec::free_product(std::move(fs));
  } else if (head == "wedge") {
    std::vector<int> cs;
    for (const auto& part : split_clean(body, ','))
      cs.push_back(std::stoi(part));
    spec = GroupSpec::wedge_of_cycles(std::move(cs));
  } else {
    throw SpecError("unknown group kind '" + head + "'");
  }
  spec.validate();
  return spec;
}

GroupSpec parse_group_file_text(const std::string& text) {
  std::string kind, generators, factors, cycles;
  for (const auto& raw : split(text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError("bad spec line '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "kind")
      kind = val;
    else if (key == "generators")
      generators = val;
    else if (key == "factors")
      factors = val;
    else if (key == "cycles")
      cycles = val;
    else
      throw SpecError("unknown spec key '" + key + "'");
  }
  auto strip_brackets = [](std::string s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']')
      s = trim(s.substr(1, s.size() - 2));
    return s;
  };
  GroupSpec spec;
  if (kind == "free") {
    spec = GroupSpec::free_group(split_clean(generators, ','));
  } else if (kind == "abelian") {
    spec = GroupSpec::free_abelian(split_clean(generators, ','));
  } else if (kind == "product" || kind == "freeproduct") {
    std::vector<GroupSpec> fs;
    for (const auto& part : split_top_level(strip_brackets(factors), ';'))
      fs.push_back(parse_group_inline(part));
    spec = (kind == "product") ? GroupSpec::direct_product(std::move(fs))
                               : GroupSpec::free_product(std::move(fs));
  } else if (kind == "graph") {
    std::vector<int> cs;
    for (const auto& part : split_clean(strip_brackets(cycles), ','))
      cs.push_back(std::stoi(part));
    spec = GroupSpec::wedge_of_cycles(std::move(cs));
  } else {
    throw SpecError("unknown or missing kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

int find_letter(const std::vector<LetterInfo>& letters, const std::string& name) {
  for (size_t i = 0; i < letters.size(); ++i)
    if (letters[i].name == name) return static_cast<int>(i);
  // ASCII fallback g^-1 for g⁻¹
  auto caret = name.rfind("^-1");
  if (caret != std::string::npos && caret == name.size() - 3) {
    std::string base = name.substr(0, caret);
    for (size_t i = 0; i < letters.size(); ++i)
      if (letters[i].name == base + kInverseMark) return static_cast<int>(i);
  }
  return -1;
}

std::unique_ptr<GroupEngine> make_engine(const GroupSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GroupSpec::Kind::Free:
      return std::make_unique<FreeEngine>(spec.generators);
    case GroupSpec::Kind::Abelian:
      return std::make_unique<AbelianEngine>(spec.generators);
    case GroupSpec::Kind::DirectProduct:
    case GroupSpec::Kind::FreeProduct: {
      std::vector<std::unique_ptr<GroupEngine>> fs;
      for (const auto& f : spec.factors) fs.push_back(make_engine(f));
      if (spec.kind == GroupSpec::Kind::DirectProduct)
        return std::make_unique<DirectProductEngine>(std::move(fs));
      return std::make_unique<FreeProductEngine>(std::move(fs));
    }
    case GroupSpec::Kind::WedgeOfCycles:
      return std::make_unique<WedgeEngine>(spec.cycles);
  }
  throw SpecError("unreachable");
}

}  // namespace morselab
