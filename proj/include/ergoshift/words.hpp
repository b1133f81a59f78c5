#pragma once

// Reduced words in the free group on generators {g_i : i in Z}, and the
// automorphisms induced by bijections of the generator indices.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ergoshift {

/// Generator index. 128 bits so that shift exponents from geometric
/// subsequences (2^63 and beyond) stay exact.
using Index = __int128;

std::string index_to_string(Index value);
Index parse_index(std::string_view text);

struct Letter {
  Index index = 0;
  int sign = 1;  // +1 for g_i, -1 for g_i^{-1}

  Letter inverse() const { return {index, -sign}; }

  // Orders by index, then g_i^{-1} before g_i.
  friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
    if (a.index != b.index) return a.index < b.index ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.sign <=> b.sign;
  }
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A reduced word. Every constructor path goes through free reduction, so
/// no value of this type ever holds an adjacent cancelling pair.
class Word {
 public:
  Word() = default;  // the identity e

  static Word generator(Index index, int sign = 1);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  friend bool operator==(const Word&, const Word&) = default;
  // Shortlex: shorter words first, then lexicographic on letters.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  friend Word reduce(std::span<const Letter> letters);
  explicit Word(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}

  std::vector<Letter> letters_;
};

Word reduce(std::span<const Letter> letters);
Word multiply(const Word& lhs, const Word& rhs);
Word invert(const Word& word);

/// Text form: `e`, or letters `g<i>` / `g<i>'` joined by `.`.
std::string to_string(const Word& word);
/// Parses the text form; the result is reduced.
Word parse_word(std::string_view text);

struct WordHash {
  std::size_t operator()(const Word& word) const noexcept;
};

/// Bijection of generator indices whose nontrivial orbits are all infinite.
class GeneratorMap {
 public:
  /// i -> i + step.
  static GeneratorMap pure_shift(Index step);
  /// Indices in `fixed` stay put; the rest are relabelled order-isomorphically
  /// onto Z and translated by one, forming a single infinite orbit.
  static GeneratorMap anchored_shift(std::set<Index> fixed);
  /// Finite table plus identity elsewhere. Throws DomainError unless the table
  /// is a bijection of its key set without cycles of length >= 2.
  static GeneratorMap explicit_table(std::map<Index, Index> table);
  static GeneratorMap identity() { return explicit_table({}); }
  /// `pure:<step>`, `anchored:<i>,<j>,...` or `identity`.
  static GeneratorMap parse(std::string_view text);

  Index apply(Index index) const { return apply_power(index, 1); }
  /// sigma^k(index) for any integer k.
  Index apply_power(Index index, Index k) const;
  bool fixes(Index index) const;
  /// The step of a pure shift; empty for the other kinds.
  std::optional<Index> shift_step() const;

  std::string describe() const;
  /// Text accepted by parse. Explicit tables are identities and print as such.
  std::string spec() const;

 private:
  struct PureShift {
    Index step;
  };
  struct AnchoredShift {
    std::vector<Index> fixed;  // sorted ascending
  };
  struct Explicit {
    std::map<Index, Index> table;
  };
  using Kind = std::variant<PureShift, AnchoredShift, Explicit>;

  explicit GeneratorMap(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

enum class OrbitClass { fixed, moving };

Word apply_generator_map(const GeneratorMap& map, const Word& word);
Word apply_generator_map_power(const GeneratorMap& map, const Word& word, Index k);
OrbitClass orbit_class(const GeneratorMap& map, const Word& word);

/// The letterwise index negation g_k -> g_{-k}.
Word reverse_indices(const Word& word);

}  // namespace ergoshift
