#include "ergoshift/words.hpp"

#include <algorithm>
#include <cstdint>

#include "ergoshift/error.hpp"

namespace ergoshift {

namespace {

Index checked_add(Index a, Index b) {
  Index out;
  if (__builtin_add_overflow(a, b, &out)) throw DomainError("generator index overflow");
  return out;
}

Index checked_mul(Index a, Index b) {
  Index out;
  if (__builtin_mul_overflow(a, b, &out)) throw DomainError("generator index overflow");
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Order-isomorphism from Z \ fixed onto Z used by the anchored shift.
Index anchored_rank(const std::vector<Index>& fixed, Index i) {
  Index below = 0;
  if (i >= 1) {
    for (Index f : fixed)
      if (f >= 1 && f < i) ++below;
    return i - below;
  }
  for (Index f : fixed)
    if (f > i && f <= 0) ++below;
  return i + below;
}

Index anchored_unrank(const std::vector<Index>& fixed, Index j) {
  Index i = j;
  if (j >= 1) {
    for (Index f : fixed)
      if (f >= 1 && f <= i) ++i;
    return i;
  }
  for (auto it = fixed.rbegin(); it != fixed.rend(); ++it)
    if (*it <= 0 && *it >= i) --i;
  return i;
}

}  // namespace

std::string index_to_string(Index value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  // Work with negative magnitudes so INT128_MIN does not overflow.
  Index v = negative ? value : -value;
  std::string digits;
  while (v != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
    v /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Index parse_index(std::string_view text) {
  text = trim(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw ParseError("expected an integer");
  Index value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw ParseError("invalid integer '" + std::string(text) + "'");
    Index digit = c - '0';
    if (__builtin_mul_overflow(value, Index{10}, &value) ||
        __builtin_sub_overflow(value, digit, &value))
      throw ParseError("integer out of range");
  }
  if (!negative) {
    if (__builtin_mul_overflow(value, Index{-1}, &value)) throw ParseError("integer out of range");
  }
  return value;
}

Word Word::generator(Index index, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("letter sign must be +1 or -1");
  return Word({Letter{index, sign}});
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.length() != b.length()) return a.length() <=> b.length();
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                b.letters_.begin(), b.letters_.end());
}

Word reduce(std::span<const Letter> letters) {
  std::vector<Letter> stack;
  stack.reserve(letters.size());
  for (const Letter& letter : letters) {
    if (letter.sign != 1 && letter.sign != -1) throw DomainError("letter sign must be +1 or -1");
    if (!stack.empty() && stack.back() == letter.inverse()) {
      stack.pop_back();
    } else {
      stack.push_back(letter);
    }
  }
  return Word(std::move(stack));
}

Word multiply(const Word& lhs, const Word& rhs) {
  const auto a = lhs.letters();
  const auto b = rhs.letters();
  std::size_t cancel = 0;
  while (cancel < a.size() && cancel < b.size() &&
         a[a.size() - 1 - cancel] == b[cancel].inverse())
    ++cancel;
  std::vector<Letter> out;
  out.reserve(a.size() + b.size() - 2 * cancel);
  out.insert(out.end(), a.begin(), a.end() - static_cast<std::ptrdiff_t>(cancel));
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(cancel), b.end());
  return reduce(out);
}

Word invert(const Word& word) {
  std::vector<Letter> out;
  out.reserve(word.length());
  const auto letters = word.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.push_back(it->inverse());
  return reduce(out);
}

std::string to_string(const Word& word) {
  if (word.is_identity()) return "e";
  std::string out;
  bool first = true;
  for (const Letter& letter : word.letters()) {
    if (!first) out.push_back('.');
    first = false;
    out.push_back('g');
    out += index_to_string(letter.index);
    if (letter.sign < 0) out.push_back('\'');
  }
  return out;
}

Word parse_word(std::string_view text) {
  text = trim(text);
  if (text == "e") return Word();
  if (text.empty()) throw ParseError("empty word");
  std::vector<Letter> letters;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = text.find('.', pos);
    std::string_view token = text.substr(pos, dot == std::string_view::npos ? text.npos : dot - pos);
    if (token.size() < 2 || token.front() != 'g')
      throw ParseError("invalid letter '" + std::string(token) + "' in word '" + std::string(text) + "'");
    token.remove_prefix(1);
    int sign = 1;
    if (token.back() == '\'') {
      sign = -1;
      token.remove_suffix(1);
    }
    if (token.empty() || token.find_first_of(" \t") != std::string_view::npos)
      throw ParseError("invalid letter in word '" + std::string(text) + "'");
    letters.push_back(Letter{parse_index(token), sign});
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return reduce(letters);
}

std::size_t WordHash::operator()(const Word& word) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ word.length();
  for (const Letter& letter : word.letters()) {
    const auto bits = static_cast<unsigned __int128>(letter.index);
    const auto lo = static_cast<std::uint64_t>(bits);
    const auto hi = static_cast<std::uint64_t>(bits >> 64);
    for (std::uint64_t part : {lo, hi, static_cast<std::uint64_t>(letter.sign + 1)}) {
      h ^= part + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
  }
  return static_cast<std::size_t>(h);
}

GeneratorMap GeneratorMap::pure_shift(Index step) { return GeneratorMap(PureShift{step}); }

GeneratorMap GeneratorMap::anchored_shift(std::set<Index> fixed) {
  return GeneratorMap(AnchoredShift{std::vector<Index>(fixed.begin(), fixed.end())});
}

GeneratorMap GeneratorMap::explicit_table(std::map<Index, Index> table) {
  std::set<Index> values;
  for (const auto& [from, to] : table) {
    if (!table.contains(to))
      throw DomainError("generator table is not a bijection: g" + index_to_string(to) +
                        " is an image but not a key");
    if (!values.insert(to).second)
      throw DomainError("generator table is not a bijection: g" + index_to_string(to) +
                        " has two preimages");
  }
  // A finite permutation only has finite cycles; any nontrivial one breaks
  // the "singleton or infinite orbit" requirement.
  for (const auto& [from, to] : table) {
    if (from == to) continue;
    std::size_t cycle = 1;
    for (Index i = to; i != from; i = table.at(i)) ++cycle;
    throw DomainError("generator table has a finite cycle of length " + std::to_string(cycle) +
                      " through g" + index_to_string(from));
  }
  return GeneratorMap(Explicit{std::move(table)});
}

Index GeneratorMap::apply_power(Index index, Index k) const {
  return std::visit(
      [&](const auto& kind) -> Index {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, PureShift>) {
          return checked_add(index, checked_mul(kind.step, k));
        } else if constexpr (std::is_same_v<T, AnchoredShift>) {
          if (std::binary_search(kind.fixed.begin(), kind.fixed.end(), index)) return index;
          return anchored_unrank(kind.fixed, checked_add(anchored_rank(kind.fixed, index), k));
        } else {
          // Validated tables are the identity on their keys.
          return index;
        }
      },
      kind_);
}

bool GeneratorMap::fixes(Index index) const { return apply(index) == index; }

std::optional<Index> GeneratorMap::shift_step() const {
  if (const auto* p = std::get_if<PureShift>(&kind_)) return p->step;
  return std::nullopt;
}

GeneratorMap GeneratorMap::parse(std::string_view text) {
  if (text == "identity") return identity();
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto args = colon == text.npos ? std::string_view{} : text.substr(colon + 1);
  try {
    if (kind == "pure" && !args.empty()) return pure_shift(parse_index(args));
    if (kind == "anchored") {
      std::set<Index> fixed;
      for (std::size_t start = 0; start <= args.size();) {
        const auto comma = std::min(args.find(',', start), args.size());
        if (comma > start) fixed.insert(parse_index(args.substr(start, comma - start)));
        start = comma + 1;
      }
      return anchored_shift(std::move(fixed));
    }
  } catch (const DomainError& e) {
    throw ParseError("generator map '" + std::string(text) + "': " + e.what());
  }
  throw ParseError("unknown generator map '" + std::string(text) + "' (expected pure:<step>, anchored:<i>,... or identity)");
}

std::string GeneratorMap::spec() const {
  if (const auto* p = std::get_if<PureShift>(&kind_)) return "pure:" + index_to_string(p->step);
  if (const auto* a = std::get_if<AnchoredShift>(&kind_)) {
    std::string out = "anchored:";
    for (std::size_t i = 0; i < a->fixed.size(); ++i) {
      if (i) out += ",";
      out += index_to_string(a->fixed[i]);
    }
    return out;
  }
  return "identity";
}

std::string GeneratorMap::describe() const {
  return std::visit(
      [](const auto& kind) -> std::string {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, PureShift>) {
          return "pure_shift(" + index_to_string(kind.step) + ")";
        } else if constexpr (std::is_same_v<T, AnchoredShift>) {
          std::string out = "anchored_shift({";
          for (std::size_t i = 0; i < kind.fixed.size(); ++i) {
            if (i) out += ",";
            out += index_to_string(kind.fixed[i]);
          }
          return out + "})";
        } else {
          return "explicit(" + std::to_string(kind.table.size()) + " entries)";
        }
      },
      kind_);
}

Word apply_generator_map(const GeneratorMap& map, const Word& word) {
  return apply_generator_map_power(map, word, 1);
}

Word apply_generator_map_power(const GeneratorMap& map, const Word& word, Index k) {
  std::vector<Letter> out;
  out.reserve(word.length());
  for (const Letter& letter : word.letters()) out.push_back({map.apply_power(letter.index, k), letter.sign});
  return reduce(out);
}

OrbitClass orbit_class(const GeneratorMap& map, const Word& word) {
  for (const Letter& letter : word.letters())
    if (!map.fixes(letter.index)) return OrbitClass::moving;
  return OrbitClass::fixed;
}

Word reverse_indices(const Word& word) {
  std::vector<Letter> out;
  out.reserve(word.length());
  for (const Letter& letter : word.letters()) out.push_back({checked_mul(letter.index, Index{-1}), letter.sign});
  return reduce(out);
}

}  // namespace ergoshift
