#include "ergoshift/algebra.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

#include "ergoshift/error.hpp"
#include "text.hpp"

namespace ergoshift {

AlgebraElement AlgebraElement::basis(const Word& word, Complex coefficient) {
  AlgebraElement out;
  out.accumulate(word, coefficient);
  return out;
}

AlgebraElement AlgebraElement::from_terms(Terms terms) {
  std::erase_if(terms, [](const auto& term) { return std::abs(term.second) == 0.0; });
  AlgebraElement out;
  out.terms_ = std::move(terms);
  return out;
}

Complex AlgebraElement::coefficient(const Word& word) const {
  const auto it = terms_.find(word);
  return it == terms_.end() ? Complex{} : it->second;
}

std::size_t AlgebraElement::max_length() const {
  // Shortlex order puts the longest word last.
  return terms_.empty() ? 0 : terms_.rbegin()->first.length();
}

void AlgebraElement::accumulate(const Word& word, Complex coefficient) {
  if (std::abs(coefficient) == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(word, coefficient);
  if (inserted) return;
  it->second += coefficient;
  if (std::abs(it->second) == 0.0) terms_.erase(it);
}

AlgebraElement add(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement out = x;
  for (const auto& [word, c] : y.terms()) out.accumulate(word, c);
  return out;
}

AlgebraElement subtract(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement out = x;
  for (const auto& [word, c] : y.terms()) out.accumulate(word, -c);
  return out;
}

AlgebraElement scale(Complex c, const AlgebraElement& x) {
  AlgebraElement::Terms terms;
  for (const auto& [word, coefficient] : x.terms()) terms.emplace(word, c * coefficient);
  return AlgebraElement::from_terms(std::move(terms));
}

AlgebraElement adjoint(const AlgebraElement& x) {
  AlgebraElement::Terms terms;
  for (const auto& [word, c] : x.terms()) terms.emplace(invert(word), std::conj(c));
  return AlgebraElement::from_terms(std::move(terms));
}

AlgebraElement convolve(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement out;
  for (const auto& [u, a] : x.terms())
    for (const auto& [v, b] : y.terms()) out.accumulate(multiply(u, v), a * b);
  return out;
}

double l2_norm(const AlgebraElement& x) {
  double sum = 0.0;
  for (const auto& [word, c] : x.terms()) sum += std::norm(c);
  return std::sqrt(sum);
}

Complex trace(const AlgebraElement& x) { return x.coefficient(Word()); }

std::set<Index> generator_support(const AlgebraElement& x) {
  std::set<Index> out;
  for (const auto& [word, c] : x.terms())
    for (const Letter& letter : word.letters()) out.insert(letter.index);
  return out;
}

AlgebraElement shift(const GeneratorMap& sigma, const AlgebraElement& x) { return shift_power(sigma, x, 1); }

AlgebraElement shift_power(const GeneratorMap& sigma, const AlgebraElement& x, Index k) {
  AlgebraElement::Terms terms;
  for (const auto& [word, c] : x.terms()) terms.emplace(apply_generator_map_power(sigma, word, k), c);
  return AlgebraElement::from_terms(std::move(terms));
}

AlgebraElement conditional_expectation(const GeneratorMap& sigma, const AlgebraElement& x) {
  AlgebraElement::Terms terms;
  for (const auto& [word, c] : x.terms())
    if (orbit_class(sigma, word) == OrbitClass::fixed) terms.emplace(word, c);
  return AlgebraElement::from_terms(std::move(terms));
}

AlgebraElement time_reversal(const AlgebraElement& x) {
  AlgebraElement::Terms terms;
  for (const auto& [word, c] : x.terms()) terms.emplace(reverse_indices(word), c);
  return AlgebraElement::from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------
// Subsequences

SubsequenceSpec SubsequenceSpec::arithmetic(Index start, Index step) {
  if (start < 0) throw DomainError("arithmetic subsequence needs start >= 0");
  if (step < 1) throw DomainError("arithmetic subsequence needs step >= 1");
  return SubsequenceSpec(Arithmetic{start, step});
}

SubsequenceSpec SubsequenceSpec::geometric(Index base) {
  if (base < 2) throw DomainError("geometric subsequence needs base >= 2");
  return SubsequenceSpec(Geometric{base});
}

SubsequenceSpec SubsequenceSpec::explicit_list(std::vector<Index> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] < 0) throw DomainError("subsequence terms must be nonnegative");
    if (i > 0 && terms[i] <= terms[i - 1]) throw DomainError("subsequence terms must be strictly increasing");
  }
  return SubsequenceSpec(Explicit{std::move(terms)});
}

SubsequenceSpec SubsequenceSpec::random(std::uint64_t seed, double mean_gap) {
  if (!(mean_gap >= 1.0) || !std::isfinite(mean_gap)) throw DomainError("random subsequence needs mean gap >= 1");
  return SubsequenceSpec(Random{seed, mean_gap});
}

std::vector<Index> SubsequenceSpec::terms(std::size_t n) const {
  std::vector<Index> out;
  out.reserve(n);
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Arithmetic>) {
          Index k = kind.start;
          for (std::size_t j = 0; j < n; ++j) {
            out.push_back(k);
            if (j + 1 < n && __builtin_add_overflow(k, kind.step, &k))
              throw DomainError("arithmetic subsequence overflows");
          }
        } else if constexpr (std::is_same_v<T, Geometric>) {
          Index k = 1;
          for (std::size_t j = 0; j < n; ++j) {
            out.push_back(k);
            if (j + 1 < n && __builtin_mul_overflow(k, kind.base, &k))
              throw DomainError("geometric subsequence overflows after " + std::to_string(j + 1) + " terms");
          }
        } else if constexpr (std::is_same_v<T, Explicit>) {
          if (n > kind.terms.size())
            throw DomainError("explicit subsequence has only " + std::to_string(kind.terms.size()) + " terms");
          out.assign(kind.terms.begin(), kind.terms.begin() + static_cast<std::ptrdiff_t>(n));
        } else {
          std::mt19937_64 rng(kind.seed);
          std::geometric_distribution<long long> extra(1.0 / kind.mean_gap);
          Index k = 0;
          for (std::size_t j = 0; j < n; ++j) {
            k += 1 + extra(rng);
            out.push_back(k);
          }
        }
      },
      kind_);
  return out;
}

double SubsequenceSpec::density_estimate(std::size_t n) const {
  if (n == 0) return 0.0;
  const auto ks = terms(n);
  return static_cast<double>(n) / (static_cast<double>(ks.back()) + 1.0);
}

using detail::format_double;
using detail::parse_double;
using detail::split;
using detail::trim_view;

SubsequenceSpec SubsequenceSpec::parse(std::string_view text) {
  text = trim_view(text);
  const std::size_t colon = text.find(':');
  if (colon == text.npos) throw ParseError("subsequence spec needs a kind prefix: '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const auto args = split(text.substr(colon + 1), ',');
  try {
    if (kind == "arith") {
      if (args.size() != 2) throw ParseError("arith takes <start>,<step>");
      return arithmetic(parse_index(args[0]), parse_index(args[1]));
    }
    if (kind == "geom") {
      if (args.size() != 1) throw ParseError("geom takes <base>");
      return geometric(parse_index(args[0]));
    }
    if (kind == "list") {
      std::vector<Index> terms;
      for (auto a : args) terms.push_back(parse_index(a));
      return explicit_list(std::move(terms));
    }
    if (kind == "random") {
      std::uint64_t seed = 0;
      double gap = 3.0;
      bool have_seed = false;
      for (auto a : args) {
        const std::size_t eq = a.find('=');
        if (eq == a.npos) throw ParseError("random takes seed=<s>[,gap=<g>]");
        const auto key = trim_view(a.substr(0, eq));
        const auto value = trim_view(a.substr(eq + 1));
        if (key == "seed") {
          seed = detail::parse_integer<std::uint64_t>(value);
          have_seed = true;
        } else if (key == "gap") {
          gap = parse_double(value);
        } else {
          throw ParseError("unknown random subsequence key '" + std::string(key) + "'");
        }
      }
      if (!have_seed) throw ParseError("random subsequence requires seed=<s>");
      return random(seed, gap);
    }
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown subsequence kind '" + std::string(kind) + "'");
}

std::string SubsequenceSpec::to_string() const {
  return std::visit(
      [](const auto& kind) -> std::string {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Arithmetic>) {
          return "arith:" + index_to_string(kind.start) + "," + index_to_string(kind.step);
        } else if constexpr (std::is_same_v<T, Geometric>) {
          return "geom:" + index_to_string(kind.base);
        } else if constexpr (std::is_same_v<T, Explicit>) {
          std::string out = "list:";
          for (std::size_t i = 0; i < kind.terms.size(); ++i) {
            if (i) out += ",";
            out += index_to_string(kind.terms[i]);
          }
          return out;
        } else {
          return "random:seed=" + std::to_string(kind.seed) + ",gap=" + format_double(kind.mean_gap);
        }
      },
      kind_);
}

AlgebraElement cesaro_mean(const GeneratorMap& sigma, const AlgebraElement& x, const SubsequenceSpec& seq,
                           std::size_t n) {
  if (n == 0) throw DomainError("Cesaro mean needs n >= 1");
  const double weight = 1.0 / static_cast<double>(n);
  AlgebraElement out;
  for (Index k : seq.terms(n))
    for (const auto& [word, c] : x.terms()) out.accumulate(apply_generator_map_power(sigma, word, k), weight * c);
  return out;
}

// ---------------------------------------------------------------------------
// Text form

std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  if (c.real() == 0.0) return format_double(c.imag()) + "i";
  std::string im = format_double(c.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_double(c.real()) + im + "i";
}

std::string to_string(const AlgebraElement& x) {
  if (x.is_zero()) return "0*e";
  std::string out;
  bool first = true;
  for (const auto& [word, c] : x.terms()) {
    if (!first) out += " + ";
    first = false;
    out += format_complex(c) + "*" + to_string(word);
  }
  return out;
}

namespace {

class ElementParser {
 public:
  explicit ElementParser(std::string_view text) : s_(text) {}

  Complex parse_number() {
    skip_space();
    const double sign = peek() == '-' && !starts_number(pos_) ? -1.0 : 1.0;
    if (sign < 0.0 || (peek() == '+' && !starts_number(pos_))) ++pos_;
    Complex c;
    if (peek() == 'i') {
      ++pos_;
      c = {0.0, 1.0};
    } else {
      c = parse_coefficient();
    }
    skip_space();
    if (pos_ != s_.size()) fail("trailing characters after number");
    return sign * c;
  }

  AlgebraElement parse() {
    AlgebraElement out;
    skip_space();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      // A leading sign only counts as an operator when no coefficient follows.
      if (!starts_number(pos_)) {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      }
    }
    parse_term(out, sign);
    while (true) {
      skip_space();
      if (pos_ == s_.size()) break;
      const char op = s_[pos_];
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      parse_term(out, op == '-' ? -1.0 : 1.0);
    }
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  bool starts_number(std::size_t at) const {
    if (at < s_.size() && (s_[at] == '-' || s_[at] == '+')) ++at;
    return at < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[at])) || s_[at] == '.');
  }

  bool read_real(std::size_t& at, double& value) const {
    std::size_t start = at;
    if (start < s_.size() && s_[start] == '+') ++start;
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + s_.size(), value);
    if (ec != std::errc()) return false;
    at = static_cast<std::size_t>(ptr - s_.data());
    return true;
  }

  Complex parse_coefficient() {
    double first = 0.0;
    if (!read_real(pos_, first)) fail("expected a coefficient");
    if (peek() == 'i') {
      ++pos_;
      return {0.0, first};
    }
    if (peek() == '+' || peek() == '-') {
      std::size_t at = pos_;
      double second = 0.0;
      if (read_real(at, second) && at < s_.size() && s_[at] == 'i') {
        pos_ = at + 1;
        return {first, second};
      }
    }
    return {first, 0.0};
  }

  Word parse_word_token() {
    const std::size_t start = pos_;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '+' || c == '*') break;
      if (c == '-' && (pos_ == start || s_[pos_ - 1] != 'g')) break;
      ++pos_;
    }
    if (pos_ == start) fail("expected a word");
    return parse_word(s_.substr(start, pos_ - start));
  }

  void parse_term(AlgebraElement& out, double sign) {
    skip_space();
    Complex coefficient = 1.0;
    if (peek() != 'e' && peek() != 'g') {
      coefficient = parse_coefficient();
      skip_space();
      if (peek() != '*') fail("expected '*' after coefficient");
      ++pos_;
      skip_space();
    }
    out.accumulate(parse_word_token(), sign * coefficient);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

AlgebraElement parse_element(std::string_view text) { return ElementParser(text).parse(); }

Complex parse_complex(std::string_view text) { return ElementParser(text).parse_number(); }

}  // namespace ergoshift
