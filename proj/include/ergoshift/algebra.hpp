#pragma once

// The group algebra C[F_inf]: finitely supported coefficient functions on
// reduced words, dense in the reduced group C*-algebra.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ergoshift/words.hpp"

namespace ergoshift {

using Complex = std::complex<double>;

/// Finite linear combination of group elements. Stored coefficients are never
/// exactly zero; iteration is in shortlex word order, which fixes the
/// summation order of every reduction below.
class AlgebraElement {
 public:
  using Terms = std::map<Word, Complex>;

  AlgebraElement() = default;  // zero

  static AlgebraElement unit() { return basis(Word()); }
  /// c * lambda_w.
  static AlgebraElement basis(const Word& word, Complex coefficient = 1.0);
  static AlgebraElement from_terms(Terms terms);

  const Terms& terms() const { return terms_; }
  Complex coefficient(const Word& word) const;
  std::size_t support_size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Largest word length in the support (0 for the zero element).
  std::size_t max_length() const;

  void accumulate(const Word& word, Complex coefficient);

  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

 private:
  Terms terms_;
};

AlgebraElement add(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement subtract(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement scale(Complex c, const AlgebraElement& x);
AlgebraElement adjoint(const AlgebraElement& x);
/// Group-ring product.
AlgebraElement convolve(const AlgebraElement& x, const AlgebraElement& y);

inline AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) { return add(x, y); }
inline AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) { return subtract(x, y); }
inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) { return convolve(x, y); }
inline AlgebraElement operator*(Complex c, const AlgebraElement& x) { return scale(c, x); }

double l2_norm(const AlgebraElement& x);
/// Canonical trace: the coefficient at e.
Complex trace(const AlgebraElement& x);

/// Generator indices appearing anywhere in the support.
std::set<Index> generator_support(const AlgebraElement& x);

/// The automorphism alpha induced by sigma, and its integer powers.
AlgebraElement shift(const GeneratorMap& sigma, const AlgebraElement& x);
AlgebraElement shift_power(const GeneratorMap& sigma, const AlgebraElement& x, Index k);

/// Restriction to the words fixed by sigma: the expectation onto the
/// fixed-point subalgebra.
AlgebraElement conditional_expectation(const GeneratorMap& sigma, const AlgebraElement& x);

/// theta: lambda_{g_k} -> lambda_{g_{-k}}.
AlgebraElement time_reversal(const AlgebraElement& x);

/// Strictly increasing sequence k_1 < k_2 < ... of nonnegative integers.
class SubsequenceSpec {
 public:
  static SubsequenceSpec arithmetic(Index start, Index step);
  /// k_j = base^(j-1).
  static SubsequenceSpec geometric(Index base);
  static SubsequenceSpec explicit_list(std::vector<Index> terms);
  /// Partial sums of i.i.d. gaps >= 1 with the given mean, drawn from `seed`.
  static SubsequenceSpec random(std::uint64_t seed, double mean_gap = 3.0);

  /// Forms: `arith:<start>,<step>`, `geom:<base>`, `list:<k1>,<k2>,...`,
  /// `random:seed=<s>[,gap=<g>]`.
  static SubsequenceSpec parse(std::string_view text);
  std::string to_string() const;

  /// First n terms. Throws DomainError on overflow or an exhausted list.
  std::vector<Index> terms(std::size_t n) const;

  /// n / (k_n + 1), the fraction of [0, k_n] the first n terms occupy.
  double density_estimate(std::size_t n) const;

  friend bool operator==(const SubsequenceSpec&, const SubsequenceSpec&) = default;

 private:
  struct Arithmetic {
    Index start;
    Index step;
    friend bool operator==(const Arithmetic&, const Arithmetic&) = default;
  };
  struct Geometric {
    Index base;
    friend bool operator==(const Geometric&, const Geometric&) = default;
  };
  struct Explicit {
    std::vector<Index> terms;
    friend bool operator==(const Explicit&, const Explicit&) = default;
  };
  struct Random {
    std::uint64_t seed;
    double mean_gap;
    friend bool operator==(const Random&, const Random&) = default;
  };
  using Kind = std::variant<Arithmetic, Geometric, Explicit, Random>;

  explicit SubsequenceSpec(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

/// (1/n) * sum_{j=1..n} alpha^{k_j}(x).
AlgebraElement cesaro_mean(const GeneratorMap& sigma, const AlgebraElement& x,
                           const SubsequenceSpec& seq, std::size_t n);

/// Complex literal: `1.5`, `-2`, `0.5i`, `1.5+0.5i`.
std::string format_complex(Complex c);
/// Inverse of format_complex; also accepts `i` and `-i`.
Complex parse_complex(std::string_view text);
/// Expression syntax `coeff*word + coeff*word - word ...`.
std::string to_string(const AlgebraElement& x);
AlgebraElement parse_element(std::string_view text);

}  // namespace ergoshift
