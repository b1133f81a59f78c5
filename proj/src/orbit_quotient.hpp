#pragma once

// Quotient of a Cayley ball by all permutations of its generators.
//
// When x is invariant under every permutation of its n generators, lambda(x)
// commutes with the unitary action of S_n on l2, and so does the ball
// truncation. On the span of the normalized orbit indicators
// e_O = |O|^{-1/2} sum_{w in O} delta_w the truncated operator has entries
//   <e_O', T e_O> = sqrt(|O| / |O'|) * sum_u x(u) [u * rep(O) in O'],
// where |O| = n (n-1) ... (n-m+1) for an orbit whose words use m generators.
// Orbit representatives are words over labels 0..m-1 in order of first
// occurrence, one byte per letter (label * 2 + inverse bit).

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ergoshift/algebra.hpp"

namespace ergoshift::detail {

struct Pattern {
  std::string code;  // canonical word over labels 0..q-1
  int labels = 0;
  double coefficient = 0.0;
};

/// Decomposes x into S_n-orbit patterns over `generators`. Returns nullopt
/// unless x is permutation invariant with nonnegative real coefficients.
std::optional<std::vector<Pattern>> symmetric_patterns(const AlgebraElement& x,
                                                       const std::vector<Index>& generators);

class OrbitBall {
 public:
  OrbitBall(std::size_t generator_count, int radius, std::size_t cap);

  std::size_t size() const { return codes_.size(); }
  int radius() const { return radius_; }
  std::size_t generator_count() const { return n_; }
  const std::string& code(std::size_t i) const { return codes_[i]; }
  int labels(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> position(const std::string& code) const;

 private:
  std::size_t n_;
  int radius_;
  std::vector<std::string> codes_;
  std::vector<int> labels_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

/// Sparse quotient operator, column-compressed by source orbit.
class OrbitOperator {
 public:
  OrbitOperator(std::span<const Pattern> patterns, const OrbitBall& ball);

  std::size_t dimension() const { return dimension_; }
  void apply(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  void apply_adjoint(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

 private:
  std::size_t dimension_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
  std::vector<double> weights_;
};

}  // namespace ergoshift::detail
