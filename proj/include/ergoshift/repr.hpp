#pragma once

// Left regular representation truncated to a Cayley ball, and the norm
// bounds built on it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ergoshift/algebra.hpp"

namespace ergoshift {

inline constexpr std::size_t kDefaultBallCap = 2'000'000;

/// Cap on enumerated ball entries: ERGOSHIFT_BALL_CAP if set, else the default.
std::size_t ball_cap();

/// Closed-form size of the radius-R ball on k generators, or nullopt if it
/// does not fit in 64 bits.
std::optional<std::uint64_t> predicted_ball_size(std::size_t generator_count, int radius);

/// Words of length <= R over a finite generator set, ordered by length and
/// then lexicographically. The radius-R ordering is a prefix of every larger
/// radius, which is what lets power iteration warm-start across radii.
class BallIndex {
 public:
  const std::vector<Index>& generators() const { return generators_; }
  int radius() const { return radius_; }
  std::size_t size() const { return words_.size(); }
  const Word& word(std::size_t position) const { return words_.at(position); }
  std::optional<std::size_t> position(const Word& word) const;
  bool uses_only_ball_generators(const AlgebraElement& x) const;

 private:
  friend BallIndex enumerate_ball(const std::set<Index>& generators, int radius, std::size_t cap);

  std::vector<Index> generators_;
  int radius_ = 0;
  std::vector<Word> words_;
  std::unordered_map<Word, std::size_t, WordHash> lookup_;
};

/// Throws DomainError for an empty generator set or negative radius and
/// ResourceError when the predicted size exceeds `cap`.
BallIndex enumerate_ball(const std::set<Index>& generators, int radius, std::size_t cap = ball_cap());

struct L2Vector {
  std::vector<Complex> coords;

  static L2Vector zeros(const BallIndex& ball) { return {std::vector<Complex>(ball.size())}; }
  static L2Vector delta(const BallIndex& ball, const Word& word);
  std::size_t dimension() const { return coords.size(); }
};

/// P lambda(x) P for the orthogonal projection P onto the ball. Products
/// landing outside the ball are discarded.
class TruncatedOperator {
 public:
  TruncatedOperator(const AlgebraElement& x, const BallIndex& ball);

  std::size_t dimension() const { return dimension_; }
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  void apply_adjoint(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  std::size_t dimension_;
  std::vector<Complex> coefficients_;
  // targets_[t][w] = position of u_t * w, or -1 outside the ball.
  std::vector<std::vector<std::int64_t>> targets_;
};

/// (P lambda(x) P) v. Throws DomainError when x uses generators outside the ball.
L2Vector apply_operator(const AlgebraElement& x, const BallIndex& ball, const L2Vector& v);

/// Lower bounds on ||lambda(x)|| from power iteration on T*T for the ball
/// truncations T at each radius (ascending), each run warm-started from the
/// previous radius. Elements invariant under every permutation of their
/// generators with nonnegative coefficients are handled on the
/// permutation-orbit quotient of the ball, which has the same top singular
/// value.
std::vector<double> norm_lower_bounds(const AlgebraElement& x, std::span<const int> radii, int iters,
                                      std::uint64_t seed, std::size_t cap = ball_cap());

double norm_lower_bound(const AlgebraElement& x, int radius, int iters, std::uint64_t seed,
                        std::size_t cap = ball_cap());

/// sum_L (L+1) * ||x_L||_2 over homogeneous length components.
double norm_upper_bound_haagerup(const AlgebraElement& x);

struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<int> radii;
  std::vector<double> power_lower;  // one per radius
};

NormInterval estimate_norm(const AlgebraElement& x, std::span<const int> radii, int iters, std::uint64_t seed,
                           std::size_t cap = ball_cap());

/// Polynomial extrapolation in h = 1/R^2 to h = 0 through all given points.
double richardson_extrapolate(std::span<const int> radii, std::span<const double> values);

}  // namespace ergoshift
