#include "ergoshift/repr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>

#include "ergoshift/error.hpp"
#include "orbit_quotient.hpp"

namespace ergoshift {

std::size_t ball_cap() {
  const char* env = std::getenv("ERGOSHIFT_BALL_CAP");
  if (env == nullptr || *env == '\0') return kDefaultBallCap;
  std::size_t value = 0;
  const std::string_view text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
    throw ParseError("ERGOSHIFT_BALL_CAP must be a positive integer, got '" + std::string(text) + "'");
  return value;
}

std::optional<std::uint64_t> predicted_ball_size(std::size_t generator_count, int radius) {
  if (radius < 0) return std::nullopt;
  if (generator_count == 0 || radius == 0) return 1;
  const std::uint64_t k = generator_count;
  if (k == 1) return 1 + 2 * static_cast<std::uint64_t>(radius);
  // 1 + 2k * sum_{j<R} (2k-1)^j
  std::uint64_t sphere = 2 * k;
  std::uint64_t total = 1;
  for (int r = 1; r <= radius; ++r) {
    if (__builtin_add_overflow(total, sphere, &total)) return std::nullopt;
    if (r < radius && __builtin_mul_overflow(sphere, 2 * k - 1, &sphere)) return std::nullopt;
  }
  return total;
}

std::optional<std::size_t> BallIndex::position(const Word& word) const {
  const auto it = lookup_.find(word);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

bool BallIndex::uses_only_ball_generators(const AlgebraElement& x) const {
  for (Index g : generator_support(x))
    if (!std::binary_search(generators_.begin(), generators_.end(), g)) return false;
  return true;
}

BallIndex enumerate_ball(const std::set<Index>& generators, int radius, std::size_t cap) {
  if (generators.empty()) throw DomainError("ball needs at least one generator");
  if (radius < 0) throw DomainError("ball radius must be nonnegative");
  const auto predicted = predicted_ball_size(generators.size(), radius);
  if (!predicted || *predicted > cap)
    throw ResourceError("ball with " + std::to_string(generators.size()) + " generators and radius " +
                        std::to_string(radius) + " exceeds the cap of " + std::to_string(cap) + " entries");
  BallIndex ball;
  ball.generators_.assign(generators.begin(), generators.end());
  ball.radius_ = radius;
  ball.words_.reserve(static_cast<std::size_t>(*predicted));

  std::vector<Word> alphabet;
  for (Index g : ball.generators_) {
    alphabet.push_back(Word::generator(g, -1));
    alphabet.push_back(Word::generator(g, 1));
  }
  ball.words_.push_back(Word());
  std::size_t level_begin = 0;
  for (int length = 1; length <= radius; ++length) {
    const std::size_t level_end = ball.words_.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const auto letters = ball.words_[i].letters();
      for (const Word& a : alphabet) {
        if (!letters.empty() && letters.back() == a.letters()[0].inverse()) continue;
        ball.words_.push_back(multiply(ball.words_[i], a));
      }
    }
    level_begin = level_end;
  }
  ball.lookup_.reserve(ball.words_.size());
  for (std::size_t i = 0; i < ball.words_.size(); ++i) ball.lookup_.emplace(ball.words_[i], i);
  return ball;
}

L2Vector L2Vector::delta(const BallIndex& ball, const Word& word) {
  const auto pos = ball.position(word);
  if (!pos) throw DomainError("word " + to_string(word) + " is outside the ball");
  L2Vector v = zeros(ball);
  v.coords[*pos] = 1.0;
  return v;
}

TruncatedOperator::TruncatedOperator(const AlgebraElement& x, const BallIndex& ball) : dimension_(ball.size()) {
  if (!ball.uses_only_ball_generators(x))
    throw DomainError("element uses generators outside the ball: " + to_string(x));
  for (const auto& [u, c] : x.terms()) {
    coefficients_.push_back(c);
    std::vector<std::int64_t> table(dimension_, -1);
    for (std::size_t w = 0; w < dimension_; ++w)
      if (const auto pos = ball.position(multiply(u, ball.word(w)))) table[w] = static_cast<std::int64_t>(*pos);
    targets_.push_back(std::move(table));
  }
}

void TruncatedOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
  std::fill(out.begin(), out.end(), Complex{});
  for (std::size_t t = 0; t < coefficients_.size(); ++t) {
    const Complex c = coefficients_[t];
    const auto& table = targets_[t];
    for (std::size_t w = 0; w < dimension_; ++w)
      if (table[w] >= 0) out[static_cast<std::size_t>(table[w])] += c * in[w];
  }
}

void TruncatedOperator::apply_adjoint(std::span<const Complex> in, std::span<Complex> out) const {
  std::fill(out.begin(), out.end(), Complex{});
  for (std::size_t t = 0; t < coefficients_.size(); ++t) {
    const Complex c = std::conj(coefficients_[t]);
    const auto& table = targets_[t];
    for (std::size_t w = 0; w < dimension_; ++w)
      if (table[w] >= 0) out[w] += c * in[static_cast<std::size_t>(table[w])];
  }
}

L2Vector apply_operator(const AlgebraElement& x, const BallIndex& ball, const L2Vector& v) {
  if (v.dimension() != ball.size()) throw DomainError("vector dimension does not match the ball");
  const TruncatedOperator op(x, ball);
  L2Vector out = L2Vector::zeros(ball);
  op.apply(v.coords, out.coords);
  return out;
}

namespace {

constexpr double kRayleighTolerance = 1e-10;

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::norm(c);
  return std::sqrt(s);
}

// Power iteration on T*T; leaves the final unit vector in `v` and returns
// its Rayleigh quotient ||T v||^2.
template <class Operator>
double power_iterate(const Operator& op, std::vector<Complex>& v, int iters) {
  const std::size_t dim = op.dimension();
  std::vector<Complex> image(dim), back(dim);
  double nv = norm2(v);
  if (nv == 0.0) return 0.0;
  for (Complex& c : v) c /= nv;
  double rayleigh = 0.0;
  for (int it = 0; it < iters; ++it) {
    op.apply(v, image);
    const double next = std::pow(norm2(image), 2);
    const bool converged = it > 0 && std::abs(next - rayleigh) < kRayleighTolerance;
    rayleigh = std::max(rayleigh, next);
    if (converged || it + 1 == iters) break;
    op.apply_adjoint(image, back);
    const double nb = norm2(back);
    if (nb == 0.0) break;
    for (std::size_t i = 0; i < dim; ++i) v[i] = back[i] / nb;
  }
  return rayleigh;
}

std::vector<Complex> seeded_start(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> v(dim);
  for (Complex& c : v) c = {normal(rng), normal(rng)};
  const double nv = norm2(v);
  for (Complex& c : v) c *= 0.5 / nv;
  v[0] += 1.0;  // blend with delta_e
  return v;
}

template <class Operator, class MakeOperator>
std::vector<double> schedule_bounds(std::span<const int> radii, int iters, std::uint64_t seed,
                                    MakeOperator&& make) {
  std::vector<double> out;
  std::vector<Complex> v;
  for (int radius : radii) {
    const Operator op = make(radius);
    if (v.empty()) {
      v = seeded_start(op.dimension(), seed);
    } else {
      v.resize(op.dimension());  // the smaller ball is a prefix of the larger
    }
    out.push_back(std::sqrt(power_iterate(op, v, iters)));
  }
  return out;
}

}  // namespace

std::vector<double> norm_lower_bounds(const AlgebraElement& x, std::span<const int> radii, int iters,
                                      std::uint64_t seed, std::size_t cap) {
  if (iters < 1) throw DomainError("power iteration needs iters >= 1");
  if (!std::is_sorted(radii.begin(), radii.end()))
    throw DomainError("radius schedule must be nondecreasing");
  for (int r : radii)
    if (r < 0) throw DomainError("ball radius must be nonnegative");
  const std::set<Index> generators = generator_support(x);
  if (generators.empty()) {
    // Scalar multiple of the unit.
    return std::vector<double>(radii.size(), std::abs(trace(x)));
  }
  const std::vector<Index> gens(generators.begin(), generators.end());
  const int max_radius = radii.empty() ? 0 : radii.back();
  if (gens.size() >= 2 && max_radius <= 63) {
    if (auto patterns = detail::symmetric_patterns(x, gens)) {
      const bool fits = std::all_of(patterns->begin(), patterns->end(),
                                    [&](const detail::Pattern& p) { return p.labels + max_radius < 127; });
      if (fits) {
        return schedule_bounds<detail::OrbitOperator>(radii, iters, seed, [&](int radius) {
          const detail::OrbitBall ball(gens.size(), radius, cap);
          return detail::OrbitOperator(*patterns, ball);
        });
      }
    }
  }
  return schedule_bounds<TruncatedOperator>(radii, iters, seed, [&](int radius) {
    const BallIndex ball = enumerate_ball(generators, radius, cap);
    return TruncatedOperator(x, ball);
  });
}

double norm_lower_bound(const AlgebraElement& x, int radius, int iters, std::uint64_t seed, std::size_t cap) {
  const int radii[] = {radius};
  return norm_lower_bounds(x, radii, iters, seed, cap).front();
}

double norm_upper_bound_haagerup(const AlgebraElement& x) {
  std::map<std::size_t, double> squared_by_length;
  for (const auto& [word, c] : x.terms()) squared_by_length[word.length()] += std::norm(c);
  double bound = 0.0;
  for (const auto& [length, squared] : squared_by_length)
    bound += static_cast<double>(length + 1) * std::sqrt(squared);
  return bound;
}

NormInterval estimate_norm(const AlgebraElement& x, std::span<const int> radii, int iters, std::uint64_t seed,
                           std::size_t cap) {
  if (radii.empty()) throw DomainError("radius schedule must be nonempty");
  NormInterval out;
  out.radii.assign(radii.begin(), radii.end());
  out.power_lower = norm_lower_bounds(x, radii, iters, seed, cap);
  // ||lambda(x) delta_e|| = ||x||_2 is itself a lower bound.
  out.lower = l2_norm(x);
  for (double v : out.power_lower) out.lower = std::max(out.lower, v);
  out.upper = norm_upper_bound_haagerup(x);
  return out;
}

double richardson_extrapolate(std::span<const int> radii, std::span<const double> values) {
  if (radii.size() != values.size() || radii.empty())
    throw DomainError("extrapolation needs matching nonempty radius and value lists");
  std::vector<double> h, p(values.begin(), values.end());
  for (int r : radii) {
    if (r <= 0) throw DomainError("extrapolation radii must be positive");
    h.push_back(1.0 / (static_cast<double>(r) * r));
  }
  // Neville's scheme evaluated at h = 0.
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      p[i] = (h[i] * p[i + 1] - h[i + level] * p[i]) / (h[i] - h[i + level]);
  return p[0];
}

}  // namespace ergoshift
