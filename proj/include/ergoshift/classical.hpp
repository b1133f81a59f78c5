#pragma once

// Classical compact-metric systems: irrational rotations, the translation on
// the one-point compactification of Z, and finite cycles.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ergoshift/error.hpp"

namespace ergoshift::classical {

using Complex = std::complex<double>;

struct Infinity {
  friend bool operator==(Infinity, Infinity) { return true; }
};

/// A point of a system's state space: a real mod 1 (rotation), an integer or
/// infinity (Z_inf), or a residue (cycle).
using Point = std::variant<double, std::int64_t, Infinity>;

std::string to_string(const Point& x);
/// `inf`, an integer, or a real (anything with a decimal point or exponent).
Point parse_point(std::string_view text);

class System {
 public:
  enum class Kind { rotation, z_infinity, cycle };

  static System rotation(double theta);
  static System z_infinity();
  static System cycle(std::int64_t m);
  /// `rotation:theta=<real>`, `zinf`, `cycle:m=<int>`.
  static System parse(std::string_view text);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  std::int64_t modulus() const { return modulus_; }
  std::string to_string() const;

  bool contains(const Point& x) const;
  /// T^steps x; steps may be negative.
  Point evolve(const Point& x, std::int64_t steps) const;
  double distance(const Point& x, const Point& y) const;
  /// Smallest positive distance between distinct points, if the space is finite.
  std::optional<double> resolution() const;
  std::optional<std::int64_t> period() const;

  friend bool operator==(const System&, const System&) = default;

 private:
  System(Kind kind, double theta, std::int64_t m) : kind_(kind), theta_(theta), modulus_(m) {}
  Kind kind_;
  double theta_;
  std::int64_t modulus_;
};

/// As parse_point, reading integers as reals on a rotation.
Point parse_point(std::string_view text, const System& sys);

/// 0.6180339887..., the fractional part of the golden ratio.
inline constexpr double kGolden = 0.61803398874989484820;

/// Continuous function on a system's state space. Closed under products,
/// conjugation and composition with powers of T, which is all the abelian
/// correlation tests need.
class Observable {
 public:
  using TailValues = std::function<Complex(std::int64_t)>;

  static Observable constant(Complex c);
  /// sum_{k=-d..d} coefficients[k+d] e^{2 pi i k x}.
  static Observable trig(std::vector<Complex> coefficients);
  static Observable fourier_mode(int k, Complex c = 1.0);
  /// Seeded random trigonometric polynomial of degree d.
  static Observable random_trig(int degree, std::uint64_t seed);
  /// f on Z given by `values`, f(inf) = limit. `sup_bound` must dominate |f|.
  static Observable tail(TailValues values, Complex limit, double sup_bound, std::string label);
  /// Finitely many exceptional values, limit elsewhere.
  static Observable tail_table(std::map<std::int64_t, Complex> exceptional, Complex limit);
  /// f(n) = 1/(1+n^2), f(inf) = 0.
  static Observable inverse_square();
  static Observable table(std::vector<Complex> values);

  Complex operator()(const Point& x) const;
  /// Integral against the system's invariant measure (Lebesgue, delta_inf or
  /// uniform).
  Complex invariant_mean(const System& sys) const;
  double sup_bound() const;
  bool compatible(const System& sys) const;
  const std::string& label() const { return label_; }
  Observable relabel(std::string label) const {
    Observable out = *this;
    out.label_ = std::move(label);
    return out;
  }

  friend Observable multiply(const Observable& f, const Observable& g);
  friend Observable conjugate(const Observable& f);
  /// f o T^n.
  friend Observable compose(const System& sys, const Observable& f, std::int64_t n);
  friend Observable add(const Observable& f, const Observable& g);
  friend Observable scale(Complex c, const Observable& f);
  friend Observable fixed_point_projection(const System& sys, const Observable& f);

 private:
  struct Trig {
    std::vector<Complex> coefficients;
  };
  struct Tail {
    TailValues values;
    Complex limit;
    double bound;
  };
  struct Table {
    std::vector<Complex> values;
  };
  using Body = std::variant<Complex, Trig, Tail, Table>;

  Observable(Body body, std::string label) : body_(std::move(body)), label_(std::move(label)) {}
  Body body_;
  std::string label_;
};

Observable multiply(const Observable& f, const Observable& g);
Observable conjugate(const Observable& f);
Observable compose(const System& sys, const Observable& f, std::int64_t n);
Observable add(const Observable& f, const Observable& g);
Observable scale(Complex c, const Observable& f);
/// lim (1/n) sum_{k<n} f o T^k: the mean mu(f) for Z_inf and cycles; for a
/// rotation, the Fourier modes k with k theta an integer survive.
Observable fixed_point_projection(const System& sys, const Observable& f);

class State {
 public:
  static State point(Point x);
  /// Weights must be nonnegative and sum to 1 (within 1e-12; renormalized).
  static State mixture(std::vector<std::pair<double, Point>> atoms);
  static State invariant();

  bool is_invariant() const { return atoms_.empty(); }
  const std::vector<std::pair<double, Point>>& atoms() const { return atoms_; }
  std::string describe() const;

  Complex expect(const System& sys, const Observable& f) const;
  /// phi(f o T^k), evaluated pointwise along the orbit.
  Complex expect_evolved(const System& sys, const Observable& f, std::int64_t k) const;

 private:
  std::vector<std::pair<double, Point>> atoms_;  // empty: invariant measure
};

/// (1/n) sum_{k=0}^{n-1} phi(f o T^k).
Complex birkhoff_average(const System& sys, const Observable& f, const State& phi, std::size_t n);

/// |phi(f o T^n) - mu(f)| for n = 0 .. horizon-1.
std::vector<double> mixing_residuals(const System& sys, const Observable& f, const State& phi, std::size_t horizon);

class SearchBudgetExhausted : public ResourceError {
 public:
  SearchBudgetExhausted(int level, std::int64_t budget);
  int level() const { return level_; }

 private:
  int level_;
};

struct TransitiveTimes {
  /// For level l (index l-1): the smallest n >= 1 with 0 < d(x, T^n x0) < 1/l.
  std::vector<std::int64_t> level_times;
  /// Strictly increasing times, the l-th being the first admissible n after
  /// the (l-1)-th; T^n x0 -> x along them.
  std::vector<std::int64_t> subsequence;
};

inline constexpr std::int64_t kDefaultSearchBudget = 100'000'000;

TransitiveTimes transitive_subsequence(const System& sys, const Point& x0, const Point& x, int levels,
                                       std::int64_t budget = kDefaultSearchBudget);

struct SupportProbe {
  bool singleton = false;
  /// Centre of the heaviest closed eps-ball found.
  Point center;
  double center_mass = 0.0;
  double eps = 0.0;
  /// Masses of the occupied eps-cells of a fixed partition, in cell order.
  std::vector<double> cell_masses;
};

SupportProbe support_probe(const System& sys, const Point& x0, std::size_t n, double eps = 0.01);

enum class Triviality { consistent, violation_flag, neutral };
std::string to_string(Triviality t);

struct ProbeBattery {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> residuals;
  /// Whether the observables span a dense subspace of C(X).
  bool spanning = false;
};

struct TrivialityReport {
  Triviality verdict;
  bool residuals_decay;
  bool support_singleton;
  double worst_tail_max;
};

/// The last-quarter max of a residual sequence.
double tail_max(const std::vector<double>& residuals);

TrivialityReport triviality_verdict(const ProbeBattery& battery, const SupportProbe& support, double tol = 1e-3);

/// Observables used by the built-in battery: Fourier modes |k| <= 3 for
/// rotations; point indicators near 0, 1/(1+n^2) and 1 for Z_inf; residue
/// indicators for cycles. Each family spans a dense subspace.
std::vector<Observable> standard_observables(const System& sys);
/// Point states and one mixture.
std::vector<State> standard_states(const System& sys);
ProbeBattery standard_battery(const System& sys, std::size_t horizon);

}  // namespace ergoshift::classical
