#pragma once

// E-ergodicity, E-weak mixing and E-mixing tests over three kinds of
// dynamical system: finite-dimensional quantum systems with inner
// automorphisms, classical systems seen as abelian algebras, and the free
// shift on the group algebra.

#include <Eigen/Dense>
#include <complex>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergoshift/algebra.hpp"
#include "ergoshift/classical.hpp"

namespace ergoshift::hierarchy {

enum class Verdict { holds, fails, inconclusive };
enum class Flavor { ergodic, weak, mixing };

std::string to_string(Verdict v);
std::string to_string(Flavor f);
/// "E-ergodic", "E-weak-mixing", "E-mixing".
std::string property_name(Flavor f);

struct Schedule {
  std::size_t n_max = 1000;
  double tol = 1e-3;
  double window_fraction = 0.25;

  void validate() const;
  std::size_t window_size(std::size_t length) const;
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct ErgodicReport {
  std::string system;
  std::string property;
  Flavor flavor = Flavor::mixing;
  Schedule schedule;
  /// residuals[k] belongs to step k (mixing) or to the mean of steps 0..k.
  std::vector<double> residuals;
  Verdict verdict = Verdict::inconclusive;
  std::optional<double> decay_exponent;
  std::vector<std::string> states;
  std::vector<std::string> observables;
  std::optional<std::uint64_t> seed;
};

/// holds: window max < tol; fails: window min > 10 tol; else inconclusive.
Verdict classify(std::span<const double> residuals, const Schedule& schedule);
/// Least-squares slope of log r_k against log(k+1) over positive residuals
/// after the first; empty when fewer than two such points exist.
std::optional<double> fit_decay_exponent(std::span<const double> residuals);

/// The three residual flavours of one sequence a_k against target t:
/// |mean_{j<=k}(a_j - t)|, mean_{j<=k}|a_j - t| and |a_k - t|.
struct FlavorSequences {
  std::vector<double> ergodic, weak, mixing;
};
FlavorSequences flavor_sequences(std::span<const Complex> values, Complex target);
/// Elementwise max, for aggregation over a battery.
void merge_max(FlavorSequences& into, const FlavorSequences& from);
/// Indices k where ergodic[k] <= weak[k] <= max_{j<=k} mixing[j] fails by more
/// than a relative 1e-12 (the equality case rounds either way).
std::size_t chain_violations(const FlavorSequences& s);

struct HierarchyReports {
  ErgodicReport ergodic, weak, mixing;
  std::size_t chain_violations = 0;
};

/// What the engine needs from a system: values phi(alpha^{+-k}(x)) along an
/// orbit, the target phi(E x), and the correlation and commutator sequences.
template <class M>
concept Model = requires(const M& m, const typename M::state_type& phi, const typename M::element_type& x,
                         std::size_t n, int direction) {
  { m.name() } -> std::convertible_to<std::string>;
  { m.orbit_values(phi, x, n, direction) } -> std::same_as<std::vector<Complex>>;
  { m.expectation_value(phi, x) } -> std::same_as<Complex>;
  { m.is_invariant(phi) } -> std::same_as<bool>;
  { m.correlation_values(phi, x, x, x, n, direction) } -> std::same_as<std::vector<Complex>>;
  { m.commutator_values(phi, x, x, x, x, n) } -> std::same_as<std::vector<Complex>>;
  { m.state_value(phi, x) } -> std::same_as<Complex>;
  { m.product(x, x) } -> std::same_as<typename M::element_type>;
  { m.describe_state(phi) } -> std::convertible_to<std::string>;
  { m.describe_element(x) } -> std::convertible_to<std::string>;
};

namespace detail {

ErgodicReport make_report(std::string system, Flavor flavor, const Schedule& schedule, std::vector<double> residuals,
                          std::vector<std::string> states, std::vector<std::string> observables,
                          std::optional<std::uint64_t> seed);

}  // namespace detail

/// Definition-level test over a finite battery; direction -1 runs alpha^{-1}.
template <Model M>
HierarchyReports e_hierarchy_test(const M& model, std::span<const typename M::state_type> states,
                                  std::span<const typename M::element_type> elements, const Schedule& schedule,
                                  int direction = 1, std::optional<std::uint64_t> seed = std::nullopt) {
  schedule.validate();
  if (states.empty() || elements.empty()) throw DomainError("battery needs at least one state and one element");
  FlavorSequences total;
  std::size_t violations = 0;
  for (const auto& phi : states)
    for (const auto& x : elements) {
      const auto values = model.orbit_values(phi, x, schedule.n_max, direction);
      const auto seqs = flavor_sequences(values, model.expectation_value(phi, x));
      violations += chain_violations(seqs);
      merge_max(total, seqs);
    }
  violations += chain_violations(total);
  std::vector<std::string> state_labels, element_labels;
  for (const auto& phi : states) state_labels.push_back(model.describe_state(phi));
  for (const auto& x : elements) element_labels.push_back(model.describe_element(x));
  const std::string system = model.name() + (direction < 0 ? " [inverse]" : "");
  HierarchyReports out;
  out.ergodic = detail::make_report(system, Flavor::ergodic, schedule, std::move(total.ergodic), state_labels,
                                    element_labels, seed);
  out.weak = detail::make_report(system, Flavor::weak, schedule, std::move(total.weak), state_labels, element_labels,
                                 seed);
  out.mixing = detail::make_report(system, Flavor::mixing, schedule, std::move(total.mixing), state_labels,
                                   element_labels, seed);
  out.chain_violations = violations;
  return out;
}

template <Model M>
HierarchyReports backward_test(const M& model, std::span<const typename M::state_type> states,
                               std::span<const typename M::element_type> elements, const Schedule& schedule,
                               std::optional<std::uint64_t> seed = std::nullopt) {
  return e_hierarchy_test(model, states, elements, schedule, -1, seed);
}

template <class E>
struct Triple {
  E a, b, c;
};

/// |omega(b alpha^k(a) c) - omega(bc) omega(a)| combined per flavour.
template <Model M>
ErgodicReport correlation_test(const M& model, std::span<const Triple<typename M::element_type>> triples,
                               const typename M::state_type& omega, const Schedule& schedule, Flavor flavor,
                               int direction = 1) {
  schedule.validate();
  if (!model.is_invariant(omega)) throw DomainError("correlation test needs an invariant state");
  if (triples.empty()) throw DomainError("correlation test needs at least one triple");
  FlavorSequences total;
  std::vector<std::string> labels;
  for (const auto& t : triples) {
    const auto values = model.correlation_values(omega, t.a, t.b, t.c, schedule.n_max, direction);
    const Complex target = model.state_value(omega, model.product(t.b, t.c)) * model.state_value(omega, t.a);
    merge_max(total, flavor_sequences(values, target));
    labels.push_back("a=" + model.describe_element(t.a) + "; b=" + model.describe_element(t.b) +
                     "; c=" + model.describe_element(t.c));
  }
  std::vector<double>& chosen =
      flavor == Flavor::ergodic ? total.ergodic : flavor == Flavor::weak ? total.weak : total.mixing;
  ErgodicReport out = detail::make_report(model.name() + (direction < 0 ? " [inverse]" : ""), flavor, schedule,
                                          std::move(chosen), {model.describe_state(omega)}, std::move(labels),
                                          std::nullopt);
  out.property = "correlation";
  return out;
}

template <class E>
struct Quadruple {
  E a, b, c, d;
};

struct AbelianProbe {
  /// max over quadruples of |omega(c [alpha^n(a), b] d)|, n = 0..horizon-1.
  std::vector<double> residuals;
  double window_max = 0.0;
};

template <Model M>
AbelianProbe asymptotic_abelianness_probe(const M& model,
                                          std::span<const Quadruple<typename M::element_type>> quadruples,
                                          const typename M::state_type& omega, std::size_t horizon) {
  if (horizon == 0) throw DomainError("horizon must be >= 1");
  AbelianProbe out;
  out.residuals.assign(horizon, 0.0);
  for (const auto& q : quadruples) {
    const auto values = model.commutator_values(omega, q.a, q.b, q.c, q.d, horizon);
    for (std::size_t n = 0; n < horizon; ++n) out.residuals[n] = std::max(out.residuals[n], std::abs(values[n]));
  }
  const Schedule window{horizon, 1.0, 0.25};
  const std::size_t w = window.window_size(horizon);
  for (std::size_t n = horizon - w; n < horizon; ++n) out.window_max = std::max(out.window_max, out.residuals[n]);
  return out;
}

// ---------------------------------------------------------------------------
// Finite-dimensional quantum systems: alpha(x) = U x U*.

using Matrix = Eigen::MatrixXcd;

struct Labeled {
  Matrix value;
  std::string label;
};

/// The expectation onto the fixed-point algebra of x -> U x U*: in an
/// eigenbasis of U, keep the blocks linking equal eigenvalues.
class FixedPointExpectation {
 public:
  explicit FixedPointExpectation(const Matrix& unitary, double cluster_tol = 1e-9);
  Matrix operator()(const Matrix& x) const;
  /// Unitary Q with U = Q diag(eigenvalues) Q*; the identity for diagonal U.
  const Matrix& basis() const { return basis_; }
  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
  const std::vector<int>& cluster() const { return cluster_; }

 private:
  Matrix basis_;
  Eigen::VectorXcd eigenvalues_;
  std::vector<int> cluster_;
  bool standard_basis_ = false;
};

class QuantumModel {
 public:
  using state_type = Labeled;    // density matrix (or any functional y -> tr(rho y))
  using element_type = Labeled;  // observable

  /// Throws DomainError unless U*U = 1 to 1e-10.
  explicit QuantumModel(Matrix unitary, std::string label = "");
  /// `identity`, or `diag:<c>,...` with entries real, `a+bi`, or
  /// `exp:<t>` = e^{2 pi i t} (`exp:golden` allowed).
  static QuantumModel parse(int dim, std::string_view spec);

  int dim() const { return static_cast<int>(unitary_.rows()); }
  const Matrix& unitary() const { return unitary_; }
  const FixedPointExpectation& expectation() const { return expectation_; }
  Matrix evolve(const Matrix& x, long long n) const;

  std::string name() const { return label_; }
  std::vector<Complex> orbit_values(const Labeled& phi, const Labeled& x, std::size_t n, int direction) const;
  Complex expectation_value(const Labeled& phi, const Labeled& x) const;
  bool is_invariant(const Labeled& phi) const;
  std::vector<Complex> correlation_values(const Labeled& omega, const Labeled& a, const Labeled& b, const Labeled& c,
                                          std::size_t n, int direction) const;
  std::vector<Complex> commutator_values(const Labeled& omega, const Labeled& a, const Labeled& b, const Labeled& c,
                                         const Labeled& d, std::size_t n) const;
  Complex state_value(const Labeled& phi, const Labeled& x) const;
  Labeled product(const Labeled& x, const Labeled& y) const;
  std::string describe_state(const Labeled& phi) const { return phi.label; }
  std::string describe_element(const Labeled& x) const { return x.label; }

 private:
  Matrix unitary_;
  std::string label_;
  FixedPointExpectation expectation_;
};

Labeled matrix_unit(int dim, int i, int j);
Labeled vector_state(const Eigen::VectorXcd& v, std::string label);
Labeled trace_state(int dim);
Labeled random_density(int dim, std::uint64_t seed);

/// Matrix units; basis vector states, (e_i + e_j)/sqrt2, the trace and
/// `random_states` seeded random density matrices.
std::vector<Labeled> standard_quantum_observables(int dim);
std::vector<Labeled> standard_quantum_states(int dim, std::uint64_t seed, int random_states = 3);

struct GnsWitness {
  double phase = 0.0;       // in turns, (-1/2, 1/2]
  Labeled element;          // alpha(x) = e^{2 pi i phase} x modulo the null space
  Labeled functional;       // y -> omega(x* y) / omega(x* x)
};

struct GnsReport {
  int gns_dim = 0;
  /// Eigenphases of the implementing unitary in turns, sorted.
  std::vector<double> phases;
  int fixed_dim = 0;
  bool ergodic = false;
  bool weak_mixing = false;
  bool mixing = false;
  std::vector<GnsWitness> witnesses;  // one per eigenphase != 0
};

/// GNS space of an invariant state, the unitary implementing alpha on it, and
/// the spectral criteria. Throws DomainError for non-invariant states.
GnsReport gns_spectral_test(const QuantumModel& model, const Labeled& omega);

// ---------------------------------------------------------------------------
// Classical systems as abelian C*-algebras C(X).

class ClassicalModel {
 public:
  using state_type = classical::State;
  using element_type = classical::Observable;

  explicit ClassicalModel(classical::System sys) : sys_(std::move(sys)) {}
  const classical::System& system() const { return sys_; }

  /// Cesaro limit of f o T^k: the constant mu(f) except for rotations,
  /// where the Fourier modes with k theta in Z survive.
  classical::Observable fixed_point_projection(const classical::Observable& f) const;

  std::string name() const { return sys_.to_string(); }
  std::vector<Complex> orbit_values(const state_type& phi, const element_type& f, std::size_t n,
                                    int direction) const;
  Complex expectation_value(const state_type& phi, const element_type& f) const;
  bool is_invariant(const state_type& phi) const;
  std::vector<Complex> correlation_values(const state_type& omega, const element_type& a, const element_type& b,
                                          const element_type& c, std::size_t n, int direction) const;
  /// C(X) is commutative, so every commutator vanishes.
  std::vector<Complex> commutator_values(const state_type& omega, const element_type& a, const element_type& b,
                                         const element_type& c, const element_type& d, std::size_t n) const;
  Complex state_value(const state_type& phi, const element_type& f) const { return phi.expect(sys_, f); }
  element_type product(const element_type& f, const element_type& g) const { return multiply(f, g); }
  std::string describe_state(const state_type& phi) const { return phi.describe(); }
  std::string describe_element(const element_type& f) const { return f.label(); }

 private:
  classical::System sys_;
};

// ---------------------------------------------------------------------------
// The free shift (or an anchored shift) on C[F_inf].

/// The trace tau (no vector), or the vector state y -> tau(xi* y xi)/|xi|^2.
struct FreeState {
  std::optional<AlgebraElement> xi;
  std::string label;

  static FreeState trace() { return {std::nullopt, "tau"}; }
  static FreeState vector(AlgebraElement xi, std::string label);
};

class FreeShiftModel {
 public:
  using state_type = FreeState;
  using element_type = AlgebraElement;

  explicit FreeShiftModel(GeneratorMap sigma) : sigma_(std::move(sigma)) {}
  const GeneratorMap& sigma() const { return sigma_; }

  std::string name() const { return "free-shift:" + sigma_.describe(); }
  std::vector<Complex> orbit_values(const FreeState& phi, const AlgebraElement& x, std::size_t n,
                                    int direction) const;
  Complex expectation_value(const FreeState& phi, const AlgebraElement& x) const;
  bool is_invariant(const FreeState& phi) const;
  std::vector<Complex> correlation_values(const FreeState& omega, const AlgebraElement& a, const AlgebraElement& b,
                                          const AlgebraElement& c, std::size_t n, int direction) const;
  std::vector<Complex> commutator_values(const FreeState& omega, const AlgebraElement& a, const AlgebraElement& b,
                                         const AlgebraElement& c, const AlgebraElement& d, std::size_t n) const;
  Complex state_value(const FreeState& phi, const AlgebraElement& x) const;
  AlgebraElement product(const AlgebraElement& x, const AlgebraElement& y) const { return convolve(x, y); }
  std::string describe_state(const FreeState& phi) const { return phi.label; }
  std::string describe_element(const AlgebraElement& x) const { return to_string(x); }

  /// theta*phi = phi o theta; for a vector state this is the vector state at
  /// theta(xi).
  FreeState time_reversed(const FreeState& phi) const;

 private:
  GeneratorMap sigma_;
};

/// Vector states at normalized seeded random elements supported in the
/// radius-`radius` ball over `generators`, plus tau.
std::vector<FreeState> standard_free_states(std::span<const Index> generators, int radius, std::uint64_t seed,
                                            int count = 3);

/// Largest term-by-term gap between the inverse-direction mixing residuals of
/// x under phi and the forward ones of theta(x) under theta*phi. Needs a pure
/// shift, for which theta alpha = alpha^{-1} theta.
double time_reversal_gap(const FreeShiftModel& model, std::span<const FreeState> states,
                         std::span<const AlgebraElement> elements, std::size_t n_max);

/// Uniform-in-states certificate for E-mixing: the Haagerup bound on the
/// norm of the Cesaro mean of x - E(x) along `seq`, for n = 1..n_max.
/// Decay to zero along every subsequence implies E-mixing. The verdict is
/// holds or inconclusive, never fails.
ErgodicReport subsequence_certificate(const FreeShiftModel& model, const AlgebraElement& x,
                                      const SubsequenceSpec& seq, const Schedule& schedule);

}  // namespace ergoshift::hierarchy
