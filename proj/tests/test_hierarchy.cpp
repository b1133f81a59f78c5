#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ergoshift/hierarchy.hpp"
#include "ergoshift/sampling.hpp"

using namespace ergoshift;
using namespace ergoshift::hierarchy;
using classical::kGolden;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix random_unitary(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) a(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(d, d);
}

Matrix random_matrix(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) a(i, j) = {g(rng), g(rng)};
  return a;
}

// Brute-force Cesaro average of U^k x U^-k.
Matrix cesaro_oracle(const Matrix& u, const Matrix& x, int n) {
  Matrix sum = Matrix::Zero(x.rows(), x.cols());
  Matrix y = x;
  for (int k = 0; k < n; ++k) {
    sum += y;
    y = u * y * u.adjoint();
  }
  return sum / static_cast<double>(n);
}

const QuantumModel period2 = QuantumModel::parse(2, "diag:1,-1");
const QuantumModel identity2 = QuantumModel::parse(2, "identity");

}  // namespace

TEST_CASE("verdict rule") {
  const Schedule s{100, 1e-3, 0.25};
  std::vector<double> decaying(100), flat(100, 0.5), middling(100, 5e-3);
  for (std::size_t k = 0; k < 100; ++k) decaying[k] = 1.0 / double((k + 1) * (k + 1));
  CHECK(classify(decaying, s) == Verdict::holds);
  CHECK(classify(flat, s) == Verdict::fails);
  CHECK(classify(middling, s) == Verdict::inconclusive);
  CHECK(fit_decay_exponent(decaying).value() == doctest::Approx(-2.0));
  CHECK_FALSE(fit_decay_exponent(std::vector<double>(10, 0.0)).has_value());
  CHECK_THROWS_AS((Schedule{4, 1e-3, 0.25}.validate()), DomainError);
  CHECK_THROWS_AS((Schedule{100, 0.0, 0.25}.validate()), DomainError);
}

TEST_CASE("property: computed chain ergodic <= weak <= prefix-max mixing") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> values(1 + trial * 5);
    const double phase = g(rng);
    for (std::size_t k = 0; k < values.size(); ++k) {
      switch (trial % 4) {
        case 0:
          values[k] = {g(rng), g(rng)};
          break;
        case 1:
          values[k] = std::polar(std::abs(g(rng)), phase);  // equal phases: the equality case
          break;
        case 2:
          values[k] = 0.1;
          break;
        default:
          values[k] = std::polar(1.0, 2.0 * std::numbers::pi * kGolden * double(k));
      }
    }
    const auto seqs = flavor_sequences(values, trial % 3 == 0 ? Complex{0.3, -0.1} : Complex{});
    CHECK(chain_violations(seqs) == 0);
  }
}

TEST_CASE("fixed-point expectation examples") {
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  Matrix diag(2, 2);
  diag << 1, 0, 0, 4;
  CHECK(period2.expectation()(x) == diag);
  CHECK(identity2.expectation()(x) == x);

  const QuantumModel golden = QuantumModel::parse(2, "diag:1,exp:golden");
  CHECK((golden.expectation()(x) - diag).cwiseAbs().maxCoeff() == 0.0);
  // Cesaro oracle: off-diagonal average bounded by 1/(n sin(pi theta)).
  const Matrix avg = cesaro_oracle(golden.unitary(), x, 4000);
  CHECK((avg - diag).cwiseAbs().maxCoeff() <= 3.0 / (4000 * std::sin(std::numbers::pi * kGolden)));
}

TEST_CASE("fixed-point expectation for a non-diagonal unitary") {
  std::mt19937_64 rng(4);
  const Matrix v = random_unitary(rng, 3);
  Eigen::VectorXcd lambda(3);
  lambda << 1.0, 1.0, -1.0;
  const Matrix u = v * lambda.asDiagonal() * v.adjoint();
  const QuantumModel model(u);
  const Matrix p1 = v.leftCols(2) * v.leftCols(2).adjoint();
  const Matrix p2 = v.rightCols(1) * v.rightCols(1).adjoint();
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = random_matrix(rng, 3);
    const Matrix expected = p1 * x * p1 + p2 * x * p2;
    CHECK((model.expectation()(x) - expected).cwiseAbs().maxCoeff() <= 1e-12);
    for (long long n : {1LL, 5LL, -3LL}) {
      Matrix un = Matrix::Identity(3, 3);
      for (long long k = 0; k < std::abs(n); ++k) un = (n >= 0 ? u : Matrix(u.adjoint())) * un;
      CHECK((model.evolve(x, n) - un * x * un.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("property: expectation laws") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    Eigen::VectorXcd lambda(d);
    for (int i = 0; i < d; ++i) lambda(i) = std::polar(1.0, 2.0 * std::numbers::pi * ((i % 2) * 0.25 + kGolden * (i / 2)));
    const Matrix v = random_unitary(rng, d);
    const QuantumModel model(Matrix(v * lambda.asDiagonal() * v.adjoint()));
    const auto& e = model.expectation();
    const Matrix x = random_matrix(rng, d);
    const Matrix ex = e(x);
    CHECK((e(ex) - ex).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((e(Matrix::Identity(d, d)) - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix positive = x * x.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(e(positive)));
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    CHECK((e(model.evolve(x, 1)) - model.evolve(ex, 1)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((model.evolve(ex, 1) - ex).cwiseAbs().maxCoeff() <= 1e-10);
    const Labeled tr = trace_state(d);
    CHECK(std::abs(model.expectation_value(tr, {x, ""}) - model.state_value(tr, {x, ""})) <= 1e-12);
  }
}

TEST_CASE("quantum specs") {
  CHECK(QuantumModel::parse(3, "identity").unitary() == Matrix::Identity(3, 3));
  const auto m = QuantumModel::parse(3, "diag:1,-1i,0.6+0.8i");
  CHECK(m.unitary()(1, 1) == Complex(0, -1));
  CHECK(m.unitary()(2, 2) == Complex(0.6, 0.8));
  CHECK_THROWS_AS(QuantumModel::parse(2, "diag:1,2"), ParseError);
  CHECK_THROWS_AS(QuantumModel::parse(2, "diag:1"), ParseError);
  CHECK_THROWS_AS(QuantumModel::parse(2, "hadamard"), ParseError);
  CHECK_THROWS_AS(QuantumModel(Matrix::Ones(2, 2)), DomainError);
}

TEST_CASE("orbit values agree with explicit evolution") {
  std::mt19937_64 rng(12);
  const QuantumModel model(random_unitary(rng, 3));
  const Labeled phi = random_density(3, 5);
  const Labeled x{random_matrix(rng, 3), "x"};
  for (int direction : {1, -1}) {
    const auto values = model.orbit_values(phi, x, 30, direction);
    for (std::size_t k = 0; k < values.size(); k += 7) {
      const Complex direct = (phi.value * model.evolve(x.value, direction * static_cast<long long>(k))).trace();
      CHECK(std::abs(values[k] - direct) <= 1e-10);
    }
  }
}

TEST_CASE("M2 period-two system") {
  const Labeled x = matrix_unit(2, 0, 1);
  Eigen::VectorXcd v(2);
  v << 1, 1;
  const Labeled phi = vector_state(v, "(e1+e2)/sqrt2");
  const Schedule s{1000, 1e-3, 0.25};
  const auto r = e_hierarchy_test(period2, std::span(&phi, 1), std::span(&x, 1), s);
  for (double m : r.mixing.residuals) CHECK(m == doctest::Approx(0.5).epsilon(1e-15));
  for (std::size_t k = 0; k < r.ergodic.residuals.size(); ++k) CHECK(r.ergodic.residuals[k] <= 1.0 / double(k + 1));
  CHECK(r.mixing.verdict == Verdict::fails);
  CHECK(r.ergodic.verdict == Verdict::holds);
  CHECK(r.chain_violations == 0);

  const auto states = standard_quantum_states(2, 1);
  const auto observables = standard_quantum_observables(2);
  const auto battery = e_hierarchy_test(period2, std::span(states), std::span(observables), s);
  CHECK(battery.ergodic.verdict == Verdict::holds);
  CHECK(battery.weak.verdict == Verdict::fails);
  CHECK(battery.mixing.verdict == Verdict::fails);
  CHECK(battery.chain_violations == 0);

  const auto id = e_hierarchy_test(identity2, std::span(states), std::span(observables), s);
  for (const auto* rep : {&id.ergodic, &id.weak, &id.mixing}) {
    CHECK(rep->verdict == Verdict::holds);
    for (double m : rep->residuals) CHECK(m == 0.0);
  }
}

TEST_CASE("backward runs") {
  const auto states = standard_quantum_states(2, 3);
  const auto observables = standard_quantum_observables(2);
  const Schedule s{200, 1e-3, 0.25};
  for (const QuantumModel* m : {&period2, &identity2}) {
    const auto fwd = e_hierarchy_test(*m, std::span(states), std::span(observables), s);
    const auto bwd = backward_test(*m, std::span(states), std::span(observables), s);
    CHECK(fwd.mixing.residuals == bwd.mixing.residuals);
    CHECK(fwd.ergodic.residuals == bwd.ergodic.residuals);
    CHECK(fwd.weak.verdict == bwd.weak.verdict);
  }
}

TEST_CASE("correlation tests") {
  // Cesaro means of (-1)^k and e^{2 pi i k theta} are O(1/n): 1/n_max must sit
  // well below tol across the window.
  const Schedule s{4000, 1e-3, 0.25};
  const Labeled tr = trace_state(2);
  const Labeled sx{pauli_x(), "sx"}, one{Matrix::Identity(2, 2), "1"};
  const Triple<Labeled> t{sx, sx, one};
  const auto mixing = correlation_test(period2, std::span(&t, 1), tr, s, Flavor::mixing);
  const auto ergodic = correlation_test(period2, std::span(&t, 1), tr, s, Flavor::ergodic);
  CHECK(mixing.verdict == Verdict::fails);
  for (double r : mixing.residuals) CHECK(r == doctest::Approx(1.0));
  CHECK(ergodic.verdict == Verdict::holds);

  const Triple<Labeled> unit{one, sx, sx};
  for (Flavor f : {Flavor::ergodic, Flavor::weak, Flavor::mixing})
    for (double r : correlation_test(period2, std::span(&unit, 1), tr, s, f).residuals) CHECK(r == 0.0);

  Eigen::VectorXcd v(2);
  v << 1, 1;
  CHECK_THROWS_AS(correlation_test(period2, std::span(&t, 1), vector_state(v, "plus"), s, Flavor::mixing), DomainError);

  const ClassicalModel rotation(classical::System::rotation(kGolden));
  const auto e1 = classical::Observable::fourier_mode(1);
  const auto em1 = classical::Observable::fourier_mode(-1);
  const auto c1 = classical::Observable::constant(1.0);
  const auto lebesgue = classical::State::invariant();
  const Triple<classical::Observable> degenerate{e1, e1, c1};
  for (double r : correlation_test(rotation, std::span(&degenerate, 1), lebesgue, s, Flavor::mixing).residuals)
    CHECK(r == 0.0);
  const Triple<classical::Observable> witness{e1, em1, c1};
  const auto rm = correlation_test(rotation, std::span(&witness, 1), lebesgue, s, Flavor::mixing);
  CHECK(rm.verdict == Verdict::fails);
  for (double r : rm.residuals) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(correlation_test(rotation, std::span(&witness, 1), lebesgue, s, Flavor::ergodic).verdict == Verdict::holds);
  CHECK_THROWS_AS(correlation_test(rotation, std::span(&witness, 1), classical::State::point(0.0), s, Flavor::mixing),
                  DomainError);
}

TEST_CASE("asymptotic abelianness") {
  const Labeled tr = trace_state(2);
  const Labeled sx{pauli_x(), "sx"}, sy{pauli_y(), "sy"}, sz{pauli_z(), "sz"}, one{Matrix::Identity(2, 2), "1"};
  // alpha(sx) = -sx commutes with sx, and the trace kills commutators anyway.
  const Quadruple<Labeled> flat{sx, sx, one, one};
  CHECK(asymptotic_abelianness_probe(period2, std::span(&flat, 1), tr, 100).window_max == 0.0);
  // tr/2 of [(-1)^n sx, sy] sz = (-1)^n tr(2i sz sz)/2 has modulus 2.
  const Quadruple<Labeled> witness{sx, sy, one, sz};
  const auto probe = asymptotic_abelianness_probe(period2, std::span(&witness, 1), tr, 100);
  for (double r : probe.residuals) CHECK(r == doctest::Approx(2.0));

  const ClassicalModel zinf(classical::System::z_infinity());
  const auto f = classical::Observable::inverse_square();
  const Quadruple<classical::Observable> cq{f, f, f, f};
  CHECK(asymptotic_abelianness_probe(zinf, std::span(&cq, 1), classical::State::point(std::int64_t{0}), 50).window_max ==
        0.0);

  const FreeShiftModel free(GeneratorMap::pure_shift(1));
  const auto l1 = AlgebraElement::basis(Word::generator(1));
  const auto l2 = AlgebraElement::basis(Word::generator(2));
  const Quadruple<AlgebraElement> fq{l1, l2, AlgebraElement::unit(), AlgebraElement::unit()};
  for (double r : asymptotic_abelianness_probe(free, std::span(&fq, 1), FreeState::trace(), 40).residuals)
    CHECK(r == 0.0);
}

TEST_CASE("GNS spectral test") {
  const QuantumModel golden = QuantumModel::parse(2, "diag:1,exp:golden");
  const auto report = gns_spectral_test(golden, trace_state(2));
  CHECK(report.gns_dim == 4);
  CHECK(report.fixed_dim == 2);
  CHECK_FALSE(report.ergodic);
  // Oracle: alpha(E_ij) = u_i conj(u_j) E_ij, so the phases are 0, 0, +-theta mod 1.
  const double theta = kGolden - 1.0;
  REQUIRE(report.phases.size() == 4);
  CHECK(report.phases[0] == doctest::Approx(theta).epsilon(1e-12));
  CHECK(report.phases[1] == 0.0);
  CHECK(report.phases[2] == 0.0);
  CHECK(report.phases[3] == doctest::Approx(-theta).epsilon(1e-12));

  const auto id = gns_spectral_test(identity2, trace_state(2));
  CHECK(id.fixed_dim == id.gns_dim);
  CHECK(id.gns_dim == 4);
  CHECK_FALSE(id.ergodic);

  const QuantumModel point(Matrix::Identity(1, 1));
  const auto one = gns_spectral_test(point, trace_state(1));
  CHECK(one.gns_dim == 1);
  CHECK(one.ergodic);
  CHECK(one.weak_mixing);
  CHECK(one.mixing);

  // A non-faithful invariant state: the GNS space of e1 is C^2.
  const auto e1 = gns_spectral_test(period2, vector_state(Eigen::VectorXcd::Unit(2, 0), "e1"));
  CHECK(e1.gns_dim == 2);
  CHECK(e1.fixed_dim == 1);
  CHECK(e1.ergodic);
  CHECK_FALSE(e1.mixing);

  Eigen::VectorXcd v(2);
  v << 1, 1;
  CHECK_THROWS_AS(gns_spectral_test(period2, vector_state(v, "plus")), DomainError);
}

TEST_CASE("property: eigenphase witnesses keep raw mixing residuals away from zero") {
  std::mt19937_64 rng(31);
  const Schedule s{64, 1e-3, 0.25};
  for (int trial = 0; trial < 8; ++trial) {
    const int d = 2 + trial % 2;
    Eigen::VectorXcd lambda(d);
    for (int i = 0; i < d; ++i) lambda(i) = std::polar(1.0, 2.0 * std::numbers::pi * (i == 0 ? 0.0 : kGolden * i));
    const Matrix v = random_unitary(rng, d);
    const QuantumModel model(Matrix(v * lambda.asDiagonal() * v.adjoint()));
    const auto report = gns_spectral_test(model, trace_state(d));
    CHECK(report.witnesses.size() == static_cast<std::size_t>(d * d - report.fixed_dim));
    for (const auto& w : report.witnesses) {
      const auto r = e_hierarchy_test(model, std::span(&w.functional, 1), std::span(&w.element, 1), s);
      for (double m : r.mixing.residuals) CHECK(m >= 0.99);
    }
  }
}

TEST_CASE("verdict determinism") {
  const auto states = standard_quantum_states(3, 77);
  const auto observables = standard_quantum_observables(3);
  const QuantumModel model = QuantumModel::parse(3, "diag:1,exp:golden,exp:0.25");
  const Schedule s{300, 1e-3, 0.25};
  const auto a = e_hierarchy_test(model, std::span(states), std::span(observables), s, 1, 77);
  const auto b = e_hierarchy_test(model, std::span(states), std::span(observables), s, 1, 77);
  CHECK(a.mixing.residuals == b.mixing.residuals);
  CHECK(a.ergodic.residuals == b.ergodic.residuals);
  CHECK(a.weak.verdict == b.weak.verdict);
  CHECK(a.chain_violations == 0);
}

TEST_CASE("classical systems through the engine") {
  const Schedule s{10000, 1e-3, 0.25};
  const ClassicalModel rotation(classical::System::rotation(kGolden));
  const auto rstates = classical::standard_states(rotation.system());
  const auto robs = classical::standard_observables(rotation.system());
  const auto r = e_hierarchy_test(rotation, std::span(rstates), std::span(robs), s);
  CHECK(r.ergodic.verdict == Verdict::holds);
  CHECK(r.weak.verdict == Verdict::fails);
  CHECK(r.mixing.verdict == Verdict::fails);
  CHECK(r.chain_violations == 0);

  const ClassicalModel zinf(classical::System::z_infinity());
  const auto zstates = classical::standard_states(zinf.system());
  const auto zobs = classical::standard_observables(zinf.system());
  const auto z = e_hierarchy_test(zinf, std::span(zstates), std::span(zobs), s);
  CHECK(z.mixing.verdict == Verdict::holds);
  CHECK(z.weak.verdict == Verdict::holds);
  CHECK(z.ergodic.verdict == Verdict::holds);
  CHECK(z.chain_violations == 0);

  // A rational rotation: E keeps the modes with k theta in Z.
  const ClassicalModel quarter(classical::System::rotation(0.25));
  const auto e4 = classical::Observable::fourier_mode(4);
  const auto st = classical::State::point(0.1);
  const auto q = e_hierarchy_test(quarter, std::span(&st, 1), std::span(&e4, 1), Schedule{100, 1e-3, 0.25});
  CHECK(q.mixing.verdict == Verdict::holds);
}

TEST_CASE("free shift through the engine") {
  const FreeShiftModel model(GeneratorMap::pure_shift(1));
  const std::vector<Index> gens{1, 2};
  const auto states = standard_free_states(gens, 4, 11);
  const auto x = AlgebraElement::basis(Word::generator(1));
  const Schedule s{100, 1e-2, 0.25};
  const auto r = e_hierarchy_test(model, std::span(states), std::span(&x, 1), s);
  CHECK(r.mixing.verdict == Verdict::holds);
  CHECK(r.chain_violations == 0);
  CHECK(r.mixing.residuals[60] < 1e-2);

  // Oracle: |<lambda_{g_{1+n}} xi, xi>| = |sum_w xi(w) conj(xi(g_{1+n} w))| / |xi|^2.
  for (const auto& phi : states) {
    if (!phi.xi) continue;
    const auto values = model.orbit_values(phi, x, 6, 1);
    for (std::size_t n = 0; n < values.size(); ++n) {
      Complex direct = 0.0;
      const Word g = Word::generator(static_cast<Index>(1 + n));
      for (const auto& [w, c] : phi.xi->terms()) direct += c * std::conj(phi.xi->coefficient(multiply(g, w)));
      const double norm = l2_norm(*phi.xi);
      CHECK(std::abs(values[n] - direct / (norm * norm)) <= 1e-12);
      if (n >= 2) CHECK(values[n] == Complex{});
    }
  }

  const FreeShiftModel anchored(GeneratorMap::anchored_shift({0}));
  const auto y = AlgebraElement::basis(Word::generator(0)) + AlgebraElement::basis(Word::generator(1));
  const std::vector<Index> agens{0, 1};
  const auto astates = standard_free_states(agens, 3, 5);
  const auto a = e_hierarchy_test(anchored, std::span(astates), std::span(&y, 1), s);
  CHECK(a.mixing.verdict == Verdict::holds);
}

TEST_CASE("time reversal transport") {
  const FreeShiftModel model(GeneratorMap::pure_shift(1));
  const std::vector<Index> gens{-2, -1, 1, 2};
  const auto states = standard_free_states(gens, 3, 21);
  std::mt19937_64 rng(5);
  std::vector<AlgebraElement> xs{AlgebraElement::basis(Word::generator(1))};
  for (int i = 0; i < 4; ++i) xs.push_back(random_element(rng, gens, 3, 4));
  CHECK(time_reversal_gap(model, states, xs, 30) <= 1e-12);

  // Under tau the backward residuals of lambda_{g1} equal the forward ones of lambda_{g-1}.
  const auto tau = FreeState::trace();
  const auto back = model.orbit_values(tau, xs[0], 20, -1);
  const auto fwd = model.orbit_values(tau, time_reversal(xs[0]), 20, 1);
  CHECK(back == fwd);
  CHECK_THROWS_AS(time_reversal_gap(FreeShiftModel(GeneratorMap::anchored_shift({0})), states, xs, 5), DomainError);
}

TEST_CASE("subsequence certificate") {
  const FreeShiftModel model(GeneratorMap::pure_shift(1));
  const auto x = AlgebraElement::basis(Word::generator(1));
  for (const auto& seq : {SubsequenceSpec::arithmetic(1, 1), SubsequenceSpec::geometric(2), SubsequenceSpec::random(7, 3.0)}) {
    const auto r = subsequence_certificate(model, x, seq, Schedule{40, 1e-3, 0.25});
    for (std::size_t n = 1; n <= r.residuals.size(); ++n)
      CHECK(r.residuals[n - 1] == doctest::Approx(2.0 / std::sqrt(double(n))).epsilon(1e-12));
    CHECK(r.decay_exponent.value() == doctest::Approx(-0.5).epsilon(1e-9));
  }
  const auto fixed = subsequence_certificate(model, AlgebraElement::unit(), SubsequenceSpec::arithmetic(1, 1),
                                             Schedule{16, 1e-3, 0.25});
  for (double r : fixed.residuals) CHECK(r == 0.0);
  CHECK(fixed.verdict == Verdict::holds);
}
