#include "ergoshift/acceptance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "ergoshift/classical.hpp"
#include "ergoshift/hierarchy.hpp"
#include "ergoshift/repr.hpp"
#include "ergoshift/sampling.hpp"

namespace ergoshift {

namespace {

using hierarchy::Verdict;
using Clock = std::chrono::steady_clock;

// Collects failures; `detail` keeps the first few.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++total_;
    if (ok) return;
    ++failed_;
    if (failed_ <= 3) failures_ += (failures_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& text) { notes_ += (notes_.empty() ? "" : "; ") + text; }
  bool ok() const { return failed_ == 0; }
  std::string detail() const {
    if (ok()) return std::to_string(total_) + " checks" + (notes_.empty() ? "" : "; " + notes_);
    return std::to_string(failed_) + "/" + std::to_string(total_) + " failed: " + failures_;
  }

 private:
  std::size_t total_ = 0, failed_ = 0;
  std::string failures_, notes_;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

CheckResult timed(std::string name, double budget, const std::function<void(Tally&)>& body) {
  Tally t;
  const auto start = Clock::now();
  try {
    body(t);
  } catch (const std::exception& e) {
    t.check(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (budget > 0.0) t.check(seconds < budget, "runtime " + fmt(seconds, 3) + " s over budget " + fmt(budget, 3) + " s");
  return {std::move(name), t.ok(), t.detail(), seconds, budget};
}

AlgebraElement generator(Index i) { return AlgebraElement::basis(Word::generator(i)); }

void criterion_cesaro_decay(Tally& t) {
  const auto sigma = GeneratorMap::pure_shift(1);
  const auto x = generator(1);
  const std::vector<int> radius{8};
  double worst = 0.0;
  for (const auto& seq : {SubsequenceSpec::arithmetic(1, 1), SubsequenceSpec::geometric(2), SubsequenceSpec::random(7)}) {
    for (std::size_t n : {4, 16, 64}) {
      const auto mean = cesaro_mean(sigma, x, seq, n);
      const auto interval = estimate_norm(mean, radius, 500, 1);
      const double rn = std::sqrt(static_cast<double>(n));
      const std::string at = seq.to_string() + " n=" + std::to_string(n);
      t.check(interval.lower >= 1.0 / rn - 1e-12, at + ": lower below 1/sqrt(n)");
      t.check(interval.lower <= interval.upper, at + ": lower above upper");
      t.check(interval.upper <= 2.0 / rn + 1e-12, at + ": upper above 2/sqrt(n)");
      t.check(interval.upper <= 3.0 / rn + 1e-12, at + ": upper above 3/sqrt(n)");
      const double reference = 2.0 * std::sqrt(static_cast<double>(n - 1)) / static_cast<double>(n);
      const double rel = (interval.power_lower.at(0) - reference) / reference;
      worst = std::max(worst, std::abs(rel));
      t.check(std::abs(rel) <= 0.05, at + ": R=8 power estimate off by " + fmt(100 * rel, 3) + "%");
    }
  }
  t.note("worst R=8 deviation " + fmt(100 * worst, 3) + "%");
}

void criterion_l2_identity(Tally& t) {
  std::mt19937_64 rng(2024);
  const auto sigma = GeneratorMap::pure_shift(1);
  const std::vector<Index> gens{-3, -2, -1, 1, 2, 3};
  std::uniform_int_distribution<int> kind(0, 3), length(1, 4), count(1, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const Word g = random_word(rng, gens, static_cast<std::size_t>(length(rng)));
    const std::size_t n = static_cast<std::size_t>(count(rng));
    SubsequenceSpec seq = SubsequenceSpec::arithmetic(0, 1);
    switch (kind(rng)) {
      case 0:
        seq = SubsequenceSpec::arithmetic(static_cast<Index>(rng() % 5), 1 + static_cast<Index>(rng() % 4));
        break;
      case 1:
        seq = SubsequenceSpec::geometric(2 + static_cast<Index>(rng() % 2));
        break;
      case 2:
        seq = SubsequenceSpec::random(rng(), 1.0 + static_cast<double>(rng() % 5));
        break;
      default: {
        std::vector<Index> terms;
        Index k = static_cast<Index>(rng() % 3);
        for (std::size_t j = 0; j < n; ++j) terms.push_back(k += 1 + static_cast<Index>(rng() % 3));
        seq = SubsequenceSpec::explicit_list(std::move(terms));
      }
    }
    const double l2 = l2_norm(cesaro_mean(sigma, AlgebraElement::basis(g), seq, n));
    t.check(std::abs(l2 - 1.0 / std::sqrt(static_cast<double>(n))) <= 1e-12,
            to_string(g) + " " + seq.to_string() + " n=" + std::to_string(n));
  }
}

// Dense truncation assembled from the group law on the ball's words.
Eigen::MatrixXcd dense_truncation(const AlgebraElement& x, const BallIndex& ball) {
  const auto dim = static_cast<Eigen::Index>(ball.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t col = 0; col < ball.size(); ++col)
    for (const auto& [u, c] : x.terms())
      if (const auto row = ball.position(multiply(u, ball.word(col)))) m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += c;
  return m;
}

void criterion_haagerup_sandwich(Tally& t) {
  std::mt19937_64 rng(3);
  const std::vector<Index> gens{1, 2};
  const auto ball = enumerate_ball({1, 2}, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_element(rng, gens, 3, 1 + static_cast<std::size_t>(trial % 6));
    const double dense = Eigen::JacobiSVD<Eigen::MatrixXcd>(dense_truncation(x, ball)).singularValues()(0);
    const double upper = norm_upper_bound_haagerup(x);
    const double power = norm_lower_bound(x, 4, 20000, static_cast<std::uint64_t>(trial));
    worst = std::max(worst, std::abs(power - dense));
    t.check(dense <= upper + 1e-9, to_string(x) + ": dense " + fmt(dense) + " above Haagerup " + fmt(upper));
    t.check(std::abs(power - dense) <= 1e-6, to_string(x) + ": power " + fmt(power, 12) + " vs dense " + fmt(dense, 12));
  }
  t.note("worst |power - dense| " + fmt(worst, 3));
}

void criterion_kesten(Tally& t) {
  const auto x = parse_element("g1 + g1' + g2 + g2'");
  const std::vector<int> radii{6, 8, 10};
  const auto bounds = norm_lower_bounds(x, radii, 500, 1);
  const double upper = norm_upper_bound_haagerup(x);
  t.check(upper == 4.0, "Haagerup bound " + fmt(upper) + " != 4");
  for (std::size_t i = 0; i < bounds.size(); ++i)
    t.check(bounds[i] <= upper, "R=" + std::to_string(radii[i]) + " estimate above 4");
  const double limit = richardson_extrapolate(radii, bounds);
  const double target = 2.0 * std::sqrt(3.0);
  t.check(std::abs(limit - target) / target <= 0.02, "extrapolated " + fmt(limit) + " vs 2 sqrt3");
  t.note("R=6,8,10: " + fmt(bounds[0]) + ", " + fmt(bounds[1]) + ", " + fmt(bounds[2]) + " -> " + fmt(limit));
}

std::vector<std::size_t> g_chain_violations;

void record_chain(const hierarchy::HierarchyReports& r) { g_chain_violations.push_back(r.chain_violations); }

void criterion_classical(Tally& t) {
  using namespace classical;
  const hierarchy::Schedule s{10000, 1e-3, 0.25};

  const System golden = System::rotation(kGolden);
  const hierarchy::ClassicalModel rotation(golden);
  const auto rstates = standard_states(golden);
  const auto robs = standard_observables(golden);
  const auto r = hierarchy::e_hierarchy_test(rotation, std::span(rstates), std::span(robs), s);
  record_chain(r);
  t.check(r.ergodic.verdict == Verdict::holds, "rotation: E-ergodic not holds");
  t.check(r.weak.verdict == Verdict::fails, "rotation: E-weak-mixing not fails");
  const hierarchy::Triple<Observable> witness{Observable::fourier_mode(1), Observable::fourier_mode(-1),
                                              Observable::constant(1.0)};
  const auto weak = hierarchy::correlation_test(rotation, std::span(&witness, 1), State::invariant(), s,
                                                hierarchy::Flavor::weak);
  t.check(weak.verdict == Verdict::fails, "rotation: witness weak-mixing not fails");
  for (double v : weak.residuals) t.check(std::abs(v - 1.0) <= 1e-12, "rotation: witness residual " + fmt(v, 17));

  const System zinf = System::z_infinity();
  const hierarchy::ClassicalModel zmodel(zinf);
  const auto zstates = standard_states(zinf);
  const auto zobs = standard_observables(zinf);
  const auto z = hierarchy::e_hierarchy_test(zmodel, std::span(zstates), std::span(zobs), s);
  record_chain(z);
  t.check(z.mixing.verdict == Verdict::holds, "zinf: mixing not holds");
  const std::size_t w = s.window_size(z.mixing.residuals.size());
  const double window_max = *std::max_element(z.mixing.residuals.end() - static_cast<std::ptrdiff_t>(w), z.mixing.residuals.end());
  t.check(window_max < 1e-3, "zinf: window max " + fmt(window_max));
  const auto zsupport = support_probe(zinf, std::int64_t{0}, 10000);
  t.check(zsupport.singleton && std::holds_alternative<Infinity>(zsupport.center), "zinf: support not singleton(inf)");

  const std::vector<std::pair<System, Point>> systems{
      {zinf, std::int64_t{0}}, {System::cycle(1), std::int64_t{0}}, {golden, 0.0}};
  const Triviality expected[] = {Triviality::consistent, Triviality::consistent, Triviality::neutral};
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const auto& [sys, x0] = systems[i];
    const auto verdict = triviality_verdict(standard_battery(sys, 10000), support_probe(sys, x0, 10000));
    t.check(verdict.verdict != Triviality::violation_flag, sys.to_string() + ": VIOLATION-FLAG");
    t.check(verdict.verdict == expected[i], sys.to_string() + ": triviality " + to_string(verdict.verdict));
  }
  t.note("zinf window max " + fmt(window_max, 3));
}

void criterion_transitive(Tally& t) {
  using namespace classical;
  const System golden = System::rotation(kGolden);
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double x = unit(rng);
    const auto times = transitive_subsequence(golden, 0.0, x, 20);
    for (std::size_t i = 0; i < times.subsequence.size(); ++i) {
      const double l = static_cast<double>(i + 1);
      if (i > 0) t.check(times.subsequence[i] > times.subsequence[i - 1], "subsequence not increasing");
      for (std::int64_t n : {times.subsequence[i], times.level_times[i]}) {
        const double d = golden.distance(x, golden.evolve(0.0, n));
        t.check(d > 0.0 && d < 1.0 / l, "x=" + fmt(x) + " level " + std::to_string(i + 1) + ": d=" + fmt(d));
      }
    }
    t.check(times.subsequence.size() == 20, "fewer than 20 levels");
  }
  const auto quarter = transitive_subsequence(golden, 0.0, 0.25, 10);
  t.check(quarter.level_times.at(9) == 2, "level 10 at x=0.25 gave " + std::to_string(quarter.level_times.at(9)));
}

void criterion_quantum(Tally& t) {
  using namespace hierarchy;
  const Schedule s{1000, 1e-3, 0.25};
  const QuantumModel period2 = QuantumModel::parse(2, "diag:1,-1");
  const auto states = standard_quantum_states(2, 1);
  const auto observables = standard_quantum_observables(2);
  const auto r = e_hierarchy_test(period2, std::span(states), std::span(observables), s);
  record_chain(r);
  t.check(r.ergodic.verdict == Verdict::holds, "diag(1,-1): E-ergodic not holds");
  t.check(r.mixing.verdict == Verdict::fails, "diag(1,-1): E-mixing not fails");
  Eigen::VectorXcd v(2);
  v << 1, 1;
  const Labeled phi = vector_state(v, "(e1+e2)/sqrt2");
  const Labeled x = matrix_unit(2, 0, 1);
  const auto witness = e_hierarchy_test(period2, std::span(&phi, 1), std::span(&x, 1), s);
  record_chain(witness);
  for (double m : witness.mixing.residuals) t.check(m == 0.5, "witness residual " + fmt(m, 17));

  const QuantumModel identity = QuantumModel::parse(2, "identity");
  const auto id = e_hierarchy_test(identity, std::span(states), std::span(observables), s);
  record_chain(id);
  t.check(id.mixing.verdict == Verdict::holds, "identity: E-mixing not holds");
  for (double m : id.mixing.residuals) t.check(m == 0.0, "identity residual " + fmt(m, 17));

  const QuantumModel golden = QuantumModel::parse(2, "diag:1,exp:golden");
  const auto gns = gns_spectral_test(golden, trace_state(2));
  t.check(gns.fixed_dim == 2, "GNS fixed dimension " + std::to_string(gns.fixed_dim));
  t.check(!gns.ergodic, "GNS reports ergodic");
  // Oracle: the superoperator U (x) conj(U) on the 4-dimensional space.
  const Matrix& u = golden.unitary();
  Eigen::MatrixXcd super(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) super(2 * i + j, 2 * k + l) = u(i, k) * std::conj(u(j, l));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(super);
  std::vector<double> phases;
  int fixed = 0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    const Complex lambda = eig.eigenvalues()(i);
    if (std::abs(lambda - 1.0) < 1e-9) ++fixed;
    phases.push_back(std::arg(lambda) / (2.0 * std::numbers::pi));
  }
  std::sort(phases.begin(), phases.end());
  t.check(fixed == gns.fixed_dim, "oracle fixed dimension " + std::to_string(fixed));
  t.check(phases.size() == gns.phases.size(), "phase count");
  for (std::size_t i = 0; i < std::min(phases.size(), gns.phases.size()); ++i)
    t.check(std::abs(phases[i] - gns.phases[i]) <= 1e-9, "phase " + fmt(gns.phases[i]) + " vs oracle " + fmt(phases[i]));
}

void criterion_time_reversal(Tally& t) {
  using namespace hierarchy;
  const FreeShiftModel model(GeneratorMap::pure_shift(1));
  const auto sigma = GeneratorMap::pure_shift(1);
  const auto inverse = GeneratorMap::pure_shift(-1);
  const std::vector<Index> gens{-2, -1, 1, 2};
  std::mt19937_64 rng(8);
  std::vector<AlgebraElement> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(random_element(rng, gens, 3, 1 + static_cast<std::size_t>(i % 5)));
  for (const auto& x : xs) {
    t.check(time_reversal(time_reversal(x)) == x, "theta^2 != id on " + to_string(x));
    t.check(time_reversal(shift(sigma, x)) == shift(inverse, time_reversal(x)), "theta alpha != alpha^-1 theta");
    t.check(trace(time_reversal(x)) == trace(x), "tau theta != tau");
  }
  const auto states = standard_free_states(gens, 3, 21);
  const std::span<const AlgebraElement> sample(xs.data(), 10);
  const double gap = time_reversal_gap(model, states, sample, 100);
  t.check(gap <= 1e-12, "forward/backward gap " + fmt(gap));
  t.note("gap " + fmt(gap, 3));
}

void criterion_chain(Tally& t) {
  t.check(!g_chain_violations.empty(), "no reports recorded");
  std::size_t total = 0;
  for (std::size_t v : g_chain_violations) total += v;
  t.check(total == 0, std::to_string(total) + " chain violations");
  t.note(std::to_string(g_chain_violations.size()) + " reports");
}


void invariant_words(Tally& t) {
  std::mt19937_64 rng(11);
  const std::vector<Index> gens{-3, -1, 0, 2, 5};
  for (int trial = 0; trial < 300; ++trial) {
    const Word a = random_word(rng, gens, rng() % 6), b = random_word(rng, gens, rng() % 6),
               c = random_word(rng, gens, rng() % 6);
    t.check(parse_word(to_string(a)) == a, "word round-trip " + to_string(a));
    t.check(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)), "word associativity");
    t.check(multiply(a, invert(a)).is_identity(), "w w^-1 != e");
    t.check(reverse_indices(reverse_indices(a)) == a, "index reversal not an involution");
  }
}

double l2_distance(const AlgebraElement& x, const AlgebraElement& y) { return l2_norm(x - y); }

void invariant_algebra(Tally& t) {
  std::mt19937_64 rng(12);
  const std::vector<Index> gens{-1, 1, 2};
  const auto sigma = GeneratorMap::pure_shift(1);
  const auto anchored = GeneratorMap::anchored_shift({1});
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_element(rng, gens, 2, 3), y = random_element(rng, gens, 2, 3),
               z = random_element(rng, gens, 2, 3);
    const double scale = 1.0 + l2_norm(x) * l2_norm(y) * l2_norm(z);
    t.check(l2_distance((x * y) * z, x * (y * z)) <= 1e-12 * scale, "convolution associativity");
    t.check(l2_distance(adjoint(x * y), adjoint(y) * adjoint(x)) <= 1e-12 * scale, "(xy)* != y*x*");
    t.check(std::abs(trace(adjoint(x) * x) - l2_norm(x) * l2_norm(x)) <= 1e-12 * scale, "tau(x*x) != |x|^2");
    t.check(parse_element(to_string(x)) == x, "element round-trip");
    for (const auto* map : {&sigma, &anchored}) {
      t.check(l2_distance(shift(*map, x * y), shift(*map, x) * shift(*map, y)) <= 1e-12 * scale, "shift not multiplicative");
      const auto ex = conditional_expectation(*map, x);
      t.check(conditional_expectation(*map, ex) == ex, "E not idempotent");
      t.check(conditional_expectation(*map, shift(*map, x)) == ex, "E alpha != E");
      t.check(trace(shift(*map, x)) == trace(x), "tau alpha != tau");
    }
    const double lower = norm_lower_bound(x, 3, 200, static_cast<std::uint64_t>(trial));
    t.check(lower <= norm_upper_bound_haagerup(x) + 1e-9, "power lower bound above Haagerup bound");
  }
}

void invariant_specs(Tally& t) {
  for (const char* text : {"arith:0,1", "arith:3,7", "geom:2", "list:1,4,9", "random:seed=7,gap=3"}) {
    const auto seq = SubsequenceSpec::parse(text);
    t.check(SubsequenceSpec::parse(seq.to_string()) == seq, std::string("subsequence round-trip ") + text);
  }
  for (const char* text : {"pure:1", "pure:-2", "anchored:0,3", "identity"})
    t.check(GeneratorMap::parse(text).spec() == text, std::string("generator map round-trip ") + text);
  for (const char* text : {"rotation:theta=0.25", "zinf", "cycle:m=5"}) {
    const auto sys = classical::System::parse(text);
    t.check(classical::System::parse(sys.to_string()) == sys, std::string("system round-trip ") + text);
  }
}

void invariant_metrics(Tally& t) {
  using namespace classical;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> integer(-50, 50);
  const std::vector<System> systems{System::rotation(kGolden), System::z_infinity(), System::cycle(7)};
  for (const auto& sys : systems) {
    auto point = [&]() -> Point {
      if (sys.kind() == System::Kind::rotation) return unit(rng);
      if (sys.kind() == System::Kind::cycle) return std::int64_t{integer(rng) + 50} % 7;
      if (rng() % 5 == 0) return Infinity{};
      return integer(rng);
    };
    for (int trial = 0; trial < 200; ++trial) {
      const Point a = point(), b = point(), c = point();
      t.check(sys.distance(a, a) == 0.0, sys.to_string() + ": d(a,a) != 0");
      t.check(sys.distance(a, b) == sys.distance(b, a), sys.to_string() + ": asymmetric");
      t.check(sys.distance(a, c) <= sys.distance(a, b) + sys.distance(b, c) + 1e-15, sys.to_string() + ": triangle");
      t.check(sys.distance(sys.evolve(sys.evolve(a, 3), -3), a) <= 1e-12, sys.to_string() + ": T^-3 T^3 != id");
    }
  }
}

void invariant_quantum(Tally& t) {
  using namespace hierarchy;
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    Matrix a(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) a(i, j) = {g(rng), g(rng)};
    const Matrix v = Eigen::HouseholderQR<Matrix>(a).householderQ() * Matrix::Identity(d, d);
    Eigen::VectorXcd lambda(d);
    for (int i = 0; i < d; ++i) lambda(i) = std::polar(1.0, 2.0 * std::numbers::pi * (i % 2 == 0 ? 0.0 : classical::kGolden * i));
    const QuantumModel model(Matrix(v * lambda.asDiagonal() * v.adjoint()));
    Matrix x(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) x(i, j) = {g(rng), g(rng)};
    const auto& e = model.expectation();
    const Matrix ex = e(x);
    t.check((e(ex) - ex).cwiseAbs().maxCoeff() <= 1e-10, "E not idempotent");
    t.check((model.evolve(ex, 1) - ex).cwiseAbs().maxCoeff() <= 1e-10, "E x not fixed");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(e(Matrix(x * x.adjoint()))));
    t.check(eig.eigenvalues().minCoeff() >= -1e-10, "E not positive");
  }
}

void invariant_chain(Tally& t) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Complex> values(1 + rng() % 300);
    for (auto& v : values) v = {g(rng), g(rng)};
    t.check(hierarchy::chain_violations(hierarchy::flavor_sequences(values, Complex{g(rng), 0.0})) == 0,
            "chain violated");
  }
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
  return {timed("invariants: words", 0, invariant_words),       timed("invariants: algebra", 0, invariant_algebra),
          timed("invariants: specs", 0, invariant_specs),       timed("invariants: metrics", 0, invariant_metrics),
          timed("invariants: quantum", 0, invariant_quantum),   timed("invariants: chain", 0, invariant_chain)};
}

std::vector<CheckResult> run_acceptance() {
  g_chain_violations.clear();
  std::vector<CheckResult> out;
  out.push_back(timed("criterion 1: free-shift Cesaro decay", 60, criterion_cesaro_decay));
  out.push_back(timed("criterion 2: exact l2 identity", 1, criterion_l2_identity));
  out.push_back(timed("criterion 3: Haagerup sandwich", 30, criterion_haagerup_sandwich));
  out.push_back(timed("criterion 4: Kesten-type norm", 60, criterion_kesten));
  out.push_back(timed("criterion 5: classical discrimination", 30, criterion_classical));
  out.push_back(timed("criterion 6: transitive subsequence", 5, criterion_transitive));
  out.push_back(timed("criterion 7: quantum hierarchy", 5, criterion_quantum));
  out.push_back(timed("criterion 8: time reversal", 5, criterion_time_reversal));
  out.push_back(timed("criterion 9: implication chain", 0, criterion_chain));
  return out;
}

bool print_results(std::ostream& out, const std::vector<CheckResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << fmt(r.seconds, 3) << " s";
    if (r.budget_seconds > 0) out << " of " << fmt(r.budget_seconds, 3) << " s";
    out << "): " << r.detail << "\n";
  }
  return all;
}

}  // namespace ergoshift
