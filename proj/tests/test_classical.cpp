#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ergoshift/classical.hpp"

using namespace ergoshift::classical;
using ergoshift::DomainError;
using ergoshift::ParseError;

namespace {

const System golden = System::rotation(kGolden);
const System zinf = System::z_infinity();

Point random_point(std::mt19937_64& rng, const System& sys) {
  switch (sys.kind()) {
    case System::Kind::rotation:
      return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    case System::Kind::z_infinity: {
      const auto m = std::uniform_int_distribution<std::int64_t>(-30, 31)(rng);
      if (m == 31) return Infinity{};
      return m;
    }
    case System::Kind::cycle:
      return std::uniform_int_distribution<std::int64_t>(0, sys.modulus() - 1)(rng);
  }
  return 0.0;
}

Observable random_observable(std::mt19937_64& rng, const System& sys) {
  std::normal_distribution<double> g;
  switch (sys.kind()) {
    case System::Kind::rotation:
      return Observable::random_trig(3, rng());
    case System::Kind::z_infinity: {
      std::map<std::int64_t, Complex> table;
      for (int i = 0; i < 5; ++i) table[std::uniform_int_distribution<std::int64_t>(-10, 10)(rng)] = {g(rng), g(rng)};
      return Observable::tail_table(std::move(table), {g(rng), 0.0});
    }
    case System::Kind::cycle: {
      std::vector<Complex> values(static_cast<std::size_t>(sys.modulus()));
      for (auto& v : values) v = {g(rng), g(rng)};
      return Observable::table(std::move(values));
    }
  }
  return Observable::constant(1.0);
}

}  // namespace

TEST_CASE("evolve") {
  CHECK(std::get<double>(System::rotation(0.25).evolve(0.0, 2)) == 0.5);
  CHECK(std::get<Infinity>(zinf.evolve(Infinity{}, 12345)) == Infinity{});
  CHECK(std::get<std::int64_t>(zinf.evolve(std::int64_t{3}, -5)) == -2);
  CHECK(std::get<std::int64_t>(System::cycle(3).evolve(std::int64_t{2}, 2)) == 1);
  CHECK(std::get<std::int64_t>(System::cycle(3).evolve(std::int64_t{2}, -7)) == 1);
  CHECK_THROWS_AS(System::cycle(3).evolve(std::int64_t{3}, 1), DomainError);
  CHECK_THROWS_AS(System::rotation(1.5), DomainError);
}

TEST_CASE("system specs") {
  CHECK(System::parse("zinf") == zinf);
  CHECK(System::parse("cycle:m=5") == System::cycle(5));
  CHECK(System::parse("rotation:theta=0.25") == System::rotation(0.25));
  CHECK(System::parse("rotation:theta=golden") == golden);
  for (const System& s : {golden, zinf, System::cycle(7)}) CHECK(System::parse(s.to_string()) == s);
  CHECK_THROWS_AS(System::parse("rotation:theta=2"), ParseError);
  CHECK_THROWS_AS(System::parse("cycle:n=2"), ParseError);
  CHECK_THROWS_AS(System::parse("torus"), ParseError);
  CHECK(std::holds_alternative<Infinity>(parse_point("inf")));
  CHECK(std::get<std::int64_t>(parse_point("-4")) == -4);
  CHECK(std::get<double>(parse_point("0.25")) == 0.25);
}

TEST_CASE("property: metric axioms") {
  std::mt19937_64 rng(1);
  for (const System& sys : {golden, zinf, System::cycle(9)}) {
    for (int trial = 0; trial < 300; ++trial) {
      const Point x = random_point(rng, sys), y = random_point(rng, sys), z = random_point(rng, sys);
      CHECK(sys.distance(x, x) == 0.0);
      CHECK(sys.distance(x, y) == sys.distance(y, x));
      if (x != y) CHECK(sys.distance(x, y) > 0.0);
      CHECK(sys.distance(x, z) <= sys.distance(x, y) + sys.distance(y, z) + 1e-15);
    }
  }
}

TEST_CASE("Birkhoff averages") {
  const Observable e1 = Observable::fourier_mode(1);
  for (std::size_t n : {1, 7, 100, 1000}) {
    const double theta = kGolden;
    const double closed = std::abs(std::sin(std::numbers::pi * n * theta)) / (n * std::sin(std::numbers::pi * theta));
    const Complex avg = birkhoff_average(golden, e1, State::point(0.0), n);
    CHECK(std::abs(avg) == doctest::Approx(closed).epsilon(1e-10));
  }
  CHECK(std::abs(birkhoff_average(golden, e1, State::point(0.0), 100)) <= 0.0108);

  for (const System& sys : {golden, zinf, System::cycle(4)})
    for (std::size_t n : {1, 5, 50}) {
      const Point x0 = sys.kind() == System::Kind::rotation ? Point{0.0} : Point{std::int64_t{0}};
      CHECK(birkhoff_average(sys, Observable::constant(1.0), State::point(x0), n) == Complex{1.0});
    }

  const Observable bump = Observable::tail_table({{0, 1.0}}, 0.0);
  CHECK(birkhoff_average(zinf, bump, State::point(std::int64_t{0}), 10) == Complex{0.1});
  CHECK_THROWS_AS(birkhoff_average(zinf, bump, State::point(std::int64_t{0}), 0), DomainError);
  CHECK_THROWS_AS(birkhoff_average(golden, bump, State::point(0.0), 3), DomainError);
}

TEST_CASE("mixing residuals") {
  const auto zr = mixing_residuals(zinf, Observable::inverse_square(), State::point(std::int64_t{0}), 50);
  for (std::size_t n = 0; n < zr.size(); ++n) CHECK(zr[n] == doctest::Approx(1.0 / (1.0 + double(n * n))));

  const auto rr = mixing_residuals(golden, Observable::fourier_mode(1), State::point(0.0), 200);
  for (double r : rr) CHECK(r == doctest::Approx(1.0).epsilon(1e-14));

  const System one = System::cycle(1);
  for (double r : mixing_residuals(one, Observable::table({2.5}), State::point(std::int64_t{0}), 20)) CHECK(r == 0.0);
}

TEST_CASE("property: telescoping and invariance") {
  std::mt19937_64 rng(17);
  for (const System& sys : {golden, System::rotation(0.1234), zinf, System::cycle(6)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Observable f = random_observable(rng, sys);
      const State phi = trial % 3 == 0 ? State::mixture({{0.25, random_point(rng, sys)}, {0.75, random_point(rng, sys)}})
                                       : State::point(random_point(rng, sys));
      const std::size_t n = 1 + static_cast<std::size_t>(trial) * 7;
      const Complex shifted = birkhoff_average(sys, compose(sys, f, 1), phi, n);
      const Complex plain = birkhoff_average(sys, f, phi, n);
      CHECK(std::abs(shifted - plain) <= 2.0 * f.sup_bound() / n + 1e-12);
      CHECK(birkhoff_average(sys, f, State::invariant(), n) == f.invariant_mean(sys));
    }
  }
}

TEST_CASE("property: observable algebra agrees pointwise") {
  std::mt19937_64 rng(23);
  for (const System& sys : {golden, zinf, System::cycle(5)}) {
    for (int trial = 0; trial < 30; ++trial) {
      const Observable f = random_observable(rng, sys);
      const Observable g = random_observable(rng, sys);
      const Point x = random_point(rng, sys);
      const auto n = std::uniform_int_distribution<std::int64_t>(-50, 50)(rng);
      const double tol = 1e-10 * (1.0 + f.sup_bound() * g.sup_bound());
      CHECK(std::abs(compose(sys, f, n)(x) - f(sys.evolve(x, n))) <= tol);
      CHECK(std::abs(multiply(f, g)(x) - f(x) * g(x)) <= tol);
      CHECK(std::abs(add(f, g)(x) - (f(x) + g(x))) <= tol);
      CHECK(std::abs(conjugate(f)(x) - std::conj(f(x))) <= tol);
      CHECK(std::abs(f(x)) <= f.sup_bound() + 1e-12);
    }
  }
}

TEST_CASE("rotation weak-mixing failure is exact") {
  const Observable e1 = Observable::fourier_mode(1);
  const auto r = mixing_residuals(golden, e1, State::point(0.0), 1000);
  double sum = 0.0;
  for (std::size_t n = 0; n < r.size(); ++n) {
    sum += r[n];
    CHECK(std::abs(sum / double(n + 1) - 1.0) <= 1e-12);
  }
}

TEST_CASE("transitive subsequence") {
  const auto times = transitive_subsequence(golden, 0.0, 0.25, 10);
  CHECK(times.level_times[9] == 2);
  CHECK(golden.distance(0.25, golden.evolve(0.0, 2)) == doctest::Approx(0.0139320225));

  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto t = transitive_subsequence(golden, 0.0, x, 20);
    for (int l = 1; l <= 20; ++l) {
      const double d_level = golden.distance(x, golden.evolve(0.0, t.level_times[l - 1]));
      const double d_sub = golden.distance(x, golden.evolve(0.0, t.subsequence[l - 1]));
      CHECK(d_level > 0.0);
      CHECK(d_level < 1.0 / l);
      CHECK(d_sub > 0.0);
      CHECK(d_sub < 1.0 / l);
      CHECK(t.level_times[l - 1] >= 1);
      if (l > 1) {
        CHECK(t.subsequence[l - 1] > t.subsequence[l - 2]);
        CHECK(t.level_times[l - 1] >= t.level_times[l - 2]);
      }
    }
  }

  // x = x0 is allowed as a target; n = 0 never counts.
  const auto self = transitive_subsequence(golden, 0.0, 0.0, 5);
  for (auto n : self.level_times) CHECK(n >= 1);

  const System c4 = System::cycle(4);
  const auto ok = transitive_subsequence(c4, std::int64_t{0}, std::int64_t{2}, 3);
  CHECK(ok.level_times == std::vector<std::int64_t>{1, 1, 1});
  try {
    transitive_subsequence(c4, std::int64_t{0}, std::int64_t{2}, 5);
    FAIL("expected search budget exhaustion");
  } catch (const SearchBudgetExhausted& e) {
    CHECK(e.level() == 4);
  }
  CHECK_THROWS_AS(transitive_subsequence(System::cycle(1), std::int64_t{0}, std::int64_t{0}, 1), SearchBudgetExhausted);
}

TEST_CASE("support probe") {
  const auto z = support_probe(zinf, std::int64_t{0}, 10000, 0.01);
  CHECK(z.singleton);
  CHECK(std::holds_alternative<Infinity>(z.center));
  CHECK(z.center_mass == doctest::Approx(0.9901));

  const auto r = support_probe(golden, 0.0, 10000, 0.01);
  CHECK_FALSE(r.singleton);
  CHECK(r.cell_masses.size() == 100);
  for (double m : r.cell_masses) CHECK(m == doctest::Approx(0.01).epsilon(0.2));
  CHECK(r.center_mass == doctest::Approx(0.02).epsilon(0.2));

  const auto one = support_probe(System::cycle(1), std::int64_t{0}, 50);
  CHECK(one.singleton);
  CHECK(std::get<std::int64_t>(one.center) == 0);

  const auto c = support_probe(System::cycle(5), std::int64_t{0}, 100);
  CHECK_FALSE(c.singleton);
  CHECK(c.cell_masses.size() == 5);
}

TEST_CASE("triviality verdicts") {
  const std::size_t horizon = 10000;
  const auto zb = standard_battery(zinf, horizon);
  const auto zt = triviality_verdict(zb, support_probe(zinf, std::int64_t{0}, horizon));
  CHECK(zt.verdict == Triviality::consistent);

  const auto rb = standard_battery(golden, 2000);
  const auto rt = triviality_verdict(rb, support_probe(golden, 0.0, 2000));
  CHECK(rt.verdict == Triviality::neutral);
  CHECK_FALSE(rt.residuals_decay);
  CHECK_FALSE(rt.support_singleton);

  const System one = System::cycle(1);
  const auto ot = triviality_verdict(standard_battery(one, 100), support_probe(one, std::int64_t{0}, 100));
  CHECK(ot.verdict == Triviality::consistent);

  for (const System& sys : {System::cycle(2), System::cycle(7), System::rotation(0.5 * std::numbers::sqrt2)}) {
    const Point x0 = sys.kind() == System::Kind::rotation ? Point{0.0} : Point{std::int64_t{0}};
    const auto t = triviality_verdict(standard_battery(sys, 1000), support_probe(sys, x0, 1000));
    CHECK(t.verdict != Triviality::violation_flag);
  }

  // The tripwire itself: decaying spanning family with a spread-out support.
  ProbeBattery fake;
  fake.spanning = true;
  fake.residuals.push_back(std::vector<double>(40, 0.0));
  const auto flagged = triviality_verdict(fake, support_probe(golden, 0.0, 1000));
  CHECK(flagged.verdict == Triviality::violation_flag);
  CHECK(to_string(flagged.verdict) == "VIOLATION-FLAG");
}
