#include "ergoshift/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "text.hpp"

namespace ergoshift::classical {

namespace {

double wrap_unit(double v) {
  double r = std::fmod(v, 1.0);
  if (r < 0.0) r += 1.0;
  if (r >= 1.0) r = 0.0;
  return r;
}

double rotation_offset(double theta, std::int64_t n) { return wrap_unit(static_cast<double>(n) * theta); }

double tail_radius(const Point& x) {
  if (std::holds_alternative<Infinity>(x)) return 0.0;
  const auto m = std::get<std::int64_t>(x);
  return 1.0 / (1.0 + std::abs(static_cast<double>(m)));
}

Complex unit_phase(double t) {
  const double a = 2.0 * std::numbers::pi * t;
  return {std::cos(a), std::sin(a)};
}

}  // namespace

Point parse_point(std::string_view text) {
  text = detail::trim_view(text);
  if (text == "inf") return Infinity{};
  if (text.find_first_of(".eE") != text.npos) return detail::parse_double(text);
  return detail::parse_integer<std::int64_t>(text);
}

Point parse_point(std::string_view text, const System& sys) {
  const Point p = parse_point(text);
  if (const auto* m = std::get_if<std::int64_t>(&p); m && sys.kind() == System::Kind::rotation)
    return static_cast<double>(*m);
  return p;
}

std::string to_string(const Point& x) {
  if (std::holds_alternative<Infinity>(x)) return "inf";
  if (const auto* m = std::get_if<std::int64_t>(&x)) return std::to_string(*m);
  return detail::format_double(std::get<double>(x));
}

System System::rotation(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("rotation angle must lie in (0,1)");
  return System(Kind::rotation, theta, 0);
}

System System::z_infinity() { return System(Kind::z_infinity, 0.0, 0); }

System System::cycle(std::int64_t m) {
  if (m < 1) throw DomainError("cycle length must be positive");
  return System(Kind::cycle, 0.0, m);
}

System System::parse(std::string_view text) {
  text = detail::trim_view(text);
  if (text == "zinf") return z_infinity();
  const std::size_t colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto arg = colon == text.npos ? std::string_view{} : text.substr(colon + 1);
  const std::size_t eq = arg.find('=');
  const auto key = detail::trim_view(arg.substr(0, eq));
  const auto value = eq == arg.npos ? std::string_view{} : arg.substr(eq + 1);
  try {
    if (kind == "rotation" && key == "theta") {
      if (detail::trim_view(value) == "golden") return rotation(kGolden);
      return rotation(detail::parse_double(value));
    }
    if (kind == "cycle" && key == "m") return cycle(detail::parse_integer<std::int64_t>(value));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown system spec '" + std::string(text) + "' (expected rotation:theta=<real>, zinf, cycle:m=<int>)");
}

std::string System::to_string() const {
  switch (kind_) {
    case Kind::rotation:
      return "rotation:theta=" + detail::format_double(theta_);
    case Kind::z_infinity:
      return "zinf";
    case Kind::cycle:
      return "cycle:m=" + std::to_string(modulus_);
  }
  return {};
}

bool System::contains(const Point& x) const {
  switch (kind_) {
    case Kind::rotation: {
      const auto* v = std::get_if<double>(&x);
      return v && *v >= 0.0 && *v < 1.0;
    }
    case Kind::z_infinity:
      return !std::holds_alternative<double>(x);
    case Kind::cycle: {
      const auto* m = std::get_if<std::int64_t>(&x);
      return m && *m >= 0 && *m < modulus_;
    }
  }
  return false;
}

Point System::evolve(const Point& x, std::int64_t steps) const {
  if (!contains(x)) throw DomainError("point " + classical::to_string(x) + " is not in " + to_string());
  switch (kind_) {
    case Kind::rotation:
      return wrap_unit(std::get<double>(x) + rotation_offset(theta_, steps));
    case Kind::z_infinity:
      if (std::holds_alternative<Infinity>(x)) return x;
      return std::get<std::int64_t>(x) + steps;
    case Kind::cycle: {
      const std::int64_t r = (std::get<std::int64_t>(x) + steps % modulus_ + modulus_) % modulus_;
      return r;
    }
  }
  return x;
}

double System::distance(const Point& x, const Point& y) const {
  if (!contains(x) || !contains(y)) throw DomainError("distance between points outside " + to_string());
  switch (kind_) {
    case Kind::rotation: {
      const double d = std::abs(std::get<double>(x) - std::get<double>(y));
      return std::min(d, 1.0 - d);
    }
    case Kind::z_infinity:
      if (x == y) return 0.0;
      return tail_radius(x) + tail_radius(y);
    case Kind::cycle: {
      const std::int64_t d = std::abs(std::get<std::int64_t>(x) - std::get<std::int64_t>(y));
      return static_cast<double>(std::min(d, modulus_ - d)) / static_cast<double>(modulus_);
    }
  }
  return 0.0;
}

std::optional<double> System::resolution() const {
  if (kind_ == Kind::cycle && modulus_ >= 2) return 1.0 / static_cast<double>(modulus_);
  return std::nullopt;
}

std::optional<std::int64_t> System::period() const {
  if (kind_ == Kind::cycle) return modulus_;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Observable Observable::constant(Complex c) { return Observable(c, detail::format_double(c.real(), 6)); }

Observable Observable::trig(std::vector<Complex> coefficients) {
  if (coefficients.size() % 2 == 0) throw DomainError("trig coefficients must be indexed -d..d");
  return Observable(Trig{std::move(coefficients)}, "trig");
}

Observable Observable::fourier_mode(int k, Complex c) {
  std::vector<Complex> coefficients(2 * static_cast<std::size_t>(std::abs(k)) + 1);
  coefficients[static_cast<std::size_t>(k + std::abs(k))] = c;
  Observable f = trig(std::move(coefficients));
  f.label_ = "e^{2pi i " + std::to_string(k) + "x}";
  return f;
}

Observable Observable::random_trig(int degree, std::uint64_t seed) {
  if (degree < 0) throw DomainError("trig degree must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Complex> coefficients(2 * static_cast<std::size_t>(degree) + 1);
  for (auto& c : coefficients) c = {gauss(rng), gauss(rng)};
  Observable f = trig(std::move(coefficients));
  f.label_ = "trig:" + std::to_string(degree) + "@" + std::to_string(seed);
  return f;
}

Observable Observable::tail(TailValues values, Complex limit, double sup_bound, std::string label) {
  if (std::abs(limit) > sup_bound) throw DomainError("tail bound does not dominate the limit");
  return Observable(Tail{std::move(values), limit, sup_bound}, std::move(label));
}

Observable Observable::tail_table(std::map<std::int64_t, Complex> exceptional, Complex limit) {
  double bound = std::abs(limit);
  std::string label = "tail{";
  for (const auto& [m, c] : exceptional) {
    bound = std::max(bound, std::abs(c));
    label += std::to_string(m) + ":" + detail::format_double(c.real(), 6) + ",";
  }
  label += "inf:" + detail::format_double(limit.real(), 6) + "}";
  auto values = [table = std::move(exceptional), limit](std::int64_t m) {
    const auto it = table.find(m);
    return it == table.end() ? limit : it->second;
  };
  return tail(std::move(values), limit, bound, std::move(label));
}

Observable Observable::inverse_square() {
  return tail(
      [](std::int64_t m) {
        const double d = static_cast<double>(m);
        return Complex{1.0 / (1.0 + d * d)};
      },
      0.0, 1.0, "1/(1+n^2)");
}

Observable Observable::table(std::vector<Complex> values) {
  if (values.empty()) throw DomainError("table observable needs at least one value");
  return Observable(Table{std::move(values)}, "table");
}

Complex Observable::operator()(const Point& x) const {
  return std::visit(
      [&](const auto& b) -> Complex {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Complex>) {
          return b;
        } else if constexpr (std::is_same_v<B, Trig>) {
          const auto* t = std::get_if<double>(&x);
          if (!t) throw DomainError("trig observable evaluated off the circle");
          const int d = static_cast<int>(b.coefficients.size() / 2);
          Complex sum = 0.0;
          for (int k = -d; k <= d; ++k) sum += b.coefficients[static_cast<std::size_t>(k + d)] * unit_phase(k * *t);
          return sum;
        } else if constexpr (std::is_same_v<B, Tail>) {
          if (std::holds_alternative<Infinity>(x)) return b.limit;
          const auto* m = std::get_if<std::int64_t>(&x);
          if (!m) throw DomainError("tail observable evaluated off Z_inf");
          return b.values(*m);
        } else {
          const auto* m = std::get_if<std::int64_t>(&x);
          if (!m || *m < 0 || static_cast<std::size_t>(*m) >= b.values.size())
            throw DomainError("table observable evaluated off the cycle");
          return b.values[static_cast<std::size_t>(*m)];
        }
      },
      body_);
}

bool Observable::compatible(const System& sys) const {
  return std::visit(
      [&](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Complex>) return true;
        if constexpr (std::is_same_v<B, Trig>) return sys.kind() == System::Kind::rotation;
        if constexpr (std::is_same_v<B, Tail>) return sys.kind() == System::Kind::z_infinity;
        if constexpr (std::is_same_v<B, Table>)
          return sys.kind() == System::Kind::cycle && static_cast<std::int64_t>(b.values.size()) == sys.modulus();
      },
      body_);
}

Complex Observable::invariant_mean(const System& sys) const {
  if (!compatible(sys)) throw DomainError("observable '" + label_ + "' does not live on " + sys.to_string());
  return std::visit(
      [](const auto& b) -> Complex {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Complex>) return b;
        if constexpr (std::is_same_v<B, Trig>) return b.coefficients[b.coefficients.size() / 2];
        if constexpr (std::is_same_v<B, Tail>) return b.limit;
        if constexpr (std::is_same_v<B, Table>) {
          Complex sum = 0.0;
          for (const Complex& v : b.values) sum += v;
          return sum / static_cast<double>(b.values.size());
        }
      },
      body_);
}

double Observable::sup_bound() const {
  return std::visit(
      [](const auto& b) -> double {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Complex>) return std::abs(b);
        if constexpr (std::is_same_v<B, Trig>) {
          double s = 0.0;
          for (const Complex& c : b.coefficients) s += std::abs(c);
          return s;
        }
        if constexpr (std::is_same_v<B, Tail>) return b.bound;
        if constexpr (std::is_same_v<B, Table>) {
          double s = 0.0;
          for (const Complex& c : b.values) s = std::max(s, std::abs(c));
          return s;
        }
      },
      body_);
}

Observable scale(Complex c, const Observable& f) { return multiply(Observable::constant(c), f); }

Observable conjugate(const Observable& f) {
  using Trig = Observable::Trig;
  using Tail = Observable::Tail;
  using Table = Observable::Table;
  Observable::Body body = std::visit(
      [](const auto& b) -> Observable::Body {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Complex>) {
          return std::conj(b);
        } else if constexpr (std::is_same_v<B, Trig>) {
          // conj(c_k e^{ikx}) = conj(c_k) e^{-ikx}
          std::vector<Complex> out(b.coefficients.rbegin(), b.coefficients.rend());
          for (auto& c : out) c = std::conj(c);
          return Trig{std::move(out)};
        } else if constexpr (std::is_same_v<B, Tail>) {
          return Tail{[v = b.values](std::int64_t m) { return std::conj(v(m)); }, std::conj(b.limit), b.bound};
        } else {
          std::vector<Complex> out = b.values;
          for (auto& c : out) c = std::conj(c);
          return Table{std::move(out)};
        }
      },
      f.body_);
  return Observable(std::move(body), "conj(" + f.label_ + ")");
}

namespace {

template <class Op>
std::vector<Complex> zip_padded(const std::vector<Complex>& a, const std::vector<Complex>& b, Op op) {
  const std::size_t n = std::max(a.size(), b.size());
  const std::size_t da = (n - a.size()) / 2;
  const std::size_t db = (n - b.size()) / 2;
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex x = i >= da && i - da < a.size() ? a[i - da] : Complex{};
    const Complex y = i >= db && i - db < b.size() ? b[i - db] : Complex{};
    out[i] = op(x, y);
  }
  return out;
}

}  // namespace

Observable multiply(const Observable& f, const Observable& g) {
  using Trig = Observable::Trig;
  using Tail = Observable::Tail;
  using Table = Observable::Table;
  const std::string label = "(" + f.label_ + ")*(" + g.label_ + ")";
  if (const auto* c = std::get_if<Complex>(&f.body_)) {
    Observable::Body body = std::visit(
        [&](const auto& b) -> Observable::Body {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, Complex>) {
            return *c * b;
          } else if constexpr (std::is_same_v<B, Trig>) {
            std::vector<Complex> out = b.coefficients;
            for (auto& x : out) x *= *c;
            return Trig{std::move(out)};
          } else if constexpr (std::is_same_v<B, Tail>) {
            return Tail{[v = b.values, k = *c](std::int64_t m) { return k * v(m); }, *c * b.limit,
                        std::abs(*c) * b.bound};
          } else {
            std::vector<Complex> out = b.values;
            for (auto& x : out) x *= *c;
            return Table{std::move(out)};
          }
        },
        g.body_);
    return Observable(std::move(body), label);
  }
  if (std::holds_alternative<Complex>(g.body_)) {
    Observable swapped = multiply(g, f);
    swapped.label_ = label;
    return swapped;
  }
  if (const auto* a = std::get_if<Trig>(&f.body_)) {
    const auto* b = std::get_if<Trig>(&g.body_);
    if (!b) throw DomainError("cannot multiply observables on different spaces");
    const int da = static_cast<int>(a->coefficients.size() / 2);
    const int db = static_cast<int>(b->coefficients.size() / 2);
    std::vector<Complex> out(2 * static_cast<std::size_t>(da + db) + 1);
    for (int i = -da; i <= da; ++i)
      for (int j = -db; j <= db; ++j)
        out[static_cast<std::size_t>(i + j + da + db)] +=
            a->coefficients[static_cast<std::size_t>(i + da)] * b->coefficients[static_cast<std::size_t>(j + db)];
    return Observable(Trig{std::move(out)}, label);
  }
  if (const auto* a = std::get_if<Tail>(&f.body_)) {
    const auto* b = std::get_if<Tail>(&g.body_);
    if (!b) throw DomainError("cannot multiply observables on different spaces");
    return Observable(Tail{[u = a->values, v = b->values](std::int64_t m) { return u(m) * v(m); },
                           a->limit * b->limit, a->bound * b->bound},
                      label);
  }
  const auto& a = std::get<Table>(f.body_);
  const auto* b = std::get_if<Table>(&g.body_);
  if (!b || b->values.size() != a.values.size()) throw DomainError("cannot multiply observables on different spaces");
  std::vector<Complex> out(a.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values[i] * b->values[i];
  return Observable(Table{std::move(out)}, label);
}

Observable add(const Observable& f, const Observable& g) {
  using Trig = Observable::Trig;
  using Tail = Observable::Tail;
  using Table = Observable::Table;
  const std::string label = f.label_ + " + " + g.label_;
  const auto plus = [](Complex x, Complex y) { return x + y; };
  if (const auto* c = std::get_if<Complex>(&f.body_)) {
    Observable::Body body = std::visit(
        [&](const auto& b) -> Observable::Body {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, Complex>) {
            return *c + b;
          } else if constexpr (std::is_same_v<B, Trig>) {
            return Trig{zip_padded({*c}, b.coefficients, plus)};
          } else if constexpr (std::is_same_v<B, Tail>) {
            return Tail{[v = b.values, k = *c](std::int64_t m) { return k + v(m); }, *c + b.limit,
                        std::abs(*c) + b.bound};
          } else {
            std::vector<Complex> out = b.values;
            for (auto& x : out) x += *c;
            return Table{std::move(out)};
          }
        },
        g.body_);
    return Observable(std::move(body), label);
  }
  if (std::holds_alternative<Complex>(g.body_)) {
    Observable swapped = add(g, f);
    swapped.label_ = label;
    return swapped;
  }
  if (const auto* a = std::get_if<Trig>(&f.body_)) {
    const auto* b = std::get_if<Trig>(&g.body_);
    if (!b) throw DomainError("cannot add observables on different spaces");
    return Observable(Trig{zip_padded(a->coefficients, b->coefficients, plus)}, label);
  }
  if (const auto* a = std::get_if<Tail>(&f.body_)) {
    const auto* b = std::get_if<Tail>(&g.body_);
    if (!b) throw DomainError("cannot add observables on different spaces");
    return Observable(Tail{[u = a->values, v = b->values](std::int64_t m) { return u(m) + v(m); },
                           a->limit + b->limit, a->bound + b->bound},
                      label);
  }
  const auto& a = std::get<Table>(f.body_);
  const auto* b = std::get_if<Table>(&g.body_);
  if (!b || b->values.size() != a.values.size()) throw DomainError("cannot add observables on different spaces");
  std::vector<Complex> out(a.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values[i] + b->values[i];
  return Observable(Table{std::move(out)}, label);
}

Observable compose(const System& sys, const Observable& f, std::int64_t n) {
  using Trig = Observable::Trig;
  using Tail = Observable::Tail;
  using Table = Observable::Table;
  if (!f.compatible(sys)) throw DomainError("observable '" + f.label_ + "' does not live on " + sys.to_string());
  Observable::Body body = std::visit(
      [&](const auto& b) -> Observable::Body {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Complex>) {
          return b;
        } else if constexpr (std::is_same_v<B, Trig>) {
          const int d = static_cast<int>(b.coefficients.size() / 2);
          const double offset = rotation_offset(sys.theta(), n);
          std::vector<Complex> out = b.coefficients;
          for (int k = -d; k <= d; ++k) out[static_cast<std::size_t>(k + d)] *= unit_phase(k * offset);
          return Trig{std::move(out)};
        } else if constexpr (std::is_same_v<B, Tail>) {
          return Tail{[v = b.values, n](std::int64_t m) { return v(m + n); }, b.limit, b.bound};
        } else {
          const auto m = static_cast<std::int64_t>(b.values.size());
          std::vector<Complex> out(b.values.size());
          for (std::int64_t j = 0; j < m; ++j)
            out[static_cast<std::size_t>(j)] = b.values[static_cast<std::size_t>(((j + n) % m + m) % m)];
          return Table{std::move(out)};
        }
      },
      f.body_);
  return Observable(std::move(body), f.label_ + " o T^" + std::to_string(n));
}

Observable fixed_point_projection(const System& sys, const Observable& f) {
  if (!f.compatible(sys)) throw DomainError("observable '" + f.label_ + "' does not live on " + sys.to_string());
  if (const auto* t = std::get_if<Observable::Trig>(&f.body_)) {
    const int d = static_cast<int>(t->coefficients.size() / 2);
    std::vector<Complex> kept(t->coefficients.size());
    for (int k = -d; k <= d; ++k) {
      const double kt = k * sys.theta();
      if (std::abs(kt - std::round(kt)) < 1e-12) kept[static_cast<std::size_t>(k + d)] = t->coefficients[static_cast<std::size_t>(k + d)];
    }
    return Observable(Observable::Trig{std::move(kept)}, "E(" + f.label_ + ")");
  }
  return Observable(f.invariant_mean(sys), "E(" + f.label_ + ")");
}

// ---------------------------------------------------------------------------

State State::point(Point x) {
  State s;
  s.atoms_.emplace_back(1.0, x);
  return s;
}

State State::mixture(std::vector<std::pair<double, Point>> atoms) {
  if (atoms.empty()) throw DomainError("mixture needs at least one atom");
  double total = 0.0;
  for (const auto& [w, x] : atoms) {
    if (!(w >= 0.0)) throw DomainError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");
  for (auto& atom : atoms) atom.first /= total;
  State s;
  s.atoms_ = std::move(atoms);
  return s;
}

State State::invariant() { return State(); }

std::string State::describe() const {
  if (atoms_.empty()) return "invariant";
  if (atoms_.size() == 1) return "delta_" + to_string(atoms_.front().second);
  std::string out = "mixture(";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out += ",";
    out += detail::format_double(atoms_[i].first, 6) + "*delta_" + to_string(atoms_[i].second);
  }
  return out + ")";
}

Complex State::expect(const System& sys, const Observable& f) const { return expect_evolved(sys, f, 0); }

Complex State::expect_evolved(const System& sys, const Observable& f, std::int64_t k) const {
  if (!f.compatible(sys)) throw DomainError("observable '" + f.label() + "' does not live on " + sys.to_string());
  if (atoms_.empty()) return f.invariant_mean(sys);
  Complex sum = 0.0;
  for (const auto& [w, x] : atoms_) sum += w * f(sys.evolve(x, k));
  return sum;
}

Complex birkhoff_average(const System& sys, const Observable& f, const State& phi, std::size_t n) {
  if (n == 0) throw DomainError("Birkhoff average needs n >= 1");
  // Every term is mu(f); skip the rounding of summing n equal values.
  if (phi.is_invariant()) return f.invariant_mean(sys);
  Complex sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += phi.expect_evolved(sys, f, static_cast<std::int64_t>(k));
  return sum / static_cast<double>(n);
}

std::vector<double> mixing_residuals(const System& sys, const Observable& f, const State& phi, std::size_t horizon) {
  if (horizon == 0) throw DomainError("horizon must be >= 1");
  const Complex mean = f.invariant_mean(sys);
  std::vector<double> out(horizon);
  for (std::size_t n = 0; n < horizon; ++n)
    out[n] = std::abs(phi.expect_evolved(sys, f, static_cast<std::int64_t>(n)) - mean);
  return out;
}

// ---------------------------------------------------------------------------

SearchBudgetExhausted::SearchBudgetExhausted(int level, std::int64_t budget)
    : ResourceError("no admissible return time at level " + std::to_string(level) + " within " +
                    std::to_string(budget) + " steps"),
      level_(level) {}

TransitiveTimes transitive_subsequence(const System& sys, const Point& x0, const Point& x, int levels,
                                       std::int64_t budget) {
  if (levels < 1) throw DomainError("levels must be >= 1");
  if (!sys.contains(x0) || !sys.contains(x)) throw DomainError("points must lie in " + sys.to_string());
  const auto period = sys.period();

  // First n >= start with 0 < d(x, T^n x0) < 1/level. A periodic orbit has
  // been seen in full after one period.
  auto first_admissible = [&](std::int64_t start, int level) {
    std::int64_t limit = budget;
    if (period) limit = std::min(limit, start + *period);
    const double radius = 1.0 / level;
    for (std::int64_t n = start; n <= limit; ++n) {
      const double d = sys.distance(x, sys.evolve(x0, n));
      if (d > 0.0 && d < radius) return n;
    }
    throw SearchBudgetExhausted(level, budget);
  };

  TransitiveTimes out;
  std::int64_t level_start = 1;
  std::int64_t last = 0;
  for (int l = 1; l <= levels; ++l) {
    level_start = first_admissible(level_start, l);
    out.level_times.push_back(level_start);
    last = first_admissible(last + 1, l);
    out.subsequence.push_back(last);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Heaviest closed eps-ball centred on an orbit point of a circle, positions
// given in [0,1) and eps < 1/2.
std::pair<double, double> heaviest_arc(std::vector<double> positions, double eps) {
  std::sort(positions.begin(), positions.end());
  auto count_in = [&](double lo, double hi) {
    return std::upper_bound(positions.begin(), positions.end(), hi) -
           std::lower_bound(positions.begin(), positions.end(), lo);
  };
  double best_center = positions.front();
  std::ptrdiff_t best = 0;
  for (double c : positions) {
    std::ptrdiff_t count = count_in(std::max(0.0, c - eps), std::min(1.0, c + eps));
    if (c - eps < 0.0) count += count_in(c - eps + 1.0, 1.0);
    if (c + eps > 1.0) count += count_in(0.0, c + eps - 1.0);
    if (count > best) {
      best = count;
      best_center = c;
    }
  }
  return {best_center, static_cast<double>(best) / static_cast<double>(positions.size())};
}

std::vector<double> cell_masses_on_circle(const std::vector<double>& positions, double eps) {
  const auto cells = static_cast<std::size_t>(std::ceil(1.0 / eps));
  std::map<std::size_t, std::size_t> counts;
  for (double p : positions) ++counts[std::min(cells - 1, static_cast<std::size_t>(p / eps))];
  std::vector<double> out;
  for (const auto& [cell, c] : counts) out.push_back(static_cast<double>(c) / static_cast<double>(positions.size()));
  return out;
}

}  // namespace

SupportProbe support_probe(const System& sys, const Point& x0, std::size_t n, double eps) {
  if (n == 0) throw DomainError("support probe needs n >= 1");
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("support probe resolution must lie in (0, 0.5)");
  if (!sys.contains(x0)) throw DomainError("point not in " + sys.to_string());
  SupportProbe out;
  out.eps = eps;
  const double total = static_cast<double>(n);

  if (sys.kind() == System::Kind::z_infinity) {
    std::size_t near_infinity = 0;
    std::map<std::int64_t, std::size_t> outside;
    for (std::size_t k = 0; k < n; ++k) {
      const Point p = sys.evolve(x0, static_cast<std::int64_t>(k));
      if (tail_radius(p) <= eps)
        ++near_infinity;
      else
        ++outside[std::get<std::int64_t>(p)];
    }
    out.center = Infinity{};
    out.center_mass = static_cast<double>(near_infinity) / total;
    for (const auto& [m, c] : outside) {
      out.cell_masses.push_back(static_cast<double>(c) / total);
      if (static_cast<double>(c) / total > out.center_mass) {
        out.center = m;
        out.center_mass = static_cast<double>(c) / total;
      }
    }
    if (near_infinity > 0) out.cell_masses.push_back(static_cast<double>(near_infinity) / total);
  } else {
    std::vector<double> positions(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Point p = sys.evolve(x0, static_cast<std::int64_t>(k));
      positions[k] = sys.kind() == System::Kind::rotation
                         ? std::get<double>(p)
                         : static_cast<double>(std::get<std::int64_t>(p)) / static_cast<double>(sys.modulus());
    }
    const auto [center, mass] = heaviest_arc(positions, eps);
    if (sys.kind() == System::Kind::rotation)
      out.center = center;
    else
      out.center = static_cast<std::int64_t>(std::llround(center * static_cast<double>(sys.modulus())));
    out.center_mass = mass;
    out.cell_masses = cell_masses_on_circle(positions, eps);
  }
  out.singleton = out.center_mass >= 1.0 - eps;
  return out;
}

std::string to_string(Triviality t) {
  switch (t) {
    case Triviality::consistent:
      return "CONSISTENT";
    case Triviality::violation_flag:
      return "VIOLATION-FLAG";
    case Triviality::neutral:
      return "NEUTRAL";
  }
  return {};
}

double tail_max(const std::vector<double>& residuals) {
  if (residuals.empty()) return 0.0;
  const std::size_t window = std::max<std::size_t>(1, residuals.size() / 4);
  return *std::max_element(residuals.end() - static_cast<std::ptrdiff_t>(window), residuals.end());
}

TrivialityReport triviality_verdict(const ProbeBattery& battery, const SupportProbe& support, double tol) {
  TrivialityReport out{Triviality::neutral, !battery.residuals.empty(), support.singleton, 0.0};
  for (const auto& r : battery.residuals) out.worst_tail_max = std::max(out.worst_tail_max, tail_max(r));
  out.residuals_decay = out.residuals_decay && out.worst_tail_max < tol;
  if (out.residuals_decay && support.singleton)
    out.verdict = Triviality::consistent;
  else if (out.residuals_decay && battery.spanning)
    out.verdict = Triviality::violation_flag;
  return out;
}

std::vector<Observable> standard_observables(const System& sys) {
  std::vector<Observable> out;
  switch (sys.kind()) {
    case System::Kind::rotation:
      for (int k = -3; k <= 3; ++k) out.push_back(Observable::fourier_mode(k));
      break;
    case System::Kind::z_infinity:
      out.push_back(Observable::constant(1.0));
      out.push_back(Observable::inverse_square());
      for (std::int64_t j = -2; j <= 2; ++j) out.push_back(Observable::tail_table({{j, 1.0}}, 0.0));
      break;
    case System::Kind::cycle: {
      const std::int64_t m = sys.modulus();
      for (std::int64_t j = 0; j < std::min<std::int64_t>(m, 64); ++j) {
        std::vector<Complex> values(static_cast<std::size_t>(m));
        values[static_cast<std::size_t>(j)] = 1.0;
        out.push_back(Observable::table(std::move(values)).relabel("1_{" + std::to_string(j) + "}"));
      }
      break;
    }
  }
  return out;
}

std::vector<State> standard_states(const System& sys) {
  std::vector<State> out;
  switch (sys.kind()) {
    case System::Kind::rotation:
      out = {State::point(0.0), State::point(0.3), State::mixture({{0.5, 0.0}, {0.5, 0.5}})};
      break;
    case System::Kind::z_infinity:
      out = {State::point(std::int64_t{0}), State::point(std::int64_t{-3}), State::point(std::int64_t{7}),
             State::point(Infinity{}), State::mixture({{0.5, std::int64_t{0}}, {0.5, Infinity{}}})};
      break;
    case System::Kind::cycle: {
      const std::int64_t m = sys.modulus();
      out = {State::point(std::int64_t{0}), State::point(m - 1)};
      if (m > 1) out.push_back(State::mixture({{0.5, std::int64_t{0}}, {0.5, std::int64_t{m / 2}}}));
      break;
    }
  }
  out.push_back(State::invariant());
  return out;
}

ProbeBattery standard_battery(const System& sys, std::size_t horizon) {
  ProbeBattery out;
  const auto observables = standard_observables(sys);
  out.spanning = sys.kind() != System::Kind::cycle || sys.modulus() <= 64;
  for (const auto& phi : standard_states(sys))
    for (const auto& f : observables) {
      out.labels.push_back(f.label() + " @ " + phi.describe());
      out.residuals.push_back(mixing_residuals(sys, f, phi, horizon));
    }
  return out;
}

}  // namespace ergoshift::classical
