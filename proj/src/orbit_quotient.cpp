#include "orbit_quotient.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ergoshift/error.hpp"

namespace ergoshift::detail {

namespace {

constexpr int kMaxLabels = 127;

using Code = std::string;

unsigned char letter_code(int label, int sign) {
  return static_cast<unsigned char>(label * 2 + (sign < 0 ? 1 : 0));
}
int label_of(unsigned char c) { return c >> 1; }
unsigned char inverse_of(unsigned char c) { return static_cast<unsigned char>(c ^ 1U); }

// Relabels by order of first occurrence; returns the number of labels used.
int canonicalize(Code& code) {
  int mapping[kMaxLabels * 2 + 2];
  std::fill(std::begin(mapping), std::end(mapping), -1);
  int next = 0;
  for (char& ch : code) {
    const auto c = static_cast<unsigned char>(ch);
    int& label = mapping[label_of(c)];
    if (label < 0) label = next++;
    ch = static_cast<char>(letter_code(label, (c & 1U) ? -1 : 1));
  }
  return next;
}

// Reduced product of two label words.
Code multiply_codes(const Code& u, const Code& w) {
  std::size_t cancel = 0;
  while (cancel < u.size() && cancel < w.size() &&
         static_cast<unsigned char>(u[u.size() - 1 - cancel]) ==
             inverse_of(static_cast<unsigned char>(w[cancel])))
    ++cancel;
  Code out(u.begin(), u.end() - static_cast<std::ptrdiff_t>(cancel));
  out.append(w.begin() + static_cast<std::ptrdiff_t>(cancel), w.end());
  return out;
}

// |O| / |O'| for orbits using m and m2 of the n generators.
double orbit_size_ratio(std::size_t n, int m, int m2) {
  double ratio = 1.0;
  for (int i = std::min(m, m2); i < std::max(m, m2); ++i) ratio *= static_cast<double>(n - static_cast<std::size_t>(i));
  return m >= m2 ? ratio : 1.0 / ratio;
}

}  // namespace

std::optional<std::vector<Pattern>> symmetric_patterns(const AlgebraElement& x,
                                                       const std::vector<Index>& generators) {
  const std::size_t n = generators.size();
  struct Tally {
    int labels = 0;
    Complex coefficient;
    std::size_t count = 0;
    bool uniform = true;
  };
  std::map<Code, Tally> tallies;
  for (const auto& [word, c] : x.terms()) {
    if (c.imag() != 0.0 || c.real() < 0.0) return std::nullopt;
    Code code;
    for (const Letter& letter : word.letters()) {
      const auto it = std::lower_bound(generators.begin(), generators.end(), letter.index);
      const auto pos = static_cast<std::size_t>(it - generators.begin());
      if (pos > kMaxLabels) return std::nullopt;
      code.push_back(static_cast<char>(letter_code(static_cast<int>(pos), letter.sign)));
    }
    const int labels = canonicalize(code);
    auto [it, inserted] = tallies.try_emplace(code);
    Tally& tally = it->second;
    if (inserted) {
      tally.labels = labels;
      tally.coefficient = c;
    } else if (tally.coefficient != c) {
      tally.uniform = false;
    }
    ++tally.count;
  }
  std::vector<Pattern> out;
  for (const auto& [code, tally] : tallies) {
    if (!tally.uniform) return std::nullopt;
    // The orbit of a q-label pattern has n (n-1) ... (n-q+1) words.
    std::size_t orbit = 1;
    for (int i = 0; i < tally.labels; ++i) {
      if (__builtin_mul_overflow(orbit, n - static_cast<std::size_t>(i), &orbit)) return std::nullopt;
    }
    if (orbit != tally.count) return std::nullopt;
    out.push_back({code, tally.labels, tally.coefficient.real()});
  }
  return out;
}

OrbitBall::OrbitBall(std::size_t generator_count, int radius, std::size_t cap)
    : n_(generator_count), radius_(radius) {
  if (radius < 0) throw DomainError("ball radius must be nonnegative");
  if (radius > kMaxLabels / 2) throw ResourceError("orbit ball radius too large");
  codes_.push_back(Code());
  labels_.push_back(0);
  std::size_t level_begin = 0;
  for (int length = 1; length <= radius; ++length) {
    const std::size_t level_end = codes_.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const int m = labels_[i];
      const int limit = static_cast<std::size_t>(m) < n_ ? m + 1 : m;
      for (int label = 0; label < limit; ++label) {
        for (int sign : {1, -1}) {
          const unsigned char c = letter_code(label, sign);
          const Code& parent = codes_[i];
          if (!parent.empty() && static_cast<unsigned char>(parent.back()) == inverse_of(c)) continue;
          if (codes_.size() >= cap)
            throw ResourceError("orbit ball exceeds the cap of " + std::to_string(cap) + " entries");
          Code child = parent;
          child.push_back(static_cast<char>(c));
          codes_.push_back(std::move(child));
          labels_.push_back(label == m ? m + 1 : m);
        }
      }
    }
    level_begin = level_end;
  }
  lookup_.reserve(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) lookup_.emplace(codes_[i], i);
}

std::optional<std::size_t> OrbitBall::position(const std::string& code) const {
  const auto it = lookup_.find(code);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

OrbitOperator::OrbitOperator(std::span<const Pattern> patterns, const OrbitBall& ball)
    : dimension_(ball.size()) {
  const std::size_t n = ball.generator_count();
  offsets_.reserve(dimension_ + 1);
  offsets_.push_back(0);
  std::vector<std::pair<std::size_t, double>> column;
  for (std::size_t source = 0; source < dimension_; ++source) {
    column.clear();
    const Code& rep = ball.code(source);
    const int m = ball.labels(source);
    for (const Pattern& pattern : patterns) {
      // Assign each pattern label to a distinct label of rep or to a fresh
      // one; fresh labels are interchangeable, giving multiplicity
      // (n-m)(n-m-1)... for the words in that class.
      std::vector<int> assignment(static_cast<std::size_t>(pattern.labels), -1);
      std::vector<bool> used(static_cast<std::size_t>(m), false);
      auto visit = [&](auto&& self, int next_label, int fresh, double multiplicity) -> void {
        if (next_label == pattern.labels) {
          Code u = pattern.code;
          for (char& ch : u) {
            const auto c = static_cast<unsigned char>(ch);
            ch = static_cast<char>(letter_code(assignment[static_cast<std::size_t>(label_of(c))], (c & 1U) ? -1 : 1));
          }
          Code product = multiply_codes(u, rep);
          if (product.size() > static_cast<std::size_t>(ball.radius())) return;
          const int m2 = canonicalize(product);
          const auto target = ball.position(product);
          if (!target) return;
          const double weight =
              pattern.coefficient * multiplicity * std::sqrt(orbit_size_ratio(n, m, m2));
          auto it = std::find_if(column.begin(), column.end(), [&](const auto& e) { return e.first == *target; });
          if (it == column.end()) {
            column.emplace_back(*target, weight);
          } else {
            it->second += weight;
          }
          return;
        }
        const auto slot = static_cast<std::size_t>(next_label);
        for (int label = 0; label < m; ++label) {
          if (used[static_cast<std::size_t>(label)]) continue;
          used[static_cast<std::size_t>(label)] = true;
          assignment[slot] = label;
          self(self, next_label + 1, fresh, multiplicity);
          used[static_cast<std::size_t>(label)] = false;
        }
        if (static_cast<std::size_t>(m + fresh) < n) {
          assignment[slot] = m + fresh;
          self(self, next_label + 1, fresh + 1, multiplicity * static_cast<double>(n - static_cast<std::size_t>(m + fresh)));
        }
      };
      visit(visit, 0, 0, 1.0);
    }
    std::sort(column.begin(), column.end());
    for (const auto& [target, weight] : column) {
      targets_.push_back(target);
      weights_.push_back(weight);
    }
    offsets_.push_back(targets_.size());
  }
}

void OrbitOperator::apply(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  std::fill(out.begin(), out.end(), std::complex<double>{});
  for (std::size_t source = 0; source < dimension_; ++source) {
    const auto v = in[source];
    if (v == std::complex<double>{}) continue;
    for (std::size_t e = offsets_[source]; e < offsets_[source + 1]; ++e) out[targets_[e]] += weights_[e] * v;
  }
}

void OrbitOperator::apply_adjoint(std::span<const std::complex<double>> in,
                                  std::span<std::complex<double>> out) const {
  for (std::size_t source = 0; source < dimension_; ++source) {
    std::complex<double> sum{};
    for (std::size_t e = offsets_[source]; e < offsets_[source + 1]; ++e) sum += weights_[e] * in[targets_[e]];
    out[source] = sum;
  }
}

}  // namespace ergoshift::detail
