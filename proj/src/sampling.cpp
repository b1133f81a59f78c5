#include "ergoshift/sampling.hpp"

#include "ergoshift/error.hpp"

namespace ergoshift {

Word random_word(std::mt19937_64& rng, std::span<const Index> generators, std::size_t length) {
  if (generators.empty() && length > 0) throw DomainError("random word needs generators");
  std::uniform_int_distribution<std::size_t> pick(0, 2 * generators.size() - 1);
  std::vector<Letter> letters;
  while (letters.size() < length) {
    const std::size_t r = pick(rng);
    const Letter letter{generators[r / 2], r % 2 == 0 ? 1 : -1};
    if (!letters.empty() && letters.back() == letter.inverse()) continue;
    letters.push_back(letter);
  }
  return reduce(letters);
}

AlgebraElement random_element(std::mt19937_64& rng, std::span<const Index> generators, std::size_t max_length,
                              std::size_t terms) {
  std::uniform_int_distribution<std::size_t> length(0, max_length);
  std::normal_distribution<double> normal;
  AlgebraElement out;
  for (std::size_t t = 0; t < terms; ++t) {
    const Word w = random_word(rng, generators, generators.empty() ? 0 : length(rng));
    out.accumulate(w, Complex{normal(rng), normal(rng)});
  }
  return out;
}

}  // namespace ergoshift
