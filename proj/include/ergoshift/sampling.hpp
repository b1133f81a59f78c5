#pragma once

// Seeded generators for random words and elements, shared by the property
// tests, the acceptance battery and the CLI self-test.

#include <cstddef>
#include <random>
#include <span>

#include "ergoshift/algebra.hpp"

namespace ergoshift {

/// Reduced word of length exactly `length` over the given generators.
Word random_word(std::mt19937_64& rng, std::span<const Index> generators, std::size_t length);

/// Element with up to `terms` support words of length <= max_length and
/// complex Gaussian coefficients.
AlgebraElement random_element(std::mt19937_64& rng, std::span<const Index> generators, std::size_t max_length,
                              std::size_t terms);

}  // namespace ergoshift
