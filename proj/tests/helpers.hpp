#pragma once

#include <cstdint>
#include <vector>

#include "orgdesign/landscape.hpp"
#include "orgdesign/oracle.hpp"

namespace orgdesign::testing {

// Landscape where every table entry equals `value`.
inline Landscape constant_landscape(const InteractionMatrix& matrix, double value) {
  std::vector<std::vector<double>> tables(matrix.size());
  for (std::size_t j = 0; j < matrix.size(); ++j) tables[j].assign(std::size_t{1} << (matrix.k(j) + 1), value);
  return Landscape(matrix, std::move(tables));
}

inline Landscape random_landscape(const InteractionMatrix& matrix, std::uint64_t seed) {
  Rng rng(seed);
  return Landscape::generate(matrix, rng);
}

inline std::vector<std::size_t> members(std::uint32_t mask, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1U) out.push_back(i);
  }
  return out;
}

}  // namespace orgdesign::testing
