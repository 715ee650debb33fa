#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "orgdesign/rng.hpp"

namespace orgdesign {

// Largest problem size for which the global optimum is enumerated.
inline constexpr std::size_t kMaxEnumerableDecisions = 25;

// N x N dependency structure. Entry (j, i) set means the contribution of
// decision j depends on decision i. The diagonal is always set.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;
  // Identity structure (K = 0).
  explicit InteractionMatrix(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool depends(std::size_t j, std::size_t i) const;
  // Setting a diagonal entry to false is a contract violation.
  void set(std::size_t j, std::size_t i, bool value);

  // Decisions other than j that f(d_j) depends on, ascending.
  std::vector<std::size_t> dependencies(std::size_t j) const;
  std::size_t k(std::size_t j) const;

  // One string per row, e.g. "110000...".
  std::vector<std::string> pattern() const;

  // Plain-text format: first line n, then n rows of n space-separated 0/1.
  void write(std::ostream& out) const;
  static InteractionMatrix read(std::istream& in);
  static InteractionMatrix load(const std::filesystem::path& path);

  friend bool operator==(const InteractionMatrix&, const InteractionMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> entries_;
};

enum class StructureKind { kDecomposableK2, kNondecomposableK5 };

// Stylized block structures with blocks of `block_size` (= 3) decisions.
// kDecomposableK2 is block diagonal. kNondecomposableK5 adds, for decision j,
// the three external decisions (j+3), (j+6), (j+9) mod n; a candidate that
// falls in j's own block or was already taken advances to the next index.
InteractionMatrix build_stylized_matrix(StructureKind kind, std::size_t n,
                                        std::size_t block_size = 3);

// Decision vector d_1..d_N. Ordering is lexicographic over the bits.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t n) : bits_(n, 0) {}
  explicit Configuration(std::vector<std::uint8_t> bits);

  // Bit j of `mask` becomes d_j.
  static Configuration from_mask(std::uint64_t mask, std::size_t n);
  static Configuration random(std::size_t n, Rng& rng);

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::uint8_t at(std::size_t i) const;
  void set(std::size_t i, std::uint8_t value);
  void flip(std::size_t i);
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::uint64_t mask() const;
  std::string to_string() const;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct Optimum {
  Configuration config;
  double performance = 0.0;
};

// Contribution lookup tables over an interaction matrix.
//
// The table of decision j holds 2^(K_j+1) values. A table index is built with
// d_j as the most significant bit followed by the dependency bits in
// ascending decision order, so for dependencies {i1 < i2} the index is
// d_j*4 + d_i1*2 + d_i2.
//
// Immutable once built and safe to share between threads.
class Landscape {
 public:
  // Validates table shapes and value range, then enumerates the optimum.
  Landscape(InteractionMatrix matrix, std::vector<std::vector<double>> tables);

  // Every table entry drawn independently from U[0,1).
  static Landscape generate(const InteractionMatrix& matrix, Rng& rng);

  const InteractionMatrix& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return matrix_.size(); }
  std::span<const double> table(std::size_t j) const;
  std::span<const std::size_t> dependencies(std::size_t j) const;

  std::size_t table_index(const Configuration& config, std::size_t j) const;
  double contribution(const Configuration& config, std::size_t j) const;
  std::vector<double> contributions(const Configuration& config) const;

  // Mean contribution over `subset`, summed in the order given.
  double performance(const Configuration& config, std::span<const std::size_t> subset) const;
  // Mean contribution over all decisions, summed in index order.
  double performance(const Configuration& config) const;

  const Optimum& optimum() const noexcept { return optimum_; }

 private:
  void check_config(const Configuration& config) const;

  InteractionMatrix matrix_;
  std::vector<std::vector<double>> tables_;
  std::vector<std::vector<std::size_t>> deps_;
  Optimum optimum_;

  friend Optimum global_optimum(const Landscape& landscape);
};

// Exhaustive scan of all 2^n configurations (n <= kMaxEnumerableDecisions).
// Ties go to the lexicographically lowest configuration.
Optimum global_optimum(const Landscape& landscape);

}  // namespace orgdesign
