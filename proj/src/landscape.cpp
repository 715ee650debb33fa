#include "orgdesign/landscape.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "orgdesign/errors.hpp"

namespace orgdesign {

// ---------------------------------------------------------------------------
// InteractionMatrix

InteractionMatrix::InteractionMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {
  for (std::size_t j = 0; j < n; ++j) entries_[j * n + j] = 1;
}

bool InteractionMatrix::depends(std::size_t j, std::size_t i) const {
  if (j >= n_ || i >= n_) throw ContractViolation("InteractionMatrix: index out of range");
  return entries_[j * n_ + i] != 0;
}

void InteractionMatrix::set(std::size_t j, std::size_t i, bool value) {
  if (j >= n_ || i >= n_) throw ContractViolation("InteractionMatrix: index out of range");
  if (i == j && !value) throw ContractViolation("InteractionMatrix: diagonal must stay set");
  entries_[j * n_ + i] = value ? 1 : 0;
}

std::vector<std::size_t> InteractionMatrix::dependencies(std::size_t j) const {
  std::vector<std::size_t> deps;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i != j && depends(j, i)) deps.push_back(i);
  }
  return deps;
}

std::size_t InteractionMatrix::k(std::size_t j) const { return dependencies(j).size(); }

std::vector<std::string> InteractionMatrix::pattern() const {
  std::vector<std::string> rows;
  rows.reserve(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    std::string row(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) {
      if (entries_[j * n_ + i]) row[i] = '1';
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void InteractionMatrix::write(std::ostream& out) const {
  out << n_ << '\n';
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (i) out << ' ';
      out << (entries_[j * n_ + i] ? '1' : '0');
    }
    out << '\n';
  }
}

InteractionMatrix InteractionMatrix::read(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(0, "matrix file is empty");
  std::size_t n = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n) || (header >> extra) || n == 0) {
      throw ParseError(line_no, "expected a positive decision count");
    }
  }

  InteractionMatrix matrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!next_line()) throw ParseError(line_no, "expected " + std::to_string(n) + " matrix rows");
    std::istringstream row(line);
    std::string token;
    std::size_t i = 0;
    while (row >> token) {
      if (token != "0" && token != "1") {
        throw ParseError(line_no, "entries must be 0 or 1, got '" + token + "'");
      }
      if (i >= n) throw ParseError(line_no, "row has more than " + std::to_string(n) + " entries");
      if (i == j && token == "0") throw ParseError(line_no, "diagonal entry must be 1");
      matrix.entries_[j * n + i] = token == "1" ? 1 : 0;
      ++i;
    }
    if (i != n) throw ParseError(line_no, "row has " + std::to_string(i) + " entries, expected " + std::to_string(n));
  }
  if (next_line()) throw ParseError(line_no, "unexpected content after matrix rows");
  return matrix;
}

InteractionMatrix InteractionMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file " + path.string());
  return read(in);
}

InteractionMatrix build_stylized_matrix(StructureKind kind, std::size_t n, std::size_t block_size) {
  if (block_size != 3) throw ConfigError("stylized structures use blocks of 3 decisions");
  if (n == 0 || n % block_size != 0) {
    throw ConfigError("n = " + std::to_string(n) + " is not divisible by block size " +
                      std::to_string(block_size));
  }
  InteractionMatrix matrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t first = j / block_size * block_size;
    for (std::size_t i = first; i < first + block_size; ++i) matrix.set(j, i, true);
  }
  if (kind == StructureKind::kDecomposableK2) return matrix;

  if (n < block_size + 3) {
    throw ConfigError("nondecomposable_k5 needs at least 3 decisions outside each block");
  }
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t block = j / block_size;
    for (std::size_t offset : {3, 6, 9}) {
      std::size_t c = (j + offset) % n;
      while (c / block_size == block || matrix.depends(j, c)) c = (c + 1) % n;
      matrix.set(j, c, true);
    }
  }
  return matrix;
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw ContractViolation("Configuration: bits must be 0 or 1");
  }
}

Configuration Configuration::from_mask(std::uint64_t mask, std::size_t n) {
  if (n > 64) throw ContractViolation("Configuration::from_mask: n > 64");
  Configuration c(n);
  for (std::size_t i = 0; i < n; ++i) c.bits_[i] = (mask >> i) & 1U;
  return c;
}

Configuration Configuration::random(std::size_t n, Rng& rng) {
  Configuration c(n);
  for (auto& b : c.bits_) b = static_cast<std::uint8_t>(uniform_index(rng, 2));
  return c;
}

std::uint8_t Configuration::at(std::size_t i) const {
  if (i >= bits_.size()) throw ContractViolation("Configuration: index out of range");
  return bits_[i];
}

void Configuration::set(std::size_t i, std::uint8_t value) {
  if (i >= bits_.size()) throw ContractViolation("Configuration: index out of range");
  if (value > 1) throw ContractViolation("Configuration: bits must be 0 or 1");
  bits_[i] = value;
}

void Configuration::flip(std::size_t i) {
  if (i >= bits_.size()) throw ContractViolation("Configuration: index out of range");
  bits_[i] ^= 1U;
}

std::uint64_t Configuration::mask() const {
  if (bits_.size() > 64) throw ContractViolation("Configuration::mask: n > 64");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) m |= std::uint64_t{bits_[i]} << i;
  return m;
}

std::string Configuration::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------
// Landscape

Landscape::Landscape(InteractionMatrix matrix, std::vector<std::vector<double>> tables)
    : matrix_(std::move(matrix)), tables_(std::move(tables)) {
  const std::size_t n = matrix_.size();
  if (n == 0) throw ContractViolation("Landscape: empty matrix");
  if (tables_.size() != n) throw ContractViolation("Landscape: need one table per decision");
  deps_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    deps_.push_back(matrix_.dependencies(j));
    if (deps_[j].size() >= 63 || tables_[j].size() != (std::size_t{1} << (deps_[j].size() + 1))) {
      throw ContractViolation("Landscape: table " + std::to_string(j) + " must hold 2^(K+1) entries");
    }
    for (double v : tables_[j]) {
      if (!(v >= 0.0 && v <= 1.0)) throw ContractViolation("Landscape: table values must lie in [0,1]");
    }
  }
  optimum_ = global_optimum(*this);
}

Landscape Landscape::generate(const InteractionMatrix& matrix, Rng& rng) {
  std::vector<std::vector<double>> tables(matrix.size());
  for (std::size_t j = 0; j < matrix.size(); ++j) {
    tables[j].resize(std::size_t{1} << (matrix.k(j) + 1));
    for (double& v : tables[j]) v = uniform01(rng);
  }
  return Landscape(matrix, std::move(tables));
}

std::span<const double> Landscape::table(std::size_t j) const {
  if (j >= size()) throw ContractViolation("Landscape: decision index out of range");
  return tables_[j];
}

std::span<const std::size_t> Landscape::dependencies(std::size_t j) const {
  if (j >= size()) throw ContractViolation("Landscape: decision index out of range");
  return deps_[j];
}

void Landscape::check_config(const Configuration& config) const {
  if (config.size() != size()) throw ContractViolation("Landscape: configuration length mismatch");
}

std::size_t Landscape::table_index(const Configuration& config, std::size_t j) const {
  check_config(config);
  if (j >= size()) throw ContractViolation("Landscape: decision index out of range");
  std::size_t index = config[j];
  for (std::size_t i : deps_[j]) index = (index << 1) | config[i];
  return index;
}

double Landscape::contribution(const Configuration& config, std::size_t j) const {
  return tables_[j][table_index(config, j)];
}

std::vector<double> Landscape::contributions(const Configuration& config) const {
  std::vector<double> out(size());
  for (std::size_t j = 0; j < size(); ++j) out[j] = contribution(config, j);
  return out;
}

double Landscape::performance(const Configuration& config, std::span<const std::size_t> subset) const {
  if (subset.empty()) throw ContractViolation("performance: empty decision subset");
  double sum = 0.0;
  for (std::size_t j : subset) sum += contribution(config, j);
  return sum / static_cast<double>(subset.size());
}

double Landscape::performance(const Configuration& config) const {
  check_config(config);
  double sum = 0.0;
  for (std::size_t j = 0; j < size(); ++j) sum += contribution(config, j);
  return sum / static_cast<double>(size());
}

namespace {

// True when configuration `a` precedes `b` lexicographically (d_1 first).
bool lex_less(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t diff = a ^ b;
  if (diff == 0) return false;
  return ((a >> std::countr_zero(diff)) & 1U) == 0;
}

}  // namespace

Optimum global_optimum(const Landscape& landscape) {
  const std::size_t n = landscape.size();
  if (n > kMaxEnumerableDecisions) {
    throw ConfigError("global optimum enumeration is limited to n <= " +
                      std::to_string(kMaxEnumerableDecisions) + ", got " + std::to_string(n));
  }

  // Gray-code walk: each step flips one decision and only the rows that read
  // it are looked up again. The sum is always taken over all rows in index
  // order so the value matches Landscape::performance bit for bit.
  struct Touch {
    std::size_t row;
    std::size_t bit;
  };
  std::vector<std::vector<Touch>> touches(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& deps = landscape.deps_[j];
    const std::size_t k = deps.size();
    touches[j].push_back({j, std::size_t{1} << k});
    for (std::size_t r = 0; r < k; ++r) touches[deps[r]].push_back({j, std::size_t{1} << (k - 1 - r)});
  }

  std::vector<std::size_t> index(n, 0);
  std::vector<double> contrib(n);
  for (std::size_t j = 0; j < n; ++j) contrib[j] = landscape.tables_[j][0];

  auto total = [&] {
    double sum = 0.0;
    for (double c : contrib) sum += c;
    return sum;
  };

  std::uint32_t mask = 0;
  std::uint32_t best_mask = 0;
  double best = total();
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < count; ++step) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(step));
    mask ^= std::uint32_t{1} << bit;
    for (const Touch& t : touches[bit]) {
      index[t.row] ^= t.bit;
      contrib[t.row] = landscape.tables_[t.row][index[t.row]];
    }
    const double sum = total();
    if (sum > best || (sum == best && lex_less(mask, best_mask))) {
      best = sum;
      best_mask = mask;
    }
  }
  return {Configuration::from_mask(best_mask, n), best / static_cast<double>(n)};
}

}  // namespace orgdesign
