#pragma once

// Weil-Deligne shadows of multisegments: the restriction to inertia (kept as
// an opaque label bag) together with the Jordan type of the monodromy N.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "bzfam/multisegment.hpp"

namespace bzfam {

/// Jordan block sizes of a nilpotent operator, kept in descending order.
class JordanPartition {
 public:
  JordanPartition() = default;
  /// Throws DomainError if some block is < 1.
  explicit JordanPartition(std::vector<int> blocks);

  const std::vector<int>& blocks() const { return blocks_; }
  int size() const;

  auto operator<=>(const JordanPartition&) const = default;

 private:
  std::vector<int> blocks_;
};

struct InertiaEntry {
  std::string label;
  int dim = 0;
  auto operator<=>(const InertiaEntry&) const = default;
};

/// (rho restricted to inertia, N) up to the Frobenius action.
struct WDShadow {
  std::vector<InertiaEntry> inertia;  // sorted
  JordanPartition partition;

  int dimension() const { return partition.size(); }
  auto operator<=>(const WDShadow&) const = default;
};

/// Dense square or rectangular matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols);
  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  mpq_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  RationalMatrix operator+(const RationalMatrix& rhs) const;
  RationalMatrix operator-(const RationalMatrix& rhs) const;
  RationalMatrix scaled(const mpq_class& c) const;

  bool is_zero() const;
  std::size_t nonzero_count() const;
  bool upper_unitriangular() const;

  bool operator==(const RationalMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<mpq_class> data_;
};

/// Largest matrix size accepted by exp_nilpotent: BZ_MAX_MATRIX if set,
/// else 64.
int configured_max_matrix();

JordanPartition sp_partition(int n);

/// A segment of length l on a block-m line contributes m Jordan blocks of
/// size l and one inertia entry of dimension m*l.
WDShadow wd_from_multisegment(const Multisegment& s,
                              const LineRegistry& lines = {});

WDShadow direct_sum(const WDShadow& a, const WDShadow& b);

/// N in the standard Jordan basis, blocks in descending size, each block
/// with ones on the superdiagonal.
RationalMatrix monodromy_matrix(const JordanPartition& p);

/// exp(N) as the finite series sum_{k < n} N^k / k!. Throws DomainError if
/// the size exceeds configured_max_matrix().
RationalMatrix exp_nilpotent(const JordanPartition& p);

/// Nonzero entries of exp(N) - 1, counted on the exact matrix.
std::int64_t nonzero_count_exp(const JordanPartition& p);

/// Sum over blocks of l(l-1)/2.
std::int64_t nonzero_count_closed_form(const JordanPartition& p);

}  // namespace bzfam
