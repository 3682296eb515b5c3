#include "bzfam/weil_deligne.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "bzfam/error.hpp"

namespace bzfam {

JordanPartition::JordanPartition(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  for (int b : blocks_) {
    if (b < 1) throw DomainError("Jordan block sizes must be >= 1");
  }
  std::sort(blocks_.begin(), blocks_.end(), std::greater<>());
}

int JordanPartition::size() const {
  int n = 0;
  for (int b : blocks_) n += b;
  return n;
}

// ---------------------------------------------------------------------------

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  BZFAM_CHECK(cols_ == rhs.rows_, "matrix shape mismatch");
  RationalMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const mpq_class& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        const mpq_class& b = rhs(k, j);
        if (sgn(b) != 0) out(i, j) += a * b;
      }
    }
  }
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& rhs) const {
  BZFAM_CHECK(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix shape mismatch");
  RationalMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& rhs) const {
  BZFAM_CHECK(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix shape mismatch");
  RationalMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

RationalMatrix RationalMatrix::scaled(const mpq_class& c) const {
  RationalMatrix out = *this;
  for (auto& x : out.data_) x *= c;
  return out;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const mpq_class& x) { return sgn(x) == 0; });
}

std::size_t RationalMatrix::nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(
      data_.begin(), data_.end(), [](const mpq_class& x) { return sgn(x) != 0; }));
}

bool RationalMatrix::upper_unitriangular() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    if ((*this)(i, i) != 1) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (sgn((*this)(i, j)) != 0) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

int configured_max_matrix() {
  if (const char* env = std::getenv("BZ_MAX_MATRIX")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) {
      return static_cast<int>(v);
    }
  }
  return 64;
}

JordanPartition sp_partition(int n) {
  if (n < 1) throw DomainError("sp_partition: n must be >= 1");
  return JordanPartition({n});
}

WDShadow wd_from_multisegment(const Multisegment& s, const LineRegistry& lines) {
  WDShadow out;
  std::vector<int> blocks;
  for (const auto& seg : s.segments()) {
    const auto line = lines.lookup(seg.line);
    const auto len = static_cast<int>(seg.length);
    for (int k = 0; k < line.block_size; ++k) blocks.push_back(len);
    out.inertia.push_back(InertiaEntry{line.inertial_label, line.block_size * len});
  }
  std::sort(out.inertia.begin(), out.inertia.end());
  out.partition = JordanPartition(std::move(blocks));
  return out;
}

WDShadow direct_sum(const WDShadow& a, const WDShadow& b) {
  WDShadow out;
  out.inertia = a.inertia;
  out.inertia.insert(out.inertia.end(), b.inertia.begin(), b.inertia.end());
  std::sort(out.inertia.begin(), out.inertia.end());
  std::vector<int> blocks = a.partition.blocks();
  blocks.insert(blocks.end(), b.partition.blocks().begin(), b.partition.blocks().end());
  out.partition = JordanPartition(std::move(blocks));
  return out;
}

RationalMatrix monodromy_matrix(const JordanPartition& p) {
  const auto n = static_cast<std::size_t>(p.size());
  RationalMatrix m(n, n);
  std::size_t offset = 0;
  for (int block : p.blocks()) {
    for (int i = 0; i + 1 < block; ++i) m(offset + i, offset + i + 1) = 1;
    offset += static_cast<std::size_t>(block);
  }
  return m;
}

RationalMatrix exp_nilpotent(const JordanPartition& p) {
  const int n = p.size();
  if (n > configured_max_matrix()) {
    throw DomainError("matrix size " + std::to_string(n) + " exceeds the bound " +
                      std::to_string(configured_max_matrix()));
  }
  const auto size = static_cast<std::size_t>(n);
  const RationalMatrix nilpotent = monodromy_matrix(p);
  RationalMatrix result = RationalMatrix::identity(size);
  RationalMatrix term = RationalMatrix::identity(size);  // N^k / k!
  for (int k = 1; k < n; ++k) {
    term = (term * nilpotent).scaled(mpq_class(1, k));
    result = result + term;
  }
  BZFAM_CHECK((term * nilpotent).is_zero(), "N^n != 0 for a nilpotent N");
  return result;
}

std::int64_t nonzero_count_exp(const JordanPartition& p) {
  const auto e = exp_nilpotent(p);
  return static_cast<std::int64_t>(
      (e - RationalMatrix::identity(e.rows())).nonzero_count());
}

std::int64_t nonzero_count_closed_form(const JordanPartition& p) {
  std::int64_t total = 0;
  for (int b : p.blocks()) total += static_cast<std::int64_t>(b) * (b - 1) / 2;
  return total;
}

}  // namespace bzfam
