#pragma once

// Exact q-arithmetic for fixed vectors under the principal congruence
// subgroup K_1 = ker(GL_n(O) -> GL_n(O/p)).
//
// Everything is exact; dimensions are GMP integers.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "bzfam/multisegment.hpp"

namespace bzfam {

using ExactInt = mpz_class;

/// Residue-field cardinality q = p^f.
class PrimePower {
 public:
  /// Throws DomainError unless p is prime and f >= 1.
  PrimePower(unsigned long p, int f);

  /// Factors q; throws DomainError if q is not a prime power.
  static PrimePower from_q(const ExactInt& q);

  unsigned long p() const { return p_; }
  int f() const { return f_; }
  const ExactInt& q() const { return q_; }

  /// Residue cardinality of the degree-d unramified extension, q^d.
  PrimePower extend(int degree) const;

  bool operator==(const PrimePower& o) const { return p_ == o.p_ && f_ == o.f_; }

 private:
  unsigned long p_;
  int f_;
  ExactInt q_;
};

/// Block sizes of a standard Levi GL_{n_1} x ... x GL_{n_r}.
class Composition {
 public:
  /// Throws DomainError if empty or some part is < 1.
  explicit Composition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int n() const { return n_; }
  /// Number of simple roots inside the Levi, n - r.
  int levi_rank() const { return n_ - static_cast<int>(parts_.size()); }

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

/// All 2^(n-1) compositions of n, in lexicographic order of cut masks.
std::vector<Composition> compositions(int n);

/// Upper bound on n for the alternating sum: BZ_MAX_N if set, else 12.
int configured_max_n();

/// Exact division; aborts when b does not divide a.
ExactInt exact_divide(const ExactInt& a, const ExactInt& b);

/// q-factorial [k]_q! = prod_{j=1..k} (q^j - 1)/(q - 1).
ExactInt q_factorial(int k, const ExactInt& q);

/// |(P\GL_n)(F_q)| as a q-multinomial coefficient. Always = 1 mod p.
ExactInt gaussian_flag_count(const Composition& c, const PrimePower& q);

/// q^{n(n-1)/2}.
ExactInt steinberg_k1_dim(int n, const PrimePower& q);

/// sum over compositions c of n of (-1)^{n - #c} |(P_c\GL_n)(F_q)|.
/// Throws DomainError if n < 1 or n > configured_max_n().
ExactInt parabolic_alternating_sum(int n, const PrimePower& q);

/// dim of the K_1-fixed vectors in the standard module of s:
/// flag count for the lengths of s, times prod q^{l(l-1)/2}.
/// Throws DomainError if some segment lies on a non-unramified line.
ExactInt standard_module_k1_dim(const Multisegment& s, const PrimePower& q,
                                const LineRegistry& lines = {});

/// Largest e with p^e | x. Throws DomainError for x = 0 or p < 2.
std::int64_t vp(const ExactInt& x, const ExactInt& p);

/// vp(x, p) / f. Throws DomainError if f does not divide vp(x, p).
std::int64_t valuation_statistic(const ExactInt& x, const PrimePower& q);

/// Increase of the statistic under an elementary operation on segments of
/// lengths a and b overlapping in c points: (a - c)(b - c).
/// Throws DomainError unless a, b >= 1 and 0 <= c < min(a, b).
std::int64_t elementary_statistic_delta(std::int64_t a, std::int64_t b,
                                        std::int64_t c);

/// Models dim pi(S)^{K_1} = unit * q^{stat(S)} + sum_{S' < S} m(S') q^{stat(S')}
/// with opaque multiplicities and checks that the p-adic valuation of the
/// total is carried by the leading term alone.
///
/// Throws DomainError if a key of mults is not strictly below s, a
/// multiplicity is not positive, the unit is not positive and prime to p, or
/// the support is not unramified.
bool triangle_check(const Multisegment& s, const PrimePower& q,
                    const std::map<Multisegment, ExactInt>& mults,
                    const ExactInt& unit, const LineRegistry& lines = {});

/// Throws DomainError if s has a segment on a non-unramified line.
void require_unramified(const Multisegment& s, const LineRegistry& lines);

}  // namespace bzfam
