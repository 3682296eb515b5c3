#include "bzfam/dimension.hpp"

#include <cstdlib>
#include <string>

#include "bzfam/error.hpp"

namespace bzfam {

namespace {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  const mpz_class z(p);
  return mpz_probab_prime_p(z.get_mpz_t(), 50) > 0;
}

ExactInt power(const ExactInt& base, unsigned long exp) {
  ExactInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

PrimePower::PrimePower(unsigned long p, int f) : p_(p), f_(f) {
  if (!is_prime(p)) {
    throw DomainError("p = " + std::to_string(p) + " is not prime");
  }
  if (f < 1) throw DomainError("f must be >= 1");
  q_ = power(ExactInt(p), static_cast<unsigned long>(f));
}

PrimePower PrimePower::from_q(const ExactInt& q) {
  if (q < 2) throw DomainError("q = " + q.get_str() + " is not a prime power");
  ExactInt p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;  // q itself is prime
  if (!p.fits_ulong_p()) throw DomainError("prime " + p.get_str() + " too large");
  ExactInt rest = q;
  int f = 0;
  while (rest % p == 0) {
    rest /= p;
    ++f;
  }
  if (rest != 1) throw DomainError("q = " + q.get_str() + " is not a prime power");
  return PrimePower(p.get_ui(), f);
}

PrimePower PrimePower::extend(int degree) const {
  if (degree < 1) throw DomainError("extension degree must be >= 1");
  return PrimePower(p_, f_ * degree);
}

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw DomainError("empty composition");
  for (int part : parts_) {
    if (part < 1) throw DomainError("composition parts must be >= 1");
    n_ += part;
  }
}

std::vector<Composition> compositions(int n) {
  if (n < 1) throw DomainError("compositions: n must be >= 1");
  if (n > 30) throw DomainError("compositions: n too large");
  std::vector<Composition> out;
  const std::uint32_t masks = 1u << (n - 1);
  out.reserve(masks);
  // Bit k of the mask set means a cut after position k + 1.
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<int> parts;
    int run = 1;
    for (int k = 0; k < n - 1; ++k) {
      if (mask & (1u << k)) {
        parts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    parts.push_back(run);
    out.emplace_back(std::move(parts));
  }
  return out;
}

int configured_max_n() {
  if (const char* env = std::getenv("BZ_MAX_N")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 30) {
      return static_cast<int>(v);
    }
  }
  return 12;
}

ExactInt exact_divide(const ExactInt& a, const ExactInt& b) {
  BZFAM_CHECK(b != 0, "division by zero");
  BZFAM_CHECK(mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()) != 0,
              a.get_str() + " is not divisible by " + b.get_str());
  ExactInt out;
  mpz_divexact(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

ExactInt q_factorial(int k, const ExactInt& q) {
  ExactInt num = 1;
  ExactInt qj = 1;
  for (int j = 1; j <= k; ++j) {
    qj *= q;
    num *= qj - 1;
  }
  return exact_divide(num, power(q - 1, static_cast<unsigned long>(k)));
}

ExactInt gaussian_flag_count(const Composition& c, const PrimePower& q) {
  ExactInt denom = 1;
  for (int part : c.parts()) denom *= q_factorial(part, q.q());
  return exact_divide(q_factorial(c.n(), q.q()), denom);
}

ExactInt steinberg_k1_dim(int n, const PrimePower& q) {
  if (n < 1) throw DomainError("steinberg_k1_dim: n must be >= 1");
  const auto e = static_cast<unsigned long>(n) * static_cast<unsigned long>(n - 1) / 2;
  return power(q.q(), e);
}

ExactInt parabolic_alternating_sum(int n, const PrimePower& q) {
  if (n < 1) throw DomainError("parabolic_alternating_sum: n must be >= 1");
  if (n > configured_max_n()) {
    throw DomainError("n = " + std::to_string(n) + " exceeds the bound " +
                      std::to_string(configured_max_n()) + " (BZ_MAX_N)");
  }
  ExactInt total = 0;
  for (const auto& c : compositions(n)) {
    const ExactInt term = gaussian_flag_count(c, q);
    if (c.levi_rank() % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

void require_unramified(const Multisegment& s, const LineRegistry& lines) {
  for (const auto& seg : s.segments()) {
    const auto line = lines.lookup(seg.line);
    if (!line.unramified()) {
      throw DomainError("segment " + to_string(seg) +
                        " does not lie on an unramified block-1 line");
    }
  }
}

ExactInt standard_module_k1_dim(const Multisegment& s, const PrimePower& q,
                                const LineRegistry& lines) {
  if (s.empty()) throw DomainError("standard_module_k1_dim: empty multisegment");
  require_unramified(s, lines);
  std::vector<int> parts;
  ExactInt steinberg_factor = 1;
  for (const auto& seg : admissible_order(s)) {
    parts.push_back(static_cast<int>(seg.length));
    steinberg_factor *= steinberg_k1_dim(static_cast<int>(seg.length), q);
  }
  return gaussian_flag_count(Composition(std::move(parts)), q) * steinberg_factor;
}

std::int64_t vp(const ExactInt& x, const ExactInt& p) {
  if (x == 0) throw DomainError("vp: x = 0 has no valuation");
  if (p < 2) throw DomainError("vp: p must be >= 2");
  ExactInt rest = abs(x);
  std::int64_t e = 0;
  while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    ++e;
  }
  return e;
}

std::int64_t valuation_statistic(const ExactInt& x, const PrimePower& q) {
  const std::int64_t v = vp(x, ExactInt(q.p()));
  if (v % q.f() != 0) {
    throw DomainError("v_p(" + x.get_str() + ") = " + std::to_string(v) +
                      " is not a multiple of f = " + std::to_string(q.f()));
  }
  return v / q.f();
}

std::int64_t elementary_statistic_delta(std::int64_t a, std::int64_t b,
                                        std::int64_t c) {
  if (a < 1 || b < 1) throw DomainError("segment lengths must be >= 1");
  if (c < 0 || c >= std::min(a, b)) {
    throw DomainError("overlap must satisfy 0 <= c < min(a, b)");
  }
  return (a - c) * (b - c);
}

bool triangle_check(const Multisegment& s, const PrimePower& q,
                    const std::map<Multisegment, ExactInt>& mults,
                    const ExactInt& unit, const LineRegistry& lines) {
  require_unramified(s, lines);
  const ExactInt p(q.p());
  if (unit <= 0 || unit % p == 0) {
    throw DomainError("unit must be positive and prime to p");
  }
  const std::int64_t stat = statistic(s);
  ExactInt total =
      unit * power(q.q(), static_cast<unsigned long>(stat));
  for (const auto& [lower, m] : mults) {
    if (m <= 0) throw DomainError("multiplicities must be positive");
    if (!less(lower, s)) {
      throw DomainError(to_string(lower) + " is not strictly below " +
                        to_string(s));
    }
    total += m * power(q.q(), static_cast<unsigned long>(statistic(lower)));
  }
  return vp(total, p) == static_cast<std::int64_t>(q.f()) * stat;
}

}  // namespace bzfam
