#pragma once

// Finite-site model of families of irreducible admissible representations
// of prod_i GL_n(F_i), and the two-step rigidity decision procedure.
//
// Every point x of the dense subset sigma carries one multisegment S_{i,x}
// per field F_i. Traces of test functions are simulated from those
// multisegments:
//   * the type idempotent e_i acts by 1 on Q(S) iff S dominates some
//     unramified twist of S_{i,x0} with the same support;
//   * K_1-fixed dimensions are u * q^{stat(S)} with a seed-derived unit u
//     prime to p, Iwahori-fixed dimensions are seed-derived in [1, n!].
// Only valuations feed the verdict, so reports do not depend on the seeds.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bzfam/dimension.hpp"
#include "bzfam/multisegment.hpp"
#include "bzfam/site.hpp"

namespace bzfam {

struct UnitSeeds {
  std::uint64_t k1 = 0;
  std::uint64_t iwahori = 0;
  bool operator==(const UnitSeeds&) const = default;
};

/// A trace value asserted by the scenario in place of the one implied by the
/// assignment. Lets a scenario describe an inconsistent family on purpose.
struct DeclaredValuation {
  std::string point;
  int field = 0;  // 0-based
  std::int64_t value = 0;
};

struct FamilyScenario {
  std::vector<PrimePower> fields;
  FiniteSite site;
  PointSet sigma;
  LineRegistry lines;
  /// point -> one multisegment per field; only points of sigma.
  std::map<std::string, std::vector<Multisegment>> assignment;
  UnitSeeds unit_seeds;
  std::vector<DeclaredValuation> declared_valuations;

  const Multisegment& at(std::string_view point, int field) const;
  std::optional<std::int64_t> declared(std::string_view point, int field) const;
};

/// Throws DomainError describing the first failed check: valid site, dense
/// sigma, a full and well-formed assignment on sigma, and a common rank n per
/// field.
void validate_scenario(const FamilyScenario& scenario);

/// A function X -> Z standing for phi = T(f) on the site.
struct SimulatedTrace {
  std::string test_function;
  std::vector<ExactInt> values;  // indexed like FiniteSite::points()
};

/// Extends values known on sigma to all of X: a point outside sigma takes
/// the value whose sigma-fiber has it in its closure. Throws ModelViolation
/// ("closed-fiber") when that value is not unique.
SimulatedTrace extend_from_sigma(const FiniteSite& site, const PointSet& sigma,
                                 std::string test_function,
                                 const std::vector<std::optional<ExactInt>>& on_sigma);

/// The fiber of trace through x0, after checking that every fiber is closed
/// and that this fiber is also open. Throws ModelViolation otherwise.
PointSet clopen_locus(const FiniteSite& site, const SimulatedTrace& trace,
                      std::size_t x0);

struct TwistPairing {
  Segment from;
  Segment to;
};

struct TypeTraceResult {
  int value = 0;
  Multisegment witness;               // the twist s0' of s0 with s0' <= s
  std::vector<TwistPairing> pairing;  // segment of s0 -> segment of s0'
};

/// Searches for an unramified twist s0' of s0 (segments twisted
/// independently) with support(s0') = support(s) and s0' <= s. Prefers
/// s0' = s when s is itself such a twist.
TypeTraceResult type_trace_search(const Multisegment& s0, const Multisegment& s,
                                  const LineRegistry& lines = {});

int type_trace(const Multisegment& s0, const Multisegment& s,
               const LineRegistry& lines = {});

/// u * q^{stat(s)}, u a seed-derived positive integer prime to p and at most
/// prod_{i=1..n} (q^i - 1), so the value never exceeds |GL_n(F_q)|.
ExactInt k1_trace(const Multisegment& s, const PrimePower& q, std::uint64_t seed,
                  const LineRegistry& lines = {});

/// Seed-derived integer in [1, n!].
ExactInt iwahori_trace(const Multisegment& s, int n, std::uint64_t seed,
                       const LineRegistry& lines = {});

struct BaseChangeOptions {
  /// Optional consistency check: line -> expected block size.
  std::map<std::string, int> per_line_degree;
  /// (line, character index 1..m) -> coset; replaces the default fresh coset.
  std::map<std::pair<std::string, int>, std::string> coset_override;
};

/// Each segment of length l on a block-m line that is not already
/// unramified becomes m segments of length l on the unramified line
/// "<line>'", one per character, in cosets "<coset>#1" ... "<coset>#m".
Multisegment base_change_shadow(const Multisegment& s, const LineRegistry& lines,
                                const BaseChangeOptions& options = {});

/// Degree d of the unramified extension used for field i: the lcm of the
/// block sizes met in the field's assignment.
int base_change_degree(const FamilyScenario& scenario, int field);

/// v_p(T''(f'') / T'(f')) / v_p(q') at x for field j, where T' traces the K_1
/// idempotent at j and Iwahori idempotents elsewhere over the base-changed
/// fields, and T'' repeats it after a further quadratic unramified extension
/// at j. Throws ModelViolation ("non-integral-valuation") if the quotient is
/// not an integer, DomainError if x is not in sigma.
std::int64_t ratio_valuation(const FamilyScenario& scenario, std::string_view x,
                             int field);

struct ValuationRecord {
  std::string step;  // "type_trace", "ratio_valuation", "declared_valuation"
  std::string point;
  int field = 0;
  std::int64_t value = 0;
};

struct FieldCertificate {
  int field = 0;
  std::vector<TwistPairing> pairing;
};

struct PointVerdict {
  std::string point;
  bool twist_equal = false;
  std::vector<FieldCertificate> fields;
};

struct Violation {
  std::string kind;
  std::string point;
  int field = -1;
  std::string message;
  std::optional<Multisegment> witness;   // twist of S_{field,x0} below observed
  std::optional<Multisegment> observed;  // S_{field,point}
  std::optional<std::int64_t> observed_valuation;
  std::optional<std::int64_t> computed_valuation;
  std::optional<std::int64_t> reference_valuation;  // at x0
  std::optional<bool> base_change_strict;
};

struct RigidityReport {
  std::string x0;
  std::vector<std::string> locus;  // X_0
  std::vector<std::vector<std::pair<std::string, std::int64_t>>> orbit;
  std::vector<PointVerdict> verdicts;
  std::vector<Violation> violations;
  std::vector<ValuationRecord> trace;

  bool certified() const { return violations.empty(); }
};

/// Step 1 intersects the clopen loci of the type-idempotent traces; step 2
/// shrinks by the loci of the ratio valuations and certifies every point of
/// X_0 n sigma as a twist of x0 field by field. Inconsistent data is reported
/// in RigidityReport::violations. Throws DomainError if the scenario does not
/// validate or x0 is not in sigma.
RigidityReport run_pipeline(const FamilyScenario& scenario, std::string_view x0);

}  // namespace bzfam
