#pragma once

// Segments and multisegments on cuspidal lines, the linking relation,
// elementary operations and the induced partial order.
//
// A cuspidal line stands for the orbit {tau (x) |det|^k : k in Z} of one
// supercuspidal tau of GL_m. Non-integral unramified twists of the same tau
// live on the same line but in a different coset; segments in distinct
// cosets never link.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bzfam {

inline constexpr std::string_view kDefaultLine = "A";
inline constexpr std::string_view kDefaultCoset = "c0";
inline constexpr std::string_view kUnramifiedLabel = "unr";

struct CuspidalLine {
  std::string line_id;
  int block_size = 1;
  std::string inertial_label = std::string(kUnramifiedLabel);

  bool unramified() const {
    return block_size == 1 && inertial_label == kUnramifiedLabel;
  }
  bool operator==(const CuspidalLine&) const = default;
};

/// Declared cuspidal lines. Lines that were never declared behave as
/// block-size-1 lines with the unramified inertial label.
class LineRegistry {
 public:
  LineRegistry() = default;
  explicit LineRegistry(std::vector<CuspidalLine> lines);

  /// Throws DomainError on a conflicting redeclaration, a block size < 1, or
  /// an inertial label already bound to a different block size.
  void add(CuspidalLine line);

  CuspidalLine lookup(std::string_view line_id) const;
  bool declared(std::string_view line_id) const;
  std::vector<CuspidalLine> lines() const;

 private:
  std::map<std::string, CuspidalLine, std::less<>> lines_;
};

struct Segment {
  std::string line = std::string(kDefaultLine);
  std::string coset = std::string(kDefaultCoset);
  std::int64_t start = 0;
  std::int64_t length = 1;

  std::int64_t last() const { return start + length - 1; }
  bool same_axis(const Segment& other) const {
    return line == other.line && coset == other.coset;
  }
  auto operator<=>(const Segment&) const = default;
};

/// Segment on the default line and coset.
Segment seg(std::int64_t start, std::int64_t length);
Segment seg(std::string line, std::int64_t start, std::int64_t length);

/// A bag of segments stored in canonical sorted order, so bag equality is
/// plain equality.
class Multisegment {
 public:
  Multisegment() = default;
  /// Throws DomainError if some segment has length < 1.
  Multisegment(std::vector<Segment> segments);  // NOLINT(runtime/explicit)
  Multisegment(std::initializer_list<Segment> segments)
      : Multisegment(std::vector<Segment>(segments)) {}

  std::span<const Segment> segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  /// Number of cuspidal points counted with multiplicity.
  std::int64_t degree() const;

  auto operator<=>(const Multisegment&) const = default;

 private:
  std::vector<Segment> segments_;
};

struct MultisegmentHash {
  std::size_t operator()(const Multisegment& s) const noexcept;
};

struct SupportPoint {
  std::string line;
  std::string coset;
  std::int64_t position = 0;
  auto operator<=>(const SupportPoint&) const = default;
};

/// Sorted bag of cuspidal points.
using SupportMultiset = std::vector<SupportPoint>;

bool is_linked(const Segment& a, const Segment& b);
bool precedes(const Segment& a, const Segment& b);

/// Ordering in which no earlier segment precedes a later one. Sort key is
/// (line, coset, start descending, length descending).
std::vector<Segment> admissible_order(const Multisegment& s);

SupportMultiset support(const Multisegment& s);

/// One elementary operation applied to the linked pair (first, second).
struct ElementaryStep {
  Segment first;
  Segment second;
  std::int64_t overlap = 0;  // |first ∩ second|
  Multisegment child;
};

/// Every elementary operation available on s, one per unordered linked pair
/// of positions (duplicates possible when s has repeated segments).
std::vector<ElementaryStep> elementary_steps(const Multisegment& s);

/// Distinct multisegments one elementary operation below s, sorted.
std::vector<Multisegment> elementary_children(const Multisegment& s);

/// s0 <= s: s0 equals s or is reached from s by a chain of elementary
/// operations.
bool leq(const Multisegment& s0, const Multisegment& s);

/// s0 < s.
bool less(const Multisegment& s0, const Multisegment& s);

struct ClosureEdge {
  std::size_t parent = 0;
  std::size_t child = 0;
  std::int64_t len_a = 0;
  std::int64_t len_b = 0;
  std::int64_t overlap = 0;
  std::int64_t statistic_delta = 0;
};

/// Hasse-style graph of the downward closure: nodes in breadth-first
/// discovery order (node 0 is the root), one edge per distinct
/// (parent, child) elementary operation.
struct ClosureGraph {
  std::vector<Multisegment> nodes;
  std::vector<ClosureEdge> edges;
};

ClosureGraph downward_closure_graph(const Multisegment& s);

/// {s0 : s0 <= s}, sorted.
std::vector<Multisegment> downward_closure(const Multisegment& s);

/// Sum over segments of l(l-1)/2.
std::int64_t statistic(const Multisegment& s);

/// Bag of (inertial label, length) pairs, sorted; the datum that survives
/// independent unramified twists of the segments.
std::vector<std::pair<std::string, std::int64_t>> twist_orbit(
    const Multisegment& s, const LineRegistry& lines = {});

bool twist_orbit_equal(const Multisegment& s, const Multisegment& t,
                       const LineRegistry& lines = {});

/// Compact human-readable form, e.g. "{A/c0[0,+2], A/c0[2,+1]}".
std::string to_string(const Segment& s);
std::string to_string(const Multisegment& s);

}  // namespace bzfam
