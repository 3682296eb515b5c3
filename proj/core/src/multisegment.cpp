#include "bzfam/multisegment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "bzfam/error.hpp"

namespace bzfam {

namespace detail {
void internal_failure(const char* expr, const char* file, int line,
                      const std::string& message) {
  std::fprintf(stderr, "bzfam internal check failed: %s (%s:%d): %s\n", expr,
               file, line, message.c_str());
  std::abort();
}
}  // namespace detail

// ---------------------------------------------------------------------------
// LineRegistry

LineRegistry::LineRegistry(std::vector<CuspidalLine> lines) {
  for (auto& line : lines) add(std::move(line));
}

void LineRegistry::add(CuspidalLine line) {
  if (line.line_id.empty()) throw DomainError("cuspidal line with empty id");
  if (line.block_size < 1) {
    throw DomainError("line '" + line.line_id + "': block_size must be >= 1");
  }
  if (line.inertial_label == kUnramifiedLabel && line.block_size != 1) {
    throw DomainError("line '" + line.line_id +
                      "': the unramified label requires block_size 1");
  }
  for (const auto& [id, other] : lines_) {
    if (other.inertial_label == line.inertial_label &&
        other.block_size != line.block_size) {
      throw DomainError("inertial label '" + line.inertial_label +
                        "' used with block sizes " +
                        std::to_string(other.block_size) + " and " +
                        std::to_string(line.block_size));
    }
  }
  if (auto it = lines_.find(line.line_id); it != lines_.end()) {
    if (it->second != line) {
      throw DomainError("conflicting declarations of line '" + line.line_id +
                        "'");
    }
    return;
  }
  auto id = line.line_id;
  lines_.emplace(std::move(id), std::move(line));
}

CuspidalLine LineRegistry::lookup(std::string_view line_id) const {
  if (auto it = lines_.find(line_id); it != lines_.end()) return it->second;
  return CuspidalLine{std::string(line_id), 1, std::string(kUnramifiedLabel)};
}

bool LineRegistry::declared(std::string_view line_id) const {
  return lines_.find(line_id) != lines_.end();
}

std::vector<CuspidalLine> LineRegistry::lines() const {
  std::vector<CuspidalLine> out;
  out.reserve(lines_.size());
  for (const auto& [id, line] : lines_) out.push_back(line);
  return out;
}

// ---------------------------------------------------------------------------
// Segment / Multisegment

Segment seg(std::int64_t start, std::int64_t length) {
  return Segment{std::string(kDefaultLine), std::string(kDefaultCoset), start,
                 length};
}

Segment seg(std::string line, std::int64_t start, std::int64_t length) {
  return Segment{std::move(line), std::string(kDefaultCoset), start, length};
}

Multisegment::Multisegment(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  for (const auto& s : segments_) {
    if (s.length < 1) {
      throw DomainError("segment " + to_string(s) + " has length < 1");
    }
  }
  std::sort(segments_.begin(), segments_.end());
}

std::int64_t Multisegment::degree() const {
  std::int64_t n = 0;
  for (const auto& s : segments_) n += s.length;
  return n;
}

std::size_t MultisegmentHash::operator()(const Multisegment& s) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (const auto& seg : s.segments()) {
    mix(std::hash<std::string>{}(seg.line));
    mix(std::hash<std::string>{}(seg.coset));
    mix(std::hash<std::int64_t>{}(seg.start));
    mix(std::hash<std::int64_t>{}(seg.length));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Linking

namespace {

bool contains(const Segment& outer, const Segment& inner) {
  return outer.start <= inner.start && inner.last() <= outer.last();
}

std::int64_t overlap_length(const Segment& a, const Segment& b) {
  return std::max<std::int64_t>(
      0, std::min(a.last(), b.last()) - std::max(a.start, b.start) + 1);
}

}  // namespace

bool is_linked(const Segment& a, const Segment& b) {
  if (!a.same_axis(b)) return false;
  if (contains(a, b) || contains(b, a)) return false;
  // Union is an interval iff the gap between them is empty.
  return std::max(a.start, b.start) <= std::min(a.last(), b.last()) + 1;
}

bool precedes(const Segment& a, const Segment& b) {
  return is_linked(a, b) && b.start - a.start >= 1;
}

std::vector<Segment> admissible_order(const Multisegment& s) {
  std::vector<Segment> out(s.segments().begin(), s.segments().end());
  std::sort(out.begin(), out.end(), [](const Segment& x, const Segment& y) {
    if (x.line != y.line) return x.line < y.line;
    if (x.coset != y.coset) return x.coset < y.coset;
    if (x.start != y.start) return x.start > y.start;
    return x.length > y.length;
  });
  return out;
}

SupportMultiset support(const Multisegment& s) {
  SupportMultiset out;
  out.reserve(static_cast<std::size_t>(s.degree()));
  for (const auto& seg : s.segments()) {
    for (std::int64_t k = 0; k < seg.length; ++k) {
      out.push_back(SupportPoint{seg.line, seg.coset, seg.start + k});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Elementary operations and the order

std::vector<ElementaryStep> elementary_steps(const Multisegment& s) {
  std::vector<ElementaryStep> steps;
  const auto segs = s.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const Segment& a = segs[i];
      const Segment& b = segs[j];
      if (!is_linked(a, b)) continue;
      const std::int64_t lo = std::min(a.start, b.start);
      const std::int64_t hi = std::max(a.last(), b.last());
      const std::int64_t c = overlap_length(a, b);

      std::vector<Segment> next;
      next.reserve(segs.size());
      for (std::size_t k = 0; k < segs.size(); ++k) {
        if (k != i && k != j) next.push_back(segs[k]);
      }
      next.push_back(Segment{a.line, a.coset, lo, hi - lo + 1});
      if (c > 0) {
        next.push_back(
            Segment{a.line, a.coset, std::max(a.start, b.start), c});
      }
      steps.push_back(ElementaryStep{a, b, c, Multisegment(std::move(next))});
    }
  }
  return steps;
}

std::vector<Multisegment> elementary_children(const Multisegment& s) {
  std::vector<Multisegment> out;
  for (auto& step : elementary_steps(s)) out.push_back(std::move(step.child));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t statistic(const Multisegment& s) {
  std::int64_t total = 0;
  for (const auto& seg : s.segments()) total += seg.length * (seg.length - 1) / 2;
  return total;
}

bool leq(const Multisegment& s0, const Multisegment& s) {
  if (s0 == s) return true;
  return less(s0, s);
}

bool less(const Multisegment& s0, const Multisegment& s) {
  if (s0 == s) return false;
  // Elementary operations preserve support and strictly raise the statistic,
  // so only nodes with statistic below the target's need to be explored.
  const std::int64_t target = statistic(s0);
  if (target <= statistic(s)) return false;
  if (support(s0) != support(s)) return false;

  std::unordered_set<Multisegment, MultisegmentHash> seen{s};
  std::vector<Multisegment> stack{s};
  while (!stack.empty()) {
    Multisegment cur = std::move(stack.back());
    stack.pop_back();
    for (auto& child : elementary_children(cur)) {
      if (child == s0) return true;
      if (statistic(child) >= target) continue;
      if (seen.insert(child).second) stack.push_back(std::move(child));
    }
  }
  return false;
}

ClosureGraph downward_closure_graph(const Multisegment& s) {
  ClosureGraph g;
  std::unordered_map<Multisegment, std::size_t, MultisegmentHash> index;
  g.nodes.push_back(s);
  index.emplace(s, 0);
  for (std::size_t head = 0; head < g.nodes.size(); ++head) {
    std::vector<std::size_t> seen_children;
    // Copy: pushing to g.nodes may reallocate.
    const Multisegment parent = g.nodes[head];
    for (auto& step : elementary_steps(parent)) {
      std::size_t child_idx;
      if (auto it = index.find(step.child); it != index.end()) {
        child_idx = it->second;
      } else {
        child_idx = g.nodes.size();
        index.emplace(step.child, child_idx);
        g.nodes.push_back(step.child);
      }
      if (std::find(seen_children.begin(), seen_children.end(), child_idx) !=
          seen_children.end()) {
        continue;
      }
      seen_children.push_back(child_idx);
      g.edges.push_back(ClosureEdge{
          head, child_idx, step.first.length, step.second.length, step.overlap,
          statistic(g.nodes[child_idx]) - statistic(parent)});
    }
  }
  return g;
}

std::vector<Multisegment> downward_closure(const Multisegment& s) {
  auto nodes = std::move(downward_closure_graph(s).nodes);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

// ---------------------------------------------------------------------------
// Twists

std::vector<std::pair<std::string, std::int64_t>> twist_orbit(
    const Multisegment& s, const LineRegistry& lines) {
  std::vector<std::pair<std::string, std::int64_t>> out;
  out.reserve(s.size());
  for (const auto& seg : s.segments()) {
    out.emplace_back(lines.lookup(seg.line).inertial_label, seg.length);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool twist_orbit_equal(const Multisegment& s, const Multisegment& t,
                       const LineRegistry& lines) {
  return twist_orbit(s, lines) == twist_orbit(t, lines);
}

// ---------------------------------------------------------------------------

std::string to_string(const Segment& s) {
  std::ostringstream os;
  os << s.line << '/' << s.coset << '[' << s.start << ",+" << s.length << ']';
  return os.str();
}

std::string to_string(const Multisegment& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& seg : s.segments()) {
    if (!first) out += ", ";
    first = false;
    out += to_string(seg);
  }
  return out + "}";
}

}  // namespace bzfam
