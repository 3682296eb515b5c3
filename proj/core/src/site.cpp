#include "bzfam/site.hpp"

#include <algorithm>

#include "bzfam/error.hpp"

namespace bzfam {

PointSet PointSet::full(std::size_t universe) {
  PointSet s(universe);
  for (std::size_t i = 0; i < universe; ++i) s.insert(i);
  return s;
}

std::size_t PointSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<std::size_t> PointSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

bool PointSet::subset_of(const PointSet& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

PointSet PointSet::operator|(const PointSet& other) const {
  PointSet out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] || other.bits_[i]) out.insert(i);
  }
  return out;
}

PointSet PointSet::operator&(const PointSet& other) const {
  PointSet out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && other.bits_[i]) out.insert(i);
  }
  return out;
}

PointSet PointSet::complement() const {
  PointSet out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (!bits_[i]) out.insert(i);
  }
  return out;
}

// ---------------------------------------------------------------------------

FiniteSite::FiniteSite(std::vector<std::string> points,
                       const std::vector<std::vector<std::string>>& closed_sets)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (points_[i] == points_[j]) {
        throw DomainError("duplicate point '" + points_[i] + "'");
      }
    }
  }
  closed_.reserve(closed_sets.size());
  for (const auto& names : closed_sets) closed_.push_back(make_set(names));
}

std::size_t FiniteSite::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == name) return i;
  }
  throw DomainError("unknown point '" + std::string(name) + "'");
}

PointSet FiniteSite::make_set(const std::vector<std::string>& names) const {
  PointSet s(points_.size());
  for (const auto& n : names) s.insert(index_of(n));
  return s;
}

std::vector<std::string> FiniteSite::names(const PointSet& set) const {
  std::vector<std::string> out;
  for (auto i : set.indices()) out.push_back(points_[i]);
  return out;
}

bool FiniteSite::is_closed(const PointSet& set) const {
  return std::find(closed_.begin(), closed_.end(), set) != closed_.end();
}

bool FiniteSite::is_clopen(const PointSet& set) const {
  return is_closed(set) && is_closed(set.complement());
}

PointSet FiniteSite::closure(const PointSet& set) const {
  PointSet best = PointSet::full(points_.size());
  for (const auto& c : closed_) {
    if (set.subset_of(c)) best = best & c;
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

std::string show(const FiniteSite& site, const PointSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& n : site.names(s)) {
    if (!first) out += ",";
    first = false;
    out += n;
  }
  return out + "}";
}

}  // namespace

SiteCheck validate_site(const FiniteSite& site) {
  SiteCheck check;
  auto fail = [&check](std::string msg) {
    check.ok = false;
    check.violations.push_back(std::move(msg));
  };
  const PointSet empty(site.size());
  const PointSet all = PointSet::full(site.size());
  if (!site.is_closed(empty)) fail("empty set is not closed");
  if (!site.is_closed(all)) fail("X is not closed");
  const auto& closed = site.closed_sets();
  for (std::size_t i = 0; i < closed.size(); ++i) {
    for (std::size_t j = i + 1; j < closed.size(); ++j) {
      if (!site.is_closed(closed[i] | closed[j])) {
        fail("union " + show(site, closed[i]) + " u " + show(site, closed[j]) +
             " is not closed");
      }
      if (!site.is_closed(closed[i] & closed[j])) {
        fail("intersection " + show(site, closed[i]) + " n " +
             show(site, closed[j]) + " is not closed");
      }
    }
  }
  return check;
}

bool is_dense(const FiniteSite& site, const PointSet& sigma) {
  const PointSet all = PointSet::full(site.size());
  for (const auto& c : site.closed_sets()) {
    if (sigma.subset_of(c) && c != all) return false;
  }
  return true;
}

}  // namespace bzfam
