#pragma once

// Finite topological spaces given by their closed sets.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bzfam {

/// Subset of the points of a FiniteSite, by point index.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t universe) : bits_(universe, false) {}
  static PointSet full(std::size_t universe);

  std::size_t universe() const { return bits_.size(); }
  bool contains(std::size_t i) const { return bits_[i]; }
  void insert(std::size_t i) { bits_[i] = true; }
  void erase(std::size_t i) { bits_[i] = false; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::size_t> indices() const;

  bool subset_of(const PointSet& other) const;
  PointSet operator|(const PointSet& other) const;
  PointSet operator&(const PointSet& other) const;
  PointSet complement() const;

  bool operator==(const PointSet&) const = default;

 private:
  std::vector<bool> bits_;
};

class FiniteSite {
 public:
  FiniteSite() = default;
  /// Throws DomainError on duplicate point names or closed sets naming
  /// unknown points. Does not check the closed-set axioms.
  FiniteSite(std::vector<std::string> points,
             const std::vector<std::vector<std::string>>& closed_sets);

  const std::vector<std::string>& points() const { return points_; }
  const std::vector<PointSet>& closed_sets() const { return closed_; }
  std::size_t size() const { return points_.size(); }

  /// Throws DomainError for an unknown name.
  std::size_t index_of(std::string_view name) const;
  PointSet make_set(const std::vector<std::string>& names) const;
  std::vector<std::string> names(const PointSet& set) const;

  bool is_closed(const PointSet& set) const;
  bool is_clopen(const PointSet& set) const;
  /// Smallest closed set containing set (requires a valid site).
  PointSet closure(const PointSet& set) const;

 private:
  std::vector<std::string> points_;
  std::vector<PointSet> closed_;
};

struct SiteCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks that the empty set and X are closed and that closed sets are
/// stable under pairwise union and intersection; lists each failing instance.
SiteCheck validate_site(const FiniteSite& site);

/// The only closed set containing sigma is X.
bool is_dense(const FiniteSite& site, const PointSet& sigma);

}  // namespace bzfam
