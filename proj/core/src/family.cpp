#include "bzfam/family.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "bzfam/error.hpp"

namespace bzfam {

// ---------------------------------------------------------------------------
// Scenario

const Multisegment& FamilyScenario::at(std::string_view point, int field) const {
  auto it = assignment.find(std::string(point));
  if (it == assignment.end()) {
    throw DomainError("no assignment for point '" + std::string(point) + "'");
  }
  if (field < 0 || static_cast<std::size_t>(field) >= it->second.size()) {
    throw DomainError("field index " + std::to_string(field + 1) +
                      " out of range at point '" + std::string(point) + "'");
  }
  return it->second[static_cast<std::size_t>(field)];
}

std::optional<std::int64_t> FamilyScenario::declared(std::string_view point,
                                                     int field) const {
  for (const auto& d : declared_valuations) {
    if (d.point == point && d.field == field) return d.value;
  }
  return std::nullopt;
}

namespace {

std::int64_t rank_n(const Multisegment& s, const LineRegistry& lines) {
  std::int64_t n = 0;
  for (const auto& seg : s.segments()) n += lines.lookup(seg.line).block_size * seg.length;
  return n;
}

}  // namespace

void validate_scenario(const FamilyScenario& sc) {
  if (sc.fields.empty()) throw DomainError("scenario has no fields");
  if (sc.site.size() == 0) throw DomainError("scenario site has no points");
  const auto check = validate_site(sc.site);
  if (!check.ok) throw DomainError("invalid site: " + check.violations.front());
  if (sc.sigma.universe() != sc.site.size()) {
    throw DomainError("sigma does not match the site");
  }
  if (!is_dense(sc.site, sc.sigma)) throw DomainError("sigma is not dense in X");

  for (const auto& [point, per_field] : sc.assignment) {
    if (!sc.sigma.contains(sc.site.index_of(point))) {
      throw DomainError("assignment given for '" + point + "', which is not in sigma");
    }
    if (per_field.size() != sc.fields.size()) {
      throw DomainError("point '" + point + "' has " + std::to_string(per_field.size()) +
                        " multisegments for " + std::to_string(sc.fields.size()) +
                        " fields");
    }
  }
  for (std::size_t f = 0; f < sc.fields.size(); ++f) {
    std::optional<std::int64_t> n;
    for (auto x : sc.sigma.indices()) {
      const auto& name = sc.site.points()[x];
      if (!sc.assignment.count(name)) {
        throw DomainError("point '" + name + "' of sigma has no assignment");
      }
      const auto& s = sc.at(name, static_cast<int>(f));
      if (s.empty()) {
        throw DomainError("empty multisegment at '" + name + "'");
      }
      const auto nx = rank_n(s, sc.lines);
      if (n && *n != nx) {
        throw DomainError("field " + std::to_string(f + 1) + ": GL_" +
                          std::to_string(nx) + " at '" + name + "' but GL_" +
                          std::to_string(*n) + " elsewhere");
      }
      n = nx;
    }
  }
  for (const auto& d : sc.declared_valuations) {
    if (!sc.sigma.contains(sc.site.index_of(d.point))) {
      throw DomainError("declared valuation at '" + d.point + "', not in sigma");
    }
    if (d.field < 0 || static_cast<std::size_t>(d.field) >= sc.fields.size()) {
      throw DomainError("declared valuation for unknown field");
    }
  }
}

// ---------------------------------------------------------------------------
// Traces on the site

SimulatedTrace extend_from_sigma(const FiniteSite& site, const PointSet& sigma,
                                 std::string test_function,
                                 const std::vector<std::optional<ExactInt>>& on_sigma) {
  SimulatedTrace trace{std::move(test_function), std::vector<ExactInt>(site.size())};
  std::map<ExactInt, PointSet> fibers;
  for (auto x : sigma.indices()) {
    BZFAM_CHECK(on_sigma[x].has_value(), "missing trace value on sigma");
    auto [it, fresh] = fibers.try_emplace(*on_sigma[x], PointSet(site.size()));
    it->second.insert(x);
    trace.values[x] = *on_sigma[x];
  }
  std::vector<std::pair<ExactInt, PointSet>> closures;
  for (const auto& [value, fiber] : fibers) {
    closures.emplace_back(value, site.closure(fiber));
  }
  for (std::size_t y = 0; y < site.size(); ++y) {
    if (sigma.contains(y)) continue;
    std::vector<const ExactInt*> candidates;
    for (const auto& [value, closure] : closures) {
      if (closure.contains(y)) candidates.push_back(&value);
    }
    if (candidates.size() != 1) {
      throw ModelViolation(
          "closed-fiber",
          trace.test_function + ": point '" + site.points()[y] + "' lies in the closure of " +
              std::to_string(candidates.size()) + " distinct fibers");
    }
    trace.values[y] = *candidates.front();
  }
  return trace;
}

PointSet clopen_locus(const FiniteSite& site, const SimulatedTrace& trace,
                      std::size_t x0) {
  if (trace.values.size() != site.size()) {
    throw DomainError("trace does not cover the site");
  }
  std::map<ExactInt, PointSet> fibers;
  for (std::size_t x = 0; x < site.size(); ++x) {
    auto [it, fresh] = fibers.try_emplace(trace.values[x], PointSet(site.size()));
    it->second.insert(x);
  }
  for (const auto& [value, fiber] : fibers) {
    if (!site.is_closed(fiber)) {
      throw ModelViolation("closed-fiber", trace.test_function + ": fiber over " +
                                               value.get_str() + " is not closed");
    }
  }
  const PointSet& locus = fibers.at(trace.values[x0]);
  if (!site.is_closed(locus.complement())) {
    throw ModelViolation("not-clopen", trace.test_function +
                                           ": fiber through x0 is not open");
  }
  return locus;
}

// ---------------------------------------------------------------------------
// Type idempotent

namespace {

using Axis = std::pair<std::string, std::string>;
using PointKey = std::tuple<std::string, std::string, std::int64_t>;

struct Placement {
  std::string line;
  std::string coset;
  std::int64_t start;
};

class TwistSearch {
 public:
  TwistSearch(const Multisegment& s0, const Multisegment& s, const LineRegistry& lines)
      : target_(s), lines_(lines) {
    for (const auto& p : support(s)) ++pool_[PointKey{p.line, p.coset, p.position}];
    // Group equal (label, length) segments so permutations are tried once.
    for (const auto& seg : s0.segments()) {
      sources_.push_back(seg);
      keys_.emplace_back(lines.lookup(seg.line).inertial_label, seg.length);
    }
    std::vector<std::size_t> order(sources_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys_[a] < keys_[b]; });
    std::vector<Segment> sorted_sources;
    std::vector<std::pair<std::string, std::int64_t>> sorted_keys;
    for (auto i : order) {
      sorted_sources.push_back(sources_[i]);
      sorted_keys.push_back(keys_[i]);
    }
    sources_ = std::move(sorted_sources);
    keys_ = std::move(sorted_keys);
    for (const auto& key : keys_) {
      if (!candidates_.count(key)) candidates_[key] = placements_for(key);
    }
  }

  bool run(TypeTraceResult& out) {
    chosen_.assign(sources_.size(), 0);
    return place(0, 0, out);
  }

 private:
  std::vector<Placement> placements_for(const std::pair<std::string, std::int64_t>& key) const {
    std::vector<Placement> out;
    for (const auto& [pk, count] : pool_) {
      const auto& [line, coset, pos] = pk;
      if (lines_.lookup(line).inertial_label != key.first) continue;
      bool fits = true;
      for (std::int64_t k = 0; k < key.second && fits; ++k) {
        fits = pool_.count(PointKey{line, coset, pos + k}) > 0;
      }
      if (fits) out.push_back(Placement{line, coset, pos});
    }
    return out;
  }

  bool take(const Placement& p, std::int64_t len) {
    for (std::int64_t k = 0; k < len; ++k) {
      if (pool_[PointKey{p.line, p.coset, p.start + k}] == 0) {
        for (std::int64_t r = 0; r < k; ++r) ++pool_[PointKey{p.line, p.coset, p.start + r}];
        return false;
      }
      --pool_[PointKey{p.line, p.coset, p.start + k}];
    }
    return true;
  }

  void give_back(const Placement& p, std::int64_t len) {
    for (std::int64_t k = 0; k < len; ++k) ++pool_[PointKey{p.line, p.coset, p.start + k}];
  }

  bool place(std::size_t i, std::size_t min_choice, TypeTraceResult& out) {
    if (i == sources_.size()) return accept(out);
    const auto& options = candidates_.at(keys_[i]);
    for (std::size_t c = min_choice; c < options.size(); ++c) {
      if (!take(options[c], keys_[i].second)) continue;
      chosen_[i] = c;
      const bool same_next = i + 1 < sources_.size() && keys_[i + 1] == keys_[i];
      if (place(i + 1, same_next ? c : 0, out)) return true;
      give_back(options[c], keys_[i].second);
    }
    return false;
  }

  bool accept(TypeTraceResult& out) {
    std::vector<Segment> placed;
    std::vector<TwistPairing> pairing;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      const auto& p = candidates_.at(keys_[i])[chosen_[i]];
      Segment to{p.line, p.coset, p.start, keys_[i].second};
      placed.push_back(to);
      pairing.push_back(TwistPairing{sources_[i], std::move(to)});
    }
    Multisegment candidate(std::move(placed));
    if (!tried_.insert(candidate).second) return false;
    if (!leq(candidate, target_)) return false;
    out.value = 1;
    out.witness = std::move(candidate);
    out.pairing = std::move(pairing);
    return true;
  }

  const Multisegment& target_;
  const LineRegistry& lines_;
  std::map<PointKey, std::int64_t> pool_;
  std::vector<Segment> sources_;
  std::vector<std::pair<std::string, std::int64_t>> keys_;
  std::map<std::pair<std::string, std::int64_t>, std::vector<Placement>> candidates_;
  std::vector<std::size_t> chosen_;
  std::set<Multisegment> tried_;
};

std::vector<TwistPairing> pair_by_orbit(const Multisegment& s0, const Multisegment& s,
                                        const LineRegistry& lines) {
  auto keyed = [&lines](const Multisegment& m) {
    std::vector<std::pair<std::pair<std::string, std::int64_t>, Segment>> out;
    for (const auto& seg : m.segments()) {
      out.push_back({{lines.lookup(seg.line).inertial_label, seg.length}, seg});
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto a = keyed(s0);
  const auto b = keyed(s);
  std::vector<TwistPairing> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back({a[i].second, b[i].second});
  return out;
}

std::map<std::string, std::int64_t> label_weights(const Multisegment& s,
                                                  const LineRegistry& lines) {
  std::map<std::string, std::int64_t> out;
  for (const auto& seg : s.segments()) out[lines.lookup(seg.line).inertial_label] += seg.length;
  return out;
}

}  // namespace

TypeTraceResult type_trace_search(const Multisegment& s0, const Multisegment& s,
                                  const LineRegistry& lines) {
  TypeTraceResult out;
  if (twist_orbit_equal(s0, s, lines)) {
    out.value = 1;
    out.witness = s;
    out.pairing = pair_by_orbit(s0, s, lines);
    return out;
  }
  // Different inertial support up to twist: the idempotent kills Q(s).
  if (label_weights(s0, lines) != label_weights(s, lines)) return out;
  TwistSearch search(s0, s, lines);
  search.run(out);
  return out;
}

int type_trace(const Multisegment& s0, const Multisegment& s, const LineRegistry& lines) {
  return type_trace_search(s0, s, lines).value;
}

// ---------------------------------------------------------------------------
// Simulated dimensions

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::string_view salt) {
  const std::uint64_t h = fnv1a(salt);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform-ish draw in [1, bound] from 128 random bits.
ExactInt draw_in_range(std::mt19937_64& rng, const ExactInt& bound) {
  ExactInt r = rng();
  r <<= 64;
  r += ExactInt(static_cast<unsigned long>(rng()));
  return 1 + r % bound;
}

}  // namespace

ExactInt k1_trace(const Multisegment& s, const PrimePower& q, std::uint64_t seed,
                  const LineRegistry& lines) {
  require_unramified(s, lines);
  const auto n = s.degree();
  ExactInt bound = 1;
  ExactInt qi = 1;
  for (std::int64_t i = 1; i <= n; ++i) {
    qi *= q.q();
    bound *= qi - 1;
  }
  auto rng = seeded_engine(seed, "k1|" + q.q().get_str() + "|" + to_string(s));
  const ExactInt p(q.p());
  ExactInt unit = 1;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const ExactInt u = draw_in_range(rng, bound);
    if (u % p != 0) {
      unit = u;
      break;
    }
  }
  ExactInt qpow;
  mpz_pow_ui(qpow.get_mpz_t(), q.q().get_mpz_t(), static_cast<unsigned long>(statistic(s)));
  return unit * qpow;
}

ExactInt iwahori_trace(const Multisegment& s, int n, std::uint64_t seed,
                       const LineRegistry& lines) {
  if (n < 1) throw DomainError("iwahori_trace: n must be >= 1");
  require_unramified(s, lines);
  ExactInt factorial;
  mpz_fac_ui(factorial.get_mpz_t(), static_cast<unsigned long>(n));
  auto rng = seeded_engine(seed, "iw|" + std::to_string(n) + "|" + to_string(s));
  return draw_in_range(rng, factorial);
}

// ---------------------------------------------------------------------------
// Base change

Multisegment base_change_shadow(const Multisegment& s, const LineRegistry& lines,
                                const BaseChangeOptions& options) {
  std::vector<Segment> out;
  for (const auto& seg : s.segments()) {
    const auto line = lines.lookup(seg.line);
    if (auto it = options.per_line_degree.find(seg.line);
        it != options.per_line_degree.end() && it->second != line.block_size) {
      throw DomainError("line '" + seg.line + "' has block size " +
                        std::to_string(line.block_size) + ", not " +
                        std::to_string(it->second));
    }
    if (line.unramified()) {
      out.push_back(seg);
      continue;
    }
    const std::string target = seg.line + "'";
    if (!lines.lookup(target).unramified()) {
      throw DomainError("base change target line '" + target + "' is not unramified");
    }
    for (int m = 1; m <= line.block_size; ++m) {
      std::string coset = seg.coset + "#" + std::to_string(m);
      if (auto it = options.coset_override.find({seg.line, m});
          it != options.coset_override.end()) {
        coset = it->second;
      }
      out.push_back(Segment{target, std::move(coset), seg.start, seg.length});
    }
  }
  return Multisegment(std::move(out));
}

int base_change_degree(const FamilyScenario& sc, int field) {
  int d = 1;
  for (const auto& [point, per_field] : sc.assignment) {
    for (const auto& seg : per_field.at(static_cast<std::size_t>(field)).segments()) {
      d = std::lcm(d, sc.lines.lookup(seg.line).block_size);
    }
  }
  return d;
}

std::int64_t ratio_valuation(const FamilyScenario& sc, std::string_view x, int j) {
  if (!sc.sigma.contains(sc.site.index_of(x))) {
    throw DomainError("ratio_valuation: '" + std::string(x) + "' is not in sigma");
  }
  if (j < 0 || static_cast<std::size_t>(j) >= sc.fields.size()) {
    throw DomainError("ratio_valuation: unknown field");
  }
  const int degree = base_change_degree(sc, j);
  const PrimePower q1 = sc.fields[static_cast<std::size_t>(j)].extend(degree);
  const PrimePower q2 = sc.fields[static_cast<std::size_t>(j)].extend(2 * degree);

  ExactInt iwahori_part = 1;
  for (std::size_t i = 0; i < sc.fields.size(); ++i) {
    if (static_cast<int>(i) == j) continue;
    const auto lifted = base_change_shadow(sc.at(x, static_cast<int>(i)), sc.lines);
    iwahori_part *= iwahori_trace(lifted, static_cast<int>(lifted.degree()),
                                  sc.unit_seeds.iwahori, sc.lines);
  }
  const auto lifted = base_change_shadow(sc.at(x, j), sc.lines);
  const ExactInt t1 = k1_trace(lifted, q1, sc.unit_seeds.k1, sc.lines) * iwahori_part;
  const ExactInt t2 = k1_trace(lifted, q2, sc.unit_seeds.k1, sc.lines) * iwahori_part;

  const mpq_class ratio(t2, t1);  // canonicalized
  const ExactInt p(q1.p());
  const std::int64_t v = vp(ratio.get_num(), p) - vp(ratio.get_den(), p);
  if (v % q1.f() != 0) {
    throw ModelViolation("non-integral-valuation",
                         "v_p(T''/T') = " + std::to_string(v) +
                             " is not a multiple of v_p(q') = " + std::to_string(q1.f()));
  }
  return v / q1.f();
}

// ---------------------------------------------------------------------------
// Pipeline

RigidityReport run_pipeline(const FamilyScenario& sc, std::string_view x0_name) {
  validate_scenario(sc);
  const std::size_t x0 = sc.site.index_of(x0_name);
  if (!sc.sigma.contains(x0)) {
    throw DomainError("x0 = '" + std::string(x0_name) + "' is not in sigma");
  }
  const auto& names = sc.site.points();
  const auto sigma = sc.sigma.indices();
  const int nfields = static_cast<int>(sc.fields.size());

  RigidityReport report;
  report.x0 = std::string(x0_name);
  for (int i = 0; i < nfields; ++i) report.orbit.push_back(twist_orbit(sc.at(x0_name, i), sc.lines));

  auto fail = [&report](const ModelViolation& e, int field) {
    Violation v;
    v.kind = e.kind();
    v.field = field;
    v.message = e.what();
    report.violations.push_back(std::move(v));
    return report;
  };

  PointSet locus = PointSet::full(sc.site.size());

  // Step 1: type idempotents.
  std::vector<std::vector<TypeTraceResult>> step1(static_cast<std::size_t>(nfields),
                                                  std::vector<TypeTraceResult>(sc.site.size()));
  for (int i = 0; i < nfields; ++i) {
    std::vector<std::optional<ExactInt>> values(sc.site.size());
    for (auto x : sigma) {
      auto r = type_trace_search(sc.at(x0_name, i), sc.at(names[x], i), sc.lines);
      values[x] = ExactInt(r.value);
      report.trace.push_back({"type_trace", names[x], i, r.value});
      step1[static_cast<std::size_t>(i)][x] = std::move(r);
    }
    try {
      const auto trace = extend_from_sigma(sc.site, sc.sigma,
                                           "type_idempotent[" + std::to_string(i + 1) + "]",
                                           values);
      locus = locus & clopen_locus(sc.site, trace, x0);
    } catch (const ModelViolation& e) {
      return fail(e, i);
    }
  }

  // Step 2: K_1 valuations after base change.
  std::vector<std::vector<std::int64_t>> computed(static_cast<std::size_t>(nfields),
                                                  std::vector<std::int64_t>(sc.site.size()));
  std::vector<std::vector<std::int64_t>> observed = computed;
  for (int j = 0; j < nfields; ++j) {
    std::vector<std::optional<ExactInt>> values(sc.site.size());
    for (auto x : sigma) {
      std::int64_t v;
      try {
        v = ratio_valuation(sc, names[x], j);
      } catch (const ModelViolation& e) {
        auto r = fail(e, j);
        r.violations.back().point = names[x];
        return r;
      }
      report.trace.push_back({"ratio_valuation", names[x], j, v});
      computed[static_cast<std::size_t>(j)][x] = v;
      std::int64_t seen = v;
      if (auto d = sc.declared(names[x], j)) {
        report.trace.push_back({"declared_valuation", names[x], j, *d});
        seen = *d;
      }
      observed[static_cast<std::size_t>(j)][x] = seen;
      values[x] = ExactInt(static_cast<long>(seen));
    }
    try {
      const auto trace = extend_from_sigma(sc.site, sc.sigma,
                                           "k1_ratio[" + std::to_string(j + 1) + "]", values);
      locus = locus & clopen_locus(sc.site, trace, x0);
    } catch (const ModelViolation& e) {
      return fail(e, j);
    }
  }
  report.locus = sc.site.names(locus);

  for (auto x : sigma) {
    for (int j = 0; j < nfields; ++j) {
      const auto cv = computed[static_cast<std::size_t>(j)][x];
      const auto ov = observed[static_cast<std::size_t>(j)][x];
      if (cv == ov) continue;
      Violation v;
      v.kind = "declared-trace-mismatch";
      v.point = names[x];
      v.field = j;
      v.message = "declared valuation " + std::to_string(ov) +
                  " differs from the value " + std::to_string(cv) +
                  " implied by the assignment";
      v.observed = sc.at(names[x], j);
      v.observed_valuation = ov;
      v.computed_valuation = cv;
      report.violations.push_back(std::move(v));
    }
  }

  // Certificates on X_0 n sigma.
  for (auto x : (locus & sc.sigma).indices()) {
    PointVerdict verdict{names[x], true, {}};
    for (int i = 0; i < nfields; ++i) {
      const auto& r = step1[static_cast<std::size_t>(i)][x];
      const auto& actual = sc.at(names[x], i);
      BZFAM_CHECK(r.value == 1, "point of X_0 outside the type-idempotent locus");
      if (r.witness == actual) {
        verdict.fields.push_back(FieldCertificate{i, r.pairing});
        continue;
      }
      // actual > witness strictly, so its statistic (and that of its base
      // change) is strictly smaller, yet the ratio trace is constant on X_0.
      verdict.twist_equal = false;
      Violation v;
      v.kind = "monotonicity";
      v.point = names[x];
      v.field = i;
      v.witness = r.witness;
      v.observed = actual;
      v.observed_valuation = observed[static_cast<std::size_t>(i)][x];
      v.computed_valuation = computed[static_cast<std::size_t>(i)][x];
      v.reference_valuation = observed[static_cast<std::size_t>(i)][x0];
      v.base_change_strict = less(base_change_shadow(r.witness, sc.lines),
                                  base_change_shadow(actual, sc.lines));
      v.message = "S strictly dominates a twist of S_x0, which forces a strictly "
                  "smaller K_1 valuation, but the observed valuation equals the one at x0";
      report.violations.push_back(std::move(v));
    }
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

}  // namespace bzfam
