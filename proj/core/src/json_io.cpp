#include "bzfam/json_io.hpp"

#include <limits>

#include "bzfam/error.hpp"

namespace bzfam::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw DomainError(where + ": " + msg);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

ExactInt exact_from(const Json& j, const std::string& where) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? ExactInt(j.get<unsigned long>())
                                  : ExactInt(j.get<long>());
  }
  if (j.is_string()) {
    ExactInt out;
    if (out.set_str(j.get<std::string>(), 10) != 0) {
      bad(where, "\"" + j.get<std::string>() + "\" is not a decimal integer");
    }
    return out;
  }
  bad(where, "expected an integer or a decimal string");
}

std::int64_t int_from(const Json& j, const std::string& where) {
  const ExactInt v = exact_from(j, where);
  if (!v.fits_slong_p()) bad(where, "integer out of range");
  return v.get_si();
}

std::int64_t int_member(const Json& j, const char* key, const std::string& where) {
  return int_from(member(j, key, where), where + "." + key);
}

std::string string_member(const Json& j, const char* key, const std::string& where,
                          std::string_view fallback = {}) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback.empty()) bad(where, std::string("missing \"") + key + "\"");
    return std::string(fallback);
  }
  if (!it->is_string()) bad(where, std::string("\"") + key + "\" must be a string");
  return it->get<std::string>();
}

std::vector<std::string> string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) bad(where, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

int small_int(std::int64_t v, const std::string& where) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    bad(where, "integer out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

Json parse(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string(what) + ": malformed JSON at byte " +
                      std::to_string(e.byte) + ": " + e.what());
  }
}

std::string exact_to_string(const ExactInt& x) { return x.get_str(); }

std::string rational_to_string(const mpq_class& x) { return x.get_str(); }

// ---------------------------------------------------------------------------
// Multisegments

Json to_json(const Segment& s) {
  return Json{{"line", s.line}, {"coset", s.coset}, {"start", s.start}, {"len", s.length}};
}

Json to_json(const Multisegment& s) {
  Json segs = Json::array();
  for (const auto& seg : s.segments()) segs.push_back(to_json(seg));
  return Json{{"segments", std::move(segs)}};
}

Json to_json(const CuspidalLine& line) {
  return Json{{"line_id", line.line_id},
              {"block_size", line.block_size},
              {"inertial_label", line.inertial_label}};
}

Json to_json(const LineRegistry& lines) {
  Json out = Json::array();
  for (const auto& l : lines.lines()) out.push_back(to_json(l));
  return out;
}

Json to_json(const SupportMultiset& s) {
  Json out = Json::array();
  for (const auto& p : s) {
    out.push_back(Json{{"line", p.line}, {"coset", p.coset}, {"position", p.position}});
  }
  return out;
}

Segment segment_from_json(const Json& j) {
  const std::string where = "segment";
  Segment s;
  s.line = string_member(j, "line", where, kDefaultLine);
  s.coset = string_member(j, "coset", where, kDefaultCoset);
  s.start = int_member(j, "start", where);
  if (j.contains("len")) {
    s.length = int_member(j, "len", where);
  } else if (j.contains("length")) {
    s.length = int_member(j, "length", where);
  } else {
    bad(where, "missing \"len\"");
  }
  if (s.length < 1) bad(where, "\"len\" must be >= 1");
  return s;
}

Multisegment multisegment_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) arr = &member(j, "segments", "multisegment");
  if (!arr->is_array()) bad("multisegment", "\"segments\" must be an array");
  std::vector<Segment> segs;
  for (const auto& e : *arr) segs.push_back(segment_from_json(e));
  return Multisegment(std::move(segs));
}

CuspidalLine line_from_json(const Json& j) {
  const std::string where = "line";
  CuspidalLine line;
  line.line_id = string_member(j, "line_id", where);
  line.block_size = j.contains("block_size")
                        ? small_int(int_member(j, "block_size", where), where)
                        : 1;
  line.inertial_label = string_member(j, "inertial_label", where, kUnramifiedLabel);
  return line;
}

LineRegistry lines_from_json(const Json& j) {
  LineRegistry reg;
  const Json* arr = &j;
  if (j.is_object()) {
    auto it = j.find("lines");
    if (it == j.end()) return reg;
    arr = &*it;
  }
  if (!arr->is_array()) bad("lines", "expected an array");
  for (const auto& e : *arr) reg.add(line_from_json(e));
  return reg;
}

// ---------------------------------------------------------------------------
// Numbers

Json to_json(const PrimePower& q) {
  return Json{{"p", q.p()}, {"f", q.f()}, {"q", exact_to_string(q.q())}};
}

PrimePower prime_power_from_json(const Json& j) {
  const std::string where = "prime power";
  if (!j.is_object()) bad(where, "expected {\"p\": .., \"f\": ..}");
  if (j.contains("p")) {
    const auto p = int_member(j, "p", where);
    const auto f = j.contains("f") ? int_member(j, "f", where) : 1;
    if (p < 2) bad(where, "p must be a prime");
    PrimePower out(static_cast<unsigned long>(p), small_int(f, where));
    if (j.contains("q") && exact_from(j.at("q"), where) != out.q()) {
      bad(where, "q does not equal p^f");
    }
    return out;
  }
  return PrimePower::from_q(exact_from(member(j, "q", where), where + ".q"));
}

// ---------------------------------------------------------------------------
// Weil-Deligne

Json to_json(const JordanPartition& p) { return Json{{"blocks", p.blocks()}}; }

Json to_json(const WDShadow& w) {
  Json inertia = Json::array();
  for (const auto& e : w.inertia) inertia.push_back(Json{{"label", e.label}, {"dim", e.dim}});
  return Json{{"blocks", w.partition.blocks()}, {"inertia", std::move(inertia)}};
}

Json to_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(rational_to_string(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

JordanPartition partition_from_json(const Json& j) {
  const Json& arr = j.is_object() ? member(j, "blocks", "partition") : j;
  if (!arr.is_array()) bad("partition", "\"blocks\" must be an array");
  std::vector<int> blocks;
  for (const auto& b : arr) blocks.push_back(small_int(int_from(b, "partition.blocks"), "partition"));
  return JordanPartition(std::move(blocks));
}

WDShadow wd_from_json(const Json& j) {
  WDShadow w;
  w.partition = partition_from_json(j);
  if (j.contains("inertia")) {
    for (const auto& e : j.at("inertia")) {
      w.inertia.push_back(InertiaEntry{string_member(e, "label", "inertia"),
                                       small_int(int_member(e, "dim", "inertia"), "inertia")});
    }
  }
  std::sort(w.inertia.begin(), w.inertia.end());
  return w;
}

// ---------------------------------------------------------------------------
// Scenarios

Json to_json(const FamilyScenario& sc) {
  Json fields = Json::array();
  for (const auto& q : sc.fields) fields.push_back(Json{{"p", q.p()}, {"f", q.f()}});
  Json closed = Json::array();
  for (const auto& c : sc.site.closed_sets()) closed.push_back(sc.site.names(c));
  Json assignment = Json::object();
  for (const auto& [point, per_field] : sc.assignment) {
    Json list = Json::array();
    for (const auto& s : per_field) list.push_back(to_json(s));
    assignment[point] = std::move(list);
  }
  Json declared = Json::array();
  for (const auto& d : sc.declared_valuations) {
    declared.push_back(Json{{"point", d.point}, {"field", d.field + 1}, {"value", d.value}});
  }
  Json out{{"fields", std::move(fields)},
           {"points", sc.site.points()},
           {"closed_sets", std::move(closed)},
           {"sigma", sc.site.names(sc.sigma)},
           {"lines", to_json(sc.lines)},
           {"assignment", std::move(assignment)},
           {"unit_seeds", Json{{"k1", sc.unit_seeds.k1}, {"iwahori", sc.unit_seeds.iwahori}}}};
  if (!declared.empty()) out["declared_valuations"] = std::move(declared);
  return out;
}

FamilyScenario scenario_from_json(const Json& j) {
  const std::string where = "scenario";
  FamilyScenario sc;
  for (const auto& f : member(j, "fields", where)) sc.fields.push_back(prime_power_from_json(f));
  std::vector<std::vector<std::string>> closed;
  for (const auto& c : member(j, "closed_sets", where)) {
    closed.push_back(string_list(c, where + ".closed_sets"));
  }
  sc.site = FiniteSite(string_list(member(j, "points", where), where + ".points"), closed);
  sc.sigma = j.contains("sigma") ? sc.site.make_set(string_list(j.at("sigma"), where + ".sigma"))
                                 : PointSet::full(sc.site.size());
  sc.lines = lines_from_json(j);

  const Json& assignment = member(j, "assignment", where);
  if (!assignment.is_object()) bad(where, "\"assignment\" must be an object");
  for (const auto& [point, value] : assignment.items()) {
    std::vector<Multisegment> per_field;
    const bool single =
        value.is_object() ||
        (value.is_array() && !value.empty() && value.front().is_object() &&
         !value.front().contains("segments"));
    if (single) {
      per_field.push_back(multisegment_from_json(value));
    } else if (value.is_array()) {
      for (const auto& m : value) per_field.push_back(multisegment_from_json(m));
    } else {
      bad(where, "assignment of '" + point + "' must be a multisegment or a list of them");
    }
    sc.assignment.emplace(point, std::move(per_field));
  }

  if (j.contains("unit_seeds")) {
    const Json& seeds = j.at("unit_seeds");
    if (seeds.contains("k1")) sc.unit_seeds.k1 = static_cast<std::uint64_t>(int_member(seeds, "k1", "unit_seeds"));
    if (seeds.contains("iwahori")) {
      sc.unit_seeds.iwahori = static_cast<std::uint64_t>(int_member(seeds, "iwahori", "unit_seeds"));
    }
  }
  if (j.contains("declared_valuations")) {
    for (const auto& d : j.at("declared_valuations")) {
      sc.declared_valuations.push_back(DeclaredValuation{
          string_member(d, "point", "declared_valuations"),
          small_int(int_member(d, "field", "declared_valuations"), "declared_valuations") - 1,
          int_member(d, "value", "declared_valuations")});
    }
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

Json pairing_json(const std::vector<TwistPairing>& pairing) {
  Json out = Json::array();
  for (const auto& p : pairing) out.push_back(Json{{"from", to_json(p.from)}, {"to", to_json(p.to)}});
  return out;
}

Json violation_json(const Violation& v) {
  Json out{{"kind", v.kind}, {"message", v.message}};
  if (!v.point.empty()) out["point"] = v.point;
  if (v.field >= 0) out["field"] = v.field + 1;
  if (v.witness) out["witness"] = to_json(*v.witness);
  if (v.observed) out["observed"] = to_json(*v.observed);
  if (v.observed_valuation) out["observed_valuation"] = *v.observed_valuation;
  if (v.computed_valuation) out["computed_valuation"] = *v.computed_valuation;
  if (v.reference_valuation) out["reference_valuation"] = *v.reference_valuation;
  if (v.base_change_strict) out["base_change_strict"] = *v.base_change_strict;
  return out;
}

}  // namespace

Json to_json(const RigidityReport& r) {
  Json orbit = Json::array();
  for (std::size_t i = 0; i < r.orbit.size(); ++i) {
    Json segs = Json::array();
    for (const auto& [label, len] : r.orbit[i]) segs.push_back(Json{{"label", label}, {"len", len}});
    orbit.push_back(Json{{"field", i + 1}, {"segments", std::move(segs)}});
  }
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) {
    Json fields = Json::array();
    for (const auto& f : v.fields) {
      fields.push_back(Json{{"field", f.field + 1}, {"twist", pairing_json(f.pairing)}});
    }
    verdicts.push_back(Json{{"point", v.point},
                            {"status", v.twist_equal ? "twist-equal" : "violation"},
                            {"fields", std::move(fields)}});
  }
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back(violation_json(v));
  Json trace = Json::array();
  for (const auto& t : r.trace) {
    trace.push_back(Json{{"step", t.step}, {"point", t.point}, {"field", t.field + 1}, {"value", t.value}});
  }
  return Json{{"status", r.certified() ? "certified" : "violation"},
              {"x0", r.x0},
              {"X0", r.locus},
              {"orbit", std::move(orbit)},
              {"verdicts", std::move(verdicts)},
              {"violations", std::move(violations)},
              {"valuation_trace", std::move(trace)}};
}

}  // namespace bzfam::io
