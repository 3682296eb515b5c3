#pragma once

// JSON forms of the library's values.
//
// Arbitrary-precision quantities are written as decimal strings; structural
// integers (starts, lengths, block sizes, valuations) as JSON numbers. Every
// reader accepts either form for integers. Object keys are emitted in sorted
// order so output is byte-stable.

#include <nlohmann/json.hpp>

#include "bzfam/dimension.hpp"
#include "bzfam/family.hpp"
#include "bzfam/multisegment.hpp"
#include "bzfam/weil_deligne.hpp"

namespace bzfam::io {

using Json = nlohmann::json;

/// Parses text, turning syntax errors into DomainError with the byte offset.
Json parse(std::string_view text, std::string_view what = "input");

Json to_json(const Segment& s);
Json to_json(const Multisegment& s);
Json to_json(const CuspidalLine& line);
Json to_json(const LineRegistry& lines);
Json to_json(const PrimePower& q);
Json to_json(const JordanPartition& p);
Json to_json(const WDShadow& w);
Json to_json(const RationalMatrix& m);
Json to_json(const SupportMultiset& s);
Json to_json(const FamilyScenario& sc);
Json to_json(const RigidityReport& r);

Segment segment_from_json(const Json& j);
/// Accepts {"segments": [...], "lines": [...]} or a bare segment array.
/// "line" defaults to "A" and "coset" to "c0".
Multisegment multisegment_from_json(const Json& j);
CuspidalLine line_from_json(const Json& j);
/// Reads the optional "lines" member of an object (or a bare array).
LineRegistry lines_from_json(const Json& j);
/// {"p": 2, "f": 3} or {"q": 8}.
PrimePower prime_power_from_json(const Json& j);
JordanPartition partition_from_json(const Json& j);
WDShadow wd_from_json(const Json& j);
FamilyScenario scenario_from_json(const Json& j);

std::string exact_to_string(const ExactInt& x);
std::string rational_to_string(const mpq_class& x);

}  // namespace bzfam::io
