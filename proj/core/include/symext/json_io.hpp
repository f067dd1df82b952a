#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "symext/encoder.hpp"
#include "symext/gluing.hpp"
#include "symext/group.hpp"
#include "symext/shift_space.hpp"
#include "symext/tiling.hpp"

// JSON formats
//   group        "Z" | "Z2" | "Z3" | "H3"   (or {"group": "Z"})
//   element      [a, b, ...]                (a bare integer is accepted for Z)
//   subset       [[...], [...]]             sorted on output
//   pattern      {"domain": subset, "symbols": [token, ...]}
//   sft          {"alphabet": [...], "group": g, "forbidden": [pattern, ...]}
//   tiling       {"group": g, "shapes": [subset, ...], "placement": "grid"|"cycle",
//                 "offset": element, "sequence": [...] (cycle only)}
//   table        see table_to_json
namespace symext::json_io {

using nlohmann::json;

GroupKind group_from_json(const json& j);
json to_json(GroupKind kind);

GroupElement element_from_json(const json& j, GroupKind kind);
json to_json(const GroupElement& g);

FiniteSubset subset_from_json(const json& j, GroupKind kind);
json to_json(const FiniteSubset& s);

Pattern pattern_from_json(const json& j, GroupKind kind, const Alphabet& alphabet);
json to_json(const Pattern& p, const Alphabet& alphabet);

ShiftSpaceSpec sft_from_json(const json& j);
json to_json(const ShiftSpaceSpec& spec);

TilingSpec tiling_from_json(const json& j, std::optional<GroupKind> fallback = std::nullopt);
json to_json(const TilingSpec& t);

AdmissibilityConfig admissibility_from_json(const json& j, GroupKind kind);
json to_json(const AdmissibilityConfig& cfg);

json to_json(const ShapeCertificate& c);
json to_json(const GluingReport& r, const Alphabet& alphabet);
json to_json(const Ratio& r);

/// Output words over {1..k}: "1112" for k <= 9, otherwise a list of ints.
json word_to_json(std::span<const Symbol> word, int k);
json output_pattern_to_json(const Pattern& y, int k);
/// Parses "1112" or [1,1,1,2] into 0-based symbols.
std::vector<Symbol> word_from_json(const json& j, int k);

/// Parameters, certificates and per-shape core-pattern counts; when a
/// shape's core count is at most `extensional_limit` the ranked core
/// patterns are listed too.
json table_to_json(const EncoderTable& table, std::uint64_t extensional_limit);
/// Rebuilds the table from its parameters and checks the stored counts
/// (and the listed patterns, if any) against the rebuilt ranking.
EncoderTable table_from_json(const json& j);

ProductPoint point_from_json(const json& j, const ShiftSpaceSpec& spec);
json to_json(const ProductPoint& p, const Alphabet& alphabet);

}  // namespace symext::json_io
