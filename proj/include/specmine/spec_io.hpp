#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "specmine/errors.hpp"
#include "specmine/formula.hpp"
#include "specmine/miner.hpp"
#include "specmine/reactor.hpp"

namespace specmine {

// ---------------------------------------------------------------------------
// Specification document:
//   {"formulas":[{"object":"o5","formula":"G !e2","origin":"saf"},...]}
// "origin" defaults to "external"; "occurrences" is optional and only
// written when above 1. Formula text uses the library grammar.
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json attributed_to_json(const AttributedFormula& af) {
  nlohmann::ordered_json entry;
  entry["object"] = af.object;
  entry["formula"] = render(af.formula);
  entry["origin"] = to_string(af.origin);
  if (af.occurrences > 1) entry["occurrences"] = af.occurrences;
  return entry;
}

}  // namespace detail

inline std::string serialize_specification(const Specification& spec) {
  nlohmann::ordered_json doc;
  doc["formulas"] = nlohmann::ordered_json::array();
  for (const AttributedFormula& af : spec.entries())
    doc["formulas"].push_back(detail::attributed_to_json(af));
  return doc.dump(2) + "\n";
}

inline Specification load_specification(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(
        std::string("specification document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ValidationError("specification document must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "formulas")
      throw ValidationError("unknown field '" + key +
                            "' in specification document");
  }
  if (!doc.contains("formulas") || !doc["formulas"].is_array())
    throw ValidationError("specification needs a \"formulas\" array");

  Specification spec;
  for (const auto& entry : doc["formulas"]) {
    if (!entry.is_object())
      throw ValidationError("specification entries must be objects");
    for (const auto& [key, value] : entry.items()) {
      (void)value;
      if (key != "object" && key != "formula" && key != "origin" &&
          key != "occurrences")
        throw ValidationError("unknown field '" + key +
                              "' in specification entry");
    }
    if (!entry.contains("object") || !entry["object"].is_string() ||
        !entry.contains("formula") || !entry["formula"].is_string())
      throw ValidationError(
          "specification entries need string \"object\" and \"formula\"");

    AttributedFormula af;
    af.object = entry["object"].get<std::string>();
    if (!is_identifier(af.object) || is_reserved_word(af.object))
      throw ValidationError("invalid object id '" + af.object + "'");
    af.formula = parse(entry["formula"].get<std::string>());
    require_fragment(af.formula);
    if (entry.contains("origin")) {
      if (!entry["origin"].is_string())
        throw ValidationError("\"origin\" must be a string");
      auto origin = origin_from_string(entry["origin"].get<std::string>());
      if (!origin)
        throw ValidationError("unknown origin '" +
                              entry["origin"].get<std::string>() + "'");
      af.origin = *origin;
    }
    if (!origin_shape_ok(af.formula, af.origin))
      throw ValidationError("formula '" + render(af.formula) +
                            "' does not match origin '" +
                            to_string(af.origin) + "'");
    if (entry.contains("occurrences")) {
      if (!entry["occurrences"].is_number_integer() ||
          entry["occurrences"].get<int>() < 1)
        throw ValidationError("\"occurrences\" must be a positive integer");
      af.occurrences = entry["occurrences"].get<int>();
    }
    if (!spec.add(std::move(af)))
      throw ValidationError("duplicate (formula, object) entry");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Reaction result document: actions, removed/rewritten formulas, extracted
// literal sets, optional tree dump.
// ---------------------------------------------------------------------------

inline std::string serialize_reaction(const ReactionResult& r,
                                      bool include_tree = false) {
  nlohmann::ordered_json doc;
  doc["actions"] = r.actions;
  doc["removed"] = nlohmann::ordered_json::array();
  for (const AttributedFormula& af : r.removed)
    doc["removed"].push_back(detail::attributed_to_json(af));
  doc["rewritten"] = nlohmann::ordered_json::array();
  for (const auto& [before, after] : r.rewritten) {
    nlohmann::ordered_json pair;
    pair["before"] = detail::attributed_to_json(before);
    pair["after"] = detail::attributed_to_json(after);
    doc["rewritten"].push_back(std::move(pair));
  }
  doc["open_literals"] = nlohmann::ordered_json::array();
  for (const LiteralSet& lits : r.open_literals) {
    nlohmann::ordered_json set = nlohmann::ordered_json::array();
    for (const Literal& l : lits) set.push_back(to_string(l));
    doc["open_literals"].push_back(std::move(set));
  }
  doc["closed_literals"] = nlohmann::ordered_json::array();
  for (const Literal& l : r.closed_literals)
    doc["closed_literals"].push_back(to_string(l));
  if (include_tree) doc["tree"] = dump_tree(r.tree);
  return doc.dump(2) + "\n";
}

}  // namespace specmine
