#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specmine/environment.hpp"
#include "specmine/errors.hpp"
#include "specmine/formula.hpp"

namespace specmine {

// ---------------------------------------------------------------------------
// Specification store: formulas attributed to objects, with the mining
// origin that produced them.
// ---------------------------------------------------------------------------

enum class Origin { Saf, Liv1, Liv2, External };

inline std::string to_string(Origin o) {
  switch (o) {
    case Origin::Saf: return "saf";
    case Origin::Liv1: return "liv1";
    case Origin::Liv2: return "liv2";
    case Origin::External: return "external";
  }
  return "external";
}

inline std::optional<Origin> origin_from_string(const std::string& s) {
  if (s == "saf") return Origin::Saf;
  if (s == "liv1") return Origin::Liv1;
  if (s == "liv2") return Origin::Liv2;
  if (s == "external") return Origin::External;
  return std::nullopt;
}

/// Mined origins imply a formula shape: saf = G !v, liv1 = F v,
/// liv2 = G (u -> F v). External formulas are unconstrained.
inline bool origin_shape_ok(const Formula& f, Origin o) {
  switch (o) {
    case Origin::External: return true;
    case Origin::Saf:
      return f.kind() == Connective::Always &&
             f.body().kind() == Connective::Not && f.body().body().is_atom();
    case Origin::Liv1:
      return f.kind() == Connective::Eventually && f.body().is_atom();
    case Origin::Liv2:
      return f.kind() == Connective::Always &&
             f.body().kind() == Connective::Implies &&
             f.body().lhs().is_atom() &&
             f.body().rhs().kind() == Connective::Eventually &&
             f.body().rhs().body().is_atom();
  }
  return false;
}

struct AttributedFormula {
  Formula formula;
  std::string object;
  Origin origin = Origin::External;
  /// How often mining encountered the formula; informational only.
  int occurrences = 1;

  friend bool operator==(const AttributedFormula& a,
                         const AttributedFormula& b) {
    return a.formula == b.formula && a.object == b.object &&
           a.origin == b.origin && a.occurrences == b.occurrences;
  }
};

/// Ordered set of attributed formulas; at most one entry per
/// (formula, object) pair.
class Specification {
 public:
  bool add(AttributedFormula af) {
    if (!keys_.insert(key_of(af)).second) return false;
    entries_.push_back(std::move(af));
    return true;
  }

  /// Inserts, or bumps the occurrence counter of an existing entry.
  void add_or_count(AttributedFormula af) {
    const auto key = key_of(af);
    if (keys_.count(key)) {
      for (AttributedFormula& e : entries_)
        if (e.object == af.object && e.formula == af.formula) {
          e.occurrences += af.occurrences;
          return;
        }
    }
    keys_.insert(key);
    entries_.push_back(std::move(af));
  }

  bool contains(const Formula& f, const std::string& object) const {
    return keys_.count({object, render(f)}) != 0;
  }

  const std::vector<AttributedFormula>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  std::vector<Formula> restrict_to(const std::string& object) const {
    std::vector<Formula> out;
    for (const AttributedFormula& e : entries_)
      if (e.object == object) out.push_back(e.formula);
    return out;
  }

  std::vector<AttributedFormula> entries_for(const std::string& object) const {
    std::vector<AttributedFormula> out;
    for (const AttributedFormula& e : entries_)
      if (e.object == object) out.push_back(e);
    return out;
  }

  std::set<std::string> objects() const {
    std::set<std::string> out;
    for (const AttributedFormula& e : entries_) out.insert(e.object);
    return out;
  }

  friend bool operator==(const Specification& a, const Specification& b) {
    return a.entries_ == b.entries_;
  }

 private:
  static std::pair<std::string, std::string> key_of(
      const AttributedFormula& af) {
    return {af.object, render(af.formula)};
  }

  std::vector<AttributedFormula> entries_;
  std::set<std::pair<std::string, std::string>> keys_;
};

/// Left-fold conjunction in list order; empty list has no conjunction.
inline std::optional<Formula> conjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return std::nullopt;
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Mining. Per object: an absence formula for every never-visited node, a
// response formula for every adjacent pair of distinct runs in the
// time-sorted trace, and an existence formula for single-run traces (the
// Literal mode also closes multi-run traces with the final run's node).
// ---------------------------------------------------------------------------

inline std::map<std::string, std::vector<Event>> partition(const Behavior& b) {
  if (b.empty())
    throw ValidationError("behavior is empty; nothing to partition");
  std::map<std::string, std::vector<Event>> groups;
  for (const Event& e : b.events) groups[e.object].push_back(e);
  return groups;
}

enum class MiningMode { Literal, Standard };

struct MiningStats {
  /// Adjacent-event comparisons performed per object (n - 1 for n events).
  std::map<std::string, std::size_t> comparisons;
};

inline std::map<std::string, Specification> mine(const Behavior& b,
                                                 const AttributedGraph& g,
                                                 MiningMode mode,
                                                 MiningStats* stats = nullptr) {
  if (b.empty()) throw ValidationError("behavior is empty; nothing to mine");
  const ValidationReport report = validate(b, g);
  if (!report.ok())
    throw ValidationError(std::to_string(report.violations.size()) +
                          " event(s) reference nodes outside the graph");

  std::map<std::string, Specification> out;
  for (auto& [object, events] : partition(b)) {
    Specification spec;

    std::set<std::string> visited;
    for (const Event& e : events) visited.insert(e.node);
    for (const std::string& v : g.vertices)
      if (!visited.count(v))
        spec.add_or_count(
            {always(neg(Formula::atom(v))), object, Origin::Saf});

    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) {
                       return a.time < b.time;
                     });

    std::vector<std::string> runs{events.front().node};
    std::size_t comparisons = 0;
    for (std::size_t i = 1; i < events.size(); ++i) {
      ++comparisons;
      if (events[i].node != runs.back()) runs.push_back(events[i].node);
    }
    if (stats) stats->comparisons[object] = comparisons;

    for (std::size_t i = 0; i + 1 < runs.size(); ++i)
      spec.add_or_count({always(implies(Formula::atom(runs[i]),
                                        eventually(Formula::atom(runs[i + 1])))),
                         object, Origin::Liv2});

    if (runs.size() == 1)
      spec.add_or_count(
          {eventually(Formula::atom(runs.front())), object, Origin::Liv1});
    else if (mode == MiningMode::Literal)
      spec.add_or_count(
          {eventually(Formula::atom(runs.back())), object, Origin::Liv1});

    out.emplace(object, std::move(spec));
  }
  return out;
}

/// Union of per-object specifications with attribution preserved. Rejects
/// repeated object ids across inputs and entries carrying a foreign object.
inline Specification merge(
    const std::vector<std::pair<std::string, Specification>>& specs) {
  Specification out;
  std::set<std::string> seen;
  for (const auto& [object, spec] : specs) {
    if (!seen.insert(object).second)
      throw ValidationError("attribution clash: object '" + object +
                            "' appears in two input specifications");
    for (const AttributedFormula& e : spec.entries()) {
      if (e.object != object)
        throw ValidationError("specification for '" + object +
                              "' carries a formula attributed to '" +
                              e.object + "'");
      out.add(e);
    }
  }
  return out;
}

/// Inverse of merge, up to object ordering.
inline std::map<std::string, Specification> split_by_object(
    const Specification& sigma) {
  std::map<std::string, Specification> out;
  for (const AttributedFormula& e : sigma.entries()) out[e.object].add(e);
  return out;
}

}  // namespace specmine
