#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specmine/errors.hpp"
#include "specmine/formula.hpp"

namespace specmine {

/// A finite trace of propositional states whose final state repeats forever.
/// Used by the brute-force satisfiability oracle and by model-extraction
/// checks; deliberately independent of the tableau engine.
struct TraceModel {
  std::vector<std::string> atom_order;        // sorted atom names
  std::vector<std::vector<bool>> states;      // states[pos][atom index]

  std::size_t length() const { return states.size(); }
};

/// Evaluates f over the trace. G and F quantify over every position of the
/// trace (reflexive, anchored at the origin); the stuttering suffix adds no
/// new states, so quantifiers range over the explicit positions only.
inline bool eval_trace(const Formula& f, const TraceModel& m,
                       std::size_t pos = 0) {
  switch (f.kind()) {
    case Connective::Atom: {
      auto it = std::lower_bound(m.atom_order.begin(), m.atom_order.end(),
                                 f.atom_name());
      if (it == m.atom_order.end() || *it != f.atom_name()) return false;
      return m.states[pos][static_cast<std::size_t>(it - m.atom_order.begin())];
    }
    case Connective::Not: return !eval_trace(f.body(), m, pos);
    case Connective::And:
      return eval_trace(f.lhs(), m, pos) && eval_trace(f.rhs(), m, pos);
    case Connective::Or:
      return eval_trace(f.lhs(), m, pos) || eval_trace(f.rhs(), m, pos);
    case Connective::Implies:
      return !eval_trace(f.lhs(), m, pos) || eval_trace(f.rhs(), m, pos);
    case Connective::Always:
      for (std::size_t i = 0; i < m.length(); ++i)
        if (!eval_trace(f.body(), m, i)) return false;
      return true;
    case Connective::Eventually:
      for (std::size_t i = 0; i < m.length(); ++i)
        if (eval_trace(f.body(), m, i)) return true;
      return false;
  }
  return false;  // unreachable
}

/// One distinguished position per F-subformula plus the present moment.
inline int default_oracle_prefix(const Formula& f) {
  return count_eventualities(f) + 1;
}

inline constexpr int kOracleMaxAtoms = 6;
inline constexpr std::uint64_t kOracleWorkCap = std::uint64_t{1} << 24;

/// Brute-force satisfiability: enumerate every trace of length k <=
/// max_prefix over all 2^|atoms| states (final state repeating forever) and
/// evaluate f at the origin. Exhaustive for the fragment at the default
/// prefix because each F needs at most one distinguished position and
/// G-constraints are position-uniform.
inline bool oracle_sat(const Formula& f,
                       std::optional<int> max_prefix = std::nullopt) {
  require_fragment(f);
  const std::set<std::string> atom_set = atoms(f);
  std::vector<std::string> names(atom_set.begin(), atom_set.end());
  const int n = static_cast<int>(names.size());
  if (n > kOracleMaxAtoms)
    throw ResourceError("oracle limited to formulas over at most " +
                        std::to_string(kOracleMaxAtoms) + " atoms");
  const int prefix = max_prefix.value_or(default_oracle_prefix(f));
  if (prefix < 1) throw Error("max_prefix must be >= 1");

  const std::uint64_t num_states = std::uint64_t{1} << n;
  std::uint64_t work = 0;
  for (int k = 1; k <= prefix; ++k) {
    std::uint64_t traces = 1;
    for (int i = 0; i < k; ++i) {
      traces *= num_states;
      if (traces > kOracleWorkCap) break;
    }
    work += traces;
    if (work > kOracleWorkCap)
      throw ResourceError("oracle state-space cap exceeded");
  }

  TraceModel m;
  m.atom_order = names;
  for (int k = 1; k <= prefix; ++k) {
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(k), 0);
    m.states.assign(static_cast<std::size_t>(k),
                    std::vector<bool>(static_cast<std::size_t>(n), false));
    while (true) {
      for (int p = 0; p < k; ++p)
        for (int a = 0; a < n; ++a)
          m.states[static_cast<std::size_t>(p)][static_cast<std::size_t>(a)] =
              (digits[static_cast<std::size_t>(p)] >> a) & 1u;
      if (eval_trace(f, m)) return true;
      int p = 0;
      while (p < k) {
        if (++digits[static_cast<std::size_t>(p)] < num_states) break;
        digits[static_cast<std::size_t>(p)] = 0;
        ++p;
      }
      if (p == k) break;
    }
  }
  return false;
}

}  // namespace specmine
