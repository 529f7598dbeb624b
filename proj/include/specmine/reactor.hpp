#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specmine/errors.hpp"
#include "specmine/formula.hpp"
#include "specmine/miner.hpp"
#include "specmine/tableau.hpp"

namespace specmine {

// ---------------------------------------------------------------------------
// Reactive reasoning cycle: a trigger formula f for an object is conjoined
// with that object's specification, the truth tree is built and read, the
// specification is repaired where f contradicts it, f is appended, and next
// actions are proposed from witness-world literals of the open branches.
// ---------------------------------------------------------------------------

struct ReactionResult {
  TruthTree tree;
  std::vector<LiteralSet> open_literals;  // one set per selected open branch
  LiteralSet closed_literals;             // union over selected closed branches
  std::vector<AttributedFormula> removed;
  std::vector<std::pair<AttributedFormula, AttributedFormula>> rewritten;
  Specification updated_spec;
  std::vector<std::string> actions;  // node ids, ranked
};

enum class Entailment { Entailed, NotEntailed };

/// True iff the object's formulas are jointly satisfiable (an empty
/// restriction is trivially consistent).
inline bool check_consistency(const Specification& sigma,
                              const std::string& object) {
  const std::vector<Formula> fs = sigma.restrict_to(object);
  if (fs.empty()) return true;
  return is_satisfiable(*conjunction(fs));
}

/// Reductio ad absurdum: the object's formulas entail f iff their
/// conjunction with the pushed-in negation of f is unsatisfiable.
inline Entailment check_entailment(const Specification& sigma,
                                   const std::string& object,
                                   const Formula& f) {
  const Formula negated = push_negation(neg(f));
  const std::vector<Formula> fs = sigma.restrict_to(object);
  const Formula whole =
      fs.empty() ? negated : conj(*conjunction(fs), negated);
  require_fragment(whole);
  return is_unsatisfiable(whole) ? Entailment::Entailed
                                 : Entailment::NotEntailed;
}

namespace detail {

inline void flatten_disjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Connective::Or) {
    flatten_disjuncts(f.lhs(), out);
    flatten_disjuncts(f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

inline Formula fold_disjunction(const std::vector<Formula>& fs) {
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

inline Formula with_context(const Formula& f, const std::vector<Formula>& rest,
                            const Formula& extra) {
  Formula out = f;
  for (const Formula& r : rest) out = conj(out, r);
  return conj(out, extra);
}

}  // namespace detail

inline ReactionResult react(const Specification& sigma, const Formula& f,
                            const std::string& object) {
  require_fragment(f);
  std::vector<AttributedFormula> lafs = sigma.entries_for(object);
  std::vector<Formula> lfs;
  for (const AttributedFormula& e : lafs) lfs.push_back(e.formula);
  if (!lfs.empty() && !is_satisfiable(*conjunction(lfs)))
    throw PreconditionError(
        "specification for object '" + object +
        "' is already contradictory; reaction refused");

  ReactionResult result;
  const Formula combined = lfs.empty() ? f : conj(f, *conjunction(lfs));
  result.tree = build_tree(combined);

  // Branches relevant to f: those carrying a literal over one of f's atoms.
  const std::set<std::string> trigger_atoms = atoms(f);
  std::vector<const Branch*> open_selected;
  for (const Branch& b : result.tree.branches) {
    const LiteralSet lits = b.literals();
    const bool relevant =
        std::any_of(lits.begin(), lits.end(), [&](const Literal& l) {
          return trigger_atoms.count(l.atom) != 0;
        });
    if (!relevant) continue;
    if (b.status == BranchStatus::Open) {
      open_selected.push_back(&b);
      result.open_literals.push_back(lits);
    } else {
      result.closed_literals.insert(lits.begin(), lits.end());
    }
  }

  // Repair pass 1: drop formulas individually contradicted by f.
  std::vector<AttributedFormula> kept;
  for (const AttributedFormula& af : lafs) {
    if (is_unsatisfiable(conj(f, af.formula)))
      result.removed.push_back(af);
    else
      kept.push_back(af);
  }

  // Repair pass 2: inside top-level disjunctions, drop every disjunct that
  // is unsatisfiable with f and the rest of the kept specification.
  std::vector<AttributedFormula> repaired;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const AttributedFormula& af = kept[i];
    if (af.formula.kind() != Connective::Or) {
      repaired.push_back(af);
      continue;
    }
    std::vector<Formula> context;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) context.push_back(kept[j].formula);
    std::vector<Formula> disjuncts;
    detail::flatten_disjuncts(af.formula, disjuncts);
    std::vector<Formula> survivors;
    for (const Formula& d : disjuncts)
      if (!is_unsatisfiable(detail::with_context(f, context, d)))
        survivors.push_back(d);
    if (survivors.empty()) {
      result.removed.push_back(af);
    } else if (survivors.size() < disjuncts.size()) {
      AttributedFormula after = af;
      after.formula = detail::fold_disjunction(survivors);
      after.origin = Origin::External;  // shape no longer a mined pattern
      result.rewritten.emplace_back(af, after);
      repaired.push_back(after);
    } else {
      repaired.push_back(af);
    }
  }

  // Repair pass 3: guarantee joint consistency with f. Forward pass in
  // specification order: a formula survives only if it is satisfiable
  // together with f and everything kept before it, so earlier entries take
  // priority and the trigger always wins.
  std::vector<AttributedFormula> consistent;
  std::vector<Formula> prefix{f};
  for (const AttributedFormula& af : repaired) {
    prefix.push_back(af.formula);
    if (is_satisfiable(*conjunction(prefix))) {
      consistent.push_back(af);
      continue;
    }
    prefix.pop_back();
    // A swept-away rewrite is a removal of the original formula.
    auto rw = std::find_if(result.rewritten.begin(), result.rewritten.end(),
                           [&](const auto& p) {
                             return p.second.formula == af.formula;
                           });
    if (rw != result.rewritten.end()) {
      result.removed.push_back(rw->first);
      result.rewritten.erase(rw);
    } else {
      result.removed.push_back(af);
    }
  }
  repaired = std::move(consistent);

  // Updated specification: trigger first, then the surviving entries in
  // their original order (foreign objects untouched).
  std::map<std::string, AttributedFormula> replacement;
  std::set<std::string> dropped;
  for (const auto& [before, after] : result.rewritten)
    replacement.emplace(render(before.formula), after);
  for (const AttributedFormula& af : result.removed)
    dropped.insert(render(af.formula));
  std::set<std::string> surviving;
  for (const AttributedFormula& af : repaired)
    surviving.insert(render(af.formula));

  if (!sigma.contains(f, object))
    result.updated_spec.add({f, object, Origin::External});
  for (const AttributedFormula& e : sigma.entries()) {
    if (e.object != object) {
      result.updated_spec.add(e);
      continue;
    }
    const std::string key = render(e.formula);
    if (auto it = replacement.find(key); it != replacement.end())
      result.updated_spec.add(it->second);
    else if (dropped.count(key) && !surviving.count(key))
      continue;
    else
      result.updated_spec.add(e);
  }
  // The trigger always ends up in the specification, even when repair
  // swept an identical pre-existing entry.
  if (!result.updated_spec.contains(f, object))
    result.updated_spec.add({f, object, Origin::External});

  // Actions: positive atoms at witness worlds of the selected open
  // branches, the trigger's own atoms excluded, ranked by branch support
  // and then lexicographically.
  std::map<std::string, int> support;
  for (const LiteralSet& lits : result.open_literals)
    for (const Literal& l : lits)
      if (l.positive && l.label.is_witness() && !trigger_atoms.count(l.atom))
        support[l.atom] = 0;
  for (auto& [atom, count] : support)
    for (const LiteralSet& lits : result.open_literals)
      for (const Literal& l : lits)
        if (l.positive && l.label.is_witness() && l.atom == atom) {
          ++count;
          break;
        }
  std::vector<std::pair<std::string, int>> ranked(support.begin(),
                                                  support.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [atom, count] : ranked) result.actions.push_back(atom);

  return result;
}

}  // namespace specmine
