#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specmine/errors.hpp"
#include "specmine/formula.hpp"

namespace specmine {

// ---------------------------------------------------------------------------
// Labeled semantic tableaux for the fragment. A truth tree decomposes a
// formula into branches of labeled entries; a branch closes on a
// complementary literal pair at the same world and is open once finished.
//
// Worlds are flat: the present moment plus one witness world per distinct
// F-subformula. G and F quantify over all worlds (reflexive, anchored), so
// a witness is a function of its F-subformula alone: re-encountering the
// same F on a branch reuses its witness instead of spawning a fresh one,
// which is what makes construction terminate on self-feeding response
// formulas like G (p -> F p).
//
// Expansion rules, applied per branch in entry order with class priority
// (non-branching rules first, F before the G re-application sweep,
// branching last):
//   (and)  A & B @L        adds A@L and B@L
//   (not)  !compound @L    pushes the negation one step inward
//   (or)   A | B @L        splits into A@L and B@L
//   (imp)  A -> B @L       splits into !A@L and B@L
//   (F)    F A @L          asserts A at the F-subformula's witness world,
//                          once per branch
//   (G)    G A @L          asserts A at the present moment and at every
//                          witness on the branch, re-applied as witnesses
//                          appear
// Instances produced by (G) are decomposed with two refinements that plain
// formulas do not get: an instance is skipped when one of its immediate
// disjuncts is already on the branch (or its F-consequent already
// witnessed), and a literal disjunct whose complement sits on the branch at
// the same world is dropped instead of split on. Both are truth-preserving
// for the anchored semantics; they keep re-instantiation from fabricating
// closed sub-branches that no reading of the tree calls for.
// ---------------------------------------------------------------------------

/// World at which an entry is asserted: the present moment (id 0) or the
/// witness world of some F-subformula (ids 1, 2, ... in the order the
/// F-subformulas occur in the root formula).
struct WorldLabel {
  int id = 0;

  bool is_now() const { return id == 0; }
  bool is_witness() const { return id > 0; }

  friend bool operator==(WorldLabel a, WorldLabel b) { return a.id == b.id; }
  friend bool operator!=(WorldLabel a, WorldLabel b) { return a.id != b.id; }
  friend bool operator<(WorldLabel a, WorldLabel b) { return a.id < b.id; }
};

/// "" for the present moment; "1.[a]", "1.[b]", ..., "1.[aa]", ... for
/// witnesses 1, 2, ...
inline std::string to_string(WorldLabel label) {
  if (label.is_now()) return "";
  std::string letters;
  int n = label.id;
  while (n > 0) {
    --n;
    letters.insert(letters.begin(), static_cast<char>('a' + n % 26));
    n /= 26;
  }
  return "1.[" + letters + "]";
}

struct LabeledFormula {
  WorldLabel label;
  Formula formula;
};

/// Signed labeled literal extracted from a branch.
struct Literal {
  WorldLabel label;
  bool positive = true;
  std::string atom;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.label == b.label && a.positive == b.positive && a.atom == b.atom;
  }
  friend bool operator<(const Literal& a, const Literal& b) {
    if (a.label != b.label) return a.label < b.label;
    if (a.positive != b.positive) return a.positive < b.positive;
    return a.atom < b.atom;
  }
};

using LiteralSet = std::set<Literal>;

inline std::string to_string(const Literal& lit) {
  std::string out = lit.positive ? "" : "!";
  out += lit.atom;
  if (lit.label.is_witness()) out += "@" + to_string(lit.label);
  return out;
}

enum class BranchStatus { Open, Closed };

struct Branch {
  std::vector<LabeledFormula> entries;
  BranchStatus status = BranchStatus::Open;
  /// Indices into entries of the complementary literal pair, when closed.
  std::optional<std::pair<int, int>> closing_pair;

  LiteralSet literals() const {
    LiteralSet out;
    for (const LabeledFormula& e : entries) {
      if (e.formula.is_atom())
        out.insert({e.label, true, e.formula.atom_name()});
      else if (e.formula.is_literal())
        out.insert({e.label, false, e.formula.body().atom_name()});
    }
    return out;
  }
};

struct TruthTree {
  Formula root;
  std::vector<Branch> branches;
  int witness_count = 0;

  // Display structure: every entry once, with its parent.
  struct Node {
    LabeledFormula entry;
    int parent = -1;
  };
  std::vector<Node> nodes;
  std::vector<int> branch_leaves;  // arena index of each branch's last entry

  bool has_open_branch() const {
    for (const Branch& b : branches)
      if (b.status == BranchStatus::Open) return true;
    return false;
  }
  bool all_closed() const { return !has_open_branch(); }
};

inline constexpr std::size_t kDefaultNodeBudget = 100000;

namespace detail {

enum class EntryClass { Alpha = 0, AlwaysRule = 1, DiamondRule = 2, Beta = 3 };

inline std::optional<EntryClass> classify(const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom: return std::nullopt;
    case Connective::Not:
      return f.body().is_atom() ? std::nullopt
                                : std::optional(EntryClass::Alpha);
    case Connective::And: return EntryClass::Alpha;
    case Connective::Or:
    case Connective::Implies: return EntryClass::Beta;
    case Connective::Always: return EntryClass::AlwaysRule;
    case Connective::Eventually: return EntryClass::DiamondRule;
  }
  return std::nullopt;
}

/// Single negation for beta children; collapses a double negation.
inline Formula negated(const Formula& f) {
  if (f.kind() == Connective::Not) return f.body();
  return neg(f);
}

class TreeBuilder {
 public:
  TreeBuilder(Formula root, std::size_t budget)
      : budget_(budget) {
    tree_.root = root;
    allocate_witnesses(tree_.root);
  }

  TruthTree build() {
    BranchState st;
    add_entry(st, WorldLabel{0}, tree_.root, /*derived=*/false);
    run(std::move(st));
    tree_.witness_count = static_cast<int>(used_witnesses_.size());
    return std::move(tree_);
  }

 private:
  struct AgendaItem {
    int node = -1;
    EntryClass cls = EntryClass::Alpha;
    bool derived = false;
    bool done = false;
  };

  struct BranchState {
    std::vector<int> path;  // arena indices, root..leaf
    std::vector<AgendaItem> agenda;
    std::set<std::pair<int, std::string>> entry_keys;        // (label, text)
    std::map<std::pair<int, std::string>, int> pos_lits;     // -> arena idx
    std::map<std::pair<int, std::string>, int> neg_lits;
    std::map<std::string, int> expanded_diamonds;            // body -> witness
    std::vector<Formula> active_always;                      // bodies, in order
    std::vector<int> witnesses;                              // creation order
    std::optional<std::pair<int, int>> closed_pair;          // arena indices
  };

  void allocate_witnesses(const Formula& f) {
    if (f.kind() == Connective::Eventually) {
      const std::string key = render(f.body());
      if (!witness_ids_.count(key))
        witness_ids_.emplace(key, static_cast<int>(witness_ids_.size()) + 1);
    }
    for (std::size_t i = 0; i < f.arity(); ++i) allocate_witnesses(f.child(i));
  }

  /// Appends one entry to the branch; no-op when an identical entry is
  /// already present. Detects closure against the literal index.
  bool add_entry(BranchState& st, WorldLabel label, const Formula& f,
                 bool derived) {
    const std::pair<int, std::string> key{label.id, render(f)};
    if (!st.entry_keys.insert(key).second) return false;
    if (tree_.nodes.size() >= budget_)
      throw ResourceError("tableau node budget exhausted (" +
                          std::to_string(budget_) + " nodes)");
    const int idx = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back({{label, f}, st.path.empty() ? -1 : st.path.back()});
    st.path.push_back(idx);

    if (f.is_literal()) {
      const bool positive = f.is_atom();
      const std::string& name =
          positive ? f.atom_name() : f.body().atom_name();
      const std::pair<int, std::string> lit_key{label.id, name};
      auto& own = positive ? st.pos_lits : st.neg_lits;
      auto& other = positive ? st.neg_lits : st.pos_lits;
      own.emplace(lit_key, idx);
      auto hit = other.find(lit_key);
      if (hit != other.end() && !st.closed_pair)
        st.closed_pair = {hit->second, idx};
    } else {
      st.agenda.push_back({idx, *classify(f), derived, false});
    }
    return true;
  }

  void run(BranchState st) {
    while (!st.closed_pair) {
      int pick = -1;
      for (std::size_t i = 0; i < st.agenda.size(); ++i) {
        const AgendaItem& it = st.agenda[i];
        if (it.done) continue;
        if (pick < 0 || static_cast<int>(it.cls) <
                            static_cast<int>(st.agenda[pick].cls))
          pick = static_cast<int>(i);
      }
      if (pick < 0) {
        finish(std::move(st), BranchStatus::Open);
        return;
      }
      AgendaItem& item = st.agenda[pick];
      item.done = true;
      const LabeledFormula lf = tree_.nodes[item.node].entry;
      const EntryClass cls = item.cls;
      const bool derived = item.derived;
      switch (cls) {
        case EntryClass::Alpha:
          expand_alpha(st, lf, derived);
          break;
        case EntryClass::AlwaysRule:
          expand_always(st, lf);
          break;
        case EntryClass::DiamondRule:
          expand_diamond(st, lf);
          break;
        case EntryClass::Beta:
          expand_beta(std::move(st), lf, derived);
          return;
      }
    }
    finish(std::move(st), BranchStatus::Closed);
  }

  void expand_alpha(BranchState& st, const LabeledFormula& lf, bool derived) {
    const Formula& f = lf.formula;
    if (f.kind() == Connective::And) {
      add_entry(st, lf.label, f.lhs(), derived);
      if (!st.closed_pair) add_entry(st, lf.label, f.rhs(), derived);
      return;
    }
    // Negated compound: push one step inward.
    const Formula& x = f.body();
    switch (x.kind()) {
      case Connective::Not:
        add_entry(st, lf.label, x.body(), derived);
        break;
      case Connective::And:
        add_entry(st, lf.label, disj(negated(x.lhs()), negated(x.rhs())),
                  derived);
        break;
      case Connective::Or:
        add_entry(st, lf.label, conj(negated(x.lhs()), negated(x.rhs())),
                  derived);
        break;
      case Connective::Implies:
        add_entry(st, lf.label, conj(x.lhs(), negated(x.rhs())), derived);
        break;
      case Connective::Always:
        add_entry(st, lf.label, eventually(negated(x.body())), derived);
        break;
      case Connective::Eventually:
        add_entry(st, lf.label, always(negated(x.body())), derived);
        break;
      case Connective::Atom:
        break;  // literal, never classified Alpha
    }
  }

  void expand_always(BranchState& st, const LabeledFormula& lf) {
    const Formula& body = lf.formula.body();
    st.active_always.push_back(body);
    add_entry(st, WorldLabel{0}, body, /*derived=*/true);
    for (int w : st.witnesses) {
      if (st.closed_pair) break;
      add_entry(st, WorldLabel{w}, body, /*derived=*/true);
    }
  }

  void expand_diamond(BranchState& st, const LabeledFormula& lf) {
    const Formula& body = lf.formula.body();
    const std::string key = render(body);
    if (st.expanded_diamonds.count(key)) return;  // already witnessed here
    const int wid = witness_ids_.at(key);
    st.expanded_diamonds.emplace(key, wid);
    st.witnesses.push_back(wid);
    used_witnesses_.insert(wid);
    add_entry(st, WorldLabel{wid}, body, /*derived=*/false);
    // Re-application sweep: every active G claims the new world.
    for (const Formula& b : st.active_always) {
      if (st.closed_pair) break;
      add_entry(st, WorldLabel{wid}, b, /*derived=*/true);
    }
  }

  /// Consumes the branch state: either continues it (instance skipped or
  /// reduced to one child) or splits it into child branches.
  void expand_beta(BranchState st, const LabeledFormula& lf, bool derived) {
    const Formula& f = lf.formula;
    const WorldLabel label = lf.label;
    std::vector<Formula> children;
    if (f.kind() == Connective::Or) {
      children = {f.lhs(), f.rhs()};
    } else {
      children = {negated(f.lhs()), f.rhs()};
    }

    if (derived) {
      for (const Formula& c : children) {
        const bool witnessed = c.kind() == Connective::Eventually &&
                               st.expanded_diamonds.count(render(c.body()));
        if (witnessed || st.entry_keys.count({label.id, render(c)})) {
          run(std::move(st));  // instance already satisfied on this branch
          return;
        }
      }
      std::vector<Formula> live;
      for (const Formula& c : children)
        if (!contradicted(st, label, c)) live.push_back(c);
      if (live.empty()) live.push_back(children.back());
      if (live.size() == 1) {
        add_entry(st, label, live.front(), /*derived=*/true);
        run(std::move(st));
        return;
      }
      children = std::move(live);
    }

    for (const Formula& c : children) {
      BranchState child = st;
      add_entry(child, label, c, derived);
      run(std::move(child));
    }
  }

  bool contradicted(const BranchState& st, WorldLabel label,
                    const Formula& c) const {
    if (!c.is_literal()) return false;
    const bool positive = c.is_atom();
    const std::string& name = positive ? c.atom_name() : c.body().atom_name();
    const auto& other = positive ? st.neg_lits : st.pos_lits;
    return other.count({label.id, name}) != 0;
  }

  void finish(BranchState st, BranchStatus status) {
    Branch b;
    b.status = status;
    b.entries.reserve(st.path.size());
    for (int idx : st.path) b.entries.push_back(tree_.nodes[idx].entry);
    if (status == BranchStatus::Closed) {
      int first = -1;
      int second = -1;
      for (std::size_t i = 0; i < st.path.size(); ++i) {
        if (st.path[i] == st.closed_pair->first) first = static_cast<int>(i);
        if (st.path[i] == st.closed_pair->second) second = static_cast<int>(i);
      }
      b.closing_pair = {first, second};
    }
    tree_.branch_leaves.push_back(st.path.back());
    tree_.branches.push_back(std::move(b));
  }

  std::size_t budget_;
  TruthTree tree_;
  std::map<std::string, int> witness_ids_;
  std::set<int> used_witnesses_;
};

}  // namespace detail

/// Builds the finished truth tree for a fragment formula. Deterministic:
/// identical input yields an identical tree.
inline TruthTree build_tree(const Formula& f,
                            std::size_t node_budget = kDefaultNodeBudget) {
  require_fragment(f);
  return detail::TreeBuilder(f, node_budget).build();
}

/// Satisfiable iff the finished tree has an open branch.
inline bool is_satisfiable(const Formula& f) {
  return build_tree(f).has_open_branch();
}

/// Unsatisfiable iff every branch of the finished tree is closed.
inline bool is_unsatisfiable(const Formula& f) {
  return build_tree(f).all_closed();
}

/// Valid iff the tree of the pushed-in negation is fully closed. The
/// negation must stay inside the fragment.
inline bool is_valid(const Formula& f) {
  return build_tree(push_negation(neg(f))).all_closed();
}

/// One literal set per open branch, in branch order; closed branches are
/// excluded.
inline std::vector<LiteralSet> open_literal_sets(const TruthTree& t) {
  std::vector<LiteralSet> out;
  for (const Branch& b : t.branches)
    if (b.status == BranchStatus::Open) out.push_back(b.literals());
  return out;
}

/// Indented text dump: one entry per line, witness entries prefixed with
/// their label, branch ends marked OPEN or CLOSED(i,j) with i, j the
/// closing entry indices within the branch. Stable across runs.
inline std::string dump_tree(const TruthTree& t) {
  std::vector<std::vector<int>> children(t.nodes.size());
  for (std::size_t i = 1; i < t.nodes.size(); ++i)
    children[static_cast<std::size_t>(t.nodes[i].parent)].push_back(
        static_cast<int>(i));
  std::multimap<int, std::size_t> branch_at;  // leaf node -> branch index
  for (std::size_t b = 0; b < t.branch_leaves.size(); ++b)
    branch_at.emplace(t.branch_leaves[b], b);

  std::string out;
  auto emit = [&](auto&& self, int node, int depth) -> void {
    const auto& entry = t.nodes[static_cast<std::size_t>(node)].entry;
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    if (entry.label.is_witness()) out += to_string(entry.label) + ": ";
    out += render(entry.formula);
    out += '\n';
    auto [lo, hi] = branch_at.equal_range(node);
    for (auto it = lo; it != hi; ++it) {
      const Branch& b = t.branches[it->second];
      out.append(static_cast<std::size_t>(depth) * 2, ' ');
      if (b.status == BranchStatus::Open) {
        out += "OPEN";
      } else {
        out += "CLOSED(" + std::to_string(b.closing_pair->first) + "," +
               std::to_string(b.closing_pair->second) + ")";
      }
      out += '\n';
    }
    const auto& kids = children[static_cast<std::size_t>(node)];
    for (int kid : kids) self(self, kid, depth + (kids.size() > 1 ? 1 : 0));
  };
  if (!t.nodes.empty()) emit(emit, 0, 0);
  return out;
}

}  // namespace specmine
