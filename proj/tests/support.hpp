#pragma once

// Shared test helpers: deterministic random generators for fragment
// formulas and behaviors, and trace extraction from open branches.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "specmine/environment.hpp"
#include "specmine/formula.hpp"
#include "specmine/oracle.hpp"
#include "specmine/tableau.hpp"

namespace testsupport {

struct Rng {
  explicit Rng(unsigned seed) : eng(seed) {}

  int below(int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(eng));
  }
  bool chance(int percent) { return below(100) < percent; }

  std::mt19937 eng;
};

inline specmine::Formula pick_atom(Rng& rng,
                                   const std::vector<std::string>& pool) {
  return specmine::Formula::atom(pool[static_cast<std::size_t>(
      rng.below(static_cast<int>(pool.size())))]);
}

inline specmine::Formula gen_tf(Rng& rng,
                                const std::vector<std::string>& pool,
                                int depth) {
  if (depth <= 0 || rng.chance(45)) return pick_atom(rng, pool);
  switch (rng.below(4)) {
    case 0: return specmine::neg(gen_tf(rng, pool, depth - 1));
    case 1:
      return specmine::conj(gen_tf(rng, pool, depth - 1),
                            gen_tf(rng, pool, depth - 1));
    case 2:
      return specmine::disj(gen_tf(rng, pool, depth - 1),
                            gen_tf(rng, pool, depth - 1));
    default:
      return specmine::implies(gen_tf(rng, pool, depth - 1),
                               gen_tf(rng, pool, depth - 1));
  }
}

/// A leaf of the fragment skeleton: temporal-free, G phi, F phi or a
/// response pattern, bounded by the remaining temporal-operator budget.
inline specmine::Formula gen_leaf(Rng& rng,
                                  const std::vector<std::string>& pool,
                                  int& temporal_budget) {
  if (temporal_budget <= 0) return gen_tf(rng, pool, 2);
  const int r = rng.below(10);
  if (r < 3) return gen_tf(rng, pool, 2);
  if (r < 6) {
    temporal_budget -= 1;
    return specmine::always(gen_tf(rng, pool, 1));
  }
  if (r < 8 || temporal_budget < 2) {
    temporal_budget -= 1;
    return specmine::eventually(gen_tf(rng, pool, 1));
  }
  temporal_budget -= 2;
  return specmine::always(specmine::implies(
      gen_tf(rng, pool, 1), specmine::eventually(gen_tf(rng, pool, 1))));
}

inline specmine::Formula gen_fragment_impl(Rng& rng,
                                           const std::vector<std::string>& pool,
                                           int& temporal_budget, int depth) {
  if (depth <= 0) return gen_leaf(rng, pool, temporal_budget);
  const int r = rng.below(100);
  if (r < 40) return gen_leaf(rng, pool, temporal_budget);
  if (r < 65)
    return specmine::conj(
        gen_fragment_impl(rng, pool, temporal_budget, depth - 1),
        gen_fragment_impl(rng, pool, temporal_budget, depth - 1));
  if (r < 85)
    return specmine::disj(
        gen_fragment_impl(rng, pool, temporal_budget, depth - 1),
        gen_fragment_impl(rng, pool, temporal_budget, depth - 1));
  return specmine::implies(
      gen_tf(rng, pool, 1),
      gen_fragment_impl(rng, pool, temporal_budget, depth - 1));
}

inline specmine::Formula gen_fragment(Rng& rng,
                                      const std::vector<std::string>& pool,
                                      int max_temporal = 4, int depth = 3) {
  int budget = max_temporal;
  return gen_fragment_impl(rng, pool, budget, depth);
}

inline specmine::Timestamp ts_after(int seconds) {
  specmine::Timestamp t;
  t.year = 2015;
  t.month = 1;
  t.day = 1 + seconds / 86400;
  t.hour = (seconds / 3600) % 24;
  t.minute = (seconds / 60) % 60;
  t.second = seconds % 60;
  return t;
}

inline specmine::Behavior gen_behavior(Rng& rng,
                                       const std::vector<std::string>& nodes,
                                       const std::vector<std::string>& objects,
                                       int max_events) {
  specmine::Behavior b;
  const int count = 1 + rng.below(max_events);
  int clock = 0;
  for (int i = 0; i < count; ++i) {
    clock += 1 + rng.below(400);
    specmine::Event e;
    e.object = objects[static_cast<std::size_t>(
        rng.below(static_cast<int>(objects.size())))];
    e.node = nodes[static_cast<std::size_t>(
        rng.below(static_cast<int>(nodes.size())))];
    e.time = ts_after(clock);
    b.events.push_back(std::move(e));
  }
  return b;
}

inline specmine::AttributedGraph graph_of(
    const std::vector<std::string>& nodes) {
  specmine::AttributedGraph g;
  for (const std::string& n : nodes) g.add_vertex(n);
  return g;
}

/// Trace read off an open branch: an atom holds at a world iff the branch
/// asserts it there; everything else is false.
inline specmine::TraceModel extract_model(const specmine::TruthTree& tree,
                                          const specmine::Branch& branch) {
  specmine::TraceModel m;
  const std::set<std::string> names = specmine::atoms(tree.root);
  m.atom_order.assign(names.begin(), names.end());

  std::set<int> witnesses;
  for (const specmine::LabeledFormula& e : branch.entries)
    if (e.label.is_witness()) witnesses.insert(e.label.id);
  std::vector<int> position_of_label{0};
  position_of_label.insert(position_of_label.end(), witnesses.begin(),
                           witnesses.end());

  m.states.assign(position_of_label.size(),
                  std::vector<bool>(m.atom_order.size(), false));
  for (const specmine::Literal& lit : branch.literals()) {
    if (!lit.positive) continue;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < position_of_label.size(); ++i)
      if (position_of_label[i] == lit.label.id) pos = i;
    const auto it = std::lower_bound(m.atom_order.begin(), m.atom_order.end(),
                                     lit.atom);
    m.states[pos][static_cast<std::size_t>(it - m.atom_order.begin())] = true;
  }
  return m;
}

}  // namespace testsupport
