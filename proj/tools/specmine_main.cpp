// specmine command line: mine specifications from event logs, decide
// formulas with truth trees, run reaction cycles, and replay event streams
// through the whole pipeline.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specmine/environment.hpp"
#include "specmine/formula.hpp"
#include "specmine/miner.hpp"
#include "specmine/reactor.hpp"
#include "specmine/spec_io.hpp"
#include "specmine/tableau.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw specmine::IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw specmine::IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw specmine::IoError("write to '" + path + "' failed");
}

specmine::MiningMode mode_from(const std::string& s) {
  return s == "literal" ? specmine::MiningMode::Literal
                        : specmine::MiningMode::Standard;
}

specmine::Specification merge_mined(
    const std::map<std::string, specmine::Specification>& mined) {
  std::vector<std::pair<std::string, specmine::Specification>> ordered(
      mined.begin(), mined.end());
  return specmine::merge(ordered);
}

int run_mine(const std::string& graph_path, const std::string& events_path,
             const std::string& mode, const std::string& out_path) {
  const auto graph = specmine::load_graph(read_file(graph_path));
  const auto behavior = specmine::load_events(read_file(events_path), graph);
  const auto mined = specmine::mine(behavior, graph, mode_from(mode));
  write_file(out_path, specmine::serialize_specification(merge_mined(mined)));
  return 0;
}

int run_decide(const std::string& text, const std::string& query,
               bool show_tree) {
  const specmine::Formula f = specmine::parse(text);
  const specmine::Formula target =
      query == "valid" ? specmine::push_negation(specmine::neg(f)) : f;
  const specmine::TruthTree tree = specmine::build_tree(target);
  const bool open = tree.has_open_branch();
  const bool yes = query == "sat" ? open : !open;
  std::cout << (yes ? "yes" : "no") << "\n";
  if (show_tree) std::cout << specmine::dump_tree(tree);
  return yes ? 0 : 1;
}

int run_react(const std::string& spec_path, const std::string& object,
              const std::string& trigger, const std::string& out_path,
              const std::string& result_path, bool with_tree) {
  const auto sigma = specmine::load_specification(read_file(spec_path));
  const specmine::Formula f = specmine::parse(trigger);
  const specmine::ReactionResult r = specmine::react(sigma, f, object);
  for (const std::string& action : r.actions) std::cout << action << "\n";
  write_file(out_path, specmine::serialize_specification(r.updated_spec));
  if (!result_path.empty())
    write_file(result_path, specmine::serialize_reaction(r, with_tree));
  return 0;
}

int run_replay(const std::string& graph_path, const std::string& events_path,
               const std::string& spec_path, const std::string& mode,
               int window, const std::string& policy,
               const std::string& out_path) {
  const auto graph = specmine::load_graph(read_file(graph_path));
  auto behavior = specmine::load_events(read_file(events_path), graph);
  if (behavior.empty())
    throw specmine::ValidationError("event log is empty; nothing to replay");
  std::stable_sort(behavior.events.begin(), behavior.events.end(),
                   [](const specmine::Event& a, const specmine::Event& b) {
                     return a.time < b.time;
                   });

  specmine::Specification sigma;
  if (!spec_path.empty())
    sigma = specmine::load_specification(read_file(spec_path));

  specmine::Behavior history;
  const auto remine = [&] {
    const auto mined = specmine::mine(history, graph, mode_from(mode));
    specmine::Specification next = merge_mined(mined);
    for (const specmine::AttributedFormula& af : sigma.entries())
      if (af.origin == specmine::Origin::External &&
          !next.contains(af.formula, af.object))
        next.add(af);
    sigma = std::move(next);
  };

  int since_boundary = 0;
  for (const specmine::Event& e : behavior.events) {
    history.events.push_back(e);
    if (++since_boundary == window) {
      remine();
      since_boundary = 0;
    }
    if (policy == "every") {
      const auto r =
          specmine::react(sigma, specmine::Formula::atom(e.node), e.object);
      sigma = r.updated_spec;
      std::cout << e.object << "@" << e.node << " =>";
      if (r.actions.empty()) {
        std::cout << " -";
      } else {
        for (const std::string& a : r.actions) std::cout << " " << a;
      }
      std::cout << "\n";
    }
  }
  if (since_boundary > 0) remine();
  write_file(out_path, specmine::serialize_specification(sigma));
  return 0;
}

int guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const specmine::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const specmine::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const specmine::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "specmine: mine temporal-logic behavior specifications from "
      "timestamped sensor event logs and reason over them with truth trees"};
  app.require_subcommand(1);

  std::string graph_path;
  std::string events_path;
  std::string spec_path;
  std::string out_path;
  std::string result_path;
  std::string mode = "standard";
  std::string query = "sat";
  std::string policy = "on-demand";
  std::string object;
  std::string formula_text;
  int window = 1;
  bool show_tree = false;

  CLI::App* mine = app.add_subcommand(
      "mine", "Mine a specification from a graph and an event log");
  mine->add_option("--graph", graph_path, "environment graph (JSON)")
      ->required();
  mine->add_option("--events", events_path, "event log (CSV)")->required();
  mine->add_option("--mode", mode, "mining mode")
      ->check(CLI::IsMember({"standard", "literal"}));
  mine->add_option("--out", out_path, "output specification (JSON)")
      ->required();

  CLI::App* decide = app.add_subcommand(
      "decide", "Decide satisfiability, unsatisfiability or validity");
  decide->add_option("formula", formula_text, "formula text")->required();
  decide->add_option("--query", query, "question to decide")
      ->check(CLI::IsMember({"sat", "unsat", "valid"}));
  decide->add_flag("--tree", show_tree, "print the truth tree");

  CLI::App* react = app.add_subcommand(
      "react", "Run one reaction cycle for a trigger formula");
  react->add_option("--spec", spec_path, "specification (JSON)")->required();
  react->add_option("--object", object, "object id the trigger refers to")
      ->required();
  react->add_option("--trigger", formula_text, "trigger formula text")
      ->required();
  react->add_option("--out", out_path, "updated specification (JSON)")
      ->required();
  react->add_option("--result", result_path,
                    "also write the full reaction result (JSON)");
  react->add_flag("--tree", show_tree,
                  "include the truth tree dump in the reaction result");

  CLI::App* replay = app.add_subcommand(
      "replay", "Stream an event log through mining and reaction");
  replay->add_option("--graph", graph_path, "environment graph (JSON)")
      ->required();
  replay->add_option("--events", events_path, "event log (CSV)")->required();
  replay->add_option("--spec", spec_path, "initial specification (JSON)");
  replay->add_option("--mode", mode, "mining mode")
      ->check(CLI::IsMember({"standard", "literal"}));
  replay->add_option("--window", window, "events per mining batch")
      ->check(CLI::PositiveNumber);
  replay->add_option("--trigger-policy", policy, "when to react")
      ->check(CLI::IsMember({"every", "on-demand"}));
  replay->add_option("--out", out_path, "final specification (JSON)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (mine->parsed())
    return guarded(
        [&] { return run_mine(graph_path, events_path, mode, out_path); });
  if (decide->parsed())
    return guarded([&] { return run_decide(formula_text, query, show_tree); });
  if (react->parsed())
    return guarded([&] {
      return run_react(spec_path, object, formula_text, out_path, result_path,
                       show_tree);
    });
  return guarded([&] {
    return run_replay(graph_path, events_path, spec_path, mode, window, policy,
                      out_path);
  });
}
