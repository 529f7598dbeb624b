#include <catch2/catch.hpp>

#include <algorithm>

#include "specmine/miner.hpp"
#include "specmine/spec_io.hpp"
#include "specmine/tableau.hpp"
#include "support.hpp"

using namespace specmine;

namespace {

const char* kFourNodeGraph =
    R"({"nodes":[{"id":"e2"},{"id":"s03"},{"id":"s07"},{"id":"s08"}]})";

const char* kEventLog =
    "o5,s03,t2015.02.12.09.30.15\n"
    "o5,s08,t2015.02.12.09.32.40\n"
    "o5,s08,t2015.02.12.09.33.30\n"
    "o5,s08,t2015.02.12.09.34.20\n"
    "o5,s07,t2015.02.12.09.35.20\n"
    "o5,s07,t2015.02.12.11.37.15\n";

std::vector<std::string> rendered(const Specification& s) {
  std::vector<std::string> out;
  for (const AttributedFormula& af : s.entries())
    out.push_back(render(af.formula));
  return out;
}

}  // namespace

TEST_CASE("partition groups events per object") {
  const AttributedGraph g = load_graph(kFourNodeGraph);
  SECTION("single object") {
    const auto groups = partition(load_events(kEventLog, g));
    REQUIRE(groups.size() == 1);
    CHECK(groups.at("o5").size() == 6);
  }
  SECTION("two objects") {
    const auto groups = partition(load_events(
        "o1,s03,t2015.01.01.00.00.00\no2,s07,t2015.01.01.00.00.01\n", g));
    CHECK(groups.size() == 2);
  }
  SECTION("empty behavior") {
    REQUIRE_THROWS_AS(partition(Behavior{}), ValidationError);
  }
}

TEST_CASE("mining the walkthrough log") {
  const AttributedGraph g = load_graph(kFourNodeGraph);
  const Behavior b = load_events(kEventLog, g);

  SECTION("standard mode") {
    const auto mined = mine(b, g, MiningMode::Standard);
    REQUIRE(mined.size() == 1);
    const Specification& spec = mined.at("o5");
    REQUIRE(rendered(spec) ==
            std::vector<std::string>{"G !e2", "G (s03 -> F s08)",
                                     "G (s08 -> F s07)"});
    CHECK(spec.entries()[0].origin == Origin::Saf);
    CHECK(spec.entries()[1].origin == Origin::Liv2);
    CHECK(spec.entries()[2].origin == Origin::Liv2);
    for (const AttributedFormula& af : spec.entries())
      CHECK(af.object == "o5");
  }
  SECTION("literal mode adds the final existence formula") {
    const auto mined = mine(b, g, MiningMode::Literal);
    REQUIRE(rendered(mined.at("o5")) ==
            std::vector<std::string>{"G !e2", "G (s03 -> F s08)",
                                     "G (s08 -> F s07)", "F s07"});
    CHECK(mined.at("o5").entries()[3].origin == Origin::Liv1);
  }
}

TEST_CASE("single-event behavior") {
  const AttributedGraph g = load_graph(kFourNodeGraph);
  const Behavior b = load_events("o1,s03,t2015.02.12.09.30.15\n", g);
  for (MiningMode mode : {MiningMode::Literal, MiningMode::Standard}) {
    const auto mined = mine(b, g, mode);
    CHECK(rendered(mined.at("o1")) ==
          std::vector<std::string>{"G !e2", "G !s07", "G !s08", "F s03"});
  }
}

TEST_CASE("cyclic traces deduplicate with occurrence counts") {
  const AttributedGraph g = load_graph(kFourNodeGraph);
  const Behavior b = load_events(
      "o1,s03,t2015.01.01.00.00.01\n"
      "o1,s08,t2015.01.01.00.00.02\n"
      "o1,s03,t2015.01.01.00.00.03\n"
      "o1,s08,t2015.01.01.00.00.04\n",
      g);
  const auto mined = mine(b, g, MiningMode::Standard);
  const Specification& spec = mined.at("o1");
  REQUIRE(rendered(spec) ==
          std::vector<std::string>{"G !e2", "G !s07", "G (s03 -> F s08)",
                                   "G (s08 -> F s03)"});
  CHECK(spec.entries()[2].occurrences == 2);
  CHECK(spec.entries()[3].occurrences == 1);
}

TEST_CASE("mining details") {
  const AttributedGraph g = load_graph(kFourNodeGraph);
  SECTION("timestamp ties keep input order") {
    const Behavior b = load_events(
        "o1,s03,t2015.01.01.00.00.01\n"
        "o1,s08,t2015.01.01.00.00.01\n",
        g);
    const auto mined = mine(b, g, MiningMode::Standard);
    const std::vector<std::string> texts = rendered(mined.at("o1"));
    CHECK(std::count(texts.begin(), texts.end(), "G (s03 -> F s08)") == 1);
  }
  SECTION("event order does not matter") {
    const Behavior b = load_events(kEventLog, g);
    testsupport::Rng rng(8);
    for (int i = 0; i < 20; ++i) {
      Behavior shuffled = b;
      std::shuffle(shuffled.events.begin(), shuffled.events.end(), rng.eng);
      CHECK(mine(b, g, MiningMode::Literal).at("o5") ==
            mine(shuffled, g, MiningMode::Literal).at("o5"));
    }
  }
  SECTION("comparison counter is n - 1 per object") {
    MiningStats stats;
    mine(load_events(kEventLog, g), g, MiningMode::Standard, &stats);
    CHECK(stats.comparisons.at("o5") == 5);
  }
  SECTION("empty behavior rejected") {
    REQUIRE_THROWS_AS(mine(Behavior{}, g, MiningMode::Standard),
                      ValidationError);
  }
  SECTION("foreign nodes rejected") {
    Behavior b;
    b.events.push_back({"o1", "zz", testsupport::ts_after(0)});
    REQUIRE_THROWS_AS(mine(b, g, MiningMode::Standard), ValidationError);
  }
}

TEST_CASE("merge and split") {
  const AttributedGraph g = load_graph(kFourNodeGraph);
  const auto mined =
      mine(load_events(kEventLog, g), g, MiningMode::Standard);

  SECTION("merge keeps attribution") {
    const Specification sigma = merge({{"o5", mined.at("o5")}});
    REQUIRE(sigma.size() == 3);
    for (const AttributedFormula& af : sigma.entries())
      CHECK(af.object == "o5");
  }
  SECTION("identical formulas from different objects stay distinct") {
    Specification a;
    a.add({parse("G !e2"), "o1", Origin::Saf});
    Specification b;
    b.add({parse("G !e2"), "o2", Origin::Saf});
    const Specification sigma = merge({{"o1", a}, {"o2", b}});
    CHECK(sigma.size() == 2);
  }
  SECTION("empty merge") { CHECK(merge({}).empty()); }
  SECTION("attribution clash") {
    Specification a;
    a.add({parse("G !e2"), "o1", Origin::Saf});
    REQUIRE_THROWS_AS(merge({{"o1", a}, {"o1", a}}), ValidationError);
  }
  SECTION("split inverts merge") {
    Specification a;
    a.add({parse("G !e2"), "o1", Origin::Saf});
    Specification b;
    b.add({parse("G !e2"), "o2", Origin::Saf});
    b.add({parse("F s03"), "o2", Origin::Liv1});
    const auto split = split_by_object(merge({{"o1", a}, {"o2", b}}));
    REQUIRE(split.size() == 2);
    CHECK(split.at("o1") == a);
    CHECK(split.at("o2") == b);
    CHECK(split_by_object(Specification{}).empty());
    CHECK(split_by_object(merge({{"o5", mined.at("o5")}})).at("o5") ==
          mined.at("o5"));
  }
}

TEST_CASE("mining counts match an independent trace scan") {
  testsupport::Rng rng(31415);
  const std::vector<std::string> nodes{"a", "b", "c", "d"};
  const std::vector<std::string> objects{"o1", "o2"};
  const AttributedGraph g = testsupport::graph_of(nodes);
  for (int i = 0; i < 100; ++i) {
    const Behavior b = testsupport::gen_behavior(rng, nodes, objects, 12);
    const auto mined = mine(b, g, MiningMode::Standard);
    for (const auto& [object, spec] : mined) {
      // independent recomputation of the run structure
      std::vector<Event> events;
      for (const Event& e : b.events)
        if (e.object == object) events.push_back(e);
      std::stable_sort(events.begin(), events.end(),
                       [](const Event& x, const Event& y) {
                         return x.time < y.time;
                       });
      std::set<std::string> visited;
      for (const Event& e : events) visited.insert(e.node);
      std::size_t runs = 1;
      for (std::size_t k = 1; k < events.size(); ++k)
        if (events[k].node != events[k - 1].node) ++runs;

      std::size_t saf = 0;
      std::size_t liv2_with_multiplicity = 0;
      for (const AttributedFormula& af : spec.entries()) {
        if (af.origin == Origin::Saf) ++saf;
        if (af.origin == Origin::Liv2)
          liv2_with_multiplicity += static_cast<std::size_t>(af.occurrences);
      }
      CHECK(saf == nodes.size() - visited.size());
      CHECK(liv2_with_multiplicity == runs - 1);
    }
  }
}

TEST_CASE("mined specifications are satisfiable") {
  testsupport::Rng rng(2015);
  const std::vector<std::string> nodes{"a", "b", "c"};
  const std::vector<std::string> objects{"o1", "o2"};
  const AttributedGraph g = testsupport::graph_of(nodes);
  for (int i = 0; i < 50; ++i) {
    const Behavior b = testsupport::gen_behavior(rng, nodes, objects, 8);
    for (MiningMode mode : {MiningMode::Literal, MiningMode::Standard}) {
      for (const auto& [object, spec] : mine(b, g, mode)) {
        const auto fs = spec.restrict_to(object);
        REQUIRE(is_satisfiable(*conjunction(fs)));
      }
    }
  }
}

TEST_CASE("specification JSON round trip") {
  Specification spec;
  spec.add({parse("G !e2"), "o5", Origin::Saf});
  spec.add({parse("G (s03 -> F s08)"), "o5", Origin::Liv2, 2});
  spec.add({parse("v11"), "o7", Origin::External});
  const std::string text = serialize_specification(spec);
  CHECK(load_specification(text) == spec);

  SECTION("origin defaults to external") {
    const Specification s = load_specification(
        R"({"formulas":[{"object":"o","formula":"v11"}]})");
    CHECK(s.entries()[0].origin == Origin::External);
  }
  SECTION("origin shape is enforced") {
    REQUIRE_THROWS_AS(
        load_specification(
            R"({"formulas":[{"object":"o","formula":"v11","origin":"saf"}]})"),
        ValidationError);
  }
  SECTION("duplicate entries rejected") {
    REQUIRE_THROWS_AS(
        load_specification(R"({"formulas":[
          {"object":"o","formula":"v11"},
          {"object":"o","formula":"v11"}]})"),
        ValidationError);
  }
  SECTION("formulas outside the fragment rejected") {
    REQUIRE_THROWS_AS(
        load_specification(
            R"({"formulas":[{"object":"o","formula":"G F G p"}]})"),
        FragmentError);
  }
}
