#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specmine/errors.hpp"
#include "specmine/formula.hpp"

namespace specmine {

// ---------------------------------------------------------------------------
// Timestamps. Literal form tYYYY.MM.DD.HH.MM.SS, second resolution, no time
// zones. Ordering is lexicographic on the six fields, which coincides with
// chronological order.
// ---------------------------------------------------------------------------

struct Timestamp {
  int year = 0;
  int month = 0;
  int day = 0;
  int hour = 0;
  int minute = 0;
  int second = 0;

  std::array<int, 6> fields() const {
    return {year, month, day, hour, minute, second};
  }

  friend bool operator==(const Timestamp& a, const Timestamp& b) {
    return a.fields() == b.fields();
  }
  friend bool operator<(const Timestamp& a, const Timestamp& b) {
    return a.fields() < b.fields();
  }
  friend bool operator<=(const Timestamp& a, const Timestamp& b) {
    return a.fields() <= b.fields();
  }

  std::string to_string() const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "t%04d.%02d.%02d.%02d.%02d.%02d", year,
                  month, day, hour, minute, second);
    return buf;
  }

  static Timestamp parse(std::string_view text);
};

namespace detail {

inline bool is_leap_year(int y) {
  return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

inline int days_in_month(int y, int m) {
  static constexpr int d[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap_year(y)) return 29;
  return d[m - 1];
}

inline int parse_digits(std::string_view text, std::size_t pos,
                        std::size_t len) {
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') throw FormatError("bad timestamp");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace detail

inline Timestamp Timestamp::parse(std::string_view text) {
  auto fail = [&] {
    throw FormatError("invalid timestamp '" + std::string(text) +
                      "' (expected tYYYY.MM.DD.HH.MM.SS)");
  };
  if (text.size() != 20 || text[0] != 't') fail();
  for (std::size_t dot : {5u, 8u, 11u, 14u, 17u})
    if (text[dot] != '.') fail();
  Timestamp t;
  try {
    t.year = detail::parse_digits(text, 1, 4);
    t.month = detail::parse_digits(text, 6, 2);
    t.day = detail::parse_digits(text, 9, 2);
    t.hour = detail::parse_digits(text, 12, 2);
    t.minute = detail::parse_digits(text, 15, 2);
    t.second = detail::parse_digits(text, 18, 2);
  } catch (const FormatError&) {
    fail();
  }
  if (t.month < 1 || t.month > 12) fail();
  if (t.day < 1 || t.day > detail::days_in_month(t.year, t.month)) fail();
  if (t.hour > 23 || t.minute > 59 || t.second > 59) fail();
  return t;
}

// ---------------------------------------------------------------------------
// The smart environment: a directed graph whose vertices carry optional
// display names and sensor label sets. Node ids double as formula atoms.
// ---------------------------------------------------------------------------

struct AttributedGraph {
  std::vector<std::string> vertices;  // document order
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::string> names;
  std::map<std::string, std::set<std::string>> sensors;

  bool has_vertex(const std::string& id) const {
    return vertex_set_.count(id) != 0;
  }

  void add_vertex(const std::string& id) {
    if (!is_identifier(id) || is_reserved_word(id))
      throw ValidationError("node id '" + id +
                            "' is not a valid atom identifier");
    if (!vertex_set_.insert(id).second)
      throw ValidationError("duplicate node id '" + id + "'");
    vertices.push_back(id);
  }

  void add_edge(const std::string& from, const std::string& to) {
    if (!has_vertex(from) || !has_vertex(to))
      throw ValidationError("dangling edge endpoint in (" + from + ", " + to +
                            ")");
    edges.emplace_back(from, to);
  }

  friend bool operator==(const AttributedGraph& a, const AttributedGraph& b) {
    return a.vertices == b.vertices && a.edges == b.edges &&
           a.names == b.names && a.sensors == b.sensors;
  }

 private:
  std::set<std::string> vertex_set_;
};

/// Graph document:
///   {"nodes":[{"id":"s03","name":"staircase 3","sensors":["presence"]},...],
///    "edges":[["s03","s08"],...]}
/// "name", "sensors" and "edges" are optional; unknown fields are rejected.
inline AttributedGraph load_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("graph document is not valid JSON: ") +
                      e.what());
  }
  if (!doc.is_object()) throw ValidationError("graph document must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "nodes" && key != "edges")
      throw ValidationError("unknown field '" + key + "' in graph document");
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    throw ValidationError("graph document needs a \"nodes\" array");

  AttributedGraph g;
  for (const auto& node : doc["nodes"]) {
    if (!node.is_object())
      throw ValidationError("graph node entries must be objects");
    for (const auto& [key, value] : node.items()) {
      (void)value;
      if (key != "id" && key != "name" && key != "sensors")
        throw ValidationError("unknown field '" + key + "' in graph node");
    }
    if (!node.contains("id") || !node["id"].is_string())
      throw ValidationError("graph node without string \"id\"");
    const std::string id = node["id"].get<std::string>();
    g.add_vertex(id);
    if (node.contains("name")) {
      if (!node["name"].is_string())
        throw ValidationError("node \"name\" must be a string");
      g.names[id] = node["name"].get<std::string>();
    }
    if (node.contains("sensors")) {
      if (!node["sensors"].is_array())
        throw ValidationError("node \"sensors\" must be an array");
      std::set<std::string> labels;
      for (const auto& s : node["sensors"]) {
        if (!s.is_string())
          throw ValidationError("sensor labels must be strings");
        labels.insert(s.get<std::string>());
      }
      g.sensors[id] = std::move(labels);
    }
  }
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array())
      throw ValidationError("\"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
          !e[1].is_string())
        throw ValidationError("edges must be [from, to] string pairs");
      g.add_edge(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  return g;
}

inline std::string serialize_graph(const AttributedGraph& g) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const std::string& id : g.vertices) {
    nlohmann::ordered_json node;
    node["id"] = id;
    if (auto it = g.names.find(id); it != g.names.end())
      node["name"] = it->second;
    if (auto it = g.sensors.find(id); it != g.sensors.end())
      node["sensors"] = it->second;
    doc["nodes"].push_back(std::move(node));
  }
  if (!g.edges.empty()) {
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& [from, to] : g.edges)
      doc["edges"].push_back({from, to});
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Events. A behavior keeps its events in input order; multiplicity matters
// (the same node may repeat with distinct timestamps).
// ---------------------------------------------------------------------------

struct Event {
  std::string object;
  std::string node;
  Timestamp time;

  friend bool operator==(const Event& a, const Event& b) {
    return a.object == b.object && a.node == b.node && a.time == b.time;
  }
};

struct Behavior {
  std::vector<Event> events;

  bool empty() const { return events.empty(); }
  std::size_t size() const { return events.size(); }
};

/// Event log: CSV lines `object,node,timestamp`, no header, `#` comments
/// and blank lines skipped. Every node is checked against the graph.
inline Behavior load_events(const std::string& text,
                            const AttributedGraph& graph) {
  Behavior b;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos
                               ? std::string::npos
                               : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos)
      throw FormatError("malformed event line " + std::to_string(line_no) +
                        ": expected object,node,timestamp");
    Event e;
    e.object = line.substr(0, c1);
    e.node = line.substr(c1 + 1, c2 - c1 - 1);
    const std::string stamp = line.substr(c2 + 1);
    if (!is_identifier(e.object) || is_reserved_word(e.object))
      throw FormatError("invalid object id '" + e.object + "' on line " +
                        std::to_string(line_no));
    if (!graph.has_vertex(e.node))
      throw ValidationError("unknown node '" + e.node + "' on line " +
                            std::to_string(line_no));
    try {
      e.time = Timestamp::parse(stamp);
    } catch (const FormatError& ex) {
      throw FormatError(std::string(ex.what()) + " on line " +
                        std::to_string(line_no));
    }
    b.events.push_back(std::move(e));
  }
  return b;
}

struct ValidationReport {
  struct Item {
    std::size_t index;
    Event event;
  };
  std::vector<Item> violations;

  bool ok() const { return violations.empty(); }
};

/// Lists every event whose node is not a vertex of the graph.
inline ValidationReport validate(const Behavior& b,
                                 const AttributedGraph& g) {
  ValidationReport report;
  for (std::size_t i = 0; i < b.events.size(); ++i)
    if (!g.has_vertex(b.events[i].node))
      report.violations.push_back({i, b.events[i]});
  return report;
}

}  // namespace specmine
