// Copyright 2026 The Batik KG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "batik/core/error.h"
#include "batik/core/text.h"
#include "batik/query/query.h"

namespace batik::query {

namespace {

struct Plan {
  std::vector<std::string> node_labels;  // canonical, or empty
  std::vector<std::string> edge_labels;
  std::vector<int> node_var;  // index into vars, or -1
  std::vector<int> edge_var;
  std::vector<EdgeDirection> directions;
  std::vector<bool> var_is_edge;
  std::vector<std::vector<Condition>> conds;  // per var, literals resolved
  std::vector<int> returns;                   // var indices
};

Plan MakePlan(const Query& q, const kg::OntologySchema& schema) {
  Plan p;
  std::map<std::string, int> ids;
  auto var_id = [&](const std::string& v, bool edge) {
    if (v.empty()) return -1;
    auto [it, fresh] = ids.emplace(v, static_cast<int>(p.var_is_edge.size()));
    if (fresh) p.var_is_edge.push_back(edge);
    return it->second;
  };
  for (const NodePattern& n : q.nodes) {
    std::string label;
    if (!n.label.empty()) {
      auto c = schema.ResolveConcept(n.label);
      if (!c) throw SchemaError("unknown concept label " + n.label);
      label = *c;
    }
    p.node_labels.push_back(label);
    p.node_var.push_back(var_id(n.var, false));
  }
  for (const EdgePattern& e : q.edges) {
    std::string label;
    if (!e.label.empty()) {
      auto r = schema.ResolveRelation(e.label);
      if (!r) throw SchemaError("unknown relation label " + e.label);
      label = *r;
    }
    p.edge_labels.push_back(label);
    p.edge_var.push_back(var_id(e.var, true));
    p.directions.push_back(e.direction);
  }
  p.conds.resize(p.var_is_edge.size());
  for (Condition c : q.where) {
    auto it = ids.find(c.var);
    if (it == ids.end()) throw SyntaxError("unbound variable " + c.var);
    const bool edge = p.var_is_edge[it->second];
    if (c.op != Comparator::kContains) {
      if (edge) {
        if (auto r = schema.ResolveRelation(c.literal)) c.literal = *r;
      } else if (c.property == "concept") {
        if (auto k = schema.ResolveConcept(c.literal)) c.literal = *k;
      }
    }
    p.conds[it->second].push_back(std::move(c));
  }
  for (const std::string& r : q.returns) {
    auto it = ids.find(r);
    if (it == ids.end()) throw SyntaxError("unbound variable " + r);
    p.returns.push_back(it->second);
  }
  return p;
}

bool Compare(const std::string& value, const Condition& c) {
  switch (c.op) {
    case Comparator::kEq: return value == c.literal;
    case Comparator::kNe: return value != c.literal;
    case Comparator::kContains:
      return value.find(c.literal) != std::string::npos;
  }
  return false;
}

class Matcher {
 public:
  Matcher(const Query& q, const kg::GraphStore& store)
      : store_(store), plan_(MakePlan(q, store.schema())) {
    binding_.assign(plan_.var_is_edge.size(), -1);
  }

  BindingTable Run(const Query& q) {
    const std::vector<kg::NodeId>* seeds;
    std::vector<kg::NodeId> all;
    if (!plan_.node_labels[0].empty()) {
      seeds = &store_.NodesOfConcept(plan_.node_labels[0]);
    } else {
      all.resize(store_.node_count());
      std::iota(all.begin(), all.end(), 0);
      seeds = &all;
    }
    for (kg::NodeId n : *seeds) {
      if (BindNode(0, n)) {
        Extend(0, n);
        UnbindNode(0);
      }
    }
    BindingTable table;
    table.columns = q.returns;
    table.rows.assign(rows_.begin(), rows_.end());
    return table;
  }

 private:
  bool CheckVar(int var, const std::string& name, const std::string& concept_name) {
    for (const Condition& c : plan_.conds[var]) {
      const std::string& value = c.property == "concept" ? concept_name : name;
      if (!Compare(value, c)) return false;
    }
    return true;
  }

  // Binds node slot i to n; false when the node conflicts with the pattern.
  bool BindNode(size_t i, kg::NodeId n) {
    const kg::Node& node = store_.node(n);
    if (!plan_.node_labels[i].empty() && node.concept_name != plan_.node_labels[i]) {
      return false;
    }
    const int v = plan_.node_var[i];
    if (v < 0) return true;
    if (binding_[v] >= 0) {
      if (binding_[v] != n) return false;
      repeat_.push_back(true);
      return true;
    }
    if (!CheckVar(v, node.name, node.concept_name)) return false;
    binding_[v] = n;
    repeat_.push_back(false);
    return true;
  }

  void UnbindNode(size_t i) {
    const int v = plan_.node_var[i];
    if (v < 0) return;
    if (!repeat_.back()) binding_[v] = -1;
    repeat_.pop_back();
  }

  void Extend(size_t i, kg::NodeId at) {
    if (i == plan_.edge_labels.size()) {
      std::vector<Cell> row;
      for (int v : plan_.returns) {
        row.push_back({plan_.var_is_edge[v] ? Cell::Kind::kEdge : Cell::Kind::kNode,
                       binding_[v]});
      }
      rows_.insert(std::move(row));
      return;
    }
    const bool right = plan_.directions[i] == EdgeDirection::kRight;
    const auto& incident = right ? store_.OutEdges(at) : store_.InEdges(at);
    for (kg::EdgeId e : incident) {
      const kg::Edge& edge = store_.edge(e);
      if (!plan_.edge_labels[i].empty() && edge.relation != plan_.edge_labels[i]) {
        continue;
      }
      if (std::find(used_.begin(), used_.end(), e) != used_.end()) continue;
      const int v = plan_.edge_var[i];
      if (v >= 0 && !CheckVar(v, edge.relation, "")) continue;
      const kg::NodeId next = right ? edge.target : edge.source;
      if (v >= 0) binding_[v] = e;
      used_.push_back(e);
      if (BindNode(i + 1, next)) {
        Extend(i + 1, next);
        UnbindNode(i + 1);
      }
      used_.pop_back();
      if (v >= 0) binding_[v] = -1;
    }
  }

  const kg::GraphStore& store_;
  Plan plan_;
  std::vector<int64_t> binding_;
  std::vector<bool> repeat_;
  std::vector<kg::EdgeId> used_;
  std::set<std::vector<Cell>> rows_;
};

std::string Truncate(const std::string& s, size_t max_width) {
  if (DisplayWidth(s) <= max_width) return s;
  std::string out;
  size_t pos = 0;
  while (pos < s.size()) {
    const size_t n = std::max<size_t>(1, Utf8SequenceLength(s, pos));
    const std::string next = out + s.substr(pos, n);
    if (DisplayWidth(next) + 1 > max_width) break;
    out = next;
    pos += n;
  }
  return out + "…";
}

}  // namespace

BindingTable Evaluate(const Query& query, const kg::GraphStore& store) {
  if (query.nodes.size() != query.edges.size() + 1 || query.returns.empty()) {
    throw InvalidArgument("malformed query pattern");
  }
  return Matcher(query, store).Run(query);
}

std::string CellText(const Cell& cell, const kg::GraphStore& store) {
  return cell.kind == Cell::Kind::kNode ? store.node(cell.id).name
                                        : store.edge(cell.id).relation;
}

std::string Format(const BindingTable& table, const kg::GraphStore& store,
                   Style style, size_t max_width) {
  if (style == Style::kJson) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::object();
      for (size_t c = 0; c < row.size(); ++c) {
        nlohmann::ordered_json cell;
        if (row[c].kind == Cell::Kind::kNode) {
          const kg::Node& n = store.node(row[c].id);
          cell = {{"id", n.id}, {"name", n.name}, {"concept", n.concept_name}};
        } else {
          const kg::Edge& e = store.edge(row[c].id);
          cell = {{"id", e.id},
                  {"relation", e.relation},
                  {"source", store.node(e.source).name},
                  {"target", store.node(e.target).name}};
        }
        r[table.columns[c]] = std::move(cell);
      }
      rows.push_back(std::move(r));
    }
    nlohmann::ordered_json doc = {{"columns", table.columns}, {"rows", rows}};
    return doc.dump(2) + "\n";
  }

  std::vector<std::vector<std::string>> text;
  text.push_back(table.columns);
  for (const auto& row : table.rows) {
    std::vector<std::string> r;
    for (const Cell& c : row) r.push_back(CellText(c, store));
    text.push_back(std::move(r));
  }

  std::string out;
  if (style == Style::kTsv) {
    for (const auto& r : text) {
      for (size_t c = 0; c < r.size(); ++c) {
        if (c > 0) out += '\t';
        out += EscapeTsv(r[c]);
      }
      out += '\n';
    }
    return out;
  }

  if (max_width < 2) max_width = 2;
  for (auto& r : text) {
    for (auto& cell : r) cell = Truncate(cell, max_width);
  }
  std::vector<size_t> widths(table.columns.size(), 0);
  for (const auto& r : text) {
    for (size_t c = 0; c < r.size(); ++c) {
      widths[c] = std::max(widths[c], DisplayWidth(r[c]));
    }
  }
  auto emit = [&](const std::vector<std::string>& r) {
    std::string line;
    for (size_t c = 0; c < r.size(); ++c) {
      if (c > 0) line += " | ";
      line += r[c];
      if (c + 1 < r.size()) line.append(widths[c] - DisplayWidth(r[c]), ' ');
    }
    out += line + "\n";
  };
  emit(text[0]);
  std::string rule;
  for (size_t c = 0; c < widths.size(); ++c) {
    if (c > 0) rule += "-+-";
    rule.append(widths[c], '-');
  }
  out += rule + "\n";
  for (size_t i = 1; i < text.size(); ++i) emit(text[i]);
  out += "(" + std::to_string(table.rows.size()) +
         (table.rows.size() == 1 ? " row)\n" : " rows)\n");
  return out;
}

std::vector<std::vector<std::string>> ParseTsv(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  for (const std::string& line : Split(text, '\n')) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    for (const std::string& f : Split(line, '\t')) row.push_back(UnescapeTsv(f));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace batik::query
