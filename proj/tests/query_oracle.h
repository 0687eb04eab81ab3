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

#ifndef BATIK_TESTS_QUERY_ORACLE_H_
#define BATIK_TESTS_QUERY_ORACLE_H_

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "batik/core/random.h"
#include "batik/kg/graph_store.h"
#include "batik/query/query.h"
#include "test_util.h"

// Random queries and graphs, plus a brute-force matcher to check the
// evaluator against.
namespace batik::testing {

using kg::GraphStore;
using query::BindingTable;
using query::Cell;
using query::Comparator;
using query::Condition;
using query::EdgeDirection;
using query::Query;

// Queries drawn from the grammar with awkward labels and literals.
inline Query RandomQuery(Rng& rng) {
  const std::vector<std::string> vars = {"n", "m", "p", "x1", "变量", "_v"};
  const std::vector<std::string> labels = {"", "", "纹样", "Pattern", "寓意",
                                           "Belong to", "match", "a-b", "蕴含",
                                           "我的，标签"};
  const std::vector<std::string> literals = {"", "x", "it's", "a\\b", "tab\tnl\n",
                                             "蝴蝶纹", "\"q\""};
  Query q;
  const size_t k = rng.Below(4);
  std::vector<std::string> bound;
  auto pick_var = [&](bool edge) -> std::string {
    if (rng.Bernoulli(0.3)) return "";
    std::string v = vars[rng.Below(vars.size())];
    if (edge || std::find(bound.begin(), bound.end(), v) == bound.end()) {
      v += edge ? "e" + std::to_string(q.edges.size()) : "";
    }
    if (std::find(bound.begin(), bound.end(), v) != bound.end() && edge) return "";
    return v;
  };
  std::set<std::string> node_vars, edge_vars;
  for (size_t i = 0; i <= k; ++i) {
    std::string v = pick_var(false);
    if (edge_vars.contains(v)) v.clear();
    if (!v.empty()) node_vars.insert(v);
    q.nodes.push_back({v, labels[rng.Below(labels.size())]});
    if (!v.empty()) bound.push_back(v);
    if (i < k) {
      std::string e = pick_var(true);
      if (node_vars.contains(e) || edge_vars.contains(e)) e.clear();
      if (!e.empty()) edge_vars.insert(e);
      q.edges.push_back({e, labels[rng.Below(labels.size())],
                         rng.Bernoulli(0.5) ? EdgeDirection::kRight
                                            : EdgeDirection::kLeft});
      if (!e.empty()) bound.push_back(e);
    }
  }
  if (bound.empty()) {
    q.nodes[0].var = "n";
    bound.push_back("n");
    node_vars.insert("n");
  }
  const size_t conds = rng.Below(3);
  for (size_t i = 0; i < conds; ++i) {
    const std::string& v = bound[rng.Below(bound.size())];
    const bool edge = edge_vars.contains(v);
    q.where.push_back({v, edge || rng.Bernoulli(0.5) ? "name" : "concept",
                       static_cast<Comparator>(rng.Below(3)),
                       literals[rng.Below(literals.size())]});
  }
  std::set<std::string> distinct(bound.begin(), bound.end());
  for (const auto& v : distinct) {
    if (q.returns.empty() || rng.Bernoulli(0.5)) q.returns.push_back(v);
  }
  return q;
}

// Edge-tuple enumeration: every assignment of stored edges to the pattern's
// edge slots, then node slots are read off the endpoints.
inline BindingTable Oracle(const Query& q, const GraphStore& g) {
  const auto& schema = g.schema();
  auto node_ok = [&](size_t i, kg::NodeId n) {
    return q.nodes[i].label.empty() ||
           g.node(n).concept_name == *schema.ResolveConcept(q.nodes[i].label);
  };
  auto cond_ok = [&](const Condition& c, const std::string& value, bool edge) {
    std::string lit = c.literal;
    if (c.op != Comparator::kContains) {
      if (edge) {
        if (auto r = schema.ResolveRelation(lit)) lit = *r;
      } else if (c.property == "concept") {
        if (auto k = schema.ResolveConcept(lit)) lit = *k;
      }
    }
    if (c.op == Comparator::kEq) return value == lit;
    if (c.op == Comparator::kNe) return value != lit;
    return value.find(lit) != std::string::npos;
  };
  const size_t k = q.edges.size();
  std::set<std::vector<Cell>> rows;
  std::vector<size_t> pick(k, 0);
  const size_t m = g.edge_count();
  const size_t outer = k == 0 ? g.node_count() : 1;
  for (size_t start = 0; start < outer; ++start) {
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      bool ok = k > 0 ? m > 0 : true;
      std::vector<kg::NodeId> nodes(k + 1, -1);
      if (k == 0) nodes[0] = static_cast<kg::NodeId>(start);
      std::set<size_t> distinct(pick.begin(), pick.end());
      if (distinct.size() != k) ok = false;
      for (size_t i = 0; ok && i < k; ++i) {
        const kg::Edge& e = g.edge(pick[i]);
        if (!q.edges[i].label.empty() &&
            e.relation != *schema.ResolveRelation(q.edges[i].label)) {
          ok = false;
        }
        const bool right = q.edges[i].direction == EdgeDirection::kRight;
        const kg::NodeId from = right ? e.source : e.target;
        const kg::NodeId to = right ? e.target : e.source;
        if (nodes[i] >= 0 && nodes[i] != from) ok = false;
        nodes[i] = from;
        nodes[i + 1] = to;
      }
      for (size_t i = 0; ok && i <= k; ++i) ok = node_ok(i, nodes[i]);
      std::map<std::string, Cell> bind;
      for (size_t i = 0; ok && i <= k; ++i) {
        const auto& v = q.nodes[i].var;
        if (v.empty()) continue;
        const Cell c{Cell::Kind::kNode, nodes[i]};
        auto [it, fresh] = bind.emplace(v, c);
        if (!fresh && it->second != c) ok = false;
      }
      for (size_t i = 0; ok && i < k; ++i) {
        if (!q.edges[i].var.empty()) {
          bind[q.edges[i].var] = {Cell::Kind::kEdge, static_cast<int64_t>(pick[i])};
        }
      }
      for (const Condition& c : q.where) {
        if (!ok) break;
        const Cell cell = bind.at(c.var);
        if (cell.kind == Cell::Kind::kEdge) {
          ok = cond_ok(c, g.edge(cell.id).relation, true);
        } else {
          const kg::Node& n = g.node(cell.id);
          ok = cond_ok(c, c.property == "concept" ? n.concept_name : n.name, false);
        }
      }
      if (ok) {
        std::vector<Cell> row;
        for (const auto& r : q.returns) row.push_back(bind.at(r));
        rows.insert(row);
      }
      size_t i = 0;
      while (i < k && ++pick[i] == m) pick[i++] = 0;
      if (i == k || m == 0) break;
    }
  }
  return {q.returns, {rows.begin(), rows.end()}};
}

inline GraphStore RandomStore(Rng& rng) {
  GraphStore g(BatikSchema());
  const size_t n_pat = 2 + rng.Below(12);
  const size_t n_other = rng.Below(7);
  for (size_t i = 0; i < n_pat; ++i) g.UpsertNode("p" + std::to_string(i), "纹样");
  const char* others[] = {"寓意", "崇拜意识", "原型来源"};
  for (size_t i = 0; i < n_other; ++i) {
    g.UpsertNode("o" + std::to_string(i), others[rng.Below(3)]);
  }
  const size_t edges = rng.Below(30);
  for (size_t i = 0; i < edges; ++i) {
    const auto a = static_cast<kg::NodeId>(rng.Below(n_pat));
    const auto b = static_cast<kg::NodeId>(rng.Below(g.node_count()));
    const std::string& c = g.node(b).concept_name;
    std::string rel = c == "寓意" ? "蕴含" : c == "崇拜意识" ? "崇拜"
                    : c == "原型来源" ? "来源"
                    : (rng.Bernoulli(0.5) ? "属于" : "同义");
    g.InsertEdge(a, rel, b);
  }
  return g;
}

inline Query RandomEvalQuery(Rng& rng) {
  const std::vector<std::string> node_labels = {"", "", "纹样", "Meaning", "Source"};
  const std::vector<std::string> edge_labels = {"", "", "属于", "同义", "Mean"};
  const std::vector<std::string> node_vars = {"a", "b", "c", ""};
  const std::vector<std::string> literals = {"p1", "p", "o0", "纹样", "Meaning", "1"};
  Query q;
  const size_t k = rng.Below(4);
  for (size_t i = 0; i <= k; ++i) {
    q.nodes.push_back({node_vars[rng.Below(node_vars.size())],
                       node_labels[rng.Below(node_labels.size())]});
    if (i < k) {
      q.edges.push_back({rng.Bernoulli(0.6) ? "e" + std::to_string(i) : "",
                         edge_labels[rng.Below(edge_labels.size())],
                         rng.Bernoulli(0.7) ? EdgeDirection::kRight
                                            : EdgeDirection::kLeft});
    }
  }
  std::vector<std::string> vars;
  for (const auto& n : q.nodes) {
    if (!n.var.empty() && std::find(vars.begin(), vars.end(), n.var) == vars.end()) {
      vars.push_back(n.var);
    }
  }
  for (const auto& e : q.edges) {
    if (!e.var.empty()) vars.push_back(e.var);
  }
  if (vars.empty()) {
    q.nodes[0].var = "a";
    vars.push_back("a");
  }
  for (size_t i = rng.Below(3); i > 0; --i) {
    const std::string& v = vars[rng.Below(vars.size())];
    const bool edge = v[0] == 'e';
    q.where.push_back({v, edge || rng.Bernoulli(0.6) ? "name" : "concept",
                       static_cast<Comparator>(rng.Below(3)),
                       literals[rng.Below(literals.size())]});
  }
  for (const auto& v : vars) {
    if (q.returns.empty() || rng.Bernoulli(0.6)) q.returns.push_back(v);
  }
  return q;
}

}  // namespace batik::testing

#endif  // BATIK_TESTS_QUERY_ORACLE_H_
