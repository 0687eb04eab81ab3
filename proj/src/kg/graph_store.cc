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

#include "batik/kg/graph_store.h"

#include <json.hpp>
#include <set>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::kg {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

const std::vector<NodeId> kNoNodes;
const std::vector<EdgeId> kNoEdges;

const char* const kPalette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072",
                                "#80b1d3", "#fdb462", "#b3de69", "#fccde5"};

}  // namespace

GraphStore::GraphStore(OntologySchema schema) : schema_(std::move(schema)) {}

std::string GraphStore::ResolveConceptOrThrow(std::string_view c) const {
  auto resolved = schema_.ResolveConcept(c);
  if (!resolved) throw SchemaError("unknown concept: " + std::string(c));
  return *resolved;
}

std::string GraphStore::ResolveRelationOrThrow(std::string_view r) const {
  auto resolved = schema_.ResolveRelation(r);
  if (!resolved) throw SchemaError("unknown relation: " + std::string(r));
  return *resolved;
}

NodeId GraphStore::UpsertNode(std::string_view name,
                              std::string_view concept_name,
                              const Attributes& attributes) {
  if (name.empty()) throw InvalidArgument("node with empty name");
  const std::string c = ResolveConceptOrThrow(concept_name);
  const auto key = std::make_pair(std::string(name), c);
  if (auto it = by_key_.find(key); it != by_key_.end()) {
    for (const auto& [k, v] : attributes) nodes_[it->second].attributes[k] = v;
    return it->second;
  }
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({id, std::string(name), c, attributes});
  by_key_.emplace(key, id);
  by_name_[key.first].push_back(id);
  by_concept_[c].push_back(id);
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

NodeId GraphStore::ResolveEndpoint(std::string_view name,
                                   const std::string& concept_name) {
  if (auto id = FindNode(name, concept_name)) return *id;
  const auto others = NodesNamed(name);
  if (!others.empty()) {
    throw SchemaError("concept violation: " + std::string(name) + " is " +
                      nodes_[others.front()].concept_name + ", relation needs " +
                      concept_name);
  }
  return UpsertNode(name, concept_name);
}

EdgeId GraphStore::InsertEdge(std::string_view subject,
                              std::string_view relation,
                              std::string_view object) {
  const std::string r = ResolveRelationOrThrow(relation);
  const RelationDef* def = schema_.FindRelation(r);
  // Check both endpoints before creating either, so a rejected edge leaves
  // the store untouched.
  for (auto [name, c] : {std::pair{subject, def->domain},
                         std::pair{object, def->range}}) {
    if (!FindNode(name, c) && !NodesNamed(name).empty()) {
      throw SchemaError("concept violation: " + std::string(name) + " is " +
                        nodes_[NodesNamed(name).front()].concept_name +
                        ", " + r + " needs " + c);
    }
  }
  const NodeId s = ResolveEndpoint(subject, def->domain);
  const NodeId o = ResolveEndpoint(object, def->range);
  return InsertEdge(s, r, o);
}

EdgeId GraphStore::InsertEdge(NodeId source, std::string_view relation,
                              NodeId target) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if (source < 0 || source >= n || target < 0 || target >= n) {
    throw InvalidArgument("edge endpoint does not exist");
  }
  const std::string r = ResolveRelationOrThrow(relation);
  const RelationDef* def = schema_.FindRelation(r);
  if (nodes_[source].concept_name != def->domain) {
    throw SchemaError("domain violation: " + nodes_[source].name + " (" +
                      nodes_[source].concept_name + ") cannot be subject of " +
                      r);
  }
  if (nodes_[target].concept_name != def->range) {
    throw SchemaError("range violation: " + nodes_[target].name + " (" +
                      nodes_[target].concept_name + ") cannot be object of " +
                      r);
  }
  const auto key = std::make_tuple(source, r, target);
  if (auto it = edge_key_.find(key); it != edge_key_.end()) return it->second;
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back({id, source, r, target});
  edge_key_.emplace(key, id);
  by_relation_[r].push_back(id);
  out_[source].push_back(id);
  in_[target].push_back(id);
  return id;
}

std::optional<NodeId> GraphStore::FindNode(std::string_view name,
                                           std::string_view concept_name) const {
  const auto c = schema_.ResolveConcept(concept_name);
  if (!c) return std::nullopt;
  auto it = by_key_.find({std::string(name), *c});
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> GraphStore::NodesNamed(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? std::vector<NodeId>{} : it->second;
}

const std::vector<NodeId>& GraphStore::NodesOfConcept(
    std::string_view canonical) const {
  auto it = by_concept_.find(std::string(canonical));
  return it == by_concept_.end() ? kNoNodes : it->second;
}

const std::vector<EdgeId>& GraphStore::EdgesOfRelation(
    std::string_view canonical) const {
  auto it = by_relation_.find(std::string(canonical));
  return it == by_relation_.end() ? kNoEdges : it->second;
}

std::vector<Adjacent> GraphStore::Neighbors(
    std::string_view name, std::optional<std::string_view> relation,
    Direction direction, std::optional<std::string_view> concept_name) const {
  std::vector<NodeId> ids;
  if (concept_name) {
    if (auto id = FindNode(name, *concept_name)) ids.push_back(*id);
  } else {
    ids = NodesNamed(name);
  }
  if (ids.empty()) throw InvalidArgument("unknown entity: " + std::string(name));
  std::optional<std::string> rel;
  if (relation) rel = ResolveRelationOrThrow(*relation);
  std::vector<Adjacent> out;
  for (NodeId id : ids) {
    if (direction != Direction::kIn) {
      for (EdgeId e : out_[id]) {
        if (!rel || edges_[e].relation == *rel) {
          out.push_back({e, edges_[e].relation, edges_[e].target, true});
        }
      }
    }
    if (direction != Direction::kOut) {
      for (EdgeId e : in_[id]) {
        if (!rel || edges_[e].relation == *rel) {
          out.push_back({e, edges_[e].relation, edges_[e].source, false});
        }
      }
    }
  }
  return out;
}

void GraphStore::Validate() const {
  std::set<std::pair<std::string, std::string>> seen;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.id != static_cast<NodeId>(i)) throw SchemaError("node id mismatch");
    if (!schema_.FindConcept(n.concept_name)) {
      throw SchemaError("node " + n.name + " has undeclared concept " +
                        n.concept_name);
    }
    if (!seen.insert({n.name, n.concept_name}).second) {
      throw SchemaError("duplicate node " + n.name);
    }
  }
  const auto n = static_cast<NodeId>(nodes_.size());
  for (size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != static_cast<EdgeId>(i)) throw SchemaError("edge id mismatch");
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n) {
      throw SchemaError("dangling edge " + std::to_string(e.id));
    }
    const RelationDef* def = schema_.FindRelation(e.relation);
    if (!def) throw SchemaError("undeclared relation " + e.relation);
    if (nodes_[e.source].concept_name != def->domain ||
        nodes_[e.target].concept_name != def->range) {
      throw SchemaError("edge " + std::to_string(e.id) +
                        " violates domain/range of " + e.relation);
    }
  }
  size_t indexed = 0;
  for (const auto& [r, ids] : by_relation_) indexed += ids.size();
  if (indexed != edges_.size()) throw SchemaError("relation index out of sync");
}

namespace {

json NodeRecord(const Node& n) {
  return {{"type", "node"},
          {"id", n.id},
          {"name", n.name},
          {"concept", n.concept_name},
          {"attrs", n.attributes}};
}

json EdgeRecord(const Edge& e) {
  return {{"type", "edge"},
          {"id", e.id},
          {"source", e.source},
          {"relation", e.relation},
          {"target", e.target}};
}

void AddNodeRecord(GraphStore& g, const json& r) {
  if (r.at("type") != "node") throw SchemaError("expected a node record");
  const NodeId id = g.UpsertNode(r.at("name").get<std::string>(),
                                 r.at("concept").get<std::string>(),
                                 r.value("attrs", Attributes{}));
  if (id != r.at("id").get<NodeId>()) {
    throw SchemaError("node id out of sequence or duplicated");
  }
}

void AddEdgeRecord(GraphStore& g, const json& r) {
  if (r.at("type") != "edge") throw SchemaError("expected an edge record");
  const EdgeId id = g.InsertEdge(r.at("source").get<NodeId>(),
                                 r.at("relation").get<std::string>(),
                                 r.at("target").get<NodeId>());
  if (id != r.at("id").get<EdgeId>()) {
    throw SchemaError("edge id out of sequence or duplicated");
  }
}

}  // namespace

std::string ToJsonl(const GraphStore& store) {
  std::string out;
  json header{{"format", "batik-kg"},
              {"version", kFormatVersion},
              {"nodes", store.node_count()},
              {"edges", store.edge_count()},
              {"schema", json::parse(store.schema().ToJson())}};
  out += header.dump() + "\n";
  for (const Node& n : store.nodes()) out += NodeRecord(n).dump() + "\n";
  for (const Edge& e : store.edges()) out += EdgeRecord(e).dump() + "\n";
  return out;
}

GraphStore FromJsonl(std::string_view text) {
  std::vector<std::string> lines = Split(text, '\n');
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw IoError("store: empty file (record 1 missing)");
  auto fail = [](size_t record, const std::string& what) {
    return IoError("store record " + std::to_string(record) + ": " + what);
  };
  json header;
  try {
    header = json::parse(lines[0]);
  } catch (const json::exception& e) {
    throw fail(1, std::string("corrupted header: ") + e.what());
  }
  if (header.value("format", "") != "batik-kg") {
    throw fail(1, "not a batik-kg store");
  }
  if (header.value("version", -1) != kFormatVersion) {
    throw fail(1, "unsupported version " + header.value("version", json()).dump());
  }
  size_t n_nodes = 0;
  size_t n_edges = 0;
  GraphStore g;
  try {
    n_nodes = header.at("nodes").get<size_t>();
    n_edges = header.at("edges").get<size_t>();
    g = GraphStore(OntologySchema::FromJson(header.at("schema").dump()));
  } catch (const json::exception& e) {
    throw fail(1, std::string("bad header: ") + e.what());
  } catch (const Error& e) {
    throw fail(1, e.what());
  }
  const size_t expected = 1 + n_nodes + n_edges;
  for (size_t i = 1; i < lines.size(); ++i) {
    const size_t record = i + 1;
    if (i >= expected) throw fail(record, "unexpected extra record");
    try {
      const json r = json::parse(lines[i]);
      if (i <= n_nodes) {
        AddNodeRecord(g, r);
      } else {
        AddEdgeRecord(g, r);
      }
    } catch (const json::exception& e) {
      throw fail(record, std::string("corrupted record: ") + e.what());
    } catch (const Error& e) {
      throw fail(record, e.what());
    }
  }
  if (lines.size() < expected) {
    throw fail(lines.size() + 1, "truncated store, expected " +
                                     std::to_string(expected) + " records");
  }
  return g;
}

void SaveStore(const GraphStore& store, const std::filesystem::path& path) {
  // Write-then-rename so readers never observe a partial file.
  const std::filesystem::path tmp = path.string() + ".tmp";
  WriteFile(tmp, ToJsonl(store));
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

GraphStore LoadStore(const std::filesystem::path& path) {
  return FromJsonl(ReadFile(path));
}

namespace {

std::string DotQuote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string ExportDot(const GraphStore& store) {
  std::string out = "digraph bpkg {\n  node [style=filled];\n";
  const auto& concepts = store.schema().concepts();
  auto color_of = [&](const std::string& c) -> std::string {
    for (size_t i = 0; i < concepts.size(); ++i) {
      if (concepts[i].name == c) {
        return concepts[i].color.empty()
                   ? kPalette[i % std::size(kPalette)]
                   : concepts[i].color;
      }
    }
    return "#ffffff";
  };
  for (const Node& n : store.nodes()) {
    out += "  n" + std::to_string(n.id) + " [label=" + DotQuote(n.name) +
           ", class=" + DotQuote(n.concept_name) +
           ", fillcolor=" + DotQuote(color_of(n.concept_name)) + "];\n";
  }
  for (const Edge& e : store.edges()) {
    out += "  n" + std::to_string(e.source) + " -> n" +
           std::to_string(e.target) + " [label=" + DotQuote(e.relation) +
           "];\n";
  }
  return out + "}\n";
}

std::string ExportJson(const GraphStore& store) {
  json doc;
  doc["format"] = "batik-kg";
  doc["version"] = kFormatVersion;
  doc["schema"] = json::parse(store.schema().ToJson());
  doc["nodes"] = json::array();
  for (const Node& n : store.nodes()) doc["nodes"].push_back(NodeRecord(n));
  doc["edges"] = json::array();
  for (const Edge& e : store.edges()) doc["edges"].push_back(EdgeRecord(e));
  return doc.dump(2) + "\n";
}

GraphStore ImportJson(std::string_view text) {
  try {
    const json doc = json::parse(text);
    GraphStore g(OntologySchema::FromJson(doc.at("schema").dump()));
    for (const auto& r : doc.at("nodes")) AddNodeRecord(g, r);
    for (const auto& r : doc.at("edges")) AddEdgeRecord(g, r);
    return g;
  } catch (const json::exception& e) {
    throw SyntaxError(std::string("graph json: ") + e.what());
  }
}

}  // namespace batik::kg
