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

#ifndef BATIK_KG_GRAPH_STORE_H_
#define BATIK_KG_GRAPH_STORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "batik/kg/ontology.h"

namespace batik::kg {

using NodeId = int64_t;
using EdgeId = int64_t;
using Attributes = std::map<std::string, std::string>;

struct Node {
  NodeId id = 0;
  std::string name;
  std::string concept_name;
  Attributes attributes;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  EdgeId id = 0;
  NodeId source = 0;
  std::string relation;
  NodeId target = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Direction { kOut, kIn, kBoth };

struct Adjacent {
  EdgeId edge;
  std::string relation;
  NodeId neighbor;
  bool outgoing;

  friend bool operator==(const Adjacent&, const Adjacent&) = default;
};

// Typed property graph. Node identity is (name, concept); ids are dense and
// assigned in insertion order. There is no deletion.
class GraphStore {
 public:
  GraphStore() = default;
  explicit GraphStore(OntologySchema schema);

  const OntologySchema& schema() const { return schema_; }

  // Returns the existing id for a repeated (name, concept); attributes are
  // merged. The concept may be an alias.
  NodeId UpsertNode(std::string_view name, std::string_view concept_name,
                    const Attributes& attributes = {});

  // Exact repeats return the existing edge id. Missing endpoints are created
  // with the relation's domain/range concept; a name that exists only under
  // other concepts is a SchemaError.
  EdgeId InsertEdge(std::string_view subject, std::string_view relation,
                    std::string_view object);
  EdgeId InsertEdge(NodeId source, std::string_view relation, NodeId target);

  std::optional<NodeId> FindNode(std::string_view name,
                                 std::string_view concept_name) const;
  std::vector<NodeId> NodesNamed(std::string_view name) const;
  const std::vector<NodeId>& NodesOfConcept(std::string_view canonical) const;
  const std::vector<EdgeId>& EdgesOfRelation(std::string_view canonical) const;
  const std::vector<EdgeId>& OutEdges(NodeId id) const { return out_[id]; }
  const std::vector<EdgeId>& InEdges(NodeId id) const { return in_[id]; }

  // Adjacency of every node named `name` (optionally restricted to one
  // concept) in edge insertion order; kBoth lists outgoing then incoming.
  // Unknown entity or relation is an error.
  std::vector<Adjacent> Neighbors(
      std::string_view name, std::optional<std::string_view> relation,
      Direction direction,
      std::optional<std::string_view> concept_name = std::nullopt) const;

  const Node& node(NodeId id) const { return nodes_[id]; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  size_t node_count() const { return nodes_.size(); }
  size_t edge_count() const { return edges_.size(); }

  // Full integrity check: endpoints, declared relations, domain/range,
  // index consistency. Throws SchemaError.
  void Validate() const;

  friend bool operator==(const GraphStore& a, const GraphStore& b) {
    return a.schema_ == b.schema_ && a.nodes_ == b.nodes_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::string ResolveConceptOrThrow(std::string_view c) const;
  std::string ResolveRelationOrThrow(std::string_view r) const;
  NodeId ResolveEndpoint(std::string_view name, const std::string& concept_name);

  OntologySchema schema_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<std::pair<std::string, std::string>, NodeId> by_key_;
  std::unordered_map<std::string, std::vector<NodeId>> by_name_;
  std::unordered_map<std::string, std::vector<NodeId>> by_concept_;
  std::unordered_map<std::string, std::vector<EdgeId>> by_relation_;
  std::map<std::tuple<NodeId, std::string, NodeId>, EdgeId> edge_key_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

// JSON lines: a header record {"format": "batik-kg", "version": 1,
// "nodes": N, "edges": E, "schema": {...}}, then N node records, then E edge
// records. Load errors name the 1-based record number.
std::string ToJsonl(const GraphStore& store);
GraphStore FromJsonl(std::string_view text);
void SaveStore(const GraphStore& store, const std::filesystem::path& path);
GraphStore LoadStore(const std::filesystem::path& path);

// Graphviz digraph; one fill color per concept, edges labelled by relation.
std::string ExportDot(const GraphStore& store);
// Single JSON document {"schema", "nodes", "edges"} mirroring the JSONL
// records.
std::string ExportJson(const GraphStore& store);
GraphStore ImportJson(std::string_view text);

}  // namespace batik::kg

#endif  // BATIK_KG_GRAPH_STORE_H_
