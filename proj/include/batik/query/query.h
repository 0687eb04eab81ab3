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

#ifndef BATIK_QUERY_QUERY_H_
#define BATIK_QUERY_QUERY_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "batik/kg/graph_store.h"

namespace batik::query {

struct NodePattern {
  std::string var;    // may be empty
  std::string label;  // concept name or alias, may be empty

  friend bool operator==(const NodePattern&, const NodePattern&) = default;
};

enum class EdgeDirection { kRight, kLeft };  // -[]->  and  <-[]-

struct EdgePattern {
  std::string var;
  std::string label;  // relation name or alias, may be empty
  EdgeDirection direction = EdgeDirection::kRight;

  friend bool operator==(const EdgePattern&, const EdgePattern&) = default;
};

enum class Comparator { kEq, kNe, kContains };

struct Condition {
  std::string var;
  std::string property;  // name | concept
  Comparator op = Comparator::kEq;
  std::string literal;

  friend bool operator==(const Condition&, const Condition&) = default;
};

// MATCH n0 e0 n1 e1 ... nk [WHERE c (AND c)*] RETURN v (, v)*
struct Query {
  std::vector<NodePattern> nodes;  // k + 1
  std::vector<EdgePattern> edges;  // k
  std::vector<Condition> where;
  std::vector<std::string> returns;

  friend bool operator==(const Query&, const Query&) = default;
};

// Keywords are case-insensitive; string literals take single or double
// quotes with backslash escapes; labels may be any run of non-ASCII or
// identifier characters, or backquoted. Errors are SyntaxError with
// "line:column" in the message, including unbound or misused variables.
Query Parse(std::string_view text);

// Canonical text form; Parse(Print(q)) == q.
std::string Print(const Query& query);

struct Cell {
  enum class Kind { kNode, kEdge };
  Kind kind = Kind::kNode;
  int64_t id = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct BindingTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const BindingTable&, const BindingTable&) = default;
};

// Every homomorphic match of the chain (a node may bind several pattern
// variables; edges within one match are distinct), filtered by WHERE,
// projected onto RETURN, deduplicated and sorted by cell ids. A label that
// the schema does not declare is a SchemaError.
BindingTable Evaluate(const Query& query, const kg::GraphStore& store);

enum class Style { kAligned, kTsv, kJson };

// Node cells render as the entity name, edge cells as the relation name.
// Aligned text pads by display width and truncates cells wider than
// `max_width` columns with "…". TSV escapes tab, newline, CR and backslash.
std::string Format(const BindingTable& table, const kg::GraphStore& store,
                   Style style, size_t max_width = 32);

// Parses TSV produced by Format (header first).
std::vector<std::vector<std::string>> ParseTsv(std::string_view text);

// Text for one cell as used by the TSV and aligned styles.
std::string CellText(const Cell& cell, const kg::GraphStore& store);

}  // namespace batik::query

#endif  // BATIK_QUERY_QUERY_H_
