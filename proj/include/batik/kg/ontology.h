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

#ifndef BATIK_KG_ONTOLOGY_H_
#define BATIK_KG_ONTOLOGY_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace batik::kg {

struct ConceptDef {
  std::string name;
  std::vector<std::string> aliases;
  std::string color;  // DOT fill color; assigned from a palette when empty

  friend bool operator==(const ConceptDef&, const ConceptDef&) = default;
};

struct RelationDef {
  std::string name;
  std::vector<std::string> aliases;
  std::string domain;  // canonical concept names
  std::string range;

  friend bool operator==(const RelationDef&, const RelationDef&) = default;
};

// Maps a raw predicate (the pivot word of an extraction rule) to a relation
// given the concept of the object entity.
struct NormalizationEntry {
  std::string raw;
  std::string object_concept;
  std::string relation;

  friend bool operator==(const NormalizationEntry&,
                         const NormalizationEntry&) = default;
};

class OntologySchema {
 public:
  OntologySchema() = default;

  // JSON document:
  //   {"format": "batik-ontology", "version": 1,
  //    "concepts": [{"name", "aliases"?, "color"?}],
  //    "relations": [{"name", "aliases"?, "domain", "range"}],
  //    "normalization": [{"raw", "object", "relation"}]?}
  // Domains, ranges and normalization targets may use aliases. Throws
  // SyntaxError for malformed JSON and SchemaError for integrity problems.
  static OntologySchema FromJson(std::string_view text);
  static OntologySchema Load(const std::filesystem::path& path);
  std::string ToJson() const;

  // Programmatic construction; same checks as FromJson.
  void AddConcept(ConceptDef c);
  void AddRelation(RelationDef r);
  void AddNormalization(NormalizationEntry e);

  const std::vector<ConceptDef>& concepts() const { return concepts_; }
  const std::vector<RelationDef>& relations() const { return relations_; }
  const std::vector<NormalizationEntry>& normalization() const {
    return normalization_;
  }
  // Non-fatal findings, e.g. an empty relation list.
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Canonical name for a name or alias (ASCII aliases match
  // case-insensitively).
  std::optional<std::string> ResolveConcept(std::string_view name) const;
  std::optional<std::string> ResolveRelation(std::string_view name) const;

  const ConceptDef* FindConcept(std::string_view canonical) const;
  const RelationDef* FindRelation(std::string_view canonical) const;

  // Relation for (raw predicate, object concept) from the normalization
  // table, falling back to the raw predicate itself when it already names a
  // relation.
  std::optional<std::string> MapPredicate(std::string_view raw,
                                          std::string_view object_concept) const;

  friend bool operator==(const OntologySchema& a, const OntologySchema& b) {
    return a.concepts_ == b.concepts_ && a.relations_ == b.relations_ &&
           a.normalization_ == b.normalization_;
  }

 private:
  std::vector<ConceptDef> concepts_;
  std::vector<RelationDef> relations_;
  std::vector<NormalizationEntry> normalization_;
  std::vector<std::string> warnings_;
};

}  // namespace batik::kg

#endif  // BATIK_KG_ONTOLOGY_H_
