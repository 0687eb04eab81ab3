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

#ifndef BATIK_EXTRACT_RELATIONS_H_
#define BATIK_EXTRACT_RELATIONS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "batik/extract/cluster.h"
#include "batik/extract/parse.h"
#include "batik/kg/ontology.h"

namespace batik::extract {

// subject --subject_deprel--> pivot <--object_deprel-- object  =>
// (subject, predicate, object). A pivot of "*" matches any word and a
// predicate of "*" emits the pivot's form.
struct ExtractionRule {
  std::string name;
  std::string subject_deprel;
  std::string pivot;
  std::string object_deprel;
  std::string predicate;

  friend bool operator==(const ExtractionRule&,
                         const ExtractionRule&) = default;
};

// One rule per line: "SBV 是 VOB → 是" (ASCII "->" also accepted). Blank
// lines and '#' comments skipped.
std::vector<ExtractionRule> ParseRules(std::string_view text);
std::vector<ExtractionRule> LoadRules(const std::filesystem::path& path);

struct RawTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  int sentence_id = 0;

  friend bool operator==(const RawTriple&, const RawTriple&) = default;
  friend auto operator<=>(const RawTriple&, const RawTriple&) = default;
};

// Applies every rule to every pivot. Coordinated words (COO) share the
// attachment of the word they coordinate with. Subject and object must be
// distinct entities. Output order: rule, pivot index, subject index, object
// index.
std::vector<RawTriple> ExtractRelations(const ParsedSentence& sentence,
                                        const EntitySet& entities,
                                        const std::vector<ExtractionRule>& rules);

// Entity name -> canonical concept.
class EntityTypes {
 public:
  void Set(std::string_view entity, std::string_view concept_name);
  std::optional<std::string> Get(std::string_view entity) const;
  size_t size() const { return types_.size(); }
  const std::map<std::string, std::string>& all() const { return types_; }

 private:
  std::map<std::string, std::string> types_;
};

// "entity<TAB>concept" lines; concepts may be aliases and are resolved
// against the schema.
EntityTypes LoadEntityTypes(const std::filesystem::path& path,
                            const kg::OntologySchema& schema);
EntityTypes ParseEntityTypes(std::string_view text,
                             const kg::OntologySchema& schema);

struct NormalizedTriple {
  std::string subject;
  std::string subject_concept;
  std::string predicate;
  std::string object;
  std::string object_concept;
  int sentence_id = 0;
  bool normalized = false;
  // Why normalization failed; empty when normalized.
  std::string note;

  RawTriple raw() const { return {subject, predicate, object, sentence_id}; }

  friend bool operator==(const NormalizedTriple&,
                         const NormalizedTriple&) = default;
};

// Maps the raw predicate through the ontology's normalization table keyed
// by (raw predicate, object concept), then checks the relation's domain and
// range against the entity types. Failures come back with normalized=false
// and the raw predicate untouched.
NormalizedTriple Normalize(const RawTriple& raw,
                           const kg::OntologySchema& schema,
                           const EntityTypes& types);

struct MultiValued {
  std::string subject;
  std::string object;
  std::vector<std::string> predicates;

  friend bool operator==(const MultiValued&, const MultiValued&) = default;
};

struct DedupResult {
  std::vector<NormalizedTriple> kept;
  size_t duplicates_removed = 0;
  std::vector<MultiValued> multivalued;
};

// Collapses exact (subject, predicate, object) repeats, keeping the first
// occurrence, and flags (subject, object) pairs carrying more than one
// predicate.
DedupResult Deduplicate(const std::vector<NormalizedTriple>& triples);

// "subject<TAB>predicate<TAB>object" lines; '#' comments.
std::vector<RawTriple> ParseTriples(std::string_view text);
std::string FormatTriples(const std::vector<NormalizedTriple>& triples);

}  // namespace batik::extract

#endif  // BATIK_EXTRACT_RELATIONS_H_
