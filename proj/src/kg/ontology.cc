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

#include "batik/kg/ontology.h"

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::kg {

namespace {

using nlohmann::json;

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool NameMatches(std::string_view query, const std::string& name,
                 const std::vector<std::string>& aliases) {
  if (query == name) return true;
  const std::string q = AsciiLower(query);
  if (q == AsciiLower(name)) return true;
  return std::any_of(aliases.begin(), aliases.end(),
                     [&](const std::string& a) { return AsciiLower(a) == q; });
}

std::vector<std::string> Aliases(const json& j) {
  std::vector<std::string> out;
  if (j.contains("aliases")) {
    for (const auto& a : j.at("aliases")) out.push_back(a.get<std::string>());
  }
  return out;
}

}  // namespace

void OntologySchema::AddConcept(ConceptDef c) {
  if (c.name.empty()) throw SchemaError("concept with empty name");
  for (const std::string& n : c.aliases) {
    if (ResolveConcept(n)) throw SchemaError("duplicate concept name: " + n);
  }
  if (ResolveConcept(c.name)) {
    throw SchemaError("duplicate concept: " + c.name);
  }
  concepts_.push_back(std::move(c));
}

void OntologySchema::AddRelation(RelationDef r) {
  if (r.name.empty()) throw SchemaError("relation with empty name");
  if (ResolveRelation(r.name)) throw SchemaError("duplicate relation: " + r.name);
  for (const std::string& n : r.aliases) {
    if (ResolveRelation(n)) throw SchemaError("duplicate relation name: " + n);
  }
  const auto domain = ResolveConcept(r.domain);
  const auto range = ResolveConcept(r.range);
  if (!domain) {
    throw SchemaError("relation " + r.name + ": undeclared domain concept " +
                      r.domain);
  }
  if (!range) {
    throw SchemaError("relation " + r.name + ": undeclared range concept " +
                      r.range);
  }
  r.domain = *domain;
  r.range = *range;
  relations_.push_back(std::move(r));
}

void OntologySchema::AddNormalization(NormalizationEntry e) {
  const auto concept_name = ResolveConcept(e.object_concept);
  const auto relation = ResolveRelation(e.relation);
  if (!concept_name) {
    throw SchemaError("normalization: undeclared concept " + e.object_concept);
  }
  if (!relation) {
    throw SchemaError("normalization: undeclared relation " + e.relation);
  }
  e.object_concept = *concept_name;
  e.relation = *relation;
  for (const NormalizationEntry& n : normalization_) {
    if (n.raw == e.raw && n.object_concept == e.object_concept) {
      throw SchemaError("normalization: duplicate key (" + e.raw + ", " +
                        e.object_concept + ")");
    }
  }
  normalization_.push_back(std::move(e));
}

OntologySchema OntologySchema::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(std::string("ontology: ") + e.what());
  }
  OntologySchema s;
  try {
    if (doc.value("format", "batik-ontology") != "batik-ontology") {
      throw SchemaError("ontology: unexpected format tag");
    }
    if (doc.value("version", 1) != 1) {
      throw SchemaError("ontology: unsupported version");
    }
    for (const auto& c : doc.at("concepts")) {
      s.AddConcept({c.at("name").get<std::string>(), Aliases(c),
                    c.value("color", "")});
    }
    for (const auto& r : doc.value("relations", json::array())) {
      s.AddRelation({r.at("name").get<std::string>(), Aliases(r),
                     r.at("domain").get<std::string>(),
                     r.at("range").get<std::string>()});
    }
    for (const auto& n : doc.value("normalization", json::array())) {
      s.AddNormalization({n.at("raw").get<std::string>(),
                          n.at("object").get<std::string>(),
                          n.at("relation").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("ontology: ") + e.what());
  }
  if (s.relations_.empty()) s.warnings_.push_back("ontology declares no relations");
  return s;
}

OntologySchema OntologySchema::Load(const std::filesystem::path& path) {
  return FromJson(ReadFile(path));
}

std::string OntologySchema::ToJson() const {
  json doc;
  doc["format"] = "batik-ontology";
  doc["version"] = 1;
  doc["concepts"] = json::array();
  for (const ConceptDef& c : concepts_) {
    json j{{"name", c.name}, {"aliases", c.aliases}};
    if (!c.color.empty()) j["color"] = c.color;
    doc["concepts"].push_back(std::move(j));
  }
  doc["relations"] = json::array();
  for (const RelationDef& r : relations_) {
    doc["relations"].push_back({{"name", r.name},
                                {"aliases", r.aliases},
                                {"domain", r.domain},
                                {"range", r.range}});
  }
  doc["normalization"] = json::array();
  for (const NormalizationEntry& n : normalization_) {
    doc["normalization"].push_back(
        {{"raw", n.raw}, {"object", n.object_concept}, {"relation", n.relation}});
  }
  return doc.dump(2);
}

std::optional<std::string> OntologySchema::ResolveConcept(
    std::string_view name) const {
  for (const ConceptDef& c : concepts_) {
    if (NameMatches(name, c.name, c.aliases)) return c.name;
  }
  return std::nullopt;
}

std::optional<std::string> OntologySchema::ResolveRelation(
    std::string_view name) const {
  for (const RelationDef& r : relations_) {
    if (NameMatches(name, r.name, r.aliases)) return r.name;
  }
  return std::nullopt;
}

const ConceptDef* OntologySchema::FindConcept(std::string_view canonical) const {
  for (const ConceptDef& c : concepts_) {
    if (c.name == canonical) return &c;
  }
  return nullptr;
}

const RelationDef* OntologySchema::FindRelation(
    std::string_view canonical) const {
  for (const RelationDef& r : relations_) {
    if (r.name == canonical) return &r;
  }
  return nullptr;
}

std::optional<std::string> OntologySchema::MapPredicate(
    std::string_view raw, std::string_view object_concept) const {
  for (const NormalizationEntry& n : normalization_) {
    if (n.raw == raw && n.object_concept == object_concept) return n.relation;
  }
  return ResolveRelation(raw);
}

}  // namespace batik::kg
