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

#include "batik/extract/relations.h"

#include <set>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::extract {

std::vector<ExtractionRule> ParseRules(std::string_view text) {
  std::vector<ExtractionRule> rules;
  size_t line_no = 0;
  for (const std::string& raw : Split(text, '\n')) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = SplitFields(line);
    auto fail = [&](const std::string& what) {
      return SyntaxError("rule line " + std::to_string(line_no) + ": " + what);
    };
    if (f.size() != 5 || (f[3] != "→" && f[3] != "->")) {
      throw fail("expected 'DEPREL pivot DEPREL → relation'");
    }
    if (!IsKnownDeprel(f[0]) || !IsKnownDeprel(f[2])) {
      throw fail("unknown dependency label");
    }
    rules.push_back({f[0] + "-" + f[1] + "-" + f[2], f[0], f[1], f[2], f[4]});
  }
  return rules;
}

std::vector<ExtractionRule> LoadRules(const std::filesystem::path& path) {
  return ParseRules(ReadFile(path));
}

namespace {

struct Attachment {
  int head;
  const std::string* deprel;
};

// Head and label a token is treated as having: conjuncts inherit from the
// word they coordinate with.
Attachment Effective(const ParsedSentence& s, int index) {
  const ParsedToken* t = &s.tokens[index - 1];
  while (t->deprel == "COO" && t->head != 0) t = &s.tokens[t->head - 1];
  return {t->head, &t->deprel};
}

}  // namespace

std::vector<RawTriple> ExtractRelations(
    const ParsedSentence& sentence, const EntitySet& entities,
    const std::vector<ExtractionRule>& rules) {
  ValidateSentence(sentence);
  const int n = static_cast<int>(sentence.tokens.size());
  std::vector<Attachment> eff;
  eff.reserve(n);
  for (int i = 1; i <= n; ++i) eff.push_back(Effective(sentence, i));
  std::vector<RawTriple> out;
  for (const ExtractionRule& rule : rules) {
    for (const ParsedToken& pivot : sentence.tokens) {
      if (rule.pivot != "*" && pivot.form != rule.pivot) continue;
      std::vector<int> subjects;
      std::vector<int> objects;
      for (int i = 1; i <= n; ++i) {
        if (i == pivot.index || eff[i - 1].head != pivot.index) continue;
        if (!entities.Contains(sentence.tokens[i - 1].form)) continue;
        if (*eff[i - 1].deprel == rule.subject_deprel) subjects.push_back(i);
        if (*eff[i - 1].deprel == rule.object_deprel) objects.push_back(i);
      }
      const std::string& predicate =
          rule.predicate == "*" ? pivot.form : rule.predicate;
      for (int s : subjects) {
        for (int o : objects) {
          const std::string& sf = sentence.tokens[s - 1].form;
          const std::string& of = sentence.tokens[o - 1].form;
          if (s == o || sf == of) continue;
          out.push_back({sf, predicate, of, sentence.id});
        }
      }
    }
  }
  return out;
}

void EntityTypes::Set(std::string_view entity, std::string_view concept_name) {
  types_[std::string(entity)] = std::string(concept_name);
}

std::optional<std::string> EntityTypes::Get(std::string_view entity) const {
  auto it = types_.find(std::string(entity));
  if (it == types_.end()) return std::nullopt;
  return it->second;
}

EntityTypes ParseEntityTypes(std::string_view text,
                             const kg::OntologySchema& schema) {
  EntityTypes types;
  size_t line_no = 0;
  for (const std::string& raw : Split(text, '\n')) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = Split(line, '\t');
    auto fail = [&](const std::string& what) {
      return SyntaxError("entities line " + std::to_string(line_no) + ": " +
                         what);
    };
    if (f.size() < 2) throw fail("expected entity<TAB>concept");
    const auto c = schema.ResolveConcept(f[1]);
    if (!c) throw SchemaError("entities line " + std::to_string(line_no) +
                              ": unknown concept " + f[1]);
    if (auto prev = types.Get(f[0]); prev && *prev != *c) {
      throw fail("entity " + f[0] + " typed twice");
    }
    types.Set(f[0], *c);
  }
  return types;
}

EntityTypes LoadEntityTypes(const std::filesystem::path& path,
                            const kg::OntologySchema& schema) {
  return ParseEntityTypes(ReadFile(path), schema);
}

NormalizedTriple Normalize(const RawTriple& raw,
                           const kg::OntologySchema& schema,
                           const EntityTypes& types) {
  NormalizedTriple t;
  t.subject = raw.subject;
  t.predicate = raw.predicate;
  t.object = raw.object;
  t.sentence_id = raw.sentence_id;
  t.subject_concept = types.Get(raw.subject).value_or("");
  t.object_concept = types.Get(raw.object).value_or("");
  if (t.subject_concept.empty() || t.object_concept.empty()) {
    t.note = "untyped entity";
    return t;
  }
  const auto relation = schema.MapPredicate(raw.predicate, t.object_concept);
  if (!relation) {
    t.note = "no mapping for (" + raw.predicate + ", " + t.object_concept + ")";
    return t;
  }
  const kg::RelationDef* def = schema.FindRelation(*relation);
  if (def->domain != t.subject_concept || def->range != t.object_concept) {
    t.note = *relation + " does not admit " + t.subject_concept + " -> " +
             t.object_concept;
    return t;
  }
  t.predicate = *relation;
  t.normalized = true;
  return t;
}

DedupResult Deduplicate(const std::vector<NormalizedTriple>& triples) {
  DedupResult out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::map<std::pair<std::string, std::string>, size_t> pair_index;
  for (const NormalizedTriple& t : triples) {
    if (!seen.emplace(t.subject, t.predicate, t.object).second) {
      ++out.duplicates_removed;
      continue;
    }
    out.kept.push_back(t);
    const auto key = std::make_pair(t.subject, t.object);
    auto it = pair_index.find(key);
    if (it == pair_index.end()) {
      pair_index.emplace(key, out.multivalued.size());
      out.multivalued.push_back({t.subject, t.object, {t.predicate}});
    } else {
      out.multivalued[it->second].predicates.push_back(t.predicate);
    }
  }
  std::erase_if(out.multivalued,
                [](const MultiValued& m) { return m.predicates.size() < 2; });
  return out;
}

std::vector<RawTriple> ParseTriples(std::string_view text) {
  std::vector<RawTriple> out;
  size_t line_no = 0;
  for (const std::string& raw : Split(text, '\n')) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = Split(line, '\t');
    if (f.size() != 3 || f[0].empty() || f[1].empty() || f[2].empty()) {
      throw SyntaxError("triples line " + std::to_string(line_no) +
                        ": expected subject<TAB>predicate<TAB>object");
    }
    out.push_back({f[0], f[1], f[2], 0});
  }
  return out;
}

std::string FormatTriples(const std::vector<NormalizedTriple>& triples) {
  std::string out;
  for (const NormalizedTriple& t : triples) {
    out += t.subject + "\t" + t.predicate + "\t" + t.object + "\n";
  }
  return out;
}

}  // namespace batik::extract
