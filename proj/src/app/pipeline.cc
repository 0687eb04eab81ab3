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

#include "batik/app/pipeline.h"

#include <algorithm>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::app {

Dictionaries LoadDictionaries(const fs::path& seeds,
                              const std::optional<fs::path>& lexicon) {
  Dictionaries d;
  corpus::DictionaryLoad s = corpus::LoadDictionary(seeds);
  d.duplicates = s.duplicates.size();
  d.seeds = s.dictionary;
  d.combined = std::move(s.dictionary);
  if (lexicon) {
    corpus::DictionaryLoad l = corpus::LoadDictionary(*lexicon);
    d.duplicates += l.duplicates.size();
    d.combined.Merge(l.dictionary);
  }
  return d;
}

corpus::UserDictionary UsableSeeds(const corpus::UserDictionary& seeds,
                                   const corpus::Vocabulary& vocab) {
  corpus::UserDictionary out;
  for (const auto& e : seeds.entries()) {
    if (vocab.Id(e.term)) out.Add(e.term);
  }
  return out;
}

corpus::TokenSeq SegmentCorpus(const fs::path& corpus,
                               const corpus::UserDictionary& dict) {
  std::error_code ec;
  if (!fs::is_directory(corpus, ec)) return corpus::TokenizeFile(corpus, dict);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus, ec)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list corpus directory " + corpus.string());
  std::sort(files.begin(), files.end());
  corpus::TokenSeq out;
  for (const fs::path& f : files) {
    corpus::TokenSeq part = corpus::TokenizeFile(f, dict);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

EmbedResult TrainEmbeddings(const corpus::TokenSeq& tokens,
                            const EmbedOptions& options) {
  options.train.Validate();
  if (options.min_count < 1) throw ConfigError("min-count must be at least 1");
  EmbedResult r;
  r.vocab = corpus::Vocabulary::Build(tokens, options.min_count);
  if (r.vocab.empty()) return r;
  const corpus::TokenSeq kept =
      corpus::Subsample(tokens, r.vocab, options.sample, options.train.seed);
  for (const auto& s : kept) r.kept_tokens += s.size();
  r.matrix = embed::Train(kept, r.vocab, options.train, &r.stats);
  return r;
}

ExtractOutput ExtractTriples(const ExtractInputs& in) {
  ExtractOutput out;
  std::vector<extract::NormalizedTriple> normalized;
  auto take = [&](const extract::RawTriple& raw) {
    extract::NormalizedTriple t = extract::Normalize(raw, *in.schema, *in.types);
    if (t.normalized) {
      normalized.push_back(std::move(t));
    } else {
      out.unnormalized.push_back(std::move(t));
    }
  };
  for (const extract::ParsedSentence& s : *in.parses) {
    for (const extract::RawTriple& raw :
         extract::ExtractRelations(s, *in.entities, *in.rules)) {
      ++out.raw_triples;
      take(raw);
    }
  }
  out.curated_triples = in.curated.size();
  for (const extract::RawTriple& raw : in.curated) take(raw);
  out.dedup = extract::Deduplicate(normalized);
  return out;
}

kg::GraphStore Assemble(const kg::OntologySchema& schema,
                        const std::vector<std::string>& entities,
                        const extract::EntityTypes& types,
                        const std::vector<extract::RawTriple>& triples) {
  kg::GraphStore store(schema);
  auto concept_of = [&](const std::string& name) {
    auto c = types.Get(name);
    if (!c) throw SchemaError("entity " + name + " has no concept in the type table");
    return *c;
  };
  for (const std::string& e : entities) store.UpsertNode(e, concept_of(e));
  for (const extract::RawTriple& t : triples) {
    const kg::NodeId s = store.UpsertNode(t.subject, concept_of(t.subject));
    const kg::NodeId o = store.UpsertNode(t.object, concept_of(t.object));
    store.InsertEdge(s, t.predicate, o);
  }
  store.Validate();
  return store;
}

std::vector<extract::RawTriple> RawTriples(
    const std::vector<extract::NormalizedTriple>& triples) {
  std::vector<extract::RawTriple> out;
  out.reserve(triples.size());
  for (const auto& t : triples) out.push_back(t.raw());
  return out;
}

std::string FormatEntities(const std::vector<std::string>& entities) {
  std::string out;
  for (const std::string& e : entities) out += e + "\n";
  return out;
}

std::vector<std::string> ParseEntities(std::string_view text) {
  std::vector<std::string> out;
  for (const std::string& line : Split(text, '\n')) {
    const std::string_view t = Trim(line);
    if (!t.empty() && t.front() != '#') out.emplace_back(t);
  }
  return out;
}

}  // namespace batik::app
