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

#ifndef BATIK_APP_PIPELINE_H_
#define BATIK_APP_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "batik/corpus/corpus.h"
#include "batik/embed/word2vec.h"
#include "batik/extract/cluster.h"
#include "batik/extract/parse.h"
#include "batik/extract/relations.h"
#include "batik/kg/graph_store.h"
#include "batik/kg/ontology.h"

// Text-to-graph stages. build-kg chains them in memory; the stage commands
// run one each and hand over through files, with identical results.
namespace batik::app {

namespace fs = std::filesystem;

// Seed dictionary first, then the optional base lexicon (lower priority).
struct Dictionaries {
  corpus::UserDictionary seeds;
  corpus::UserDictionary combined;
  size_t duplicates = 0;
};
Dictionaries LoadDictionaries(const fs::path& seeds,
                              const std::optional<fs::path>& lexicon);

// Seeds that occur in the vocabulary; only these can seed entities.
corpus::UserDictionary UsableSeeds(const corpus::UserDictionary& seeds,
                                   const corpus::Vocabulary& vocab);

// A directory contributes every regular file, sorted by name.
corpus::TokenSeq SegmentCorpus(const fs::path& corpus,
                               const corpus::UserDictionary& dict);

struct EmbedOptions {
  int64_t min_count = 5;
  double sample = 1e-4;
  embed::TrainConfig train;
};

struct EmbedResult {
  corpus::Vocabulary vocab;
  embed::EmbeddingMatrix matrix;
  embed::TrainStats stats;
  size_t kept_tokens = 0;  // after subsampling
};

// Vocabulary, subsampling (seeded from train.seed) and training. An empty
// vocabulary yields an empty matrix without training.
EmbedResult TrainEmbeddings(const corpus::TokenSeq& tokens,
                            const EmbedOptions& options);

struct ExtractInputs {
  const extract::EntitySet* entities = nullptr;
  const std::vector<extract::ParsedSentence>* parses = nullptr;
  const std::vector<extract::ExtractionRule>* rules = nullptr;
  const kg::OntologySchema* schema = nullptr;
  const extract::EntityTypes* types = nullptr;
  // Hand-curated triples, normalized and merged after the extracted ones.
  std::vector<extract::RawTriple> curated;
};

struct ExtractOutput {
  size_t raw_triples = 0;
  size_t curated_triples = 0;
  std::vector<extract::NormalizedTriple> unnormalized;
  extract::DedupResult dedup;
};

ExtractOutput ExtractTriples(const ExtractInputs& in);

// Entity nodes first (entity-set order, concept from the type table), then
// one edge per triple. SchemaError for an untyped entity.
kg::GraphStore Assemble(const kg::OntologySchema& schema,
                        const std::vector<std::string>& entities,
                        const extract::EntityTypes& types,
                        const std::vector<extract::RawTriple>& triples);

std::vector<extract::RawTriple> RawTriples(
    const std::vector<extract::NormalizedTriple>& triples);

// One entity per line.
std::string FormatEntities(const std::vector<std::string>& entities);
std::vector<std::string> ParseEntities(std::string_view text);

}  // namespace batik::app

#endif  // BATIK_APP_PIPELINE_H_
