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

// build-kg, its stage commands, query, repl and export-graph.

#include <iostream>
#include <memory>
#include <optional>

#include "batik/app/file_lock.h"
#include "batik/app/pipeline.h"
#include "batik/core/error.h"
#include "batik/core/text.h"
#include "batik/query/query.h"
#include "commands.h"

namespace batik::app {
namespace {

using nlohmann::json;

struct EmbedFlags {
  int64_t min_count = 5;
  double sample = 1e-4;
  int dim = 200;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double alpha = 0.025;
  double min_alpha = 0.0001;
  std::string mode = "skipgram";

  void Add(CLI::App* cmd) {
    cmd->add_option("--min-count", min_count, "Drop tokens seen fewer times")->capture_default_str();
    cmd->add_option("--sample", sample, "Subsampling threshold")->capture_default_str();
    cmd->add_option("--dim", dim, "Embedding size")->capture_default_str();
    cmd->add_option("--window", window, "Context window")->capture_default_str();
    cmd->add_option("--negatives", negatives, "Negative samples per pair")->capture_default_str();
    cmd->add_option("--epochs", epochs, "Training passes")->capture_default_str();
    cmd->add_option("--alpha", alpha, "Initial learning rate")->capture_default_str();
    cmd->add_option("--min-alpha", min_alpha, "Final learning rate")->capture_default_str();
    cmd->add_option("--mode", mode, "skipgram or cbow")
        ->check(CLI::IsMember({"skipgram", "cbow"}))
        ->capture_default_str();
  }

  EmbedOptions Options(uint64_t seed) const {
    EmbedOptions o;
    o.min_count = min_count;
    o.sample = sample;
    o.train.mode = mode == "cbow" ? embed::Mode::kCbow : embed::Mode::kSkipGram;
    o.train.dim = dim;
    o.train.window = window;
    o.train.negatives = negatives;
    o.train.epochs = epochs;
    o.train.alpha0 = alpha;
    o.train.min_alpha = min_alpha;
    o.train.seed = seed;
    return o;
  }
};

// Prefixes errors with the stage that raised them.
template <typename Fn>
auto Stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), name + ": " + e.what());
  }
}

std::optional<fs::path> OptionalPath(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

json MultivaluedJson(const std::vector<extract::MultiValued>& mv) {
  json arr = json::array();
  for (const auto& m : mv) {
    if (m.predicates.size() < 2) continue;
    arr.push_back({{"subject", m.subject}, {"object", m.object}, {"predicates", m.predicates}});
  }
  return arr;
}

json UnnormalizedJson(const std::vector<extract::NormalizedTriple>& triples) {
  json arr = json::array();
  for (const auto& t : triples) {
    arr.push_back({{"subject", t.subject},
                   {"predicate", t.predicate},
                   {"object", t.object},
                   {"sentence", t.sentence_id},
                   {"note", t.note}});
  }
  return arr;
}

std::string ReportText(const json& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [k, v] : r.items()) {
    if (v.is_array()) {
      rows.emplace_back(k, std::to_string(v.size()));
    } else if (v.is_string()) {
      rows.emplace_back(k, v.get<std::string>());
    } else {
      rows.emplace_back(k, v.dump());
    }
  }
  return AlignedPairs(rows);
}

struct ExtractFiles {
  std::string parses, rules, ontology, types, curated;

  void Add(CLI::App* cmd) {
    cmd->add_option("--parses", parses, "Dependency parses (index form head deprel)")->required();
    cmd->add_option("--rules", rules, "Extraction rule file")->required();
    cmd->add_option("--ontology", ontology, "Ontology schema JSON")->required();
    cmd->add_option("--types", types, "entity<TAB>concept table")->required();
    cmd->add_option("--curated", curated, "Hand-curated triples merged after extraction");
  }
};

struct ExtractLoaded {
  std::vector<extract::ParsedSentence> parses;
  std::vector<extract::ExtractionRule> rules;
  kg::OntologySchema schema;
  extract::EntityTypes types;
  std::vector<extract::RawTriple> curated;
};

ExtractLoaded LoadExtractFiles(const ExtractFiles& f) {
  ExtractLoaded l;
  l.schema = Stage("ontology", [&] { return kg::OntologySchema::Load(f.ontology); });
  l.parses = Stage("parses", [&] { return extract::LoadParses(f.parses); });
  l.rules = Stage("rules", [&] { return extract::LoadRules(f.rules); });
  l.types = Stage("types", [&] { return extract::LoadEntityTypes(f.types, l.schema); });
  if (!f.curated.empty()) {
    l.curated = Stage("curated", [&] { return extract::ParseTriples(ReadFile(f.curated)); });
  }
  return l;
}

ExtractOutput RunExtract(const ExtractLoaded& l, const extract::EntitySet& entities) {
  ExtractInputs in;
  in.entities = &entities;
  in.parses = &l.parses;
  in.rules = &l.rules;
  in.schema = &l.schema;
  in.types = &l.types;
  in.curated = l.curated;
  return Stage("extract", [&] { return ExtractTriples(in); });
}

void SaveLocked(const kg::GraphStore& store, const std::string& path) {
  FileLock lock(path, FileLock::Mode::kExclusive);
  kg::SaveStore(store, path);
}

kg::GraphStore LoadLocked(const std::string& path) {
  if (!fs::exists(path)) throw IoError("store not found: " + path);
  FileLock lock(path, FileLock::Mode::kShared);
  return kg::LoadStore(path);
}

void RegisterBuildKg(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string corpus, dict, lexicon, review, out, report, review_out;
    double threshold = extract::kDefaultClusterThreshold;
    ExtractFiles files;
    EmbedFlags embed;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "build-kg", "Corpus, parses and curation files to a knowledge-graph store");
  cmd->add_option("--corpus", o->corpus, "Corpus file or directory, one sentence per line")
      ->required();
  cmd->add_option("--dict", o->dict, "Seed dictionary (cluster centers)")->required();
  cmd->add_option("--lexicon", o->lexicon, "Base lexicon for segmentation");
  cmd->add_option("--review", o->review,
                  "Curated review file; without it every cluster member is kept");
  cmd->add_option("--review-out", o->review_out, "Write the cluster review export here");
  cmd->add_option("--threshold", o->threshold, "Cluster similarity threshold")
      ->capture_default_str();
  o->files.Add(cmd);
  cmd->add_option("--out", o->out, "Output store (JSON lines)")->required();
  cmd->add_option("--report", o->report, "JSON report path (default <out>.report.json)");
  o->embed.Add(cmd);
  ctx.actions[cmd] = [o, &ctx] {
    const Dictionaries dicts =
        Stage("dictionary", [&] { return LoadDictionaries(o->dict, OptionalPath(o->lexicon)); });
    const corpus::TokenSeq tokens =
        Stage("segment", [&] { return SegmentCorpus(o->corpus, dicts.combined); });
    const EmbedResult emb = Stage(
        "embed", [&] { return TrainEmbeddings(tokens, o->embed.Options(ctx.global.seed)); });
    ExtractLoaded files = LoadExtractFiles(o->files);

    extract::ClusterResult clusters;
    if (!emb.vocab.empty()) {
      clusters = Stage("cluster", [&] {
        return extract::ClusterEntities(emb.matrix, emb.vocab, dicts.seeds, o->threshold);
      });
    }
    const std::string exported = extract::ExportReview(clusters);
    if (!o->review_out.empty()) WriteFile(o->review_out, exported);
    const std::string review_text = o->review.empty() ? exported : ReadFile(o->review);
    const extract::EntitySet entities = Stage(
        "review", [&] {
          return extract::ImportReview(review_text, UsableSeeds(dicts.seeds, emb.vocab), emb.vocab);
        });

    const ExtractOutput ex = RunExtract(files, entities);
    const kg::GraphStore store = Stage("assemble", [&] {
      return Assemble(files.schema, entities.entities(), files.types,
                      RawTriples(ex.dedup.kept));
    });
    SaveLocked(store, o->out);

    size_t token_count = 0;
    for (const auto& s : tokens) token_count += s.size();
    json r;
    r["sentences"] = tokens.size();
    r["tokens"] = token_count;
    r["vocabulary"] = emb.vocab.size();
    r["clusters"] = clusters.clusters.size();
    r["missing_seeds"] = clusters.missing_seeds;
    r["entities"] = entities.size();
    r["raw_triples"] = ex.raw_triples;
    r["curated_triples"] = ex.curated_triples;
    r["unnormalized"] = UnnormalizedJson(ex.unnormalized);
    r["duplicates_removed"] = ex.dedup.duplicates_removed;
    r["multivalued"] = MultivaluedJson(ex.dedup.multivalued);
    r["nodes"] = store.node_count();
    r["triples"] = store.edge_count();
    r["store"] = o->out;
    WriteJson(o->report.empty() ? o->out + ".report.json" : o->report, r);
    ctx.Report(ReportText(r));
  };
}

void RegisterStages(CLI::App& app, Context& ctx) {
  {
    struct Opts { std::string corpus, dict, lexicon, out; };
    auto o = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand("segment", "Stage 1: tokenize a corpus");
    cmd->add_option("--corpus", o->corpus, "Corpus file or directory")->required();
    cmd->add_option("--dict", o->dict, "Seed dictionary")->required();
    cmd->add_option("--lexicon", o->lexicon, "Base lexicon");
    cmd->add_option("--out", o->out, "Space-separated tokens, one sentence per line")
        ->required();
    ctx.actions[cmd] = [o, &ctx] {
      const Dictionaries d = LoadDictionaries(o->dict, OptionalPath(o->lexicon));
      const corpus::TokenSeq tokens = SegmentCorpus(o->corpus, d.combined);
      WriteFile(o->out, corpus::FormatTokens(tokens));
      ctx.Report(AlignedPairs({{"sentences", std::to_string(tokens.size())}}));
    };
  }
  {
    struct Opts { std::string tokens, out; EmbedFlags embed; };
    auto o = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand("train-embed", "Stage 2: train word embeddings");
    cmd->add_option("--tokens", o->tokens, "Output of `segment`")->required();
    cmd->add_option("--out", o->out, "Embedding file (vocabulary goes to <out>.vocab)")
        ->required();
    o->embed.Add(cmd);
    ctx.actions[cmd] = [o, &ctx] {
      const corpus::TokenSeq tokens = corpus::ParseTokens(ReadFile(o->tokens));
      const EmbedResult r = TrainEmbeddings(tokens, o->embed.Options(ctx.global.seed));
      embed::SaveEmbeddings(o->out, r.matrix, r.vocab);
      std::string loss = "-";
      if (!r.stats.epoch_mean_loss.empty()) loss = FormatDouble(r.stats.epoch_mean_loss.back(), 6);
      ctx.Report(AlignedPairs({{"vocabulary", std::to_string(r.vocab.size())},
                               {"kept_tokens", std::to_string(r.kept_tokens)},
                               {"final_loss", loss}}));
    };
  }
  {
    struct Opts {
      std::string embeddings, dict, out;
      double threshold = extract::kDefaultClusterThreshold;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand("cluster", "Stage 3: seed-centred clusters as a review file");
    cmd->add_option("--embeddings", o->embeddings, "Output of `train-embed`")->required();
    cmd->add_option("--dict", o->dict, "Seed dictionary")->required();
    cmd->add_option("--threshold", o->threshold, "Similarity threshold")->capture_default_str();
    cmd->add_option("--out", o->out, "Review export")->required();
    ctx.actions[cmd] = [o, &ctx] {
      const embed::LoadedEmbeddings emb = embed::LoadEmbeddings(o->embeddings);
      const Dictionaries d = LoadDictionaries(o->dict, std::nullopt);
      extract::ClusterResult c;
      if (!emb.vocab.empty()) {
        c = extract::ClusterEntities(emb.matrix, emb.vocab, d.seeds, o->threshold);
      }
      WriteFile(o->out, extract::ExportReview(c));
      size_t members = 0;
      for (const auto& cl : c.clusters) members += cl.members.size();
      ctx.Report(AlignedPairs({{"clusters", std::to_string(c.clusters.size())},
                               {"members", std::to_string(members)},
                               {"unassigned", std::to_string(c.unassigned.size())},
                               {"ties", std::to_string(c.ties.size())}}));
    };
  }
  {
    struct Opts {
      std::string embeddings, dict, review, out, entities_out, report;
      ExtractFiles files;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand(
        "extract", "Stage 4: entity set, relation extraction, normalization, dedup");
    cmd->add_option("--embeddings", o->embeddings, "Embeddings (for the vocabulary)")
        ->required();
    cmd->add_option("--dict", o->dict, "Seed dictionary")->required();
    cmd->add_option("--review", o->review, "Review file (curated or as exported)")->required();
    o->files.Add(cmd);
    cmd->add_option("--out", o->out, "Kept triples, subject<TAB>predicate<TAB>object")
        ->required();
    cmd->add_option("--entities-out", o->entities_out, "Entity set, one per line")->required();
    cmd->add_option("--report", o->report, "JSON report path");
    ctx.actions[cmd] = [o, &ctx] {
      const Dictionaries d = LoadDictionaries(o->dict, std::nullopt);
      const corpus::Vocabulary vocab =
          corpus::Vocabulary::Parse(ReadFile(o->embeddings + ".vocab"));
      const extract::EntitySet entities =
          Stage("review", [&] {
            return extract::ImportReview(ReadFile(o->review), UsableSeeds(d.seeds, vocab), vocab);
          });
      ExtractLoaded files = LoadExtractFiles(o->files);
      const ExtractOutput ex = RunExtract(files, entities);
      WriteFile(o->out, extract::FormatTriples(ex.dedup.kept));
      WriteFile(o->entities_out, FormatEntities(entities.entities()));
      json r;
      r["entities"] = entities.size();
      r["raw_triples"] = ex.raw_triples;
      r["curated_triples"] = ex.curated_triples;
      r["unnormalized"] = UnnormalizedJson(ex.unnormalized);
      r["duplicates_removed"] = ex.dedup.duplicates_removed;
      r["multivalued"] = MultivaluedJson(ex.dedup.multivalued);
      r["triples"] = ex.dedup.kept.size();
      if (!o->report.empty()) WriteJson(o->report, r);
      ctx.Report(ReportText(r));
    };
  }
  {
    struct Opts { std::string entities, triples, ontology, types, out; };
    auto o = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand("assemble", "Stage 5: entities and triples to a store");
    cmd->add_option("--entities", o->entities, "Output of `extract --entities-out`")->required();
    cmd->add_option("--triples", o->triples, "Output of `extract --out`")->required();
    cmd->add_option("--ontology", o->ontology, "Ontology schema JSON")->required();
    cmd->add_option("--types", o->types, "entity<TAB>concept table")->required();
    cmd->add_option("--out", o->out, "Output store")->required();
    ctx.actions[cmd] = [o, &ctx] {
      const kg::OntologySchema schema = kg::OntologySchema::Load(o->ontology);
      const extract::EntityTypes types = extract::LoadEntityTypes(o->types, schema);
      const kg::GraphStore store =
          Assemble(schema, ParseEntities(ReadFile(o->entities)), types,
                   extract::ParseTriples(ReadFile(o->triples)));
      SaveLocked(store, o->out);
      ctx.Report(AlignedPairs({{"nodes", std::to_string(store.node_count())},
                               {"triples", std::to_string(store.edge_count())}}));
    };
  }
}

query::Style ParseStyle(const std::string& s) {
  if (s == "tsv") return query::Style::kTsv;
  if (s == "json") return query::Style::kJson;
  return query::Style::kAligned;
}

// "meaning X": patterns carrying meaning X through 蕴含.
query::Query MeaningQuery(const std::string& meaning) {
  query::Query q;
  q.nodes = {{"p", "纹样"}, {"m", "寓意"}};
  q.edges = {{"r", "蕴含", query::EdgeDirection::kRight}};
  q.where = {{"m", "name", query::Comparator::kEq, meaning}};
  q.returns = {"p"};
  return q;
}

std::string RunQueryText(const std::string& text, const kg::GraphStore& store,
                         query::Style style, size_t max_width) {
  const std::string_view t = Trim(text);
  constexpr std::string_view kMeaning = "meaning ";
  query::Query q;
  if (t.substr(0, kMeaning.size()) == kMeaning) {
    const std::string_view arg = Trim(t.substr(kMeaning.size()));
    if (arg.empty()) throw SyntaxError("meaning: expected a meaning name");
    q = MeaningQuery(std::string(arg));
  } else {
    q = query::Parse(t);
  }
  return query::Format(query::Evaluate(q, store), store, style, max_width);
}

void RegisterQuery(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string store, format = "aligned";
    size_t max_width = 32;
    std::vector<std::string> text;
  };
  {
    auto o = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand(
        "query", "Run one query (MATCH ... RETURN ..., or `meaning <name>`)");
    cmd->add_option("--store", o->store, "Store file")->required();
    cmd->add_option("--format", o->format, "aligned, tsv or json")
        ->check(CLI::IsMember({"aligned", "tsv", "json"}))
        ->capture_default_str();
    cmd->add_option("--max-width", o->max_width, "Column width cap for aligned output")
        ->capture_default_str();
    cmd->add_option("text", o->text, "Query text")->required();
    ctx.actions[cmd] = [o, &ctx] {
      const kg::GraphStore store = LoadLocked(o->store);
      std::string text;
      for (const std::string& part : o->text) text += (text.empty() ? "" : " ") + part;
      ctx.out() << RunQueryText(text, store, ParseStyle(o->format), o->max_width);
    };
  }
  {
    auto o = std::make_shared<Opts>();
    CLI::App* cmd = app.add_subcommand("repl", "Interactive queries over one store");
    cmd->add_option("--store", o->store, "Store file")->required();
    cmd->add_option("--format", o->format, "aligned, tsv or json")
        ->check(CLI::IsMember({"aligned", "tsv", "json"}))
        ->capture_default_str();
    ctx.actions[cmd] = [o, &ctx] {
      const kg::GraphStore store = LoadLocked(o->store);
      std::vector<std::string> history;
      std::istream& in = ctx.io->in;
      std::ostream& out = ctx.out();
      const bool prompt = !ctx.global.quiet;
      if (prompt) {
        out << store.node_count() << " nodes, " << store.edge_count()
            << " triples. :help for commands.\n";
      }
      std::string line;
      while (true) {
        if (prompt) out << "batik> " << std::flush;
        if (!std::getline(in, line)) break;
        const std::string t(Trim(line));
        if (t.empty()) continue;
        if (t == ":quit" || t == ":q") break;
        if (t == ":help") {
          out << "MATCH ... RETURN ...   run a query\n"
                 "meaning <name>        patterns carrying a meaning\n"
                 ":history  :quit\n";
          continue;
        }
        if (t == ":history") {
          for (size_t i = 0; i < history.size(); ++i) out << (i + 1) << "  " << history[i] << "\n";
          continue;
        }
        history.push_back(t);
        try {
          out << RunQueryText(t, store, ParseStyle(o->format), o->max_width);
        } catch (const Error& e) {
          ctx.io->err << "error: " << e.what() << "\n";
        }
      }
    };
  }
}

void RegisterExport(CLI::App& app, Context& ctx) {
  struct Opts { std::string store, format = "dot", out; };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("export-graph", "Store to Graphviz DOT or JSON");
  cmd->add_option("--store", o->store, "Store file")->required();
  cmd->add_option("--format", o->format, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o->out, "Output file (default stdout)");
  ctx.actions[cmd] = [o, &ctx] {
    const kg::GraphStore store = LoadLocked(o->store);
    const std::string text = o->format == "dot" ? kg::ExportDot(store) : kg::ExportJson(store);
    if (o->out.empty()) {
      ctx.out() << text;
    } else {
      WriteFile(o->out, text);
    }
  };
}

}  // namespace

void RegisterKgCommands(CLI::App& app, Context& ctx) {
  RegisterBuildKg(app, ctx);
  RegisterStages(app, ctx);
  RegisterQuery(app, ctx);
  RegisterExport(app, ctx);
}

}  // namespace batik::app
