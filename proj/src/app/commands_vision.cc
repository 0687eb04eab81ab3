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

// gen-data, split, train, eval and classify.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include "batik/app/file_lock.h"
#include "batik/core/error.h"
#include "batik/core/text.h"
#include "batik/dataset/image.h"
#include "batik/dataset/loader.h"
#include "batik/dataset/manifest.h"
#include "batik/dataset/synthetic.h"
#include "batik/kg/graph_store.h"
#include "batik/model/arch.h"
#include "batik/model/metrics.h"
#include "batik/model/resnet.h"
#include "batik/model/train.h"
#include "commands.h"

namespace batik::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Relations shown for a classified pattern.
const std::vector<std::string>& CultureRelations() {
  static const std::vector<std::string> kRelations = {"蕴含", "崇拜", "来源"};
  return kRelations;
}

fs::path LabelsPath(const fs::path& checkpoint) {
  return fs::path(checkpoint.string() + ".labels");
}

std::vector<std::string> LoadLabels(const fs::path& checkpoint) {
  std::vector<std::string> labels;
  for (const std::string& line : Split(ReadFile(LabelsPath(checkpoint)), '\n')) {
    if (!Trim(line).empty()) labels.emplace_back(Trim(line));
  }
  return labels;
}

std::vector<std::string> ManifestLabels(const dataset::Manifest& m) {
  std::vector<std::string> labels;
  for (const auto& [label, count] : m.LabelCounts()) labels.push_back(label);
  return labels;
}

dataset::Split ParseSplit(const std::string& s) {
  if (s == "train") return dataset::Split::kTrain;
  if (s == "test") return dataset::Split::kTest;
  return dataset::Split::kNone;
}

json Optional(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string Fixed(const std::optional<double>& v, int digits = 4) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

std::string PadRight(const std::string& s, size_t width) {
  const size_t w = DisplayWidth(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

// metrics.json, metrics.txt, confusion.tsv, predictions.tsv and one ROC CSV
// per category. Returns the text summary.
std::string WriteEvaluation(const fs::path& dir, const std::string& split,
                            const model::Evaluation& ev,
                            const std::vector<std::string>& labels,
                            const std::vector<dataset::Sample>& samples) {
  fs::create_directories(dir);
  const model::MetricsReport m = model::ComputeMetrics(ev.confusion, labels);
  const model::RocReport roc =
      model::ComputeRocReport(ev.scores, ev.labels, labels.size(), labels);
  const size_t k = labels.size();

  json doc;
  doc["split"] = split;
  doc["samples"] = ev.labels.size();
  doc["labels"] = labels;
  doc["overall_accuracy"] = m.overall_accuracy;
  json confusion = json::array();
  for (size_t i = 0; i < k; ++i) {
    json row = json::array();
    for (size_t j = 0; j < k; ++j) row.push_back(ev.confusion.at(i, j));
    confusion.push_back(row);
  }
  doc["confusion"] = confusion;
  json cats = json::array();
  for (size_t c = 0; c < k; ++c) {
    const auto& pc = m.per_category[c];
    cats.push_back({{"label", labels[c]},
                    {"tp", pc.tp},
                    {"fn", pc.fn},
                    {"fp", pc.fp},
                    {"tn", pc.tn},
                    {"accuracy", Optional(pc.accuracy)},
                    {"precision", Optional(pc.precision)},
                    {"recall", Optional(pc.recall)},
                    {"f1", Optional(pc.f1)},
                    {"auc", Optional(roc.per_category[c].auc)}});
    WriteFile(dir / ("roc_" + labels[c] + ".csv"), model::FormatRocCsv(roc.per_category[c]));
  }
  doc["categories"] = cats;
  doc["macro"] = {{"accuracy", Optional(m.macro_accuracy)},
                  {"precision", Optional(m.macro_precision)},
                  {"recall", Optional(m.macro_recall)},
                  {"f1", Optional(m.macro_f1)},
                  {"auc", Optional(roc.macro_auc)}};
  std::vector<std::string> warnings = m.warnings;
  warnings.insert(warnings.end(), roc.warnings.begin(), roc.warnings.end());
  doc["warnings"] = warnings;
  WriteJson((dir / "metrics.json").string(), doc);

  std::string tsv = "truth";
  for (const auto& l : labels) tsv += "\t" + l;
  tsv += "\n";
  for (size_t i = 0; i < k; ++i) {
    tsv += labels[i];
    for (size_t j = 0; j < k; ++j) tsv += "\t" + std::to_string(ev.confusion.at(i, j));
    tsv += "\n";
  }
  WriteFile(dir / "confusion.tsv", tsv);

  std::string pred = "path\tlabel\tpredicted\tconfidence\n";
  for (size_t i = 0; i < ev.labels.size(); ++i) {
    const int p = ev.predictions[i];
    pred += EscapeTsv(samples[i].path) + "\t" + labels[ev.labels[i]] + "\t" + labels[p] +
            "\t" + FormatDouble(ev.scores[i][p]) + "\n";
  }
  WriteFile(dir / "predictions.tsv", pred);

  size_t width = 5;
  for (const auto& l : labels) width = std::max(width, DisplayWidth(l));
  std::string text = split + ": " + std::to_string(ev.labels.size()) +
                     " samples, accuracy " + Fixed(m.overall_accuracy) + "\n";
  text += PadRight("label", width) + "  precision  recall     f1         auc\n";
  for (size_t c = 0; c < k; ++c) {
    const auto& pc = m.per_category[c];
    text += PadRight(labels[c], width) + "  " + PadRight(Fixed(pc.precision), 9) + "  " +
            PadRight(Fixed(pc.recall), 9) + "  " + PadRight(Fixed(pc.f1), 9) + "  " +
            Fixed(roc.per_category[c].auc) + "\n";
  }
  text += PadRight("macro", width) + "  " + PadRight(Fixed(m.macro_precision), 9) + "  " +
          PadRight(Fixed(m.macro_recall), 9) + "  " + PadRight(Fixed(m.macro_f1), 9) + "  " +
          Fixed(roc.macro_auc) + "\n";
  for (const auto& w : warnings) text += "warning: " + w + "\n";
  WriteFile(dir / "metrics.txt", text);
  return text;
}

std::vector<dataset::Sample> LoadSplit(const fs::path& manifest_path,
                                       const dataset::Manifest& manifest,
                                       const std::vector<std::string>& labels,
                                       const model::ArchConfig& arch, dataset::Split split) {
  dataset::LoadOptions opts;
  opts.height = arch.height;
  opts.width = arch.width;
  opts.split = split;
  return dataset::LoadSamples(manifest_path.parent_path(), manifest, labels, opts).samples;
}

void RegisterGenData(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string out;
    size_t per_class = 100;
    size_t size = 64;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("gen-data", "Write the synthetic five-class image set");
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->add_option("--per-class", o->per_class, "Images per category")->capture_default_str();
  cmd->add_option("--size", o->size, "Image side in pixels")->capture_default_str();
  ctx.actions[cmd] = [o, &ctx] {
    dataset::SyntheticOptions opts;
    opts.per_class = o->per_class;
    opts.size = o->size;
    opts.seed = ctx.global.seed;
    const dataset::Manifest m = dataset::GenerateSynthetic(o->out, opts);
    ctx.Report(AlignedPairs({{"images", std::to_string(m.rows.size())},
                             {"manifest", (fs::path(o->out) / "manifest.csv").string()}}));
  };
}

void RegisterSplit(CLI::App& app, Context& ctx) {
  struct Opts { std::string manifest, ratio = "6:4", out; };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("split", "Stratified train/test assignment");
  cmd->add_option("--manifest", o->manifest, "manifest.csv")->required();
  cmd->add_option("--ratio", o->ratio, "train:test (e.g. 6:4) or train fraction")
      ->capture_default_str();
  cmd->add_option("--out", o->out, "Output manifest (default: overwrite input)");
  ctx.actions[cmd] = [o, &ctx] {
    const dataset::Manifest in = dataset::ReadManifest(o->manifest);
    const dataset::Manifest out =
        dataset::StratifiedSplit(in, dataset::ParseRatio(o->ratio), ctx.global.seed);
    dataset::WriteManifest(o->out.empty() ? o->manifest : o->out, out);
    ctx.Report(AlignedPairs({{"train", std::to_string(out.Count(dataset::Split::kTrain))},
                             {"test", std::to_string(out.Count(dataset::Split::kTest))}}));
  };
}

void RegisterTrain(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string manifest, arch, out, report_dir;
    model::TrainRun run;
    bool no_augment = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("train", "Train the classifier on the train split");
  cmd->add_option("--manifest", o->manifest, "manifest.csv with assigned splits")->required();
  cmd->add_option("--arch", o->arch, "Architecture JSON")->required();
  cmd->add_option("--out", o->out, "Checkpoint path")->required();
  cmd->add_option("--report-dir", o->report_dir, "History and metrics (default <out>.report)");
  cmd->add_option("--epochs", o->run.epochs, "Epochs")->capture_default_str();
  cmd->add_option("--batch", o->run.batch_size, "Mini-batch size")->capture_default_str();
  cmd->add_option("--lr", o->run.lr_initial, "Initial learning rate")->capture_default_str();
  cmd->add_option("--lr-final", o->run.lr_final, "Learning rate at the last epoch")
      ->capture_default_str();
  cmd->add_option("--beta1", o->run.beta1, "Adam beta1")->capture_default_str();
  cmd->add_option("--beta2", o->run.beta2, "Adam beta2")->capture_default_str();
  cmd->add_option("--eps", o->run.eps, "Adam epsilon")->capture_default_str();
  cmd->add_flag("--no-augment", o->no_augment, "Disable random crop and flip");
  ctx.actions[cmd] = [o, &ctx] {
    const model::ArchConfig arch = model::LoadArchConfig(o->arch);
    const dataset::Manifest manifest = dataset::ReadManifest(o->manifest);
    const std::vector<std::string> labels = ManifestLabels(manifest);
    if (labels.size() != arch.num_classes) {
      throw ConfigError("manifest has " + std::to_string(labels.size()) +
                        " labels but the architecture has " +
                        std::to_string(arch.num_classes) + " classes");
    }
    if (manifest.Count(dataset::Split::kTrain) == 0) {
      throw ConfigError("manifest has no train rows; run `batik split` first");
    }
    model::TrainRun run = o->run;
    run.seed = ctx.global.seed;
    if (o->no_augment) run.random_resized_crop = run.horizontal_flip = false;
    const auto train = LoadSplit(o->manifest, manifest, labels, arch, dataset::Split::kTrain);
    model::Model net(arch, ctx.global.seed);

    json history = json::array();
    std::string history_tsv = "epoch\tlr\tloss\taccuracy\tsteps\tseconds\n";
    auto t0 = std::chrono::steady_clock::now();
    model::Train(net, train, run, [&](const model::EpochStats& s) {
      const auto t1 = std::chrono::steady_clock::now();
      const double secs = std::chrono::duration<double>(t1 - t0).count();
      t0 = t1;
      history.push_back({{"epoch", s.epoch},
                         {"lr", s.lr},
                         {"loss", s.loss},
                         {"accuracy", s.accuracy},
                         {"steps", s.steps},
                         {"seconds", secs}});
      history_tsv += std::to_string(s.epoch) + "\t" + FormatDouble(s.lr) + "\t" +
                     FormatDouble(s.loss) + "\t" + FormatDouble(s.accuracy) + "\t" +
                     std::to_string(s.steps) + "\t" + FormatDouble(secs, 4) + "\n";
      char line[160];
      std::snprintf(line, sizeof line, "epoch %zu/%zu  lr %.2e  loss %.4f  acc %.4f  %.1fs",
                    s.epoch, run.epochs, s.lr, s.loss, s.accuracy, secs);
      ctx.Progress(line);
    });
    model::SaveModel(o->out, net);
    std::string labels_text;
    for (const auto& l : labels) labels_text += l + "\n";
    WriteFile(LabelsPath(o->out), labels_text);

    const fs::path dir = o->report_dir.empty() ? fs::path(o->out + ".report") : fs::path(o->report_dir);
    fs::create_directories(dir);
    WriteJson((dir / "history.json").string(),
              {{"labels", labels}, {"train_samples", train.size()}, {"epochs", history}});
    WriteFile(dir / "history.tsv", history_tsv);
    if (manifest.Count(dataset::Split::kTest) > 0) {
      const auto test = LoadSplit(o->manifest, manifest, labels, arch, dataset::Split::kTest);
      const model::Evaluation ev = model::Evaluate(net, test);
      ctx.Report(WriteEvaluation(dir, "test", ev, labels, test));
    }
  };
}

void RegisterEval(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string manifest, checkpoint, split = "test", report_dir;
    size_t batch = 32;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("eval", "Evaluate a checkpoint on one split");
  cmd->add_option("--manifest", o->manifest, "manifest.csv")->required();
  cmd->add_option("--checkpoint", o->checkpoint, "Checkpoint written by train")->required();
  cmd->add_option("--split", o->split, "train, test or all")
      ->check(CLI::IsMember({"train", "test", "all"}))
      ->capture_default_str();
  cmd->add_option("--report-dir", o->report_dir, "Metrics directory (default <checkpoint>.eval)");
  cmd->add_option("--batch", o->batch, "Inference batch size")->capture_default_str();
  ctx.actions[cmd] = [o, &ctx] {
    model::Model net = model::LoadModel(o->checkpoint);
    const std::vector<std::string> labels = LoadLabels(o->checkpoint);
    if (labels.size() != net.config().num_classes) {
      throw ConfigError("label file does not match the checkpoint's class count");
    }
    const dataset::Manifest manifest = dataset::ReadManifest(o->manifest);
    dataset::CheckLabels(manifest, labels);
    const auto samples =
        LoadSplit(o->manifest, manifest, labels, net.config(), ParseSplit(o->split));
    if (samples.empty()) throw ConfigError("no rows in split " + o->split);
    const model::Evaluation ev = model::Evaluate(net, samples, o->batch);
    const fs::path dir =
        o->report_dir.empty() ? fs::path(o->checkpoint + ".eval") : fs::path(o->report_dir);
    ctx.Report(WriteEvaluation(dir, o->split, ev, labels, samples));
  };
}

std::map<std::string, std::string> LoadAliases(const std::string& path) {
  std::map<std::string, std::string> out;
  size_t line_no = 0;
  for (const std::string& raw : Split(ReadFile(path), '\n')) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = Split(line, '\t');
    if (f.size() != 2 || Trim(f[0]).empty() || Trim(f[1]).empty()) {
      throw SyntaxError("aliases line " + std::to_string(line_no) +
                        ": expected label<TAB>entity");
    }
    out[std::string(Trim(f[0]))] = std::string(Trim(f[1]));
  }
  return out;
}

void RegisterClassify(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string image, checkpoint, store, aliases, report;
    size_t top_k = 5;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "classify", "Predict a pattern category and show its cultural neighborhood");
  cmd->add_option("--image", o->image, "PPM image")->required();
  cmd->add_option("--checkpoint", o->checkpoint, "Checkpoint written by train")->required();
  cmd->add_option("--store", o->store, "Knowledge-graph store");
  cmd->add_option("--aliases", o->aliases, "label<TAB>entity table");
  cmd->add_option("--top-k", o->top_k, "Categories listed")->capture_default_str();
  cmd->add_option("--report", o->report, "JSON report path");
  ctx.actions[cmd] = [o, &ctx] {
    model::Model net = model::LoadModel(o->checkpoint);
    const std::vector<std::string> labels = LoadLabels(o->checkpoint);
    if (labels.size() != net.config().num_classes) {
      throw ConfigError("label file does not match the checkpoint's class count");
    }
    const model::ArchConfig& arch = net.config();
    tensor::Tensor chw = dataset::ToTensor(dataset::ReadPpm(o->image));
    if (chw.dim(1) != arch.height || chw.dim(2) != arch.width) {
      chw = dataset::ResizeBilinear(chw, arch.height, arch.width);
    }
    const std::vector<double> probs = model::Predict(net, chw);
    std::vector<size_t> order(probs.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return probs[a] > probs[b]; });
    const std::string& category = labels[order.front()];

    json doc;
    doc["image"] = o->image;
    doc["category"] = category;
    doc["confidence"] = probs[order.front()];
    json softmax = json::object();
    for (size_t i = 0; i < labels.size(); ++i) softmax[labels[i]] = probs[i];
    doc["softmax"] = softmax;

    std::string text = "category:   " + category + "\n";
    text += "confidence: " + Fixed(probs[order.front()]) + "\n";
    size_t width = 0;
    for (const auto& l : labels) width = std::max(width, DisplayWidth(l));
    json top = json::array();
    for (size_t r = 0; r < std::min(o->top_k, order.size()); ++r) {
      const size_t i = order[r];
      top.push_back({{"label", labels[i]}, {"probability", probs[i]}});
      text += "  " + PadRight(labels[i], width) + "  " + FormatDouble(probs[i], 17) + "\n";
    }
    doc["top"] = top;

    // Image -> category -> culture: the alias picks the pattern entity.
    std::string unavailable;
    std::optional<std::string> entity;
    if (o->aliases.empty()) {
      unavailable = "no alias table given";
    } else {
      const auto aliases = LoadAliases(o->aliases);
      auto it = aliases.find(category);
      if (it == aliases.end()) {
        unavailable = "no alias for label '" + category + "'";
      } else {
        entity = it->second;
      }
    }
    if (entity && o->store.empty()) unavailable = "no store given";
    json neighbors = json::object();
    if (unavailable.empty()) {
      kg::GraphStore store;
      {
        if (!fs::exists(o->store)) throw IoError("store not found: " + o->store);
        FileLock lock(o->store, FileLock::Mode::kShared);
        store = kg::LoadStore(o->store);
      }
      const std::string pattern = *store.schema().ResolveConcept("Pattern");
      if (!store.FindNode(*entity, pattern)) {
        unavailable = "entity '" + *entity + "' not in the store";
      } else {
        text += "entity:     " + *entity + " (" + pattern + ")\n";
        for (const std::string& rel : CultureRelations()) {
          json names = json::array();
          std::string line;
          for (const kg::Adjacent& a :
               store.Neighbors(*entity, rel, kg::Direction::kOut, pattern)) {
            const std::string& n = store.node(a.neighbor).name;
            names.push_back(n);
            line += (line.empty() ? "" : ", ") + n;
          }
          neighbors[rel] = names;
          text += "  " + rel + ": " + (line.empty() ? "-" : line) + "\n";
        }
      }
    }
    doc["entity"] = entity ? json(*entity) : json(nullptr);
    doc["kg_available"] = unavailable.empty();
    if (unavailable.empty()) {
      doc["neighbors"] = neighbors;
    } else {
      doc["kg_note"] = unavailable;
      text += "knowledge graph: unavailable (" + unavailable + ")\n";
    }
    if (!o->report.empty()) WriteJson(o->report, doc);
    ctx.out() << text;
  };
}

}  // namespace

void RegisterVisionCommands(CLI::App& app, Context& ctx) {
  RegisterGenData(app, ctx);
  RegisterSplit(app, ctx);
  RegisterTrain(app, ctx);
  RegisterEval(app, ctx);
  RegisterClassify(app, ctx);
}

}  // namespace batik::app
