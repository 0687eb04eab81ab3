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

#include "batik/embed/word2vec.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "batik/core/error.h"
#include "batik/core/text.h"
#include "batik/simd/kernels.h"

namespace batik::embed {

namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow.
double LogSigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double PlainDot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void AddScaled(std::vector<double>& dst, double g, std::span<const double> x) {
  for (size_t i = 0; i < x.size(); ++i) dst[i] += g * x[i];
}

std::vector<double>& GradFor(PairGradients& out, int32_t id, size_t dim) {
  for (OutputGradient& og : out.output_grads) {
    if (og.id == id) return og.grad;
  }
  out.output_grads.push_back({id, std::vector<double>(dim, 0.0)});
  return out.output_grads.back().grad;
}

PairGradients LossAndGradientsForHidden(std::span<const double> hidden,
                                        int32_t context,
                                        std::span<const int32_t> negatives,
                                        const EmbeddingMatrix& emb) {
  const size_t dim = emb.dim();
  PairGradients out;
  out.center_grad.assign(dim, 0.0);
  auto term = [&](int32_t id, bool positive) {
    const double s = PlainDot(emb.Output(id), hidden);
    // d/ds of -log s(s) is s(s) - 1; of -log s(-s) is s(s).
    out.loss -= positive ? LogSigmoid(s) : LogSigmoid(-s);
    const double g = positive ? Sigmoid(s) - 1.0 : Sigmoid(s);
    AddScaled(out.center_grad, g, emb.Output(id));
    AddScaled(GradFor(out, id, dim), g, hidden);
  };
  term(context, true);
  for (int32_t k : negatives) term(k, false);
  return out;
}

void CheckId(const EmbeddingMatrix& emb, int32_t id) {
  if (id < 0 || static_cast<size_t>(id) >= emb.rows()) {
    throw InvalidArgument("embedding row out of range: " + std::to_string(id));
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (dim < 1) throw ConfigError("embedding dim must be >= 1");
  if (window < 1) throw ConfigError("window must be >= 1");
  if (negatives < 0) throw ConfigError("negatives must be >= 0");
  if (!(min_alpha > 0.0 && min_alpha <= alpha0)) {
    throw ConfigError("require 0 < min_alpha <= alpha0");
  }
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

EmbeddingMatrix::EmbeddingMatrix(size_t rows, size_t dim)
    : rows_(rows),
      dim_(dim),
      input_(rows * dim, 0.0),
      output_(rows * dim, 0.0) {}

EmbeddingMatrix EmbeddingMatrix::Initialize(size_t rows, size_t dim,
                                            uint64_t seed) {
  EmbeddingMatrix m(rows, dim);
  Rng rng(seed);
  const double half = 0.5 / static_cast<double>(dim);
  for (double& x : m.input_) x = rng.Uniform(-half, half);
  return m;
}

bool EmbeddingMatrix::AllFinite() const {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(input_.begin(), input_.end(), finite) &&
         std::all_of(output_.begin(), output_.end(), finite);
}

NoiseDistribution NoiseDistribution::Build(const corpus::Vocabulary& vocab) {
  return FromCounts(vocab.counts());
}

NoiseDistribution NoiseDistribution::FromCounts(
    std::span<const int64_t> counts) {
  if (counts.empty()) {
    throw InvalidArgument("noise distribution needs a non-empty vocabulary");
  }
  NoiseDistribution d;
  double total = 0.0;
  d.probabilities_.reserve(counts.size());
  for (int64_t c : counts) {
    if (c <= 0) throw InvalidArgument("noise distribution: count must be > 0");
    d.probabilities_.push_back(std::pow(static_cast<double>(c), kPower));
    total += d.probabilities_.back();
  }
  double running = 0.0;
  d.cumulative_.reserve(counts.size());
  for (double& p : d.probabilities_) {
    p /= total;
    running += p;
    d.cumulative_.push_back(running);
  }
  d.cumulative_.back() = 1.0;
  return d;
}

int32_t NoiseDistribution::Sample(Rng& rng) const {
  const double u = rng.Uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = static_cast<int32_t>(it - cumulative_.begin());
  return std::min(idx, static_cast<int32_t>(cumulative_.size() - 1));
}

std::vector<SkipGramPair> GenerateSkipGramPairs(std::span<const int32_t> ids,
                                                int window) {
  std::vector<SkipGramPair> pairs;
  const auto n = static_cast<ptrdiff_t>(ids.size());
  for (ptrdiff_t t = 0; t < n; ++t) {
    const ptrdiff_t lo = std::max<ptrdiff_t>(0, t - window);
    const ptrdiff_t hi = std::min<ptrdiff_t>(n - 1, t + window);
    for (ptrdiff_t c = lo; c <= hi; ++c) {
      if (c != t) pairs.push_back({ids[t], ids[c]});
    }
  }
  return pairs;
}

std::vector<CbowItem> GenerateCbowItems(std::span<const int32_t> ids,
                                        int window) {
  std::vector<CbowItem> items;
  const auto n = static_cast<ptrdiff_t>(ids.size());
  for (ptrdiff_t t = 0; t < n; ++t) {
    CbowItem item{{}, ids[t]};
    const ptrdiff_t lo = std::max<ptrdiff_t>(0, t - window);
    const ptrdiff_t hi = std::min<ptrdiff_t>(n - 1, t + window);
    for (ptrdiff_t c = lo; c <= hi; ++c) {
      if (c != t) item.context.push_back(ids[c]);
    }
    if (!item.context.empty()) items.push_back(std::move(item));
  }
  return items;
}

PairGradients PairLossAndGradients(int32_t center, int32_t context,
                                   std::span<const int32_t> negatives,
                                   const EmbeddingMatrix& emb) {
  CheckId(emb, center);
  CheckId(emb, context);
  for (int32_t k : negatives) CheckId(emb, k);
  return LossAndGradientsForHidden(emb.Input(center), context, negatives, emb);
}

PairGradients CbowLossAndGradients(std::span<const int32_t> context,
                                   int32_t center,
                                   std::span<const int32_t> negatives,
                                   const EmbeddingMatrix& emb) {
  if (context.empty()) throw InvalidArgument("CBOW item without context");
  CheckId(emb, center);
  for (int32_t k : negatives) CheckId(emb, k);
  std::vector<double> hidden(emb.dim(), 0.0);
  for (int32_t c : context) {
    CheckId(emb, c);
    AddScaled(hidden, 1.0, emb.Input(c));
  }
  const double inv = 1.0 / static_cast<double>(context.size());
  for (double& h : hidden) h *= inv;
  PairGradients out = LossAndGradientsForHidden(hidden, center, negatives, emb);
  for (double& g : out.center_grad) g *= inv;
  return out;
}

namespace {

// Gradient step for a hidden vector already in scratch.hidden. Output rows
// are updated from the pre-update state; scratch.hidden_grad receives
// d loss / d hidden.
double OutputStep(int32_t target, std::span<const int32_t> negatives,
                  double alpha, EmbeddingMatrix& emb, SgdScratch& scratch) {
  const size_t dim = emb.dim();
  const std::span<const double> hidden(scratch.hidden);
  scratch.hidden_grad.assign(dim, 0.0);
  const size_t count = negatives.size() + 1;
  double coeffs[64];
  std::vector<double> heap;
  double* g = coeffs;
  if (count > 64) {
    heap.resize(count);
    g = heap.data();
  }
  double loss = 0.0;
  for (size_t i = 0; i < count; ++i) {
    const int32_t id = i == 0 ? target : negatives[i - 1];
    const double s = simd::Dot(emb.Output(id), hidden);
    if (i == 0) {
      loss -= LogSigmoid(s);
      g[i] = Sigmoid(s) - 1.0;
    } else {
      loss -= LogSigmoid(-s);
      g[i] = Sigmoid(s);
    }
    simd::Axpy(g[i], emb.Output(id), scratch.hidden_grad);
  }
  for (size_t i = 0; i < count; ++i) {
    const int32_t id = i == 0 ? target : negatives[i - 1];
    simd::Axpy(-alpha * g[i], hidden, emb.Output(id));
  }
  return loss;
}

}  // namespace

double SkipGramStep(int32_t center, int32_t context,
                    std::span<const int32_t> negatives, double alpha,
                    EmbeddingMatrix& emb, SgdScratch& scratch) {
  const auto in = emb.Input(center);
  scratch.hidden.assign(in.begin(), in.end());
  const double loss = OutputStep(context, negatives, alpha, emb, scratch);
  simd::Axpy(-alpha, scratch.hidden_grad, emb.Input(center));
  return loss;
}

double CbowStep(std::span<const int32_t> context, int32_t center,
                std::span<const int32_t> negatives, double alpha,
                EmbeddingMatrix& emb, SgdScratch& scratch) {
  scratch.hidden.assign(emb.dim(), 0.0);
  for (int32_t c : context) simd::Axpy(1.0, emb.Input(c), scratch.hidden);
  const double inv = 1.0 / static_cast<double>(context.size());
  simd::Scale(inv, scratch.hidden);
  const double loss = OutputStep(center, negatives, alpha, emb, scratch);
  for (int32_t c : context) {
    simd::Axpy(-alpha * inv, scratch.hidden_grad, emb.Input(c));
  }
  return loss;
}

void DrawNegatives(const NoiseDistribution& noise, int32_t exclude, int count,
                   Rng& rng, std::vector<int32_t>& out) {
  constexpr int kMaxAttempts = 100;
  out.clear();
  for (int k = 0; k < count; ++k) {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      const int32_t id = noise.Sample(rng);
      if (id != exclude) {
        out.push_back(id);
        break;
      }
    }
  }
}

namespace {

struct Shard {
  size_t begin;
  size_t end;
};

void TrainShard(const std::vector<std::vector<int32_t>>& sentences,
                Shard shard, const TrainConfig& cfg,
                const NoiseDistribution& noise, int64_t total_positions,
                std::atomic<int64_t>& processed, Rng& rng,
                EmbeddingMatrix& emb, double& loss_sum, int64_t& updates) {
  SgdScratch scratch;
  std::vector<int32_t> negatives;
  std::vector<int32_t> context;
  const double span = cfg.alpha0 - cfg.min_alpha;
  for (size_t s = shard.begin; s < shard.end; ++s) {
    const auto& ids = sentences[s];
    const auto n = static_cast<ptrdiff_t>(ids.size());
    for (ptrdiff_t t = 0; t < n; ++t) {
      const int64_t done = processed.fetch_add(1, std::memory_order_relaxed);
      const double alpha = std::max(
          cfg.min_alpha,
          cfg.alpha0 - span * static_cast<double>(done) /
                           static_cast<double>(total_positions));
      const ptrdiff_t lo = std::max<ptrdiff_t>(0, t - cfg.window);
      const ptrdiff_t hi = std::min<ptrdiff_t>(n - 1, t + cfg.window);
      if (cfg.mode == Mode::kSkipGram) {
        for (ptrdiff_t c = lo; c <= hi; ++c) {
          if (c == t) continue;
          DrawNegatives(noise, ids[c], cfg.negatives, rng, negatives);
          loss_sum += SkipGramStep(ids[t], ids[c], negatives, alpha, emb,
                                   scratch);
          ++updates;
        }
      } else {
        context.clear();
        for (ptrdiff_t c = lo; c <= hi; ++c) {
          if (c != t) context.push_back(ids[c]);
        }
        if (context.empty()) continue;
        DrawNegatives(noise, ids[t], cfg.negatives, rng, negatives);
        loss_sum += CbowStep(context, ids[t], negatives, alpha, emb, scratch);
        ++updates;
      }
    }
  }
}

}  // namespace

EmbeddingMatrix Train(const corpus::TokenSeq& corpus,
                      const corpus::Vocabulary& vocab,
                      const TrainConfig& config, TrainStats* stats) {
  config.Validate();
  std::vector<std::vector<int32_t>> sentences;
  int64_t positions = 0;
  for (const corpus::Sentence& s : corpus) {
    std::vector<int32_t> ids;
    for (const std::string& t : s) {
      if (auto id = vocab.Id(t)) ids.push_back(*id);
    }
    positions += static_cast<int64_t>(ids.size());
    if (!ids.empty()) sentences.push_back(std::move(ids));
  }
  if (positions == 0 || vocab.empty()) {
    throw InvalidArgument("embedding training needs a non-empty corpus");
  }
  EmbeddingMatrix emb = EmbeddingMatrix::Initialize(
      vocab.size(), static_cast<size_t>(config.dim), config.seed);
  if (config.epochs == 0) return emb;

  const NoiseDistribution noise = NoiseDistribution::Build(vocab);
  const int64_t total = positions * config.epochs;
  std::atomic<int64_t> processed{0};
  const auto workers = static_cast<size_t>(
      std::min<size_t>(static_cast<size_t>(config.workers), sentences.size()));
  std::vector<Rng> rngs;
  for (size_t w = 0; w < workers; ++w) {
    rngs.emplace_back(config.seed ^ (0x9E3779B97F4A7C15ULL * (w + 1)));
  }
  TrainStats local;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<double> loss(workers, 0.0);
    std::vector<int64_t> updates(workers, 0);
    if (workers == 1) {
      TrainShard(sentences, {0, sentences.size()}, config, noise, total,
                 processed, rngs[0], emb, loss[0], updates[0]);
    } else {
      // Hogwild: workers update shared rows without synchronisation.
      std::vector<std::thread> threads;
      const size_t per = (sentences.size() + workers - 1) / workers;
      for (size_t w = 0; w < workers; ++w) {
        const Shard shard{std::min(w * per, sentences.size()),
                          std::min((w + 1) * per, sentences.size())};
        threads.emplace_back([&, w, shard] {
          TrainShard(sentences, shard, config, noise, total, processed,
                     rngs[w], emb, loss[w], updates[w]);
        });
      }
      for (auto& t : threads) t.join();
    }
    double loss_sum = 0.0;
    int64_t n = 0;
    for (size_t w = 0; w < workers; ++w) {
      loss_sum += loss[w];
      n += updates[w];
    }
    local.updates += n;
    local.epoch_mean_loss.push_back(n > 0 ? loss_sum / static_cast<double>(n)
                                          : 0.0);
  }
  if (!emb.AllFinite()) throw NumericError("embedding training diverged");
  if (stats != nullptr) *stats = std::move(local);
  return emb;
}

Similarity Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw InvalidArgument("cosine: dimension mismatch");
  }
  const double uu = simd::Dot(u, u);
  const double vv = simd::Dot(v, v);
  if (uu == 0.0 || vv == 0.0) return {0.0, true};
  const double c = simd::Dot(u, v) / std::sqrt(uu * vv);
  return {std::clamp(c, -1.0, 1.0), false};
}

std::vector<Neighbor> NearestNeighbors(const EmbeddingMatrix& emb,
                                       const corpus::Vocabulary& vocab,
                                       std::string_view word, size_t k) {
  const auto id = vocab.Id(word);
  if (!id) throw InvalidArgument("out-of-vocabulary word: " + std::string(word));
  std::vector<Neighbor> all;
  if (k == 0) return all;
  for (size_t i = 0; i < vocab.size(); ++i) {
    if (static_cast<int32_t>(i) == *id) continue;
    all.push_back({vocab.Token(static_cast<int32_t>(i)),
                   Cosine(emb.Input(*id), emb.Input(i)).value});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.token < b.token;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

namespace {

constexpr char kMagic[8] = {'B', 'A', 'T', 'I', 'K', 'E', 'M', 'B'};
constexpr uint32_t kVersion = 1;

template <typename T>
void WritePod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in, const std::filesystem::path& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw IoError("truncated embedding file: " + path.string());
  }
  return v;
}

}  // namespace

void SaveEmbeddings(const std::filesystem::path& path,
                    const EmbeddingMatrix& emb,
                    const corpus::Vocabulary& vocab) {
  if (emb.rows() != vocab.size()) {
    throw InvalidArgument("embedding rows do not match vocabulary size");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  WritePod(out, kVersion);
  WritePod(out, uint32_t{1});
  WritePod(out, static_cast<uint64_t>(emb.rows()));
  WritePod(out, static_cast<uint64_t>(emb.dim()));
  out.write(reinterpret_cast<const char*>(emb.input_data().data()),
            static_cast<std::streamsize>(emb.input_data().size() *
                                         sizeof(double)));
  out.write(reinterpret_cast<const char*>(emb.output_data().data()),
            static_cast<std::streamsize>(emb.output_data().size() *
                                         sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
  WriteFile(path.string() + ".vocab", vocab.Serialize());
}

LoadedEmbeddings LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw IoError("not an embedding file: " + path.string());
  }
  const auto version = ReadPod<uint32_t>(in, path);
  if (version != kVersion) {
    throw IoError("unsupported embedding file version " +
                  std::to_string(version));
  }
  const auto flags = ReadPod<uint32_t>(in, path);
  const auto rows = ReadPod<uint64_t>(in, path);
  const auto dim = ReadPod<uint64_t>(in, path);
  LoadedEmbeddings out;
  out.matrix = EmbeddingMatrix(rows, dim);
  auto read_table = [&](std::span<double> dst) {
    if (!in.read(reinterpret_cast<char*>(dst.data()),
                 static_cast<std::streamsize>(dst.size() * sizeof(double)))) {
      throw IoError("truncated embedding file: " + path.string());
    }
  };
  if (rows > 0) {
    read_table({out.matrix.Input(0).data(), rows * dim});
    if (flags & 1u) read_table({out.matrix.Output(0).data(), rows * dim});
  }
  out.vocab = corpus::Vocabulary::Parse(ReadFile(path.string() + ".vocab"));
  if (out.vocab.size() != rows) {
    throw IoError("vocabulary sidecar does not match embedding rows");
  }
  return out;
}

std::string ExportText(const EmbeddingMatrix& emb,
                       const corpus::Vocabulary& vocab) {
  std::string out =
      std::to_string(emb.rows()) + " " + std::to_string(emb.dim()) + "\n";
  for (size_t i = 0; i < emb.rows(); ++i) {
    out += vocab.Token(static_cast<int32_t>(i));
    for (double x : emb.Input(i)) {
      out += ' ';
      out += FormatDouble(x);
    }
    out += '\n';
  }
  return out;
}

}  // namespace batik::embed
