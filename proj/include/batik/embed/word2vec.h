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

#ifndef BATIK_EMBED_WORD2VEC_H_
#define BATIK_EMBED_WORD2VEC_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "batik/core/random.h"
#include "batik/corpus/corpus.h"

namespace batik::embed {

enum class Mode { kSkipGram, kCbow };

struct TrainConfig {
  Mode mode = Mode::kSkipGram;
  int dim = 200;
  int window = 5;
  int negatives = 5;
  double alpha0 = 0.025;
  double min_alpha = 0.0001;
  int epochs = 5;
  uint64_t seed = 1;
  // >1 enables lock-free parallel updates; results are then no longer
  // bit-reproducible.
  int workers = 1;

  void Validate() const;
};

// Input ("center") and output ("context") vector tables, row-major.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(size_t rows, size_t dim);

  // Input rows uniform in [-0.5/dim, 0.5/dim], output rows zero.
  static EmbeddingMatrix Initialize(size_t rows, size_t dim, uint64_t seed);

  size_t rows() const { return rows_; }
  size_t dim() const { return dim_; }

  std::span<double> Input(size_t row) {
    return {input_.data() + row * dim_, dim_};
  }
  std::span<const double> Input(size_t row) const {
    return {input_.data() + row * dim_, dim_};
  }
  std::span<double> Output(size_t row) {
    return {output_.data() + row * dim_, dim_};
  }
  std::span<const double> Output(size_t row) const {
    return {output_.data() + row * dim_, dim_};
  }

  const std::vector<double>& input_data() const { return input_; }
  const std::vector<double>& output_data() const { return output_; }

  bool AllFinite() const;

  friend bool operator==(const EmbeddingMatrix&,
                         const EmbeddingMatrix&) = default;

 private:
  size_t rows_ = 0;
  size_t dim_ = 0;
  std::vector<double> input_;
  std::vector<double> output_;
};

// Unigram distribution raised to the 3/4 power.
class NoiseDistribution {
 public:
  static constexpr double kPower = 0.75;

  static NoiseDistribution Build(const corpus::Vocabulary& vocab);
  static NoiseDistribution FromCounts(std::span<const int64_t> counts);

  double Probability(int32_t id) const { return probabilities_[id]; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  size_t size() const { return probabilities_.size(); }

  int32_t Sample(Rng& rng) const;

 private:
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

struct SkipGramPair {
  int32_t center;
  int32_t context;
  friend bool operator==(const SkipGramPair&, const SkipGramPair&) = default;
  friend auto operator<=>(const SkipGramPair&, const SkipGramPair&) = default;
};

struct CbowItem {
  std::vector<int32_t> context;
  int32_t center;
};

// Every (t, t+j) with 0 < |j| <= window inside one sentence.
std::vector<SkipGramPair> GenerateSkipGramPairs(std::span<const int32_t> ids,
                                                int window);
// One item per position that has at least one context word.
std::vector<CbowItem> GenerateCbowItems(std::span<const int32_t> ids,
                                        int window);

struct OutputGradient {
  int32_t id;
  std::vector<double> grad;
};

struct PairGradients {
  double loss = 0.0;
  // d loss / d input row of the center word (or of each CBOW context word,
  // see CbowLossAndGradients).
  std::vector<double> center_grad;
  // One entry per distinct output row, in order of first use.
  std::vector<OutputGradient> output_grads;
};

// loss = -log s(u_ctx . v_c) - sum_k log s(-u_k . v_c), with v the input
// table and u the output table.
PairGradients PairLossAndGradients(int32_t center, int32_t context,
                                   std::span<const int32_t> negatives,
                                   const EmbeddingMatrix& emb);

// Same objective with the mean of the context input vectors in place of the
// center vector. center_grad is the gradient with respect to each context
// row (identical for all of them).
PairGradients CbowLossAndGradients(std::span<const int32_t> context,
                                   int32_t center,
                                   std::span<const int32_t> negatives,
                                   const EmbeddingMatrix& emb);

// Scratch buffers for the in-place update path.
struct SgdScratch {
  std::vector<double> hidden;
  std::vector<double> hidden_grad;
};

// In-place SGD update equivalent to applying PairLossAndGradients' result
// scaled by -alpha. Returns the loss before the update.
double SkipGramStep(int32_t center, int32_t context,
                    std::span<const int32_t> negatives, double alpha,
                    EmbeddingMatrix& emb, SgdScratch& scratch);

double CbowStep(std::span<const int32_t> context, int32_t center,
                std::span<const int32_t> negatives, double alpha,
                EmbeddingMatrix& emb, SgdScratch& scratch);

// Draws `count` negatives, resampling up to 100 times when a draw hits
// `exclude`; a negative that still collides is skipped.
void DrawNegatives(const NoiseDistribution& noise, int32_t exclude, int count,
                   Rng& rng, std::vector<int32_t>& out);

struct TrainStats {
  std::vector<double> epoch_mean_loss;
  int64_t updates = 0;
};

// Sentences are mapped through the vocabulary; out-of-vocabulary tokens are
// dropped. The learning rate decays linearly from alpha0 to min_alpha over
// all training positions.
EmbeddingMatrix Train(const corpus::TokenSeq& corpus,
                      const corpus::Vocabulary& vocab,
                      const TrainConfig& config, TrainStats* stats = nullptr);

struct Similarity {
  double value = 0.0;
  // True when either argument is the zero vector (value is then 0).
  bool degenerate = false;
};

Similarity Cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  std::string token;
  double similarity;
};

// Descending similarity over input vectors, query excluded, ties broken by
// token byte order.
std::vector<Neighbor> NearestNeighbors(const EmbeddingMatrix& emb,
                                       const corpus::Vocabulary& vocab,
                                       std::string_view word, size_t k);

// Binary: "BATIKEMB", u32 version, u32 flags (bit 0: output table present),
// u64 rows, u64 dim, then row-major doubles (input table, then output
// table). The vocabulary goes to "<path>.vocab".
void SaveEmbeddings(const std::filesystem::path& path,
                    const EmbeddingMatrix& emb,
                    const corpus::Vocabulary& vocab);

struct LoadedEmbeddings {
  EmbeddingMatrix matrix;
  corpus::Vocabulary vocab;
};
LoadedEmbeddings LoadEmbeddings(const std::filesystem::path& path);

// "rows dim" header, then "token v1 ... vdim" per row (input table).
std::string ExportText(const EmbeddingMatrix& emb,
                       const corpus::Vocabulary& vocab);

}  // namespace batik::embed

#endif  // BATIK_EMBED_WORD2VEC_H_
