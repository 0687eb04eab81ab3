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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "batik/core/error.h"
#include "batik/core/random.h"
#include "batik/core/text.h"
#include "batik/embed/word2vec.h"
#include "batik/simd/kernels.h"
#include "embed_oracle.h"

namespace batik::embed {
namespace {

namespace fs = std::filesystem;
using testing::CbowLoss;
using testing::RandomMatrix;
using testing::SkipLoss;

double RelErr(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
}

TEST(NoiseTest, PowerThreeQuarters) {
  const std::vector<int64_t> counts = {8, 1};
  const auto d = NoiseDistribution::FromCounts(counts);
  // 8^0.75 / (8^0.75 + 1), evaluated independently.
  EXPECT_NEAR(d.Probability(0), 0.8262932434158183, 1e-10);
  EXPECT_NEAR(d.Probability(1), 1.0 - 0.8262932434158183, 1e-10);
  EXPECT_DOUBLE_EQ(d.cumulative().back(), 1.0);
}

TEST(NoiseTest, UniformAndSingleton) {
  const std::vector<int64_t> uniform = {3, 3, 3, 3};
  const auto d = NoiseDistribution::FromCounts(uniform);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(d.Probability(i), 0.25, 1e-15);
  const std::vector<int64_t> one = {17};
  EXPECT_DOUBLE_EQ(NoiseDistribution::FromCounts(one).Probability(0), 1.0);
  EXPECT_THROW(NoiseDistribution::FromCounts({}), Error);
}

TEST(NoiseTest, CumulativeStrictlyIncreasing) {
  const std::vector<int64_t> counts = {100, 40, 7, 7, 1};
  const auto d = NoiseDistribution::FromCounts(counts);
  for (size_t i = 1; i < d.cumulative().size(); ++i) {
    EXPECT_LT(d.cumulative()[i - 1], d.cumulative()[i]);
  }
}

TEST(NoiseTest, EmpiricalFrequenciesWithinThreeStandardErrors) {
  const std::vector<int64_t> counts = {50, 20, 9, 4, 1};
  const auto d = NoiseDistribution::FromCounts(counts);
  Rng rng(123);
  constexpr int kDraws = 1000000;
  std::vector<int> hits(counts.size(), 0);
  for (int i = 0; i < kDraws; ++i) ++hits[d.Sample(rng)];
  for (size_t w = 0; w < counts.size(); ++w) {
    const double p = d.Probability(static_cast<int32_t>(w));
    const double se = std::sqrt(p * (1 - p) / kDraws);
    EXPECT_LT(std::abs(hits[w] / double(kDraws) - p), 3 * se) << "word " << w;
  }
}

TEST(PairsTest, WindowOneEnumeration) {
  const std::vector<int32_t> ids = {0, 1, 2};
  auto pairs = GenerateSkipGramPairs(ids, 1);
  std::sort(pairs.begin(), pairs.end());
  const std::vector<SkipGramPair> want = {{0, 1}, {1, 0}, {1, 2}, {2, 1}};
  EXPECT_EQ(pairs, want);
}

TEST(PairsTest, SingleTokenHasNoPairs) {
  const std::vector<int32_t> ids = {4};
  EXPECT_TRUE(GenerateSkipGramPairs(ids, 5).empty());
  EXPECT_TRUE(GenerateCbowItems(ids, 5).empty());
}

TEST(PairsTest, WideWindowGivesAllOrderedPositionPairs) {
  const std::vector<int32_t> ids = {10, 11, 12, 13, 14};
  auto pairs = GenerateSkipGramPairs(ids, 9);
  std::vector<SkipGramPair> want;
  for (size_t i = 0; i < ids.size(); ++i) {
    for (size_t j = 0; j < ids.size(); ++j) {
      if (i != j) want.push_back({ids[i], ids[j]});
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(pairs, want);
}

TEST(PairsTest, CbowContextsMatchSkipGramWindows) {
  Rng rng(2);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<int32_t> ids(1 + rng.Below(12));
    for (auto& x : ids) x = static_cast<int32_t>(rng.Below(100));
    const int c = 1 + static_cast<int>(rng.Below(4));
    const auto items = GenerateCbowItems(ids, c);
    size_t total = 0;
    for (const auto& it : items) total += it.context.size();
    EXPECT_EQ(total, GenerateSkipGramPairs(ids, c).size());
    // Positions never reach past the sentence or the window.
    for (const auto& it : items) {
      EXPECT_LE(it.context.size(), static_cast<size_t>(2 * c));
    }
  }
}

TEST(PairLossTest, ZeroInitGivesKPlusOneLn2) {
  const EmbeddingMatrix m(6, 4);
  for (int k = 0; k <= 5; ++k) {
    std::vector<int32_t> neg;
    for (int i = 0; i < k; ++i) neg.push_back(2 + i % 4);
    const auto g = PairLossAndGradients(0, 1, neg, m);
    EXPECT_NEAR(g.loss, (k + 1) * std::log(2.0), 1e-12);
  }
}

TEST(PairLossTest, NoNegatives) {
  Rng rng(4);
  const auto m = RandomMatrix(3, 5, rng);
  const auto g = PairLossAndGradients(0, 1, {}, m);
  double s = 0;
  for (size_t i = 0; i < 5; ++i) s += m.Input(0)[i] * m.Output(1)[i];
  EXPECT_NEAR(g.loss, -std::log(1.0 / (1.0 + std::exp(-s))), 1e-14);
}

TEST(PairLossTest, LossNonNegative) {
  Rng rng(8);
  for (int iter = 0; iter < 200; ++iter) {
    const auto m = RandomMatrix(5, 3, rng, 4.0);
    const auto g = PairLossAndGradients(0, 1, std::vector<int32_t>{2, 3, 4}, m);
    EXPECT_GE(g.loss, 0.0);
  }
}

// Central differences on every participating coordinate.
TEST(PairLossTest, GradientsMatchFiniteDifferences) {
  Rng rng(2024);
  double worst = 0;
  for (int iter = 0; iter < 100; ++iter) {
    const size_t rows = 8;
    const size_t dim = 1 + rng.Below(10);
    auto m = RandomMatrix(rows, dim, rng);
    const auto center = static_cast<int32_t>(rng.Below(rows));
    const auto ctx = static_cast<int32_t>(rng.Below(rows));
    std::vector<int32_t> neg(rng.Below(6));
    for (auto& k : neg) k = static_cast<int32_t>(rng.Below(rows));
    const auto g = PairLossAndGradients(center, ctx, neg, m);
    EXPECT_NEAR(g.loss, SkipLoss(m, center, ctx, neg), 1e-12);

    auto fd = [&](double& x) {
      const double h = 1e-5 * std::max(1.0, std::abs(x));
      const double saved = x;
      x = saved + h;
      const long double up = SkipLoss(m, center, ctx, neg);
      const double hi = x;
      x = saved - h;
      const long double down = SkipLoss(m, center, ctx, neg);
      const double lo = x;
      x = saved;
      return static_cast<double>((up - down) / (hi - lo));
    };
    for (size_t i = 0; i < dim; ++i) {
      worst = std::max(worst, RelErr(g.center_grad[i], fd(m.Input(center)[i])));
    }
    std::set<int32_t> touched = {ctx};
    touched.insert(neg.begin(), neg.end());
    EXPECT_EQ(g.output_grads.size(), touched.size());
    for (const auto& og : g.output_grads) {
      for (size_t i = 0; i < dim; ++i) {
        worst = std::max(worst, RelErr(og.grad[i], fd(m.Output(og.id)[i])));
      }
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(PairLossTest, CbowGradientsMatchFiniteDifferences) {
  Rng rng(77);
  double worst = 0;
  for (int iter = 0; iter < 100; ++iter) {
    const size_t rows = 9;
    const size_t dim = 1 + rng.Below(8);
    auto m = RandomMatrix(rows, dim, rng);
    // Distinct context rows so the per-row gradient is the full derivative.
    std::vector<int32_t> all(rows);
    for (size_t i = 0; i < rows; ++i) all[i] = static_cast<int32_t>(i);
    rng.Shuffle(all);
    const std::vector<int32_t> context(all.begin(), all.begin() + 1 + rng.Below(4));
    const auto center = static_cast<int32_t>(rng.Below(rows));
    std::vector<int32_t> neg(rng.Below(5));
    for (auto& k : neg) k = static_cast<int32_t>(rng.Below(rows));
    const auto g = CbowLossAndGradients(context, center, neg, m);
    EXPECT_NEAR(g.loss, CbowLoss(m, context, center, neg), 1e-12);
    for (int32_t c : context) {
      for (size_t i = 0; i < dim; ++i) {
        double& x = m.Input(c)[i];
        const double h = 1e-5 * std::max(1.0, std::abs(x));
        const double saved = x;
        x = saved + h;
        const long double up = CbowLoss(m, context, center, neg);
        const double hi = x;
        x = saved - h;
        const long double down = CbowLoss(m, context, center, neg);
        const double lo = x;
        x = saved;
        worst = std::max(worst, RelErr(g.center_grad[i],
                                       static_cast<double>((up - down) / (hi - lo))));
      }
    }
  }
  EXPECT_LT(worst, 1e-6);
}

// The fast in-place update must equal one explicit gradient step.
TEST(SgdStepTest, SkipGramStepEqualsReferenceStep) {
  for (auto isa : {simd::Isa::kScalar, simd::Isa::kAvx2}) {
    if (!simd::SetActive(isa)) continue;
    Rng rng(31);
    for (int iter = 0; iter < 50; ++iter) {
      const size_t rows = 6;
      const size_t dim = 1 + rng.Below(40);
      auto m = RandomMatrix(rows, dim, rng);
      const auto c = static_cast<int32_t>(rng.Below(rows));
      const auto ctx = static_cast<int32_t>(rng.Below(rows));
      std::vector<int32_t> neg(rng.Below(5));
      for (auto& k : neg) k = static_cast<int32_t>(rng.Below(rows));
      const double alpha = 0.05;

      auto expected = m;
      const auto g = PairLossAndGradients(c, ctx, neg, m);
      for (size_t i = 0; i < dim; ++i) expected.Input(c)[i] -= alpha * g.center_grad[i];
      for (const auto& og : g.output_grads) {
        for (size_t i = 0; i < dim; ++i) expected.Output(og.id)[i] -= alpha * og.grad[i];
      }
      SgdScratch scratch;
      const double loss = SkipGramStep(c, ctx, neg, alpha, m, scratch);
      EXPECT_NEAR(loss, g.loss, 1e-12);
      for (size_t i = 0; i < m.input_data().size(); ++i) {
        ASSERT_NEAR(m.input_data()[i], expected.input_data()[i], 1e-14);
        ASSERT_NEAR(m.output_data()[i], expected.output_data()[i], 1e-14);
      }
    }
  }
  simd::SetActive(simd::Isa::kScalar);
}

TEST(SgdStepTest, CbowStepEqualsReferenceStep) {
  Rng rng(41);
  for (int iter = 0; iter < 50; ++iter) {
    const size_t rows = 7;
    const size_t dim = 1 + rng.Below(20);
    auto m = RandomMatrix(rows, dim, rng);
    std::vector<int32_t> context(1 + rng.Below(4));
    for (auto& x : context) x = static_cast<int32_t>(rng.Below(rows));
    const auto center = static_cast<int32_t>(rng.Below(rows));
    std::vector<int32_t> neg(rng.Below(4));
    for (auto& k : neg) k = static_cast<int32_t>(rng.Below(rows));
    const double alpha = 0.1;
    auto expected = m;
    const auto g = CbowLossAndGradients(context, center, neg, m);
    for (int32_t c : context) {
      for (size_t i = 0; i < dim; ++i) expected.Input(c)[i] -= alpha * g.center_grad[i];
    }
    for (const auto& og : g.output_grads) {
      for (size_t i = 0; i < dim; ++i) expected.Output(og.id)[i] -= alpha * og.grad[i];
    }
    SgdScratch scratch;
    CbowStep(context, center, neg, alpha, m, scratch);
    for (size_t i = 0; i < m.input_data().size(); ++i) {
      ASSERT_NEAR(m.input_data()[i], expected.input_data()[i], 1e-14);
      ASSERT_NEAR(m.output_data()[i], expected.output_data()[i], 1e-14);
    }
  }
}

TEST(NegativesTest, ExcludedIdNeverDrawn) {
  const std::vector<int64_t> counts = {1000, 1, 1};
  const auto d = NoiseDistribution::FromCounts(counts);
  Rng rng(1);
  std::vector<int32_t> out;
  for (int i = 0; i < 200; ++i) {
    DrawNegatives(d, 0, 5, rng, out);
    EXPECT_LE(out.size(), 5u);
    for (int32_t k : out) EXPECT_NE(k, 0);
  }
  const std::vector<int64_t> single = {5};
  DrawNegatives(NoiseDistribution::FromCounts(single), 0, 3, rng, out);
  EXPECT_TRUE(out.empty());
}

corpus::TokenSeq ToyCorpus() {
  // Eight topics with four private words each; x and y always appear
  // together, adjacent, inside topic-0 sentences.
  Rng rng(3);
  corpus::TokenSeq corpus;
  for (int s = 0; s < 800; ++s) {
    const int topic = s % 2 == 0 ? 0 : static_cast<int>(rng.Below(8));
    corpus::Sentence sent;
    for (int i = 0; i < 8; ++i) {
      sent.push_back("t" + std::to_string(topic) + "w" +
                     std::to_string(rng.Below(4)));
    }
    if (s % 2 == 0) {
      const size_t at = rng.Below(sent.size());
      sent.insert(sent.begin() + static_cast<ptrdiff_t>(at), {"x", "y"});
    }
    corpus.push_back(std::move(sent));
  }
  return corpus;
}

TEST(TrainTest, CooccurringTokensBecomeSimilar) {
  const auto corpus = ToyCorpus();
  const auto vocab = corpus::Vocabulary::Build(corpus, 1);
  TrainConfig cfg;
  cfg.dim = 20;
  cfg.window = 2;
  cfg.epochs = 5;
  const auto emb = Train(corpus, vocab, cfg);
  const double xy =
      Cosine(emb.Input(*vocab.Id("x")), emb.Input(*vocab.Id("y"))).value;
  std::vector<double> sims;
  for (size_t i = 0; i < vocab.size(); ++i) {
    for (size_t j = i + 1; j < vocab.size(); ++j) {
      sims.push_back(Cosine(emb.Input(i), emb.Input(j)).value);
    }
  }
  std::nth_element(sims.begin(), sims.begin() + sims.size() / 2, sims.end());
  EXPECT_GT(xy, sims[sims.size() / 2]);
}

TEST(TrainTest, ZeroEpochsReturnsInitialMatrix) {
  const auto corpus = ToyCorpus();
  const auto vocab = corpus::Vocabulary::Build(corpus, 1);
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 0;
  cfg.seed = 5;
  EXPECT_EQ(Train(corpus, vocab, cfg),
            EmbeddingMatrix::Initialize(vocab.size(), 8, 5));
}

TEST(TrainTest, SameSeedIsBitReproducible) {
  const auto corpus = ToyCorpus();
  const auto vocab = corpus::Vocabulary::Build(corpus, 1);
  for (Mode mode : {Mode::kSkipGram, Mode::kCbow}) {
    TrainConfig cfg;
    cfg.mode = mode;
    cfg.dim = 10;
    cfg.epochs = 2;
    TrainStats s1, s2;
    const auto a = Train(corpus, vocab, cfg, &s1);
    const auto b = Train(corpus, vocab, cfg, &s2);
    EXPECT_EQ(a, b);
    EXPECT_EQ(s1.epoch_mean_loss, s2.epoch_mean_loss);
    EXPECT_EQ(s1.epoch_mean_loss.size(), 2u);
  }
}

TEST(TrainTest, MultiWorkerStaysFinite) {
  const auto corpus = ToyCorpus();
  const auto vocab = corpus::Vocabulary::Build(corpus, 1);
  TrainConfig cfg;
  cfg.dim = 10;
  cfg.epochs = 1;
  cfg.workers = 3;
  EXPECT_TRUE(Train(corpus, vocab, cfg).AllFinite());
}

TEST(TrainTest, EmptyCorpusAndBadConfigRejected) {
  const corpus::Vocabulary empty;
  EXPECT_THROW(Train({}, empty, TrainConfig{}), Error);
  TrainConfig bad;
  bad.min_alpha = 1.0;
  EXPECT_THROW(bad.Validate(), Error);
  bad = TrainConfig{};
  bad.window = 0;
  EXPECT_THROW(bad.Validate(), Error);
}

TEST(CosineTest, Identities) {
  const std::vector<double> v = {0.3, -1.2, 4.0};
  EXPECT_EQ(Cosine(v, v).value, 1.0);
  EXPECT_EQ(Cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}).value, 0.0);
  EXPECT_EQ(Cosine(std::vector<double>{1, 2}, std::vector<double>{2, 4}).value, 1.0);
  const auto z = Cosine(std::vector<double>{0, 0}, std::vector<double>{1, 1});
  EXPECT_TRUE(z.degenerate);
  EXPECT_EQ(z.value, 0.0);
}

TEST(NeighborsTest, OrderingAndLimits) {
  const auto vocab = corpus::Vocabulary::FromCounts(
      {{"q", 9}, {"b", 8}, {"a", 7}, {"c", 6}}, 30, 1);
  EmbeddingMatrix m(4, 2);
  auto set = [&](int r, double x, double y) {
    m.Input(r)[0] = x;
    m.Input(r)[1] = y;
  };
  set(0, 1, 0);
  set(1, 1, 1);  // b and a share a vector
  set(2, 1, 1);
  set(3, -1, 0);
  EXPECT_TRUE(NearestNeighbors(m, vocab, "q", 0).empty());
  const auto all = NearestNeighbors(m, vocab, "q", 10);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].token, "a");
  EXPECT_EQ(all[1].token, "b");
  EXPECT_EQ(all[0].similarity, all[1].similarity);
  EXPECT_EQ(all[2].token, "c");
  EXPECT_THROW(NearestNeighbors(m, vocab, "zz", 1), Error);
}

TEST(PersistenceTest, BinaryRoundTripAndTruncation) {
  Rng rng(6);
  const auto vocab =
      corpus::Vocabulary::FromCounts({{"蝴蝶纹", 9}, {"鱼纹", 5}}, 20, 5);
  const auto m = RandomMatrix(2, 3, rng);
  const fs::path p = fs::temp_directory_path() / "batik_embed_test.bin";
  SaveEmbeddings(p, m, vocab);
  const auto back = LoadEmbeddings(p);
  EXPECT_EQ(back.matrix, m);
  EXPECT_EQ(back.vocab.tokens(), vocab.tokens());

  std::string bytes = ReadFile(p);
  WriteFile(p, bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(LoadEmbeddings(p), Error);

  const std::string text = ExportText(m, vocab);
  EXPECT_EQ(text.substr(0, 4), "2 3\n");
  EXPECT_NE(text.find("\n鱼纹 "), std::string::npos);
}

}  // namespace
}  // namespace batik::embed
