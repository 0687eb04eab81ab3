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

#include <cmath>
#include <filesystem>
#include <numeric>

#include "batik/core/random.h"
#include "batik/simd/kernels.h"
#include "batik/tensor/checkpoint.h"
#include "batik/tensor/grad_check.h"
#include "batik/tensor/layers.h"
#include "batik/tensor/optim.h"
#include "batik/tensor/tensor.h"
#include "grad_sweep.h"
#include "test_util.h"

namespace batik::tensor {
namespace {

using testing::CheckLayer;
using testing::Spread;
using testing::ThrownKind;

constexpr double kOpTolerance = 1e-4;

// Direct nested-loop cross-correlation, independent of the im2col path.
Tensor NaiveConv(const Tensor& x, const Tensor& w, const Tensor* bias,
                 size_t stride, size_t pad) {
  const size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const size_t f = w.dim(0), k = w.dim(2);
  const size_t oh = (h + 2 * pad - k) / stride + 1;
  const size_t ow = (wd + 2 * pad - k) / stride + 1;
  Tensor y({n, f, oh, ow});
  for (size_t s = 0; s < n; ++s)
    for (size_t o = 0; o < f; ++o)
      for (size_t i = 0; i < oh; ++i)
        for (size_t j = 0; j < ow; ++j) {
          long double acc = bias ? (*bias)[o] : 0.0;
          for (size_t ch = 0; ch < c; ++ch)
            for (size_t a = 0; a < k; ++a)
              for (size_t b = 0; b < k; ++b) {
                const long yy = long(i * stride + a) - long(pad);
                const long xx = long(j * stride + b) - long(pad);
                if (yy < 0 || xx < 0 || yy >= long(h) || xx >= long(wd)) continue;
                acc += static_cast<long double>(x.at(s, ch, yy, xx)) * w.at(o, ch, a, b);
              }
          y.at(s, o, i, j) = static_cast<double>(acc);
        }
  return y;
}

TEST(ConvTest, OnesSumToNine) {
  Conv2d conv("c", 1, 1, 3, 1, 0, false, nullptr);
  conv.weight().value.Fill(1.0);
  const Tensor y = conv.Forward(Tensor({1, 1, 3, 3}, 1.0), Mode::kEval);
  ASSERT_EQ(y.shape(), (Shape{1, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(y[0], 9.0);
}

TEST(ConvTest, IdentityKernelIsIdentity) {
  Rng rng(3);
  Conv2d conv("c", 3, 3, 1, 1, 0, false, nullptr);
  for (size_t c = 0; c < 3; ++c) conv.weight().value.at(c, c, 0, 0) = 1.0;
  const Tensor x = Tensor::RandomNormal({2, 3, 5, 4}, rng);
  EXPECT_EQ(conv.Forward(x, Mode::kEval), x);
}

TEST(ConvTest, MatchesNaiveLoops) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const size_t n = 1 + rng.Below(3), c = 1 + rng.Below(4), f = 1 + rng.Below(5);
    const size_t k = 1 + rng.Below(4), s = 1 + rng.Below(3), p = rng.Below(k);
    const size_t h = k + rng.Below(7), w = k + rng.Below(7);
    Conv2d conv("c", c, f, k, s, p, trial % 2 == 0, &rng);
    if (conv.has_bias()) conv.bias().value = Tensor::RandomNormal({f}, rng);
    const Tensor x = Tensor::RandomNormal({n, c, h, w}, rng);
    const Tensor got = conv.Forward(x, Mode::kEval);
    const Tensor want = NaiveConv(x, conv.weight().value,
                                  conv.has_bias() ? &conv.bias().value : nullptr, s, p);
    ASSERT_EQ(got.shape(), want.shape());
    for (size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(ConvTest, GradientsMatchFiniteDifferences) {
  Rng rng(11);
  Conv2d conv("c", 3, 4, 3, 1, 1, false, &rng);
  Tensor x = Tensor::RandomNormal({2, 3, 8, 8}, rng);
  const GradCheckResult r = CheckLayer(conv, x, conv.Parameters());
  EXPECT_EQ(r.coordinates, x.size() + conv.weight().value.size());
  EXPECT_LT(r.max_relative_error, 1e-5);
}

TEST(ConvTest, ShapeErrors) {
  Conv2d conv("c", 3, 4, 3, 1, 0, false, nullptr);
  EXPECT_EQ(ThrownKind([&] { conv.Forward(Tensor({1, 2, 5, 5}), Mode::kEval); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(ThrownKind([&] { conv.Forward(Tensor({1, 3, 2, 5}), Mode::kEval); }),
            ErrorKind::kInvalidArgument);
  conv.Forward(Tensor({1, 3, 5, 5}), Mode::kEval);
  EXPECT_EQ(ThrownKind([&] { conv.Backward(Tensor({1, 4, 3, 3})); }),
            ErrorKind::kInvalidArgument);
}

TEST(BatchNormTest, TrainOutputIsStandardized) {
  Rng rng(2);
  BatchNorm2d bn("bn", 3);
  Tensor x = Tensor::RandomNormal({8, 3, 4, 4}, rng, 3.0);
  for (size_t i = 0; i < x.size(); ++i) x[i] += 5.0;
  const Tensor y = bn.Forward(x, Mode::kTrain);
  for (size_t c = 0; c < 3; ++c) {
    double sum = 0.0, sq = 0.0;
    for (size_t s = 0; s < 8; ++s)
      for (size_t i = 0; i < 16; ++i) sum += y[(s * 3 + c) * 16 + i];
    const double mean = sum / 128.0;
    for (size_t s = 0; s < 8; ++s)
      for (size_t i = 0; i < 16; ++i) sq += std::pow(y[(s * 3 + c) * 16 + i] - mean, 2);
    EXPECT_LT(std::abs(mean), 1e-6);
    EXPECT_LT(std::abs(sq / 128.0 - 1.0), 1e-3);
  }
}

TEST(BatchNormTest, ConstantChannelGivesBeta) {
  BatchNorm2d bn("bn", 2);
  bn.beta().value[0] = 0.25;
  bn.beta().value[1] = -1.5;
  Tensor x({4, 2, 3, 3}, 7.0);
  const Tensor y = bn.Forward(x, Mode::kTrain);
  for (size_t s = 0; s < 4; ++s)
    for (size_t i = 0; i < 9; ++i) {
      EXPECT_DOUBLE_EQ(y[(s * 2) * 9 + i], 0.25);
      EXPECT_DOUBLE_EQ(y[(s * 2 + 1) * 9 + i], -1.5);
    }
}

TEST(BatchNormTest, RunningStatisticsUseMomentum) {
  BatchNorm2d bn("bn", 1);
  const Tensor x({4, 1}, std::vector<double>{1, 2, 3, 6});
  bn.Forward(x, Mode::kTrain);
  // batch mean 3, unbiased variance (4 + 1 + 0 + 9) / 3
  EXPECT_DOUBLE_EQ(bn.running_mean()[0], 0.1 * 3.0);
  EXPECT_DOUBLE_EQ(bn.running_var()[0], 0.9 + 0.1 * 14.0 / 3.0);
  const Tensor y = bn.Forward(x, Mode::kEval);
  EXPECT_NEAR(y[0], (1.0 - 0.3) / std::sqrt(bn.running_var()[0] + 1e-5), 1e-12);
}

TEST(BatchNormTest, TrainNeedsTwoValues) {
  BatchNorm2d bn("bn", 2);
  EXPECT_EQ(ThrownKind([&] { bn.Forward(Tensor({1, 2}), Mode::kTrain); }),
            ErrorKind::kInvalidArgument);
  EXPECT_NO_THROW(bn.Forward(Tensor({1, 2}), Mode::kEval));
}

TEST(BatchNormTest, GradientsMatchFiniteDifferences) {
  Rng rng(4);
  BatchNorm2d bn("bn", 3);
  bn.gamma().value = Tensor::RandomUniform({3}, rng, 0.5, 1.5);
  bn.beta().value = Tensor::RandomNormal({3}, rng);
  Tensor x = Tensor::RandomNormal({4, 3, 3, 3}, rng);
  EXPECT_LT(CheckLayer(bn, x, bn.Parameters()).max_relative_error, 1e-4);
  EXPECT_LT(CheckLayer(bn, x, bn.Parameters(), Mode::kEval).max_relative_error, 1e-4);
}

TEST(ReluTest, Examples) {
  ReLU relu;
  const Tensor y = relu.Forward(Tensor({3}, std::vector<double>{-1, 0, 2}), Mode::kTrain);
  EXPECT_EQ(y, Tensor({3}, std::vector<double>({0, 0, 2})));
  const Tensor dx = relu.Backward(Tensor({3}, 1.0));
  EXPECT_EQ(dx, Tensor({3}, std::vector<double>({0, 0, 1})));

  relu.Forward(Tensor({2, 2}, -3.0), Mode::kTrain);
  EXPECT_EQ(relu.Backward(Tensor({2, 2}, 5.0)), Tensor({2, 2}, 0.0));
}

TEST(ReluTest, GradientAwayFromKinks) {
  Rng rng(6);
  ReLU relu;
  Tensor x = Spread({2, 3, 4, 4}, rng, 0.01);
  EXPECT_LT(CheckLayer(relu, x, {}).max_relative_error, 1e-6);
}

TEST(PoolTest, Examples) {
  const Tensor x({1, 1, 2, 2}, std::vector<double>{1, 2, 3, 4});
  AvgPool2d avg(2, 2);
  MaxPool2d max(2, 2);
  EXPECT_DOUBLE_EQ(avg.Forward(x, Mode::kTrain)[0], 2.5);
  EXPECT_DOUBLE_EQ(max.Forward(x, Mode::kTrain)[0], 4.0);
  EXPECT_EQ(avg.Backward(Tensor({1, 1, 1, 1}, 1.0)), Tensor({1, 1, 2, 2}, 0.25));
  EXPECT_EQ(max.Backward(Tensor({1, 1, 1, 1}, 1.0)),
            Tensor({1, 1, 2, 2}, std::vector<double>({0, 0, 0, 1})));
}

TEST(PoolTest, MaxRoutesToFirstArgmax) {
  MaxPool2d max(2, 2);
  max.Forward(Tensor({1, 1, 2, 2}, 3.0), Mode::kTrain);
  EXPECT_EQ(max.Backward(Tensor({1, 1, 1, 1}, 1.0)),
            Tensor({1, 1, 2, 2}, std::vector<double>({1, 0, 0, 0})));
}

TEST(PoolTest, UnitWindowIsIdentity) {
  Rng rng(8);
  const Tensor x = Tensor::RandomNormal({2, 3, 5, 6}, rng);
  AvgPool2d avg(1, 1);
  MaxPool2d max(1, 1);
  EXPECT_EQ(avg.Forward(x, Mode::kEval), x);
  EXPECT_EQ(max.Forward(x, Mode::kEval), x);
}

TEST(PoolTest, WindowLargerThanInputThrows) {
  AvgPool2d avg(3, 1);
  MaxPool2d max(3, 1);
  EXPECT_EQ(ThrownKind([&] { avg.Forward(Tensor({1, 1, 2, 2}), Mode::kEval); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(ThrownKind([&] { max.Forward(Tensor({1, 1, 2, 5}), Mode::kEval); }),
            ErrorKind::kInvalidArgument);
}

TEST(PoolTest, StemMaxPoolPadding) {
  MaxPool2d max(3, 2, 1);
  EXPECT_EQ(max.OutputSize(64), 32u);
  const Tensor y = max.Forward(Tensor({1, 1, 4, 4}, -2.0), Mode::kEval);
  EXPECT_EQ(y, Tensor({1, 1, 2, 2}, -2.0));
}

TEST(PoolTest, GradientsMatchFiniteDifferences) {
  Rng rng(9);
  Tensor x = Spread({2, 2, 6, 6}, rng, 0.01);
  AvgPool2d avg(2, 2);
  MaxPool2d max(3, 2, 1);
  GlobalAvgPool gap;
  EXPECT_LT(CheckLayer(avg, x, {}).max_relative_error, 1e-6);
  EXPECT_LT(CheckLayer(max, x, {}).max_relative_error, 1e-6);
  EXPECT_LT(CheckLayer(gap, x, {}).max_relative_error, 1e-6);
}

TEST(LinearTest, IdentityAndZeroWeight) {
  Rng rng(1);
  Linear lin("fc", 4, 4, nullptr);
  for (size_t i = 0; i < 4; ++i) lin.weight().value[i * 4 + i] = 1.0;
  const Tensor x = Tensor::RandomNormal({3, 4}, rng);
  EXPECT_EQ(lin.Forward(x, Mode::kEval), x);

  Linear zero("fc", 4, 2, nullptr);
  zero.bias().value = Tensor({2}, std::vector<double>{0.5, -2});
  const Tensor y = zero.Forward(x, Mode::kEval);
  for (size_t s = 0; s < 3; ++s) {
    EXPECT_EQ(y[s * 2], 0.5);
    EXPECT_EQ(y[s * 2 + 1], -2.0);
  }
  EXPECT_EQ(ThrownKind([&] { zero.Forward(Tensor({3, 5}), Mode::kEval); }),
            ErrorKind::kInvalidArgument);
}

TEST(LinearTest, GradientsMatchFiniteDifferences) {
  Rng rng(12);
  Linear lin("fc", 7, 5, &rng);
  lin.bias().value = Tensor::RandomNormal({5}, rng);
  Tensor x = Tensor::RandomNormal({4, 7}, rng);
  EXPECT_LT(CheckLayer(lin, x, lin.Parameters()).max_relative_error, 1e-6);
}

TEST(SoftmaxTest, RowsSumToOne) {
  Rng rng(13);
  const Tensor p = Softmax(Tensor::RandomNormal({20, 9}, rng, 10.0));
  for (size_t s = 0; s < 20; ++s) {
    double sum = 0.0;
    for (size_t j = 0; j < 9; ++j) sum += p[s * 9 + j];
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(CrossEntropyTest, UniformLogitsGiveLogK) {
  const std::vector<int> labels = {0, 3, 4};
  const LossResult r = SoftmaxCrossEntropy(Tensor({3, 5}, 0.7), labels);
  EXPECT_NEAR(r.loss, std::log(5.0), 1e-14);
  EXPECT_NEAR(r.loss, 1.6094, 1e-4);
}

TEST(CrossEntropyTest, LargeMarginGivesZeroLoss) {
  const std::vector<int> labels = {1};
  const LossResult r =
      SoftmaxCrossEntropy(Tensor({1, 3}, std::vector<double>{0, 800, 0}), labels);
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_TRUE(r.grad.AllFinite());
}

TEST(CrossEntropyTest, ShiftInvariance) {
  Rng rng(14);
  const std::vector<int> labels = {0, 1, 2, 3, 4, 0};
  for (int trial = 0; trial < 20; ++trial) {
    Tensor logits = Tensor::RandomNormal({6, 5}, rng, 4.0);
    const double base = SoftmaxCrossEntropy(logits, labels).loss;
    for (size_t s = 0; s < 6; ++s) {
      const double shift = rng.Uniform(-50, 50);
      for (size_t j = 0; j < 5; ++j) logits[s * 5 + j] += shift;
    }
    EXPECT_NEAR(SoftmaxCrossEntropy(logits, labels).loss, base, 1e-10);
  }
}

TEST(CrossEntropyTest, GradientMatchesFiniteDifferences) {
  Rng rng(15);
  const std::vector<int> labels = {2, 0, 4, 1};
  Tensor logits = Tensor::RandomNormal({4, 5}, rng, 2.0);
  const auto r = GradCheck(
      {&logits},
      [&] { return Tensor({1}, SoftmaxCrossEntropy(logits, labels).loss); },
      [&](const Tensor& dy) {
        Tensor g = SoftmaxCrossEntropy(logits, labels).grad;
        for (size_t i = 0; i < g.size(); ++i) g[i] *= dy[0];
        return std::vector<Tensor>{g};
      });
  EXPECT_LT(r.max_relative_error, 1e-6);
}

TEST(CrossEntropyTest, RejectsBadLabels) {
  const std::vector<int> high = {5};
  const std::vector<int> neg = {-1};
  EXPECT_EQ(ThrownKind([&] { SoftmaxCrossEntropy(Tensor({1, 5}), high); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(ThrownKind([&] { SoftmaxCrossEntropy(Tensor({1, 5}), neg); }),
            ErrorKind::kInvalidArgument);
  const std::vector<int> ok = {0};
  Tensor nan({1, 2}, std::vector<double>{NAN, 0});
  EXPECT_EQ(ThrownKind([&] { SoftmaxCrossEntropy(nan, ok); }), ErrorKind::kNumeric);
}

TEST(AdamTest, ZeroGradientLeavesValuesAndDecaysMoments) {
  Parameter p("w", Tensor({3}, std::vector<double>{1, -2, 3}));
  p.m = Tensor({3}, 1.0);
  p.v = Tensor({3}, 1.0);
  p.has_grad = true;
  Parameter* ps[] = {&p};
  const Tensor before = p.value;
  // m / sqrt(v) stays nonzero here, so only the value check is meaningful
  // once the moments start at zero.
  Parameter q("q", before);
  q.has_grad = true;
  Parameter* qs[] = {&q};
  AdamStep(qs, {});
  EXPECT_EQ(q.value, before);
  EXPECT_EQ(q.step, 1);
  AdamStep(ps, {});
  EXPECT_DOUBLE_EQ(p.m[0], 0.9);
  EXPECT_DOUBLE_EQ(p.v[0], 0.999);
}

TEST(AdamTest, FirstStepMovesAgainstGradientByLr) {
  Rng rng(16);
  AdamConfig cfg;
  cfg.lr = 0.01;
  for (int trial = 0; trial < 50; ++trial) {
    Parameter p("w", Tensor::RandomNormal({6}, rng));
    p.grad = Tensor::RandomNormal({6}, rng, 1e-2);
    p.has_grad = true;
    const Tensor before = p.value;
    Parameter* ps[] = {&p};
    AdamStep(ps, cfg);
    for (size_t i = 0; i < 6; ++i) {
      const double g = p.grad[i];
      // m_hat = g and v_hat = g^2 exactly after one step.
      const double want = -cfg.lr * g / (std::abs(g) + cfg.eps);
      EXPECT_NEAR(p.value[i] - before[i], want, 1e-15);
      EXPECT_NEAR(p.value[i] - before[i], -cfg.lr * (g > 0 ? 1 : -1),
                  1.01 * cfg.lr * cfg.eps / std::abs(g));
    }
  }
}

TEST(AdamTest, Deterministic) {
  auto run = [] {
    Parameter p("w", Tensor({4}, std::vector<double>{0.1, 0.2, -0.3, 0.4}));
    Parameter* ps[] = {&p};
    for (int i = 0; i < 2; ++i) {
      p.grad = Tensor({4}, std::vector<double>{0.5, -0.1, 0.0, 2.0});
      p.has_grad = true;
      AdamStep(ps, {});
    }
    return p.value;
  };
  EXPECT_EQ(run(), run());
}

TEST(AdamTest, MissingGradientThrows) {
  Parameter p("w", Tensor({2}));
  Parameter* ps[] = {&p};
  EXPECT_EQ(ThrownKind([&] { AdamStep(ps, {}); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(p.step, 0);
}

TEST(GradCheckTest, DetectsCorruptedGradient) {
  Rng rng(17);
  Linear lin("fc", 3, 2, &rng);
  Tensor x = Tensor::RandomNormal({2, 3}, rng);
  const auto r = GradCheck(
      {&x}, [&] { return lin.Forward(x, Mode::kTrain); },
      [&](const Tensor& dy) {
        Tensor g = lin.Backward(dy);
        g[4] *= 1.01;
        return std::vector<Tensor>{g};
      });
  EXPECT_GT(r.max_relative_error, kOpTolerance);
  EXPECT_EQ(r.index, 4u);
}

TEST(GradCheckTest, NonFiniteOutputThrows) {
  Tensor x({2}, std::vector<double>{1, 0});
  EXPECT_EQ(ThrownKind([&] {
              GradCheck(
                  {&x},
                  [&] { return Tensor({2}, std::vector<double>{1 / x[0], 1 / x[1]}); },
                  [&](const Tensor&) { return std::vector<Tensor>{Tensor({2})}; });
            }),
            ErrorKind::kNumeric);
}

TEST(GradCheckTest, SamplesCoordinates) {
  Rng rng(18);
  Tensor x = Tensor::RandomNormal({50}, rng);
  GradCheckOptions opt;
  opt.max_coordinates = 7;
  const auto r = GradCheck(
      {&x}, [&] { return x; }, [](const Tensor& dy) { return std::vector<Tensor>{dy}; },
      opt);
  EXPECT_EQ(r.coordinates, 7u);
  EXPECT_LT(r.max_relative_error, 1e-8);
}

// Every op on ten random shapes at the shared tolerance.
TEST(GradCheckSweep, TenRandomShapesPerOp) {
  const auto worst = testing::GradSweep(2024, 10);
  EXPECT_EQ(worst.size(), 8u);
  for (const auto& [op, err] : worst) EXPECT_LT(err, kOpTolerance) << op;
}

TEST(TensorTest, ShapeValidation) {
  EXPECT_EQ(ThrownKind([] { Tensor({2, 3}, std::vector<double>(5)); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(ThrownKind([] { Tensor({2, 3}).Reshaped({4}); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(Tensor({2, 3}, 1.0).Reshaped({3, 2}).shape(), (Shape{3, 2}));
  Tensor t({2}, std::vector<double>{1, INFINITY});
  EXPECT_EQ(ThrownKind([&] { CheckFinite(t, "t"); }), ErrorKind::kNumeric);
}

TEST(CheckpointTest, RoundTrip) {
  Rng rng(19);
  NamedTensors in = {{"conv.weight", Tensor::RandomNormal({4, 3, 3, 3}, rng)},
                     {"纹样.bias", Tensor::RandomNormal({4}, rng)},
                     {"scalar", Tensor({}, 2.5)},
                     {"empty", Tensor({0, 3})}};
  const std::string bytes = EncodeCheckpoint(in);
  EXPECT_EQ(bytes.substr(0, 8), "BATIKCKP");
  const NamedTensors out = DecodeCheckpoint(bytes);
  EXPECT_EQ(out, in);
  EXPECT_EQ(EncodeCheckpoint(out), bytes);

  const auto path = std::filesystem::temp_directory_path() / "batik_ckpt_test.bin";
  SaveCheckpoint(path, in);
  EXPECT_EQ(LoadCheckpoint(path), in);
  std::filesystem::remove(path);
}

TEST(CheckpointTest, RejectsDamage) {
  Rng rng(20);
  const std::string bytes =
      EncodeCheckpoint({{"w", Tensor::RandomNormal({2, 2}, rng)}, {"b", Tensor({2})}});
  for (size_t len = 0; len < bytes.size(); ++len) {
    ASSERT_EQ(ThrownKind([&] { DecodeCheckpoint(bytes.substr(0, len)); }), ErrorKind::kIo)
        << len;
  }
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_EQ(ThrownKind([&] { DecodeCheckpoint(bad); }), ErrorKind::kIo);
  bad = bytes;
  bad[8] = 9;
  EXPECT_EQ(ThrownKind([&] { DecodeCheckpoint(bad); }), ErrorKind::kIo);
  bad = bytes;
  bad[9] = 7;
  std::string msg;
  EXPECT_EQ(ThrownKind([&] { DecodeCheckpoint(bad); }, &msg), ErrorKind::kIo);
  EXPECT_NE(msg.find("version"), std::string::npos);
  EXPECT_EQ(ThrownKind([&] { DecodeCheckpoint(bytes + "x"); }), ErrorKind::kIo);
}

class SimdEquivalenceTest : public ::testing::Test {
 protected:
  void TearDown() override { simd::SetActive(initial_); }
  simd::Isa initial_ = simd::Active().isa;
};

TEST_F(SimdEquivalenceTest, ConvAndLinearAgreeAcrossKernels) {
  if (!simd::Avx2Kernels()) GTEST_SKIP() << "no AVX2 on this machine";
  Rng rng(21);
  Conv2d conv("c", 5, 7, 3, 2, 1, true, &rng);
  Linear lin("fc", 13, 6, &rng);
  const Tensor x = Tensor::RandomNormal({3, 5, 11, 9}, rng);
  const Tensor xl = Tensor::RandomNormal({4, 13}, rng);
  auto run = [&](simd::Isa isa) {
    simd::SetActive(isa);
    conv.weight().ZeroGrad();
    lin.weight().ZeroGrad();
    const Tensor y = conv.Forward(x, Mode::kTrain);
    const Tensor dx = conv.Backward(y);
    const Tensor yl = lin.Forward(xl, Mode::kTrain);
    const Tensor dxl = lin.Backward(yl);
    return std::vector<Tensor>{y, dx, conv.weight().grad, yl, dxl, lin.weight().grad};
  };
  const auto scalar = run(simd::Isa::kScalar);
  const auto avx = run(simd::Isa::kAvx2);
  for (size_t t = 0; t < scalar.size(); ++t) {
    for (size_t i = 0; i < scalar[t].size(); ++i) {
      const double a = scalar[t][i], b = avx[t][i];
      ASSERT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a))) << t << " " << i;
    }
  }
}

}  // namespace
}  // namespace batik::tensor
