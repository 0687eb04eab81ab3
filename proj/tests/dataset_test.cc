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

#include "batik/core/random.h"
#include "batik/core/text.h"
#include "batik/dataset/image.h"
#include "batik/dataset/loader.h"
#include "batik/dataset/manifest.h"
#include "batik/dataset/synthetic.h"
#include "test_util.h"

namespace batik::dataset {
namespace {

namespace fs = std::filesystem;
using tensor::Tensor;
using testing::ThrownKind;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("batik_dataset_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(PpmTest, RoundTrip) {
  Rng rng(1);
  Image img(5, 3);
  for (auto& b : img.rgb) b = static_cast<uint8_t>(rng.Below(256));
  const std::string bytes = EncodePpm(img);
  EXPECT_EQ(bytes.substr(0, 11), "P6\n5 3\n255\n");
  EXPECT_EQ(DecodePpm(bytes), img);
}

TEST(PpmTest, AcceptsHeaderComments) {
  std::string bytes = "P6 # made by hand\n2 1\n# max\n255\n";
  bytes += std::string("\x01\x02\x03\x04\x05\x06", 6);
  const Image img = DecodePpm(bytes);
  EXPECT_EQ(img.width, 2u);
  EXPECT_EQ(img.pixel(1, 0)[2], 6);
}

TEST(PpmTest, RejectsBadFiles) {
  std::string msg;
  EXPECT_EQ(ThrownKind([] { DecodePpm("P3\n1 1\n255\n000", "a.ppm"); }, &msg), ErrorKind::kIo);
  EXPECT_EQ(ThrownKind([] { DecodePpm("P6\n2 2\n255\nabc", "b.ppm"); }, &msg), ErrorKind::kIo);
  EXPECT_NE(msg.find("b.ppm"), std::string::npos);
  EXPECT_EQ(ThrownKind([] { DecodePpm("P6\n1 1\n65535\nabcdef"); }), ErrorKind::kIo);
  EXPECT_EQ(ThrownKind([] { DecodePpm("P6\n0 1\n255\n"); }), ErrorKind::kIo);
  EXPECT_EQ(ThrownKind([] { DecodePpm("P6\n"); }), ErrorKind::kIo);
}

TEST(ImageTest, WhiteIsAllOnes) {
  const Tensor t = ToTensor(Image(4, 3, 255));
  EXPECT_EQ(t.shape(), (tensor::Shape{3, 3, 4}));
  EXPECT_EQ(t, Tensor({3, 3, 4}, 1.0));
}

TEST(ResizeTest, SameSizeIsIdentity) {
  Rng rng(2);
  const Tensor t = Tensor::RandomUniform({3, 7, 5}, rng, 0, 1);
  const Tensor r = ResizeBilinear(t, 7, 5);
  for (size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(r[i], t[i], 1e-12);
}

TEST(ResizeTest, CheckerboardUpsample) {
  const Tensor board({1, 2, 2}, std::vector<double>{0, 1, 1, 0});
  const Tensor up = ResizeBilinear(board, 4, 4);
  EXPECT_EQ(up[0], 0.0);
  EXPECT_EQ(up[3], 1.0);
  EXPECT_EQ(up[12], 1.0);
  EXPECT_EQ(up[15], 0.0);
  // Closed form of bilinear interpolation of [[0,1],[1,0]] at (y, x):
  // x + y - 2xy, with y = i/3 and x = j/3.
  for (size_t i = 0; i < 4; ++i) {
    for (size_t j = 0; j < 4; ++j) {
      const double y = i / 3.0, x = j / 3.0;
      EXPECT_NEAR(up[i * 4 + j], x + y - 2 * x * y, 1e-12) << i << "," << j;
    }
  }
  // An odd target puts a sample exactly on the centre, the mean of all four.
  const Tensor mid = ResizeBilinear(board, 3, 3);
  EXPECT_NEAR(mid[4], 0.5, 1e-15);
  EXPECT_NEAR(mid[1], 0.5, 1e-15);
}

TEST(ResizeTest, CropWindowAndErrors) {
  Tensor t({1, 3, 3}, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  EXPECT_EQ(CropResize(t, 1, 1, 2, 2, 2, 2), Tensor({1, 2, 2}, std::vector<double>{5, 6, 8, 9}));
  EXPECT_EQ(ThrownKind([&] { CropResize(t, 2, 0, 2, 2, 2, 2); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(ThrownKind([&] { ResizeBilinear(Tensor({3, 3}), 2, 2); }),
            ErrorKind::kInvalidArgument);
}

TEST(ResizeTest, OutputStaysInUnitRange) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor t = Tensor::RandomUniform({3, 2 + rng.Below(9), 2 + rng.Below(9)}, rng, 0, 1);
    const Tensor r = ResizeBilinear(t, 1 + rng.Below(12), 1 + rng.Below(12));
    for (double v : r.values()) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(ManifestTest, RoundTrip) {
  Manifest m;
  m.rows = {{"a.ppm", "bird", Split::kTrain},
            {"b.ppm", "fish", Split::kTest},
            {"c.ppm", "fish", Split::kNone}};
  const std::string text = FormatManifest(m);
  EXPECT_EQ(text, "path,label,split\na.ppm,bird,train\nb.ppm,fish,test\nc.ppm,fish,\n");
  EXPECT_EQ(ParseManifest(text), m);
  EXPECT_EQ(m.Count(Split::kTest), 1u);
  EXPECT_EQ(m.LabelCounts().at("fish"), 2u);
}

TEST(ManifestTest, Errors) {
  std::string msg;
  EXPECT_EQ(ThrownKind([] { ParseManifest("file,label,split\n"); }), ErrorKind::kSyntax);
  EXPECT_EQ(ThrownKind([] { ParseManifest(""); }), ErrorKind::kSyntax);
  EXPECT_EQ(ThrownKind([&] { ParseManifest("path,label,split\na,b,train\na,c,test\n"); }, &msg),
            ErrorKind::kSyntax);
  EXPECT_NE(msg.find("line 3"), std::string::npos);
  EXPECT_EQ(ThrownKind([] { ParseManifest("path,label,split\na,b,val\n"); }), ErrorKind::kSyntax);
  EXPECT_EQ(ThrownKind([] { ParseManifest("path,label,split\na,b\n"); }), ErrorKind::kSyntax);
  Manifest m = ParseManifest("path,label,split\na,flower,\n");
  EXPECT_EQ(ThrownKind([&] { CheckLabels(m, DefaultCategories()); }), ErrorKind::kSchema);
}

TEST(SplitTest, RatioParsing) {
  EXPECT_DOUBLE_EQ(ParseRatio("6:4"), 0.6);
  EXPECT_DOUBLE_EQ(ParseRatio("5:2"), 5.0 / 7.0);
  EXPECT_DOUBLE_EQ(ParseRatio("0.5"), 0.5);
  for (const char* bad : {"1", "0", "4:0", "x", "6:4:1", "-1:2"}) {
    EXPECT_EQ(ThrownKind([&] { ParseRatio(bad); }), ErrorKind::kConfig) << bad;
  }
}

TEST(SplitTest, PublishedCategoryCounts) {
  const size_t counts[] = {2853, 2064, 2065, 2122, 3145};
  size_t total = 0, train = 0;
  for (size_t n : counts) {
    total += n;
    train += TrainCount(n, ParseRatio("6:4"));
  }
  EXPECT_EQ(total, 12249u);
  EXPECT_EQ(train, 7348u);
  EXPECT_EQ(total - train, 4901u);
  EXPECT_EQ(TrainCount(10, 0.5), 5u);
  EXPECT_EQ(TrainCount(2, 0.99), 1u);
  EXPECT_EQ(TrainCount(2, 0.01), 1u);
}

Manifest RandomManifest(Rng& rng, size_t labels) {
  Manifest m;
  for (size_t l = 0; l < labels; ++l) {
    const size_t n = 2 + rng.Below(40);
    for (size_t i = 0; i < n; ++i) {
      m.rows.push_back({"l" + std::to_string(l) + "_" + std::to_string(i), "c" + std::to_string(l)});
    }
  }
  rng.Shuffle(m.rows);
  return m;
}

TEST(SplitTest, IsStratifiedPartition) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Manifest m = RandomManifest(rng, 1 + rng.Below(6));
    const double ratio = rng.Uniform(0.05, 0.95);
    const Manifest s = StratifiedSplit(m, ratio, trial);
    ASSERT_EQ(s.rows.size(), m.rows.size());
    for (size_t i = 0; i < s.rows.size(); ++i) {
      ASSERT_EQ(s.rows[i].path, m.rows[i].path);
      ASSERT_NE(s.rows[i].split, Split::kNone);
    }
    const auto all = m.LabelCounts();
    const auto train = s.LabelCounts(Split::kTrain);
    for (const auto& [label, n] : all) {
      const double want = n * ratio;
      const double got = train.count(label) ? train.at(label) : 0;
      EXPECT_LE(std::abs(got - want), 1.0) << label << " n=" << n << " ratio=" << ratio;
      EXPECT_GE(got, 1);
      EXPECT_LE(got, n - 1);
    }
  }
}

TEST(SplitTest, SeededAndValidated) {
  Rng rng(5);
  const Manifest m = RandomManifest(rng, 3);
  EXPECT_EQ(StratifiedSplit(m, 0.6, 9), StratifiedSplit(m, 0.6, 9));
  EXPECT_NE(StratifiedSplit(m, 0.6, 9), StratifiedSplit(m, 0.6, 10));
  EXPECT_EQ(ThrownKind([&] { StratifiedSplit(m, 1.0, 1); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(ThrownKind([&] { StratifiedSplit(m, 0.0, 1); }), ErrorKind::kInvalidArgument);
  Manifest lonely = m;
  lonely.rows.push_back({"solo", "single"});
  EXPECT_EQ(ThrownKind([&] { StratifiedSplit(lonely, 0.5, 1); }), ErrorKind::kConfig);
  Manifest ten;
  for (int i = 0; i < 10; ++i) ten.rows.push_back({std::to_string(i), "x"});
  const Manifest half = StratifiedSplit(ten, 0.5, 3);
  EXPECT_EQ(half.Count(Split::kTrain), 5u);
  EXPECT_EQ(half.Count(Split::kTest), 5u);
}

TEST(SyntheticTest, OneImagePerLabel) {
  const fs::path dir = TempDir("one");
  const Manifest m = GenerateSynthetic(dir, {1, 32, 7});
  ASSERT_EQ(m.rows.size(), 5u);
  for (size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(m.rows[i].label, DefaultCategories()[i]);
    EXPECT_TRUE(fs::exists(dir / m.rows[i].path));
  }
  EXPECT_EQ(ReadManifest(dir / "manifest.csv"), m);
  fs::remove_all(dir);
}

TEST(SyntheticTest, DeterministicAndUniform) {
  const fs::path a = TempDir("a");
  const fs::path b = TempDir("b");
  const Manifest ma = GenerateSynthetic(a, {6, 24, 11});
  const Manifest mb = GenerateSynthetic(b, {6, 24, 11});
  ASSERT_EQ(ma, mb);
  for (const auto& row : ma.rows) {
    ASSERT_EQ(ReadFile(a / row.path), ReadFile(b / row.path)) << row.path;
  }
  EXPECT_EQ(ReadFile(a / "manifest.csv"), ReadFile(b / "manifest.csv"));
  for (const auto& [label, n] : ma.LabelCounts()) EXPECT_EQ(n, 6u) << label;

  const fs::path c = TempDir("c");
  const Manifest mc = GenerateSynthetic(c, {6, 24, 12});
  EXPECT_NE(ReadFile(a / ma.rows[0].path), ReadFile(c / mc.rows[0].path));
  for (const auto& d : {a, b, c}) fs::remove_all(d);
}

TEST(SyntheticTest, BlueInkOnWhite) {
  Rng rng(8);
  for (size_t cat = 0; cat < 5; ++cat) {
    const Image img = RenderPattern(cat, 64, rng);
    size_t ink = 0, background = 0;
    for (size_t p = 0; p < 64 * 64; ++p) {
      const uint8_t* px = &img.rgb[p * 3];
      if (px[2] > 140 && px[0] < 80) ++ink;
      if (px[0] > 240 && px[1] > 240 && px[2] > 240) ++background;
    }
    EXPECT_GT(ink, 64u * 64 / 20) << DefaultCategories()[cat];
    EXPECT_GT(background, 64u * 64 / 3) << DefaultCategories()[cat];
  }
  EXPECT_EQ(ThrownKind([&] { RenderPattern(5, 8, rng); }), ErrorKind::kInvalidArgument);
}

TEST(LoaderTest, LoadsAndResizes) {
  const fs::path dir = TempDir("load");
  Manifest m = StratifiedSplit(GenerateSynthetic(dir, {4, 20, 3}), 0.5, 1);
  const LoadResult all = LoadSamples(dir, m, DefaultCategories(), {16, 16, Split::kNone, false});
  ASSERT_EQ(all.samples.size(), 20u);
  for (size_t i = 0; i < 20; ++i) {
    const Sample& s = all.samples[i];
    EXPECT_EQ(s.path, m.rows[i].path);
    EXPECT_EQ(s.image.shape(), (tensor::Shape{3, 16, 16}));
    EXPECT_EQ(DefaultCategories()[s.label], m.rows[i].label);
    for (double v : s.image.values()) {
      ASSERT_TRUE(std::isfinite(v));
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
  const LoadResult train = LoadSamples(dir, m, DefaultCategories(), {20, 20, Split::kTrain, false});
  EXPECT_EQ(train.samples.size(), 10u);

  WriteFile(dir / m.rows[3].path, "garbage");
  std::string msg;
  EXPECT_EQ(ThrownKind([&] { LoadSamples(dir, m, DefaultCategories(), {}); }, &msg),
            ErrorKind::kIo);
  EXPECT_NE(msg.find(m.rows[3].path), std::string::npos);
  const LoadResult skipped =
      LoadSamples(dir, m, DefaultCategories(), {20, 20, Split::kNone, true});
  EXPECT_EQ(skipped.samples.size(), 19u);
  EXPECT_EQ(skipped.errors.size(), 1u);
  EXPECT_EQ(ThrownKind([&] { LoadSamples(dir, m, {"bird"}, {}); }), ErrorKind::kSchema);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace batik::dataset
