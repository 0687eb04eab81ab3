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

#ifndef BATIK_MODEL_ARCH_H_
#define BATIK_MODEL_ARCH_H_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace batik::model {

struct ArchConfig {
  size_t channels = 3;
  size_t height = 256;
  size_t width = 256;
  size_t stem_width = 64;
  std::array<size_t, 4> widths = {64, 128, 256, 512};
  std::array<size_t, 4> blocks = {3, 4, 6, 3};
  size_t num_classes = 5;
  // Downsampling shortcuts as AvgPool(2, 2) -> 1x1 conv -> BN instead of a
  // strided 1x1 conv -> BN.
  bool pool_conv_shortcut = true;
  // Extra additive connection across each pair of consecutive blocks.
  bool long_range_links = true;
  // One switch per block pair in stage order; empty means every pair.
  std::vector<bool> link_mask;

  // Stock layout with both improvements off.
  static ArchConfig Stock();
  // Widths 16/32/64/128, two blocks per stage, 3 x 64 x 64 input.
  static ArchConfig Mini();

  // floor(blocks / 2) summed over stages.
  size_t PairCount() const;
  bool LinkEnabled(size_t pair) const;

  // Spatial size after the stem (conv 7x7/2 then max pool 3x3/2).
  std::array<size_t, 2> StemOutput() const;

  // ConfigError for zero sizes, fewer than two classes, a mask of the wrong
  // length, a spatial size that collapses to zero, or an odd size entering a
  // stride-2 stage that uses average pooling (the pooled and convolved
  // paths would disagree).
  void Validate() const;

  std::string ToJson() const;
  // ConfigError on malformed JSON or unknown keys; missing keys keep their
  // defaults.
  static ArchConfig FromJson(std::string_view text);

  friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

ArchConfig LoadArchConfig(const std::filesystem::path& path);
void SaveArchConfig(const std::filesystem::path& path, const ArchConfig& config);

}  // namespace batik::model

#endif  // BATIK_MODEL_ARCH_H_
