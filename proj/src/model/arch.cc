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

#include "batik/model/arch.h"

#include <json.hpp>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::model {

using nlohmann::json;

ArchConfig ArchConfig::Stock() {
  ArchConfig c;
  c.pool_conv_shortcut = false;
  c.long_range_links = false;
  return c;
}

ArchConfig ArchConfig::Mini() {
  ArchConfig c;
  c.height = 64;
  c.width = 64;
  c.stem_width = 16;
  c.widths = {16, 32, 64, 128};
  c.blocks = {2, 2, 2, 2};
  return c;
}

size_t ArchConfig::PairCount() const {
  size_t n = 0;
  for (size_t b : blocks) n += b / 2;
  return n;
}

bool ArchConfig::LinkEnabled(size_t pair) const {
  if (!long_range_links) return false;
  return link_mask.empty() || link_mask.at(pair);
}

namespace {

size_t Out(size_t in, size_t k, size_t s, size_t p) {
  if (in + 2 * p < k) return 0;
  return (in + 2 * p - k) / s + 1;
}

}  // namespace

std::array<size_t, 2> ArchConfig::StemOutput() const {
  return {Out(Out(height, 7, 2, 3), 3, 2, 1), Out(Out(width, 7, 2, 3), 3, 2, 1)};
}

void ArchConfig::Validate() const {
  if (channels == 0 || height == 0 || width == 0 || stem_width == 0) {
    throw ConfigError("arch: input and stem sizes must be positive");
  }
  for (size_t s = 0; s < 4; ++s) {
    if (widths[s] == 0) throw ConfigError("arch: stage " + std::to_string(s + 1) + " width is 0");
    if (blocks[s] == 0) throw ConfigError("arch: stage " + std::to_string(s + 1) + " has no blocks");
  }
  if (num_classes < 2) throw ConfigError("arch: num_classes must be at least 2");
  if (!link_mask.empty() && link_mask.size() != PairCount()) {
    throw ConfigError("arch: link_mask has " + std::to_string(link_mask.size()) +
                      " entries for " + std::to_string(PairCount()) + " block pairs");
  }
  auto [h, w] = StemOutput();
  if (h == 0 || w == 0) {
    throw ConfigError("arch: input " + std::to_string(height) + "x" + std::to_string(width) +
                      " too small for the stem");
  }
  for (size_t s = 1; s < 4; ++s) {
    // Pool-conv units appear on a stride-2 stage when that shortcut is on or
    // when the stage's first pair has a link.
    const size_t first_pair = [&] {
      size_t p = 0;
      for (size_t t = 0; t < s; ++t) p += blocks[t] / 2;
      return p;
    }();
    const bool pooled = pool_conv_shortcut || (blocks[s] >= 2 && LinkEnabled(first_pair));
    if (pooled && (h % 2 != 0 || w % 2 != 0)) {
      throw ConfigError("arch: stage " + std::to_string(s + 1) + " input " + std::to_string(h) +
                        "x" + std::to_string(w) + " is odd; average pooling needs even sizes");
    }
    h = Out(h, 3, 2, 1);
    w = Out(w, 3, 2, 1);
    if (h == 0 || w == 0) throw ConfigError("arch: spatial size collapses at stage " + std::to_string(s + 1));
  }
}

std::string ArchConfig::ToJson() const {
  json j = {
      {"input", {channels, height, width}},
      {"stem_width", stem_width},
      {"widths", widths},
      {"blocks", blocks},
      {"num_classes", num_classes},
      {"pool_conv_shortcut", pool_conv_shortcut},
      {"long_range_links", long_range_links},
      {"link_mask", link_mask},
  };
  return j.dump(2) + "\n";
}

ArchConfig ArchConfig::FromJson(std::string_view text) {
  ArchConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("arch: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "input") {
        const auto v = value.get<std::vector<size_t>>();
        if (v.size() != 3) throw ConfigError("arch: input must be [C, H, W]");
        c.channels = v[0];
        c.height = v[1];
        c.width = v[2];
      } else if (key == "stem_width") {
        c.stem_width = value.get<size_t>();
      } else if (key == "widths") {
        c.widths = value.get<std::array<size_t, 4>>();
      } else if (key == "blocks") {
        c.blocks = value.get<std::array<size_t, 4>>();
      } else if (key == "num_classes") {
        c.num_classes = value.get<size_t>();
      } else if (key == "pool_conv_shortcut") {
        c.pool_conv_shortcut = value.get<bool>();
      } else if (key == "long_range_links") {
        c.long_range_links = value.get<bool>();
      } else if (key == "link_mask") {
        c.link_mask = value.get<std::vector<bool>>();
      } else {
        throw ConfigError("arch: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("arch: ") + e.what());
  }
  return c;
}

ArchConfig LoadArchConfig(const std::filesystem::path& path) {
  return ArchConfig::FromJson(ReadFile(path));
}

void SaveArchConfig(const std::filesystem::path& path, const ArchConfig& config) {
  WriteFile(path, config.ToJson());
}

}  // namespace batik::model
