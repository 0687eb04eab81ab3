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

#include "batik/dataset/manifest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "batik/core/error.h"
#include "batik/core/random.h"
#include "batik/core/text.h"

namespace batik::dataset {

std::string_view SplitName(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kTest:
      return "test";
    case Split::kNone:
      break;
  }
  return "";
}

std::map<std::string, size_t> Manifest::LabelCounts() const {
  std::map<std::string, size_t> out;
  for (const auto& r : rows) ++out[r.label];
  return out;
}

std::map<std::string, size_t> Manifest::LabelCounts(Split split) const {
  std::map<std::string, size_t> out;
  for (const auto& r : rows) {
    if (r.split == split) ++out[r.label];
  }
  return out;
}

size_t Manifest::Count(Split split) const {
  return static_cast<size_t>(std::count_if(
      rows.begin(), rows.end(), [&](const ManifestRow& r) { return r.split == split; }));
}

Manifest ParseManifest(std::string_view text) {
  Manifest m;
  std::set<std::string> seen;
  const std::vector<std::string> lines = batik::Split(text, '\n');
  bool header = true;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const std::string where = "manifest line " + std::to_string(i + 1) + ": ";
    const std::vector<std::string> f = batik::Split(line, ',');
    if (header) {
      if (f.size() != 3 || f[0] != "path" || f[1] != "label" || f[2] != "split") {
        throw SyntaxError(where + "expected header path,label,split");
      }
      header = false;
      continue;
    }
    if (f.size() != 3) throw SyntaxError(where + "expected 3 fields, got " + std::to_string(f.size()));
    ManifestRow row{f[0], f[1], Split::kNone};
    if (row.path.empty() || row.label.empty()) throw SyntaxError(where + "empty path or label");
    if (f[2] == "train") {
      row.split = Split::kTrain;
    } else if (f[2] == "test") {
      row.split = Split::kTest;
    } else if (!f[2].empty()) {
      throw SyntaxError(where + "unknown split '" + f[2] + "'");
    }
    if (!seen.insert(row.path).second) throw SyntaxError(where + "duplicate path " + row.path);
    m.rows.push_back(std::move(row));
  }
  if (header) throw SyntaxError("manifest: missing header");
  return m;
}

std::string FormatManifest(const Manifest& manifest) {
  std::string out = "path,label,split\n";
  for (const auto& r : manifest.rows) {
    if (r.path.find(',') != std::string::npos || r.label.find(',') != std::string::npos) {
      throw InvalidArgument("manifest fields may not contain commas: " + r.path);
    }
    out += r.path + "," + r.label + "," + std::string(SplitName(r.split)) + "\n";
  }
  return out;
}

Manifest ReadManifest(const std::filesystem::path& path) {
  return ParseManifest(ReadFile(path));
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  WriteFile(path, FormatManifest(manifest));
}

void CheckLabels(const Manifest& manifest, const std::vector<std::string>& labels) {
  for (size_t i = 0; i < manifest.rows.size(); ++i) {
    const auto& r = manifest.rows[i];
    if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) {
      throw SchemaError("manifest row " + std::to_string(i + 1) + ": unknown label '" +
                        r.label + "'");
    }
  }
}

size_t TrainCount(size_t n, double ratio) {
  if (n < 2) throw ConfigError("cannot split fewer than 2 samples");
  const auto k = static_cast<size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
  return std::clamp<size_t>(k, 1, n - 1);
}

double ParseRatio(std::string_view text) {
  auto number = [&](std::string_view s) {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw ConfigError("bad split ratio '" + std::string(text) + "'");
    }
    return v;
  };
  const size_t colon = text.find(':');
  double r;
  if (colon == std::string_view::npos) {
    r = number(text);
  } else {
    const double a = number(text.substr(0, colon));
    const double b = number(text.substr(colon + 1));
    if (a <= 0 || b <= 0) throw ConfigError("bad split ratio '" + std::string(text) + "'");
    r = a / (a + b);
  }
  if (!(r > 0 && r < 1)) throw ConfigError("split ratio must lie in (0, 1): " + std::string(text));
  return r;
}

Manifest StratifiedSplit(const Manifest& manifest, double ratio, uint64_t seed) {
  if (!(ratio > 0 && ratio < 1)) {
    throw InvalidArgument("split ratio must lie in (0, 1), got " + FormatDouble(ratio));
  }
  std::map<std::string, std::vector<size_t>> by_label;
  for (size_t i = 0; i < manifest.rows.size(); ++i) {
    by_label[manifest.rows[i].label].push_back(i);
  }
  Manifest out = manifest;
  Rng rng(seed);
  for (auto& [label, idx] : by_label) {
    if (idx.size() < 2) {
      throw ConfigError("label '" + label + "' has " + std::to_string(idx.size()) +
                        " sample; at least 2 are needed to split");
    }
    const size_t k = TrainCount(idx.size(), ratio);
    rng.Shuffle(idx);
    for (size_t j = 0; j < idx.size(); ++j) {
      out.rows[idx[j]].split = j < k ? Split::kTrain : Split::kTest;
    }
  }
  return out;
}

}  // namespace batik::dataset
