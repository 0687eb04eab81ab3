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

#ifndef BATIK_DATASET_MANIFEST_H_
#define BATIK_DATASET_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace batik::dataset {

enum class Split { kNone, kTrain, kTest };

std::string_view SplitName(Split s);

struct ManifestRow {
  std::string path;  // relative to the manifest's directory
  std::string label;
  Split split = Split::kNone;

  friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

struct Manifest {
  std::vector<ManifestRow> rows;

  // Row counts per label, sorted by label.
  std::map<std::string, size_t> LabelCounts() const;
  std::map<std::string, size_t> LabelCounts(Split split) const;
  size_t Count(Split split) const;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

// CSV with header "path,label,split"; an empty split column means
// unassigned. Paths must be unique and may not contain commas. Errors are
// SyntaxError with the line number.
Manifest ParseManifest(std::string_view text);
std::string FormatManifest(const Manifest& manifest);
Manifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);

// SchemaError when a row's label is not in `labels`.
void CheckLabels(const Manifest& manifest, const std::vector<std::string>& labels);

// Training rows for a category of n samples: floor(n * ratio), kept inside
// [1, n-1] so both sides are populated.
size_t TrainCount(size_t n, double ratio);

// Parses "6:4" style ratios or a plain fraction such as "0.6".
double ParseRatio(std::string_view text);

// Stratified split: for each label in sorted order, the rows of that label
// are shuffled with one seeded generator and the first TrainCount() become
// train. Row order is preserved. InvalidArgument unless 0 < ratio < 1;
// ConfigError for a label with fewer than two rows.
Manifest StratifiedSplit(const Manifest& manifest, double ratio, uint64_t seed);

}  // namespace batik::dataset

#endif  // BATIK_DATASET_MANIFEST_H_
