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

#ifndef BATIK_DATASET_LOADER_H_
#define BATIK_DATASET_LOADER_H_

#include <filesystem>
#include <string>
#include <vector>

#include "batik/dataset/manifest.h"
#include "batik/tensor/tensor.h"

namespace batik::dataset {

struct Sample {
  tensor::Tensor image;  // C x H x W in [0, 1]
  int label = -1;
  std::string path;
};

struct LoadOptions {
  size_t height = 64;
  size_t width = 64;
  // Rows with this split only; kNone loads every row.
  Split split = Split::kNone;
  // Skip undecodable files (recording them in `errors`) instead of throwing.
  bool skip_bad = false;
};

struct LoadResult {
  std::vector<Sample> samples;
  std::vector<std::string> errors;
};

// Loads rows in manifest order relative to `root`; labels map to their
// index in `labels` (SchemaError for unknown labels).
LoadResult LoadSamples(const std::filesystem::path& root, const Manifest& manifest,
                       const std::vector<std::string>& labels,
                       const LoadOptions& options);

}  // namespace batik::dataset

#endif  // BATIK_DATASET_LOADER_H_
