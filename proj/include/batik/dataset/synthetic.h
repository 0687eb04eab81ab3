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

#ifndef BATIK_DATASET_SYNTHETIC_H_
#define BATIK_DATASET_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "batik/core/random.h"
#include "batik/dataset/image.h"
#include "batik/dataset/manifest.h"

namespace batik::dataset {

// The five pattern families, in label-id order.
const std::vector<std::string>& DefaultCategories();

struct SyntheticOptions {
  size_t per_class = 100;
  size_t size = 64;
  uint64_t seed = 1;
};

// One blue-on-white drawing of family `category` (index into
// DefaultCategories()) with random rotation, scale, offset and shading.
Image RenderPattern(size_t category, size_t size, Rng& rng);

// Writes images/<label>_<nnnn>.ppm under `dir` plus manifest.csv (splits
// unassigned) and returns the manifest. Rows are grouped by label. Output
// is byte-identical for identical options.
Manifest GenerateSynthetic(const std::filesystem::path& dir,
                           const SyntheticOptions& options);

}  // namespace batik::dataset

#endif  // BATIK_DATASET_SYNTHETIC_H_
