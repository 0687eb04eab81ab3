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

#include "batik/dataset/loader.h"

#include <algorithm>

#include "batik/core/error.h"
#include "batik/dataset/image.h"

namespace batik::dataset {

LoadResult LoadSamples(const std::filesystem::path& root, const Manifest& manifest,
                       const std::vector<std::string>& labels,
                       const LoadOptions& options) {
  CheckLabels(manifest, labels);
  LoadResult out;
  for (const auto& row : manifest.rows) {
    if (options.split != Split::kNone && row.split != options.split) continue;
    const int label = static_cast<int>(
        std::find(labels.begin(), labels.end(), row.label) - labels.begin());
    Image img;
    try {
      img = ReadPpm(root / row.path);
    } catch (const Error& e) {
      if (!options.skip_bad || e.kind() != ErrorKind::kIo) throw;
      out.errors.push_back(e.what());
      continue;
    }
    tensor::Tensor t = ToTensor(img);
    if (img.height != options.height || img.width != options.width) {
      t = ResizeBilinear(t, options.height, options.width);
    }
    out.samples.push_back({std::move(t), label, row.path});
  }
  return out;
}

}  // namespace batik::dataset
