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

#ifndef BATIK_DATASET_IMAGE_H_
#define BATIK_DATASET_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "batik/tensor/tensor.h"

namespace batik::dataset {

// 8-bit RGB, row-major, interleaved.
struct Image {
  size_t width = 0;
  size_t height = 0;
  std::vector<uint8_t> rgb;

  Image() = default;
  Image(size_t w, size_t h, uint8_t fill = 255)
      : width(w), height(h), rgb(w * h * 3, fill) {}

  uint8_t* pixel(size_t x, size_t y) { return &rgb[(y * width + x) * 3]; }
  const uint8_t* pixel(size_t x, size_t y) const { return &rgb[(y * width + x) * 3]; }
  friend bool operator==(const Image&, const Image&) = default;
};

// Binary P6 with maxval 255. Comments in the header are accepted on read.
std::string EncodePpm(const Image& image);
// IoError naming `source` when the bytes are not a valid P6 image.
Image DecodePpm(std::string_view bytes, const std::string& source = "<memory>");
Image ReadPpm(const std::filesystem::path& path);
void WritePpm(const std::filesystem::path& path, const Image& image);

// 3 x H x W with values in [0, 1].
tensor::Tensor ToTensor(const Image& image);

// Bilinear resampling of a C x H x W tensor with aligned corners: output
// pixel (i, j) samples source position (i * (H-1)/(oh-1), j * (W-1)/(ow-1)).
tensor::Tensor ResizeBilinear(const tensor::Tensor& chw, size_t out_h, size_t out_w);

// Resamples the window [top, top+h) x [left, left+w) to out_h x out_w.
tensor::Tensor CropResize(const tensor::Tensor& chw, size_t top, size_t left,
                          size_t h, size_t w, size_t out_h, size_t out_w);

}  // namespace batik::dataset

#endif  // BATIK_DATASET_IMAGE_H_
