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

#include "batik/dataset/image.h"

#include <cctype>
#include <cmath>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::dataset {

using tensor::Tensor;

std::string EncodePpm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
  return out;
}

namespace {

class HeaderReader {
 public:
  HeaderReader(std::string_view bytes, const std::string& source)
      : bytes_(bytes), source_(source) {}

  size_t Number(const char* what) {
    SkipSpaceAndComments();
    size_t start = pos_;
    size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<size_t>(bytes_[pos_] - '0');
      if (value > (1u << 24)) Fail(std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ == start) Fail(std::string("missing ") + what);
    return value;
  }

  // The single whitespace byte that ends the header.
  size_t EndOfHeader() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      Fail("missing whitespace after maxval");
    }
    return pos_ + 1;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw IoError(source_ + ": not a P6 image (" + what + ")");
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  const std::string& source_;
  size_t pos_ = 2;
};

}  // namespace

Image DecodePpm(std::string_view bytes, const std::string& source) {
  HeaderReader r(bytes, source);
  if (bytes.substr(0, 2) != "P6") r.Fail("bad magic");
  const size_t w = r.Number("width");
  const size_t h = r.Number("height");
  const size_t maxval = r.Number("maxval");
  if (w == 0 || h == 0) r.Fail("zero size");
  if (maxval != 255) r.Fail("maxval " + std::to_string(maxval) + " unsupported");
  const size_t start = r.EndOfHeader();
  const size_t need = w * h * 3;
  if (bytes.size() - start < need) r.Fail("truncated pixel data");
  Image img(w, h);
  std::copy(bytes.begin() + start, bytes.begin() + start + need, img.rgb.begin());
  return img;
}

Image ReadPpm(const std::filesystem::path& path) {
  return DecodePpm(ReadFile(path), path.string());
}

void WritePpm(const std::filesystem::path& path, const Image& image) {
  WriteFile(path, EncodePpm(image));
}

Tensor ToTensor(const Image& image) {
  Tensor t({3, image.height, image.width});
  const size_t plane = image.height * image.width;
  for (size_t p = 0; p < plane; ++p) {
    for (size_t c = 0; c < 3; ++c) t[c * plane + p] = image.rgb[p * 3 + c] / 255.0;
  }
  return t;
}

Tensor CropResize(const Tensor& chw, size_t top, size_t left, size_t h, size_t w,
                  size_t out_h, size_t out_w) {
  if (chw.rank() != 3) {
    throw InvalidArgument("resize: expected C x H x W, got " + tensor::ShapeString(chw.shape()));
  }
  const size_t src_h = chw.dim(1), src_w = chw.dim(2);
  if (h == 0 || w == 0 || out_h == 0 || out_w == 0 || top + h > src_h || left + w > src_w) {
    throw InvalidArgument("resize: window outside " + tensor::ShapeString(chw.shape()));
  }
  const size_t channels = chw.dim(0);
  Tensor out({channels, out_h, out_w});
  auto coord = [](size_t i, size_t out_n, size_t in_n) {
    if (out_n == 1 || in_n == 1) return 0.0;
    return static_cast<double>(i) * static_cast<double>(in_n - 1) /
           static_cast<double>(out_n - 1);
  };
  for (size_t i = 0; i < out_h; ++i) {
    const double sy = coord(i, out_h, h);
    const size_t y0 = std::min(static_cast<size_t>(sy), h - 1);
    const size_t y1 = std::min(y0 + 1, h - 1);
    const double fy = sy - static_cast<double>(y0);
    for (size_t j = 0; j < out_w; ++j) {
      const double sx = coord(j, out_w, w);
      const size_t x0 = std::min(static_cast<size_t>(sx), w - 1);
      const size_t x1 = std::min(x0 + 1, w - 1);
      const double fx = sx - static_cast<double>(x0);
      for (size_t c = 0; c < channels; ++c) {
        const double* p = chw.data() + c * src_h * src_w;
        auto at = [&](size_t y, size_t x) { return p[(top + y) * src_w + left + x]; };
        const double v = (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x1)) +
                         fy * ((1 - fx) * at(y1, x0) + fx * at(y1, x1));
        out[(c * out_h + i) * out_w + j] = v;
      }
    }
  }
  return out;
}

Tensor ResizeBilinear(const Tensor& chw, size_t out_h, size_t out_w) {
  if (chw.rank() != 3) {
    throw InvalidArgument("resize: expected C x H x W, got " + tensor::ShapeString(chw.shape()));
  }
  return CropResize(chw, 0, 0, chw.dim(1), chw.dim(2), out_h, out_w);
}

}  // namespace batik::dataset
