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

#include "batik/tensor/checkpoint.h"

#include <bit>
#include <cstring>

#include "batik/core/error.h"
#include "batik/core/text.h"

namespace batik::tensor {

namespace {

constexpr char kMagic[8] = {'B', 'A', 'T', 'I', 'K', 'C', 'K', 'P'};
constexpr uint32_t kVersion = 1;
constexpr uint8_t kNativeOrder = std::endian::native == std::endian::little ? 1 : 2;

template <typename T>
void Put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T Get(const char* what) {
    T v;
    std::memcpy(&v, Take(sizeof(T), what).data(), sizeof(T));
    return v;
  }

  std::string_view Take(size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw IoError(std::string("checkpoint truncated while reading ") + what +
                    " at byte " + std::to_string(pos_));
    }
    const std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::string EncodeCheckpoint(const NamedTensors& tensors) {
  std::string out(kMagic, sizeof(kMagic));
  Put<uint8_t>(out, kNativeOrder);
  Put<uint32_t>(out, kVersion);
  Put<uint64_t>(out, tensors.size());
  for (const auto& [name, t] : tensors) {
    Put<uint32_t>(out, static_cast<uint32_t>(name.size()));
    out += name;
    Put<uint32_t>(out, static_cast<uint32_t>(t.rank()));
    for (size_t d : t.shape()) Put<uint64_t>(out, d);
    out.append(reinterpret_cast<const char*>(t.data()), t.size() * sizeof(double));
  }
  return out;
}

NamedTensors DecodeCheckpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.Take(sizeof(kMagic), "magic") != std::string_view(kMagic, sizeof(kMagic))) {
    throw IoError("not a batik checkpoint");
  }
  const auto order = r.Get<uint8_t>("byte order");
  if (order != kNativeOrder) {
    throw IoError("checkpoint byte order " + std::to_string(order) +
                  " does not match this machine");
  }
  const auto version = r.Get<uint32_t>("version");
  if (version != kVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = r.Get<uint64_t>("tensor count");
  NamedTensors out;
  for (uint64_t i = 0; i < count; ++i) {
    const auto len = r.Get<uint32_t>("name length");
    std::string name(r.Take(len, "name"));
    const auto rank = r.Get<uint32_t>("rank");
    if (rank > 8) throw IoError("checkpoint tensor " + name + " has rank " + std::to_string(rank));
    Shape shape;
    for (uint32_t d = 0; d < rank; ++d) shape.push_back(r.Get<uint64_t>("dimension"));
    const size_t n = ShapeSize(shape);
    if (n > bytes.size() / sizeof(double)) throw IoError("checkpoint tensor " + name + " too large");
    const std::string_view raw = r.Take(n * sizeof(double), "tensor data");
    std::vector<double> data(n);
    std::memcpy(data.data(), raw.data(), raw.size());
    out.emplace_back(std::move(name), Tensor(std::move(shape), std::move(data)));
  }
  if (!r.done()) throw IoError("checkpoint has trailing bytes");
  return out;
}

void SaveCheckpoint(const std::filesystem::path& path, const NamedTensors& tensors) {
  WriteFile(path, EncodeCheckpoint(tensors));
}

NamedTensors LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(ReadFile(path));
}

}  // namespace batik::tensor
