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

#ifndef BATIK_TENSOR_CHECKPOINT_H_
#define BATIK_TENSOR_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "batik/tensor/tensor.h"

namespace batik::tensor {

using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

// Layout: "BATIKCKP", u8 byte order (1 little, 2 big), u32 version, u64
// tensor count, then per tensor u32 name length, name bytes, u32 rank, u64
// dims, row-major doubles. Integers and doubles use the declared byte order.
std::string EncodeCheckpoint(const NamedTensors& tensors);
// IoError on truncation, bad magic, unknown version or foreign byte order.
NamedTensors DecodeCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::filesystem::path& path,
                    const NamedTensors& tensors);
NamedTensors LoadCheckpoint(const std::filesystem::path& path);

}  // namespace batik::tensor

#endif  // BATIK_TENSOR_CHECKPOINT_H_
