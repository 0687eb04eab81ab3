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

#include "batik/model/resnet.h"

#include <map>

#include "batik/core/error.h"

namespace batik::model {

namespace {

void AddInPlace(Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw InvalidArgument("residual sum: " + tensor::ShapeString(a.shape()) + " vs " +
                          tensor::ShapeString(b.shape()));
  }
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

void CollectBn(const std::string& name, tensor::BatchNorm2d& bn,
               std::vector<Parameter*>& params, StateRefs& state) {
  for (Parameter* p : bn.Parameters()) {
    params.push_back(p);
    state.emplace_back(p->name, &p->value);
  }
  state.emplace_back(name + ".running_mean", &bn.running_mean());
  state.emplace_back(name + ".running_var", &bn.running_var());
}

void CollectConv(tensor::Conv2d& conv, std::vector<Parameter*>& params, StateRefs& state) {
  for (Parameter* p : conv.Parameters()) {
    params.push_back(p);
    state.emplace_back(p->name, &p->value);
  }
}

std::string ConvLine(const std::string& name, const tensor::Conv2d& c) {
  std::string s = name + " conv" + std::to_string(c.kernel()) + "x" + std::to_string(c.kernel()) +
                  " " + std::to_string(c.in_channels()) + "->" +
                  std::to_string(c.out_channels());
  if (c.stride() != 1) s += " /" + std::to_string(c.stride());
  return s;
}

}  // namespace

Projection::Projection(const std::string& name, size_t in, size_t out, size_t stride,
                       bool pooled, Rng& rng)
    : conv_(name + ".conv", in, out, 1, pooled ? 1 : stride, 0, false, &rng),
      bn_(name + ".bn", out) {
  if (pooled && stride == 2) pool_.emplace(2, 2);
  if (pooled && stride != 1 && stride != 2) {
    throw ConfigError("pool-conv projection supports stride 1 or 2");
  }
}

Tensor Projection::Forward(const Tensor& x, Mode mode) {
  if (pool_) return bn_.Forward(conv_.Forward(pool_->Forward(x, mode), mode), mode);
  return bn_.Forward(conv_.Forward(x, mode), mode);
}

Tensor Projection::Backward(const Tensor& dy) {
  Tensor d = conv_.Backward(bn_.Backward(dy));
  return pool_ ? pool_->Backward(d) : d;
}

void Projection::Collect(std::vector<Parameter*>& params, StateRefs& state) {
  CollectConv(conv_, params, state);
  const std::string& wname = conv_.weight().name;
  CollectBn(wname.substr(0, wname.rfind(".conv")) + ".bn", bn_, params, state);
}

void Projection::Describe(std::vector<std::string>& out) const {
  const std::string& wname = conv_.weight().name;
  const std::string base = wname.substr(0, wname.rfind(".conv"));
  if (pool_) out.push_back(base + ".pool avgpool2x2 /2");
  out.push_back(ConvLine(base + ".conv", conv_));
  out.push_back(base + ".bn batchnorm " + std::to_string(conv_.out_channels()));
}

BasicBlock::BasicBlock(const std::string& name, size_t in, size_t out, size_t stride,
                       bool pool_conv_shortcut, Rng& rng)
    : name_(name),
      conv1_(name + ".conv1", in, out, 3, stride, 1, false, &rng),
      bn1_(name + ".bn1", out),
      conv2_(name + ".conv2", out, out, 3, 1, 1, false, &rng),
      bn2_(name + ".bn2", out) {
  if (stride != 1 || in != out) {
    shortcut_.emplace(name + ".shortcut", in, out, stride, pool_conv_shortcut, rng);
  }
}

Tensor BasicBlock::Forward(const Tensor& x, Mode mode, const Tensor* extra) {
  Tensor h = relu1_.Forward(bn1_.Forward(conv1_.Forward(x, mode), mode), mode);
  Tensor sum = bn2_.Forward(conv2_.Forward(h, mode), mode);
  AddInPlace(sum, shortcut_ ? shortcut_->Forward(x, mode) : x);
  if (extra) AddInPlace(sum, *extra);
  return relu_out_.Forward(sum, mode);
}

Tensor BasicBlock::Backward(const Tensor& dy, Tensor* d_extra) {
  const Tensor d_sum = relu_out_.Backward(dy);
  if (d_extra) *d_extra = d_sum;
  Tensor dx = conv1_.Backward(bn1_.Backward(relu1_.Backward(conv2_.Backward(bn2_.Backward(d_sum)))));
  AddInPlace(dx, shortcut_ ? shortcut_->Backward(d_sum) : d_sum);
  return dx;
}

void BasicBlock::Collect(std::vector<Parameter*>& params, StateRefs& state) {
  CollectConv(conv1_, params, state);
  CollectBn(name_ + ".bn1", bn1_, params, state);
  CollectConv(conv2_, params, state);
  CollectBn(name_ + ".bn2", bn2_, params, state);
  if (shortcut_) shortcut_->Collect(params, state);
}

void BasicBlock::Describe(std::vector<std::string>& out) const {
  out.push_back(ConvLine(name_ + ".conv1", conv1_));
  out.push_back(name_ + ".bn1 batchnorm " + std::to_string(conv1_.out_channels()));
  out.push_back(name_ + ".relu1 relu");
  out.push_back(ConvLine(name_ + ".conv2", conv2_));
  out.push_back(name_ + ".bn2 batchnorm " + std::to_string(conv2_.out_channels()));
  if (shortcut_) shortcut_->Describe(out);
  out.push_back(name_ + ".add");
  out.push_back(name_ + ".relu relu");
}

Model::Model(const ArchConfig& config, uint64_t seed) : config_(config) {
  config_.Validate();
  Rng rng(seed);
  stem_conv_ = tensor::Conv2d("stem.conv", config_.channels, config_.stem_width, 7, 2, 3,
                              false, &rng);
  stem_bn_ = tensor::BatchNorm2d("stem.bn", config_.stem_width);
  size_t in = config_.stem_width;
  size_t pair = 0;
  for (size_t s = 0; s < 4; ++s) {
    const size_t out = config_.widths[s];
    const size_t stride = s == 0 ? 1 : 2;
    for (size_t b = 0; b < config_.blocks[s]; ++b) {
      const std::string name = "layer" + std::to_string(s + 1) + "." + std::to_string(b);
      blocks_.emplace_back(name, b == 0 ? in : out, out, b == 0 ? stride : 1,
                           config_.pool_conv_shortcut, rng);
      links_.emplace_back();
      if (b % 2 == 1) {
        if (config_.LinkEnabled(pair)) {
          Link link;
          link.first = blocks_.size() - 2;
          const size_t link_in = b == 1 ? in : out;
          const size_t link_stride = b == 1 ? stride : 1;
          if (link_in != out || link_stride != 1) {
            link.projection.emplace("link" + std::to_string(s + 1) + "." + std::to_string(b / 2),
                                    link_in, out, link_stride, true, rng);
          }
          links_.back() = std::move(link);
        }
        ++pair;
      }
    }
    in = out;
  }
  fc_ = tensor::Linear("fc", in, config_.num_classes, &rng);
}

Tensor Model::Forward(const Tensor& x, Mode mode) {
  if (x.rank() != 4 || x.dim(1) != config_.channels || x.dim(2) != config_.height ||
      x.dim(3) != config_.width) {
    throw InvalidArgument("model expects N x " + std::to_string(config_.channels) + " x " +
                          std::to_string(config_.height) + " x " +
                          std::to_string(config_.width) + ", got " +
                          tensor::ShapeString(x.shape()));
  }
  Tensor h = stem_pool_.Forward(
      stem_relu_.Forward(stem_bn_.Forward(stem_conv_.Forward(x, mode), mode), mode), mode);
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (b + 1 < links_.size() && links_[b + 1]) links_[b + 1]->input = h;
    if (links_[b]) {
      Link& link = *links_[b];
      const Tensor extra = link.projection ? link.projection->Forward(link.input, mode) : link.input;
      h = blocks_[b].Forward(h, mode, &extra);
      if (mode == Mode::kEval) link.input = Tensor();
    } else {
      h = blocks_[b].Forward(h, mode);
    }
  }
  return fc_.Forward(gap_.Forward(h, mode), mode);
}

void Model::Backward(const Tensor& dlogits) {
  Tensor d = gap_.Backward(fc_.Backward(dlogits));
  std::map<size_t, Tensor> pending;  // link gradients keyed by pair-start block
  for (size_t b = blocks_.size(); b-- > 0;) {
    if (links_[b]) {
      Tensor d_pre;
      d = blocks_[b].Backward(d, &d_pre);
      Link& link = *links_[b];
      pending[link.first] = link.projection ? link.projection->Backward(d_pre) : d_pre;
    } else {
      d = blocks_[b].Backward(d);
    }
    if (auto it = pending.find(b); it != pending.end()) {
      AddInPlace(d, it->second);
      pending.erase(it);
    }
  }
  stem_conv_.Backward(stem_bn_.Backward(stem_relu_.Backward(stem_pool_.Backward(d))));
}

void Model::Collect(std::vector<Parameter*>& params, StateRefs& state) {
  CollectConv(stem_conv_, params, state);
  CollectBn("stem.bn", stem_bn_, params, state);
  for (size_t b = 0; b < blocks_.size(); ++b) {
    blocks_[b].Collect(params, state);
    if (links_[b] && links_[b]->projection) links_[b]->projection->Collect(params, state);
  }
  for (Parameter* p : fc_.Parameters()) {
    params.push_back(p);
    state.emplace_back(p->name, &p->value);
  }
}

std::vector<Parameter*> Model::Parameters() {
  std::vector<Parameter*> params;
  StateRefs state;
  Collect(params, state);
  return params;
}

size_t Model::ParameterCount() {
  size_t n = 0;
  for (const Parameter* p : Parameters()) n += p->value.size();
  return n;
}

std::vector<std::string> Model::Describe() const {
  std::vector<std::string> out;
  out.push_back(ConvLine("stem.conv", stem_conv_));
  out.push_back("stem.bn batchnorm " + std::to_string(config_.stem_width));
  out.push_back("stem.relu relu");
  out.push_back("stem.pool maxpool3x3 /2");
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (links_[b]) {
      if (links_[b]->projection) links_[b]->projection->Describe(out);
      out.push_back("link " + std::to_string(links_[b]->first) + "->" + std::to_string(b));
    }
    blocks_[b].Describe(out);
  }
  out.push_back("gap globalavgpool");
  out.push_back("fc linear " + std::to_string(config_.widths[3]) + "->" +
                std::to_string(config_.num_classes));
  return out;
}

tensor::NamedTensors Model::State() {
  std::vector<Parameter*> params;
  StateRefs refs;
  Collect(params, refs);
  tensor::NamedTensors out;
  out.reserve(refs.size());
  for (const auto& [name, t] : refs) out.emplace_back(name, *t);
  return out;
}

void Model::LoadState(const tensor::NamedTensors& state) {
  std::vector<Parameter*> params;
  StateRefs refs;
  Collect(params, refs);
  if (state.size() != refs.size()) {
    throw ConfigError("checkpoint has " + std::to_string(state.size()) + " tensors, model needs " +
                      std::to_string(refs.size()));
  }
  for (size_t i = 0; i < refs.size(); ++i) {
    if (state[i].first != refs[i].first || state[i].second.shape() != refs[i].second->shape()) {
      throw ConfigError("checkpoint tensor " + std::to_string(i + 1) + " is " + state[i].first +
                        " " + tensor::ShapeString(state[i].second.shape()) + ", model expects " +
                        refs[i].first + " " + tensor::ShapeString(refs[i].second->shape()));
    }
    tensor::CheckFinite(state[i].second, "checkpoint tensor " + state[i].first);
  }
  for (size_t i = 0; i < refs.size(); ++i) *refs[i].second = state[i].second;
}

std::filesystem::path SidecarPath(const std::filesystem::path& checkpoint) {
  std::filesystem::path p = checkpoint;
  p += ".arch.json";
  return p;
}

void SaveModel(const std::filesystem::path& path, Model& model) {
  tensor::SaveCheckpoint(path, model.State());
  SaveArchConfig(SidecarPath(path), model.config());
}

Model LoadModel(const std::filesystem::path& path) {
  Model m(LoadArchConfig(SidecarPath(path)), 0);
  m.LoadState(tensor::LoadCheckpoint(path));
  return m;
}

}  // namespace batik::model
