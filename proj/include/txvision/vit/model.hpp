// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "txvision/errors.hpp"
#include "txvision/rng.hpp"
#include "txvision/types.hpp"

namespace txvision {

/// Architecture hyperparameters. The defaults (D=128, K=4, L=4 on a 24x24
/// input with 7 classes) give 891,783 trainable parameters.
struct VitConfig {
  Index embed_dim = 128;  // D
  Index depth = 4;        // K encoder blocks
  Index heads = 4;        // L attention heads
  Index height = 24;
  Index width = 24;
  Index num_classes = 7;
  Index mlp_ratio = 4;
  std::uint64_t seed = 42;

  Index head_dim() const { return embed_dim / heads; }
  Index mlp_hidden() const { return mlp_ratio * embed_dim; }
  Index patches_h() const { return height / 4; }
  Index patches_w() const { return width / 4; }
  Index num_patches() const { return patches_h() * patches_w(); }  // N = HW/16
  Index seq_len() const { return num_patches() + 1; }              // class token

  void validate() const {
    if (embed_dim < 4 || embed_dim % 4 != 0)
      throw ConsistencyError("vit: embed_dim must be a positive multiple of 4");
    if (heads < 1 || embed_dim % heads != 0)
      throw ConsistencyError("vit: embed_dim must be divisible by heads");
    if (height % 4 != 0 || width % 4 != 0)
      throw ConsistencyError("vit: image sides must be divisible by 4");
    if (depth < 1) throw ConsistencyError("vit: depth must be positive");
    if (num_classes < 2)
      throw ConsistencyError("vit: need at least 2 output classes");
    if (mlp_ratio < 1) throw ConsistencyError("vit: mlp_ratio must be positive");
  }

  bool operator==(const VitConfig&) const = default;
};

template <typename S>
struct LayerNormParams {
  VecX<S> gamma;
  VecX<S> beta;
};

/// 3x3 convolution stored GEMM-ready: weight is (in_ch*9) x out_ch with row
/// index (ky*3+kx)*in_ch + c, matching the im2col packing in net.hpp.
template <typename S>
struct ConvParams {
  MatX<S> weight;
  VecX<S> bias;
  Index in_ch = 0;
  Index out_ch = 0;
  Index stride = 1;
};

template <typename S>
struct EncoderBlockParams {
  LayerNormParams<S> ln1;
  // Per-head projections live in column block l*head_dim of the D x D
  // matrices, so head slicing is a block view rather than a copy.
  MatX<S> wq, wk, wv;
  VecX<S> bq, bk, bv;
  MatX<S> w_msa;
  VecX<S> b_msa;
  LayerNormParams<S> ln2;
  MatX<S> w1;  // D x 4D
  VecX<S> b1;
  MatX<S> w2;  // 4D x D
  VecX<S> b2;
};

/// Every learnable tensor of the classifier. Instantiated with S=float for
/// training and S=double for finite-difference verification.
template <typename S>
struct VitModel {
  VitConfig config;
  ConvParams<S> conv1, conv2, conv3;
  RowVecX<S> cls_token;  // 1 x D
  MatX<S> pos_embed;     // (N+1) x D
  std::vector<EncoderBlockParams<S>> blocks;
  LayerNormParams<S> ln_final;
  MatX<S> w_head;  // D x C_out
  VecX<S> b_head;

  /// Allocates all tensors zero-filled.
  static VitModel zeros(const VitConfig& config);

  /// Seeded initialization: Kaiming-uniform convolutions, truncated-normal
  /// (sigma 0.02) projections and embeddings, unit LayerNorm gains.
  static VitModel init(const VitConfig& config);

  std::size_t param_count() const;

  /// Calls f(name, tensor) for every parameter tensor in a fixed canonical
  /// order (the order used by checkpoints and the optimizer).
  template <typename F>
  void visit_tensors(F&& f) {
    visit_impl(*this, f);
  }
  template <typename F>
  void visit_tensors(F&& f) const {
    visit_impl(*this, f);
  }

 private:
  template <typename Self, typename F>
  static void visit_impl(Self& self, F& f) {
    f("conv1.weight", self.conv1.weight);
    f("conv1.bias", self.conv1.bias);
    f("conv2.weight", self.conv2.weight);
    f("conv2.bias", self.conv2.bias);
    f("conv3.weight", self.conv3.weight);
    f("conv3.bias", self.conv3.bias);
    f("cls_token", self.cls_token);
    f("pos_embed", self.pos_embed);
    for (std::size_t k = 0; k < self.blocks.size(); ++k) {
      auto& b = self.blocks[k];
      const std::string p = "block" + std::to_string(k) + ".";
      f(p + "ln1.gamma", b.ln1.gamma);
      f(p + "ln1.beta", b.ln1.beta);
      f(p + "wq", b.wq);
      f(p + "bq", b.bq);
      f(p + "wk", b.wk);
      f(p + "bk", b.bk);
      f(p + "wv", b.wv);
      f(p + "bv", b.bv);
      f(p + "w_msa", b.w_msa);
      f(p + "b_msa", b.b_msa);
      f(p + "ln2.gamma", b.ln2.gamma);
      f(p + "ln2.beta", b.ln2.beta);
      f(p + "w1", b.w1);
      f(p + "b1", b.b1);
      f(p + "w2", b.w2);
      f(p + "b2", b.b2);
    }
    f("ln_final.gamma", self.ln_final.gamma);
    f("ln_final.beta", self.ln_final.beta);
    f("head.weight", self.w_head);
    f("head.bias", self.b_head);
  }
};

template <typename S>
VitModel<S> VitModel<S>::zeros(const VitConfig& config) {
  config.validate();
  const Index d = config.embed_dim;

  VitModel<S> m;
  m.config = config;

  const auto make_conv = [](Index in_ch, Index out_ch, Index stride) {
    ConvParams<S> c;
    c.in_ch = in_ch;
    c.out_ch = out_ch;
    c.stride = stride;
    c.weight = MatX<S>::Zero(in_ch * 9, out_ch);
    c.bias = VecX<S>::Zero(out_ch);
    return c;
  };
  m.conv1 = make_conv(1, d / 4, 1);
  m.conv2 = make_conv(d / 4, d / 2, 2);
  m.conv3 = make_conv(d / 2, d, 2);

  m.cls_token = RowVecX<S>::Zero(d);
  m.pos_embed = MatX<S>::Zero(config.seq_len(), d);

  m.blocks.resize(static_cast<std::size_t>(config.depth));
  for (auto& b : m.blocks) {
    b.ln1 = {VecX<S>::Zero(d), VecX<S>::Zero(d)};
    b.wq = MatX<S>::Zero(d, d);
    b.wk = MatX<S>::Zero(d, d);
    b.wv = MatX<S>::Zero(d, d);
    b.bq = VecX<S>::Zero(d);
    b.bk = VecX<S>::Zero(d);
    b.bv = VecX<S>::Zero(d);
    b.w_msa = MatX<S>::Zero(d, d);
    b.b_msa = VecX<S>::Zero(d);
    b.ln2 = {VecX<S>::Zero(d), VecX<S>::Zero(d)};
    b.w1 = MatX<S>::Zero(d, config.mlp_hidden());
    b.b1 = VecX<S>::Zero(config.mlp_hidden());
    b.w2 = MatX<S>::Zero(config.mlp_hidden(), d);
    b.b2 = VecX<S>::Zero(d);
  }

  m.ln_final = {VecX<S>::Zero(d), VecX<S>::Zero(d)};
  m.w_head = MatX<S>::Zero(d, config.num_classes);
  m.b_head = VecX<S>::Zero(config.num_classes);
  return m;
}

template <typename S>
VitModel<S> VitModel<S>::init(const VitConfig& config) {
  VitModel<S> m = zeros(config);
  std::mt19937_64 rng(config.seed);

  const auto kaiming_uniform = [&rng](MatX<S>& w, Index fan_in) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (Index j = 0; j < w.cols(); ++j)
      for (Index i = 0; i < w.rows(); ++i)
        w(i, j) = static_cast<S>((2.0 * uniform_real(rng) - 1.0) * bound);
  };
  const auto trunc_normal = [&rng](auto& w) {
    for (Index j = 0; j < w.cols(); ++j)
      for (Index i = 0; i < w.rows(); ++i)
        w(i, j) = static_cast<S>(truncated_normal(rng, 0.02));
  };

  kaiming_uniform(m.conv1.weight, m.conv1.in_ch * 9);
  kaiming_uniform(m.conv2.weight, m.conv2.in_ch * 9);
  kaiming_uniform(m.conv3.weight, m.conv3.in_ch * 9);
  trunc_normal(m.cls_token);
  trunc_normal(m.pos_embed);
  for (auto& b : m.blocks) {
    b.ln1.gamma.setOnes();
    trunc_normal(b.wq);
    trunc_normal(b.wk);
    trunc_normal(b.wv);
    trunc_normal(b.w_msa);
    b.ln2.gamma.setOnes();
    trunc_normal(b.w1);
    trunc_normal(b.w2);
  }
  m.ln_final.gamma.setOnes();
  trunc_normal(m.w_head);
  return m;
}

template <typename S>
std::size_t VitModel<S>::param_count() const {
  std::size_t count = 0;
  visit_tensors([&count](const std::string&, const auto& t) {
    count += static_cast<std::size_t>(t.size());
  });
  return count;
}

}  // namespace txvision
