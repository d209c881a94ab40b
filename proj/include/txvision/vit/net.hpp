// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "txvision/vit/model.hpp"

namespace txvision {

namespace nn {

inline constexpr double kLayerNormEps = 1e-5;

/// Activation matrices are position-major: row (b*H+y)*W+x holds the
/// channel vector of sample b at pixel (y, x). This keeps conv outputs,
/// patch tokens and transformer tokens in one consistent layout.

inline Index conv_out_side(Index in, Index stride) {
  return (in - 1) / stride + 1;  // 3x3 kernel, padding 1
}

/// Packs 3x3 neighborhoods (zero padding) into rows of `cols`:
/// cols((b*out_h+oy)*out_w+ox, (ky*3+kx)*C + c) = in(b, y, x, c).
template <typename S>
void im2col_3x3(const MatX<S>& input, Index batch, Index in_h, Index in_w,
                Index stride, MatX<S>& cols) {
  const Index channels = input.cols();
  const Index out_h = conv_out_side(in_h, stride);
  const Index out_w = conv_out_side(in_w, stride);
  cols.setZero(batch * out_h * out_w, channels * 9);

#pragma omp parallel for schedule(static)
  for (Index b = 0; b < batch; ++b) {
    const Index in_base = b * in_h * in_w;
    const Index out_base = b * out_h * out_w;
    for (Index oy = 0; oy < out_h; ++oy) {
      for (Index ox = 0; ox < out_w; ++ox) {
        const Index row = out_base + oy * out_w + ox;
        for (Index ky = 0; ky < 3; ++ky) {
          const Index y = oy * stride + ky - 1;
          if (y < 0 || y >= in_h) continue;
          for (Index kx = 0; kx < 3; ++kx) {
            const Index x = ox * stride + kx - 1;
            if (x < 0 || x >= in_w) continue;
            cols.row(row).segment((ky * 3 + kx) * channels, channels) =
                input.row(in_base + y * in_w + x);
          }
        }
      }
    }
  }
}

/// Adjoint of im2col_3x3: scatter-adds column gradients back onto the input.
template <typename S>
void col2im_3x3(const MatX<S>& dcols, Index batch, Index in_h, Index in_w,
                Index channels, Index stride, MatX<S>& dinput) {
  const Index out_h = conv_out_side(in_h, stride);
  const Index out_w = conv_out_side(in_w, stride);
  dinput.setZero(batch * in_h * in_w, channels);

#pragma omp parallel for schedule(static)
  for (Index b = 0; b < batch; ++b) {
    const Index in_base = b * in_h * in_w;
    const Index out_base = b * out_h * out_w;
    for (Index oy = 0; oy < out_h; ++oy) {
      for (Index ox = 0; ox < out_w; ++ox) {
        const Index row = out_base + oy * out_w + ox;
        for (Index ky = 0; ky < 3; ++ky) {
          const Index y = oy * stride + ky - 1;
          if (y < 0 || y >= in_h) continue;
          for (Index kx = 0; kx < 3; ++kx) {
            const Index x = ox * stride + kx - 1;
            if (x < 0 || x >= in_w) continue;
            dinput.row(in_base + y * in_w + x) +=
                dcols.row(row).segment((ky * 3 + kx) * channels, channels);
          }
        }
      }
    }
  }
}

/// gamma * xhat + beta, broadcast over rows.
template <typename S>
MatX<S> ln_affine(const MatX<S>& xhat, const LayerNormParams<S>& p) {
  MatX<S> y = (xhat.array().rowwise() * p.gamma.transpose().array()).matrix();
  y.array().rowwise() += p.beta.transpose().array();
  return y;
}

template <typename S>
MatX<S> layer_norm_forward(const MatX<S>& x, const LayerNormParams<S>& p,
                           MatX<S>& xhat, VecX<S>& inv_std) {
  const VecX<S> mean = x.rowwise().mean();
  xhat = x.colwise() - mean;
  inv_std = ((xhat.array().square().rowwise().mean()) +
             static_cast<S>(kLayerNormEps))
                .rsqrt()
                .matrix();
  xhat.array().colwise() *= inv_std.array();
  return ln_affine(xhat, p);
}

/// Backward pass; returns dx and accumulates parameter gradients.
template <typename S>
MatX<S> layer_norm_backward(const MatX<S>& dy, const MatX<S>& xhat,
                            const VecX<S>& inv_std, const LayerNormParams<S>& p,
                            LayerNormParams<S>& grad) {
  grad.gamma.noalias() += (dy.array() * xhat.array()).colwise().sum().matrix().transpose();
  grad.beta.noalias() += dy.colwise().sum().transpose();

  const MatX<S> dxhat = dy.array().rowwise() * p.gamma.transpose().array();
  const VecX<S> m1 = dxhat.rowwise().mean();
  const VecX<S> m2 = (dxhat.array() * xhat.array()).rowwise().mean();
  MatX<S> dx = dxhat;
  dx.array().colwise() -= m1.array();
  dx.array() -= xhat.array().colwise() * m2.array();
  dx.array().colwise() *= inv_std.array();
  return dx;
}

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

template <typename S>
S gelu_scalar(S x) {
  return static_cast<S>(0.5) * x *
         (static_cast<S>(1) + std::erf(x * static_cast<S>(kInvSqrt2)));
}

template <typename S>
S gelu_grad_scalar(S x) {
  const S cdf = static_cast<S>(0.5) *
                (static_cast<S>(1) + std::erf(x * static_cast<S>(kInvSqrt2)));
  const S pdf = static_cast<S>(
      kInvSqrt2Pi * std::exp(-0.5 * static_cast<double>(x) * static_cast<double>(x)));
  return cdf + x * pdf;
}

template <typename S>
void softmax_rows_inplace(MatX<S>& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    row.array() -= row.maxCoeff();
    row = row.array().exp();
    row /= row.sum();
  }
}

}  // namespace nn

// ---------------------------------------------------------------------------
// Single-sequence operations. These follow the architecture step by step
// and also serve as the reference path the batched trainer is tested against.
// ---------------------------------------------------------------------------

/// Convolutional patch embedding of one image: three 3x3 convolutions
/// (stride 1, 2, 2), ReLU after the first two, none after the third.
/// Returns N x D with patch rows in spatial row-major order.
template <typename S>
MatX<S> conv_embed(const VitModel<S>& model, const MatX<S>& image) {
  const VitConfig& cfg = model.config;
  if (image.rows() != cfg.height || image.cols() != cfg.width)
    throw ConsistencyError("vit: image dimensions do not match config");

  MatX<S> act(cfg.height * cfg.width, 1);
  for (Index y = 0; y < cfg.height; ++y)
    for (Index x = 0; x < cfg.width; ++x) act(y * cfg.width + x, 0) = image(y, x);

  Index h = cfg.height, w = cfg.width;
  MatX<S> cols;
  for (const ConvParams<S>* conv : {&model.conv1, &model.conv2, &model.conv3}) {
    nn::im2col_3x3(act, 1, h, w, conv->stride, cols);
    act.noalias() = cols * conv->weight;
    act.array().rowwise() += conv->bias.transpose().array();
    if (conv != &model.conv3) act = act.cwiseMax(S{0});
    h = nn::conv_out_side(h, conv->stride);
    w = nn::conv_out_side(w, conv->stride);
  }
  return act;  // N x D
}

/// Prepends the class token and adds positional embeddings: Z0, (N+1) x D.
template <typename S>
MatX<S> embed_sequence(const VitModel<S>& model, const MatX<S>& patches) {
  const VitConfig& cfg = model.config;
  if (patches.rows() != cfg.num_patches() || patches.cols() != cfg.embed_dim)
    throw ConsistencyError("vit: patch matrix does not match config");
  MatX<S> z(cfg.seq_len(), cfg.embed_dim);
  z.row(0) = model.cls_token;
  z.bottomRows(cfg.num_patches()) = patches;
  z += model.pos_embed;
  return z;
}

/// Pre-norm multi-head self-attention with residual:
/// msa(LN(Z)) + Z. When `probs_out` is given it receives the L per-head
/// attention matrices (rows are distributions over keys).
template <typename S>
MatX<S> msa_forward(const EncoderBlockParams<S>& block, const MatX<S>& z,
                    Index heads, std::vector<MatX<S>>* probs_out = nullptr) {
  const Index t = z.rows();
  const Index d = z.cols();
  const Index dl = d / heads;

  MatX<S> xhat;
  VecX<S> istd;
  const MatX<S> ln = nn::layer_norm_forward(z, block.ln1, xhat, istd);

  MatX<S> q = ln * block.wq;
  q.array().rowwise() += block.bq.transpose().array();
  MatX<S> k = ln * block.wk;
  k.array().rowwise() += block.bk.transpose().array();
  MatX<S> v = ln * block.wv;
  v.array().rowwise() += block.bv.transpose().array();

  const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(dl)));
  MatX<S> concat(t, d);
  for (Index l = 0; l < heads; ++l) {
    MatX<S> probs = q.middleCols(l * dl, dl) *
                    k.middleCols(l * dl, dl).transpose() * scale;
    nn::softmax_rows_inplace(probs);
    concat.middleCols(l * dl, dl).noalias() = probs * v.middleCols(l * dl, dl);
    if (probs_out) probs_out->push_back(std::move(probs));
  }

  MatX<S> out = concat * block.w_msa;
  out.array().rowwise() += block.b_msa.transpose().array();
  return out + z;
}

/// One full encoder block: attention residual, then pre-norm MLP residual.
template <typename S>
MatX<S> encoder_block_forward(const EncoderBlockParams<S>& block,
                              const MatX<S>& z, Index heads) {
  const MatX<S> attn = msa_forward(block, z, heads);

  MatX<S> xhat;
  VecX<S> istd;
  const MatX<S> ln = nn::layer_norm_forward(attn, block.ln2, xhat, istd);
  MatX<S> hidden = ln * block.w1;
  hidden.array().rowwise() += block.b1.transpose().array();
  hidden = hidden.unaryExpr([](S x) { return nn::gelu_scalar(x); });
  MatX<S> out = hidden * block.w2;
  out.array().rowwise() += block.b2.transpose().array();
  return out + attn;
}

/// Logits of a single image, composed from the stepwise operations above.
template <typename S>
RowVecX<S> forward_one(const VitModel<S>& model, const MatX<S>& image) {
  MatX<S> z = embed_sequence(model, conv_embed(model, image));
  for (const auto& block : model.blocks)
    z = encoder_block_forward(block, z, model.config.heads);

  MatX<S> xhat;
  VecX<S> istd;
  const MatX<S> cls = nn::layer_norm_forward(
      MatX<S>(z.topRows(1)), model.ln_final, xhat, istd);
  RowVecX<S> logits = cls.row(0) * model.w_head;
  logits += model.b_head.transpose();
  return logits;
}

template <typename S>
int predict(const RowVecX<S>& logits) {
  Index arg = 0;
  logits.maxCoeff(&arg);
  return static_cast<int>(arg);
}

/// Numerically stabilized softmax cross-entropy for one sample.
template <typename S>
double cross_entropy(const RowVecX<S>& logits, int label) {
  if (label < 0 || label >= logits.size())
    throw ConsistencyError("loss: label out of range");
  const double mx = static_cast<double>(logits.maxCoeff());
  double sum = 0.0;
  for (Index j = 0; j < logits.size(); ++j)
    sum += std::exp(static_cast<double>(logits[j]) - mx);
  return std::log(sum) - (static_cast<double>(logits[label]) - mx);
}

/// Mean batch loss and its gradient w.r.t. the logits:
/// (softmax - onehot) / batch.
template <typename S>
std::pair<double, MatX<S>> batch_loss(const MatX<S>& logits,
                                      std::span<const int> labels) {
  const Index batch = logits.rows();
  if (static_cast<Index>(labels.size()) != batch)
    throw ConsistencyError("loss: label count does not match batch");

  MatX<S> dlogits(batch, logits.cols());
  double loss = 0.0;
  for (Index b = 0; b < batch; ++b) {
    const RowVecX<S> row = logits.row(b);
    loss += cross_entropy(row, labels[static_cast<std::size_t>(b)]);
    RowVecX<S> p = row;
    p.array() -= p.maxCoeff();
    p = p.array().exp();
    p /= p.sum();
    p[labels[static_cast<std::size_t>(b)]] -= S{1};
    dlogits.row(b) = p / static_cast<S>(batch);
  }
  return {loss / static_cast<double>(batch), std::move(dlogits)};
}

// ---------------------------------------------------------------------------
// Batched training path. All tokens of the batch are stacked into one
// (B*T) x D matrix so linear layers become single GEMMs; attention runs
// per sample/head on disjoint blocks.
// ---------------------------------------------------------------------------

template <typename S>
struct BlockCache {
  MatX<S> input;             // Z_{k-1}
  MatX<S> ln1_xhat;
  VecX<S> ln1_istd;
  MatX<S> q, k, v;
  std::vector<MatX<S>> probs;  // batch*heads softmax matrices, T x T
  MatX<S> concat;            // [S_1 .. S_L]
  MatX<S> attn_resid;        // Z''
  MatX<S> ln2_xhat;
  VecX<S> ln2_istd;
  MatX<S> mlp_pre;           // before GELU
  MatX<S> mlp_act;           // after GELU
};

template <typename S>
struct ForwardCache {
  Index batch = 0;
  MatX<S> cols1, act1;  // post-ReLU
  MatX<S> cols2, act2;  // post-ReLU
  MatX<S> cols3, patches;
  std::vector<BlockCache<S>> blocks;
  MatX<S> tokens;      // Z_K (final sequence states)
  MatX<S> cls_rows;    // B x D, row 0 of each sample in Z_K
  MatX<S> lnf_xhat;
  VecX<S> lnf_istd;
};

/// Forward pass over a batch of images; returns B x C_out logits and fills
/// the cache consumed by backward_batch.
template <typename S>
MatX<S> forward_batch(const VitModel<S>& model,
                      std::span<const MatX<S>* const> images,
                      ForwardCache<S>& cache) {
  const VitConfig& cfg = model.config;
  const Index batch = static_cast<Index>(images.size());
  const Index t = cfg.seq_len();
  const Index d = cfg.embed_dim;
  cache.batch = batch;

  MatX<S> input(batch * cfg.height * cfg.width, 1);
  for (Index b = 0; b < batch; ++b) {
    const MatX<S>& img = *images[static_cast<std::size_t>(b)];
    if (img.rows() != cfg.height || img.cols() != cfg.width)
      throw ConsistencyError("vit: image dimensions do not match config");
    const Index base = b * cfg.height * cfg.width;
    for (Index y = 0; y < cfg.height; ++y)
      for (Index x = 0; x < cfg.width; ++x)
        input(base + y * cfg.width + x, 0) = img(y, x);
  }

  // Convolutional embedding.
  nn::im2col_3x3(input, batch, cfg.height, cfg.width, 1, cache.cols1);
  cache.act1.noalias() = cache.cols1 * model.conv1.weight;
  cache.act1.array().rowwise() += model.conv1.bias.transpose().array();
  cache.act1 = cache.act1.cwiseMax(S{0});

  nn::im2col_3x3(cache.act1, batch, cfg.height, cfg.width, 2, cache.cols2);
  cache.act2.noalias() = cache.cols2 * model.conv2.weight;
  cache.act2.array().rowwise() += model.conv2.bias.transpose().array();
  cache.act2 = cache.act2.cwiseMax(S{0});

  nn::im2col_3x3(cache.act2, batch, cfg.height / 2, cfg.width / 2, 2,
                 cache.cols3);
  cache.patches.noalias() = cache.cols3 * model.conv3.weight;
  cache.patches.array().rowwise() += model.conv3.bias.transpose().array();

  // Token assembly: class token + patches + positional embeddings.
  MatX<S> tokens(batch * t, d);
  for (Index b = 0; b < batch; ++b) {
    tokens.row(b * t) = model.cls_token + model.pos_embed.row(0);
    tokens.middleRows(b * t + 1, cfg.num_patches()) =
        cache.patches.middleRows(b * cfg.num_patches(), cfg.num_patches()) +
        model.pos_embed.bottomRows(cfg.num_patches());
  }

  // Encoder blocks.
  const Index heads = cfg.heads;
  const Index dl = cfg.head_dim();
  const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(dl)));
  cache.blocks.assign(static_cast<std::size_t>(cfg.depth), BlockCache<S>{});

  for (Index kb = 0; kb < cfg.depth; ++kb) {
    const EncoderBlockParams<S>& p = model.blocks[static_cast<std::size_t>(kb)];
    BlockCache<S>& c = cache.blocks[static_cast<std::size_t>(kb)];
    c.input = tokens;

    const MatX<S> ln1 = nn::layer_norm_forward(tokens, p.ln1, c.ln1_xhat, c.ln1_istd);
    c.q.noalias() = ln1 * p.wq;
    c.q.array().rowwise() += p.bq.transpose().array();
    c.k.noalias() = ln1 * p.wk;
    c.k.array().rowwise() += p.bk.transpose().array();
    c.v.noalias() = ln1 * p.wv;
    c.v.array().rowwise() += p.bv.transpose().array();

    c.concat.resize(batch * t, d);
    c.probs.assign(static_cast<std::size_t>(batch * heads), MatX<S>());
#pragma omp parallel for schedule(static)
    for (Index bl = 0; bl < batch * heads; ++bl) {
      const Index b = bl / heads;
      const Index l = bl % heads;
      MatX<S> probs = c.q.block(b * t, l * dl, t, dl) *
                      c.k.block(b * t, l * dl, t, dl).transpose() * scale;
      nn::softmax_rows_inplace(probs);
      c.concat.block(b * t, l * dl, t, dl).noalias() =
          probs * c.v.block(b * t, l * dl, t, dl);
      c.probs[static_cast<std::size_t>(bl)] = std::move(probs);
    }

    c.attn_resid.noalias() = c.concat * p.w_msa;
    c.attn_resid.array().rowwise() += p.b_msa.transpose().array();
    c.attn_resid += tokens;

    const MatX<S> ln2 =
        nn::layer_norm_forward(c.attn_resid, p.ln2, c.ln2_xhat, c.ln2_istd);
    c.mlp_pre.noalias() = ln2 * p.w1;
    c.mlp_pre.array().rowwise() += p.b1.transpose().array();
    c.mlp_act = c.mlp_pre.unaryExpr([](S x) { return nn::gelu_scalar(x); });
    tokens.noalias() = c.mlp_act * p.w2;
    tokens.array().rowwise() += p.b2.transpose().array();
    tokens += c.attn_resid;
  }
  cache.tokens = tokens;

  // Classification head on the class-token rows.
  cache.cls_rows.resize(batch, d);
  for (Index b = 0; b < batch; ++b) cache.cls_rows.row(b) = tokens.row(b * t);
  const MatX<S> lnf = nn::layer_norm_forward(cache.cls_rows, model.ln_final,
                                             cache.lnf_xhat, cache.lnf_istd);
  MatX<S> logits = lnf * model.w_head;
  logits.array().rowwise() += model.b_head.transpose().array();
  return logits;
}

/// Reverse-mode pass. Returns gradients in a VitModel of identical shapes.
/// Throws NumericError naming the first tensor with a non-finite gradient.
template <typename S>
VitModel<S> backward_batch(const VitModel<S>& model, const ForwardCache<S>& cache,
                           const MatX<S>& dlogits) {
  const VitConfig& cfg = model.config;
  const Index batch = cache.batch;
  const Index t = cfg.seq_len();
  const Index d = cfg.embed_dim;
  const Index heads = cfg.heads;
  const Index dl = cfg.head_dim();
  const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(dl)));

  VitModel<S> grad = VitModel<S>::zeros(cfg);

  // Head.
  const MatX<S> lnf = nn::ln_affine(cache.lnf_xhat, model.ln_final);
  grad.w_head.noalias() = lnf.transpose() * dlogits;
  grad.b_head = dlogits.colwise().sum().transpose();
  const MatX<S> d_lnf = dlogits * model.w_head.transpose();
  const MatX<S> d_cls = nn::layer_norm_backward(d_lnf, cache.lnf_xhat,
                                                cache.lnf_istd, model.ln_final,
                                                grad.ln_final);

  MatX<S> dtokens = MatX<S>::Zero(batch * t, d);
  for (Index b = 0; b < batch; ++b) dtokens.row(b * t) = d_cls.row(b);

  // Encoder blocks, reversed.
  for (Index kb = cfg.depth - 1; kb >= 0; --kb) {
    const EncoderBlockParams<S>& p = model.blocks[static_cast<std::size_t>(kb)];
    const BlockCache<S>& c = cache.blocks[static_cast<std::size_t>(kb)];
    EncoderBlockParams<S>& g = grad.blocks[static_cast<std::size_t>(kb)];

    // MLP sub-layer.
    const MatX<S> ln2 = (c.ln2_xhat.array().rowwise() *
                         p.ln2.gamma.transpose().array())
                            .rowwise() +
                        p.ln2.beta.transpose().array();
    g.w2.noalias() = c.mlp_act.transpose() * dtokens;
    g.b2 = dtokens.colwise().sum().transpose();
    MatX<S> d_hidden = dtokens * p.w2.transpose();
    d_hidden.array() *=
        c.mlp_pre.unaryExpr([](S x) { return nn::gelu_grad_scalar(x); }).array();
    g.w1.noalias() = ln2.transpose() * d_hidden;
    g.b1 = d_hidden.colwise().sum().transpose();
    const MatX<S> d_ln2 = d_hidden * p.w1.transpose();
    MatX<S> d_attn_resid =
        nn::layer_norm_backward(d_ln2, c.ln2_xhat, c.ln2_istd, p.ln2, g.ln2);
    d_attn_resid += dtokens;  // residual path

    // Attention sub-layer.
    g.w_msa.noalias() = c.concat.transpose() * d_attn_resid;
    g.b_msa = d_attn_resid.colwise().sum().transpose();
    const MatX<S> d_concat = d_attn_resid * p.w_msa.transpose();

    MatX<S> dq(batch * t, d), dk(batch * t, d), dv(batch * t, d);
#pragma omp parallel for schedule(static)
    for (Index bl = 0; bl < batch * heads; ++bl) {
      const Index b = bl / heads;
      const Index l = bl % heads;
      const MatX<S>& probs = c.probs[static_cast<std::size_t>(bl)];
      const auto d_out = d_concat.block(b * t, l * dl, t, dl);

      MatX<S> d_probs = d_out * c.v.block(b * t, l * dl, t, dl).transpose();
      dv.block(b * t, l * dl, t, dl).noalias() = probs.transpose() * d_out;

      // Softmax backward per row, with the 1/sqrt(dl) scale folded in.
      const VecX<S> rowdot = (d_probs.array() * probs.array()).rowwise().sum();
      MatX<S> d_logits_att = probs.array() * (d_probs.colwise() - rowdot).array();
      d_logits_att *= scale;

      dq.block(b * t, l * dl, t, dl).noalias() =
          d_logits_att * c.k.block(b * t, l * dl, t, dl);
      dk.block(b * t, l * dl, t, dl).noalias() =
          d_logits_att.transpose() * c.q.block(b * t, l * dl, t, dl);
    }

    const MatX<S> ln1 = (c.ln1_xhat.array().rowwise() *
                         p.ln1.gamma.transpose().array())
                            .rowwise() +
                        p.ln1.beta.transpose().array();
    g.wq.noalias() = ln1.transpose() * dq;
    g.bq = dq.colwise().sum().transpose();
    g.wk.noalias() = ln1.transpose() * dk;
    g.bk = dk.colwise().sum().transpose();
    g.wv.noalias() = ln1.transpose() * dv;
    g.bv = dv.colwise().sum().transpose();

    MatX<S> d_ln1 = dq * p.wq.transpose();
    d_ln1.noalias() += dk * p.wk.transpose();
    d_ln1.noalias() += dv * p.wv.transpose();
    dtokens = nn::layer_norm_backward(d_ln1, c.ln1_xhat, c.ln1_istd, p.ln1, g.ln1);
    dtokens += d_attn_resid;  // residual into Z_{k-1}
  }

  // Token assembly backward: class token, positional embeddings, patches.
  const Index n = cfg.num_patches();
  MatX<S> d_patches(batch * n, d);
  for (Index b = 0; b < batch; ++b) {
    grad.cls_token += dtokens.row(b * t);
    grad.pos_embed += dtokens.middleRows(b * t, t);
    d_patches.middleRows(b * n, n) = dtokens.middleRows(b * t + 1, n);
  }

  // Convolution chain backward.
  grad.conv3.weight.noalias() = cache.cols3.transpose() * d_patches;
  grad.conv3.bias = d_patches.colwise().sum().transpose();
  MatX<S> d_act2;
  nn::col2im_3x3(MatX<S>(d_patches * model.conv3.weight.transpose()), batch,
                 cfg.height / 2, cfg.width / 2, cfg.embed_dim / 2, 2, d_act2);
  d_act2.array() *= (cache.act2.array() > S{0}).template cast<S>();

  grad.conv2.weight.noalias() = cache.cols2.transpose() * d_act2;
  grad.conv2.bias = d_act2.colwise().sum().transpose();
  MatX<S> d_act1;
  nn::col2im_3x3(MatX<S>(d_act2 * model.conv2.weight.transpose()), batch,
                 cfg.height, cfg.width, cfg.embed_dim / 4, 2, d_act1);
  d_act1.array() *= (cache.act1.array() > S{0}).template cast<S>();

  grad.conv1.weight.noalias() = cache.cols1.transpose() * d_act1;
  grad.conv1.bias = d_act1.colwise().sum().transpose();

  grad.visit_tensors([](const std::string& name, const auto& tensor) {
    if (!tensor.allFinite())
      throw NumericError("non-finite gradient in " + name);
  });
  return grad;
}

}  // namespace txvision
