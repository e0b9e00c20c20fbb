// Copyright 2026 The glyphsim Authors.
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

#ifndef GLYPHSIM_ENCODER_LAYERS_HPP_
#define GLYPHSIM_ENCODER_LAYERS_HPP_

#include <cmath>
#include <vector>

#include "glyphsim/encoder/tensor.hpp"

// Per-sample layer kernels. Activations are [channels, height * width]
// row-major matrices.
namespace glyphsim::encoder::layers {

/// 3x3 convolution, padding 1, no bias.
struct ConvGeometry {
  int in_channels = 0;
  int out_channels = 0;
  int height = 0;
  int width = 0;
  int stride = 1;

  int out_height() const { return (height + 2 - 3) / stride + 1; }
  int out_width() const { return (width + 2 - 3) / stride + 1; }
  int patch() const { return in_channels * 9; }
};

template <typename T>
void im2col(const Mat<T>& in, const ConvGeometry& g, Mat<T>& col) {
  const int ho = g.out_height(), wo = g.out_width();
  col.resize(g.patch(), static_cast<Eigen::Index>(ho) * wo);
  for (int c = 0; c < g.in_channels; ++c) {
    const T* src = in.row(c).data();
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        T* dst = col.row(c * 9 + ky * 3 + kx).data();
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * g.stride + ky - 1;
          T* drow = dst + static_cast<std::ptrdiff_t>(oy) * wo;
          if (iy < 0 || iy >= g.height) {
            std::fill(drow, drow + wo, T(0));
            continue;
          }
          const T* srow = src + static_cast<std::ptrdiff_t>(iy) * g.width;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * g.stride + kx - 1;
            drow[ox] = (ix >= 0 && ix < g.width) ? srow[ix] : T(0);
          }
        }
      }
    }
  }
}

/// Scatter-adds columns back into an input-shaped gradient.
template <typename T>
void col2im_add(const Mat<T>& col, const ConvGeometry& g, Mat<T>& din) {
  const int ho = g.out_height(), wo = g.out_width();
  if (din.rows() != g.in_channels || din.cols() != g.height * g.width)
    din = Mat<T>::Zero(g.in_channels, g.height * g.width);
  for (int c = 0; c < g.in_channels; ++c) {
    T* dst = din.row(c).data();
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const T* src = col.row(c * 9 + ky * 3 + kx).data();
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * g.stride + ky - 1;
          if (iy < 0 || iy >= g.height) continue;
          T* drow = dst + static_cast<std::ptrdiff_t>(iy) * g.width;
          const T* srow = src + static_cast<std::ptrdiff_t>(oy) * wo;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * g.stride + kx - 1;
            if (ix >= 0 && ix < g.width) drow[ix] += srow[ox];
          }
        }
      }
    }
  }
}

template <typename T>
using ConstMatMap = Eigen::Map<const Mat<T>>;
template <typename T>
using MatMap = Eigen::Map<Mat<T>>;

/// out = W * im2col(in); W is [out_channels, in_channels * 9].
template <typename T>
Mat<T> conv_forward(const Mat<T>& in, const Vec<T>& weight,
                    const ConvGeometry& g, Mat<T>& col_scratch) {
  im2col(in, g, col_scratch);
  ConstMatMap<T> w(weight.data(), g.out_channels, g.patch());
  Mat<T> out(g.out_channels, col_scratch.cols());
  out.noalias() = w * col_scratch;
  return out;
}

/// Accumulates dW and, if `din` is non-null, writes the input gradient.
template <typename T>
void conv_backward(const Mat<T>& in, const Mat<T>& dout, const Vec<T>& weight,
                   const ConvGeometry& g, Vec<T>& dweight, Mat<T>* din,
                   Mat<T>& col_scratch) {
  im2col(in, g, col_scratch);
  MatMap<T> dw(dweight.data(), g.out_channels, g.patch());
  dw.noalias() += dout * col_scratch.transpose();
  if (din != nullptr) {
    ConstMatMap<T> w(weight.data(), g.out_channels, g.patch());
    Mat<T> dcol(g.patch(), dout.cols());
    dcol.noalias() = w.transpose() * dout;
    *din = Mat<T>::Zero(g.in_channels, static_cast<Eigen::Index>(g.height) * g.width);
    col2im_add(dcol, g, *din);
  }
}

inline constexpr double kGroupNormEps = 1e-5;

/// Normalizes x in place to x_hat per (group of channels x all positions)
/// and returns the per-group inverse standard deviations.
template <typename T>
Vec<T> group_norm_normalize(Mat<T>& x, int groups) {
  const Eigen::Index c = x.rows();
  const Eigen::Index per = c / groups;
  Vec<T> inv_std(groups);
  for (int gi = 0; gi < groups; ++gi) {
    auto block = x.middleRows(gi * per, per);
    const T mean = block.mean();
    block.array() -= mean;
    const T var = block.squaredNorm() / static_cast<T>(block.size());
    inv_std[gi] = T(1) / std::sqrt(var + static_cast<T>(kGroupNormEps));
    block *= inv_std[gi];
  }
  return inv_std;
}

/// Given dL/dx_hat, returns dL/dx (in place on `dxhat`).
template <typename T>
void group_norm_backward(Mat<T>& dxhat, const Mat<T>& xhat,
                         const Vec<T>& inv_std, int groups) {
  const Eigen::Index per = xhat.rows() / groups;
  for (int gi = 0; gi < groups; ++gi) {
    auto d = dxhat.middleRows(gi * per, per);
    auto xh = xhat.middleRows(gi * per, per);
    const T n = static_cast<T>(d.size());
    const T sum_d = d.sum();
    const T sum_dx = (d.array() * xh.array()).sum();
    d = (inv_std[gi] / n) *
        (n * d.array() - sum_d - xh.array() * sum_dx).matrix();
  }
}

}  // namespace glyphsim::encoder::layers

#endif  // GLYPHSIM_ENCODER_LAYERS_HPP_
