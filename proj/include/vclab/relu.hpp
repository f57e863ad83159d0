#pragma once

#include <span>
#include <vector>

#include "vclab/exact.hpp"
#include "vclab/rng.hpp"

namespace vclab {

/// Fully connected ReLU architecture: input_dim inputs, hidden widths
/// w_1..w_L, one affine output thresholded to {-1,+1}.
struct ReluArch {
  int input_dim = 0;
  std::vector<int> hidden;

  int depth() const { return static_cast<int>(hidden.size()); }

  /// Total parameter count: sum_l (w_l w_{l-1} + w_l) plus the output layer.
  int param_count() const {
    int prev = input_dim;
    int total = 0;
    for (int w : hidden) {
      total += w * prev + w;
      prev = w;
    }
    total += prev + 1;
    return total;
  }

  void check() const {
    require(input_dim >= 1, "ReluArch: input_dim must be positive");
    require(!hidden.empty(), "ReluArch: at least one hidden layer");
    for (int w : hidden) require(w >= 1, "ReluArch: widths must be positive");
  }
};

/// Weights/biases matching a ReluArch. Weight matrices are row-major
/// (unit index, then input index).
struct ReluParams {
  ReluArch arch;
  std::vector<std::vector<double>> weights;  // per hidden layer, w_l x w_{l-1}
  std::vector<std::vector<double>> biases;   // per hidden layer, w_l
  std::vector<double> out_weight;            // w_L
  double out_bias = 0.0;

  void check() const {
    arch.check();
    require(weights.size() == arch.hidden.size() && biases.size() == arch.hidden.size(),
            "ReluParams: layer count mismatch");
    int prev = arch.input_dim;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      const int w = arch.hidden[l];
      require(static_cast<int>(weights[l].size()) == w * prev, "ReluParams: weight shape mismatch");
      require(static_cast<int>(biases[l].size()) == w, "ReluParams: bias shape mismatch");
      prev = w;
    }
    require(static_cast<int>(out_weight.size()) == arch.hidden.back(),
            "ReluParams: output weight shape mismatch");
  }
};

/// Forward pass: hidden layers apply max(0, Wx + b), the output is affine and
/// thresholded. sign(0) = -1 by convention.
inline int relu_forward(const ReluParams& params, std::span<const double> x) {
  require(static_cast<int>(x.size()) == params.arch.input_dim, "relu_forward: input shape mismatch");
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    const int w = params.arch.hidden[l];
    const int prev = static_cast<int>(cur.size());
    next.assign(static_cast<std::size_t>(w), 0.0);
    for (int u = 0; u < w; ++u) {
      double acc = params.biases[l][static_cast<std::size_t>(u)];
      const double* row = &params.weights[l][static_cast<std::size_t>(u) * prev];
      for (int j = 0; j < prev; ++j) acc += row[j] * cur[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(u)] = acc > 0.0 ? acc : 0.0;
    }
    cur.swap(next);
  }
  double out = params.out_bias;
  for (std::size_t j = 0; j < cur.size(); ++j) out += params.out_weight[j] * cur[j];
  return out > 0.0 ? 1 : -1;
}

/// Entries i.i.d. uniform on [-range, range].
inline ReluParams sample_relu_params(const ReluArch& arch, Rng& rng, double range = 1.0) {
  arch.check();
  ReluParams p;
  p.arch = arch;
  int prev = arch.input_dim;
  for (int w : arch.hidden) {
    std::vector<double> wm(static_cast<std::size_t>(w) * static_cast<std::size_t>(prev));
    std::vector<double> bv(static_cast<std::size_t>(w));
    for (auto& v : wm) v = range * rng.next_symmetric();
    for (auto& v : bv) v = range * rng.next_symmetric();
    p.weights.push_back(std::move(wm));
    p.biases.push_back(std::move(bv));
    prev = w;
  }
  p.out_weight.resize(static_cast<std::size_t>(prev));
  for (auto& v : p.out_weight) v = range * rng.next_symmetric();
  p.out_bias = range * rng.next_symmetric();
  return p;
}

}  // namespace vclab
