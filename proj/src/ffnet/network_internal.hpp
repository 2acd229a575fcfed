#pragma once

#include <vector>

#include "vta/ffnet.hpp"

namespace vta::nn::detail {

struct Activations {
  std::vector<double> z1, h1, z2, h2, logits, exact, probs;
  std::vector<double> d_out, d_h, d_h1;
};

void forward_into(const ModelParams& p, std::span<const std::uint8_t> x, Activations& a);

/// Adds scale * dLoss/dParams for one example into g.
void accumulate_gradient(const ModelParams& p, std::span<const std::uint8_t> x, std::size_t label, double scale,
                         Gradients& g, Activations& a);

}  // namespace vta::nn::detail
