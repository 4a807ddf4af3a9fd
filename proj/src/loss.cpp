#include "eqcnn/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace eqcnn {
namespace {

void check_lengths(std::span<const double> dist, std::span<const double> label) {
  if (dist.size() != label.size()) {
    throw std::invalid_argument("distribution has " + std::to_string(dist.size()) +
                                " classes but label has " + std::to_string(label.size()));
  }
}

}  // namespace

double cross_entropy(std::span<const double> dist, std::span<const double> label) {
  check_lengths(dist, label);
  double loss = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (label[i] != 0.0) loss -= label[i] * std::log(std::max(dist[i], kProbabilityFloor));
  }
  return loss;
}

std::vector<double> cross_entropy_grad(std::span<const double> dist,
                                       std::span<const double> label) {
  check_lengths(dist, label);
  std::vector<double> grad(dist.size(), 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (label[i] != 0.0 && dist[i] > kProbabilityFloor) grad[i] = -label[i] / dist[i];
  }
  return grad;
}

}  // namespace eqcnn
