#pragma once

#include <span>
#include <vector>

namespace eqcnn {

/// Probabilities are clamped to at least this before taking the log.
inline constexpr double kProbabilityFloor = 1e-12;

/// -sum_i label_i * log(max(p_i, floor)).
double cross_entropy(std::span<const double> dist, std::span<const double> label);

/// d(cross_entropy)/d(p_i); zero where the clamp is active.
std::vector<double> cross_entropy_grad(std::span<const double> dist,
                                       std::span<const double> label);

}  // namespace eqcnn
