#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eqcnn/embedding.hpp"
#include "eqcnn/gradient.hpp"
#include "eqcnn/head.hpp"
#include "eqcnn/loss.hpp"
#include "eqcnn/symmetry.hpp"
#include "support/random.hpp"

namespace eqcnn {
namespace {

constexpr double kStep = 1e-4;

double forward_loss(const CircuitSpec& c, std::span<const double> params, const QuantumState& input,
                    const MeasurementHead& head, std::span<const double> label) {
  auto s = input;
  run_circuit(c, params, s);
  return cross_entropy(measure_head(s, head), label);
}

std::vector<double> central_differences(const CircuitSpec& c, std::vector<double> params,
                                        const QuantumState& input, const MeasurementHead& head,
                                        std::span<const double> label) {
  std::vector<double> fd(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double saved = params[k];
    params[k] = saved + kStep;
    const double up = forward_loss(c, params, input, head, label);
    params[k] = saved - kStep;
    const double down = forward_loss(c, params, input, head, label);
    params[k] = saved;
    fd[k] = (up - down) / (2 * kStep);
  }
  return fd;
}

bool close(double analytic, double fd) {
  return std::abs(analytic - fd) <= std::max(1e-5 * std::abs(fd), 1e-8);
}

MeasurementHead head_for(std::size_t nq, double phi, std::size_t measured) {
  MeasurementHead h;
  h.mode = HeadMode::M2;
  h.phi = phi;
  h.n = nq / 2;
  h.measured = {measured};
  h.num_classes = 2;
  return h;
}

TEST(LossGradient, MatchesFiniteDifferencesOnRandomCircuits) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nq = 2 * (1 + rng.below(4));  // 2..8 qubits
    const auto c = testing_support::random_circuit(rng, nq, 4 + rng.below(17));
    const auto params = testing_support::random_params(rng, c.num_params);
    const auto head = head_for(nq, rng.uniform(-1, 1), rng.below(nq / 2));
    const auto input = random_state(nq, 500 + static_cast<std::uint64_t>(trial));
    const auto label = one_hot(rng.below(2), 2);
    const auto result = loss_gradient(c, params, input, head, label);
    EXPECT_NEAR(result.loss, forward_loss(c, params, input, head, label), 1e-12);
    const auto fd = central_differences(c, params, input, head, label);
    for (std::size_t k = 0; k < fd.size(); ++k) {
      ASSERT_TRUE(close(result.tape.params[k], fd[k]))
          << "trial " << trial << " param " << k << ": " << result.tape.params[k] << " vs " << fd[k];
    }
  }
}

TEST(LossGradient, ZeroAnglesMatchFiniteDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = testing_support::random_circuit(rng, 4, 12, false);
    const std::vector<double> params(c.num_params, 0.0);
    const auto head = head_for(4, 0.0, 1);
    const auto input = random_state(4, static_cast<std::uint64_t>(trial));
    const std::vector<double> label = {0.0, 1.0};
    const auto result = loss_gradient(c, params, input, head, label);
    const auto fd = central_differences(c, params, input, head, label);
    for (std::size_t k = 0; k < fd.size(); ++k) EXPECT_TRUE(close(result.tape.params[k], fd[k]));
  }
}

TEST(LossGradient, PhiDerivativeMatchesFiniteDifference) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testing_support::random_circuit(rng, 4, 10);
    const auto params = testing_support::random_params(rng, c.num_params);
    auto head = head_for(4, rng.uniform(-1.5, 1.5), rng.below(2));
    const auto input = random_state(4, 70 + static_cast<std::uint64_t>(trial));
    const std::vector<double> label = {1.0, 0.0};
    const auto result = loss_gradient(c, params, input, head, label);
    const double phi = head.phi;
    head.phi = phi + kStep;
    const double up = forward_loss(c, params, input, head, label);
    head.phi = phi - kStep;
    const double down = forward_loss(c, params, input, head, label);
    EXPECT_TRUE(close(result.tape.phi, (up - down) / (2 * kStep)));
  }
}

TEST(LossGradient, RejectsLabelOfWrongLength) {
  CircuitSpec c;
  c.num_qubits = 2;
  const auto head = head_for(2, 0.0, 0);
  const std::vector<double> label = {1.0, 0.0, 0.0, 0.0};
  EXPECT_THROW(loss_gradient(c, {}, QuantumState(2), head, label), std::invalid_argument);
}

TEST(ExpectationGradient, SingleRotationMatchesParameterShift) {
  Rng rng(13);
  const std::vector<double> z_weights = {1.0, 1.0, -1.0, -1.0};  // <Z0> on 2 qubits
  for (int trial = 0; trial < 30; ++trial) {
    CircuitSpec c;
    c.num_qubits = 2;
    c.num_params = 1;
    c.gates.push_back({PauliRotation{testing_support::random_word(rng, 2, 2), 0.0}, 0});
    const auto input = random_state(2, static_cast<std::uint64_t>(trial));
    const double theta = rng.uniform(-3, 3);
    auto f = [&](double t) {
      const std::vector<double> p = {t};
      return expectation_gradient(c, p, input, z_weights).value;
    };
    const std::vector<double> p = {theta};
    const auto g = expectation_gradient(c, p, input, z_weights);
    EXPECT_NEAR(g.grads[0], f(theta + std::numbers::pi / 4) - f(theta - std::numbers::pi / 4), 1e-12);
  }
}

TEST(ExpectationGradient, SharedParameterIsSumOfSlotDerivatives) {
  const auto a = SignedPauliString::parse("X0Y1");
  const auto b = SignedPauliString::parse("Z0X1");
  CircuitSpec shared;
  shared.num_qubits = 2;
  shared.num_params = 1;
  shared.gates = {{PauliRotation{a, 0}, 0}, {Hadamard{1}, std::nullopt}, {PauliRotation{b, 0}, 0}};
  CircuitSpec split = shared;
  split.num_params = 2;
  split.gates[2].param = 1;

  const std::vector<double> w = {0.3, -1.0, 2.0, 0.5};
  const auto input = random_state(2, 4);
  const double theta = 0.7;
  const std::vector<double> p1 = {theta};
  const std::vector<double> p2 = {theta, theta};
  const auto g_shared = expectation_gradient(shared, p1, input, w);
  const auto g_split = expectation_gradient(split, p2, input, w);
  EXPECT_NEAR(g_shared.grads[0], g_split.grads[0] + g_split.grads[1], 1e-13);

  auto f = [&](double x, double y) {
    const std::vector<double> p = {x, y};
    return expectation_gradient(split, p, input, w).value;
  };
  const double fd0 = (f(theta + kStep, theta) - f(theta - kStep, theta)) / (2 * kStep);
  const double fd1 = (f(theta, theta + kStep) - f(theta, theta - kStep)) / (2 * kStep);
  EXPECT_TRUE(close(g_shared.grads[0], fd0 + fd1));
}

}  // namespace
}  // namespace eqcnn
