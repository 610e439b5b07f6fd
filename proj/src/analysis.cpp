#include "seqbell/analysis.hpp"

#include "seqbell/errors.hpp"
#include "seqbell/roots.hpp"

#include <array>
#include <cmath>

namespace seqbell {
namespace {

double min_chsh_at(const SequentialStrategy& strategy, double v) {
  return evaluate_strategy(strategy.with_state(Isotropic{v})).min();
}

}  // namespace

Eigen::Matrix3d correlation_matrix(const TwoQubitState& state) {
  const std::array<Qubit, 3> sigma{pauli::x(), pauli::y(), pauli::z()};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t(i, j) = state.expectation(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
    }
  }
  return t;
}

double horodecki_max_chsh(const TwoQubitState& state) {
  const Eigen::Vector3d sv = singular_values_3x3(correlation_matrix(state));
  return 2.0 * std::hypot(sv(0), sv(1));
}

double visibility_threshold(const SequentialStrategy& strategy, double target) {
  for (const auto& wb : strategy.branches()) {
    if (!std::holds_alternative<MaximallyEntangled>(wb.branch.initial_state)) {
      throw std::invalid_argument("visibility_threshold: strategy must act on the maximally entangled state");
    }
  }
  const double at_one = min_chsh_at(strategy, 1.0);
  if (!(at_one > target)) {
    throw NotFound("visibility_threshold: target not exceeded even at v = 1");
  }
  const double linear = target / at_one;
  const double checked = visibility_threshold_bisection(strategy, target);
  if (std::abs(checked - linear) > 1e-5) {
    throw std::logic_error("visibility_threshold: CHSH values are not linear in the visibility");
  }
  return linear;
}

double visibility_threshold_bisection(const SequentialStrategy& strategy, double target, double tol) {
  const auto excess = [&](double v) { return min_chsh_at(strategy, v) - target; };
  if (!(excess(1.0) > 0.0)) throw NotFound("visibility_threshold: target not exceeded even at v = 1");
  if (excess(0.0) > 0.0) return 0.0;
  const auto root = detail::bisect_root(excess, 0.0, 1.0, tol);
  if (!root) throw NotFound("visibility_threshold: no crossing on [0, 1]");
  return *root;
}

}  // namespace seqbell
