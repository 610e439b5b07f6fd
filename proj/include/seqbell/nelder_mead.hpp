#pragma once

#include <Eigen/Core>

#include <functional>

namespace seqbell {

struct NelderMeadOptions {
  Eigen::VectorXd initial_step;  // per-coordinate simplex edge; must match x0
  double diameter_tol = 1e-10;
  long max_evaluations = 50000;  // hard cap, initial simplex included
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value;
  long evaluations;
  bool converged;  // simplex diameter fell below the tolerance
};

/// Maximises f with the classic coefficients (reflection 1, expansion 2,
/// contraction ½, shrink ½). Deterministic for a given f and start.
NelderMeadResult nelder_mead_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0, const NelderMeadOptions& options);

}  // namespace seqbell
