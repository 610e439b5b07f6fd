#include "seqbell/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace seqbell {

NelderMeadResult nelder_mead_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0, const NelderMeadOptions& options) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead_maximize: empty parameter vector");
  if (options.max_evaluations < n + 1) {
    throw std::invalid_argument("nelder_mead_maximize: budget smaller than the initial simplex");
  }
  if (options.initial_step.size() != n) {
    throw std::invalid_argument("nelder_mead_maximize: step size does not match the start point");
  }

  constexpr double alpha = 1.0;
  constexpr double gamma = 2.0;
  constexpr double rho = 0.5;
  constexpr double sigma = 0.5;

  long evals = 0;
  // Work with g = -f and minimise.
  auto g = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
  };

  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> values(simplex.size());
  values[0] = g(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& v = simplex[static_cast<std::size_t>(i + 1)];
    v(i) += options.initial_step(i);
    values[static_cast<std::size_t>(i + 1)] = g(v);
  }

  std::vector<std::size_t> order(simplex.size());
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    double diameter = 0.0;
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      diameter = std::max(diameter, (simplex[i] - simplex[best]).norm());
    }
    if (diameter < options.diameter_tol) {
      converged = true;
      break;
    }
    if (evals >= options.max_evaluations) break;
    auto spent = [&] { return evals >= options.max_evaluations; };

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + alpha * (centroid - simplex[worst]);
    const double fr = g(reflected);
    if (fr < values[best] && spent()) {
      simplex[worst] = reflected;
      values[worst] = fr;
      break;
    }
    if (fr < values[best]) {
      const Eigen::VectorXd expanded = centroid + gamma * (centroid - simplex[worst]);
      const double fe = g(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    if (spent()) break;
    // Contraction: outside if the reflection improved on the worst vertex.
    const bool outside = fr < values[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + rho * (reflected - centroid))
                : Eigen::VectorXd(centroid + rho * (simplex[worst] - centroid));
    const double fc = g(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size() && !spent(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + sigma * (simplex[i] - simplex[best]);
      values[i] = g(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  return {simplex[best], -values[best], evals, converged};
}

}  // namespace seqbell
