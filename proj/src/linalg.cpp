#include "seqbell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace seqbell {
namespace {

using Complex = std::complex<double>;

constexpr double kJacobiStop = 1e-14;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Eigen::MatrixXcd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

HermitianEigen closed_form_2x2(const Eigen::MatrixXcd& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = m(0, 1);
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(b));

  HermitianEigen out;
  out.values.resize(2);
  out.values << mean - radius, mean + radius;
  out.vectors.resize(2, 2);

  if (std::abs(b) <= 1e-300) {
    // Already diagonal: eigenvectors are the basis vectors.
    if (a <= d) {
      out.vectors << 1, 0, 0, 1;
    } else {
      out.vectors << 0, 1, 1, 0;
    }
    return out;
  }
  for (int k = 0; k < 2; ++k) {
    const double lambda = out.values(k);
    // (A - λ) v = 0; pick the better conditioned of the two row equations.
    Eigen::Vector2cd v;
    if (std::abs(lambda - a) > std::abs(lambda - d)) {
      v << b, Complex(lambda - a);
    } else {
      v << Complex(lambda - d), std::conj(b);
    }
    out.vectors.col(k) = v.normalized();
  }
  return out;
}

HermitianEigen cyclic_jacobi(Eigen::MatrixXcd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale = std::max(1.0, a.norm());

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiStop * scale) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const Complex phase = a(p, q) / mag;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to (p, q).
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(n, n);
        g(p, p) = c;
        g(p, q) = s;
        g(q, p) = -s * std::conj(phase);
        g(q, q) = c * std::conj(phase);
        a = g.adjoint() * a * g;
        v = v * g;
      }
    }
  }

  HermitianEigen out;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace

HermitianEigen hermitian_eigen(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() > 4) {
    throw std::invalid_argument("hermitian_eigen: dimension must be 2, 3 or 4");
  }
  if (!m.allFinite()) {
    throw std::invalid_argument("hermitian_eigen: non-finite entries");
  }
  if (hermitian_defect(m) > kHermitianTol) {
    throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");
  }
  // Symmetrise so that the solvers see an exactly Hermitian input.
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  if (h.rows() == 2) return closed_form_2x2(h);
  return cyclic_jacobi(h);
}

Eigen::VectorXd hermitian_eigs(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  return hermitian_eigen(m).values;
}

Eigen::Vector3d singular_values_3x3(const Eigen::Matrix3d& t) {
  if (!t.allFinite()) {
    throw std::invalid_argument("singular_values_3x3: non-finite entries");
  }
  const Eigen::Matrix3d gram = t.transpose() * t;
  const Eigen::VectorXd eig = hermitian_eigs(gram.cast<Complex>());
  Eigen::Vector3d out;
  for (int k = 0; k < 3; ++k) {
    out(k) = std::sqrt(std::max(0.0, eig(2 - k)));
  }
  return out;
}

}  // namespace seqbell
