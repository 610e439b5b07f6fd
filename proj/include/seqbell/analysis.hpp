#pragma once

#include "seqbell/scenario.hpp"

namespace seqbell {

/// T_ij = Tr(ρ σ_i ⊗ σ_j) for i, j ∈ {X, Y, Z}.
Eigen::Matrix3d correlation_matrix(const TwoQubitState& state);

/// Largest CHSH value the state admits, 2√(t_1² + t_2²) with t_1 ≥ t_2 the
/// two largest singular values of the correlation matrix.
double horodecki_max_chsh(const TwoQubitState& state);

/// Smallest visibility v such that running `strategy` on the isotropic state
/// v|φ⁺⟩⟨φ⁺| + (1 - v)𝟙/4 keeps every S_k above `target`.
///
/// Correlators of traceless observables scale linearly with v, so the
/// threshold is target / min_k S_k(1). The bisection route below is kept as
/// an independent check and is compared against the linear answer.
/// Throws NotFound when min_k S_k(1) ≤ target.
double visibility_threshold(const SequentialStrategy& strategy, double target);

/// Bisection on min_k S_k(v) - target over v ∈ [0, 1] to 1e-6 (or `tol`).
double visibility_threshold_bisection(const SequentialStrategy& strategy, double target,
                                      double tol = 1e-6);

}  // namespace seqbell
