#pragma once

#include "seqbell/scenario.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace seqbell::catalog {

/// Angle constants kept as num/den × base so the printed values in the
/// reference strategies are reproduced rather than transcribed as decimals.
enum class Base { one, pi, pi_over_e };

struct SymbolicAngle {
  long num;
  long den;
  Base base;

  double value() const;
};

namespace constants {
inline constexpr SymbolicAngle indep_b0_angle{2, 17, Base::one};          // 2/17
inline constexpr SymbolicAngle indep_u_y1{-2, 27, Base::pi};               // -2π/27
inline constexpr SymbolicAngle indep_u_trivial{-5, 81, Base::pi};          // -5π/81
inline constexpr SymbolicAngle indep_c0_angle{-2, 3, Base::pi_over_e};     // -2π/(3e)
inline constexpr SymbolicAngle indep_c1_angle{1, 3, Base::one};            // 1/3
inline constexpr SymbolicAngle indep_a0_angle{1, 6, Base::pi};             // √3/2 σ_X + ½ σ_Z
inline constexpr SymbolicAngle indep_a1_angle{-2, 1, Base::one};           // cos 2 σ_X - sin 2 σ_Z
inline constexpr SymbolicAngle triple_phi{31, 132, Base::pi};
inline constexpr SymbolicAngle triple_phi_hat{88, 245, Base::pi};
inline constexpr SymbolicAngle triple_phi_tilde{16, 33, Base::pi};
}  // namespace constants

// --- maximally entangled, two sequential pairs ------------------------------

/// Both settings of B are basis measurements: S = (2√2 cos φ, √2 (cos φ + sin φ)).
DeterministicBranch maxent_case_i(double phi);
/// Both settings trivial: S = (0, 2√2).
DeterministicBranch maxent_case_ii();
/// B_0 = 𝟙, B_1 = σ_Z: S = (2 sin θ, cos θ + 2 sin θ).
DeterministicBranch maxent_case_iii(double theta);

// --- partially entangled |ψ_φ⟩ = cos φ|00⟩ + sin φ|11⟩ ----------------------

/// S = (2 (cos μ sin 2φ + sin μ), 2 sin μ) with B angle μ.
DeterministicBranch partial_case_i(double ent_angle, double mu);
/// S = (2 cos 2φ, 2 √(1 + sin² 2φ)).
DeterministicBranch partial_case_ii(double ent_angle);
/// S = (2 sin(θ + 2φ), sin θ + 2 cos θ sin 2φ).
DeterministicBranch partial_case_iii(double ent_angle, double theta);

// --- mixtures ------------------------------------------------------------------

/// Two values of B's local randomness; A and C are identical in both branches.
SequentialStrategy independent_strategy(double q);
/// Tsirelson branch with weight q mixed with the (4/√5, √5) branch; no unitaries.
SequentialStrategy no_unitary_strategy(double q);
/// Three-branch, three-pair strategy on |φ⁺⟩.
SequentialStrategy triple_strategy(double phi, double phi_hat, double phi_tilde,
                                   const std::array<double, 3>& weights);

/// Bases σ_X, σ_Z for B and C without unitaries: S = (2√2, √2).
DeterministicBranch tsirelson_branch();

/// Single CHSH test (n = 1) reaching 2√2 on |φ⁺⟩.
DeterministicBranch tsirelson_single();

/// Mixture q·first + (1-q)·second of two single-branch strategies.
SequentialStrategy mix(const DeterministicBranch& first, const DeterministicBranch& second,
                       double q);

/// q in [0, 1] for which the two-branch mixture has S_1 = S_2, located by
/// bisection on the simulated difference. Throws NotFound without a sign change.
double equalizing_weight(const DeterministicBranch& first, const DeterministicBranch& second);

/// Weights making S_1 = S_2 = S_3 for three three-pair branches.
std::array<double, 3> equalizing_triple_weights(const DeterministicBranch& b1,
                                                const DeterministicBranch& b2,
                                                const DeterministicBranch& b3);

SequentialStrategy independent_equalized();
SequentialStrategy no_unitary_equalized();
SequentialStrategy triple_equalized();

/// Mixture of maxent cases (iii) and (i) at the common-tangent touch points,
/// weighted so that S_1 = S_2 = 2√10/3.
SequentialStrategy boundary_fixed_point_strategy();

// --- identifiers ---------------------------------------------------------------

using Params = std::map<std::string, double>;

struct Entry {
  std::string id;
  std::string description;
  Params defaults;
  std::function<SequentialStrategy(const Params&)> build;
};

const std::vector<Entry>& entries();

/// Builds the catalog strategy with the given identifier; unspecified
/// parameters take the entry defaults. Throws std::invalid_argument for an
/// unknown identifier or parameter name.
SequentialStrategy lookup(const std::string& id, const Params& overrides = {});

}  // namespace seqbell::catalog
