#pragma once

#include "seqbell/linalg.hpp"

#include <array>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace seqbell {

inline constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
inline constexpr double kTsirelsonSlack = 1e-9;
inline constexpr double kWeightTol = 1e-12;

/// Observable cos(angle) σ_X + sin(angle) σ_Z in the XZ plane of the Bloch
/// sphere. The angle is stored reduced to [0, 2π).
class PlanarObservable {
 public:
  PlanarObservable() = default;
  explicit PlanarObservable(double angle);

  double angle() const { return angle_; }
  Qubit matrix() const;

  /// The observable with flipped outcomes, -O.
  PlanarObservable negated() const { return PlanarObservable(angle_ + std::numbers::pi); }

 private:
  double angle_ = 0.0;
};

using ObservablePair = std::array<PlanarObservable, 2>;

ObservablePair observable_pair(double angle0, double angle1);

/// The symmetric pair cos θ σ_X ± sin θ σ_Z used for the first party.
ObservablePair symmetric_pair(double theta);

// --- states -----------------------------------------------------------------

struct MaximallyEntangled {};
struct PartiallyEntangled {
  double ent_angle;  // cos φ|00⟩ + sin φ|11⟩, φ in [0, π/4]
};
struct Isotropic {
  double visibility;  // v|φ⁺⟩⟨φ⁺| + (1 - v) 𝟙/4
};
using StateSpec = std::variant<MaximallyEntangled, PartiallyEntangled, Isotropic>;

/// Two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
class TwoQubitState {
 public:
  /// Validates and wraps a density matrix; throws std::invalid_argument.
  static TwoQubitState from_density(const TwoQubit& rho);

  const TwoQubit& rho() const { return rho_; }

  /// Expectation value Tr(ρ (a ⊗ b)).
  double expectation(const Qubit& a, const Qubit& b) const;

 private:
  friend class ProjectiveInstrument;
  friend TwoQubitState make_state(const StateSpec& spec);
  explicit TwoQubitState(const TwoQubit& rho) : rho_(rho) {}
  TwoQubit rho_;
};

/// Checks the density-matrix invariants; returns an empty string when valid.
std::string state_violation(const TwoQubit& rho);

TwoQubitState make_state(const StateSpec& spec);

// --- instruments --------------------------------------------------------------

/// Qubit unitary exp(i·angle·(axis·σ)). The axis must be a unit vector.
struct Rotation {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitY();
  double angle = 0.0;

  Qubit matrix() const;
  static Rotation about_y(double angle) { return {Eigen::Vector3d::UnitY(), angle}; }
};

enum class RankClass { basis, trivial_zero, trivial_one };

/// What one setting y of an instrument does: which projective measurement is
/// performed and which unitary follows each outcome b.
struct InstrumentSetting {
  RankClass rank = RankClass::trivial_zero;
  double angle = 0.0;  // only used for RankClass::basis
  std::array<Rotation, 2> unitaries{};

  static InstrumentSetting basis(double angle, Rotation u0 = {}, Rotation u1 = {}) {
    return {RankClass::basis, angle, {u0, u1}};
  }
  static InstrumentSetting trivial(Rotation u0 = {}) {
    return {RankClass::trivial_zero, 0.0, {u0, Rotation{}}};
  }
};

/// Projective instrument with Kraus operators K_{b|y} = U_{by} B_{b|y}.
/// Construction checks Σ_b K†K = 𝟙 and idempotence of every projector.
class ProjectiveInstrument {
 public:
  ProjectiveInstrument(InstrumentSetting setting0, InstrumentSetting setting1);

  const InstrumentSetting& setting(int y) const { return settings_[static_cast<std::size_t>(y)]; }
  const Qubit& projector(int y, int b) const { return projectors_[idx(y, b)]; }
  const Qubit& kraus(int y, int b) const { return kraus_[idx(y, b)]; }

  /// B_{0|y} - B_{1|y}; ±𝟙 for trivial settings.
  Qubit observable(int y) const { return projector(y, 0) - projector(y, 1); }

  /// The recycled state: average over both inputs with weight ½, summed over
  /// outcomes, acting on the second qubit.
  TwoQubitState apply(const TwoQubitState& state) const;

 private:
  static std::size_t idx(int y, int b) { return static_cast<std::size_t>(2 * y + b); }

  std::array<InstrumentSetting, 2> settings_;
  std::array<Qubit, 4> projectors_;
  std::array<Qubit, 4> kraus_;
  std::array<TwoQubit, 4> lifted_;  // 𝟙 ⊗ K_{b|y}
};

/// Largest deviation max|Σ_b K†_{b|y} K_{b|y} - 𝟙| over both settings.
double kraus_completeness_defect(const ProjectiveInstrument& inst);

TwoQubitState apply_instrument(const TwoQubitState& state, const ProjectiveInstrument& inst);

// --- strategies ---------------------------------------------------------------

struct DeterministicBranch {
  ObservablePair a_observables;
  std::vector<ProjectiveInstrument> instruments;  // B_1 ... B_{n-1}
  ObservablePair final_observables;               // B_n
  StateSpec initial_state = MaximallyEntangled{};

  int parties() const { return static_cast<int>(instruments.size()) + 1; }
};

struct WeightedBranch {
  double weight;
  DeterministicBranch branch;
};

/// Convex mixture of deterministic branches over shared randomness.
class SequentialStrategy {
 public:
  /// Validates the weights (nonnegative, unit sum within 1e-12) and that all
  /// branches have the same number of parties. Weights below 1e-12 are
  /// dropped and the rest renormalised.
  explicit SequentialStrategy(std::vector<WeightedBranch> branches);

  static SequentialStrategy single(DeterministicBranch branch);

  const std::vector<WeightedBranch>& branches() const { return branches_; }
  int parties() const { return branches_.front().branch.parties(); }

  /// Copy with every branch's initial state replaced.
  SequentialStrategy with_state(const StateSpec& state) const;

 private:
  std::vector<WeightedBranch> branches_;
};

/// CHSH parameters (S_1, ..., S_n), one per pair A - B_k.
class TradeoffPoint {
 public:
  TradeoffPoint() = default;
  explicit TradeoffPoint(Eigen::VectorXd s);

  const Eigen::VectorXd& s() const { return s_; }
  double operator[](Eigen::Index k) const { return s_(k); }
  Eigen::Index size() const { return s_.size(); }
  double min() const { return s_.minCoeff(); }

 private:
  Eigen::VectorXd s_;
};

/// Tr(ρ (A_0⊗B_0 + A_0⊗B_1 + A_1⊗B_0 - A_1⊗B_1)).
double chsh_value(const TwoQubitState& state, const std::array<Qubit, 2>& a,
                  const std::array<Qubit, 2>& b);
double chsh_value(const TwoQubitState& state, const ObservablePair& a, const ObservablePair& b);

TradeoffPoint evaluate_branch(const DeterministicBranch& branch);
TradeoffPoint evaluate_strategy(const SequentialStrategy& strategy);

}  // namespace seqbell
