#pragma once

#include "seqbell/scenario.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace seqbell {

/// Rank classes of settings y = 0, 1 for each instrument party B_1 ... B_{n-1}.
struct BranchTemplate {
  std::vector<std::array<RankClass, 2>> parties;

  /// Same rank pair for every instrument party.
  static BranchTemplate uniform(int parties, RankClass y0, RankClass y1);
};

struct ParameterSpec {
  std::string name;
  double lo;
  double hi;
};

/// Continuous search domain over a fixed list of branch templates.
///
/// Parameter names: "A.0", "A.1", "F.0", "F.1" for the first and last party
/// (prefixed "b<i>." unless independence mode shares them), and
/// "b<i>.P<k>.y<y>.angle" / ".u<b>" / ".u<b>.polar" / ".u<b>.azimuth" for
/// instrument settings. Branch weights are "b<i>.w"; the mixture uses
/// w_i² / Σ w_j².
struct SearchSpace {
  StateSpec state = MaximallyEntangled{};
  std::vector<BranchTemplate> branches;
  bool independence = false;   // A and final party identical across branches
  bool unitaries = true;       // false: every Kraus operator is a bare projector
  bool general_axes = false;   // unitary axes free instead of fixed to Y
  std::map<std::string, double> pinned;

  int parties() const;
  std::string label() const;

  /// Every parameter in decoding order, pinned ones included.
  std::vector<ParameterSpec> all_parameters() const;
  /// The parameters the search varies.
  std::vector<ParameterSpec> free_parameters() const;

  /// Strategy for a point of the free parameters.
  SequentialStrategy decode(const Eigen::VectorXd& x) const;
  TradeoffPoint evaluate(const Eigen::VectorXd& x) const;
};

/// Cases (i), (ii), (iii) as three branches of a two-pair strategy.
SearchSpace two_pair_space(const StateSpec& state = MaximallyEntangled{});
/// Cases (i) and (iii) only, on |ψ_φ⟩.
SearchSpace partial_mixed_space(double ent_angle);
/// Two branches (basis/basis, trivial/basis) with shared A and C.
SearchSpace independence_space();
/// n branches for n pairs; in branch j the first j instrument parties use
/// trivial/basis settings and the rest basis/basis.
SearchSpace staircase_space(int n);

struct SearchOptions {
  int restarts = 32;
  long max_evaluations = 50000;  // per restart
  double diameter_tol = 1e-10;
  int threads = 1;
};

struct SearchResult {
  TradeoffPoint best_point;
  SequentialStrategy best_strategy;
  Eigen::VectorXd parameters;
  double objective;
  long evaluations;  // summed over restarts
  std::uint64_t seed;
};

/// Restart r starts from a point drawn with the stream keyed by (seed, r).
Eigen::VectorXd restart_start_point(const SearchSpace& space, std::uint64_t seed, int restart);

/// Maximises S_2 subject to |S_1 - s1_target| ≤ tol through a quadratic
/// penalty 10³·max(0, |S_1 - target| - tol)², tightened to 10⁵, 10⁷ and 10⁹.
/// Throws NotFound when the target exceeds the Horodecki cap of the state or
/// no restart meets the constraint.
SearchResult maximize_s2_at_s1(const SearchSpace& space, double s1_target, double tol,
                               std::uint64_t seed, const SearchOptions& options = {});

/// Maximises min_k S_k - 10² Σ_k (S_k - S̄)². The objective field holds min_k S_k.
SearchResult maximize_equal_violations(const SearchSpace& space, int n, std::uint64_t seed,
                                       const SearchOptions& options = {});

struct SweepRow {
  double s1_target;
  double s1_achieved;
  double s2_raw;   // best single search
  double s2_best;  // after concavification over all rows
  std::string label;
  std::uint64_t seed;
};

/// maximize_s2_at_s1 on a uniform grid of [0, 2√2]; infeasible targets are
/// skipped. s2_best is the upper concave hull of the achieved points.
std::vector<SweepRow> sweep_boundary(const SearchSpace& space, int grid, std::uint64_t seed,
                                     double tol = 1e-6, const SearchOptions& options = {});

}  // namespace seqbell
