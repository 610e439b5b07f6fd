#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace seqbell {

inline constexpr double kS1Max = 2.0 * std::numbers::sqrt2;
inline constexpr double kContinuityTol = 1e-9;

/// One analytic piece of a trade-off curve S_2(S_1) on [lo, hi].
struct CurvePiece {
  double lo;
  double hi;
  std::function<double(double)> value;
  std::function<double(double)> slope;  // optional; finite differences otherwise
  std::string provenance;
};

/// Concatenation of contiguous, non-overlapping pieces that is continuous
/// at every breakpoint (within 1e-9).
class PiecewiseCurve {
 public:
  explicit PiecewiseCurve(std::vector<CurvePiece> pieces);

  double lo() const { return pieces_.front().lo; }
  double hi() const { return pieces_.back().hi; }
  bool contains(double x) const { return x >= lo() && x <= hi(); }

  /// Throws OutOfDomain outside [lo, hi].
  double operator()(double x) const;
  double slope(double x) const;
  const CurvePiece& piece_at(double x) const;
  const std::vector<CurvePiece>& pieces() const { return pieces_; }

 private:
  std::vector<CurvePiece> pieces_;
};

enum class CurveKind { case_i, case_iii, optimal_boundary, partial_i, partial_ii_locus };

struct CurveId {
  CurveKind kind;
  double ent_angle = std::numbers::pi / 4;  // partial_i only
};

/// Deterministic case (i) on |φ⁺⟩, flat at 2 below S_1 = 2; domain [0, 2√2].
PiecewiseCurve case_i_curve();
/// Deterministic case (iii) on |φ⁺⟩, flat at √5 below 4/√5; domain [0, 2].
PiecewiseCurve case_iii_curve();
/// Four-piece optimal boundary under shared randomness; domain [0, 2√2].
PiecewiseCurve optimal_boundary_curve();
/// Type (i) strategy on |ψ_φ⟩, flat at 2 below S_1 = 2; domain [0, 2√(1 + sin² 2φ)].
PiecewiseCurve partial_i_curve(double ent_angle);
/// Locus √(8 - S_1²) of the partial-state type (ii) points; domain [0, 2].
PiecewiseCurve partial_ii_locus_curve();

PiecewiseCurve make_curve(const CurveId& id);

/// Throws std::invalid_argument for s1 outside [0, 2√2] and OutOfDomain when
/// s1 lies outside the curve's own range.
double curve_value(const CurveId& id, double s1);

struct TangentLine {
  double slope;
  double intercept;
  double touch_x;

  double operator()(double x) const { return slope * x + intercept; }
};

/// Line through (px, py) tangent to a concave curve. A point lying on the
/// curve yields the tangent at that point. Throws NotFound otherwise.
TangentLine tangent_from_point(double px, double py, const PiecewiseCurve& curve);

struct CommonTangent {
  double slope;
  double intercept;
  double touch_a;
  double touch_b;
};

/// Line tangent to two concave curves at distinct points, found by
/// bisection on the slope of the supporting lines. Throws NotFound.
CommonTangent common_tangent(const PiecewiseCurve& a, const PiecewiseCurve& b);

/// Uniform grid of `grid` points on [0, 2√2].
std::vector<double> s1_grid(int grid);

/// Upper concave envelope of isolated points and curves sampled on the
/// uniform grid, as a piecewise-linear curve (monotone chain upper hull).
PiecewiseCurve upper_envelope(std::span<const Eigen::Vector2d> points,
                              std::span<const PiecewiseCurve> curves, int grid);

/// Upper hull of a point cloud, sorted by x.
std::vector<Eigen::Vector2d> upper_hull(std::vector<Eigen::Vector2d> points);

/// S_2 of the partial-state type (iii) family at S_1, after eliminating the
/// first party's angle.
double partial_iii_tradeoff(double ent_angle, double s1);

/// Entanglement angle maximising partial_iii_tradeoff at fixed S_1. The
/// closed form passes through complex intermediates; throws OutOfDomain when
/// the result is not a real angle in (0, π/4] or s1 is not in (0, 2).
double type_iii_optimal_ent_angle(double s1);

/// Right end of the interval on which √(8 - S_1²) exceeds the first row of
/// the optimal boundary: 8√2 (7√7 - 2) / 113.
double partial_ii_threshold();

/// CSV with header s1,s2,provenance; 12 decimals; rows sorted by s1.
void write_curve_csv(std::ostream& os, const PiecewiseCurve& curve, int grid);

}  // namespace seqbell
