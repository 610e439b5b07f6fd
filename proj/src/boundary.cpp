#include "seqbell/boundary.hpp"

#include "seqbell/csv.hpp"
#include "seqbell/errors.hpp"
#include "seqbell/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <sstream>

namespace seqbell {
namespace {

const double kSqrt5 = std::sqrt(5.0);
const double kSqrt10 = std::sqrt(10.0);
const double kSqrt7 = std::sqrt(7.0);
const double kRow1End = std::sqrt(3.5);        // √(7/2)
const double kRow2End = 3.0 * std::sqrt(0.4);  // 3√(2/5)
const double kRow3End = 4.0 * std::sqrt(0.4);  // 4√(2/5)
const double kCaseIiiPeak = 4.0 / std::sqrt(5.0);
constexpr double kRootTol = 1e-15;

// Deterministic case (i) trade-off and its slope.
double rank1(double x) { return 0.5 * x + 0.5 * std::sqrt(std::max(0.0, 8.0 - x * x)); }
double rank1_slope(double x) { return 0.5 - x / (2.0 * std::sqrt(std::max(0.0, 8.0 - x * x))); }

// Deterministic case (iii) trade-off and its slope.
double mixed_rank(double x) { return x + 0.5 * std::sqrt(std::max(0.0, 4.0 - x * x)); }
double mixed_rank_slope(double x) { return 1.0 - x / (2.0 * std::sqrt(std::max(0.0, 4.0 - x * x))); }

CurvePiece constant_piece(double lo, double hi, double value, std::string provenance) {
  return {lo, hi, [value](double) { return value; }, [](double) { return 0.0; },
          std::move(provenance)};
}

CurvePiece linear_piece(double lo, double hi, double slope, double intercept,
                        std::string provenance) {
  return {lo, hi, [=](double x) { return slope * x + intercept; }, [slope](double) { return slope; },
          std::move(provenance)};
}

std::string format_range(double x, double lo, double hi) {
  std::ostringstream os;
  os.precision(15);
  os << "s1 = " << x << " outside [" << lo << ", " << hi << "]";
  return os.str();
}

// Maximiser of f(x) - m x over the curve's domain for a concave curve.
double support_point(const PiecewiseCurve& c, double m) {
  if (c.hi() == c.lo()) return c.lo();
  if (c.slope(c.lo()) <= m) return c.lo();
  if (c.slope(c.hi()) >= m) return c.hi();
  const auto root = detail::bisect_root([&](double x) { return c.slope(x) - m; }, c.lo(), c.hi(), kRootTol);
  return root ? *root : c.lo();
}

double support_intercept(const PiecewiseCurve& c, double m) {
  const double x = support_point(c, m);
  return c(x) - m * x;
}

}  // namespace

// --- PiecewiseCurve ---------------------------------------------------------------

PiecewiseCurve::PiecewiseCurve(std::vector<CurvePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("PiecewiseCurve: no pieces");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.lo <= p.hi) || !p.value) throw std::invalid_argument("PiecewiseCurve: malformed piece");
    if (i == 0) continue;
    const auto& prev = pieces_[i - 1];
    if (std::abs(prev.hi - p.lo) > 1e-12) {
      throw std::invalid_argument("PiecewiseCurve: pieces are not contiguous");
    }
    if (std::abs(prev.value(prev.hi) - p.value(p.lo)) > kContinuityTol) {
      throw std::invalid_argument("PiecewiseCurve: discontinuity at breakpoint");
    }
  }
}

const CurvePiece& PiecewiseCurve::piece_at(double x) const {
  if (!contains(x)) throw OutOfDomain(format_range(x, lo(), hi()));
  const auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                                   [](const CurvePiece& p, double v) { return p.hi < v; });
  return it == pieces_.end() ? pieces_.back() : *it;
}

double PiecewiseCurve::operator()(double x) const { return piece_at(x).value(x); }

double PiecewiseCurve::slope(double x) const {
  const auto& p = piece_at(x);
  if (p.slope) return p.slope(x);
  // One-sided near the ends of the piece, central inside.
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  const double a = std::max(p.lo, x - h);
  const double b = std::min(p.hi, x + h);
  if (b <= a) return 0.0;
  return (p.value(b) - p.value(a)) / (b - a);
}

// --- named curves ---------------------------------------------------------------

PiecewiseCurve case_i_curve() {
  return PiecewiseCurve({constant_piece(0.0, 2.0, 2.0, "case_i.flat"),
                         {2.0, kS1Max, rank1, rank1_slope, "case_i"}});
}

PiecewiseCurve case_iii_curve() {
  return PiecewiseCurve({constant_piece(0.0, kCaseIiiPeak, kSqrt5, "case_iii.flat"),
                         {kCaseIiiPeak, 2.0, mixed_rank, mixed_rank_slope, "case_iii"}});
}

PiecewiseCurve optimal_boundary_curve() {
  return PiecewiseCurve({
      linear_piece(0.0, kRow1End, 1.0 - kSqrt7 / 2.0, kS1Max, "mix_ii_iii"),
      {kRow1End, kRow2End, mixed_rank, mixed_rank_slope, "case_iii"},
      linear_piece(kRow2End, kRow3End, -0.5, kSqrt10, "mix_i_iii"),
      {kRow3End, kS1Max, rank1, rank1_slope, "case_i"},
  });
}

PiecewiseCurve partial_i_curve(double ent_angle) {
  if (!(ent_angle > 0.0 && ent_angle <= std::numbers::pi / 4)) {
    throw std::invalid_argument("partial_i_curve: entanglement angle must lie in (0, π/4]");
  }
  const double t = std::sin(2.0 * ent_angle);
  const double norm = 1.0 + t * t;
  const double cap = 2.0 * std::sqrt(norm);
  auto value = [t, norm](double x) {
    return (x + t * std::sqrt(std::max(0.0, 4.0 * norm - x * x))) / norm;
  };
  auto slope = [t, norm](double x) {
    return (1.0 - t * x / std::sqrt(std::max(0.0, 4.0 * norm - x * x))) / norm;
  };
  return PiecewiseCurve({constant_piece(0.0, 2.0, 2.0, "partial_i.flat"),
                         {2.0, cap, value, slope, "partial_i"}});
}

PiecewiseCurve partial_ii_locus_curve() {
  return PiecewiseCurve({{0.0, 2.0, [](double x) { return std::sqrt(8.0 - x * x); },
                          [](double x) { return -x / std::sqrt(8.0 - x * x); }, "partial_ii"}});
}

PiecewiseCurve make_curve(const CurveId& id) {
  switch (id.kind) {
    case CurveKind::case_i:
      return case_i_curve();
    case CurveKind::case_iii:
      return case_iii_curve();
    case CurveKind::optimal_boundary:
      return optimal_boundary_curve();
    case CurveKind::partial_i:
      return partial_i_curve(id.ent_angle);
    case CurveKind::partial_ii_locus:
      return partial_ii_locus_curve();
  }
  throw std::invalid_argument("make_curve: unknown curve");
}

double curve_value(const CurveId& id, double s1) {
  if (!(s1 >= 0.0 && s1 <= kS1Max)) throw std::invalid_argument(format_range(s1, 0.0, kS1Max));
  return make_curve(id)(s1);
}

// --- tangents --------------------------------------------------------------------

TangentLine tangent_from_point(double px, double py, const PiecewiseCurve& curve) {
  if (curve.contains(px)) {
    const double on = curve(px);
    if (std::abs(on - py) <= 1e-12) {
      const double m = curve.slope(px);
      return {m, py - m * px, px};
    }
    if (py < on) throw NotFound("tangent_from_point: point lies below the curve");
  }
  // r(x) = 0 when the tangent at x passes through (px, py). For a concave
  // curve r is monotone on either side of px.
  const auto residual = [&](double x) {
    const double m = curve.slope(x);
    if (!std::isfinite(m)) return x > px ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
    return curve(x) + m * (px - x) - py;
  };
  std::optional<double> touch;
  if (px < curve.hi()) touch = detail::bisect_root(residual, std::max(px, curve.lo()), curve.hi(), kRootTol);
  if (!touch && px > curve.lo()) {
    touch = detail::bisect_root(residual, curve.lo(), std::min(px, curve.hi()), kRootTol);
  }
  if (!touch) throw NotFound("tangent_from_point: no tangency point on the curve");
  const double m = curve.slope(*touch);
  if (!std::isfinite(m)) throw NotFound("tangent_from_point: vertical tangent");
  return {m, py - m * px, *touch};
}

CommonTangent common_tangent(const PiecewiseCurve& a, const PiecewiseCurve& b) {
  const auto gap = [&](double m) { return support_intercept(a, m) - support_intercept(b, m); };
  double lo = -1.0;
  double hi = 1.0;
  for (int i = 0; i < 60 && (gap(lo) < 0.0) == (gap(hi) < 0.0); ++i) {
    lo *= 2.0;
    hi *= 2.0;
  }
  const double glo = gap(lo);
  const double ghi = gap(hi);
  if (std::abs(glo) <= 1e-12 && std::abs(ghi) <= 1e-12) {
    throw NotFound("common_tangent: curves coincide; tangent is degenerate");
  }
  const auto m = detail::bisect_root(gap, lo, hi, kRootTol);
  if (!m) throw NotFound("common_tangent: supporting lines never coincide");

  CommonTangent out{*m, support_intercept(a, *m), support_point(a, *m), support_point(b, *m)};
  if (std::abs(out.touch_a - out.touch_b) < 1e-9) {
    throw NotFound("common_tangent: touch points coincide; tangent is degenerate");
  }
  const double chord = (a(out.touch_a) - b(out.touch_b)) / (out.touch_a - out.touch_b);
  if (std::abs(chord - out.slope) > 1e-10) {
    throw NotFound("common_tangent: no line touches both curves");
  }
  return out;
}

// --- envelopes ---------------------------------------------------------------------

std::vector<double> s1_grid(int grid) {
  if (grid < 2) throw std::invalid_argument("s1_grid: need at least two points");
  std::vector<double> xs(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) xs[static_cast<std::size_t>(i)] = kS1Max * i / (grid - 1);
  xs.back() = kS1Max;
  return xs;
}

std::vector<Eigen::Vector2d> upper_hull(std::vector<Eigen::Vector2d> points) {
  std::sort(points.begin(), points.end(), [](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() > q.y());
  });
  std::vector<Eigen::Vector2d> hull;
  for (const auto& p : points) {
    if (!hull.empty() && hull.back().x() == p.x()) continue;  // keep the highest at equal x
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double cross = (a.x() - o.x()) * (p.y() - o.y()) - (a.y() - o.y()) * (p.x() - o.x());
      if (cross < 0.0) break;  // right turn: a stays on the upper hull
      hull.pop_back();
    }
    hull.push_back(p);
  }
  return hull;
}

PiecewiseCurve upper_envelope(std::span<const Eigen::Vector2d> points,
                              std::span<const PiecewiseCurve> curves, int grid) {
  if (points.empty() && curves.empty()) throw std::invalid_argument("upper_envelope: empty input");
  const auto xs = s1_grid(grid);
  std::vector<Eigen::Vector2d> cloud(points.begin(), points.end());
  for (const auto& c : curves) {
    cloud.emplace_back(c.lo(), c(c.lo()));
    cloud.emplace_back(c.hi(), c(c.hi()));
    for (double x : xs) {
      if (c.contains(x)) cloud.emplace_back(x, c(x));
    }
  }
  const auto hull = upper_hull(std::move(cloud));
  std::vector<CurvePiece> pieces;
  if (hull.size() == 1) {
    pieces.push_back(constant_piece(hull[0].x(), hull[0].x(), hull[0].y(), "envelope"));
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const Eigen::Vector2d p = hull[i];
    const Eigen::Vector2d q = hull[i + 1];
    const double m = (q.y() - p.y()) / (q.x() - p.x());
    pieces.push_back(linear_piece(p.x(), q.x(), m, p.y() - m * p.x(), "envelope"));
  }
  return PiecewiseCurve(std::move(pieces));
}

// --- partially entangled states ------------------------------------------------------

double partial_iii_tradeoff(double ent_angle, double s1) {
  if (!(s1 >= -2.0 && s1 <= 2.0)) throw OutOfDomain(format_range(s1, -2.0, 2.0));
  const double s = std::sin(2.0 * ent_angle);
  const double c = std::cos(2.0 * ent_angle);
  const double half = 0.5 * s1;
  return s * std::sqrt(1.0 - half * half) * (1.0 - 2.0 * c) + half * (2.0 * s * s + c);
}

double type_iii_optimal_ent_angle(double s1) {
  using C = std::complex<double>;
  if (!(s1 > 0.0 && s1 < 2.0)) throw OutOfDomain(format_range(s1, 0.0, 2.0));
  const double x2 = s1 * s1;
  const double x4 = x2 * x2;
  const C radicand = std::sqrt(C(x4 + 117.0 * x2 - 484.0));
  const C h = std::pow(C(8.0 * x4 - 396.0 * x2 + 1331.0) + 8.0 * x2 * radicand, 1.0 / 3.0);
  const C g = 11.0 + h + (121.0 - 24.0 * x2) / h;
  const C sqrt_g = std::sqrt(g);
  const C inner = 0.25 * std::sqrt(9.0 - sqrt_g + std::sqrt(33.0 - g + 8.0 * x2 / sqrt_g));
  const C angle = std::acos(inner);
  const double scale = std::max(1.0, std::abs(g));
  if (std::abs(g.imag()) > 1e-9 * scale || std::abs(angle.imag()) > 1e-9) {
    throw OutOfDomain("type_iii_optimal_ent_angle: closed form is complex at s1 = " + std::to_string(s1));
  }
  const double phi = angle.real();
  if (!(phi > 0.0 && phi <= std::numbers::pi / 4 + 1e-12)) {
    throw OutOfDomain("type_iii_optimal_ent_angle: angle outside (0, π/4] at s1 = " + std::to_string(s1));
  }
  return phi;
}

double partial_ii_threshold() {
  return 8.0 * std::numbers::sqrt2 / 113.0 * (7.0 * kSqrt7 - 2.0);
}

// --- export ------------------------------------------------------------------------

void write_curve_csv(std::ostream& os, const PiecewiseCurve& curve, int grid) {
  os << "s1,s2,provenance\n";
  for (double x : s1_grid(grid)) {
    if (!curve.contains(x)) continue;
    os << csv::fixed12(x) << ',' << csv::fixed12(curve(x)) << ',' << curve.piece_at(x).provenance << '\n';
  }
}

}  // namespace seqbell
