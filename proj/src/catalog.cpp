#include "seqbell/catalog.hpp"

#include "seqbell/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace seqbell::catalog {
namespace {

using std::numbers::pi;
constexpr double kHalfPi = pi / 2;

void require_range(double value, double lo, double hi, const char* what) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream os;
    os << what << " = " << value << " outside [" << lo << ", " << hi << "]";
    throw std::invalid_argument(os.str());
  }
}

void require_partial(double ent_angle) {
  if (!(ent_angle > 0.0 && ent_angle <= pi / 4)) {
    throw std::invalid_argument("entanglement angle must lie in (0, π/4]");
  }
}

ProjectiveInstrument identity_instrument() {
  return {InstrumentSetting::trivial(), InstrumentSetting::trivial()};
}

ProjectiveInstrument z_after_trivial() {
  return {InstrumentSetting::trivial(), InstrumentSetting::basis(kHalfPi)};
}

// Bisection on a continuous function with f(lo), f(hi) of opposite sign.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double param(const Params& p, const std::string& key) { return p.at(key); }

}  // namespace

double SymbolicAngle::value() const {
  double base_value = 1.0;
  switch (base) {
    case Base::one:
      base_value = 1.0;
      break;
    case Base::pi:
      base_value = pi;
      break;
    case Base::pi_over_e:
      base_value = pi / std::numbers::e;
      break;
  }
  return static_cast<double>(num) / static_cast<double>(den) * base_value;
}

DeterministicBranch maxent_case_i(double phi) {
  require_range(phi, 0.0, kHalfPi, "case (i) angle");
  DeterministicBranch b;
  b.a_observables = symmetric_pair(pi / 4);
  b.instruments.emplace_back(
      InstrumentSetting::basis(phi),
      InstrumentSetting::basis(kHalfPi - phi, Rotation::about_y(phi - pi / 4),
                               Rotation::about_y(phi - pi / 4)));
  b.final_observables = observable_pair(phi, phi);
  return b;
}

DeterministicBranch maxent_case_ii() {
  DeterministicBranch b;
  b.a_observables = symmetric_pair(pi / 4);
  b.instruments.push_back(identity_instrument());
  b.final_observables = observable_pair(0.0, kHalfPi);
  return b;
}

DeterministicBranch maxent_case_iii(double theta) {
  require_range(theta, 0.0, kHalfPi, "case (iii) angle");
  DeterministicBranch b;
  b.a_observables = symmetric_pair(theta);
  b.instruments.push_back(z_after_trivial());
  b.final_observables = observable_pair(0.0, kHalfPi);
  return b;
}

DeterministicBranch partial_case_i(double ent_angle, double mu) {
  require_partial(ent_angle);
  require_range(mu, 0.0, kHalfPi, "type (i) measurement angle");
  DeterministicBranch b;
  b.initial_state = PartiallyEntangled{ent_angle};
  b.a_observables = observable_pair(0.0, kHalfPi);
  b.instruments.emplace_back(
      InstrumentSetting::basis(mu),
      InstrumentSetting::basis(-mu, Rotation::about_y(mu - kHalfPi), Rotation::about_y(mu - kHalfPi)));
  b.final_observables = observable_pair(mu, mu + pi);
  return b;
}

DeterministicBranch partial_case_ii(double ent_angle) {
  require_partial(ent_angle);
  const double s = std::sin(2.0 * ent_angle);
  DeterministicBranch b;
  b.initial_state = PartiallyEntangled{ent_angle};
  b.a_observables = observable_pair(kHalfPi, 0.0);
  b.instruments.push_back(identity_instrument());
  // Horodecki-optimal directions for correlation matrix diag(s, ·, 1) in the XZ plane.
  b.final_observables = observable_pair(std::atan2(1.0, s), std::atan2(1.0, -s));
  return b;
}

DeterministicBranch partial_case_iii(double ent_angle, double theta) {
  require_partial(ent_angle);
  require_range(theta, 0.0, pi, "type (iii) angle");
  DeterministicBranch b;
  b.initial_state = PartiallyEntangled{ent_angle};
  b.a_observables = observable_pair(theta, pi - theta);
  b.instruments.emplace_back(InstrumentSetting::trivial(), InstrumentSetting::basis(0.0));
  b.final_observables = observable_pair(kHalfPi, 0.0);
  return b;
}

DeterministicBranch tsirelson_single() {
  DeterministicBranch b;
  b.a_observables = symmetric_pair(pi / 4);
  b.final_observables = observable_pair(0.0, kHalfPi);
  return b;
}

SequentialStrategy mix(const DeterministicBranch& first, const DeterministicBranch& second,
                       double q) {
  require_range(q, 0.0, 1.0, "mixing weight");
  return SequentialStrategy({{q, first}, {1.0 - q, second}});
}

double equalizing_weight(const DeterministicBranch& first, const DeterministicBranch& second) {
  const auto d1 = evaluate_branch(first);
  const auto d2 = evaluate_branch(second);
  if (d1.size() != 2) throw std::invalid_argument("equalizing_weight: needs two-pair branches");
  const auto diff = [&](double q) {
    const Eigen::VectorXd s = q * d1.s() + (1.0 - q) * d2.s();
    return s(0) - s(1);
  };
  if ((diff(0.0) < 0.0) == (diff(1.0) < 0.0)) {
    throw NotFound("equalizing_weight: S_1 - S_2 has no sign change on [0, 1]");
  }
  return bisect(diff, 0.0, 1.0, 1e-12);
}

std::array<double, 3> equalizing_triple_weights(const DeterministicBranch& b1,
                                                const DeterministicBranch& b2,
                                                const DeterministicBranch& b3) {
  Eigen::Matrix3d s;
  s.col(0) = evaluate_branch(b1).s();
  s.col(1) = evaluate_branch(b2).s();
  s.col(2) = evaluate_branch(b3).s();
  Eigen::Matrix3d system;
  system.row(0) = s.row(0) - s.row(1);
  system.row(1) = s.row(1) - s.row(2);
  system.row(2).setOnes();
  const Eigen::Vector3d q = system.fullPivLu().solve(Eigen::Vector3d(0.0, 0.0, 1.0));
  if (!q.allFinite() || q.minCoeff() < 0.0) {
    throw NotFound("equalizing_triple_weights: no probability vector equalises the three branches");
  }
  return {q(0), q(1), q(2)};
}

SequentialStrategy independent_strategy(double q) {
  using namespace constants;
  require_range(q, 0.0, 1.0, "independent-parties weight");
  const auto a = observable_pair(indep_a0_angle.value(), indep_a1_angle.value());
  const auto c = observable_pair(indep_c0_angle.value(), indep_c1_angle.value());
  const Rotation u_y1 = Rotation::about_y(indep_u_y1.value());
  const auto diag_setting = InstrumentSetting::basis(pi / 4, u_y1, u_y1);

  DeterministicBranch b0;
  b0.a_observables = a;
  b0.instruments.emplace_back(InstrumentSetting::basis(indep_b0_angle.value()), diag_setting);
  b0.final_observables = c;

  DeterministicBranch b1;
  b1.a_observables = a;
  b1.instruments.emplace_back(InstrumentSetting::trivial(Rotation::about_y(indep_u_trivial.value())),
                              diag_setting);
  b1.final_observables = c;

  return SequentialStrategy({{q, std::move(b0)}, {1.0 - q, std::move(b1)}});
}

DeterministicBranch tsirelson_branch() {
  DeterministicBranch b;
  b.a_observables = symmetric_pair(pi / 4);
  b.instruments.emplace_back(InstrumentSetting::basis(0.0), InstrumentSetting::basis(kHalfPi));
  b.final_observables = observable_pair(0.0, kHalfPi);
  return b;
}

SequentialStrategy no_unitary_strategy(double q) {
  require_range(q, 0.0, 1.0, "mixing weight");
  // A = (σ_X ± 2σ_Z)/√5.
  DeterministicBranch horodecki = maxent_case_iii(std::atan2(2.0, 1.0));
  return SequentialStrategy({{q, tsirelson_branch()}, {1.0 - q, std::move(horodecki)}});
}

SequentialStrategy triple_strategy(double phi, double phi_hat, double phi_tilde,
                                   const std::array<double, 3>& weights) {
  DeterministicBranch b1;
  b1.a_observables = symmetric_pair(pi / 4);
  b1.instruments.emplace_back(
      InstrumentSetting::basis(phi),
      InstrumentSetting::basis(kHalfPi - phi, Rotation::about_y(phi - pi / 4),
                               Rotation::about_y(phi - pi / 4)));
  b1.instruments.emplace_back(InstrumentSetting::basis(phi), InstrumentSetting::basis(phi));
  b1.final_observables = observable_pair(phi, phi);

  DeterministicBranch b2;
  b2.a_observables = symmetric_pair(phi_hat);
  b2.instruments.push_back(z_after_trivial());
  b2.instruments.emplace_back(InstrumentSetting::basis(0.0), InstrumentSetting::basis(kHalfPi));
  b2.final_observables = observable_pair(0.0, kHalfPi);

  DeterministicBranch b3;
  b3.a_observables = symmetric_pair(phi_tilde);
  b3.instruments.push_back(z_after_trivial());
  b3.instruments.push_back(z_after_trivial());
  b3.final_observables = observable_pair(0.0, kHalfPi);

  return SequentialStrategy(
      {{weights[0], std::move(b1)}, {weights[1], std::move(b2)}, {weights[2], std::move(b3)}});
}

SequentialStrategy independent_equalized() {
  const auto probe = independent_strategy(0.5);
  const double q = equalizing_weight(probe.branches()[0].branch, probe.branches()[1].branch);
  return independent_strategy(q);
}

SequentialStrategy no_unitary_equalized() {
  const auto probe = no_unitary_strategy(0.5);
  const double q = equalizing_weight(probe.branches()[0].branch, probe.branches()[1].branch);
  return no_unitary_strategy(q);
}

SequentialStrategy triple_equalized() {
  using namespace constants;
  const double phi = triple_phi.value();
  const double phi_hat = triple_phi_hat.value();
  const double phi_tilde = triple_phi_tilde.value();
  const auto probe = triple_strategy(phi, phi_hat, phi_tilde, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto& br = probe.branches();
  const auto w = equalizing_triple_weights(br[0].branch, br[1].branch, br[2].branch);
  return triple_strategy(phi, phi_hat, phi_tilde, w);
}

SequentialStrategy boundary_fixed_point_strategy() {
  // Touch points 4√(2/5) on case (i) and 3√(2/5) on case (iii).
  const auto first = maxent_case_i(std::acos(2.0 / std::sqrt(5.0)));
  const auto second = maxent_case_iii(std::asin(3.0 / std::sqrt(10.0)));
  return mix(first, second, equalizing_weight(first, second));
}

// --- identifiers ---------------------------------------------------------------

const std::vector<Entry>& entries() {
  using namespace constants;
  static const std::vector<Entry> table = {
      {"maxent.case_i", "basis/basis instrument on |phi+>", {{"phi", pi / 6}},
       [](const Params& p) { return SequentialStrategy::single(maxent_case_i(param(p, "phi"))); }},
      {"maxent.case_ii", "trivial/trivial instrument on |phi+>", {},
       [](const Params&) { return SequentialStrategy::single(maxent_case_ii()); }},
      {"maxent.case_iii", "trivial/basis instrument on |phi+>", {{"theta", std::atan2(2.0, 1.0)}},
       [](const Params& p) { return SequentialStrategy::single(maxent_case_iii(param(p, "theta"))); }},
      {"partial.case_i", "basis/basis instrument on |psi_phi>", {{"ent_angle", 2 * pi / 9}, {"mu", 1.2}},
       [](const Params& p) {
         return SequentialStrategy::single(partial_case_i(param(p, "ent_angle"), param(p, "mu")));
       }},
      {"partial.case_ii", "trivial/trivial instrument on |psi_phi>", {{"ent_angle", pi / 8}},
       [](const Params& p) { return SequentialStrategy::single(partial_case_ii(param(p, "ent_angle"))); }},
      {"partial.case_iii", "trivial/basis instrument on |psi_phi>", {{"ent_angle", 2 * pi / 9}, {"theta", 0.3}},
       [](const Params& p) {
         return SequentialStrategy::single(partial_case_iii(param(p, "ent_angle"), param(p, "theta")));
       }},
      {"tsirelson", "first pair at the Tsirelson bound, second at sqrt(2)", {},
       [](const Params&) { return SequentialStrategy::single(tsirelson_branch()); }},
      {"tsirelson.single", "single CHSH test at the Tsirelson bound", {},
       [](const Params&) { return SequentialStrategy::single(tsirelson_single()); }},
      {"independent", "double violation with local randomness only (q defaults to equalizing)", {},
       [](const Params& p) {
         return p.contains("q") ? independent_strategy(p.at("q")) : independent_equalized();
       }},
      {"appendixC", "no-unitary mixture (q defaults to equalizing)", {},
       [](const Params& p) {
         return p.contains("q") ? no_unitary_strategy(p.at("q")) : no_unitary_equalized();
       }},
      {"appendixD", "triple violation (weights default to equalizing)",
       {{"phi", triple_phi.value()}, {"phi_hat", triple_phi_hat.value()}, {"phi_tilde", triple_phi_tilde.value()}},
       [](const Params& p) {
         const double a = param(p, "phi");
         const double b = param(p, "phi_hat");
         const double c = param(p, "phi_tilde");
         if (p.contains("q1") || p.contains("q2") || p.contains("q3")) {
           return triple_strategy(a, b, c, {p.at("q1"), p.at("q2"), p.at("q3")});
         }
         const auto probe = triple_strategy(a, b, c, {1.0 / 3, 1.0 / 3, 1.0 / 3});
         const auto& br = probe.branches();
         return triple_strategy(a, b, c, equalizing_triple_weights(br[0].branch, br[1].branch, br[2].branch));
       }},
      {"boundary.fixed_point", "case (i) + case (iii) mixture at S1 = S2 = 2*sqrt(10)/3", {},
       [](const Params&) { return boundary_fixed_point_strategy(); }},
  };
  return table;
}

SequentialStrategy lookup(const std::string& id, const Params& overrides) {
  static const std::map<std::string, std::vector<std::string>> optional = {
      {"independent", {"q"}}, {"appendixC", {"q"}}, {"appendixD", {"q1", "q2", "q3"}}};
  for (const auto& e : entries()) {
    if (e.id != id) continue;
    Params p = e.defaults;
    for (const auto& [key, value] : overrides) {
      const bool known = p.contains(key) || (optional.contains(id) && std::ranges::count(optional.at(id), key) > 0);
      if (!known) throw std::invalid_argument("catalog entry " + id + " has no parameter '" + key + "'");
      p[key] = value;
    }
    return e.build(p);
  }
  throw std::invalid_argument("unknown catalog identifier '" + id + "'");
}

}  // namespace seqbell::catalog
