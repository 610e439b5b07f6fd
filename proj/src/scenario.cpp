#include "seqbell/scenario.hpp"

#include "seqbell/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace seqbell {
namespace {

using Complex = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

TwoQubit pure_density(const Eigen::Vector4cd& v) { return v * v.adjoint(); }

Eigen::Vector4cd phi_plus() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(0) = v(3) = 1.0 / std::numbers::sqrt2;
  return v;
}

// Re Tr(ρ M) without forming the product.
double trace_product(const TwoQubit& rho, const TwoQubit& m) {
  Complex sum = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) sum += rho(r, c) * m(c, r);
  }
  return sum.real();
}

}  // namespace

// --- observables ---------------------------------------------------------------

PlanarObservable::PlanarObservable(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("PlanarObservable: non-finite angle");
  angle_ = std::fmod(angle, kTwoPi);
  if (angle_ < 0.0) angle_ += kTwoPi;
  if (angle_ >= kTwoPi) angle_ = 0.0;
}

Qubit PlanarObservable::matrix() const {
  return std::cos(angle_) * pauli::x() + std::sin(angle_) * pauli::z();
}

ObservablePair observable_pair(double angle0, double angle1) {
  return {PlanarObservable(angle0), PlanarObservable(angle1)};
}

ObservablePair symmetric_pair(double theta) { return observable_pair(theta, -theta); }

// --- states --------------------------------------------------------------------

std::string state_violation(const TwoQubit& rho) {
  if (!rho.allFinite()) return "density matrix has non-finite entries";
  if (hermitian_defect(rho) > kHermitianTol) return "density matrix is not Hermitian";
  const Complex trace = rho.trace();
  if (std::abs(trace - 1.0) > kHermitianTol) {
    std::ostringstream os;
    os << "density matrix trace " << trace.real() << " differs from 1";
    return os.str();
  }
  const double min_eig = hermitian_eigs(rho)(0);
  if (min_eig < -kReconstructionTol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << min_eig;
    return os.str();
  }
  return {};
}

TwoQubitState TwoQubitState::from_density(const TwoQubit& rho) {
  if (auto why = state_violation(rho); !why.empty()) throw std::invalid_argument(why);
  return TwoQubitState(rho);
}

double TwoQubitState::expectation(const Qubit& a, const Qubit& b) const {
  return trace_product(rho_, tensor(a, b));
}

TwoQubitState make_state(const StateSpec& spec) {
  struct Builder {
    TwoQubit operator()(MaximallyEntangled) const { return pure_density(phi_plus()); }
    TwoQubit operator()(PartiallyEntangled p) const {
      if (!(p.ent_angle >= 0.0 && p.ent_angle <= std::numbers::pi / 4)) {
        throw std::invalid_argument("make_state: entanglement angle must lie in [0, π/4]");
      }
      Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
      v(0) = std::cos(p.ent_angle);
      v(3) = std::sin(p.ent_angle);
      return pure_density(v);
    }
    TwoQubit operator()(Isotropic iso) const {
      if (!(iso.visibility >= 0.0 && iso.visibility <= 1.0)) {
        throw std::invalid_argument("make_state: visibility must lie in [0, 1]");
      }
      return iso.visibility * pure_density(phi_plus()) +
             (1.0 - iso.visibility) / 4.0 * TwoQubit::Identity();
    }
  };
  return TwoQubitState(std::visit(Builder{}, spec));
}

// --- instruments ------------------------------------------------------------

Qubit Rotation::matrix() const {
  const Qubit generator = axis(0) * pauli::x() + axis(1) * pauli::y() + axis(2) * pauli::z();
  return std::cos(angle) * Qubit::Identity() + Complex(0.0, std::sin(angle)) * generator;
}

ProjectiveInstrument::ProjectiveInstrument(InstrumentSetting setting0, InstrumentSetting setting1)
    : settings_{setting0, setting1} {
  for (int y = 0; y < 2; ++y) {
    const auto& s = settings_[static_cast<std::size_t>(y)];
    Qubit p0;
    Qubit p1;
    switch (s.rank) {
      case RankClass::basis: {
        if (!std::isfinite(s.angle)) throw InvalidInstrument("instrument: non-finite basis angle");
        const Qubit o = PlanarObservable(s.angle).matrix();
        p0 = 0.5 * (Qubit::Identity() + o);
        p1 = 0.5 * (Qubit::Identity() - o);
        break;
      }
      case RankClass::trivial_zero:
        p0 = Qubit::Identity();
        p1 = Qubit::Zero();
        break;
      case RankClass::trivial_one:
        p0 = Qubit::Zero();
        p1 = Qubit::Identity();
        break;
    }
    projectors_[idx(y, 0)] = p0;
    projectors_[idx(y, 1)] = p1;
    for (int b = 0; b < 2; ++b) {
      const Qubit& p = projectors_[idx(y, b)];
      if ((p * p - p).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw InvalidInstrument("instrument: projector is not idempotent");
      }
      const Qubit u = s.unitaries[static_cast<std::size_t>(b)].matrix();
      if (!u.allFinite()) throw InvalidInstrument("instrument: non-finite unitary");
      kraus_[idx(y, b)] = u * p;
      lifted_[idx(y, b)] = tensor(Qubit::Identity().eval(), kraus_[idx(y, b)]);
    }
  }
  if (kraus_completeness_defect(*this) > kHermitianTol) {
    throw InvalidInstrument("instrument: Kraus operators do not resolve the identity");
  }
}

double kraus_completeness_defect(const ProjectiveInstrument& inst) {
  double worst = 0.0;
  for (int y = 0; y < 2; ++y) {
    Qubit sum = Qubit::Zero();
    for (int b = 0; b < 2; ++b) sum += inst.kraus(y, b).adjoint() * inst.kraus(y, b);
    worst = std::max(worst, (sum - Qubit::Identity()).cwiseAbs().maxCoeff());
  }
  return worst;
}

TwoQubitState ProjectiveInstrument::apply(const TwoQubitState& state) const {
  TwoQubit out = TwoQubit::Zero();
  for (const auto& k : lifted_) {
    out.noalias() += 0.5 * k * state.rho() * k.adjoint();
  }
  return TwoQubitState(0.5 * (out + out.adjoint()));
}

TwoQubitState apply_instrument(const TwoQubitState& state, const ProjectiveInstrument& inst) {
  return inst.apply(state);
}

// --- strategies ---------------------------------------------------------------

SequentialStrategy::SequentialStrategy(std::vector<WeightedBranch> branches) {
  if (branches.empty()) throw std::invalid_argument("strategy: no branches");
  double total = 0.0;
  for (const auto& wb : branches) {
    if (!std::isfinite(wb.weight) || wb.weight < 0.0) {
      throw std::invalid_argument("strategy: branch weights must be nonnegative");
    }
    total += wb.weight;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    std::ostringstream os;
    os.precision(15);
    os << "strategy: branch weights sum to " << total << ", not 1";
    throw std::invalid_argument(os.str());
  }
  const int n = branches.front().branch.parties();
  for (const auto& wb : branches) {
    if (wb.branch.parties() != n) {
      throw std::invalid_argument("strategy: branches disagree on the number of parties");
    }
  }
  std::erase_if(branches, [&](const WeightedBranch& wb) { return wb.weight / total < kWeightTol; });
  double kept = 0.0;
  for (const auto& wb : branches) kept += wb.weight;
  for (auto& wb : branches) wb.weight /= kept;
  branches_ = std::move(branches);
}

SequentialStrategy SequentialStrategy::single(DeterministicBranch branch) {
  return SequentialStrategy({WeightedBranch{1.0, std::move(branch)}});
}

SequentialStrategy SequentialStrategy::with_state(const StateSpec& state) const {
  auto copy = branches_;
  for (auto& wb : copy) wb.branch.initial_state = state;
  return SequentialStrategy(std::move(copy));
}

TradeoffPoint::TradeoffPoint(Eigen::VectorXd s) : s_(std::move(s)) {
  for (Eigen::Index k = 0; k < s_.size(); ++k) {
    if (!std::isfinite(s_(k)) || std::abs(s_(k)) > kTsirelson + kTsirelsonSlack) {
      std::ostringstream os;
      os.precision(15);
      os << "tradeoff point: S_" << (k + 1) << " = " << s_(k) << " exceeds the Tsirelson bound";
      throw std::domain_error(os.str());
    }
  }
}

double chsh_value(const TwoQubitState& state, const std::array<Qubit, 2>& a,
                  const std::array<Qubit, 2>& b) {
  return state.expectation(a[0], b[0]) + state.expectation(a[0], b[1]) +
         state.expectation(a[1], b[0]) - state.expectation(a[1], b[1]);
}

double chsh_value(const TwoQubitState& state, const ObservablePair& a, const ObservablePair& b) {
  return chsh_value(state, {a[0].matrix(), a[1].matrix()}, {b[0].matrix(), b[1].matrix()});
}

TradeoffPoint evaluate_branch(const DeterministicBranch& branch) {
  const std::array<Qubit, 2> a{branch.a_observables[0].matrix(), branch.a_observables[1].matrix()};
  Eigen::VectorXd s(branch.parties());
  TwoQubitState state = make_state(branch.initial_state);
  Eigen::Index k = 0;
  for (const auto& inst : branch.instruments) {
    s(k++) = chsh_value(state, a, {inst.observable(0), inst.observable(1)});
    state = inst.apply(state);
  }
  s(k) = chsh_value(state, a,
                    {branch.final_observables[0].matrix(), branch.final_observables[1].matrix()});
  return TradeoffPoint(std::move(s));
}

TradeoffPoint evaluate_strategy(const SequentialStrategy& strategy) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(strategy.parties());
  for (const auto& wb : strategy.branches()) s += wb.weight * evaluate_branch(wb.branch).s();
  return TradeoffPoint(std::move(s));
}

}  // namespace seqbell
