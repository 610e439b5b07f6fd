// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
//
// Usage: seqbell_acceptance [--only N]... [--seed S]

#include "seqbell/analysis.hpp"
#include "seqbell/boundary.hpp"
#include "seqbell/catalog.hpp"
#include "seqbell/errors.hpp"
#include "seqbell/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace seqbell;
using std::numbers::pi;
using std::numbers::sqrt2;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void info(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::uint64_t g_seed = 0;

const double kR1 = std::sqrt(3.5);
const double kR2 = 3 * std::sqrt(0.4);
const double kR3 = 4 * std::sqrt(0.4);
const double kFixed = 2 * std::sqrt(10.0) / 3;

double rows(double x) {
  if (x <= kR1) return 2 * sqrt2 + (1 - std::sqrt(7.0) / 2) * x;
  if (x <= kR2) return x + 0.5 * std::sqrt(4 - x * x);
  if (x <= kR3) return std::sqrt(10.0) - x / 2;
  return x / 2 + 0.5 * std::sqrt(std::max(0.0, 8 - x * x));
}

// --- 1 ----------------------------------------------------------------------------

Outcome boundary_exactness() {
  Outcome o;
  const auto curve = optimal_boundary_curve();
  double row_err = 0.0;
  for (double x : s1_grid(1000)) row_err = std::max(row_err, std::abs(curve(x) - rows(x)));
  o.require(row_err <= 1e-12, "row mismatch " + fmt("%.2e", row_err));
  double gap = 0.0;
  const auto& pieces = curve.pieces();
  int breakpoints = 0;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const double b = pieces[i].hi;
    for (double expected : {kR1, kR2, kR3}) breakpoints += std::abs(b - expected) <= 1e-12;
    gap = std::max(gap, std::abs(pieces[i].value(b) - pieces[i + 1].value(b)));
  }
  o.require(breakpoints == 3, "breakpoints not at sqrt(7/2), 3 sqrt(2/5), 4 sqrt(2/5)");
  o.require(gap <= 1e-9, "continuity gap " + fmt("%.2e", gap));
  const double fp = std::abs(curve(kFixed) - kFixed);
  o.require(fp <= 1e-9, "fixed point off by " + fmt("%.2e", fp));
  const auto p = evaluate_strategy(catalog::boundary_fixed_point_strategy());
  const double sim = std::max(std::abs(p[0] - kFixed), std::abs(p[1] - kFixed));
  o.require(sim <= 1e-9, "simulated fixed point off by " + fmt("%.2e", sim));
  o.info("rows " + fmt("%.1e", row_err) + ", gaps " + fmt("%.1e", gap) + ", fixed point " +
         fmt("%.1e", std::max(fp, sim)));
  return o;
}

// --- 2 ----------------------------------------------------------------------------

Outcome envelope() {
  Outcome o;
  const std::vector<Eigen::Vector2d> points = {{0.0, kS1Max}};
  const std::vector<PiecewiseCurve> curves = {case_i_curve(), case_iii_curve()};
  const auto env = upper_envelope(points, curves, 10000);
  const auto opt = optimal_boundary_curve();
  double gap = 0.0;
  for (double x : s1_grid(10000)) gap = std::max(gap, std::abs(env(x) - opt(x)));
  o.require(gap <= 1e-6, "sup-norm " + fmt("%.2e", gap));
  o.info("sup-norm " + fmt("%.2e", gap));
  return o;
}

// --- 3 ----------------------------------------------------------------------------

Outcome tangents() {
  Outcome o;
  const auto t = tangent_from_point(0.0, kS1Max, case_iii_curve());
  o.require(std::abs(t.slope - (1 - std::sqrt(7.0) / 2)) <= 1e-9, "tangent slope " + fmt("%.12f", t.slope));
  o.require(std::abs(t.touch_x - kR1) <= 1e-9, "tangent touch " + fmt("%.12f", t.touch_x));
  const auto c = common_tangent(case_iii_curve(), case_i_curve());
  o.require(std::abs(c.slope + 0.5) <= 1e-9, "common slope " + fmt("%.12f", c.slope));
  o.require(std::abs(c.intercept - std::sqrt(10.0)) <= 1e-9, "common intercept " + fmt("%.12f", c.intercept));
  o.require(std::abs(c.touch_a - kR2) <= 1e-9 && std::abs(c.touch_b - kR3) <= 1e-9,
            "touch points " + fmt("%.12f, %.12f", c.touch_a, c.touch_b));
  o.info("slope " + fmt("%.10f", t.slope) + " touch " + fmt("%.10f", t.touch_x) + "; S2 = " +
         fmt("%.10f %+.10f S1", c.intercept, c.slope) + " touching " + fmt("(%.10f, %.10f)", c.touch_a, c.touch_b));
  return o;
}

// --- 4 ----------------------------------------------------------------------------

Outcome catalog_vs_simulation() {
  Outcome o;
  std::mt19937_64 rng(g_seed + 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int checked = 0;
  auto compare = [&](const TradeoffPoint& p, std::initializer_list<double> expected) {
    Eigen::Index k = 0;
    for (double e : expected) worst = std::max(worst, std::abs(p[k++] - e));
    ++checked;
  };
  for (int i = 0; i < 100; ++i) {
    const double phi = u(rng) * pi / 2;
    compare(evaluate_branch(catalog::maxent_case_i(phi)),
            {2 * sqrt2 * std::cos(phi), sqrt2 * (std::cos(phi) + std::sin(phi))});
    compare(evaluate_branch(catalog::maxent_case_ii()), {0.0, 2 * sqrt2});
    const double theta = u(rng) * pi / 2;
    compare(evaluate_branch(catalog::maxent_case_iii(theta)),
            {2 * std::sin(theta), std::cos(theta) + 2 * std::sin(theta)});
    const double ent = (0.01 + 0.99 * u(rng)) * pi / 4;
    const double t = std::sin(2 * ent);
    const double mu = u(rng) * pi / 2;
    compare(evaluate_branch(catalog::partial_case_i(ent, mu)), {2 * (std::cos(mu) * t + std::sin(mu)), 2 * std::sin(mu)});
    compare(evaluate_branch(catalog::partial_case_ii(ent)), {2 * std::cos(2 * ent), 2 * std::sqrt(1 + t * t)});
    const double th = u(rng) * pi;
    compare(evaluate_branch(catalog::partial_case_iii(ent, th)),
            {2 * std::sin(th + 2 * ent), std::sin(th) + 2 * std::cos(th) * t});
    const double tp = u(rng) * pi / 2;
    const auto triple = catalog::triple_strategy(tp, u(rng), u(rng), {1.0, 0.0, 0.0});
    const double c = sqrt2 * (std::cos(tp) + std::sin(tp));
    compare(evaluate_strategy(triple), {2 * sqrt2 * std::cos(tp), c, c});
  }
  compare(evaluate_branch(catalog::tsirelson_branch()), {2 * sqrt2, sqrt2});
  o.require(worst <= 1e-10, "max deviation " + fmt("%.2e", worst));
  o.info(std::to_string(checked) + " points, max deviation " + fmt("%.2e", worst));
  return o;
}

// --- 5 ----------------------------------------------------------------------------

Outcome appendix_c() {
  Outcome o;
  const auto s = catalog::no_unitary_equalized();
  const auto p = evaluate_strategy(s);
  const double expected = 6 * std::sqrt(10.0) / (5 * sqrt2 + std::sqrt(5.0));
  o.require(std::abs(p[0] - expected) <= 1e-9 && std::abs(p[1] - expected) <= 1e-9,
            "S = " + fmt("(%.12f, %.12f)", p[0], p[1]));
  const auto& second = s.branches().at(1).branch;
  const auto after = apply_instrument(make_state(second.initial_state), second.instruments[0]);
  const double h = horodecki_max_chsh(after);
  o.require(std::abs(h - std::sqrt(5.0)) <= 1e-12, "Horodecki " + fmt("%.15f", h));
  o.info("S1 = S2 = " + fmt("%.10f", p[0]) + ", Horodecki after lambda=2 instrument " + fmt("%.12f", h));
  return o;
}

// --- 6 ----------------------------------------------------------------------------

Outcome independent_parties() {
  Outcome o;
  const auto p = evaluate_strategy(catalog::independent_equalized());
  o.require(std::abs(p[0] - 2.046) <= 5e-3 && std::abs(p[1] - 2.046) <= 5e-3,
            "bisection S = " + fmt("(%.6f, %.6f)", p[0], p[1]));
  const auto r = maximize_equal_violations(independence_space(), 2, g_seed);
  o.require(r.objective >= 2.045, "optimizer " + fmt("%.6f", r.objective));
  o.info("equalized " + fmt("(%.6f, %.6f)", p[0], p[1]) + ", optimizer min S " + fmt("%.6f", r.objective));
  return o;
}

// --- 7 ----------------------------------------------------------------------------

Outcome triple() {
  Outcome o;
  const auto p = evaluate_strategy(catalog::triple_equalized());
  for (Eigen::Index k = 0; k < 3; ++k) {
    o.require(std::abs(p[k] - 2.00227) <= 1e-4, "S" + std::to_string(k + 1) + " = " + fmt("%.6f", p[k]));
  }
  // Projectors only; the budget of 10^5 evaluations applies to each restart.
  auto space = staircase_space(3);
  space.unitaries = false;
  SearchOptions options;
  options.max_evaluations = 100000;
  const auto start = std::chrono::steady_clock::now();
  const auto r = maximize_equal_violations(space, 3, g_seed, options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(r.objective >= 2.0022, "optimizer " + fmt("%.6f", r.objective));
  o.require(seconds <= 300, "optimizer took " + fmt("%.0f s", seconds));
  o.info("closed-form mixture " + fmt("%.6f", p.min()) + ", optimizer min S " + fmt("%.6f", r.objective) + " (" +
         std::to_string(options.restarts) + " restarts x <= 1e5 evaluations, " + std::to_string(r.evaluations) +
         " total, " + fmt("%.0f s", seconds) + ")");
  return o;
}

// --- 8 ----------------------------------------------------------------------------

Outcome noise() {
  Outcome o;
  const double v = visibility_threshold(catalog::boundary_fixed_point_strategy(), 2.0);
  const double vb = visibility_threshold_bisection(catalog::boundary_fixed_point_strategy(), 2.0);
  const double single = visibility_threshold(SequentialStrategy::single(catalog::tsirelson_single()), 2.0);
  o.require(std::abs(v - 0.949) <= 1e-3, "v* = " + fmt("%.6f", v));
  o.require(std::abs(vb - v) <= 1e-6, "bisection " + fmt("%.6f", vb));
  o.require(std::abs(single - 1 / sqrt2) <= 1e-9, "single test " + fmt("%.12f", single));
  o.info("v* = " + fmt("%.6f", v) + " (bisection " + fmt("%.6f", vb) + "), single test " + fmt("%.10f", single));
  return o;
}

// --- 9 ----------------------------------------------------------------------------

Outcome partial_entanglement() {
  Outcome o;
  const auto opt = optimal_boundary_curve();
  const double h = partial_ii_threshold();
  const double h_ref = 8 * sqrt2 * (7 * std::sqrt(7.0) - 2) / 113;
  o.require(std::abs(h - h_ref) <= 1e-9, "h = " + fmt("%.12f", h));
  const double meet = std::abs(partial_ii_locus_curve()(h) - opt(h));
  o.require(meet <= 1e-9, "locus misses boundary at h by " + fmt("%.2e", meet));
  const double phi = type_iii_optimal_ent_angle(1.99);
  o.require(std::abs(phi - 0.686) <= 2e-3, "phi(1.99) = " + fmt("%.6f", phi));
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 130; ++i) {
    const double s1 = 1.85 + 0.001 * i;
    margin = std::min(margin, partial_iii_tradeoff(type_iii_optimal_ent_angle(s1), s1) - opt(s1));
  }
  o.require(margin > 0.0, "type (iii) below boundary, margin " + fmt("%.2e", margin));

  const auto r = maximize_s2_at_s1(partial_mixed_space(2 * pi / 9), 2.05, 1e-6, g_seed);
  const double gap = r.best_point[1] - opt(r.best_point[0]);
  o.require(r.best_point.min() > 2.0, "optimizer point not a double violation");
  o.require(gap >= 1e-3, "optimizer margin " + fmt("%.2e", gap));
  o.info("h = " + fmt("%.12f", h) + ", phi(1.99) = " + fmt("%.6f", phi) + ", type (iii) margin on [1.85, 1.98] " +
         fmt("%.6f", margin) + ", optimizer point " + fmt("(%.6f, %.6f)", r.best_point[0], r.best_point[1]) +
         " margin " + fmt("%.4f", gap));
  return o;
}

// --- 10 ---------------------------------------------------------------------------

// Type (ii) point mixed with the type (i) point where the line through it
// touches the type (i) curve, weighted so that S1 = S2.
TradeoffPoint tangent_mixture(double ent) {
  const auto ii = catalog::partial_case_ii(ent);
  const auto pii = evaluate_branch(ii);
  const auto t = tangent_from_point(pii[0], pii[1], partial_i_curve(ent));
  const double s = std::sin(2 * ent);
  const double amp = 2 * std::sqrt(1 + s * s);
  // Upper branch of S1 = amp sin(mu + atan s).
  const double mu = pi - std::asin(std::min(1.0, t.touch_x / amp)) - std::atan(s);
  const auto i = catalog::partial_case_i(ent, std::min(mu, pi / 2));
  return evaluate_strategy(catalog::mix(ii, i, catalog::equalizing_weight(ii, i)));
}

Outcome optimality() {
  Outcome o;
  const auto opt = optimal_boundary_curve();
  const auto start = std::chrono::steady_clock::now();
  const auto rows = sweep_boundary(two_pair_space(), 25, g_seed);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double excess = -std::numeric_limits<double>::infinity();
  double shortfall = 0.0;
  for (const auto& row : rows) {
    const double bound = opt(std::min(row.s1_achieved, kS1Max));
    excess = std::max(excess, row.s2_raw - bound);
    shortfall = std::max(shortfall, bound - row.s2_raw);
  }
  o.require(rows.size() == 25, "sweep returned " + std::to_string(rows.size()) + " of 25 rows");
  o.require(excess <= 1e-6, "sweep exceeds boundary by " + fmt("%.2e", excess));
  o.require(seconds <= 600, "sweep took " + fmt("%.0f s", seconds));

  double worst = std::numeric_limits<double>::infinity();
  for (double ent : {0.1, 0.2, 0.3, 0.5, pi / 4}) {
    const auto p = tangent_mixture(ent);
    worst = std::min(worst, p.min());
    o.require(p.min() > 2.0, "tangent mixture at ent " + fmt("%.3f", ent) + " gives " + fmt("%.6f", p.min()));
  }
  o.info("sweep max excess " + fmt("%.2e", excess) + ", max shortfall " + fmt("%.2e", shortfall) + " (" +
         fmt("%.0f s", seconds) + "); smallest tangent-mixture min S " + fmt("%.6f", worst));
  return o;
}

// --- 11 ---------------------------------------------------------------------------

SearchSpace random_space(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(0, 2);
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_int_distribution<int> pairs(2, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SearchSpace space;
  switch (rank(rng)) {
    case 0:
      space.state = MaximallyEntangled{};
      break;
    case 1:
      space.state = PartiallyEntangled{u(rng) * pi / 4};
      break;
    default:
      space.state = Isotropic{u(rng)};
  }
  const int n = pairs(rng);
  const int m = count(rng);
  for (int j = 0; j < m; ++j) {
    BranchTemplate t;
    for (int k = 0; k + 1 < n; ++k) {
      t.parties.push_back({static_cast<RankClass>(rank(rng)), static_cast<RankClass>(rank(rng))});
    }
    space.branches.push_back(t);
  }
  space.general_axes = true;
  return space;
}

InstrumentSetting relabeled_outcomes(const InstrumentSetting& s) {
  switch (s.rank) {
    case RankClass::basis:
      return {RankClass::basis, s.angle + pi, {s.unitaries[1], s.unitaries[0]}};
    case RankClass::trivial_zero:
      return {RankClass::trivial_one, 0.0, {Rotation{}, s.unitaries[0]}};
    case RankClass::trivial_one:
      return {RankClass::trivial_zero, 0.0, {s.unitaries[1], Rotation{}}};
  }
  return s;
}

Outcome invariants() {
  Outcome o;
  std::mt19937_64 rng(g_seed + 11);
  int failures = 0;
  double worst_relabel = 0.0;
  auto fail = [&](const std::string& what) {
    if (failures++ < 3) o.require(false, what);
  };
  constexpr int kTrials = 10000;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto space = random_space(rng);
    const auto strategy = space.decode(restart_start_point(space, g_seed, trial));
    Eigen::VectorXd mixed = Eigen::VectorXd::Zero(strategy.parties());
    for (const auto& wb : strategy.branches()) {
      const auto& br = wb.branch;
      auto state = make_state(br.initial_state);
      const std::array<Qubit, 2> a = {br.a_observables[0].matrix(), br.a_observables[1].matrix()};
      Eigen::VectorXd s(br.parties());
      for (int k = 0; k < br.parties(); ++k) {
        if (!state_violation(state.rho()).empty()) fail("invalid state in trial " + std::to_string(trial));
        std::array<Qubit, 2> b;
        // Horodecki's bound covers spin observables only; ±𝟙 adds marginals.
        bool spin = true;
        if (k + 1 < br.parties()) {
          const auto& inst = br.instruments[static_cast<std::size_t>(k)];
          if (kraus_completeness_defect(inst) > 1e-12) fail("Kraus defect in trial " + std::to_string(trial));
          b = {inst.observable(0), inst.observable(1)};
          spin = inst.setting(0).rank == RankClass::basis && inst.setting(1).rank == RankClass::basis;
        } else {
          b = {br.final_observables[0].matrix(), br.final_observables[1].matrix()};
        }
        s(k) = chsh_value(state, a, b);
        if (std::abs(s(k)) > kTsirelson + 1e-12 || (spin && std::abs(s(k)) > horodecki_max_chsh(state) + 1e-9)) {
          fail("cap exceeded in trial " + std::to_string(trial));
        }
        // (a) swap B's settings and negate A1; (b) negate B0, swap and negate A.
        const double ra = chsh_value(state, {a[0], Qubit(-a[1])}, {b[1], b[0]});
        const double rb = chsh_value(state, {Qubit(-a[1]), Qubit(-a[0])}, {Qubit(-b[0]), b[1]});
        worst_relabel = std::max({worst_relabel, std::abs(ra - s(k)), std::abs(rb - s(k))});
        if (k + 1 < br.parties()) {
          const auto& inst = br.instruments[static_cast<std::size_t>(k)];
          const ProjectiveInstrument flipped(relabeled_outcomes(inst.setting(0)), relabeled_outcomes(inst.setting(1)));
          const auto next = apply_instrument(state, inst);
          const double d = (apply_instrument(state, flipped).rho() - next.rho()).cwiseAbs().maxCoeff();
          worst_relabel = std::max(worst_relabel, d);
          state = next;
        }
      }
      const auto direct = evaluate_branch(br).s();
      if ((direct - s).cwiseAbs().maxCoeff() > 1e-12) fail("branch evaluation mismatch in trial " + std::to_string(trial));
      mixed += wb.weight * direct;
    }
    if ((evaluate_strategy(strategy).s() - mixed).cwiseAbs().maxCoeff() > 1e-12) {
      fail("mixing linearity in trial " + std::to_string(trial));
    }
  }
  if (worst_relabel > 1e-12) fail("relabeling changes values by " + fmt("%.2e", worst_relabel));
  o.info(std::to_string(kTrials) + " strategies, " + std::to_string(failures) + " failures, relabeling deviation " +
         fmt("%.1e", worst_relabel));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      g_seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]... [--seed S]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "boundary exactness", boundary_exactness},
      {2, "envelope re-derivation", envelope},
      {3, "tangent constants", tangents},
      {4, "catalog vs simulation", catalog_vs_simulation},
      {5, "no-unitary mixture", appendix_c},
      {6, "independent parties", independent_parties},
      {7, "triple violation", triple},
      {8, "noise threshold", noise},
      {9, "partial entanglement", partial_entanglement},
      {10, "optimality verification", optimality},
      {11, "universal invariants", invariants},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.contains(c.id)) continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    all = all && out.pass;
    std::printf("%s  [%2d] %-24s %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
