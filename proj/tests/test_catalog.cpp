#include "seqbell/catalog.hpp"

#include "seqbell/analysis.hpp"
#include "seqbell/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace {

using namespace seqbell;
using std::numbers::pi;
using std::numbers::sqrt2;

void expect_point(const TradeoffPoint& p, std::initializer_list<double> expected, double tol) {
  ASSERT_EQ(p.size(), static_cast<Eigen::Index>(expected.size()));
  Eigen::Index k = 0;
  for (double e : expected) EXPECT_NEAR(p[k++], e, tol) << "component " << k;
}

TEST(SymbolicAngle, Values) {
  EXPECT_DOUBLE_EQ(catalog::constants::indep_b0_angle.value(), 2.0 / 17.0);
  EXPECT_DOUBLE_EQ(catalog::constants::indep_u_y1.value(), -2.0 * pi / 27.0);
  EXPECT_DOUBLE_EQ(catalog::constants::indep_c0_angle.value(), -2.0 / 3.0 * pi / std::numbers::e);
  EXPECT_DOUBLE_EQ(catalog::constants::triple_phi_tilde.value(), 16.0 * pi / 33.0);
}

TEST(Catalog, CaseIAtPiOverSix) {
  expect_point(evaluate_branch(catalog::maxent_case_i(pi / 6)),
               {std::sqrt(6.0), sqrt2 * (std::sqrt(3.0) + 1.0) / 2.0}, 1e-12);
}

TEST(Catalog, CaseIIReachesTsirelsonOnSecondPair) {
  expect_point(evaluate_branch(catalog::maxent_case_ii()), {0.0, 2 * sqrt2}, 1e-12);
}

TEST(Catalog, ClosedFormsOverRandomParameters) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double phi = u(rng) * pi / 2;
    expect_point(evaluate_branch(catalog::maxent_case_i(phi)),
                 {2 * sqrt2 * std::cos(phi), sqrt2 * (std::cos(phi) + std::sin(phi))}, 1e-10);
    const double theta = u(rng) * pi / 2;
    expect_point(evaluate_branch(catalog::maxent_case_iii(theta)),
                 {2 * std::sin(theta), std::cos(theta) + 2 * std::sin(theta)}, 1e-10);
    const double ent = (0.01 + 0.99 * u(rng)) * pi / 4;
    const double t = std::sin(2 * ent);
    const double mu = u(rng) * pi / 2;
    expect_point(evaluate_branch(catalog::partial_case_i(ent, mu)),
                 {2 * (std::cos(mu) * t + std::sin(mu)), 2 * std::sin(mu)}, 1e-10);
    expect_point(evaluate_branch(catalog::partial_case_ii(ent)),
                 {2 * std::cos(2 * ent), 2 * std::sqrt(1 + t * t)}, 1e-10);
    const double th = u(rng) * pi;
    expect_point(evaluate_branch(catalog::partial_case_iii(ent, th)),
                 {2 * std::sin(th + 2 * ent), std::sin(th) + 2 * std::cos(th) * t}, 1e-10);
  }
}

TEST(Catalog, ParameterRangesAreChecked) {
  EXPECT_THROW(catalog::maxent_case_i(-0.1), std::invalid_argument);
  EXPECT_THROW(catalog::maxent_case_iii(2.0), std::invalid_argument);
  EXPECT_THROW(catalog::partial_case_i(1.0, 0.2), std::invalid_argument);
  EXPECT_THROW(catalog::independent_strategy(1.5), std::invalid_argument);
}

TEST(Catalog, NoUnitaryMixture) {
  const auto p = evaluate_strategy(catalog::no_unitary_equalized());
  const double expected = 6 * std::sqrt(10.0) / (5 * sqrt2 + std::sqrt(5.0));
  EXPECT_NEAR(p[0], expected, 1e-9);
  EXPECT_NEAR(p[1], expected, 1e-9);
}

TEST(Catalog, NoUnitaryBranchLeavesHorodeckiSqrtFive) {
  const auto horodecki = catalog::maxent_case_iii(std::atan2(2.0, 1.0));
  const auto after = apply_instrument(make_state(MaximallyEntangled{}), horodecki.instruments[0]);
  EXPECT_NEAR(horodecki_max_chsh(after), std::sqrt(5.0), 1e-12);
  expect_point(evaluate_branch(horodecki), {4 / std::sqrt(5.0), std::sqrt(5.0)}, 1e-12);
}

TEST(Catalog, IndependentStrategyBranches) {
  const auto s = catalog::independent_strategy(0.5);
  expect_point(evaluate_branch(s.branches()[0].branch), {2.30188, 1.78659}, 1e-5);
  expect_point(evaluate_branch(s.branches()[1].branch), {1.90316, 2.18994}, 1e-5);
  // A and C are the same in both branches.
  EXPECT_DOUBLE_EQ(s.branches()[0].branch.a_observables[1].angle(), s.branches()[1].branch.a_observables[1].angle());
  EXPECT_DOUBLE_EQ(s.branches()[0].branch.final_observables[0].angle(),
                   s.branches()[1].branch.final_observables[0].angle());
}

TEST(Catalog, IndependentEqualized) {
  const auto s = catalog::independent_equalized();
  const auto p = evaluate_strategy(s);
  EXPECT_NEAR(p[0], p[1], 1e-10);
  EXPECT_NEAR(p[0], 2.046, 5e-3);
  EXPECT_NEAR(s.branches()[0].weight, 0.357549, 1e-6);
}

TEST(Catalog, TripleBranchOneClosedForm) {
  const double phi = catalog::constants::triple_phi.value();
  const auto s = catalog::triple_strategy(phi, 1.0, 1.4, {1.0, 0.0, 0.0});
  const double c = sqrt2 * (std::cos(phi) + std::sin(phi));
  expect_point(evaluate_strategy(s), {2 * sqrt2 * std::cos(phi), c, c}, 1e-12);
}

TEST(Catalog, TripleAtZeroAngle) {
  // Closed form gives (2√2, √2, √2) for the first branch at φ = 0.
  const auto s = catalog::triple_strategy(0.0, 1.0, 1.4, {1.0, 0.0, 0.0});
  expect_point(evaluate_strategy(s), {2 * sqrt2, sqrt2, sqrt2}, 1e-12);
}

TEST(Catalog, TripleEqualized) {
  const auto s = catalog::triple_equalized();
  const auto p = evaluate_strategy(s);
  EXPECT_NEAR(p[0], 2.00227, 1e-4);
  EXPECT_NEAR(p[1], p[0], 1e-10);
  EXPECT_NEAR(p[2], p[0], 1e-10);
  const std::array<double, 3> expected{0.085716, 0.019054, 0.895230};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s.branches()[i].weight, expected[i], 1e-6);
}

TEST(Catalog, BoundaryFixedPoint) {
  const auto p = evaluate_strategy(catalog::boundary_fixed_point_strategy());
  EXPECT_NEAR(p[0], 2 * std::sqrt(10.0) / 3, 1e-9);
  EXPECT_NEAR(p[1], 2 * std::sqrt(10.0) / 3, 1e-9);
}

TEST(Catalog, EqualizingWeightNeedsSignChange) {
  const auto b = catalog::maxent_case_i(0.1);
  EXPECT_THROW(catalog::equalizing_weight(b, b), NotFound);
}

TEST(Catalog, LookupById) {
  for (const auto& e : catalog::entries()) {
    EXPECT_NO_THROW(catalog::lookup(e.id)) << e.id;
  }
  const auto p = evaluate_strategy(catalog::lookup("maxent.case_i", {{"phi", pi / 6}}));
  EXPECT_NEAR(p[0], std::sqrt(6.0), 1e-12);
  EXPECT_THROW(catalog::lookup("no.such.entry"), std::invalid_argument);
  EXPECT_THROW(catalog::lookup("maxent.case_i", {{"theta", 1.0}}), std::invalid_argument);
  const auto q = evaluate_strategy(catalog::lookup("independent", {{"q", 1.0}}));
  EXPECT_NEAR(q[0], 2.30188, 1e-5);
}

TEST(Catalog, TsirelsonEntries) {
  const auto two = evaluate_strategy(catalog::lookup("tsirelson"));
  EXPECT_NEAR(two[0], 2 * sqrt2, 1e-12);
  EXPECT_NEAR(two[1], sqrt2, 1e-12);
  const auto one = evaluate_strategy(catalog::lookup("tsirelson.single"));
  ASSERT_EQ(one.size(), 1);
  EXPECT_NEAR(one[0], 2 * sqrt2, 1e-12);
}

}  // namespace
