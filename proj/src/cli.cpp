#include "seqbell/cli.hpp"

#include "seqbell/analysis.hpp"
#include "seqbell/boundary.hpp"
#include "seqbell/csv.hpp"
#include "seqbell/errors.hpp"
#include "seqbell/optimizer.hpp"
#include "seqbell/strategy_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>

namespace seqbell::cli {
namespace {

using nlohmann::json;
using std::numbers::pi;
namespace fs = std::filesystem;

class UnknownName : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kNotFound;
  } catch (const UnknownName& e) {
    err << "error: " << e.what() << '\n';
    return kNotFound;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kSchemaError;
  } catch (const NotFound& e) {
    err << "not found: " << e.what() << '\n';
    return kNotFound;
  } catch (const std::invalid_argument& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const std::domain_error& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  }
}

SequentialStrategy load(const StrategySource& source) {
  if (source.file) return load_strategy(*source.file);
  const auto& all = catalog::entries();
  const bool known = std::any_of(all.begin(), all.end(), [&](const auto& e) { return e.id == source.catalog_id; });
  if (!known) throw UnknownName("unknown catalog strategy '" + source.catalog_id + "'");
  return catalog::lookup(source.catalog_id, source.params);
}

std::string tuple6(const TradeoffPoint& p) {
  std::string s = "(";
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (k > 0) s += ", ";
    s += csv::fixed6(p[k]);
  }
  return s + ")";
}

std::vector<double> to_vector(const TradeoffPoint& p) { return {p.s().data(), p.s().data() + p.size()}; }

std::ofstream open_output(const Options& options, const std::string& name) {
  fs::create_directories(options.out);
  const auto path = options.out / name;
  std::ofstream f(path);
  if (!f) throw std::ios_base::failure("cannot write " + path.string());
  return f;
}

SearchSpace make_space(const SpaceRequest& req) {
  SearchSpace space;
  if (req.kind == "two_pair") {
    space = two_pair_space();
  } else if (req.kind == "partial") {
    space = partial_mixed_space(req.ent_angle);
  } else if (req.kind == "independence") {
    space = independence_space();
  } else if (req.kind == "staircase") {
    space = staircase_space(req.n);
  } else {
    throw UnknownName("unknown search space '" + req.kind + "'");
  }
  space.unitaries = !req.bare;
  return space;
}

SearchOptions search_options(const SpaceRequest& req, const Options& options) {
  SearchOptions o;
  o.restarts = req.restarts;
  o.max_evaluations = req.max_evaluations;
  o.threads = options.threads;
  return o;
}

// --- reproduction checks --------------------------------------------------------

struct Check {
  std::string name;
  double value;
  std::string expectation;
  bool pass;
};

class Report {
 public:
  void near(const std::string& name, double value, double expected, double tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6f +/- %.1e", expected, tol);
    add(name, value, buf, std::abs(value - expected) <= tol);
  }
  void at_least(const std::string& name, double value, double bound) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ">= %.6g", bound);
    add(name, value, buf, value >= bound);
  }
  void at_most(const std::string& name, double value, double bound) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "<= %.1e", bound);
    add(name, value, buf, value <= bound);
  }
  void add(const std::string& name, double value, const std::string& expectation, bool pass) {
    checks_.push_back({name, value, expectation, pass});
  }
  void note(std::string line) {
    if (std::find(notes_.begin(), notes_.end(), line) == notes_.end()) notes_.push_back(std::move(line));
  }

  bool all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
  }

  void print(std::ostream& out, Format format) const {
    if (format == Format::json) {
      json checks = json::array();
      for (const auto& c : checks_) {
        checks.push_back({{"name", c.name}, {"value", c.value}, {"expected", c.expectation}, {"pass", c.pass}});
      }
      out << json{{"checks", checks}, {"files", notes_}, {"pass", all_pass()}}.dump(2) << '\n';
      return;
    }
    for (const auto& n : notes_) out << "wrote " << n << '\n';
    for (const auto& c : checks_) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s  %-40s %.6f  (%s)", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value,
                    c.expectation.c_str());
      out << buf << '\n';
    }
  }

 private:
  std::vector<Check> checks_;
  std::vector<std::string> notes_;
};

void write_curve(const Options& options, const std::string& name, const PiecewiseCurve& curve, int grid,
                 Report& report) {
  auto f = open_output(options, name);
  write_curve_csv(f, curve, grid);
  report.note((options.out / name).string());
}

double envelope_gap(int grid) {
  const std::vector<Eigen::Vector2d> points = {{0.0, kS1Max}};
  const std::vector<PiecewiseCurve> curves = {case_i_curve(), case_iii_curve()};
  const auto env = upper_envelope(points, curves, grid);
  const auto opt = optimal_boundary_curve();
  double gap = 0.0;
  for (double x : s1_grid(grid)) gap = std::max(gap, std::abs(env(x) - opt(x)));
  return gap;
}

void reproduce_boundary(const Options& options, Report& report) {
  const int grid = options.grid.value_or(10000);
  write_curve(options, "boundary.csv", optimal_boundary_curve(), grid, report);
  report.at_most("boundary.envelope_sup_gap", envelope_gap(grid), 1e-6);
  const auto p = evaluate_strategy(catalog::boundary_fixed_point_strategy());
  const double fixed = 2.0 * std::sqrt(10.0) / 3.0;
  report.near("boundary.fixed_point.S1", p[0], fixed, 1e-9);
  report.near("boundary.fixed_point.S2", p[1], fixed, 1e-9);
}

void reproduce_fig2(const Options& options, Report& report) {
  const int grid = options.grid.value_or(10000);
  const auto opt = optimal_boundary_curve();
  const auto ci = case_i_curve();
  const auto ciii = case_iii_curve();
  write_curve(options, "case_i.csv", ci, grid, report);
  write_curve(options, "case_iii.csv", ciii, grid, report);
  write_curve(options, "boundary.csv", opt, grid, report);
  double excess = 0.0;
  for (double x : s1_grid(grid)) {
    excess = std::max(excess, ci(x) - opt(x));
    if (ciii.contains(x)) excess = std::max(excess, ciii(x) - opt(x));
  }
  report.at_most("fig2.curves_below_boundary", excess, 1e-12);
  const auto t = tangent_from_point(0.0, kS1Max, ciii);
  report.near("fig2.tangent_slope", t.slope, 1.0 - std::sqrt(7.0) / 2.0, 1e-9);
  report.near("fig2.tangent_touch", t.touch_x, std::sqrt(3.5), 1e-9);
  const auto c = common_tangent(ciii, ci);
  report.near("fig2.common_tangent_intercept", c.intercept, std::sqrt(10.0), 1e-9);
  report.near("fig2.common_tangent_slope", c.slope, -0.5, 1e-9);
}

void reproduce_insets(const Options& options, Report& report) {
  const int grid = options.grid.value_or(10000);
  const double ent = 2.0 * pi / 9.0;
  write_curve(options, "partial_i.csv", partial_i_curve(ent), grid, report);
  write_curve(options, "partial_ii_locus.csv", partial_ii_locus_curve(), grid, report);
  {
    auto f = open_output(options, "partial_iii.csv");
    f << "s1,s2,provenance\n";
    for (double x : s1_grid(grid)) {
      try {
        const double y = partial_iii_tradeoff(ent, x);
        f << csv::fixed12(x) << ',' << csv::fixed12(y) << ",partial_iii\n";
      } catch (const OutOfDomain&) {
      }
    }
    report.note((options.out / "partial_iii.csv").string());
  }

  const double h = partial_ii_threshold();
  report.near("insets.threshold_h", h, 8.0 * std::sqrt(2.0) * (7.0 * std::sqrt(7.0) - 2.0) / 113.0, 1e-9);
  report.at_most("insets.locus_meets_boundary_at_h",
                 std::abs(partial_ii_locus_curve()(h) - optimal_boundary_curve()(h)), 1e-9);
  report.near("insets.type_iii_angle_at_1.99", type_iii_optimal_ent_angle(1.99), 0.686, 2e-3);
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 13; ++i) {
    const double s1 = 1.85 + 0.01 * i;
    margin = std::min(margin, partial_iii_tradeoff(type_iii_optimal_ent_angle(s1), s1) -
                                  optimal_boundary_curve()(s1));
  }
  report.add("insets.type_iii_beats_boundary_1.85_1.98", margin, "> 0", margin > 0.0);

  const auto r = maximize_s2_at_s1(partial_mixed_space(ent), 2.05, options.tol.value_or(1e-6), options.seed);
  const double gap = r.best_point[1] - optimal_boundary_curve()(r.best_point[0]);
  report.at_least("insets.optimizer_margin", gap, 1e-3);
  report.at_least("insets.optimizer_min_S", r.best_point.min(), 2.0 + 1e-12);
}

void reproduce_triple(const Options&, Report& report) {
  const auto p = evaluate_strategy(catalog::triple_equalized());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    report.near("triple.S" + std::to_string(k + 1), p[k], 2.00227, 1e-4);
  }
}

void reproduce_independent(const Options&, Report& report) {
  const auto p = evaluate_strategy(catalog::independent_equalized());
  report.near("independent.S1", p[0], 2.046, 5e-3);
  report.near("independent.S2", p[1], 2.046, 5e-3);
}

void reproduce_noise(const Options&, Report& report) {
  report.near("noise.fixed_point_visibility",
              visibility_threshold(catalog::boundary_fixed_point_strategy(), 2.0), 0.949, 1e-3);
  report.near("noise.single_test_visibility",
              visibility_threshold(SequentialStrategy::single(catalog::tsirelson_single()), 2.0),
              1.0 / std::numbers::sqrt2, 1e-9);
}

void reproduce_appendix_b(const Options& options, Report& report) {
  const double ent = 2.0 * pi / 9.0;
  const auto space = partial_mixed_space(ent);
  const auto rows = sweep_boundary(space, options.grid.value_or(25), options.seed, options.tol.value_or(1e-6));
  auto f = open_output(options, "appendixB_sweep.csv");
  f << "s1_target,s1_achieved,s2_best,template,seed\n";
  const auto opt = optimal_boundary_curve();
  double best_margin = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    f << csv::fixed12(row.s1_target) << ',' << csv::fixed12(row.s1_achieved) << ',' << csv::fixed12(row.s2_best)
      << ',' << row.label << ',' << row.seed << '\n';
    if (std::min(row.s1_achieved, row.s2_best) > 2.0) {
      best_margin = std::max(best_margin, row.s2_best - opt(row.s1_achieved));
    }
  }
  report.note((options.out / "appendixB_sweep.csv").string());
  report.at_least("appendixB.double_violation_margin", best_margin, 1e-3);
}

using Reproducer = void (*)(const Options&, Report&);

const std::vector<std::pair<std::string, Reproducer>>& reproducers() {
  static const std::vector<std::pair<std::string, Reproducer>> table = {
      {"boundary", reproduce_boundary}, {"fig2", reproduce_fig2},     {"insets", reproduce_insets},
      {"triple", reproduce_triple},     {"independent", reproduce_independent},
      {"noise", reproduce_noise},       {"appendixB_fig", reproduce_appendix_b},
  };
  return table;
}

}  // namespace

catalog::Params parse_params(const std::vector<std::string>& pairs) {
  catalog::Params out;
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected key=value, got '" + p + "'");
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(p.substr(eq + 1), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number in '" + p + "'");
    }
    if (used != p.size() - eq - 1) throw std::invalid_argument("not a number in '" + p + "'");
    out[p.substr(0, eq)] = value;
  }
  return out;
}

const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : reproducers()) v.push_back(name);
    return v;
  }();
  return names;
}

int run_evaluate(const StrategySource& source, const std::optional<fs::path>& emit_json, const Options& options,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto strategy = load(source);
    if (emit_json) save_strategy(strategy, *emit_json);
    const auto mixed = evaluate_strategy(strategy);

    if (options.format == Format::json) {
      json branches = json::array();
      for (const auto& wb : strategy.branches()) {
        json defects = json::array();
        for (const auto& inst : wb.branch.instruments) defects.push_back(kraus_completeness_defect(inst));
        branches.push_back({{"weight", wb.weight},
                            {"s", to_vector(evaluate_branch(wb.branch))},
                            {"kraus_defects", defects}});
      }
      json verdicts = json::array();
      for (Eigen::Index k = 0; k < mixed.size(); ++k) verdicts.push_back(mixed[k] > 2.0);
      out << json{{"branches", branches}, {"mixture", {{"s", to_vector(mixed)}, {"violations", verdicts}}}}.dump(2)
          << '\n';
      return int{kOk};
    }

    for (std::size_t i = 0; i < strategy.branches().size(); ++i) {
      const auto& wb = strategy.branches()[i];
      out << "branch " << i << "  weight " << csv::fixed6(wb.weight) << "  S = " << tuple6(evaluate_branch(wb.branch))
          << '\n';
      for (std::size_t k = 0; k < wb.branch.instruments.size(); ++k) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1e", kraus_completeness_defect(wb.branch.instruments[k]));
        out << "  B" << k + 1 << " instrument: completeness defect " << buf << '\n';
      }
    }
    out << "mixture  S = " << tuple6(mixed) << '\n';
    for (Eigen::Index k = 0; k < mixed.size(); ++k) {
      out << "S" << k + 1 << " = " << csv::fixed6(mixed[k]) << "  " << (mixed[k] > 2.0 ? "violation" : "no violation")
          << '\n';
    }
    return int{kOk};
  });
}

int run_boundary(const std::string& curve, double ent_angle, const Options& options, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const int grid = options.grid.value_or(10000);
    PiecewiseCurve c = [&] {
      if (curve == "optimal") return optimal_boundary_curve();
      if (curve == "case_i") return case_i_curve();
      if (curve == "case_iii") return case_iii_curve();
      if (curve == "partial_i") return partial_i_curve(ent_angle);
      if (curve == "partial_ii_locus") return partial_ii_locus_curve();
      if (curve == "envelope") {
        const std::vector<Eigen::Vector2d> points = {{0.0, kS1Max}};
        const std::vector<PiecewiseCurve> curves = {case_i_curve(), case_iii_curve()};
        return upper_envelope(points, curves, grid);
      }
      throw UnknownName("unknown curve '" + curve + "'");
    }();
    auto f = open_output(options, curve + ".csv");
    write_curve_csv(f, c, grid);
    out << "wrote " << (options.out / (curve + ".csv")).string() << '\n';
    return int{kOk};
  });
}

int run_sweep(const SpaceRequest& req, const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto space = make_space(req);
    const auto rows = sweep_boundary(space, options.grid.value_or(25), options.seed, options.tol.value_or(1e-6),
                                     search_options(req, options));
    auto f = open_output(options, "sweep.csv");
    f << "s1_target,s1_achieved,s2_best,template,seed\n";
    for (const auto& r : rows) {
      f << csv::fixed12(r.s1_target) << ',' << csv::fixed12(r.s1_achieved) << ',' << csv::fixed12(r.s2_best) << ','
        << r.label << ',' << r.seed << '\n';
    }
    out << "wrote " << (options.out / "sweep.csv").string() << " (" << rows.size() << " rows)\n";
    return int{kOk};
  });
}

int run_optimize(const SpaceRequest& req, const std::string& objective, int n, std::optional<double> s1,
                 const std::optional<fs::path>& emit_json, const Options& options, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const auto space = make_space(req);
    const auto so = search_options(req, options);
    SearchResult r = [&] {
      if (objective == "equal") return maximize_equal_violations(space, n, options.seed, so);
      if (objective == "s2") {
        if (!s1) throw std::invalid_argument("objective s2 needs --s1");
        return maximize_s2_at_s1(space, *s1, options.tol.value_or(1e-6), options.seed, so);
      }
      throw UnknownName("unknown objective '" + objective + "'");
    }();
    if (emit_json) save_strategy(r.best_strategy, *emit_json);
    if (options.format == Format::json) {
      out << json{{"space", space.label()},
                  {"objective", r.objective},
                  {"s", to_vector(r.best_point)},
                  {"evaluations", r.evaluations},
                  {"seed", r.seed}}
                 .dump(2)
          << '\n';
    } else {
      out << "space " << space.label() << '\n'
          << "objective " << csv::fixed6(r.objective) << '\n'
          << "S = " << tuple6(r.best_point) << '\n'
          << "evaluations " << r.evaluations << "  seed " << r.seed << '\n';
    }
    return int{kOk};
  });
}

int run_noise(const StrategySource& source, double target, const Options& options, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const auto strategy = load(source);
    const double v = visibility_threshold(strategy, target);
    const double v_bisect = visibility_threshold_bisection(strategy, target, options.tol.value_or(1e-6));
    const double control = visibility_threshold(SequentialStrategy::single(catalog::tsirelson_single()), target);
    if (options.format == Format::json) {
      out << json{{"visibility", v}, {"visibility_bisection", v_bisect}, {"single_test_control", control}}.dump(2)
          << '\n';
    } else {
      out << "visibility threshold " << csv::fixed6(v) << "  (bisection " << csv::fixed6(v_bisect) << ")\n"
          << "single CHSH test control " << csv::fixed6(control) << '\n';
    }
    return int{kOk};
  });
}

int run_reproduce(const std::vector<std::string>& targets, const Options& options, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const auto& names = reproduce_targets();
    const std::vector<std::string> chosen = targets.empty() ? names : targets;
    for (const auto& t : chosen) {
      if (std::find(names.begin(), names.end(), t) == names.end()) {
        throw UnknownName("unknown reproduction target '" + t + "'");
      }
    }
    Report report;
    for (const auto& [name, fn] : reproducers()) {
      if (std::find(chosen.begin(), chosen.end(), name) != chosen.end()) fn(options, report);
    }
    report.print(out, options.format);
    return report.all_pass() ? int{kOk} : int{kInvariantViolation};
  });
}

}  // namespace seqbell::cli
