#include "seqbell/optimizer.hpp"

#include "seqbell/analysis.hpp"
#include "seqbell/boundary.hpp"
#include "seqbell/errors.hpp"
#include "seqbell/nelder_mead.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace seqbell {
namespace {

using std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const char* rank_letter(RankClass r) {
  switch (r) {
    case RankClass::basis:
      return "B";
    case RankClass::trivial_zero:
      return "T";
    case RankClass::trivial_one:
      return "N";
  }
  return "?";
}

// Builds the branches, drawing each parameter from `next(name, lo, hi)`.
// `name` is a callable so that the hot decoding path never formats strings.
template <typename Next>
std::vector<WeightedBranch> build(const SearchSpace& space, Next&& next) {
  const bool many = space.branches.size() > 1;
  std::vector<WeightedBranch> out;
  out.reserve(space.branches.size());
  for (std::size_t bi = 0; bi < space.branches.size(); ++bi) {
    const std::string prefix = "b" + std::to_string(bi) + ".";
    auto outer = [&](const char* n) {
      return [&, n] { return (space.independence ? std::string() : prefix) + n; };
    };
    DeterministicBranch branch;
    branch.initial_state = space.state;
    const double a0 = next(outer("A.0"), -pi, pi);
    const double a1 = next(outer("A.1"), -pi, pi);
    branch.a_observables = observable_pair(a0, a1);

    const auto& parties = space.branches[bi].parties;
    for (std::size_t k = 0; k < parties.size(); ++k) {
      std::array<InstrumentSetting, 2> settings;
      for (int y = 0; y < 2; ++y) {
        const std::string sp = prefix + "P" + std::to_string(k + 1) + ".y" + std::to_string(y);
        auto& s = settings[static_cast<std::size_t>(y)];
        s.rank = parties[k][static_cast<std::size_t>(y)];
        if (s.rank == RankClass::basis) s.angle = next([&] { return sp + ".angle"; }, -pi, pi);
        for (int b = 0; b < 2; ++b) {
          const bool used = s.rank == RankClass::basis || (s.rank == RankClass::trivial_zero) == (b == 0);
          if (!used || !space.unitaries) continue;
          const std::string up = sp + ".u" + std::to_string(b);
          auto& u = s.unitaries[static_cast<std::size_t>(b)];
          u.angle = next([&] { return up; }, -pi / 2, pi / 2);
          if (space.general_axes) {
            const double polar = next([&] { return up + ".polar"; }, 0.0, pi);
            const double azimuth = next([&] { return up + ".azimuth"; }, -pi, pi);
            u.axis = Eigen::Vector3d(std::sin(polar) * std::cos(azimuth), std::cos(polar),
                                     std::sin(polar) * std::sin(azimuth));
          }
        }
      }
      branch.instruments.emplace_back(settings[0], settings[1]);
    }

    const double f0 = next(outer("F.0"), -pi, pi);
    const double f1 = next(outer("F.1"), -pi, pi);
    branch.final_observables = observable_pair(f0, f1);
    const double w = many ? next([&] { return prefix + "w"; }, 0.0, 1.0) : 1.0;
    out.push_back({w * w, std::move(branch)});
  }
  double total = 0.0;
  for (const auto& wb : out) total += wb.weight;
  for (auto& wb : out) wb.weight = total > 0.0 ? wb.weight / total : 1.0 / static_cast<double>(out.size());
  return out;
}

// Parameter layout computed once per search.
struct Layout {
  std::vector<ParameterSpec> all;
  std::vector<std::size_t> uses;      // all-index consumed at each draw
  std::vector<int> free_position;     // position in x, or -1 if pinned
  std::vector<double> pinned_values;
  std::vector<ParameterSpec> free;

  explicit Layout(const SearchSpace& space) {
    if (space.branches.empty()) throw std::invalid_argument("SearchSpace: no branch templates");
    std::map<std::string, std::size_t> index;
    build(space, [&](auto&& name_fn, double lo, double hi) {
      const std::string name = name_fn();
      auto [it, inserted] = index.emplace(name, all.size());
      if (inserted) all.push_back({name, lo, hi});
      uses.push_back(it->second);
      return 0.5 * (lo + hi);
    });
    for (const auto& [name, value] : space.pinned) {
      if (!index.contains(name)) throw std::invalid_argument("SearchSpace: unknown pinned parameter " + name);
    }
    for (const auto& p : all) {
      const auto it = space.pinned.find(p.name);
      if (it != space.pinned.end()) {
        free_position.push_back(-1);
        pinned_values.push_back(it->second);
      } else {
        free_position.push_back(static_cast<int>(free.size()));
        pinned_values.push_back(0.0);
        free.push_back(p);
      }
    }
    if (free.empty()) throw std::invalid_argument("SearchSpace: every parameter is pinned");
  }

  std::vector<WeightedBranch> decode(const SearchSpace& space, const Eigen::VectorXd& x) const {
    if (x.size() != static_cast<Eigen::Index>(free.size())) {
      throw std::invalid_argument("SearchSpace: parameter vector has the wrong length");
    }
    std::size_t draw = 0;
    return build(space, [&](auto&&, double, double) {
      const std::size_t i = uses[draw++];
      return free_position[i] < 0 ? pinned_values[i] : x(free_position[i]);
    });
  }

  Eigen::VectorXd evaluate(const SearchSpace& space, const Eigen::VectorXd& x) const {
    const auto branches = decode(space, x);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(space.parties());
    for (const auto& wb : branches) s += wb.weight * evaluate_branch(wb.branch).s();
    return s;
  }
};

struct RestartOutcome {
  Eigen::VectorXd x;
  double objective = -std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

using Objective = std::function<double(const Eigen::VectorXd& s)>;

// Nelder–Mead on each objective in turn, re-simplexing from the best vertex
// until a run stops improving.
RestartOutcome run_restart(const SearchSpace& space, const Layout& layout,
                           const std::vector<Objective>& stages, Eigen::VectorXd x,
                           const SearchOptions& options) {
  Eigen::VectorXd range(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    range(i) = layout.free[static_cast<std::size_t>(i)].hi - layout.free[static_cast<std::size_t>(i)].lo;
  }
  RestartOutcome out;
  for (std::size_t stage = 0; stage < stages.size(); ++stage) {
    const auto& objective = stages[stage];
    auto f = [&](const Eigen::VectorXd& p) { return objective(layout.evaluate(space, p)); };
    // Short runs with fresh axis-aligned simplices; a long run lets the
    // simplex collapse onto a subspace and stall well before the optimum.
    const long run_cap = std::max<long>(2000, 200 * x.size());
    double scale = stage == 0 ? 0.2 : 1e-2;
    // Later stages get an equal share of what remains.
    const long stage_end = out.evaluations + (options.max_evaluations - out.evaluations) /
                                                 static_cast<long>(stages.size() - stage);
    double best = f(x);
    ++out.evaluations;
    int flat = 0;
    while (out.evaluations < stage_end) {
      const long left = std::min(run_cap, stage_end - out.evaluations);
      if (left < x.size() + 1) break;
      NelderMeadOptions nm{scale * range, options.diameter_tol, left};
      const auto r = nelder_mead_maximize(f, x, nm);
      out.evaluations += r.evaluations;
      const bool improved = r.value > best + 1e-12;
      if (r.value >= best) {
        x = r.x;
        best = r.value;
      }
      flat = improved ? 0 : flat + 1;
      if (flat >= 2) break;
      scale = std::max(scale * 0.5, 1e-3);
    }
    out.objective = best;
  }
  out.x = x;
  return out;
}

SearchResult run_search(const SearchSpace& space, const std::vector<Objective>& stages,
                        std::uint64_t seed, const SearchOptions& options) {
  if (options.restarts < 1) throw std::invalid_argument("SearchOptions: restarts must be positive");
  if (options.max_evaluations < 1) throw std::invalid_argument("SearchOptions: evaluation budget must be positive");
  const Layout layout(space);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(options.restarts));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < options.restarts; r = next++) {
      outcomes[static_cast<std::size_t>(r)] =
          run_restart(space, layout, stages, restart_start_point(space, seed, r), options);
    }
  };
  const int threads = std::clamp(options.threads, 1, options.restarts);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Highest objective wins; ties go to the lowest restart index.
  std::size_t best = 0;
  long evaluations = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    evaluations += outcomes[r].evaluations;
    if (outcomes[r].objective > outcomes[best].objective) best = r;
  }
  SequentialStrategy strategy(layout.decode(space, outcomes[best].x));
  TradeoffPoint point = evaluate_strategy(strategy);
  return {std::move(point), std::move(strategy), outcomes[best].x, outcomes[best].objective, evaluations, seed};
}

}  // namespace

BranchTemplate BranchTemplate::uniform(int parties, RankClass y0, RankClass y1) {
  if (parties < 1) throw std::invalid_argument("BranchTemplate: need at least one instrument party");
  return {std::vector<std::array<RankClass, 2>>(static_cast<std::size_t>(parties), {y0, y1})};
}

int SearchSpace::parties() const {
  if (branches.empty()) throw std::invalid_argument("SearchSpace: no branch templates");
  const auto n = branches.front().parties.size();
  for (const auto& b : branches) {
    if (b.parties.size() != n) throw std::invalid_argument("SearchSpace: templates differ in party count");
  }
  return static_cast<int>(n) + 1;
}

std::string SearchSpace::label() const {
  std::string out;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (i > 0) out += "+";
    for (std::size_t k = 0; k < branches[i].parties.size(); ++k) {
      if (k > 0) out += "/";
      out += rank_letter(branches[i].parties[k][0]);
      out += rank_letter(branches[i].parties[k][1]);
    }
  }
  if (independence) out += ":indep";
  return out;
}

std::vector<ParameterSpec> SearchSpace::all_parameters() const { return Layout(*this).all; }

std::vector<ParameterSpec> SearchSpace::free_parameters() const { return Layout(*this).free; }

SequentialStrategy SearchSpace::decode(const Eigen::VectorXd& x) const {
  return SequentialStrategy(Layout(*this).decode(*this, x));
}

TradeoffPoint SearchSpace::evaluate(const Eigen::VectorXd& x) const {
  return TradeoffPoint(Layout(*this).evaluate(*this, x));
}

SearchSpace two_pair_space(const StateSpec& state) {
  SearchSpace s;
  s.state = state;
  s.branches = {BranchTemplate::uniform(1, RankClass::basis, RankClass::basis),
                BranchTemplate::uniform(1, RankClass::trivial_zero, RankClass::trivial_zero),
                BranchTemplate::uniform(1, RankClass::trivial_zero, RankClass::basis)};
  return s;
}

SearchSpace partial_mixed_space(double ent_angle) {
  SearchSpace s;
  s.state = PartiallyEntangled{ent_angle};
  s.branches = {BranchTemplate::uniform(1, RankClass::basis, RankClass::basis),
                BranchTemplate::uniform(1, RankClass::trivial_zero, RankClass::basis)};
  return s;
}

SearchSpace independence_space() {
  SearchSpace s;
  s.branches = {BranchTemplate::uniform(1, RankClass::basis, RankClass::basis),
                BranchTemplate::uniform(1, RankClass::trivial_zero, RankClass::basis)};
  s.independence = true;
  return s;
}

SearchSpace staircase_space(int n) {
  if (n < 2) throw std::invalid_argument("staircase_space: need at least two pairs");
  SearchSpace s;
  for (int j = 0; j < n; ++j) {
    BranchTemplate t;
    for (int k = 0; k < n - 1; ++k) {
      t.parties.push_back(k < j ? std::array{RankClass::trivial_zero, RankClass::basis}
                                : std::array{RankClass::basis, RankClass::basis});
    }
    s.branches.push_back(std::move(t));
  }
  return s;
}

Eigen::VectorXd restart_start_point(const SearchSpace& space, std::uint64_t seed, int restart) {
  const Layout layout(space);
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(restart))));
  Eigen::VectorXd x(static_cast<Eigen::Index>(layout.free.size()));
  for (std::size_t i = 0; i < layout.free.size(); ++i) {
    // Drawn from raw 64-bit output so the sequence is the same on every standard library.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x(static_cast<Eigen::Index>(i)) = layout.free[i].lo + u * (layout.free[i].hi - layout.free[i].lo);
  }
  return x;
}

SearchResult maximize_s2_at_s1(const SearchSpace& space, double s1_target, double tol, std::uint64_t seed,
                               const SearchOptions& options) {
  if (!(s1_target >= 0.0 && s1_target <= kS1Max)) {
    throw std::invalid_argument("maximize_s2_at_s1: target outside [0, 2√2]");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("maximize_s2_at_s1: tolerance must be positive");
  if (space.parties() < 2) throw std::invalid_argument("maximize_s2_at_s1: need at least two pairs");
  const double cap = horodecki_max_chsh(make_state(space.state));
  if (s1_target - tol > cap + 1e-9) {
    throw NotFound("maximize_s2_at_s1: target exceeds the largest CHSH value of the state");
  }

  std::vector<Objective> stages;
  for (double weight : {1e3, 1e5, 1e7, 1e9}) {
    stages.push_back([=](const Eigen::VectorXd& s) {
      const double excess = std::max(0.0, std::abs(s(0) - s1_target) - tol);
      return s(1) - weight * excess * excess;
    });
  }
  auto result = run_search(space, stages, seed, options);
  if (std::abs(result.best_point[0] - s1_target) > tol + 1e-6) {
    throw NotFound("maximize_s2_at_s1: no restart met the S1 constraint (best S1 = " +
                   std::to_string(result.best_point[0]) + ")");
  }
  result.objective = result.best_point[1];
  return result;
}

SearchResult maximize_equal_violations(const SearchSpace& space, int n, std::uint64_t seed,
                                       const SearchOptions& options) {
  if (n < 2 || n > 4) throw std::invalid_argument("maximize_equal_violations: n must be 2, 3 or 4");
  if (space.parties() != n) throw std::invalid_argument("maximize_equal_violations: space has a different party count");
  const std::vector<Objective> stages = {[](const Eigen::VectorXd& s) {
    const double mean = s.mean();
    return s.minCoeff() - 1e2 * (s.array() - mean).square().sum();
  }};
  auto result = run_search(space, stages, seed, options);
  result.objective = result.best_point.min();
  return result;
}

std::vector<SweepRow> sweep_boundary(const SearchSpace& space, int grid, std::uint64_t seed, double tol,
                                     const SearchOptions& options) {
  if (grid < 2) throw std::invalid_argument("sweep_boundary: grid must be at least 2");
  std::vector<SweepRow> rows;
  for (double t : s1_grid(grid)) {
    try {
      const auto r = maximize_s2_at_s1(space, t, tol, seed, options);
      rows.push_back({t, r.best_point[0], r.best_point[1], r.best_point[1], space.label(), seed});
    } catch (const NotFound&) {
      // Target beyond what the state allows.
    }
  }
  std::vector<Eigen::Vector2d> cloud;
  for (const auto& r : rows) cloud.emplace_back(r.s1_achieved, r.s2_raw);
  const auto hull = upper_hull(cloud);
  for (auto& r : rows) {
    // Linear interpolation on the hull at the achieved S1.
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
      if (r.s1_achieved >= hull[i].x() && r.s1_achieved <= hull[i + 1].x()) {
        const double u = (r.s1_achieved - hull[i].x()) / (hull[i + 1].x() - hull[i].x());
        r.s2_best = std::max(r.s2_raw, hull[i].y() + u * (hull[i + 1].y() - hull[i].y()));
        break;
      }
    }
  }
  return rows;
}

}  // namespace seqbell
