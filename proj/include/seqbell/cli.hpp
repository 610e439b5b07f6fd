#pragma once

#include "seqbell/catalog.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace seqbell::cli {

enum ExitCode : int {
  kOk = 0,
  kNotFound = 1,          // unreadable file, unknown target or identifier
  kSchemaError = 2,
  kInvariantViolation = 3,
};

enum class Format { text, json };

struct Options {
  std::uint64_t seed = 0;
  std::optional<int> grid;
  std::filesystem::path out = "out";
  std::optional<double> tol;
  Format format = Format::text;
  int threads = 1;
};

/// Where a strategy comes from: a JSON file or a catalog identifier.
struct StrategySource {
  std::optional<std::filesystem::path> file;
  std::string catalog_id;
  catalog::Params params;
};

/// Per-branch and mixed CHSH values, violation verdicts, instrument checks.
/// `emit_json` additionally writes the strategy in the file format.
int run_evaluate(const StrategySource& source, const std::optional<std::filesystem::path>& emit_json,
                 const Options& options, std::ostream& out, std::ostream& err);

/// Writes <out>/<curve>.csv. Curves: optimal, case_i, case_iii, partial_i,
/// partial_ii_locus, envelope.
int run_boundary(const std::string& curve, double ent_angle, const Options& options, std::ostream& out,
                 std::ostream& err);

struct SpaceRequest {
  std::string kind = "two_pair";  // two_pair, partial, independence, staircase
  double ent_angle = 0.0;         // partial only
  int n = 2;                      // staircase only
  bool bare = false;              // no unitaries
  int restarts = 32;
  long max_evaluations = 50000;
};

/// Writes <out>/sweep.csv with s1_target,s1_achieved,s2_best,template,seed.
int run_sweep(const SpaceRequest& space, const Options& options, std::ostream& out, std::ostream& err);

/// objective "equal" maximises min_k S_k; "s2" maximises S_2 at `s1`.
int run_optimize(const SpaceRequest& space, const std::string& objective, int n, std::optional<double> s1,
                 const std::optional<std::filesystem::path>& emit_json, const Options& options,
                 std::ostream& out, std::ostream& err);

/// Visibility below which the strategy stops beating `target` on the
/// isotropic state, plus the single-test control 1/√2.
int run_noise(const StrategySource& source, double target, const Options& options, std::ostream& out,
              std::ostream& err);

/// Targets: boundary, fig2, insets, triple, independent, noise,
/// appendixB_fig. An empty list runs all of them. Exit 0 iff every check passes.
int run_reproduce(const std::vector<std::string>& targets, const Options& options, std::ostream& out,
                  std::ostream& err);

const std::vector<std::string>& reproduce_targets();

/// Splits "key=value" pairs into catalog parameters; throws std::invalid_argument.
catalog::Params parse_params(const std::vector<std::string>& pairs);

}  // namespace seqbell::cli
