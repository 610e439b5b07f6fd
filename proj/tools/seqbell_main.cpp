#include "seqbell/cli.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <numbers>

namespace {

using namespace seqbell;

void add_common(CLI::App* cmd, cli::Options& o, std::string& format) {
  cmd->add_option("--seed", o.seed, "Seed for every stochastic path");
  cmd->add_option("--grid", o.grid, "Grid size (curves 10000, sweeps 25)");
  cmd->add_option("--out", o.out, "Output directory for CSV files");
  cmd->add_option("--tol", o.tol, "Tolerance override");
  cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--threads", o.threads, "Worker threads for optimizer restarts")->check(CLI::PositiveNumber);
}

void add_source(CLI::App* cmd, cli::StrategySource& src, std::vector<std::string>& params,
                std::string file_help) {
  cmd->add_option("file", src.file, std::move(file_help));
  cmd->add_option("--strategy", src.catalog_id, "Catalog strategy identifier");
  cmd->add_option("--param", params, "Catalog parameter key=value (repeatable)");
}

void add_space(CLI::App* cmd, cli::SpaceRequest& req) {
  cmd->add_option("--space", req.kind, "two_pair, partial, independence or staircase");
  cmd->add_option("--ent-angle", req.ent_angle, "Entanglement angle for the partial space");
  cmd->add_flag("--bare", req.bare, "Projectors only, no unitaries");
  cmd->add_option("--restarts", req.restarts, "Random restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--max-evals", req.max_evaluations, "Evaluation budget per restart")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential CHSH with projective instruments"};
  app.require_subcommand(1);

  cli::Options options;
  std::string format = "text";

  cli::StrategySource source;
  std::vector<std::string> params;
  std::optional<std::filesystem::path> emit_json;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a strategy file or catalog entry");
  add_source(evaluate, source, params, "Strategy JSON file");
  evaluate->add_option("--emit-json", emit_json, "Also write the strategy as JSON");
  add_common(evaluate, options, format);

  std::vector<std::string> targets;
  auto* reproduce = app.add_subcommand("reproduce", "Write CSVs and check reference values");
  reproduce->add_option("targets", targets, "boundary fig2 insets triple independent noise appendixB_fig");
  add_common(reproduce, options, format);

  std::string curve = "optimal";
  double ent_angle = std::numbers::pi / 4;
  auto* boundary = app.add_subcommand("boundary", "Write a trade-off curve as CSV");
  boundary->add_option("--curve", curve, "optimal, case_i, case_iii, partial_i, partial_ii_locus, envelope");
  boundary->add_option("--ent-angle", ent_angle, "Entanglement angle for partial_i");
  add_common(boundary, options, format);

  cli::SpaceRequest space;
  auto* sweep = app.add_subcommand("sweep", "Numerical S2(S1) boundary on a grid");
  add_space(sweep, space);
  sweep->add_option("--n", space.n, "Sequential pairs for the staircase space");
  add_common(sweep, options, format);

  std::string objective = "equal";
  int pairs = 2;
  std::optional<double> s1;
  auto* optimize = app.add_subcommand("optimize", "Search for a strategy");
  add_space(optimize, space);
  optimize->add_option("--objective", objective, "equal or s2");
  optimize->add_option("--n", pairs, "Sequential pairs (sets the staircase size)");
  optimize->add_option("--s1", s1, "S1 target for --objective s2");
  optimize->add_option("--emit-json", emit_json, "Write the best strategy as JSON");
  add_common(optimize, options, format);

  double target = 2.0;
  auto* noise = app.add_subcommand("noise", "Isotropic-noise visibility threshold");
  add_source(noise, source, params, "Strategy JSON file");
  noise->add_option("--target", target, "Value every S_k must exceed");
  add_common(noise, options, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kNotFound;
  }

  options.format = format == "json" ? cli::Format::json : cli::Format::text;
  if (*evaluate && !source.file && source.catalog_id.empty()) {
    std::cerr << "error: evaluate needs a strategy file or --strategy\n";
    return cli::kNotFound;
  }
  if (!source.file && source.catalog_id.empty()) source.catalog_id = "boundary.fixed_point";
  try {
    source.params = cli::parse_params(params);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kNotFound;
  }

  if (*evaluate) return cli::run_evaluate(source, emit_json, options, std::cout, std::cerr);
  if (*reproduce) return cli::run_reproduce(targets, options, std::cout, std::cerr);
  if (*boundary) return cli::run_boundary(curve, ent_angle, options, std::cout, std::cerr);
  if (*sweep) return cli::run_sweep(space, options, std::cout, std::cerr);
  if (*optimize) {
    space.n = pairs;
    return cli::run_optimize(space, objective, pairs, s1, emit_json, options, std::cout, std::cerr);
  }
  return cli::run_noise(source, target, options, std::cout, std::cerr);
}
