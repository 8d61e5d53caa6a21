#include "ctb/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ctb/adversarial.hpp"
#include "ctb/convex.hpp"
#include "ctb/gauss.hpp"
#include "ctb/grid.hpp"
#include "ctb/report.hpp"
#include "ctb/rng.hpp"
#include "ctb/target_set.hpp"
#include "ctb/tester_one_sided.hpp"
#include "ctb/tester_two_sided.hpp"

namespace ctb::cli {

namespace {

using nlohmann::json;

json parse_target_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw ValidationError("cannot read target file " + arg.substr(1));
    return json::parse(in);
  }
  return json::parse(arg);
}

json verdict_to_json(const OneSidedVerdict& v) {
  json out{{"reject", v.reject},
           {"rejecting_run", v.rejecting_run},
           {"early_accept_empty_cube", v.early_accept_empty_cube},
           {"samples_used", v.samples_used},
           {"bc_mass", v.bc_mass},
           {"reject_threshold", v.reject_threshold}};
  if (v.certificate) {
    const RejectionCertificate& c = *v.certificate;
    if (c.kind == RejectionCertificate::Kind::kBcMassExcess) {
      out["certificate"] = json{
          {"kind", "bc_mass_excess"},
          {"bc_mass", c.bc_mass},
          {"threshold", c.threshold},
          {"boundary_cube_count", c.boundary_cubes.size()}};
    } else {
      out["certificate"] = json{
          {"kind", "hull_violation"},
          {"witness", std::vector<double>(c.witness.begin(), c.witness.end())},
          {"generator_count", c.positive_generators.cols()}};
    }
  } else {
    out["certificate"] = nullptr;
  }
  return out;
}

json grid_derived(const GridParams& p, const Grid& grid) {
  return json{{"n", p.n},
              {"epsilon", p.epsilon},
              {"ell", p.ell},
              {"ell_overridden", p.ell_overridden},
              {"n_prime", p.n_prime},
              {"n_prime_overridden", p.n_prime_overridden},
              {"cube_cap", p.cube_cap},
              {"cube_count", grid.cube_count()},
              {"total_cube_mass", grid.total_mass()},
              {"min_cube_mass", grid.min_cube_mass()}};
}

json lower_bound_derived(const LowerBoundParams& p, const CapTable& table) {
  return json{{"n", p.n},
              {"halfspace_count", p.halfspace_count},
              {"halfspace_count_overridden", p.n_overridden},
              {"query_budget", p.query_budget},
              {"query_budget_overridden", p.q_overridden},
              {"alpha", p.alpha},
              {"alpha_clamped", p.alpha_clamped},
              {"beta", p.beta},
              {"r", p.r},
              {"cap_table", json{{"n", table.dim()},
                                 {"quadrature_tol", table.quadrature_tol()},
                                 {"normalization", table.normalization()}}}};
}

json typicality_to_json(const TypicalityReport& rep) {
  json pairs = json::array();
  for (const PairOverlap& p : rep.pairs) {
    pairs.push_back(json{{"i", p.i},
                         {"j", p.j},
                         {"fsa_estimate", p.fsa_estimate},
                         {"hits", p.hits},
                         {"below_threshold", p.below_threshold},
                         {"indeterminate", p.indeterminate}});
  }
  return json{{"fsa", rep.fsa},
              {"fsa_in_band", std::vector<int>(rep.fsa_in_band.begin(),
                                               rep.fsa_in_band.end())},
              {"pairs", std::move(pairs)},
              {"is_typical", rep.is_typical},
              {"indeterminate", rep.indeterminate},
              {"r", rep.r},
              {"mc_budget", rep.mc_budget},
              {"thresholds",
               json{{"single_lo_exponent", rep.thresholds.single_lo_exponent},
                    {"single_hi_exponent", rep.thresholds.single_hi_exponent},
                    {"pair_exponent", rep.thresholds.pair_exponent}}}};
}

// Derivation shared by the adversarial commands: N and q defaults from the
// dimension, r from the cap equation at the clamped alpha unless given
// explicitly.
LowerBoundParams adversarial_params(int n, std::int64_t halfspaces,
                                    double r_explicit, const CapTable& table) {
  std::optional<std::int64_t> n_over;
  if (halfspaces > 0) n_over = halfspaces;
  std::optional<double> r_over;
  if (r_explicit > 0.0) r_over = r_explicit;
  return derive_lower_bound_params(n, table, n_over, std::nullopt, r_over);
}

struct CommandContext {
  std::string out_path;
  std::string csv_path;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int jobs_default() {
  if (const char* env = std::getenv("CONVEXITY_TESTBED_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::vector<double> parse_values_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::string format_axis_value(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

CommandResult finish(const std::string& command, json config, json derived,
                     json metrics, Clock::time_point start,
                     const CommandContext& ctx) {
  CommandResult result;
  result.report = make_report(command, std::move(config), std::move(derived),
                              std::move(metrics), seconds_since(start));
  if (!ctx.out_path.empty()) write_json_atomic(ctx.out_path, result.report);
  return result;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& args) {
  CLI::App app{"convexity-testbed: sample-based convexity testing workbench"};
  app.require_subcommand(1);

  CommandContext ctx;
  const auto add_common = [&](CLI::App* sub, std::uint64_t* seed) {
    sub->add_option("--seed", *seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", ctx.out_path, "write the JSON report here");
  };

  // ---- test-one-sided ----
  struct {
    std::string target;
    int n = 2;
    double eps = 0.2;
    double ell = 0.0;
    double nprime = 0.0;
    std::int64_t samples = 0;
    int runs = 1;
    double threshold = -1.0;
    std::int64_t cube_cap = 10'000'000;
    std::uint64_t seed = 0;
  } one;
  auto* sub_one = app.add_subcommand("test-one-sided",
                                     "one-sided tester with certificates");
  sub_one->add_option("--target", one.target, "target JSON or @file")->required();
  sub_one->add_option("--n", one.n, "dimension")->required();
  sub_one->add_option("--eps", one.eps, "accuracy parameter")->required();
  sub_one->add_option("--ell", one.ell, "cube side override (0 = eps^3/n^4)");
  sub_one->add_option("--nprime", one.nprime, "truncation radius override");
  sub_one->add_option("--samples", one.samples, "sample budget per run (0 = auto)");
  sub_one->add_option("--runs", one.runs, "independent runs to OR together");
  sub_one->add_option("--threshold", one.threshold,
                      "boundary-mass rejection threshold (-1 = eps/4)");
  sub_one->add_option("--cube-cap", one.cube_cap, "max cube count");
  sub_one->add_option("--csv", ctx.csv_path,
                      "export the first run's cube classification CSV");
  add_common(sub_one, &one.seed);

  // ---- test-two-sided ----
  struct {
    std::string target;
    int n = 1;
    double eps = 0.1;
    double delta = 0.1;
    double ell = 0.0;
    double nprime = 0.0;
    std::int64_t cover_cap = std::int64_t{1} << 20;
    std::int64_t learn_samples = 0;
    std::int64_t cube_cap = 10'000'000;
    bool two_stage = false;
    std::string mode = "full";
    std::uint64_t seed = 0;
  } two;
  auto* sub_two = app.add_subcommand("test-two-sided",
                                     "learn-then-test two-sided tester");
  sub_two->add_option("--target", two.target, "target JSON or @file")->required();
  sub_two->add_option("--n", two.n, "dimension")->required();
  sub_two->add_option("--eps", two.eps, "accuracy parameter")->required();
  sub_two->add_option("--delta", two.delta, "failure probability")
      ->capture_default_str();
  sub_two->add_option("--ell", two.ell, "cube side override");
  sub_two->add_option("--nprime", two.nprime, "truncation radius override");
  sub_two->add_option("--cover-cap", two.cover_cap, "max cover subsets");
  sub_two->add_option("--learn-samples", two.learn_samples,
                      "labeled sample budget (0 = auto)");
  sub_two->add_option("--cube-cap", two.cube_cap, "max cube count");
  sub_two->add_flag("--two-stage", two.two_stage,
                    "mirror the two-stage proof structure");
  sub_two->add_option("--mode", two.mode, "cover enumeration: full|contiguous")
      ->check(CLI::IsMember({"full", "contiguous"}));
  add_common(sub_two, &two.seed);

  // ---- gen-dyes ----
  struct {
    int n = 4;
    std::int64_t halfspaces = 0;
    double r = 0.0;
    std::uint64_t seed = 0;
  } dyes;
  auto* sub_dyes = app.add_subcommand("gen-dyes", "draw a yes-distribution polytope");
  sub_dyes->add_option("--n", dyes.n, "dimension")->required();
  sub_dyes->add_option("--halfspaces", dyes.halfspaces,
                       "halfspace count N (0 = 2^sqrt(n) rounded)");
  sub_dyes->add_option("--r", dyes.r, "sphere radius (0 = solve cap(r/alpha)=1/N)");
  add_common(sub_dyes, &dyes.seed);

  // ---- gen-dno ----
  struct {
    int n = 4;
    int shells = 0;
    std::int64_t halfspaces = 0;
    double r = 0.0;
    std::uint64_t seed = 0;
  } dno;
  auto* sub_dno = app.add_subcommand("gen-dno", "draw a no-distribution shell union");
  sub_dno->add_option("--n", dno.n, "dimension")->required();
  sub_dno->add_option("--shells", dno.shells,
                      "shell count M (0 = max(2^ceil(sqrt(n)), 64))");
  sub_dno->add_option("--halfspaces", dno.halfspaces, "N for rho (0 = default)");
  sub_dno->add_option("--r", dno.r, "radius for rho (0 = derive)");
  add_common(sub_dno, &dno.seed);

  // ---- distinguish ----
  struct {
    int n = 8;
    int q = 1;
    std::int64_t halfspaces = 0;
    double r = 0.0;
    std::int64_t trials = 10000;
    std::int64_t typ_budget = 200000;
    int bootstrap = 200;
    std::string points;
    std::uint64_t seed = 0;
  } dist;
  auto* sub_dist = app.add_subcommand(
      "distinguish", "empirical TV between yes-labels and the product law");
  sub_dist->add_option("--n", dist.n, "dimension")->required();
  sub_dist->add_option("--q", dist.q, "query count (<= 12)")->required();
  sub_dist->add_option("--halfspaces", dist.halfspaces, "N (0 = default)");
  sub_dist->add_option("--r", dist.r, "radius (0 = derive)");
  sub_dist->add_option("--trials", dist.trials, "fresh polytopes")
      ->capture_default_str();
  sub_dist->add_option("--typ-budget", dist.typ_budget,
                       "MC budget for pairwise typicality");
  sub_dist->add_option("--bootstrap", dist.bootstrap, "bootstrap resamples");
  sub_dist->add_option("--points", dist.points,
                       "explicit query points as JSON [[...],...]");
  sub_dist->add_option("--csv", ctx.csv_path, "write the joint histogram CSV");
  add_common(sub_dist, &dist.seed);

  // ---- shatter ----
  struct {
    int n = 2;
    int m = 3;
    std::int64_t trials = 1000;
    std::uint64_t seed = 0;
  } shat;
  auto* sub_shat = app.add_subcommand("shatter",
                                      "hull-extremeness (shattering) frequency");
  sub_shat->add_option("--n", shat.n, "dimension")->required();
  sub_shat->add_option("--m", shat.m, "points per trial")->required();
  sub_shat->add_option("--trials", shat.trials, "trials")->capture_default_str();
  sub_shat->add_option("--csv", ctx.csv_path, "write the per-trial log CSV");
  add_common(sub_shat, &shat.seed);

  // ---- typicality ----
  struct {
    int n = 8;
    int q = 2;
    std::int64_t halfspaces = 0;
    double r = 0.0;
    std::int64_t mc_budget = 200000;
    std::string points;
    std::uint64_t seed = 0;
  } typ;
  auto* sub_typ = app.add_subcommand("typicality",
                                     "typicality diagnostics of query points");
  sub_typ->add_option("--n", typ.n, "dimension")->required();
  sub_typ->add_option("--q", typ.q, "point count")->required();
  sub_typ->add_option("--halfspaces", typ.halfspaces, "N (0 = default)");
  sub_typ->add_option("--r", typ.r, "radius (0 = derive)");
  sub_typ->add_option("--mc-budget", typ.mc_budget, "sphere samples per pair");
  sub_typ->add_option("--points", typ.points, "explicit points JSON");
  add_common(sub_typ, &typ.seed);

  // ---- boundary-volume ----
  struct {
    std::string target;
    int n = 2;
    double alpha = 0.0;
    double k = 0.0;
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
  } bvol;
  auto* sub_bvol = app.add_subcommand(
      "boundary-volume", "thickened-boundary volume vs the structural bound");
  sub_bvol->add_option("--target", bvol.target, "convex target JSON or @file")
      ->required();
  sub_bvol->add_option("--n", bvol.n, "dimension")->required();
  sub_bvol->add_option("--alpha", bvol.alpha,
                       "thickening radius (0 = 0.1 n^(-3/4))");
  sub_bvol->add_option("--k", bvol.k, "norm bound K (0 = 2 sqrt(n))");
  sub_bvol->add_option("--samples", bvol.samples, "MC samples")
      ->capture_default_str();
  add_common(sub_bvol, &bvol.seed);

  // ---- ball-theorem ----
  struct {
    std::string target;
    int n = 2;
    double h = 0.01;
    std::int64_t samples = 200000;
    std::uint64_t seed = 0;
  } ball;
  auto* sub_ball = app.add_subcommand("ball-theorem",
                                      "Vol(C_h \\ C)/h vs 4 n^(1/4)");
  sub_ball->set_help_flag("--help", "print help");  // frees -h for the offset
  sub_ball->add_option("--target", ball.target, "convex target JSON or @file")
      ->required();
  sub_ball->add_option("--n", ball.n, "dimension")->required();
  sub_ball->add_option("--h", ball.h, "offset h")->capture_default_str();
  sub_ball->add_option("--samples", ball.samples, "MC samples")
      ->capture_default_str();
  add_common(sub_ball, &ball.seed);

  // ---- appendix-lemmas ----
  struct {
    std::string lemma = "a1";
    std::string family = "box";
    int n = 2;
    double rho = 0.1;
    double alpha = 0.05;
    double beta = 0.1;
    double k = 2.0;
    std::int64_t samples = 20000;
    std::uint64_t seed = 0;
  } apx;
  auto* sub_apx = app.add_subcommand("appendix-lemmas",
                                     "numerical checks of the volume lemmas");
  sub_apx->add_option("--lemma", apx.lemma, "a1|a2|a3")
      ->check(CLI::IsMember({"a1", "a2", "a3"}));
  sub_apx->add_option("--family", apx.family, "instance family");
  sub_apx->add_option("--n", apx.n, "dimension")->required();
  sub_apx->add_option("--rho", apx.rho, "inner radius rho");
  sub_apx->add_option("--alpha", apx.alpha, "thickening alpha");
  sub_apx->add_option("--beta", apx.beta, "shrink factor beta");
  sub_apx->add_option("--k", apx.k, "norm bound K");
  sub_apx->add_option("--samples", apx.samples, "samples")->capture_default_str();
  add_common(sub_apx, &apx.seed);

  // ---- cover ----
  struct {
    int n = 1;
    double eps = 0.3;
    double ell = 0.0;
    double nprime = 0.0;
    std::int64_t cover_cap = std::int64_t{1} << 20;
    std::int64_t cube_cap = 10'000'000;
    std::string mode = "full";
    std::uint64_t seed = 0;
  } cov;
  auto* sub_cov = app.add_subcommand("cover", "enumerate the finite cover");
  sub_cov->add_option("--n", cov.n, "dimension")->required();
  sub_cov->add_option("--eps", cov.eps, "accuracy parameter")->required();
  sub_cov->add_option("--ell", cov.ell, "cube side override");
  sub_cov->add_option("--nprime", cov.nprime, "truncation radius override");
  sub_cov->add_option("--cover-cap", cov.cover_cap, "max subsets");
  sub_cov->add_option("--cube-cap", cov.cube_cap, "max cube count");
  sub_cov->add_option("--mode", cov.mode, "full|contiguous")
      ->check(CLI::IsMember({"full", "contiguous"}));
  add_common(sub_cov, &cov.seed);

  // ---- sweep ----
  struct {
    std::string command;
    std::string axis;
    std::string values;
    int jobs = 0;
    std::uint64_t seed = 0;
  } swp;
  auto* sub_swp = app.add_subcommand("sweep",
                                     "run a command across parameter values");
  sub_swp->add_option("--command", swp.command, "subcommand to sweep")->required();
  sub_swp->add_option("--axis", swp.axis, "flag name to vary (without --)")
      ->required();
  sub_swp->add_option("--values", swp.values, "comma-separated values")->required();
  sub_swp->add_option("--jobs", swp.jobs,
                      "parallel cells (0 = CONVEXITY_TESTBED_JOBS or 1)");
  sub_swp->add_option("--csv", ctx.csv_path, "write the combined CSV here");
  add_common(sub_swp, &swp.seed);
  // Everything after the sweep's own flags passes through to the cells.
  sub_swp->prefix_command();

  std::vector<std::string> cli_args(args.rbegin(), args.rend());
  try {
    app.parse(cli_args);
  } catch (const CLI::CallForHelp&) {
    CommandResult ok;
    ok.report = json{{"help", app.help()}};
    return ok;
  } catch (const CLI::ParseError& e) {
    CommandResult bad;
    bad.exit_code = kExitValidation;
    bad.report = json{{"error", e.what()}};
    return bad;
  }

  const auto start = Clock::now();
  try {
    if (sub_one->parsed()) {
      const json target_spec = parse_target_arg(one.target);
      const TargetPtr target = target_from_json(target_spec);
      OneSidedConfig config;
      config.grid = GridParams::make(
          one.n, one.eps,
          one.ell > 0.0 ? std::optional<double>(one.ell) : std::nullopt,
          one.nprime > 0.0 ? std::optional<double>(one.nprime) : std::nullopt,
          one.cube_cap);
      config.sample_budget = one.samples;
      config.runs = one.runs;
      config.reject_threshold = one.threshold;
      config.seed = one.seed;
      const Grid grid = Grid::build(config.grid);
      const OneSidedVerdict verdict = run_a_prime(*target, config);
      if (!ctx.csv_path.empty()) {
        OneSidedConfig first_run = config;
        first_run.seed = split_seed(config.seed, 0);
        const CubeClassification classes =
            classify_a_star_samples(*target, first_run, grid);
        std::ostringstream csv;
        write_classification_csv(grid, classes, csv);
        write_text_atomic(ctx.csv_path, csv.str());
      }
      json metrics = verdict_to_json(verdict);
      if (verdict.reject) {
        metrics["certificate_verified"] =
            verify_certificate(verdict, *target, config);
      } else {
        metrics["certificate_verified"] = nullptr;
      }
      json config_echo{{"target", target_spec},
                       {"n", one.n},
                       {"eps", one.eps},
                       {"ell", one.ell},
                       {"nprime", one.nprime},
                       {"samples", one.samples},
                       {"runs", one.runs},
                       {"threshold", one.threshold},
                       {"cube_cap", one.cube_cap},
                       {"seed", one.seed}};
      return finish("test-one-sided", std::move(config_echo),
                    grid_derived(config.grid, grid), std::move(metrics), start,
                    ctx);
    }

    if (sub_two->parsed()) {
      const json target_spec = parse_target_arg(two.target);
      const TargetPtr target = target_from_json(target_spec);
      const GridParams grid_params = GridParams::make(
          two.n, two.eps,
          two.ell > 0.0 ? std::optional<double>(two.ell) : std::nullopt,
          two.nprime > 0.0 ? std::optional<double>(two.nprime) : std::nullopt,
          two.cube_cap);
      LearnConfig config;
      config.epsilon = two.eps;
      config.delta = two.delta;
      config.learn_samples = two.learn_samples;
      config.cover_subset_cap = two.cover_cap;
      config.two_stage = two.two_stage;
      config.cover_mode = two.mode == "contiguous" ? CoverMode::kContiguous1D
                                                   : CoverMode::kFull;
      config.seed = two.seed;
      const Grid grid = Grid::build(grid_params);
      const TwoSidedVerdict verdict = ggr_test(*target, config, grid_params);
      json hypothesis{{"corner_count", verdict.learn.hypothesis.corners().cols()}};
      if (verdict.learn.hypothesis.corners().cols() <= 64) {
        hypothesis["target"] = verdict.learn.hypothesis.to_json();
      }
      json metrics{{"reject", verdict.reject},
                   {"disagreement", verdict.disagreement},
                   {"accept_threshold", verdict.accept_threshold},
                   {"check_samples", verdict.check_samples},
                   {"empirical_error", verdict.learn.empirical_error},
                   {"candidates_scored", verdict.learn.candidates_scored},
                   {"learn_samples_used", verdict.learn.samples_used},
                   {"hypothesis", std::move(hypothesis)}};
      json config_echo{{"target", target_spec},
                       {"n", two.n},
                       {"eps", two.eps},
                       {"delta", two.delta},
                       {"ell", two.ell},
                       {"nprime", two.nprime},
                       {"cover_cap", two.cover_cap},
                       {"learn_samples", two.learn_samples},
                       {"two_stage", two.two_stage},
                       {"mode", two.mode},
                       {"cube_cap", two.cube_cap},
                       {"seed", two.seed}};
      return finish("test-two-sided", std::move(config_echo),
                    grid_derived(grid_params, grid), std::move(metrics), start,
                    ctx);
    }

    if (sub_dyes->parsed()) {
      const CapTable table(dyes.n);
      const LowerBoundParams lbp =
          adversarial_params(dyes.n, dyes.halfspaces, dyes.r, table);
      const double r = dyes.r > 0.0 ? dyes.r : lbp.r;
      const RandomPolytopeSet polytope =
          sample_dyes(dyes.n, lbp.halfspace_count, r, dyes.seed);
      json metrics{{"target", polytope.to_json()},
                   {"origin_member", polytope.contains(Vec::Zero(dyes.n))}};
      json config_echo{{"n", dyes.n},
                       {"halfspaces", dyes.halfspaces},
                       {"r", dyes.r},
                       {"seed", dyes.seed}};
      json derived = lower_bound_derived(lbp, table);
      derived["r_used"] = r;
      return finish("gen-dyes", std::move(config_echo), std::move(derived),
                    std::move(metrics), start, ctx);
    }

    if (sub_dno->parsed()) {
      const CapTable table(dno.n);
      const LowerBoundParams lbp =
          adversarial_params(dno.n, dno.halfspaces, dno.r, table);
      const double r = dno.r > 0.0 ? dno.r : lbp.r;
      const int shells = dno.shells > 0 ? dno.shells : default_shell_count(dno.n);
      const std::vector<double> boundaries = build_shells(dno.n, shells);
      const auto rho_fn = [&](double x) {
        return rho(x, r, lbp.halfspace_count, table);
      };
      const ShellPartition partition = sample_dno(boundaries, rho_fn, dno.seed);
      // Self-check: relative deviation of the shell masses.
      const double total =
          gaussian_mass_of_radial_band(dno.n, 0.0, boundaries.back());
      const double target_mass = total / shells;
      double max_rel_dev = 0.0;
      for (int i = 0; i < shells; ++i) {
        const double mass = gaussian_mass_of_radial_band(
            dno.n, boundaries[static_cast<std::size_t>(i)],
            boundaries[static_cast<std::size_t>(i) + 1]);
        max_rel_dev =
            std::max(max_rel_dev, std::abs(mass - target_mass) / target_mass);
      }
      const ShellUnionSet target = dno_target(dno.n, partition);
      const double rho_dev = max_rho_shell_deviation(boundaries, rho_fn);
      json metrics{{"target", target.to_json()},
                   {"max_rho_shell_deviation", rho_dev},
                   {"rho_deviation_target",
                    std::exp2(-std::sqrt(static_cast<double>(dno.n)))},
                   {"rho_at_boundaries", partition.rho_at_boundaries},
                   {"included_count",
                    std::count(partition.included.begin(),
                               partition.included.end(), char{1})},
                   {"max_shell_mass_rel_dev", max_rel_dev}};
      json config_echo{{"n", dno.n},
                       {"shells", dno.shells},
                       {"halfspaces", dno.halfspaces},
                       {"r", dno.r},
                       {"seed", dno.seed}};
      json derived = lower_bound_derived(lbp, table);
      derived["r_used"] = r;
      derived["shell_count"] = shells;
      return finish("gen-dno", std::move(config_echo), std::move(derived),
                    std::move(metrics), start, ctx);
    }

    if (sub_dist->parsed()) {
      const CapTable table(dist.n);
      const LowerBoundParams lbp =
          adversarial_params(dist.n, dist.halfspaces, dist.r, table);
      DistinguishConfig config;
      config.n = dist.n;
      config.q = dist.q;
      config.halfspace_count = lbp.halfspace_count;
      config.r = dist.r;
      config.trials = dist.trials;
      config.seed = dist.seed;
      config.typicality_budget = dist.typ_budget;
      config.bootstrap_resamples = dist.bootstrap;
      if (!dist.points.empty()) {
        const json pts = json::parse(dist.points);
        std::vector<Vec> points;
        for (const auto& row : pts) {
          const auto v = row.get<std::vector<double>>();
          points.push_back(
              Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size())));
        }
        config.points_override = std::move(points);
      }
      const DistinguishReport rep = distinguishing_experiment(config);
      if (!ctx.csv_path.empty()) {
        std::ostringstream csv;
        csv << "cell,count,product_probability\n";
        for (std::size_t cell = 0; cell < rep.histogram.size(); ++cell) {
          double p = 1.0;
          for (int i = 0; i < rep.q; ++i) {
            p *= (cell >> i) & 1 ? rep.rho_values[static_cast<std::size_t>(i)]
                                 : 1.0 - rep.rho_values[static_cast<std::size_t>(i)];
          }
          csv << cell << "," << rep.histogram[cell] << "," << p << "\n";
        }
        write_text_atomic(ctx.csv_path, csv.str());
      }
      json metrics{{"q", rep.q},
                   {"trials", rep.trials},
                   {"r", rep.r},
                   {"rho_values", rep.rho_values},
                   {"marginal_freq", rep.marginal_freq},
                   {"marginal_dev", rep.marginal_dev},
                   {"marginal_4sigma", rep.marginal_4sigma},
                   {"tv_empirical", rep.tv_empirical},
                   {"tv_ci_lo", rep.tv_ci_lo},
                   {"tv_ci_hi", rep.tv_ci_hi},
                   {"bad_matrix_frequency", rep.bad_matrix_frequency},
                   {"typicality", typicality_to_json(rep.typicality)}};
      json config_echo{{"n", dist.n},
                       {"q", dist.q},
                       {"halfspaces", dist.halfspaces},
                       {"r", dist.r},
                       {"trials", dist.trials},
                       {"typ_budget", dist.typ_budget},
                       {"bootstrap", dist.bootstrap},
                       {"points", dist.points},
                       {"seed", dist.seed}};
      json derived = lower_bound_derived(lbp, table);
      derived["r_used"] = rep.r;
      return finish("distinguish", std::move(config_echo), std::move(derived),
                    std::move(metrics), start, ctx);
    }

    if (sub_shat->parsed()) {
      const ShatterReport rep =
          shattering_experiment(shat.n, shat.m, shat.trials, shat.seed);
      if (!ctx.csv_path.empty()) {
        std::ostringstream csv;
        csv << "trial,shattered\n";
        for (std::size_t t = 0; t < rep.trial_outcomes.size(); ++t) {
          csv << t << "," << static_cast<int>(rep.trial_outcomes[t]) << "\n";
        }
        write_text_atomic(ctx.csv_path, csv.str());
      }
      json metrics{{"m", rep.m},
                   {"trials", rep.trials},
                   {"shatter_frequency", rep.shatter_frequency},
                   {"std_error", rep.std_error},
                   {"small_norm_frequency", rep.small_norm_frequency},
                   {"small_norm_bound", rep.small_norm_bound},
                   {"dot_tail_frequency", rep.dot_tail_frequency},
                   {"dot_tail_bound", rep.dot_tail_bound}};
      json config_echo{{"n", shat.n},
                       {"m", shat.m},
                       {"trials", shat.trials},
                       {"seed", shat.seed}};
      return finish("shatter", std::move(config_echo), json::object(),
                    std::move(metrics), start, ctx);
    }

    if (sub_typ->parsed()) {
      const CapTable table(typ.n);
      const LowerBoundParams lbp =
          adversarial_params(typ.n, typ.halfspaces, typ.r, table);
      const double r = typ.r > 0.0 ? typ.r : lbp.r;
      std::vector<Vec> points;
      if (!typ.points.empty()) {
        for (const auto& row : json::parse(typ.points)) {
          const auto v = row.get<std::vector<double>>();
          points.push_back(
              Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size())));
        }
      } else {
        RngStream stream(typ.seed);
        for (int i = 0; i < typ.q; ++i) {
          points.push_back(stream.next_gaussian_vec(typ.n));
        }
      }
      const TypicalityReport rep =
          typicality_check(points, r, table, typ.mc_budget,
                           split_seed(typ.seed, 1));
      json config_echo{{"n", typ.n},
                       {"q", typ.q},
                       {"halfspaces", typ.halfspaces},
                       {"r", typ.r},
                       {"mc_budget", typ.mc_budget},
                       {"points", typ.points},
                       {"seed", typ.seed}};
      json derived = lower_bound_derived(lbp, table);
      derived["r_used"] = r;
      return finish("typicality", std::move(config_echo), std::move(derived),
                    typicality_to_json(rep), start, ctx);
    }

    if (sub_bvol->parsed()) {
      const json target_spec = parse_target_arg(bvol.target);
      const TargetPtr target = target_from_json(target_spec);
      const double alpha =
          bvol.alpha > 0.0
              ? bvol.alpha
              : 0.1 * std::pow(static_cast<double>(bvol.n), -0.75);
      const double k =
          bvol.k > 0.0 ? bvol.k : 2.0 * std::sqrt(static_cast<double>(bvol.n));
      const BoundaryVolumeEstimate est = estimate_thickened_boundary_volume(
          bvol.n, *target, alpha, k, bvol.samples, bvol.seed);
      const double bound = thickened_boundary_bound(bvol.n, k, alpha);
      json metrics{{"estimate", est.estimate},
                   {"std_error", est.std_error},
                   {"samples_used", est.samples_used},
                   {"alpha", est.alpha},
                   {"k_bound", est.k_bound},
                   {"bound", bound},
                   {"passed", est.estimate - 4.0 * est.std_error <= bound}};
      json config_echo{{"target", target_spec},
                       {"n", bvol.n},
                       {"alpha", bvol.alpha},
                       {"k", bvol.k},
                       {"samples", bvol.samples},
                       {"seed", bvol.seed}};
      return finish("boundary-volume", std::move(config_echo),
                    json{{"alpha_used", alpha}, {"k_used", k}},
                    std::move(metrics), start, ctx);
    }

    if (sub_ball->parsed()) {
      const json target_spec = parse_target_arg(ball.target);
      const TargetPtr target = target_from_json(target_spec);
      const BallTheoremReport rep =
          check_ball_theorem(ball.n, *target, ball.h, ball.samples, ball.seed);
      json metrics{{"vol_estimate", rep.vol_estimate},
                   {"std_error", rep.std_error},
                   {"ratio", rep.ratio},
                   {"bound", rep.bound},
                   {"h", rep.h},
                   {"passed", rep.passed}};
      json config_echo{{"target", target_spec},
                       {"n", ball.n},
                       {"h", ball.h},
                       {"samples", ball.samples},
                       {"seed", ball.seed}};
      return finish("ball-theorem", std::move(config_echo), json::object(),
                    std::move(metrics), start, ctx);
    }

    if (sub_apx->parsed()) {
      AppendixLemmaConfig config;
      config.lemma = apx.lemma == "a1"
                         ? AppendixLemmaConfig::Lemma::kNoBallVolume
                         : apx.lemma == "a2"
                               ? AppendixLemmaConfig::Lemma::kShrunkenDistance
                               : AppendixLemmaConfig::Lemma::kThickenedContainment;
      config.n = apx.n;
      config.rho = apx.rho;
      config.alpha = apx.alpha;
      config.beta = apx.beta;
      config.k_bound = apx.k;
      config.family = apx.family;
      config.samples = apx.samples;
      config.seed = apx.seed;
      const AppendixLemmaReport rep = check_appendix_lemma(config);
      json metrics{{"passed", rep.passed},
                   {"bound", rep.bound},
                   {"observed", rep.observed},
                   {"margin", rep.margin},
                   {"detail", rep.detail}};
      json config_echo{{"lemma", apx.lemma},
                       {"family", apx.family},
                       {"n", apx.n},
                       {"rho", apx.rho},
                       {"alpha", apx.alpha},
                       {"beta", apx.beta},
                       {"k", apx.k},
                       {"samples", apx.samples},
                       {"seed", apx.seed}};
      return finish("appendix-lemmas", std::move(config_echo), json::object(),
                    std::move(metrics), start, ctx);
    }

    if (sub_cov->parsed()) {
      const GridParams grid_params = GridParams::make(
          cov.n, cov.eps,
          cov.ell > 0.0 ? std::optional<double>(cov.ell) : std::nullopt,
          cov.nprime > 0.0 ? std::optional<double>(cov.nprime) : std::nullopt,
          cov.cube_cap);
      const Grid grid = Grid::build(grid_params);
      const std::vector<CubeHullSet> cover = generate_cover(
          grid, cov.cover_cap,
          cov.mode == "contiguous" ? CoverMode::kContiguous1D : CoverMode::kFull);
      json metrics{{"cube_count", grid.cube_count()},
                   {"cover_size", cover.size()}};
      json config_echo{{"n", cov.n},
                       {"eps", cov.eps},
                       {"ell", cov.ell},
                       {"nprime", cov.nprime},
                       {"cover_cap", cov.cover_cap},
                       {"cube_cap", cov.cube_cap},
                       {"mode", cov.mode},
                       {"seed", cov.seed}};
      return finish("cover", std::move(config_echo),
                    grid_derived(grid_params, grid), std::move(metrics), start,
                    ctx);
    }

    if (sub_swp->parsed()) {
      const std::vector<double> values = parse_values_list(swp.values);
      std::vector<std::string> extra;
      for (const std::string& e : sub_swp->remaining()) {
        if (e != "--") extra.push_back(e);
      }
      const int jobs = swp.jobs > 0 ? swp.jobs : jobs_default();

      std::vector<CommandResult> cells(values.size());
      std::vector<std::thread> workers;
      std::mutex next_mutex;
      std::size_t next = 0;
      const auto worker = [&]() {
        for (;;) {
          std::size_t idx;
          {
            const std::lock_guard<std::mutex> lock(next_mutex);
            if (next >= values.size()) return;
            idx = next++;
          }
          std::vector<std::string> cell_args;
          cell_args.push_back(swp.command);
          for (const std::string& e : extra) cell_args.push_back(e);
          cell_args.push_back("--" + swp.axis);
          cell_args.push_back(format_axis_value(values[idx]));
          cell_args.push_back("--seed");
          cell_args.push_back(std::to_string(
              split_seed(swp.seed, static_cast<std::uint64_t>(idx))));
          cells[idx] = run_command(cell_args);
        }
      };
      const int thread_count =
          static_cast<int>(std::min<std::size_t>(values.size(),
                                                 static_cast<std::size_t>(jobs)));
      for (int t = 0; t < thread_count; ++t) workers.emplace_back(worker);
      for (std::thread& t : workers) t.join();

      json cell_reports = json::array();
      for (std::size_t i = 0; i < values.size(); ++i) {
        cell_reports.push_back(json{{"axis_value", values[i]},
                                    {"exit_code", cells[i].exit_code},
                                    {"report", cells[i].report}});
      }
      if (!ctx.csv_path.empty()) {
        // Union of numeric/bool metric keys across cells.
        std::vector<std::string> keys;
        for (const auto& cell : cells) {
          if (!cell.report.contains("metrics")) continue;
          for (const auto& [k, v] : cell.report["metrics"].items()) {
            if ((v.is_number() || v.is_boolean()) &&
                std::find(keys.begin(), keys.end(), k) == keys.end()) {
              keys.push_back(k);
            }
          }
        }
        std::ostringstream csv;
        csv << "axis_value,exit_code";
        for (const auto& k : keys) csv << "," << k;
        csv << "\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
          csv << format_axis_value(values[i]) << "," << cells[i].exit_code;
          for (const auto& k : keys) {
            csv << ",";
            if (cells[i].report.contains("metrics") &&
                cells[i].report["metrics"].contains(k)) {
              csv << cells[i].report["metrics"][k].dump();
            }
          }
          csv << "\n";
        }
        write_text_atomic(ctx.csv_path, csv.str());
      }
      json config_echo{{"command", swp.command},
                       {"axis", swp.axis},
                       {"values", values},
                       {"jobs", jobs},
                       {"extra_args", extra},
                       {"seed", swp.seed}};
      return finish("sweep", std::move(config_echo), json::object(),
                    json{{"cells", std::move(cell_reports)}}, start, ctx);
    }
  } catch (const InfeasibleError& e) {
    CommandResult bad;
    bad.exit_code = kExitInfeasible;
    bad.report = json{{"error", e.what()}, {"count", e.count()}};
    return bad;
  } catch (const ValidationError& e) {
    CommandResult bad;
    bad.exit_code = kExitValidation;
    bad.report = json{{"error", e.what()}};
    return bad;
  } catch (const std::exception& e) {
    CommandResult bad;
    bad.exit_code = kExitValidation;
    bad.report = json{{"error", e.what()}};
    return bad;
  }

  CommandResult none;
  none.exit_code = kExitValidation;
  none.report = json{{"error", "no subcommand"}};
  return none;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  const CommandResult result = run_command(args);
  if (result.report.contains("help")) {
    std::cout << result.report["help"].get<std::string>();
  } else if (result.report.contains("error")) {
    std::cerr << result.report.dump(2) << "\n";
  } else {
    std::cout << result.report.dump(2) << "\n";
  }
  return result.exit_code;
}

}  // namespace ctb::cli
