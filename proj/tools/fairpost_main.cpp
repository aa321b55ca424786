// fairpost: barycenter post-processing for statistical parity.
// Subcommands: fit, frontier, certify, transform, disparity, synth,
// experiment. Exit codes: 0 ok, 2 validation, 3 convergence, 4 I/O.

#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fairpost/fairpost.hpp"

namespace {

using fairpost::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& d_grid_text,
                std::string& config_path) {
  sub->add_option("--input", cfg.input, "input CSV");
  sub->add_option("--output", cfg.output, "output file");
  sub->add_option("--group-col", cfg.group_col, "group column name")
      ->capture_default_str();
  sub->add_option("--outcome-cols", cfg.outcome_cols,
                  "outcome column names (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--variant", cfg.variant,
                  "barycenter variant: quantile, affine, or auto")
      ->check(CLI::IsMember({"quantile", "affine", "auto"}))
      ->capture_default_str();
  sub->add_option("--d-grid", d_grid_text,
                  "tolerance grid as min:max:count");
  sub->add_option("--epsilon", cfg.epsilons,
                  "budget epsilon (repeatable, pairs with --delta)");
  sub->add_option("--delta", cfg.deltas, "budget delta (repeatable)");
  sub->add_option("--lipschitz-k", cfg.lipschitz_k,
                  "trained-model Lipschitz constant for composition");
  sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  sub->add_option("--y-sup", cfg.y_sup,
                  "override the |y| bound in the analytic displacement bound");
  sub->add_option("--config", config_path,
                  "flat key=value config file; flags win");
}

// CLI11 only reads config files attached to the root app, and those need
// sectioned keys to reach subcommand options. We want flat keys scoped to
// whichever subcommand ran, so we load the file ourselves after the main
// parse. parse_from_stream only fills options that are still empty, which
// gives flags precedence for free.
void apply_config_file(CLI::App& app, const std::string& path) {
  if (path.empty()) return;
  std::ifstream stream(path);
  if (!stream) {
    throw fairpost::IoError("cannot open config file '" + path + "'");
  }
  app.get_subcommands().front()->parse_from_stream(stream);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal post-processing for statistical parity with "
               "individual-fairness certificates"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string d_grid_text;
  std::string config_path;

  CLI::App* fit = app.add_subcommand("fit", "fit a barycenter model from CSV");
  add_common(fit, cfg, d_grid_text, config_path);

  CLI::App* frontier =
      app.add_subcommand("frontier", "sweep the loss/disparity frontier");
  add_common(frontier, cfg, d_grid_text, config_path);
  frontier->add_option("--model", cfg.model_path,
                       "reuse a fitted model JSON instead of refitting");
  frontier->add_option("--svg", cfg.svg_path, "also write an SVG plot");

  CLI::App* certify =
      app.add_subcommand("certify", "evaluate compatibility certificates");
  add_common(certify, cfg, d_grid_text, config_path);
  certify->add_option("--model", cfg.model_path, "fitted model JSON");
  certify->add_option("--delta-g", cfg.delta_g,
                      "trained model's certified delta (composition, post)");
  certify->add_option("--epsilon-g", cfg.epsilon_g,
                      "trained model's certified epsilon (composition, pre)");
  certify->add_option("--mode", cfg.mode, "composition direction: post or pre")
      ->check(CLI::IsMember({"post", "pre"}))
      ->capture_default_str();
  certify->add_flag("--use-l-bound", cfg.use_l_bound,
                    "certify against the analytic bound instead of L_emp");

  CLI::App* transform =
      app.add_subcommand("transform", "apply the tolerance-d transform");
  add_common(transform, cfg, d_grid_text, config_path);
  transform->add_option("--model", cfg.model_path, "fitted model JSON");
  transform->add_option("--d", cfg.d, "disparity tolerance");

  CLI::App* disparity =
      app.add_subcommand("disparity", "measure group disparity of a CSV");
  add_common(disparity, cfg, d_grid_text, config_path);
  disparity
      ->add_option("--method", cfg.method,
                   "quantile, bures, exact, or auto (by dimension)")
      ->check(CLI::IsMember({"quantile", "bures", "exact", "auto"}))
      ->capture_default_str();

  CLI::App* synth =
      app.add_subcommand("synth", "sample a synthetic Gaussian dataset");
  add_common(synth, cfg, d_grid_text, config_path);
  synth->add_option("--spec", cfg.spec_path,
                    "spec JSON (seed + per-group label/n/mean/cov)");
  synth->add_option("--label", cfg.synth_labels,
                    "group label (repeatable; 1-D shortcut)");
  synth->add_option("--mean", cfg.synth_means, "group mean (repeatable)");
  synth->add_option("--sigma", cfg.synth_sigmas,
                    "group standard deviation (repeatable)");
  synth->add_option("--n", cfg.synth_counts, "group size (repeatable)");

  CLI::App* experiment = app.add_subcommand(
      "experiment", "train OLS baselines, post-process, certify");
  add_common(experiment, cfg, d_grid_text, config_path);
  experiment->add_option("--output-dir", cfg.output_dir,
                         "directory for the report artifacts");
  experiment->add_option("--features", cfg.feature_cols,
                         "feature columns (comma separated; default: all "
                         "except outcome and group)")
      ->delimiter(',');
  experiment->add_flag("--use-l-bound", cfg.use_l_bound,
                       "certify against the analytic bound instead of L_emp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_config_file(app, config_path);
    if (!d_grid_text.empty()) fairpost::cli::parse_d_grid(d_grid_text, cfg);
    if (fit->parsed()) fairpost::cli::cmd_fit(cfg);
    if (frontier->parsed()) fairpost::cli::cmd_frontier(cfg);
    if (certify->parsed()) fairpost::cli::cmd_certify(cfg);
    if (transform->parsed()) fairpost::cli::cmd_transform(cfg);
    if (disparity->parsed()) fairpost::cli::cmd_disparity(cfg);
    if (synth->parsed()) fairpost::cli::cmd_synth(cfg);
    if (experiment->parsed()) fairpost::cli::cmd_experiment(cfg);
  } catch (const fairpost::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const fairpost::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fairpost::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
