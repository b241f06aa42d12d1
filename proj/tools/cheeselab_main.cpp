#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cheeselab/cheese.hpp"
#include "cheeselab/config.hpp"
#include "cheeselab/suites.hpp"

namespace {

// exit codes: 0 all pass, 1 verification/placement failure, 2 config or IO
constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kConfigError = 2;

struct CommonFlags {
  std::string config_path;
  std::string plan_path;
  std::string out_dir;
  double tol = -1.0;
  long long seed = -1;
};

cheeselab::io::RunConfig resolve_config(const CommonFlags& flags) {
  auto config = cheeselab::io::load_config(flags.config_path);
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.tol > 0.0) config.quad_tol = flags.tol;
  if (flags.seed >= 0) config.seed = static_cast<uint64_t>(flags.seed);
  return config;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_plan) {
  cmd->add_option("--config", flags.config_path, "run configuration file")->required();
  if (with_plan) cmd->add_option("--plan", flags.plan_path, "plan document (default <out>/plan.txt)");
  cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
  cmd->add_option("--tol", flags.tol, "quadrature tolerance override");
  cmd->add_option("--seed", flags.seed, "seed override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"truncated swiss-cheese construction and contour-integral verification"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<std::string> ledgers;
  std::string report_out = "out";

  auto* build = app.add_subcommand("build", "construct a cheese plan and render it");
  add_common(build, flags, false);

  auto* verify_ideals =
      app.add_subcommand("verify-ideals", "annihilation, separation, norm and budget checks");
  add_common(verify_ideals, flags, true);

  auto* verify_cole =
      app.add_subcommand("verify-cole", "root-extension operator and tower checks");
  add_common(verify_cole, flags, true);

  auto* report = app.add_subcommand("report", "merge ledgers into a summary and plot");
  report->add_option("ledgers", ledgers, "ledger CSV files");
  report->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    bool ok = true;
    if (build->parsed()) {
      ok = cheeselab::suites::cmd_build(resolve_config(flags));
    } else if (verify_ideals->parsed()) {
      ok = cheeselab::suites::cmd_verify_ideals(resolve_config(flags), flags.plan_path);
    } else if (verify_cole->parsed()) {
      ok = cheeselab::suites::cmd_verify_cole(resolve_config(flags), flags.plan_path);
    } else if (report->parsed()) {
      ok = cheeselab::suites::cmd_report(ledgers, report_out);
    }
    return ok ? kOk : kVerificationFailure;
  } catch (const cheeselab::io::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const cheeselab::cheese::PlacementError& e) {
    std::fprintf(stderr, "placement failure: %s\n", e.what());
    return kVerificationFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  }
}
