#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "commands.hpp"
#include "firmdyn/errors.hpp"

namespace {

// Exit codes: 0 success, 1 numerical failure, 2 configuration or usage error.
int fail(const char* category, const char* message, int code) {
  std::fprintf(stderr, "firmdyn: error category=%s: %s\n", category, message);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = firmdyn::cli;
  CLI::App app{"New Keynesian firm entry and exit model"};
  app.require_subcommand(1);

  cli::Common common;
  std::string output_dir;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", common.config_path, "flat key = value configuration file")->required();
    sub->add_option("--output-dir", output_dir, "output directory (overrides FIRMDYN_OUTPUT_DIR and config)");
  };

  bool check = false;
  auto* calibrate = app.add_subcommand("calibrate", "calibrate to the targeted moments");
  add_common(calibrate);
  calibrate->add_flag("--check", check, "only report the moment residuals of the given parameters");

  auto* steady = app.add_subcommand("steady", "stationary equilibrium, probability and size profiles");
  add_common(steady);

  std::string model = "hf";
  std::string variant;
  auto* irf = app.add_subcommand("irf", "impulse responses to a monetary policy shock");
  add_common(irf);
  irf->add_option("--model", model, "hf or rf")->check(CLI::IsMember({"hf", "rf"}));
  irf->add_option("--variant", variant, "named variant overriding the config");

  auto* decompose = app.add_subcommand("decompose", "price contributions, employment gaps, distribution shift");
  add_common(decompose);

  std::string only;
  auto* variants = app.add_subcommand("variant", "impact responses across model variants");
  add_common(variants);
  variants->add_option("--only", only, "run a single variant");

  auto* sweep = app.add_subcommand("sweep", "recalibrate and solve across returns to scale");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }
  if (!output_dir.empty()) {
    common.output_dir = output_dir;
  }

  try {
    if (*calibrate) return cli::cmd_calibrate(common, check);
    if (*steady) return cli::cmd_steady(common);
    if (*irf) return cli::cmd_irf(common, model, variant);
    if (*decompose) return cli::cmd_decompose(common);
    if (*variants) return cli::cmd_variant(common, only);
    if (*sweep) return cli::cmd_sweep(common);
  } catch (const firmdyn::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const firmdyn::IndeterminacyError& e) {
    std::fprintf(stderr, "firmdyn: stable_roots=%d required_stable=%d\n", e.stable_roots(), e.required_stable());
    return fail("indeterminacy", e.what(), 1);
  } catch (const firmdyn::ConvergenceError& e) {
    return fail("convergence", e.what(), 1);
  } catch (const firmdyn::NumericalError& e) {
    return fail("numerical", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("io", e.what(), 1);
  }
  return 0;
}
