#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "firmdyn/config.hpp"

namespace firmdyn::cli {

/// Options shared by every subcommand.
struct Common {
  std::filesystem::path config_path;
  std::optional<std::filesystem::path> output_dir;
};

/// Loads and validates the config, then resolves the output directory with
/// precedence flag > FIRMDYN_OUTPUT_DIR > config.
RunConfig resolve(const Common& common);

int cmd_calibrate(const Common& common, bool check);
int cmd_steady(const Common& common);
int cmd_irf(const Common& common, const std::string& model, const std::string& variant);
int cmd_decompose(const Common& common);
int cmd_variant(const Common& common, const std::string& only);
int cmd_sweep(const Common& common);

}  // namespace firmdyn::cli
