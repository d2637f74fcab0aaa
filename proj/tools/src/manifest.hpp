#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"

namespace prodform::cli {

/// Run manifest: subcommand, full configuration, tier, version and paths.
struct Manifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  std::string tier;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  nlohmann::json to_json(const Context& ctx) const;
};

/// Writes the manifest next to `output` (as output + ".manifest.json"), or to
/// `explicit_path` when given.  Does nothing when both are empty.
void write_manifest(const Manifest& m, const Context& ctx, const std::string& output,
                    const std::string& explicit_path);

/// Writes `text` to `path`, or to stdout when `path` is empty or "-".
void write_output(const std::string& path, const std::string& text);

}  // namespace prodform::cli
