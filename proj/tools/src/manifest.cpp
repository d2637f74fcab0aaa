#include "manifest.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

namespace prodform::cli {

nlohmann::json Manifest::to_json(const Context& ctx) const {
  nlohmann::json j;
  j["tool"] = "prodform";
  j["version"] = PRODFORM_VERSION;
  j["subcommand"] = subcommand;
  j["argv"] = ctx.argv;
  j["jobs"] = ctx.jobs;
  j["digits"] = ctx.digits;
  j["tier"] = tier;
  j["config"] = config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  return j;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_manifest(const Manifest& m, const Context& ctx, const std::string& output,
                    const std::string& explicit_path) {
  std::string path = explicit_path;
  if (path.empty()) {
    if (output.empty() || output == "-") return;
    path = output + ".manifest.json";
  }
  write_output(path, m.to_json(ctx).dump(2) + "\n");
}

}  // namespace prodform::cli
