#include "prodform/formula_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace prodform {

const char* kind_name(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::kPlain:
      return "plain";
    case FormulaKind::kKernel:
      return "kernel";
    case FormulaKind::kProcessed:
      return "processed";
  }
  return "plain";
}

FormulaKind parse_kind(const std::string& text) {
  if (text == "plain") return FormulaKind::kPlain;
  if (text == "kernel") return FormulaKind::kKernel;
  if (text == "processed") return FormulaKind::kProcessed;
  throw std::invalid_argument("unknown formula kind: " + text);
}

StageCoefficients FormulaFile::stages() const {
  StageCoefficients s;
  s.label = label;
  s.order = order;
  s.w = w;
  s.source = source;
  return s;
}

ProcessedFormula FormulaFile::processed() const {
  if (kind != FormulaKind::kProcessed) throw std::logic_error(label + " is not a processed formula");
  ProcessedFormula p;
  p.kernel = stages();
  p.gammas = gammas;
  p.order = order;
  return p;
}

FormulaFile FormulaFile::from_stages(const StageCoefficients& s, FormulaKind kind) {
  FormulaFile f;
  f.label = s.label;
  f.order = s.order;
  f.kind = kind;
  f.w = s.w;
  f.source = s.source;
  return f;
}

FormulaFile FormulaFile::from_processed(const ProcessedFormula& p) {
  FormulaFile f = from_stages(p.kernel, FormulaKind::kProcessed);
  f.order = p.order;
  f.gammas = p.gammas;
  return f;
}

FormulaFile FormulaFile::from_catalog(const CatalogEntry& e) {
  if (!e.has_coefficients()) throw std::runtime_error("catalog entry " + e.label + " carries constants only");
  FormulaFile f = e.processed ? from_processed(*e.processed) : from_stages(*e.stages, *e.kind);
  f.label = e.label;
  f.source = e.source;
  return f;
}

std::string write_formula(const FormulaFile& f) {
  nlohmann::json j;
  j["label"] = f.label;
  j["order"] = f.order;
  j["kind"] = kind_name(f.kind);
  j["w"] = f.w;
  j["gammas"] = f.gammas;
  j["source"] = f.source;
  return j.dump(2) + "\n";
}

FormulaFile read_formula(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  FormulaFile f;
  f.label = j.at("label").get<std::string>();
  f.order = j.at("order").get<int>();
  f.kind = parse_kind(j.value("kind", std::string("plain")));
  f.w = j.at("w").get<std::vector<std::string>>();
  if (j.contains("gammas")) f.gammas = j.at("gammas").get<std::vector<std::string>>();
  f.source = j.value("source", std::string());
  if (f.w.empty()) throw std::invalid_argument("formula " + f.label + " has no weights");
  if (f.kind == FormulaKind::kProcessed && f.gammas.empty())
    throw std::invalid_argument("processed formula " + f.label + " has no processor");
  // reject malformed numbers early
  for (const auto& s : f.w) (void)parse_real<double>(s);
  for (const auto& s : f.gammas) (void)parse_real<double>(s);
  return f;
}

FormulaFile load_formula_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_formula(ss.str());
}

void save_formula_file(const FormulaFile& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << write_formula(f);
}

FormulaFile resolve_formula(const std::string& spec) {
  constexpr std::string_view prefix = "catalog:";
  if (spec.rfind(prefix, 0) == 0) return FormulaFile::from_catalog(catalog_entry(spec.substr(prefix.size())));
  return load_formula_file(spec);
}

}  // namespace prodform
