#pragma once

// Formula files: one JSON object per formula,
//   {"label", "order", "kind": "plain"|"kernel"|"processed",
//    "w": [w_0, ..., w_m], "gammas": [g_1, ..., g_G], "source"}
// with every coefficient stored as a decimal string.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "prodform/catalog.hpp"
#include "prodform/formulas.hpp"

namespace prodform {

struct FormulaFile {
  std::string label;
  int order = 2;
  FormulaKind kind = FormulaKind::kPlain;
  std::vector<std::string> w;
  std::vector<std::string> gammas;
  std::string source;

  StageCoefficients stages() const;
  ProcessedFormula processed() const;  ///< throws unless kind is processed

  static FormulaFile from_stages(const StageCoefficients& s, FormulaKind kind = FormulaKind::kPlain);
  static FormulaFile from_processed(const ProcessedFormula& p);
  static FormulaFile from_catalog(const CatalogEntry& e);

  friend bool operator==(const FormulaFile&, const FormulaFile&) = default;
};

std::string write_formula(const FormulaFile& f);
FormulaFile read_formula(std::string_view text);

FormulaFile load_formula_file(const std::filesystem::path& path);
void save_formula_file(const FormulaFile& f, const std::filesystem::path& path);

/// Resolves "catalog:LABEL" through the built-in catalog, anything else as a path.
FormulaFile resolve_formula(const std::string& spec);

}  // namespace prodform
