#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prodform/formulas.hpp"

namespace prodform {

/// Constants reported for a formula on the random two-term ensemble.
struct PublishedConstants {
  std::optional<double> chi;
  std::optional<double> zeta;
  std::optional<double> m_chi;
  std::optional<double> m_zeta;
};

/// Constants reported for the fermionic ensemble at d = 6 and d = 4 orbitals.
struct FermionicConstants {
  std::optional<double> omega_d6;
  std::optional<double> m_omega_d6;
  std::optional<double> omega_d4;
  std::optional<double> m_omega_d4;
};

struct CatalogEntry {
  std::string label;
  int order = 0;
  int M = 0;  ///< number of stages that are repeated (kernel stages when processed)
  bool processing = false;
  /// Absent for entries whose coefficients are not available (constants only).
  std::optional<FormulaKind> kind;
  std::optional<StageCoefficients> stages;
  std::optional<ProcessedFormula> processed;
  PublishedConstants published;
  FermionicConstants fermionic;
  std::string source;

  bool has_coefficients() const { return stages.has_value() || processed.has_value(); }

  /// Stage weights that set the eigenvalue error (the kernel for processed formulas).
  const StageCoefficients& kernel() const;

  /// Full exponential sequence (processor included for processed formulas).
  template <class T>
  ExponentialSequence<T> sequence(const T& t_scale = T(1), int num_terms = 2) const {
    if (processed) return expand_processed<T>(*processed, t_scale, num_terms);
    return expand<T>(kernel(), t_scale, num_terms);
  }

  template <class T>
  ExponentialSequence<T> kernel_sequence(const T& t_scale = T(1), int num_terms = 2) const {
    return expand<T>(kernel(), t_scale, num_terms);
  }
};

/// Every catalog entry, in table order.  Loaded once from the embedded data.
const std::vector<CatalogEntry>& catalog();

/// Throws std::out_of_range for unknown labels.
const CatalogEntry& catalog_entry(std::string_view label);
const CatalogEntry* find_catalog_entry(std::string_view label);

/// Parses catalog JSON text; exposed for tests and for external catalogs.
std::vector<CatalogEntry> parse_catalog(std::string_view json_text);

/// The JSON text compiled into the library.
std::string_view embedded_catalog_text();

}  // namespace prodform
