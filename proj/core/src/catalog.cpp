#include "prodform/catalog.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <stdexcept>

namespace prodform {

namespace detail {
extern const std::string_view kCatalogJson;
}

namespace {

constexpr int kLoadDigits = 40;
constexpr int kStoreDigits = 36;

std::optional<double> opt_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::vector<std::string> strings(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j.at(key)) out.push_back(v.get<std::string>());
  return out;
}

// Completes a list whose last element is fixed by a linear constraint:
// w_0 = 1 - 2 sum(tail) for stage weights, g_G = -sum(head) for processors.
std::string implied_value(const std::vector<std::string>& values, const MpReal& offset, const MpReal& factor) {
  MpReal s(0);
  for (const auto& v : values) s += MpReal(v);
  return format_real(MpReal(offset + factor * s), kStoreDigits);
}

StageCoefficients weights_from_tail(const std::string& label, int order, const std::vector<std::string>& tail,
                                    const std::string& source) {
  StageCoefficients sc;
  sc.label = label;
  sc.order = order;
  sc.source = source;
  sc.w.push_back(implied_value(tail, MpReal(1), MpReal(-2)));
  sc.w.insert(sc.w.end(), tail.begin(), tail.end());
  return sc;
}

StageCoefficients generated_weights(const std::string& label, int order, const std::string& name, int kappa) {
  std::vector<MpReal> stages;
  if (name == "suzuki_first") {
    stages = suzuki_first_stages<MpReal>(kappa);
  } else if (name == "suzuki_second") {
    stages = suzuki_second_stages<MpReal>(kappa);
  } else {
    throw std::runtime_error("catalog: unknown generator " + name);
  }
  StageCoefficients sc;
  sc.label = label;
  sc.order = order;
  sc.source = "generated";
  for (const auto& v : stages_to_weights(stages)) sc.w.push_back(format_real(v, kStoreDigits));
  return sc;
}

}  // namespace

const StageCoefficients& CatalogEntry::kernel() const {
  if (processed) return processed->kernel;
  if (stages) return *stages;
  throw std::logic_error("catalog entry " + label + " has no coefficients");
}

std::vector<CatalogEntry> parse_catalog(std::string_view json_text) {
  MpPrecisionScope precision(kLoadDigits);
  const auto doc = nlohmann::json::parse(json_text);
  std::vector<CatalogEntry> out;
  std::set<std::string> seen;
  for (const auto& j : doc.at("entries")) {
    CatalogEntry e;
    e.label = j.at("label").get<std::string>();
    if (!seen.insert(e.label).second) throw std::runtime_error("catalog: duplicate label " + e.label);
    e.order = j.at("order").get<int>();
    e.M = j.at("M").get<int>();
    e.processing = j.value("processing", false);
    e.source = j.value("source", std::string());
    if (j.contains("published")) {
      const auto& p = j.at("published");
      e.published = {opt_number(p, "chi"), opt_number(p, "zeta"), opt_number(p, "m_chi"), opt_number(p, "m_zeta")};
    }
    if (j.contains("omega")) {
      const auto& o = j.at("omega");
      e.fermionic = {opt_number(o, "d6"), opt_number(o, "m_omega_d6"), opt_number(o, "d4"),
                     opt_number(o, "m_omega_d4")};
    }
    const std::string kind = j.value("kind", std::string("stub"));
    if (kind == "plain") {
      if (j.contains("generator")) {
        const auto& g = j.at("generator");
        e.stages = generated_weights(e.label, e.order, g.at("name").get<std::string>(), g.at("kappa").get<int>());
        e.kind = FormulaKind::kPlain;
      } else {
        auto tail = strings(j, "w_tail");
        if (!tail.empty()) {
          e.stages = weights_from_tail(e.label, e.order, tail, e.source);
          e.kind = FormulaKind::kPlain;
        }
      }
    } else if (kind == "processed") {
      auto tail = strings(j, "w_tail");
      auto head = strings(j, "gamma_head");
      if (!tail.empty() && !head.empty()) {
        ProcessedFormula pf;
        pf.order = e.order;
        pf.kernel = weights_from_tail(e.label, e.order, tail, e.source);
        pf.gammas = head;
        pf.gammas.push_back(implied_value(head, MpReal(0), MpReal(-1)));
        e.processed = std::move(pf);
        e.kind = FormulaKind::kProcessed;
      } else if (!tail.empty()) {
        // kernel known, processor not yet available
        e.stages = weights_from_tail(e.label, e.order, tail, e.source);
        e.kind = FormulaKind::kKernel;
      }
    } else if (kind != "stub") {
      throw std::runtime_error("catalog: unknown kind " + kind);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string_view embedded_catalog_text() { return detail::kCatalogJson; }

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = parse_catalog(detail::kCatalogJson);
  return entries;
}

const CatalogEntry* find_catalog_entry(std::string_view label) {
  for (const auto& e : catalog())
    if (e.label == label) return &e;
  return nullptr;
}

const CatalogEntry& catalog_entry(std::string_view label) {
  const auto* e = find_catalog_entry(label);
  if (!e) throw std::out_of_range("no catalog entry named " + std::string(label));
  return *e;
}

}  // namespace prodform
