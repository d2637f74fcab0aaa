#include "prodform/real.hpp"

namespace prodform {

Tier tier_for_digits(int digits) {
  if (digits <= 17) return Tier::kDouble;
  if (digits <= 33) return Tier::kQuad;
  return Tier::kMulti;
}

const char* tier_name(Tier tier) {
  switch (tier) {
    case Tier::kDouble:
      return "double";
    case Tier::kQuad:
      return "quad";
    case Tier::kMulti:
      return "mpfr";
  }
  return "unknown";
}

MpPrecisionScope::MpPrecisionScope(int digits10) : previous_(MpReal::default_precision()) {
  MpReal::default_precision(static_cast<unsigned>(digits10));
}

MpPrecisionScope::~MpPrecisionScope() { MpReal::default_precision(previous_); }

}  // namespace prodform
