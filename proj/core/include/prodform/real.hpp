#pragma once

// Scalar types for the two precision tiers and conversion helpers.
//
// Everything numeric in prodform is templated on the scalar type.  Three types
// are instantiated: `double` for search, `Quad` (34 significant digits, fixed
// width and allocation free) for verification and benchmarks, and `MpReal`
// (MPFR, precision chosen at run time) when more than 33 digits are requested.

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>

namespace prodform {

using Quad = boost::multiprecision::float128;
using MpReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                             boost::multiprecision::et_off>;

enum class Tier { kDouble, kQuad, kMulti };

/// Tier selection used by every `--digits N` flag: N <= 17 runs in doubles,
/// N <= 33 in quad precision, anything larger in MPFR.
Tier tier_for_digits(int digits);

const char* tier_name(Tier tier);

/// Sets the MPFR working precision for the lifetime of the object.
class MpPrecisionScope {
 public:
  explicit MpPrecisionScope(int digits10);
  ~MpPrecisionScope();
  MpPrecisionScope(const MpPrecisionScope&) = delete;
  MpPrecisionScope& operator=(const MpPrecisionScope&) = delete;

 private:
  unsigned previous_;
};

template <class T>
inline constexpr bool is_real_v =
    std::is_same_v<T, double> || std::is_same_v<T, Quad> || std::is_same_v<T, MpReal>;

template <class T>
T parse_real(std::string_view text) {
  static_assert(is_real_v<T>);
  std::string s(text);
  if constexpr (std::is_same_v<T, double>) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw std::invalid_argument("not a number: " + s);
    return v;
  } else {
    // boost throws std::runtime_error on malformed input
    return T(s);
  }
}

/// Significant decimal digits carried by T at the current precision.
template <class T>
int digits10() {
  if constexpr (std::is_same_v<T, MpReal>) {
    return static_cast<int>(MpReal::default_precision());
  } else {
    return std::numeric_limits<T>::digits10;
  }
}

template <class T>
T machine_epsilon() {
  if constexpr (std::is_same_v<T, MpReal>) {
    using std::pow;
    return pow(MpReal(10), -digits10<MpReal>());
  } else {
    return std::numeric_limits<T>::epsilon();
  }
}

/// Round-trippable decimal text; `digits <= 0` means "all the digits T holds".
template <class T>
std::string format_real(const T& value, int digits = 0) {
  std::ostringstream os;
  int prec = digits;
  if (prec <= 0) {
    if constexpr (std::is_same_v<T, double>) {
      prec = std::numeric_limits<double>::max_digits10;
    } else if constexpr (std::is_same_v<T, Quad>) {
      prec = std::numeric_limits<Quad>::max_digits10;
    } else {
      prec = digits10<T>() + 2;
    }
  }
  os.precision(prec);
  os << value;
  return os.str();
}

template <class T>
double to_double(const T& value) {
  if constexpr (std::is_same_v<T, double>) {
    return value;
  } else {
    return value.template convert_to<double>();
  }
}

template <class T>
T ipow(T base, int exponent) {
  T result(1);
  bool invert = exponent < 0;
  unsigned e = static_cast<unsigned>(invert ? -exponent : exponent);
  while (e != 0) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return invert ? T(1) / result : result;
}

template <class T>
T from_double(double v) {
  return T(v);
}

template <class T>
T sqrt_of(const T& x) {
  using std::sqrt;
  return T(sqrt(x));
}

/// 10^e and friends for any tier.
template <class T>
T pow_of(const T& base, int exponent) {
  using std::pow;
  return T(pow(base, T(exponent)));
}

}  // namespace prodform
