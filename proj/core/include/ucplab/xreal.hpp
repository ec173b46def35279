// ucplab: extended-precision scalar used by the constants pipeline.
//
// The composed constants live on wildly different scales: linear values like
// the standard radii sit near 1e-11, while logarithms of the chained
// interpolation constants reach ~1e+11 digits. A binary64 cannot even hold
// log10 of some of them, so every constant evaluation runs in a 60-digit
// float with a 64-bit exponent; quantities that would overflow any linear
// representation are carried as natural logarithms (fields named ln*).
#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <limits>
#include <string>

namespace ucplab {

using xreal = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<
        60, boost::multiprecision::backends::digit_base_10, void, long long>,
    boost::multiprecision::et_off>;

// e, computed once at full precision.
inline const xreal& euler_e() {
  static const xreal e = exp(xreal(1));
  return e;
}

inline const xreal& ln10() {
  static const xreal v = log(xreal(10));
  return v;
}

// Lossy conversion; values beyond double range become +-inf.
inline double to_double(const xreal& x) { return x.convert_to<double>(); }

// log10 of a value given by its natural logarithm.
inline xreal ln_to_log10(const xreal& ln_value) { return ln_value / ln10(); }

// Linear double for a log-domain value, or +-inf/0 when out of double range.
inline double ln_to_linear_double(const xreal& ln_value) {
  if (ln_value > xreal(709)) return std::numeric_limits<double>::infinity();
  if (ln_value < xreal(-745)) return 0.0;
  return to_double(exp(ln_value));
}

// Shortest round-trippable decimal string (for JSON fallback when a value
// does not fit a double).
inline std::string xreal_to_string(const xreal& x, int digits = 20) {
  return x.str(digits, std::ios_base::scientific);
}

}  // namespace ucplab
