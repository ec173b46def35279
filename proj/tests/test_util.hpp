// Shared helpers for the unit tests: extended-precision literals and
// relative-error comparison that stays meaningful across the full range of
// magnitudes the constants pipeline produces.
#pragma once

#include "ucplab/xreal.hpp"

#include <string>

namespace testutil {

inline ucplab::xreal X(const std::string& s) { return ucplab::xreal(s); }

// Relative error |got - want| / max(|want|, 1e-300), as a double for Catch
// message output. Overflow of the conversion surfaces as +inf, which fails
// any tolerance check loudly.
inline double rel_err(const ucplab::xreal& got, const ucplab::xreal& want) {
  using ucplab::xreal;
  const xreal aw = abs(want);
  const xreal floor("1e-300");
  const xreal scale = aw > floor ? aw : floor;
  return ucplab::to_double(xreal(abs(got - want)) / scale);
}

inline double rel_err(const ucplab::xreal& got, const std::string& want) {
  return rel_err(got, X(want));
}

}  // namespace testutil
