#pragma once

#include <cstdio>
#include <string>

#include "renyi/bounds.hpp"
#include "renyi/conditional.hpp"
#include "renyi/couplers.hpp"
#include "renyi/extremal.hpp"
#include "renyi/oracle.hpp"
#include "renyi/orders.hpp"
#include "renyi/simplex.hpp"

namespace renyi {

/// Twelve significant digits, trailing zeros kept. The C locale is never
/// changed, so the decimal point is always '.'.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", v);
  return buf;
}

}  // namespace renyi
