#include "etac/format.hpp"

#include <cstdio>

namespace etac {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace etac
