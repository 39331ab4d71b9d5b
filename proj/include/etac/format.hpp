#pragma once

#include <string>

namespace etac {

/// Doubles rendered with 17 significant digits: lossless round trip.
std::string format_double(double v);

}  // namespace etac
