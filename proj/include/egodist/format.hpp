#pragma once

#include <string>

namespace egodist {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace egodist
