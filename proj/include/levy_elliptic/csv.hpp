#pragma once

#include <string>

namespace levy_elliptic {

/// Round-trip formatting of a double with 17 significant digits.
std::string fmt17(double value);

}  // namespace levy_elliptic
