#pragma once

#include <string>

namespace nonspam {

/// Decimal rendering with 12 significant digits ("%.12g"), the precision
/// shared by every CSV this library writes.
std::string format_number(double value);

}  // namespace nonspam
