#include "nonspam/csv.hpp"

#include <cstdio>

namespace nonspam {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace nonspam
