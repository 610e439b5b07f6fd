#include "seqbell/csv.hpp"

#include <cstdio>

namespace seqbell::csv {
namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out(buf);
  // "-0.000..." carries no information and breaks byte comparisons.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

}  // namespace

std::string fixed12(double value) { return fixed(value, 12); }
std::string fixed6(double value) { return fixed(value, 6); }

}  // namespace seqbell::csv
