#pragma once

#include <string>

namespace seqbell::csv {

/// Fixed-point with 12 decimals; negative zero is printed as 0.
std::string fixed12(double value);

/// Fixed-point with 6 decimals for human-readable reports.
std::string fixed6(double value);

}  // namespace seqbell::csv
