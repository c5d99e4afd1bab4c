#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace secdispatch::csv {

/// 9 significant digits; "inf"/"nan" for non-finite values.
std::string number(double v);

void write_row(std::ostream& os, const std::vector<std::string>& cells);

}  // namespace secdispatch::csv
