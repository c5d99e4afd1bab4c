#include "secdispatch/csv.hpp"

#include <cmath>
#include <cstdio>

namespace secdispatch::csv {

std::string number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_row(std::ostream& os, const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

}  // namespace secdispatch::csv
