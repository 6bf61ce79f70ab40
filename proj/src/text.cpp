#include "trisk/text.hpp"

#include "trisk/errors.hpp"

#include <cstdio>
#include <cstdlib>

namespace trisk::text {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

std::string format_fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string format_opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

double parse_double(const std::string& cell, const std::string& context) {
    if (cell.empty()) {
        throw SchemaError("empty numeric cell in " + context);
    }
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size()) {
        throw SchemaError("cannot parse number '" + cell + "' in " + context);
    }
    return v;
}

} // namespace trisk::text
