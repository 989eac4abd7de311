#include "output.h"

#include <charconv>
#include <cmath>
#include <ostream>

namespace enverify::cli {

std::string format_number(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, end);
}

namespace {

template <class T>
std::string field(const std::optional<T> &v) {
    if (!v) {
        return "";
    }
    if constexpr (std::is_floating_point_v<T>) {
        return format_number(*v);
    } else {
        return std::to_string(*v);
    }
}

}  // namespace

void write_csv(std::ostream &out, const std::vector<CsvRow> &rows) {
    out << kCsvHeader << "\n";
    for (const auto &r : rows) {
        out << r.strategy << ',' << format_number(r.fidelity) << ',' << field(r.n) << ',' << r.m << ',' << r.m_embed
            << ',' << field(r.delta) << ',' << field(r.copies_consumed) << ',' << field(r.ebits_consumed) << ','
            << r.method << ',' << field(r.trials) << ',' << field(r.estimate) << ',' << field(r.ci_low) << ','
            << field(r.ci_high) << ',' << field(r.seed) << "\n";
    }
}

std::pair<double, double> wilson_interval(uint64_t accepted, uint64_t trials) {
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(accepted) / n;
    const double denom = 1 + z * z / n;
    const double centre = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace enverify::cli
