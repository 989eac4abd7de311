#ifndef ENVERIFY_TOOLS_OUTPUT_H
#define ENVERIFY_TOOLS_OUTPUT_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace enverify::cli {

inline constexpr const char *kCsvHeader =
    "strategy,F,n,m,m_embed,delta,copies_consumed,ebits_consumed,method,trials,estimate,ci_low,ci_high,seed";

/// One CSV record; unset optionals print as empty fields.
struct CsvRow {
    std::string strategy;
    double fidelity = 0;
    std::optional<int> n;
    int m = 0;
    int m_embed = 0;
    std::optional<double> delta;
    std::optional<double> copies_consumed;
    std::optional<double> ebits_consumed;
    std::string method;
    std::optional<uint64_t> trials;
    std::optional<double> estimate;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<uint64_t> seed;
};

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

void write_csv(std::ostream &out, const std::vector<CsvRow> &rows);

/// 95% Wilson score interval for `accepted` successes in `trials`.
std::pair<double, double> wilson_interval(uint64_t accepted, uint64_t trials);

}  // namespace enverify::cli

#endif
