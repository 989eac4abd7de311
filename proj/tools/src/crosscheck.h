#ifndef ENVERIFY_TOOLS_CROSSCHECK_H
#define ENVERIFY_TOOLS_CROSSCHECK_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "enverify/rational.h"

namespace enverify::cli {

struct CrosscheckOptions {
    int max_n = 6;
    std::vector<Rational> fidelities;
    uint64_t trials = 200000;
    uint64_t seed = 1;
    int workers = 1;
    /// Perturbs the closed forms so the comparison must fail.
    bool inject_fault = false;
};

struct CheckResult {
    std::string name;
    int cases = 0;
    double max_deviation = 0;
    double tolerance = 0;
    bool passed = true;
};

/// analytic = oracle (exact and float), Monte Carlo = oracle within 4
/// sigma, dense simulation = oracle, GHZ dynamic program = enumeration.
std::vector<CheckResult> run_crosscheck(const CrosscheckOptions &options);

void print_report(std::ostream &out, const std::vector<CheckResult> &results);

}  // namespace enverify::cli

#endif
