#include "crosscheck.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "enverify/analytic.h"
#include "enverify/dense_sim.h"
#include "enverify/ghz.h"
#include "enverify/oracle.h"
#include "enverify/protocol.h"
#include "output.h"

namespace enverify::cli {

namespace {

NoiseModel family_noise(const StrategySpec &spec, const Rational &f) {
    if (spec.kind == StrategyKind::Rank2Full || spec.kind == StrategyKind::Rank2Subspace) {
        return NoiseModel::rank2(f);
    }
    return NoiseModel::werner(f);
}

std::vector<StrategySpec> strategies_up_to(int n) {
    const int digits = ceil_log2(static_cast<long>(n) + 1);
    std::vector<StrategySpec> out = {StrategySpec::rank2_full(n), StrategySpec::werner_full(n),
                                     StrategySpec::single_copy(n), StrategySpec::embed_eng(n, digits)};
    for (int m = 1; m <= digits; m++) {
        out.push_back(StrategySpec::rank2_subspace(n, m));
        out.push_back(StrategySpec::werner_subspace(n, m));
        out.push_back(StrategySpec::embed_eng_subspace(n, digits, m));
    }
    if (n <= 3) {
        out.push_back(StrategySpec::direct_embed_measure(n));
    }
    return out;
}

void record(CheckResult &r, double deviation) {
    r.cases++;
    r.max_deviation = std::max(r.max_deviation, deviation);
    if (!(deviation <= r.tolerance)) {
        r.passed = false;
    }
}

}  // namespace

std::vector<CheckResult> run_crosscheck(const CrosscheckOptions &options) {
    const Rational fault_exact = options.inject_fault ? Rational(1, 1000000000) : Rational(0);
    const double fault = options.inject_fault ? 1e-9 : 0.0;

    CheckResult exact{"analytic-exact-vs-oracle", 0, 0, 0, true};
    CheckResult floating{"analytic-float-vs-oracle", 0, 0, 1e-12, true};
    for (const auto &f : options.fidelities) {
        for (int n = 1; n <= options.max_n; n++) {
            for (const auto &spec : strategies_up_to(n)) {
                if (spec.uses_embedded_aux() && f < Rational(1, 2)) {
                    continue;
                }
                Rational oracle = enumerate_strategy_failure(spec, family_noise(spec, f));
                Rational closed = strategy_failure(spec, f) + fault_exact;
                record(exact, std::abs(to_double(Rational(closed - oracle))));
                double approx = strategy_failure(spec, to_double(f)) + fault;
                record(floating, std::abs(approx - to_double(oracle)));
            }
        }
    }

    CheckResult sampled{"monte-carlo-vs-oracle (sigma)", 0, 0, 4, true};
    const int mc_n = std::min(options.max_n, 6);
    for (const auto &f : options.fidelities) {
        for (auto spec : {StrategySpec::rank2_full(mc_n), StrategySpec::werner_full(mc_n),
                          StrategySpec::werner_subspace(mc_n, 1), StrategySpec::embed_eng(mc_n, ceil_log2(mc_n + 1L))}) {
            if (spec.uses_embedded_aux() && f < Rational(1, 2)) {
                continue;
            }
            auto noise = family_noise(spec, f);
            const double p = to_double(enumerate_strategy_failure(spec, noise)) + fault;
            auto est = monte_carlo(spec, noise, options.trials, options.seed, options.workers);
            const double sigma = std::sqrt(std::max(p * (1 - p), 1e-300) / static_cast<double>(est.trials));
            record(sampled, std::abs(est.estimate - p) / sigma);
        }
    }

    CheckResult dense{"dense-vs-oracle", 0, 0, 1e-10, true};
    const int dense_n = std::min(options.max_n, 3);
    for (const auto &f : options.fidelities) {
        if (f < Rational(1, 2)) {
            continue;
        }
        for (auto spec : {StrategySpec::rank2_full(dense_n), StrategySpec::werner_full(dense_n),
                          StrategySpec::werner_subspace(dense_n, 1), StrategySpec::embed_eng(dense_n, 2)}) {
            auto noise = family_noise(spec, f);
            const double p = to_double(enumerate_strategy_failure(spec, noise)) + fault;
            record(dense, std::abs(dense_strategy_acceptance(spec, noise) - p));
        }
    }

    CheckResult ghz{"ghz-dp-vs-enumeration", 0, 0, 0, true};
    for (const auto &f : options.fidelities) {
        auto noise = GhzDiagonalState::white_noise(3, f);
        for (int n = 1; n <= std::min(options.max_n, 6); n++) {
            Rational dp = ghz_failure_probability<Rational>(noise, n, GhzRounds::AmplitudeOnly) + fault_exact;
            Rational enumerated = enumerate_ghz_amplitude_acceptance(noise, n);
            record(ghz, std::abs(to_double(Rational(dp - enumerated))));
        }
    }
    return {exact, floating, sampled, dense, ghz};
}

void print_report(std::ostream &out, const std::vector<CheckResult> &results) {
    for (const auto &r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases
            << " max_deviation=" << format_number(r.max_deviation) << " tolerance=" << format_number(r.tolerance)
            << "\n";
    }
}

}  // namespace enverify::cli
