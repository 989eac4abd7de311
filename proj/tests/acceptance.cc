// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "enverify/analytic.h"
#include "enverify/dense_sim.h"
#include "enverify/ghz.h"
#include "enverify/oracle.h"
#include "enverify/protocol.h"
#include "reproduce.h"

using namespace enverify;

namespace {

struct Check {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok && passed) {
            detail << "violated: " << what << "; ";
        }
        passed = passed && ok;
    }
};

const PairNames kAux{"AX", "BX"};
const std::vector<std::string> kFidelities = {"0.5", "0.7", "0.9", "0.99"};

int worker_count() {
    return static_cast<int>(std::max(2u, std::thread::hardware_concurrency()));
}

StateVector add(const StateVector &a, Complex ca, const StateVector &b, Complex cb) {
    StateVector out = a;
    for (size_t i = 0; i < out.size(); i++) {
        out.amplitudes()[i] = ca * a.amplitudes()[i] + cb * b.amplitudes()[i];
    }
    return out;
}

std::vector<StrategySpec> oracle_strategies(int n) {
    std::vector<StrategySpec> out = {StrategySpec::rank2_full(n), StrategySpec::werner_full(n)};
    for (int m = 1; m <= ceil_log2(n + 1); m++) {
        out.push_back(StrategySpec::rank2_subspace(n, m));
        out.push_back(StrategySpec::werner_subspace(n, m));
    }
    return out;
}

NoiseModel noise_for(const StrategySpec &spec, const Rational &f) {
    switch (spec.kind) {
        case StrategyKind::Rank2Full:
        case StrategyKind::Rank2Subspace:
            return NoiseModel::rank2(f);
        default:
            return NoiseModel::werner(f);
    }
}

void oracle_equivalence(Check &v) {
    auto start = std::chrono::steady_clock::now();
    int cases = 0;
    double worst = 0;
    for (const auto &text : kFidelities) {
        const Rational f = rat(text);
        for (int n = 1; n <= 10; n++) {
            for (const auto &spec : oracle_strategies(n)) {
                const Rational truth = enumerate_strategy_failure(spec, noise_for(spec, f));
                v.require(strategy_failure<Rational>(spec, f) == truth, spec.name() + " exact F=" + text);
                const double dev = std::abs(strategy_failure<double>(spec, to_double(f)) - to_double(truth));
                worst = std::max(worst, dev);
                v.require(dev <= 1e-12, spec.name() + " float F=" + text);
                cases++;
            }
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(seconds < 60, "runtime under 60 s");
    v.detail << cases << " cases, exact match, max float deviation " << worst << ", " << seconds << " s";
}

void weight_form_consistency(Check &v) {
    int cases = 0;
    for (const auto &text : kFidelities) {
        const Rational f = rat(text);
        const Rational q = fidelity_to_q(f, 2);
        for (int n = 1; n <= 12; n++) {
            v.require(werner_delta_from_weight(q, n) == werner_delta_full(f, n), "full n=" + std::to_string(n));
            for (int m = 1; m <= ceil_log2(n + 1); m++) {
                v.require(werner_delta_subspace_from_weight(q, n, m) == werner_delta_subspace(f, n, m),
                          "subspace n=" + std::to_string(n) + " m=" + std::to_string(m));
                cases++;
            }
            cases++;
        }
    }
    v.detail << cases << " exact comparisons";
}

void monte_carlo_validation(Check &v) {
    struct Combo {
        StrategySpec spec;
        NoiseModel noise;
    };
    const std::vector<Combo> combos = {
        {StrategySpec::rank2_full(5), NoiseModel::rank2(rat("0.7"))},
        {StrategySpec::rank2_full(22), NoiseModel::rank2(rat("0.9"))},
        {StrategySpec::rank2_subspace(7, 2), NoiseModel::rank2(rat("0.8"))},
        {StrategySpec::werner_full(2), NoiseModel::werner(rat("0.7"))},
        {StrategySpec::werner_full(9), NoiseModel::werner(rat("0.9"))},
        {StrategySpec::werner_subspace(3, 1), NoiseModel::werner(rat("0.7"))},
        {StrategySpec::werner_subspace(15, 3), NoiseModel::werner(rat("0.9"))},
        {StrategySpec::direct_embed_measure(2), NoiseModel::werner(rat("0.9"))},
        {StrategySpec::embed_eng(3, 2), NoiseModel::werner(rat("0.9"))},
        {StrategySpec::embed_eng(7, 3), NoiseModel::werner(rat("0.8"))},
        {StrategySpec::embed_eng_subspace(7, 3, 2), NoiseModel::werner(rat("0.85"))},
        {StrategySpec::single_copy(5), NoiseModel::werner(rat("0.9"))},
    };
    const uint64_t trials = 1000000;
    const int workers = worker_count();
    double worst_sigma = 0;
    for (size_t i = 0; i < combos.size(); i++) {
        const auto &c = combos[i];
        const double p = strategy_failure<double>(c.spec, to_double(c.noise.fidelity()));
        auto est = monte_carlo(c.spec, c.noise, trials, 1000 + i, workers);
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
        const double z = sigma > 0 ? std::abs(est.estimate - p) / sigma : (est.estimate == p ? 0 : INFINITY);
        worst_sigma = std::max(worst_sigma, z);
        v.require(z <= 4, c.spec.name() + " within 4 sigma");
    }
    for (size_t i : {size_t{1}, size_t{9}}) {
        const auto &c = combos[i];
        auto one = monte_carlo(c.spec, c.noise, trials, 77, 1);
        auto many = monte_carlo(c.spec, c.noise, trials, 77, workers);
        v.require(one.accepted == many.accepted, c.spec.name() + " identical across worker counts");
    }
    v.detail << combos.size() << " combos x " << trials << " trials, worst deviation " << worst_sigma
             << " sigma, workers 1 vs " << workers << " identical";
}

void counter_gate_action(Check &v) {
    const PairNames ctl{"A1", "B1"};
    double worst = 1;
    auto check = [&](const StateVector &got, const StateVector &want, const std::string &what) {
        const double f = state_fidelity(got, want);
        worst = std::min(worst, f);
        v.require(f >= 1 - 1e-10, what);
    };
    for (int d : {2, 4, 8}) {
        for (int j = 0; j < d; j++) {
            const auto aux = [&](int index) { return make_qudit_bell(d, 0, ((index % d) + d) % d, "AX", "BX"); };
            const std::string where = " d=" + std::to_string(d) + " j=" + std::to_string(j);
            for (int m = 0; m < 2; m++) {
                for (int n = 0; n < 2; n++) {
                    auto s = make_product_pair(m, n, "A1", "B1").tensor(aux(j));
                    apply_bcx(s, ctl, kAux);
                    check(s, make_product_pair(m, n, "A1", "B1").tensor(aux(j - m + n)),
                          "|" + std::to_string(m) + std::to_string(n) + ">" + where);
                }
            }
            for (int i = 0; i < 2; i++) {
                auto s = make_bell(i, 0, "A1", "B1").tensor(aux(j));
                auto before = s;
                apply_bcx(s, ctl, kAux);
                check(s, before, "Psi" + std::to_string(i) + "0 invariant" + where);
            }
            const double r = 1 / std::sqrt(2.0);
            auto up = make_product_pair(0, 1, "A1", "B1").tensor(aux(j + 1));
            auto down = make_product_pair(1, 0, "A1", "B1").tensor(aux(j - 1));
            for (int i = 0; i < 2; i++) {
                auto s = make_bell(i, 1, "A1", "B1").tensor(aux(j));
                apply_bcx(s, ctl, kAux);
                check(s, add(up, r, down, i == 0 ? r : -r), "Psi" + std::to_string(i) + "1 superposition" + where);
            }
        }
    }
    v.detail << "computational and Bell controls, d in {2,4,8}, min fidelity " << worst;
}

void eng_joint_state(Check &v) {
    const int n = 3;
    const int d = 4;
    const double f = 0.8;
    auto ensemble = ensemble_state(NoiseModel::rank2(rat("0.8")), n);
    auto pairs = ensemble_pairs(n);
    auto after = apply_eng(ensemble.tensor(MixedState(make_qudit_bell(d, 0, 0, "AX", "BX"))), pairs, kAux);

    // sum_j C(n,j) F^(n-j) (1-F)^j Gamma_j (x) Phi_0j, with Gamma_j the
    // uniform mixture over placements of j copies of |01>.
    std::vector<MixedState::Term> terms;
    for (unsigned mask = 0; mask < (1u << n); mask++) {
        int j = 0;
        StateVector s;
        for (int k = 0; k < n; k++) {
            const bool flipped = (mask >> k) & 1u;
            j += flipped;
            const auto a = "A" + std::to_string(k + 1);
            const auto b = "B" + std::to_string(k + 1);
            auto copy = flipped ? make_product_pair(0, 1, a, b) : make_bell(0, 0, a, b);
            s = k == 0 ? copy : s.tensor(copy);
        }
        s = s.tensor(make_qudit_bell(d, 0, j, "AX", "BX"));
        terms.push_back({std::pow(f, n - j) * std::pow(1 - f, j), s});
    }
    MixedState expected(terms);
    std::vector<std::string> names;
    for (const auto &sub : expected.layout()) {
        names.push_back(sub.name);
    }
    const double td = trace_distance(after.reordered(names), expected);
    v.require(td <= 1e-10, "trace distance <= 1e-10");
    v.detail << "rank-2 F=0.8 n=3 d=4, trace distance " << td;
}

void parity_reembed_round_trip(Check &v) {
    const int n = 3;
    const int d = 8;
    auto ensemble = ensemble_state(NoiseModel::werner(rat("0.8")), n);
    std::vector<std::string> ens_names;
    for (const auto &sub : ensemble.layout()) {
        ens_names.push_back(sub.name);
    }
    const auto fresh = make_qudit_bell(d, 0, 0, "AX", "BX");
    auto pairs = ensemble_pairs(n);
    auto after = apply_eng(ensemble.tensor(MixedState(fresh)), pairs, kAux);
    double worst = 0;
    int branches = 0;
    for (const auto &rec : measure_parity_pair(after, kAux)) {
        if (rec.probability < 1e-12) {
            continue;
        }
        branches++;
        auto back = apply_eng_inverse(reembed_and_correct(rec.post_state, kAux, rec.label), pairs, kAux);
        auto reduced = MixedState::from_density_matrix(ensemble.layout(), back.reduced_density_matrix(ens_names));
        const double td = trace_distance(back, reduced.tensor(MixedState(fresh)));
        worst = std::max(worst, td);
        v.require(td <= 1e-10, "product form after " + to_string(rec.label));
    }
    v.require(branches == 4, "all four outcomes occur");
    v.detail << "Werner F=0.8 n=3 d=8, " << branches << " outcomes, max product-form distance " << worst;
}

void embedding_formula(Check &v) {
    const double expected_q = (16 * 0.81 - 1) / 15;
    auto fused = embed_pairs(ensemble_state(NoiseModel::werner(rat("0.9")), 2), side_names('A', 2),
                             side_names('B', 2), "A", "B");
    const double q_dense = to_double(twirl_to_isotropic(fused).weight());
    const double q_analytic = embedding_q(0.9, 2).q;
    const double delta = dense_strategy_acceptance(StrategySpec::direct_embed_measure(2), NoiseModel::werner(rat("0.9")));
    v.require(std::abs(q_dense - expected_q) <= 1e-12, "dense q");
    v.require(std::abs(q_analytic - expected_q) <= 1e-12, "analytic q");
    v.require(std::abs(delta - 0.848) <= 1e-12, "direct measurement delta");
    v.detail << "q dense " << q_dense << " analytic " << q_analytic << " expected " << expected_q << ", delta "
             << delta;
}

void subspace_asymptote(Check &v) {
    double worst = 0;
    for (double f : {0.7, 0.9}) {
        for (int m = 1; m <= 3; m++) {
            const double target = std::ldexp(1.0, -m);
            const double rel = std::abs(werner_delta_subspace(f, 1023, m) - target) / target;
            worst = std::max(worst, rel);
            v.require(rel <= 0.05, "F=" + std::to_string(f) + " m=" + std::to_string(m));
        }
    }
    v.detail << "n=1023, max relative deviation from 2^-m " << worst;
}

void copies_vs_fidelity_structure(Check &v) {
    const auto grid = cli::default_fidelity_grid();
    const auto rows = cli::copies_vs_fidelity(grid, 0.1);
    std::vector<double> single;
    std::vector<double> collective;
    for (const auto &row : rows) {
        const double copies = row.copies_consumed.value_or(-1);
        if (row.strategy == "single-copy") {
            single.push_back(copies);
            if (row.fidelity == 0.9) {
                v.require(copies == 22, "single-copy needs 22 copies at F=0.9");
            }
        } else if (row.strategy == "rank2-full") {
            collective.push_back(copies);
            if (row.fidelity == 0.9) {
                v.require(copies == 5, "rank2-full consumes 5 copies at F=0.9");
            }
        } else if (row.strategy == "rank2-subspace") {
            v.require(copies == 4, "subspace consumption constant at 4");
        }
    }
    v.require(single.size() == grid.size() && collective.size() == grid.size(), "one row per fidelity");
    std::ostringstream offenders;
    for (size_t i = 0; i + 1 < std::min(single.size(), collective.size()); i++) {
        const double a = single[i] / collective[i];
        const double b = single[i + 1] / collective[i + 1];
        if (!(b > a)) {
            offenders << " F=" << grid[i] << " (" << single[i] << "/" << collective[i] << ") -> F=" << grid[i + 1]
                      << " (" << single[i + 1] << "/" << collective[i + 1] << ")";
            v.require(false, "single/collective ratio strictly increasing in F");
        }
    }
    v.detail << "22 vs 5 at F=0.9";
    if (!offenders.str().empty()) {
        v.detail << "; ratio not increasing at" << offenders.str();
    }
}

void ghz_verification(Check &v) {
    for (int m = 2; m <= 5; m++) {
        const auto phase = GhzDiagonalState(m, 0, 1, std::vector<Rational>((size_t{1} << (m - 1)) - 1, Rational(0)));
        for (int n = 1; n <= 6; n++) {
            v.require(ghz_failure_probability<Rational>(phase, n, GhzRounds::AmplitudeOnly) == 1,
                      "amplitude round ignores phase errors");
        }
        for (int pos = 0; pos < 4; pos++) {
            std::vector<GhzDiagonalState> copies(4, GhzDiagonalState::pure(m));
            copies[static_cast<size_t>(pos)] = phase;
            for (uint64_t seed = 0; seed < 200; seed++) {
                v.require(!ghz_verify(copies, GhzRounds::AmplitudeThenPhase, seed).accepted(),
                          "phase round rejects a single phase error");
            }
        }
    }
    const auto phase3 = GhzDiagonalState(3, 0, 1, {0, 0, 0});
    std::vector<GhzDiagonalState> single = {phase3};
    v.require(std::abs(dense_ghz_phase_flip_probability(single) - 1) <= 1e-12, "dense phase round flags the error");

    const std::vector<GhzDiagonalState> noises = {
        GhzDiagonalState::white_noise(3, rat("0.8")),
        GhzDiagonalState(3, rat("0.7"), rat("0.04"), {rat("0.1"), rat("0.02"), rat("0.01")}),
    };
    double worst_tvd = 0;
    for (const auto &noise : noises) {
        for (int n = 1; n <= 6; n++) {
            v.require(ghz_failure_probability<Rational>(noise, n, GhzRounds::AmplitudeOnly) ==
                          enumerate_ghz_amplitude_acceptance(noise, n),
                      "DP equals enumeration n=" + std::to_string(n));
        }
        for (int n = 1; n <= 3; n++) {
            const int d = ghz_aux_dimension(n);
            std::vector<GhzDiagonalState> copies(static_cast<size_t>(n), noise);
            auto dense = dense_ghz_amplitude_distribution(copies, d);
            auto exact = enumerate_ghz_amplitude_distribution(noise, n, d);
            double tvd = 0;
            for (size_t j = 0; j < dense.size(); j++) {
                tvd += std::abs(dense[j] - to_double(exact[j])) / 2;
            }
            worst_tvd = std::max(worst_tvd, tvd);
            v.require(dense.size() == exact.size() && tvd <= 1e-10, "dense TVD n=" + std::to_string(n));
        }
    }
    v.detail << "m=3 DP exact for n<=6, dense TVD " << worst_tvd;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<void(Check &)>>> criteria = {
        {"oracle-equivalence", oracle_equivalence},
        {"weight-form-consistency", weight_form_consistency},
        {"monte-carlo-validation", monte_carlo_validation},
        {"counter-gate-action", counter_gate_action},
        {"eng-joint-state", eng_joint_state},
        {"parity-reembed-round-trip", parity_reembed_round_trip},
        {"embedding-formula", embedding_formula},
        {"subspace-asymptote", subspace_asymptote},
        {"copies-vs-fidelity-structure", copies_vs_fidelity_structure},
        {"ghz-verification", ghz_verification},
    };
    int failed = 0;
    for (const auto &[name, body] : criteria) {
        Check v;
        try {
            body(v);
        } catch (const std::exception &e) {
            v.passed = false;
            v.detail << " threw: " << e.what();
        }
        std::printf("%s %s: %s\n", v.passed ? "PASS" : "FAIL", name, v.detail.str().c_str());
        std::fflush(stdout);
        failed += !v.passed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
