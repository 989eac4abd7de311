#include "enverify/ghz.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>

#include "enverify/dense_sim.h"
#include "enverify/errors.h"
#include "enverify/strategy.h"

namespace enverify {

namespace {

int wrap(long value, int d) {
    long r = value % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

void check_parties(int parties) {
    if (parties < 2 || parties > 16) {
        throw DomainError("GHZ states need 2 <= m <= 16 parties");
    }
}

std::vector<std::string> party_names(const std::string &prefix, int parties) {
    std::vector<std::string> out;
    for (int p = 1; p <= parties; p++) {
        out.push_back(prefix + std::to_string(p));
    }
    return out;
}

StateVector ghz_on(std::span<const std::string> names, int d, int phase, std::span<const int> amplitude) {
    const int parties = static_cast<int>(names.size());
    check_parties(parties);
    if (static_cast<int>(amplitude.size()) != parties - 1) {
        throw DomainError("GHZ amplitude vector needs m - 1 components");
    }
    if (phase < 0 || phase >= d) {
        throw DomainError("GHZ phase index must lie in [0, d)");
    }
    Layout layout;
    for (const auto &n : names) {
        layout.push_back({n, d});
    }
    std::vector<Complex> amps(layout_size(layout), 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; k++) {
        size_t index = static_cast<size_t>(k);
        for (int j : amplitude) {
            if (j < 0 || j >= d) {
                throw DomainError("GHZ amplitude components must lie in [0, d)");
            }
            index = index * static_cast<size_t>(d) + static_cast<size_t>(wrap(k - j, d));
        }
        const double angle = 2 * std::numbers::pi * static_cast<double>((k * phase) % d) / d;
        amps[index] = std::polar(scale, angle);
    }
    return StateVector(std::move(layout), std::move(amps));
}

}  // namespace

GhzLabel::GhzLabel(int parties_, int phase_bit_, std::vector<int> amplitude_, int d)
    : parties(parties_), phase_bit(phase_bit_), amplitude(std::move(amplitude_)) {
    check_parties(parties);
    if (static_cast<int>(amplitude.size()) != parties - 1) {
        throw DomainError("GHZ amplitude vector needs m - 1 components");
    }
    if (phase_bit < 0 || phase_bit >= d) {
        throw DomainError("GHZ phase index must lie in [0, d)");
    }
    for (int j : amplitude) {
        if (j < 0 || j >= d) {
            throw DomainError("GHZ amplitude components must lie in [0, d)");
        }
    }
}

std::vector<int> unpack_bits(unsigned k, int parties) {
    std::vector<int> out;
    for (int p = 0; p < parties - 1; p++) {
        out.push_back(static_cast<int>((k >> p) & 1u));
    }
    return out;
}

std::string to_string(const GhzError &error) {
    switch (error.kind) {
        case GhzErrorKind::Target:
            return "target";
        case GhzErrorKind::Phase:
            return "phase";
        case GhzErrorKind::AmpLow:
            return "amp-low(" + std::to_string(error.k) + ")";
        case GhzErrorKind::AmpHigh:
            return "amp-high(" + std::to_string(error.k) + ")";
    }
    return "?";
}

GhzDiagonalState::GhzDiagonalState(int parties_, Rational fidelity_, Rational lambda0_, std::vector<Rational> lambda_)
    : parties(parties_), fidelity(std::move(fidelity_)), lambda0(std::move(lambda0_)), lambda(std::move(lambda_)) {
    check_parties(parties);
    const size_t count = (size_t{1} << (parties - 1)) - 1;
    if (lambda.size() != count) {
        throw DomainError("GHZ-diagonal form needs 2^(m-1) - 1 lambda_k weights");
    }
    Rational total = fidelity + lambda0;
    if (fidelity < 0 || lambda0 < 0) {
        throw DomainError("GHZ-diagonal weights must be nonnegative");
    }
    for (const auto &l : lambda) {
        if (l < 0) {
            throw DomainError("GHZ-diagonal weights must be nonnegative");
        }
        total += 2 * l;
    }
    if (total != 1) {
        throw DomainError("GHZ-diagonal weights must satisfy F + lambda0 + 2 sum lambda_k = 1");
    }
}

GhzDiagonalState GhzDiagonalState::pure(int parties) {
    check_parties(parties);
    return GhzDiagonalState(parties, 1, 0, std::vector<Rational>((size_t{1} << (parties - 1)) - 1, Rational(0)));
}

GhzDiagonalState GhzDiagonalState::white_noise(int parties, const Rational &fidelity) {
    check_parties(parties);
    if (fidelity < 0 || fidelity > 1) {
        throw DomainError("fidelity must lie in [0, 1]");
    }
    Rational rest = (1 - fidelity) / Rational((1L << parties) - 1);
    return GhzDiagonalState(parties, fidelity, rest, std::vector<Rational>((size_t{1} << (parties - 1)) - 1, rest));
}

std::vector<std::pair<GhzError, Rational>> GhzDiagonalState::label_distribution() const {
    std::vector<std::pair<GhzError, Rational>> out;
    if (fidelity != 0) {
        out.push_back({{GhzErrorKind::Target, 0}, fidelity});
    }
    if (lambda0 != 0) {
        out.push_back({{GhzErrorKind::Phase, 0}, lambda0});
    }
    for (unsigned k = 1; k <= lambda.size(); k++) {
        if (lambda[k - 1] != 0) {
            out.push_back({{GhzErrorKind::AmpLow, k}, lambda[k - 1]});
            out.push_back({{GhzErrorKind::AmpHigh, k}, lambda[k - 1]});
        }
    }
    return out;
}

std::vector<int> mcx_update(std::span<const int> control_bits, std::vector<int> aux, int d) {
    if (control_bits.size() < 2 || aux.size() + 1 != control_bits.size()) {
        throw DomainError("mcx_update needs m control bits and m - 1 components");
    }
    if (d < 2) {
        throw DomainError("auxiliary dimension must be >= 2");
    }
    for (int c : control_bits) {
        if (c != 0 && c != 1) {
            throw DomainError("control digits are bits");
        }
    }
    for (size_t p = 0; p < aux.size(); p++) {
        aux[p] = wrap(static_cast<long>(aux[p]) + control_bits[p + 1] - control_bits[0], d);
    }
    return aux;
}

std::vector<int> ghz_error_shift(const GhzError &error, int parties) {
    std::vector<int> bits = unpack_bits(error.k, parties);
    switch (error.kind) {
        case GhzErrorKind::Target:
        case GhzErrorKind::Phase:
            return std::vector<int>(static_cast<size_t>(parties - 1), 0);
        case GhzErrorKind::AmpLow:
            return bits;
        case GhzErrorKind::AmpHigh:
            for (int &b : bits) {
                b = -b;
            }
            return bits;
    }
    return {};
}

GhzDiagonalState ghz_depolarize(const MixedState &rho) {
    const Layout &layout = rho.layout();
    const int parties = static_cast<int>(layout.size());
    check_parties(parties);
    std::vector<std::string> names;
    for (const auto &s : layout) {
        if (s.dim != 2) {
            throw DomainError("GHZ depolarization needs m qubits");
        }
        names.push_back(s.name);
    }
    const double trace = rho.trace();
    auto overlap = [&](int phase, unsigned k) {
        std::vector<int> bits = unpack_bits(k, parties);
        return rho.expectation(ghz_on(names, 2, phase, bits)) / trace;
    };
    auto exact = [](double x) {
        if (x < -1e-12) {
            throw DomainError("negative GHZ-diagonal weight: input is not a density matrix");
        }
        return Rational(std::max(0.0, x));
    };
    Rational f = exact(overlap(0, 0));
    Rational l0 = exact(overlap(1, 0));
    std::vector<Rational> lambda;
    Rational total = f + l0;
    for (unsigned k = 1; k < (1u << (parties - 1)); k++) {
        lambda.push_back(exact(0.5 * (overlap(0, k) + overlap(1, k))));
        total += 2 * lambda.back();
    }
    if (abs(total - 1) > Rational(1, 1000000000)) {
        throw DomainError("GHZ-diagonal weights do not sum to 1");
    }
    // Remove the last few ulps of rounding so the exact invariant holds.
    f /= total;
    l0 /= total;
    for (auto &l : lambda) {
        l /= total;
    }
    return GhzDiagonalState(parties, f, l0, std::move(lambda));
}

int ghz_aux_dimension(int n) {
    if (n < 1) {
        throw DomainError("ensemble needs at least one copy");
    }
    return 1 << ceil_log2(static_cast<long>(n) + 1);
}

namespace {

struct GhzTrial {
    int parties;
    int d;
    GhzRounds rounds;
    std::vector<DiscreteSampler<GhzError>> samplers;
    std::vector<size_t> sampler_of_copy;
    std::vector<int> vec;

    RunOutcome run(Rng &rng) {
        RunOutcome out;
        std::fill(vec.begin(), vec.end(), 0);
        int parity = 0;
        for (size_t c : sampler_of_copy) {
            const GhzError &e = samplers[c].sample(rng);
            if (e.kind == GhzErrorKind::AmpLow || e.kind == GhzErrorKind::AmpHigh) {
                const int sign = e.kind == GhzErrorKind::AmpLow ? 1 : -1;
                for (size_t p = 0; p < vec.size(); p++) {
                    vec[p] = wrap(vec[p] + sign * static_cast<int>((e.k >> p) & 1u), d);
                }
            }
            if (rounds == GhzRounds::AmplitudeThenPhase) {
                if (e.kind == GhzErrorKind::Phase) {
                    parity ^= 1;
                } else if (e.kind != GhzErrorKind::Target) {
                    parity ^= rng.bernoulli(0.5) ? 1 : 0;
                }
            }
        }
        const int amplitude_copies = ceil_log2(d);
        out.copies_consumed = amplitude_copies;
        out.ebits_consumed = amplitude_copies;
        out.subspaces_measured = static_cast<int>(vec.size());
        for (int v : vec) {
            if (v != 0) {
                out.verdict = Verdict::Reject;
                return out;
            }
        }
        if (rounds == GhzRounds::AmplitudeThenPhase) {
            out.copies_consumed += 1;
            out.ebits_consumed += 1;
            if (parity) {
                out.verdict = Verdict::Reject;
            }
        }
        return out;
    }
};

DiscreteSampler<GhzError> sampler_for(const GhzDiagonalState &state) {
    std::vector<GhzError> outcomes;
    std::vector<double> weights;
    for (const auto &[e, p] : state.label_distribution()) {
        outcomes.push_back(e);
        weights.push_back(to_double(p));
    }
    return DiscreteSampler<GhzError>(std::move(outcomes), weights);
}

GhzTrial make_trial(std::span<const GhzDiagonalState> copies, GhzRounds rounds) {
    if (copies.empty()) {
        throw DomainError("ensemble needs at least one copy");
    }
    GhzTrial t{copies[0].parties, ghz_aux_dimension(static_cast<int>(copies.size())), rounds, {}, {}, {}};
    std::vector<const GhzDiagonalState *> distinct;
    for (const auto &c : copies) {
        if (c.parties != t.parties) {
            throw DomainError("all copies must have the same number of parties");
        }
        size_t index = distinct.size();
        for (size_t i = 0; i < distinct.size(); i++) {
            if (*distinct[i] == c) {
                index = i;
            }
        }
        if (index == distinct.size()) {
            distinct.push_back(&c);
            t.samplers.push_back(sampler_for(c));
        }
        t.sampler_of_copy.push_back(index);
    }
    t.vec.assign(static_cast<size_t>(t.parties - 1), 0);
    return t;
}

}  // namespace

RunOutcome ghz_verify(std::span<const GhzDiagonalState> copies, GhzRounds rounds, Rng &rng) {
    GhzTrial trial = make_trial(copies, rounds);
    return trial.run(rng);
}

RunOutcome ghz_verify(std::span<const GhzDiagonalState> copies, GhzRounds rounds, uint64_t seed) {
    Rng rng(seed);
    return ghz_verify(copies, rounds, rng);
}

template <class T>
T ghz_failure_probability(const GhzDiagonalState &noise, int n, GhzRounds rounds) {
    const int d = ghz_aux_dimension(n);
    const int comps = noise.parties - 1;
    size_t states = 1;
    for (int p = 0; p < comps; p++) {
        states *= static_cast<size_t>(d);
        if (states > (size_t{1} << 20)) {
            throw ResourceError("GHZ amplitude vector space above 2^20 states");
        }
    }
    const size_t layers = rounds == GhzRounds::AmplitudeThenPhase ? 2 : 1;
    const auto labels = noise.label_distribution();

    // Index of the vector after adding each label's shift.
    std::vector<std::vector<size_t>> moved(labels.size(), std::vector<size_t>(states));
    std::vector<int> digits(static_cast<size_t>(comps));
    for (size_t l = 0; l < labels.size(); l++) {
        const std::vector<int> shift = ghz_error_shift(labels[l].first, noise.parties);
        for (size_t s = 0; s < states; s++) {
            size_t rest = s;
            size_t index = 0;
            size_t scale = 1;
            for (int p = 0; p < comps; p++) {
                int v = static_cast<int>(rest % static_cast<size_t>(d));
                rest /= static_cast<size_t>(d);
                index += static_cast<size_t>(wrap(v + shift[static_cast<size_t>(p)], d)) * scale;
                scale *= static_cast<size_t>(d);
            }
            moved[l][s] = index;
        }
    }
    std::vector<T> weight;
    for (const auto &l : labels) {
        weight.push_back(Arith<T>::from(l.second));
    }
    const T half = Arith<T>::from(Rational(1, 2));

    std::vector<T> cur(states * layers, T(0));
    cur[0] = T(1);
    std::vector<T> next(states * layers);
    for (int c = 0; c < n; c++) {
        std::fill(next.begin(), next.end(), T(0));
        for (size_t layer = 0; layer < layers; layer++) {
            for (size_t s = 0; s < states; s++) {
                const T &w = cur[layer * states + s];
                if (w == 0) {
                    continue;
                }
                for (size_t l = 0; l < labels.size(); l++) {
                    const size_t to = moved[l][s];
                    const GhzErrorKind kind = labels[l].first.kind;
                    T p = w * weight[l];
                    if (layers == 1 || kind == GhzErrorKind::Target) {
                        next[layer * states + to] += p;
                    } else if (kind == GhzErrorKind::Phase) {
                        next[(1 - layer) * states + to] += p;
                    } else {
                        p *= half;
                        next[layer * states + to] += p;
                        next[(1 - layer) * states + to] += p;
                    }
                }
            }
        }
        std::swap(cur, next);
    }
    return cur[0];
}

template double ghz_failure_probability<double>(const GhzDiagonalState &, int, GhzRounds);
template Rational ghz_failure_probability<Rational>(const GhzDiagonalState &, int, GhzRounds);

McEstimate ghz_monte_carlo(
    const GhzDiagonalState &noise, int n, GhzRounds rounds, uint64_t trials, uint64_t seed, int workers) {
    if (trials < 1) {
        throw DomainError("Monte Carlo needs at least one trial");
    }
    if (workers < 1) {
        throw DomainError("worker count must be >= 1");
    }
    std::vector<GhzDiagonalState> copies(static_cast<size_t>(std::max(n, 0)), noise);
    GhzTrial prototype = make_trial(copies, rounds);
    return blocked_monte_carlo(trials, seed, workers, [&] {
        return [trial = prototype](Rng &rng) mutable { return trial.run(rng).accepted(); };
    });
}

// ---- Dense counterparts ---------------------------------------------------

StateVector make_ghz(int parties, int d, int phase, std::span<const int> amplitude, const std::string &prefix) {
    auto names = party_names(prefix, parties);
    return ghz_on(names, d, phase, amplitude);
}

MixedState ghz_noise_state(const GhzDiagonalState &noise, const std::string &prefix) {
    auto names = party_names(prefix, noise.parties);
    std::vector<MixedState::Term> terms;
    auto add = [&](const Rational &w, int phase, unsigned k) {
        if (w != 0) {
            std::vector<int> bits = unpack_bits(k, noise.parties);
            terms.push_back({to_double(w), ghz_on(names, 2, phase, bits)});
        }
    };
    add(noise.fidelity, 0, 0);
    add(noise.lambda0, 1, 0);
    for (unsigned k = 1; k <= noise.lambda.size(); k++) {
        add(noise.lambda[k - 1], 0, k);
        add(noise.lambda[k - 1], 1, k);
    }
    return MixedState(std::move(terms));
}

namespace {

// Visits every product of mixture terms of the copies, tensored with `aux`.
void for_each_copy_product(
    std::span<const GhzDiagonalState> copies,
    const StateVector &aux,
    const std::function<void(double, StateVector)> &visit) {
    std::vector<MixedState> states;
    for (size_t c = 0; c < copies.size(); c++) {
        states.push_back(ghz_noise_state(copies[c], "Q" + std::to_string(c + 1) + "_"));
    }
    std::vector<size_t> pick(states.size(), 0);
    while (true) {
        double w = 1;
        StateVector joint = aux;
        for (size_t c = 0; c < states.size(); c++) {
            const auto &t = states[c].terms()[pick[c]];
            joint = t.state.tensor(joint);
            w *= t.weight;
        }
        visit(w, std::move(joint));
        size_t k = 0;
        while (k < pick.size() && ++pick[k] == states[k].terms().size()) {
            pick[k] = 0;
            k++;
        }
        if (k == pick.size()) {
            break;
        }
    }
}

}  // namespace

std::vector<double> dense_ghz_amplitude_distribution(std::span<const GhzDiagonalState> copies, int d) {
    if (copies.empty()) {
        throw DomainError("ensemble needs at least one copy");
    }
    const int parties = copies[0].parties;
    std::vector<int> zeros(static_cast<size_t>(parties - 1), 0);
    StateVector aux = make_ghz(parties, d, 0, zeros, "X");
    auto aux_names = party_names("X", parties);
    size_t outcomes = 1;
    for (int p = 1; p < parties; p++) {
        outcomes *= static_cast<size_t>(d);
    }
    std::vector<double> out(outcomes, 0.0);
    for_each_copy_product(copies, aux, [&](double w, StateVector s) {
        for (size_t c = 0; c < copies.size(); c++) {
            auto names = party_names("Q" + std::to_string(c + 1) + "_", parties);
            for (int p = 0; p < parties; p++) {
                s.apply_controlled_shift(names[static_cast<size_t>(p)], aux_names[static_cast<size_t>(p)], -1);
            }
        }
        // Aux registers are the trailing subsystems: the flat index modulo
        // d^m holds their digits, party 1 most significant.
        const size_t block = outcomes * static_cast<size_t>(d);
        const auto &amps = s.amplitudes();
        std::vector<int> t(static_cast<size_t>(parties));
        for (size_t idx = 0; idx < amps.size(); idx++) {
            const double p = std::norm(amps[idx]);
            if (p == 0) {
                continue;
            }
            size_t rest = idx % block;
            for (int q = parties - 1; q >= 0; q--) {
                t[static_cast<size_t>(q)] = static_cast<int>(rest % static_cast<size_t>(d));
                rest /= static_cast<size_t>(d);
            }
            size_t index = 0;
            size_t scale = 1;
            for (int q = 1; q < parties; q++) {
                index += static_cast<size_t>(wrap(t[0] - t[static_cast<size_t>(q)], d)) * scale;
                scale *= static_cast<size_t>(d);
            }
            out[index] += w * p;
        }
    });
    return out;
}

double dense_ghz_phase_flip_probability(std::span<const GhzDiagonalState> copies) {
    if (copies.empty()) {
        throw DomainError("ensemble needs at least one copy");
    }
    const int parties = copies[0].parties;
    std::vector<int> zeros(static_cast<size_t>(parties - 1), 0);
    StateVector aux = make_ghz(parties, 2, 0, zeros, "X");
    auto aux_names = party_names("X", parties);
    const Eigen::MatrixXcd h = hadamard();
    double odd = 0;
    for_each_copy_product(copies, aux, [&](double w, StateVector s) {
        for (size_t c = 0; c < copies.size(); c++) {
            auto names = party_names("Q" + std::to_string(c + 1) + "_", parties);
            for (int p = 0; p < parties; p++) {
                s.apply_controlled_shift(aux_names[static_cast<size_t>(p)], names[static_cast<size_t>(p)], +1);
            }
        }
        for (const auto &x : aux_names) {
            s.apply_local(x, h);
        }
        const size_t block = size_t{1} << parties;
        const auto &amps = s.amplitudes();
        for (size_t idx = 0; idx < amps.size(); idx++) {
            if (std::popcount(idx % block) & 1) {
                odd += w * std::norm(amps[idx]);
            }
        }
    });
    return odd;
}

}  // namespace enverify
