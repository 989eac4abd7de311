#include "enverify/protocol.h"

#include <cmath>

#include "enverify/analytic.h"
#include "enverify/errors.h"

namespace enverify {

namespace {

int wrap(long value, int d) {
    long r = value % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

}  // namespace

SymbolicAux::SymbolicAux(int d_, int j_, bool pure_) : d(d_), j(j_), pure(pure_) {
    if (d < 2) {
        throw DomainError("auxiliary dimension must be >= 2");
    }
    if (j < 0 || j >= d) {
        throw DomainError("amplitude index must lie in [0, d)");
    }
}

SymbolicAux counter_update(const ErrorLabel &control, SymbolicAux aux) {
    aux.j = wrap(static_cast<long>(aux.j) + control.amplitude_shift(), aux.d);
    return aux;
}

SymbolicAux qudit_counter_update(const QuditControl &control, SymbolicAux aux) {
    if (control.d < 2 || control.a < 0 || control.a >= control.d || control.b < 0 || control.b >= control.d) {
        throw DomainError("qudit control digits must lie in [0, d)");
    }
    aux.j = wrap(static_cast<long>(aux.j) - control.b + control.a, aux.d);
    return aux;
}

SymbolicAux run_eng(std::span<const ErrorLabel> labels, SymbolicAux aux) {
    if (static_cast<long>(labels.size()) > aux.d - 1L) {
        throw DomainError("ENG needs d >= n + 1");
    }
    long shift = 0;
    for (const auto &label : labels) {
        shift += label.amplitude_shift();
    }
    aux.j = wrap(aux.j + shift, aux.d);
    return aux;
}

int readout_full(const SymbolicAux &aux) {
    return aux.j;
}

double full_readout_ebits(const SymbolicAux &aux) {
    return std::log2(static_cast<double>(aux.d));
}

SubspaceReadout readout_subspace(const SymbolicAux &aux, int rounds, bool continue_after_odd) {
    if (!is_power_of_two(aux.d)) {
        throw DomainError("subspace readout needs d = 2^k");
    }
    const int digits = ceil_log2(aux.d);
    if (rounds < 0 || rounds > digits) {
        throw DomainError("subspace rounds must lie in [0, log2(d)]");
    }
    SubspaceReadout out;
    SymbolicAux current = aux;
    for (int r = 0; r < rounds; r++) {
        const int parity = current.j & 1;
        out.parities.push_back(parity);
        out.rounds_performed++;
        // Odd outcomes leave either (j - 1)/2 or (j + 1)/2; the symbolic
        // layer follows the former so the parities are the binary digits.
        current.j = (current.j - parity) / 2;
        current.d /= 2;
        if (parity) {
            out.verdict = Verdict::Reject;
            if (!continue_after_odd) {
                break;
            }
        }
    }
    if (current.d < 2) {
        // Fully measured: nothing left to hand back.
        current.d = 1;
        current.j = 0;
    }
    out.residual = current;
    return out;
}

ProtocolSampler::ProtocolSampler(const StrategySpec &strategy, const NoiseModel &noise)
    : strategy_(strategy), noise_(noise) {
    strategy_.validate(noise_.local_dim());
    d_ = strategy_.aux_dimension(noise_.local_dim());
    if (strategy_.uses_embedded_aux()) {
        aux_q_ = embedding_q<double>(to_double(noise_.fidelity()), strategy_.m_embed).q;
    }
    pass_probability_ = to_double(noise_.single_copy_pass_probability());
    std::vector<ErrorLabel> outcomes;
    std::vector<double> weights;
    for (const auto &[label, p] : noise_.label_distribution()) {
        outcomes.push_back(label);
        weights.push_back(to_double(p));
    }
    labels_ = DiscreteSampler<ErrorLabel>(std::move(outcomes), weights);
    scratch_.resize(static_cast<size_t>(strategy_.n));
}

RunOutcome ProtocolSampler::run(Rng &rng) {
    RunOutcome out;
    const auto nominal = nominal_resources(strategy_);
    if (strategy_.kind == StrategyKind::SingleCopyBaseline) {
        for (int i = 0; i < strategy_.n; i++) {
            if (!rng.bernoulli(pass_probability_)) {
                out.verdict = Verdict::Reject;
            }
        }
        out.copies_consumed = strategy_.n;
        out.ebits_consumed = strategy_.n;
        return out;
    }

    SymbolicAux aux(d_, 0, true);
    if (strategy_.uses_embedded_aux()) {
        aux.pure = false;
        if (!rng.bernoulli(aux_q_)) {
            aux.j = static_cast<int>(rng.below(static_cast<uint64_t>(d_)));
        }
    }
    for (auto &label : scratch_) {
        label = labels_.sample(rng);
    }
    aux = run_eng(scratch_, aux);

    out.copies_consumed = nominal.copies_consumed;
    if (strategy_.uses_subspace_readout()) {
        auto readout = readout_subspace(aux, strategy_.m);
        out.verdict = readout.verdict;
        out.subspaces_measured = readout.rounds_performed;
        out.ebits_consumed = readout.rounds_performed;
        if (strategy_.kind != StrategyKind::EmbedEngSubspace) {
            out.copies_consumed = readout.rounds_performed;
        }
    } else {
        int j = readout_full(aux);
        out.measured_j = j;
        out.verdict = j == 0 ? Verdict::Accept : Verdict::Reject;
        out.ebits_consumed = full_readout_ebits(aux);
        out.subspaces_measured = ceil_log2(d_);
    }
    return out;
}

RunOutcome sample_run(const StrategySpec &strategy, const NoiseModel &noise, uint64_t seed) {
    ProtocolSampler sampler(strategy, noise);
    Rng rng(seed);
    return sampler.run(rng);
}

McEstimate monte_carlo(
    const StrategySpec &strategy, const NoiseModel &noise, uint64_t trials, uint64_t seed, int workers) {
    if (trials < 1) {
        throw DomainError("Monte Carlo needs at least one trial");
    }
    if (workers < 1) {
        throw DomainError("worker count must be >= 1");
    }
    ProtocolSampler prototype(strategy, noise);
    return blocked_monte_carlo(trials, seed, workers, [&] {
        return [sampler = prototype](Rng &rng) mutable { return sampler.run(rng).accepted(); };
    });
}

}  // namespace enverify
