#ifndef ENVERIFY_PROTOCOL_H
#define ENVERIFY_PROTOCOL_H

#include <cstdint>
#include <span>
#include <vector>

#include "enverify/core_model.h"
#include "enverify/rng.h"
#include "enverify/strategy.h"

namespace enverify {

/// Auxiliary pair |Phi^d_{0j}> tracked by its amplitude index only.
struct SymbolicAux {
    int d = 2;
    int j = 0;
    /// False when the index was drawn from an isotropic (embedded) mixture.
    bool pure = true;

    SymbolicAux() = default;
    SymbolicAux(int d, int j, bool pure = true);
    bool operator==(const SymbolicAux &) const = default;
};

/// Computational-basis digits (a, b) of a d-level control pair held by A and B.
struct QuditControl {
    int d = 2;
    int a = 0;
    int b = 0;
};

/// Qubit counter gate: Target/Type3 leave j, Type1 adds one, Type2 subtracts
/// one (mod d). GeneralShift labels add their shift.
SymbolicAux counter_update(const ErrorLabel &control, SymbolicAux aux);

/// Qudit counter gate: j -> (j - b + a) mod D.
SymbolicAux qudit_counter_update(const QuditControl &control, SymbolicAux aux);

/// Folds counter_update over the ensemble. Requires labels.size() <= d - 1.
SymbolicAux run_eng(std::span<const ErrorLabel> labels, SymbolicAux aux);

/// Local Z readout of both halves; the outcome difference is j.
int readout_full(const SymbolicAux &aux);
/// log2(d) ebits destroyed by readout_full.
double full_readout_ebits(const SymbolicAux &aux);

struct SubspaceReadout {
    Verdict verdict = Verdict::Accept;
    SymbolicAux residual;
    int rounds_performed = 0;
    /// Parity seen in each round (0 even, 1 odd), least significant first.
    std::vector<int> parities;
};

/// Reveals the parity of j one qubit pair at a time, least significant digit
/// first, halving the register after each round (residual (j - parity)/2).
/// Rejects on the first odd parity and, unless `continue_after_odd`, stops
/// there. Requires d = 2^k and rounds <= k.
SubspaceReadout readout_subspace(const SymbolicAux &aux, int rounds, bool continue_after_odd = false);

/// Per-worker sampler: precomputes label tables once and then runs trials
/// without allocating.
class ProtocolSampler {
   public:
    ProtocolSampler(const StrategySpec &strategy, const NoiseModel &noise);

    RunOutcome run(Rng &rng);
    const StrategySpec &strategy() const {
        return strategy_;
    }
    int aux_dimension() const {
        return d_;
    }
    double aux_weight() const {
        return aux_q_;
    }

   private:
    StrategySpec strategy_;
    NoiseModel noise_;
    int d_ = 0;
    double aux_q_ = 1;
    double pass_probability_ = 1;
    DiscreteSampler<ErrorLabel> labels_;
    std::vector<ErrorLabel> scratch_;
};

/// One protocol run on a freshly sampled ensemble.
RunOutcome sample_run(const StrategySpec &strategy, const NoiseModel &noise, uint64_t seed);

/// Accept-rate estimate over `trials` runs; reproducible for any worker count.
McEstimate monte_carlo(
    const StrategySpec &strategy, const NoiseModel &noise, uint64_t trials, uint64_t seed, int workers = 1);

}  // namespace enverify

#endif
