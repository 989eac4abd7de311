#ifndef ENVERIFY_ANALYTIC_H
#define ENVERIFY_ANALYTIC_H

#include <vector>

#include "enverify/rational.h"
#include "enverify/strategy.h"

namespace enverify {

// Closed-form failure probabilities (probability of accepting a noisy
// ensemble). Every function is instantiated for `double` and `Rational`.

/// F^n: rank-2 ensemble, full readout of a d = n + 1 auxiliary pair.
template <class T>
T rank2_delta_full(const T &fidelity, int n);

/// sum_k C(n, 2^m k) F^(n - 2^m k) (1 - F)^(2^m k), for 1 <= m <= ceil(log2(n + 1)).
template <class T>
T rank2_delta_subspace(const T &fidelity, int n, int m);

/// Probability that n Werner copies move a d-dimensional amplitude index to j,
/// as a multinomial sum over (target-or-type3, type1, type2) counts.
template <class T>
T werner_pr_j(const T &fidelity, int n, int d, int j);

/// The whole table Pr(0..d-1) in one pass.
template <class T>
std::vector<T> werner_pr_table(const T &fidelity, int n, int d);

/// Pr(j = 0) with d = n + 1.
template <class T>
T werner_delta_full(const T &fidelity, int n);

/// Acceptance after m parity rounds on d = 2^ceil(log2(n + 1)): the sum of
/// Pr(j) over every multiple of 2^m below d.
template <class T>
T werner_delta_subspace(const T &fidelity, int n, int m);

/// Probability that s fully mixed copies leave the amplitude index unchanged
/// (equal numbers of +1 and -1 shifts, each with probability 1/4).
template <class T>
T balanced_shift_probability(int s);

/// Probability that s fully mixed copies produce a net shift that is a
/// multiple of 2^m (the t = 0 offset once, each t > 0 offset for both signs).
template <class T>
T aligned_shift_probability(int s, int m);

/// Werner failure probability written through the mixing weight q:
/// sum_i C(n,i) q^(n-i) (1-q)^i * balanced_shift_probability(i).
template <class T>
T werner_delta_from_weight(const T &weight, int n);

/// Subspace counterpart of werner_delta_from_weight.
template <class T>
T werner_delta_subspace_from_weight(const T &weight, int n, int m);

template <class T>
struct EmbeddedAux {
    int d;
    T q;
};

/// Isotropic form of m_embed embedded copies: d = 2^m_embed,
/// q = (d^2 F^m_embed - 1)/(d^2 - 1). Requires F >= 1/2.
template <class T>
EmbeddedAux<T> embedding_q(const T &fidelity, int m_embed);

/// Probability of reading j = 0 straight off the depolarised embedded
/// register: (1 + d F^m_embed)/(1 + d).
template <class T>
T direct_measure_delta(const T &fidelity, int m_embed);

/// ENG from n Werner copies into the embedded isotropic register, full
/// readout: q_aux Pr(0) + (1 - q_aux)/d.
template <class T>
T embed_eng_delta(const T &fidelity, int n, int m_embed);

/// As embed_eng_delta with m parity rounds instead of a full readout.
template <class T>
T embed_eng_subspace_delta(const T &fidelity, int n, int m_embed, int m);

/// Failure probability of `spec` on its natural noise family (rank-2 for the
/// rank2-* variants, Werner otherwise; single-copy is F^n for both).
template <class T>
T strategy_failure(const StrategySpec &spec, const T &fidelity);

/// ceil(ln delta / ln F): copies measured by the optimal single-copy test.
int single_copy_copies(double delta_target, double fidelity);

struct ResourceUse {
    int copies_consumed = 0;
    double ebits_consumed = 0;
};

/// Nominal consumption of a run that performs every readout round.
ResourceUse nominal_resources(const StrategySpec &spec);

struct ResourceReport {
    StrategySpec strategy;
    int ensemble_size = 0;
    double delta = 0;
    int copies_consumed = 0;
    double ebits_consumed = 0;
};

/// Smallest ensemble meeting `delta_target` for the strategy family of
/// `spec` (its `n` is ignored; `m` is kept for subspace variants; embedded
/// variants search over m_embed with n = 2^m_embed - 1). Subspace variants
/// scan n up to 2 k + 64 (k single-copy copies); monotone variants start
/// from that bracket and double it up to 2^20. Throws ResourceError when
/// the search is exhausted.
ResourceReport copies_required(const StrategySpec &spec, double fidelity, double delta_target);

}  // namespace enverify

#endif
