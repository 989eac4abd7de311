#ifndef ENVERIFY_ORACLE_H
#define ENVERIFY_ORACLE_H

#include <vector>

#include "enverify/core_model.h"
#include "enverify/ghz.h"
#include "enverify/rational.h"
#include "enverify/strategy.h"

namespace enverify {

// Brute-force ground truth. Nothing here goes through the symbolic label
// tables or the closed forms: every copy is expanded into its
// computational-basis outcomes (a, b) and the counter-gate index arithmetic
// is applied to them directly, with integer numerators over a common
// denominator.

/// Exact distribution of the auxiliary amplitude index.
struct ExactDistribution {
    int d = 1;
    std::vector<Rational> weights;

    Rational total() const;
    const Rational &operator[](int j) const {
        return weights[static_cast<size_t>(j)];
    }
    /// Mass on indices that are multiples of `modulus`.
    Rational aligned_mass(int modulus) const;
    /// Pointwise convolution mod d (both operands must share d).
    ExactDistribution convolve(const ExactDistribution &other) const;
    bool operator==(const ExactDistribution &) const = default;
};

/// One outcome of measuring a single copy in the computational basis.
struct DiagonalOutcome {
    int a;
    int b;
    Rational weight;
};

/// Computational-basis diagonal of one copy of `noise`.
std::vector<DiagonalOutcome> computational_diagonal(const NoiseModel &noise);

/// Net amplitude shift a copy with outcome (a, b) applies through the
/// counter gate: b - a for qubit copies (A's control digit is subtracted
/// from the target on both sides), a - b for qudit copies.
int outcome_shift(const DiagonalOutcome &outcome, int local_dim);

/// Exhaustive enumeration of every outcome tuple (n <= 12).
ExactDistribution enumerate_shift_distribution_brute(const NoiseModel &noise, int n, int d);
/// Convolution of the per-copy shift distribution mod d. Throws
/// ResourceError above n = 10^4 or when n * d * support exceeds 5 * 10^7.
ExactDistribution enumerate_shift_distribution_dp(const NoiseModel &noise, int n, int d);
/// Brute force for n <= 12, convolution above.
ExactDistribution enumerate_shift_distribution(const NoiseModel &noise, int n, int d);

/// Distribution of the auxiliary index before the ensemble is folded in:
/// a point mass for a fresh |Phi_00>, or the depolarised register built
/// from m_embed copies of `noise` for the embedded strategies.
ExactDistribution initial_aux_distribution(const StrategySpec &strategy, const NoiseModel &noise);

/// Exact probability that `strategy` accepts n copies of `noise`.
Rational enumerate_strategy_failure(const StrategySpec &strategy, const NoiseModel &noise);

/// Exact distribution of the final (m-1)-component amplitude vector of the
/// GHZ amplitude round, indexed by sum_p j_p d^p. Enumerates every
/// computational string of every copy (m = parties, d aux dimension).
std::vector<Rational> enumerate_ghz_amplitude_distribution(const GhzDiagonalState &noise, int n, int d);

/// Probability that the amplitude round accepts (aux vector stays zero).
Rational enumerate_ghz_amplitude_acceptance(const GhzDiagonalState &noise, int n);

}  // namespace enverify

#endif
