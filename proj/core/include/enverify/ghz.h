#ifndef ENVERIFY_GHZ_H
#define ENVERIFY_GHZ_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "enverify/core_model.h"
#include "enverify/rational.h"
#include "enverify/rng.h"

namespace enverify {

class MixedState;
class StateVector;

/// Label (i, j) of the m-party GHZ basis state
/// |Psi_i,j> = sum_k w^(k i) |k>|k - j_1>..|k - j_(m-1)> / sqrt(d).
/// For qubits, component j_p is bit p - 1 of the packed vector k.
struct GhzLabel {
    int parties = 2;
    int phase_bit = 0;
    std::vector<int> amplitude;

    GhzLabel() = default;
    GhzLabel(int parties, int phase_bit, std::vector<int> amplitude, int d = 2);
    bool operator==(const GhzLabel &) const = default;
};

/// Packed (m-1)-bit vector k -> components (k_1, .., k_(m-1)).
std::vector<int> unpack_bits(unsigned k, int parties);

enum class GhzErrorKind : uint8_t { Target, Phase, AmpLow, AmpHigh };

/// Classical class of one GHZ copy. AmpLow(k) is |0 k>, AmpHigh(k) is
/// |1 not(k)>; Phase is |Psi_1,0>.
struct GhzError {
    GhzErrorKind kind = GhzErrorKind::Target;
    unsigned k = 0;
    bool operator==(const GhzError &) const = default;
};

std::string to_string(const GhzError &error);

/// GHZ-diagonal form after depolarization: weight F on |Psi_0,0>, lambda0
/// on |Psi_1,0> and lambda_k on each of |Psi_0,k>, |Psi_1,k>.
struct GhzDiagonalState {
    int parties = 3;
    Rational fidelity = 1;
    Rational lambda0 = 0;
    /// lambda[k - 1] for k = 1 .. 2^(m-1) - 1.
    std::vector<Rational> lambda;

    GhzDiagonalState() = default;
    /// Throws DomainError unless F + lambda0 + 2 sum lambda_k = 1 with all
    /// weights nonnegative.
    GhzDiagonalState(int parties, Rational fidelity, Rational lambda0, std::vector<Rational> lambda);
    static GhzDiagonalState pure(int parties);
    /// Weight F on the target and (1 - F) spread uniformly over the other
    /// 2^m - 1 basis states.
    static GhzDiagonalState white_noise(int parties, const Rational &fidelity);

    const Rational &lambda_k(unsigned k) const {
        return lambda.at(k - 1);
    }
    /// Target F, Phase lambda0, AmpLow(k) lambda_k, AmpHigh(k) lambda_k.
    /// Zero-weight labels are omitted.
    std::vector<std::pair<GhzError, Rational>> label_distribution() const;
    bool operator==(const GhzDiagonalState &) const = default;
};

/// Multipartite counter gate on the auxiliary amplitude vector:
/// j'_p = j_p + i_(p+1) - i_1 (mod d).
std::vector<int> mcx_update(std::span<const int> control_bits, std::vector<int> aux, int d);

/// Net change of the auxiliary amplitude vector caused by one copy.
std::vector<int> ghz_error_shift(const GhzError &error, int parties);

/// Reads F, lambda0 and lambda_k = (<Psi_0k|rho|Psi_0k> + <Psi_1k|rho|Psi_1k>)/2
/// off an m-qubit state (subsystem p is party p).
GhzDiagonalState ghz_depolarize(const MixedState &rho);

enum class GhzRounds : uint8_t { AmplitudeOnly, AmplitudeThenPhase };

/// Auxiliary dimension of the amplitude round: smallest power of two >= n + 1.
int ghz_aux_dimension(int n);

/// One verification run. Round 1 folds mcx_update over the sampled labels
/// and rejects on any nonzero component. Round 2 uses the auxiliary pair as
/// control so each copy's phase bit is added to the auxiliary phase bit;
/// target copies add 0, phase errors 1 and computational amplitude errors a
/// uniformly random bit. An odd total is rejected.
RunOutcome ghz_verify(std::span<const GhzDiagonalState> copies, GhzRounds rounds, Rng &rng);
RunOutcome ghz_verify(std::span<const GhzDiagonalState> copies, GhzRounds rounds, uint64_t seed);

/// Exact (Rational) or floating acceptance probability of n i.i.d. copies,
/// by dynamic programming over the auxiliary vector and phase parity.
template <class T>
T ghz_failure_probability(const GhzDiagonalState &noise, int n, GhzRounds rounds);

McEstimate ghz_monte_carlo(
    const GhzDiagonalState &noise, int n, GhzRounds rounds, uint64_t trials, uint64_t seed, int workers = 1);

// ---- Dense counterparts ---------------------------------------------------

/// GHZ basis state on parties named prefix1 .. prefixm with local dimension d.
StateVector make_ghz(int parties, int d, int phase, std::span<const int> amplitude, const std::string &prefix = "P");
/// Bell-diagonal mixture of one copy in the GHZ basis.
MixedState ghz_noise_state(const GhzDiagonalState &noise, const std::string &prefix);

/// Distribution of the auxiliary amplitude vector after the amplitude round,
/// simulated gate by gate, indexed by sum_p j_p d^(p-1).
std::vector<double> dense_ghz_amplitude_distribution(std::span<const GhzDiagonalState> copies, int d);
/// Probability that the phase round (pure qubit auxiliary GHZ state as
/// control, X-basis readout) sees odd parity.
double dense_ghz_phase_flip_probability(std::span<const GhzDiagonalState> copies);

}  // namespace enverify

#endif
