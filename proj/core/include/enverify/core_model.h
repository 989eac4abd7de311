#ifndef ENVERIFY_CORE_MODEL_H
#define ENVERIFY_CORE_MODEL_H

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enverify/errors.h"
#include "enverify/rational.h"

namespace enverify {

/// Label (i, j) of the qubit Bell state |Psi_ij> = 1 (x) X^j Z^i (|00> + |11>)/sqrt(2).
struct BellLabel {
    int phase_bit = 0;
    int amplitude_bit = 0;

    BellLabel() = default;
    BellLabel(int phase, int amplitude);
    bool operator==(const BellLabel &) const = default;
};

/// Label (m, n) of |Phi^d_mn> = sum_k w^(km) |k>|k - n mod d> / sqrt(d).
struct QuditBellLabel {
    int dimension = 2;
    int phase_index = 0;
    int amplitude_index = 0;

    QuditBellLabel() = default;
    QuditBellLabel(int d, int m, int n);
    bool operator==(const QuditBellLabel &) const = default;
};

enum class ErrorClass : uint8_t { Target, Type1, Type2, Type3, GeneralShift, Phase };

/// Classical class of one ensemble copy as seen by the counter gate.
///
/// Type1 is |01>, Type2 is |10>, Type3 is |Psi_10>. GeneralShift carries an
/// integer amplitude shift for qudit ensembles; Phase is a GHZ phase error.
struct ErrorLabel {
    ErrorClass cls = ErrorClass::Target;
    int shift = 0;

    static constexpr ErrorLabel target() {
        return {ErrorClass::Target, 0};
    }
    static constexpr ErrorLabel type1() {
        return {ErrorClass::Type1, 0};
    }
    static constexpr ErrorLabel type2() {
        return {ErrorClass::Type2, 0};
    }
    static constexpr ErrorLabel type3() {
        return {ErrorClass::Type3, 0};
    }
    static constexpr ErrorLabel phase() {
        return {ErrorClass::Phase, 0};
    }
    static ErrorLabel general_shift(int s, int local_dim);

    /// Net change of the auxiliary amplitude index.
    int amplitude_shift() const;
    bool operator==(const ErrorLabel &) const = default;
};

std::string to_string(ErrorClass cls);
std::string to_string(const ErrorLabel &label);

/// Promised source-state family. Parameters are stored exactly; the float
/// backend converts on use.
class NoiseModel {
   public:
    enum class Kind : uint8_t { PureTarget, Rank2, Werner, IsotropicQudit };

    static NoiseModel pure_target();
    static NoiseModel rank2(const Rational &fidelity);
    /// Requires 1/4 <= F <= 1.
    static NoiseModel werner(const Rational &fidelity);
    static NoiseModel isotropic_qudit(int d, const Rational &weight);

    Kind kind() const {
        return kind_;
    }
    /// Overlap with the target maximally entangled state.
    Rational fidelity() const;
    /// Mixing weight q of the isotropic/Werner form (1 for PureTarget).
    Rational weight() const;
    /// Local dimension of one ensemble copy (2 except for IsotropicQudit).
    int local_dim() const {
        return local_dim_;
    }

    /// Distribution over symbolic error labels of a single copy. Zero-weight
    /// labels are omitted.
    std::vector<std::pair<ErrorLabel, Rational>> label_distribution() const;
    /// Distribution over the integer amplitude shift induced by one copy.
    std::map<int, Rational> shift_distribution() const;
    /// Probability that one copy passes an optimal single-copy projection.
    Rational single_copy_pass_probability() const {
        return fidelity();
    }

    std::string name() const;
    bool operator==(const NoiseModel &) const = default;

   private:
    NoiseModel(Kind kind, Rational parameter, int local_dim)
        : kind_(kind), parameter_(std::move(parameter)), local_dim_(local_dim) {
    }
    Kind kind_;
    Rational parameter_;  // F for Rank2/Werner, q for IsotropicQudit
    int local_dim_;
};

/// n copies that are either all perfect or all distributed as `noise`,
/// whose fidelity is at most 1 - epsilon.
struct EnsemblePromise {
    int n;
    Rational epsilon;
    NoiseModel noise;

    EnsemblePromise(int n, Rational epsilon, NoiseModel noise);
};

enum class Verdict : uint8_t { Accept, Reject };

struct RunOutcome {
    Verdict verdict = Verdict::Accept;
    int copies_consumed = 0;
    double ebits_consumed = 0;
    std::optional<int> measured_j;
    int subspaces_measured = 0;

    bool accepted() const {
        return verdict == Verdict::Accept;
    }
};

/// (p0, p1, p2, p3) of the Werner form with fidelity F.
template <class T>
std::array<T, 4> werner_error_probs(const T &fidelity);

/// q = (d^2 F - 1)/(d^2 - 1); requires 1/d^2 <= F <= 1.
template <class T>
T fidelity_to_q(const T &fidelity, int d);

/// F = (1 + (d^2 - 1) q)/d^2; requires 0 <= q <= 1.
template <class T>
T q_to_fidelity(const T &weight, int d);

}  // namespace enverify

#endif
