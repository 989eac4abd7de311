#ifndef ENVERIFY_DENSE_SIM_H
#define ENVERIFY_DENSE_SIM_H

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enverify/core_model.h"
#include "enverify/strategy.h"

namespace enverify {

using Complex = std::complex<double>;

/// Largest joint dimension the dense simulator will allocate.
inline constexpr size_t kMaxDenseAmplitudes = size_t{1} << 20;

struct Subsystem {
    std::string name;
    int dim;
    bool operator==(const Subsystem &) const = default;
};

using Layout = std::vector<Subsystem>;

size_t layout_size(const Layout &layout);

/// Pure state over named subsystems. Amplitudes are row-major: subsystem 0
/// is the most significant digit of the flat index.
class StateVector {
   public:
    StateVector() = default;
    StateVector(Layout layout, std::vector<Complex> amplitudes);
    /// |digits[0]> (x) |digits[1]> (x) ...
    static StateVector basis(Layout layout, std::span<const int> digits);

    const Layout &layout() const {
        return layout_;
    }
    const std::vector<Complex> &amplitudes() const {
        return amps_;
    }
    std::vector<Complex> &amplitudes() {
        return amps_;
    }
    size_t size() const {
        return amps_.size();
    }
    /// Position of subsystem `name`; throws DomainError if absent.
    int find(std::string_view name) const;
    int dim(std::string_view name) const {
        return layout_[static_cast<size_t>(find(name))].dim;
    }

    double norm() const;
    void normalize();
    /// <this|other>; layouts must match.
    Complex inner(const StateVector &other) const;

    StateVector tensor(const StateVector &other) const;
    /// New subsystem i is old subsystem order[i].
    StateVector permuted(std::span<const int> order) const;
    /// Reorders subsystems to follow `names`.
    StateVector reordered(std::span<const std::string> names) const;
    /// Fuses `parts` (adjacent, in order) into one subsystem called `name`;
    /// the first part becomes the most significant digit.
    StateVector merged(std::span<const std::string> parts, std::string name) const;
    /// Splits subsystem `name` into `parts` (dims must multiply to its dim).
    StateVector split(std::string_view name, const Layout &parts) const;
    /// Renames one subsystem.
    StateVector renamed(std::string_view from, std::string to) const;

    /// target <- target + sign * control (mod dim(target)).
    void apply_controlled_shift(std::string_view control, std::string_view target, int sign);
    /// target <- target + amount (mod dim(target)).
    void apply_shift(std::string_view target, int amount);
    /// Applies a dim x dim unitary to one subsystem.
    void apply_local(std::string_view target, const Eigen::MatrixXcd &unitary);
    /// Unnormalized projection of `name` onto |outcome>; the subsystem is
    /// removed from the layout.
    StateVector project(std::string_view name, int outcome) const;

   private:
    size_t stride(int index) const;
    Layout layout_;
    std::vector<Complex> amps_;
};

/// Mixed state as a weighted ensemble of normalized pure states sharing one
/// layout.
class MixedState {
   public:
    struct Term {
        double weight;
        StateVector state;
    };

    MixedState() = default;
    explicit MixedState(StateVector pure);
    explicit MixedState(std::vector<Term> terms);
    /// Eigen-decomposes a density matrix; eigenvalues below 1e-15 are dropped.
    static MixedState from_density_matrix(const Layout &layout, const Eigen::MatrixXcd &rho);

    const Layout &layout() const {
        return terms_.front().state.layout();
    }
    const std::vector<Term> &terms() const {
        return terms_;
    }
    double trace() const;

    MixedState tensor(const MixedState &other) const;
    MixedState reordered(std::span<const std::string> names) const;
    MixedState merged(std::span<const std::string> parts, std::string name) const;
    MixedState split(std::string_view name, const Layout &parts) const;

    /// Applies `op` (a callable on StateVector&) to every term.
    template <class Op>
    MixedState transformed(Op op) const {
        MixedState out = *this;
        for (auto &t : out.terms_) {
            op(t.state);
        }
        return out;
    }

    /// <psi|rho|psi>.
    double expectation(const StateVector &psi) const;
    /// Dense matrix; refuses above 2^12 dimensions.
    Eigen::MatrixXcd density_matrix() const;
    /// Reduced density matrix on the subsystems in `keep` (in that order).
    Eigen::MatrixXcd reduced_density_matrix(std::span<const std::string> keep) const;

   private:
    std::vector<Term> terms_;
};

/// (1/2) || rho - sigma ||_1 computed from the two ensembles through their
/// Gram matrix, so the full density matrices are never formed.
double trace_distance(const MixedState &rho, const MixedState &sigma);
/// Same quantity from explicit matrices.
double trace_distance(const Eigen::MatrixXcd &rho, const Eigen::MatrixXcd &sigma);
/// |<psi|phi>|^2.
double state_fidelity(const StateVector &psi, const StateVector &phi);

// ---- States ---------------------------------------------------------------

/// |Psi_ij> on subsystems (a, b).
StateVector make_bell(int i, int j, std::string a = "A", std::string b = "B");
/// |Phi^d_mn> = sum_k w^(km) |k>|k - n> / sqrt(d).
StateVector make_qudit_bell(int d, int m, int n, std::string a = "A", std::string b = "B");
/// |a>|b> on two qubits.
StateVector make_product_pair(int a_bit, int b_bit, std::string a = "A", std::string b = "B");

/// One copy of `noise` as a Bell-diagonal (or generalized-Bell-diagonal) mixture.
MixedState noise_state(const NoiseModel &noise, std::string a = "A", std::string b = "B");
/// n copies of `noise` on pairs (A1, B1) .. (An, Bn).
MixedState ensemble_state(const NoiseModel &noise, int n);

/// Names A1..An or B1..Bn.
std::vector<std::string> side_names(char side, int n, int first = 1);

/// Fuses the qubit pairs (A_k, B_k) listed least significant first into a
/// d = 2^k qudit pair called (a, b). All other subsystems keep their order
/// and the fused pair is appended at the end.
MixedState embed_pairs(
    const MixedState &state,
    std::span<const std::string> a_qubits,
    std::span<const std::string> b_qubits,
    std::string a,
    std::string b);

/// Depolarizes a two-qubit state into Werner form with the same fidelity.
NoiseModel twirl_to_werner(const MixedState &two_qubit);
/// Depolarizes a d x d pair into isotropic form with the same fidelity.
NoiseModel twirl_to_isotropic(const MixedState &qudit_pair);
/// <Phi^d_00|rho|Phi^d_00> for a state made of exactly two d-level subsystems.
double target_fidelity(const MixedState &pair);

// ---- Gates ----------------------------------------------------------------

struct PairNames {
    std::string a;
    std::string b;
};

/// Bilateral counter gate: on each side the target digit becomes
/// target - control (mod d).
void apply_bcx(StateVector &state, const PairNames &control, const PairNames &target);
void apply_bcx_inverse(StateVector &state, const PairNames &control, const PairNames &target);
MixedState apply_bcx(const MixedState &state, const PairNames &control, const PairNames &target);

/// Counter gate from every pair in `controls` into `aux`.
MixedState apply_eng(const MixedState &state, std::span<const PairNames> controls, const PairNames &aux);
MixedState apply_eng_inverse(
    const MixedState &state, std::span<const PairNames> controls, const PairNames &aux);

/// Ensemble pairs (A1, B1) .. (An, Bn).
std::vector<PairNames> ensemble_pairs(int n);

// ---- Measurement ----------------------------------------------------------

/// Z-basis parity measurement on the least significant qubit pair of a
/// 2^k register. M1 = (0,0), M2 = (1,0), M3 = (0,1), M4 = (1,1).
enum class ParityOutcome : uint8_t { M1, M2, M3, M4 };

std::string to_string(ParityOutcome outcome);

struct MeasurementRecord {
    ParityOutcome label;
    int a;
    int b;
    double probability;
    /// Normalized post-measurement state; the register keeps its name and
    /// has half the dimension. Empty when probability is 0.
    MixedState post_state;

    bool odd() const {
        return a != b;
    }
};

/// All four outcomes of measuring the least significant qubit pair of `aux`.
std::vector<MeasurementRecord> measure_parity_pair(const MixedState &state, const PairNames &aux);

/// Appends a fresh |Psi_00> as the new least significant digit:
/// |Phi^d_0j>|Psi_00> -> |Phi^2d_0,2j>.
MixedState reembed(const MixedState &state, const PairNames &aux);
/// Undoes the index change of an odd outcome: B <- B - 1 after M2,
/// B <- B + 1 after M3 (index +1 and -1 respectively).
MixedState correct(const MixedState &state, const PairNames &aux, ParityOutcome label);
MixedState reembed_and_correct(const MixedState &state, const PairNames &aux, ParityOutcome label);

/// Distribution of the Z-basis outcome difference a - b (mod d) on `aux`,
/// i.e. the amplitude index.
std::vector<double> amplitude_index_distribution(const MixedState &state, const PairNames &aux);

/// Acceptance probability of `strategy` on n copies of `noise`, simulated
/// gate by gate and measured round by round.
double dense_strategy_acceptance(const StrategySpec &strategy, const NoiseModel &noise);
/// Full amplitude-index distribution after the ENG for full-readout strategies.
std::vector<double> dense_aux_distribution(const StrategySpec &strategy, const NoiseModel &noise);

/// Hadamard matrix.
Eigen::MatrixXcd hadamard();

}  // namespace enverify

#endif
