#include "enverify/dense_sim.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "enverify/errors.h"

namespace enverify {

namespace {

int wrap(long value, int d) {
    long r = value % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

std::vector<std::string> names_of(const Layout &layout) {
    std::vector<std::string> out;
    for (const auto &s : layout) {
        out.push_back(s.name);
    }
    return out;
}

const char *kLsbA = "__lsb_a";
const char *kLsbB = "__lsb_b";
const char *kFreshA = "__fresh_a";
const char *kFreshB = "__fresh_b";

}  // namespace

size_t layout_size(const Layout &layout) {
    size_t n = 1;
    for (const auto &s : layout) {
        if (s.dim < 1) {
            throw DomainError("subsystem dimensions must be >= 1");
        }
        n *= static_cast<size_t>(s.dim);
        if (n > kMaxDenseAmplitudes) {
            throw ResourceError("dense state exceeds 2^20 amplitudes");
        }
    }
    return n;
}

StateVector::StateVector(Layout layout, std::vector<Complex> amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    size_t n = layout_size(layout_);
    if (n != amps_.size()) {
        throw DomainError("amplitude count does not match the layout");
    }
    for (size_t i = 0; i < layout_.size(); i++) {
        for (size_t k = i + 1; k < layout_.size(); k++) {
            if (layout_[i].name == layout_[k].name) {
                throw DomainError("duplicate subsystem name " + layout_[i].name);
            }
        }
    }
}

StateVector StateVector::basis(Layout layout, std::span<const int> digits) {
    if (digits.size() != layout.size()) {
        throw DomainError("one digit per subsystem required");
    }
    size_t n = layout_size(layout);
    size_t index = 0;
    for (size_t i = 0; i < layout.size(); i++) {
        if (digits[i] < 0 || digits[i] >= layout[i].dim) {
            throw DomainError("basis digit out of range");
        }
        index = index * static_cast<size_t>(layout[i].dim) + static_cast<size_t>(digits[i]);
    }
    std::vector<Complex> amps(n, 0.0);
    amps[index] = 1.0;
    return StateVector(std::move(layout), std::move(amps));
}

int StateVector::find(std::string_view name) const {
    for (size_t i = 0; i < layout_.size(); i++) {
        if (layout_[i].name == name) {
            return static_cast<int>(i);
        }
    }
    throw DomainError("no subsystem named " + std::string(name));
}

size_t StateVector::stride(int index) const {
    size_t s = 1;
    for (size_t i = static_cast<size_t>(index) + 1; i < layout_.size(); i++) {
        s *= static_cast<size_t>(layout_[i].dim);
    }
    return s;
}

double StateVector::norm() const {
    double total = 0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0) {
        throw DomainError("cannot normalize the zero vector");
    }
    for (auto &a : amps_) {
        a /= n;
    }
}

Complex StateVector::inner(const StateVector &other) const {
    if (layout_ != other.layout_) {
        throw DomainError("inner product needs identical layouts");
    }
    Complex total = 0;
    for (size_t i = 0; i < amps_.size(); i++) {
        total += std::conj(amps_[i]) * other.amps_[i];
    }
    return total;
}

StateVector StateVector::tensor(const StateVector &other) const {
    Layout layout = layout_;
    layout.insert(layout.end(), other.layout_.begin(), other.layout_.end());
    size_t n = layout_size(layout);
    std::vector<Complex> amps(n);
    size_t k = 0;
    for (const auto &a : amps_) {
        for (const auto &b : other.amps_) {
            amps[k++] = a * b;
        }
    }
    return StateVector(std::move(layout), std::move(amps));
}

StateVector StateVector::permuted(std::span<const int> order) const {
    const size_t k = layout_.size();
    if (order.size() != k) {
        throw DomainError("permutation must list every subsystem");
    }
    std::vector<bool> seen(k, false);
    Layout layout;
    for (int o : order) {
        if (o < 0 || static_cast<size_t>(o) >= k || seen[static_cast<size_t>(o)]) {
            throw DomainError("invalid subsystem permutation");
        }
        seen[static_cast<size_t>(o)] = true;
        layout.push_back(layout_[static_cast<size_t>(o)]);
    }
    // Stride of old subsystem order[i] inside the new layout.
    std::vector<size_t> new_stride(k);
    size_t s = 1;
    for (size_t i = k; i-- > 0;) {
        new_stride[static_cast<size_t>(order[i])] = s;
        s *= static_cast<size_t>(layout[i].dim);
    }
    std::vector<Complex> amps(amps_.size());
    std::vector<int> digits(k, 0);
    for (size_t idx = 0; idx < amps_.size(); idx++) {
        size_t target = 0;
        for (size_t i = 0; i < k; i++) {
            target += static_cast<size_t>(digits[i]) * new_stride[i];
        }
        amps[target] = amps_[idx];
        for (size_t i = k; i-- > 0;) {
            if (++digits[i] < layout_[i].dim) {
                break;
            }
            digits[i] = 0;
        }
    }
    return StateVector(std::move(layout), std::move(amps));
}

StateVector StateVector::reordered(std::span<const std::string> names) const {
    if (names.size() != layout_.size()) {
        throw DomainError("reorder must list every subsystem");
    }
    std::vector<int> order;
    for (const auto &n : names) {
        order.push_back(find(n));
    }
    return permuted(order);
}

StateVector StateVector::merged(std::span<const std::string> parts, std::string name) const {
    if (parts.empty()) {
        throw DomainError("nothing to merge");
    }
    int first = find(parts[0]);
    int dim = 1;
    for (size_t i = 0; i < parts.size(); i++) {
        if (find(parts[i]) != first + static_cast<int>(i)) {
            throw DomainError("merged subsystems must be adjacent and in order");
        }
        dim *= layout_[static_cast<size_t>(first) + i].dim;
    }
    Layout layout;
    for (int i = 0; i < static_cast<int>(layout_.size()); i++) {
        if (i == first) {
            layout.push_back({name, dim});
        } else if (i < first || i >= first + static_cast<int>(parts.size())) {
            layout.push_back(layout_[static_cast<size_t>(i)]);
        }
    }
    return StateVector(std::move(layout), amps_);
}

StateVector StateVector::split(std::string_view name, const Layout &parts) const {
    int index = find(name);
    int dim = 1;
    for (const auto &p : parts) {
        dim *= p.dim;
    }
    if (dim != layout_[static_cast<size_t>(index)].dim) {
        throw DomainError("split dimensions must multiply to the original");
    }
    Layout layout;
    for (int i = 0; i < static_cast<int>(layout_.size()); i++) {
        if (i == index) {
            layout.insert(layout.end(), parts.begin(), parts.end());
        } else {
            layout.push_back(layout_[static_cast<size_t>(i)]);
        }
    }
    return StateVector(std::move(layout), amps_);
}

StateVector StateVector::renamed(std::string_view from, std::string to) const {
    Layout layout = layout_;
    layout[static_cast<size_t>(find(from))].name = std::move(to);
    return StateVector(std::move(layout), amps_);
}

void StateVector::apply_controlled_shift(std::string_view control, std::string_view target, int sign) {
    const int ci = find(control);
    const int ti = find(target);
    if (ci == ti) {
        throw DomainError("control and target must differ");
    }
    const size_t sc = stride(ci);
    const size_t st = stride(ti);
    const int dc = layout_[static_cast<size_t>(ci)].dim;
    const int dt = layout_[static_cast<size_t>(ti)].dim;
    std::vector<Complex> out(amps_.size());
    for (size_t idx = 0; idx < amps_.size(); idx++) {
        const int c = static_cast<int>((idx / sc) % static_cast<size_t>(dc));
        const int t = static_cast<int>((idx / st) % static_cast<size_t>(dt));
        const int nt = wrap(static_cast<long>(t) + static_cast<long>(sign) * c, dt);
        out[idx - static_cast<size_t>(t) * st + static_cast<size_t>(nt) * st] = amps_[idx];
    }
    amps_ = std::move(out);
}

void StateVector::apply_shift(std::string_view target, int amount) {
    const int ti = find(target);
    const size_t st = stride(ti);
    const int dt = layout_[static_cast<size_t>(ti)].dim;
    std::vector<Complex> out(amps_.size());
    for (size_t idx = 0; idx < amps_.size(); idx++) {
        const int t = static_cast<int>((idx / st) % static_cast<size_t>(dt));
        const int nt = wrap(static_cast<long>(t) + amount, dt);
        out[idx - static_cast<size_t>(t) * st + static_cast<size_t>(nt) * st] = amps_[idx];
    }
    amps_ = std::move(out);
}

void StateVector::apply_local(std::string_view target, const Eigen::MatrixXcd &unitary) {
    const int ti = find(target);
    const size_t st = stride(ti);
    const int dt = layout_[static_cast<size_t>(ti)].dim;
    if (unitary.rows() != dt || unitary.cols() != dt) {
        throw DomainError("local operator has the wrong dimension");
    }
    Eigen::VectorXcd in(dt);
    const size_t block = st * static_cast<size_t>(dt);
    for (size_t hi = 0; hi < amps_.size(); hi += block) {
        for (size_t lo = 0; lo < st; lo++) {
            for (int k = 0; k < dt; k++) {
                in[k] = amps_[hi + lo + static_cast<size_t>(k) * st];
            }
            Eigen::VectorXcd out = unitary * in;
            for (int k = 0; k < dt; k++) {
                amps_[hi + lo + static_cast<size_t>(k) * st] = out[k];
            }
        }
    }
}

StateVector StateVector::project(std::string_view name, int outcome) const {
    const int ti = find(name);
    const int dt = layout_[static_cast<size_t>(ti)].dim;
    if (outcome < 0 || outcome >= dt) {
        throw DomainError("measurement outcome out of range");
    }
    const size_t st = stride(ti);
    const size_t block = st * static_cast<size_t>(dt);
    std::vector<Complex> out;
    out.reserve(amps_.size() / static_cast<size_t>(dt));
    for (size_t hi = 0; hi < amps_.size(); hi += block) {
        for (size_t lo = 0; lo < st; lo++) {
            out.push_back(amps_[hi + static_cast<size_t>(outcome) * st + lo]);
        }
    }
    Layout layout = layout_;
    layout.erase(layout.begin() + ti);
    return StateVector(std::move(layout), std::move(out));
}

// ---- MixedState -----------------------------------------------------------

MixedState::MixedState(StateVector pure) {
    terms_.push_back({1.0, std::move(pure)});
}

MixedState::MixedState(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw DomainError("a mixed state needs at least one term");
    }
    for (const auto &t : terms_) {
        if (t.weight < 0) {
            throw DomainError("mixture weights must be nonnegative");
        }
        if (t.state.layout() != terms_.front().state.layout()) {
            throw DomainError("mixture terms must share one layout");
        }
    }
}

MixedState MixedState::from_density_matrix(const Layout &layout, const Eigen::MatrixXcd &rho) {
    const size_t n = layout_size(layout);
    if (static_cast<size_t>(rho.rows()) != n || static_cast<size_t>(rho.cols()) != n) {
        throw DomainError("density matrix does not match the layout");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
    std::vector<Term> terms;
    for (Eigen::Index k = 0; k < rho.rows(); k++) {
        double w = solver.eigenvalues()[k];
        if (w < -1e-10) {
            throw DomainError("density matrix is not positive semidefinite");
        }
        if (w <= 1e-15) {
            continue;
        }
        std::vector<Complex> amps(n);
        for (size_t i = 0; i < n; i++) {
            amps[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), k);
        }
        terms.push_back({w, StateVector(layout, std::move(amps))});
    }
    return MixedState(std::move(terms));
}

double MixedState::trace() const {
    double total = 0;
    for (const auto &t : terms_) {
        total += t.weight * std::pow(t.state.norm(), 2);
    }
    return total;
}

MixedState MixedState::tensor(const MixedState &other) const {
    std::vector<Term> terms;
    terms.reserve(terms_.size() * other.terms_.size());
    for (const auto &a : terms_) {
        for (const auto &b : other.terms_) {
            terms.push_back({a.weight * b.weight, a.state.tensor(b.state)});
        }
    }
    return MixedState(std::move(terms));
}

MixedState MixedState::reordered(std::span<const std::string> names) const {
    return transformed([&](StateVector &s) { s = s.reordered(names); });
}

MixedState MixedState::merged(std::span<const std::string> parts, std::string name) const {
    return transformed([&](StateVector &s) { s = s.merged(parts, name); });
}

MixedState MixedState::split(std::string_view name, const Layout &parts) const {
    return transformed([&](StateVector &s) { s = s.split(name, parts); });
}

double MixedState::expectation(const StateVector &psi) const {
    double total = 0;
    for (const auto &t : terms_) {
        total += t.weight * std::norm(psi.inner(t.state));
    }
    return total;
}

Eigen::MatrixXcd MixedState::density_matrix() const {
    const size_t n = terms_.front().state.size();
    if (n > 4096) {
        throw ResourceError("density matrix above 4096 dimensions");
    }
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(N, N);
    for (const auto &t : terms_) {
        Eigen::Map<const Eigen::VectorXcd> v(t.state.amplitudes().data(), N);
        rho += t.weight * v * v.adjoint();
    }
    return rho;
}

Eigen::MatrixXcd MixedState::reduced_density_matrix(std::span<const std::string> keep) const {
    std::vector<std::string> order(keep.begin(), keep.end());
    size_t kept = 1;
    for (const auto &name : keep) {
        kept *= static_cast<size_t>(terms_.front().state.dim(name));
    }
    if (kept > 4096) {
        throw ResourceError("reduced density matrix above 4096 dimensions");
    }
    for (const auto &s : layout()) {
        if (std::find(keep.begin(), keep.end(), s.name) == keep.end()) {
            order.push_back(s.name);
        }
    }
    const auto K = static_cast<Eigen::Index>(kept);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(K, K);
    for (const auto &t : terms_) {
        StateVector v = t.state.reordered(order);
        const auto R = static_cast<Eigen::Index>(v.size() / kept);
        // Row-major amplitudes viewed as a (kept x rest) matrix.
        Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
            v.amplitudes().data(), K, R);
        rho += t.weight * m * m.adjoint();
    }
    return rho;
}

double trace_distance(const MixedState &rho, const MixedState &sigma) {
    std::vector<std::string> names = names_of(rho.layout());
    MixedState other = sigma.reordered(names);
    if (other.layout() != rho.layout()) {
        throw DomainError("trace distance needs matching layouts");
    }
    std::vector<const StateVector *> vecs;
    std::vector<double> coeff;
    for (const auto &t : rho.terms()) {
        vecs.push_back(&t.state);
        coeff.push_back(t.weight);
    }
    for (const auto &t : other.terms()) {
        vecs.push_back(&t.state);
        coeff.push_back(-t.weight);
    }
    const auto K = static_cast<Eigen::Index>(vecs.size());
    const auto N = static_cast<Eigen::Index>(vecs.front()->size());
    Eigen::MatrixXcd V(N, K);
    for (Eigen::Index k = 0; k < K; k++) {
        V.col(k) = Eigen::Map<const Eigen::VectorXcd>(vecs[static_cast<size_t>(k)]->amplitudes().data(), N);
    }
    // rho - sigma = V C V^dag shares its nonzero spectrum with W^dag C W,
    // where G = V^dag V = W W^dag.
    Eigen::MatrixXcd G = V.adjoint() * V;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(G);
    const double top = std::max(1.0, gram.eigenvalues().maxCoeff());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < K; k++) {
        if (gram.eigenvalues()[k] > 1e-14 * top) {
            keep.push_back(k);
        }
    }
    Eigen::MatrixXcd W(K, static_cast<Eigen::Index>(keep.size()));
    for (size_t c = 0; c < keep.size(); c++) {
        W.col(static_cast<Eigen::Index>(c)) =
            gram.eigenvectors().col(keep[c]) * std::sqrt(gram.eigenvalues()[keep[c]]);
    }
    Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coeff.data(), K);
    Eigen::MatrixXcd M = W.adjoint() * c.asDiagonal() * W;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(M, Eigen::EigenvaluesOnly);
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const Eigen::MatrixXcd &rho, const Eigen::MatrixXcd &sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw DomainError("trace distance needs equal shapes");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho - sigma, Eigen::EigenvaluesOnly);
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

double state_fidelity(const StateVector &psi, const StateVector &phi) {
    return std::norm(psi.inner(phi));
}

// ---- States ---------------------------------------------------------------

StateVector make_bell(int i, int j, std::string a, std::string b) {
    if ((i != 0 && i != 1) || (j != 0 && j != 1)) {
        throw DomainError("Bell labels are bits");
    }
    return make_qudit_bell(2, i, j, std::move(a), std::move(b));
}

StateVector make_qudit_bell(int d, int m, int n, std::string a, std::string b) {
    if (d < 2 || m < 0 || m >= d || n < 0 || n >= d) {
        throw DomainError("qudit Bell labels must lie in [0, d)");
    }
    std::vector<Complex> amps(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; k++) {
        const double angle = 2 * std::numbers::pi * static_cast<double>((k * m) % d) / d;
        amps[static_cast<size_t>(k * d + wrap(k - n, d))] = std::polar(scale, angle);
    }
    return StateVector({{std::move(a), d}, {std::move(b), d}}, std::move(amps));
}

StateVector make_product_pair(int a_bit, int b_bit, std::string a, std::string b) {
    int digits[] = {a_bit, b_bit};
    return StateVector::basis({{std::move(a), 2}, {std::move(b), 2}}, digits);
}

MixedState noise_state(const NoiseModel &noise, std::string a, std::string b) {
    std::vector<MixedState::Term> terms;
    const double f = to_double(noise.fidelity());
    switch (noise.kind()) {
        case NoiseModel::Kind::PureTarget:
            terms.push_back({1.0, make_bell(0, 0, a, b)});
            break;
        case NoiseModel::Kind::Rank2:
            terms.push_back({f, make_bell(0, 0, a, b)});
            terms.push_back({1 - f, make_product_pair(0, 1, a, b)});
            break;
        case NoiseModel::Kind::Werner:
            terms.push_back({f, make_bell(0, 0, a, b)});
            for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
                terms.push_back({(1 - f) / 3, make_bell(i, j, a, b)});
            }
            break;
        case NoiseModel::Kind::IsotropicQudit: {
            const int d = noise.local_dim();
            const double q = to_double(noise.weight());
            const double rest = (1 - q) / (static_cast<double>(d) * d);
            for (int m = 0; m < d; m++) {
                for (int n = 0; n < d; n++) {
                    double w = rest + (m == 0 && n == 0 ? q : 0.0);
                    terms.push_back({w, make_qudit_bell(d, m, n, a, b)});
                }
            }
            break;
        }
    }
    std::erase_if(terms, [](const MixedState::Term &t) { return t.weight == 0; });
    return MixedState(std::move(terms));
}

std::vector<std::string> side_names(char side, int n, int first) {
    std::vector<std::string> out;
    for (int k = first; k < first + n; k++) {
        out.push_back(std::string(1, side) + std::to_string(k));
    }
    return out;
}

MixedState ensemble_state(const NoiseModel &noise, int n) {
    if (n < 1) {
        throw DomainError("ensemble needs at least one copy");
    }
    auto as = side_names('A', n);
    auto bs = side_names('B', n);
    MixedState out = noise_state(noise, as[0], bs[0]);
    for (int k = 1; k < n; k++) {
        out = out.tensor(noise_state(noise, as[static_cast<size_t>(k)], bs[static_cast<size_t>(k)]));
    }
    return out;
}

MixedState embed_pairs(
    const MixedState &state,
    std::span<const std::string> a_qubits,
    std::span<const std::string> b_qubits,
    std::string a,
    std::string b) {
    if (a_qubits.size() != b_qubits.size() || a_qubits.empty()) {
        throw DomainError("embedding needs matching nonempty qubit lists");
    }
    std::vector<std::string> order;
    for (const auto &s : state.layout()) {
        bool used = std::find(a_qubits.begin(), a_qubits.end(), s.name) != a_qubits.end() ||
                    std::find(b_qubits.begin(), b_qubits.end(), s.name) != b_qubits.end();
        if (!used) {
            order.push_back(s.name);
        }
    }
    std::vector<std::string> a_msb(a_qubits.rbegin(), a_qubits.rend());
    std::vector<std::string> b_msb(b_qubits.rbegin(), b_qubits.rend());
    order.insert(order.end(), a_msb.begin(), a_msb.end());
    order.insert(order.end(), b_msb.begin(), b_msb.end());
    return state.reordered(order).merged(a_msb, std::move(a)).merged(b_msb, std::move(b));
}

double target_fidelity(const MixedState &pair) {
    const auto &layout = pair.layout();
    if (layout.size() != 2 || layout[0].dim != layout[1].dim) {
        throw DomainError("target fidelity needs a d x d pair");
    }
    return pair.expectation(make_qudit_bell(layout[0].dim, 0, 0, layout[0].name, layout[1].name));
}

NoiseModel twirl_to_werner(const MixedState &two_qubit) {
    const auto &layout = two_qubit.layout();
    if (layout.size() != 2 || layout[0].dim != 2 || layout[1].dim != 2) {
        throw DomainError("Werner twirl needs a two-qubit state");
    }
    double f = std::clamp(target_fidelity(two_qubit) / two_qubit.trace(), 0.0, 1.0);
    if (f < 0.25) {
        throw DomainError("Werner form needs fidelity >= 1/4");
    }
    return NoiseModel::werner(Rational(f));
}

NoiseModel twirl_to_isotropic(const MixedState &qudit_pair) {
    const int d = qudit_pair.layout().at(0).dim;
    double f = std::clamp(target_fidelity(qudit_pair) / qudit_pair.trace(), 0.0, 1.0);
    double q = std::clamp(fidelity_to_q(f, d), -1.0 / (static_cast<double>(d) * d - 1), 1.0);
    if (q < 0) {
        throw DomainError("isotropic twirl with fidelity below 1/d^2 is outside the promised family");
    }
    return NoiseModel::isotropic_qudit(d, Rational(q));
}

// ---- Gates ----------------------------------------------------------------

void apply_bcx(StateVector &state, const PairNames &control, const PairNames &target) {
    state.apply_controlled_shift(control.a, target.a, -1);
    state.apply_controlled_shift(control.b, target.b, -1);
}

void apply_bcx_inverse(StateVector &state, const PairNames &control, const PairNames &target) {
    state.apply_controlled_shift(control.a, target.a, +1);
    state.apply_controlled_shift(control.b, target.b, +1);
}

MixedState apply_bcx(const MixedState &state, const PairNames &control, const PairNames &target) {
    return state.transformed([&](StateVector &s) { apply_bcx(s, control, target); });
}

MixedState apply_eng(const MixedState &state, std::span<const PairNames> controls, const PairNames &aux) {
    return state.transformed([&](StateVector &s) {
        for (const auto &c : controls) {
            apply_bcx(s, c, aux);
        }
    });
}

MixedState apply_eng_inverse(
    const MixedState &state, std::span<const PairNames> controls, const PairNames &aux) {
    return state.transformed([&](StateVector &s) {
        for (size_t k = controls.size(); k-- > 0;) {
            apply_bcx_inverse(s, controls[k], aux);
        }
    });
}

std::vector<PairNames> ensemble_pairs(int n) {
    std::vector<PairNames> out;
    auto as = side_names('A', n);
    auto bs = side_names('B', n);
    for (int k = 0; k < n; k++) {
        out.push_back({as[static_cast<size_t>(k)], bs[static_cast<size_t>(k)]});
    }
    return out;
}

// ---- Measurement ----------------------------------------------------------

std::string to_string(ParityOutcome outcome) {
    switch (outcome) {
        case ParityOutcome::M1:
            return "M1";
        case ParityOutcome::M2:
            return "M2";
        case ParityOutcome::M3:
            return "M3";
        case ParityOutcome::M4:
            return "M4";
    }
    return "?";
}

std::vector<MeasurementRecord> measure_parity_pair(const MixedState &state, const PairNames &aux) {
    const int d = state.terms().front().state.dim(aux.a);
    if (d % 2 != 0 || state.terms().front().state.dim(aux.b) != d) {
        throw DomainError("parity measurement needs an even d x d register");
    }
    MixedState split = state.split(aux.a, {{aux.a, d / 2}, {kLsbA, 2}}).split(aux.b, {{aux.b, d / 2}, {kLsbB, 2}});
    const std::pair<ParityOutcome, std::pair<int, int>> outcomes[] = {
        {ParityOutcome::M1, {0, 0}},
        {ParityOutcome::M2, {1, 0}},
        {ParityOutcome::M3, {0, 1}},
        {ParityOutcome::M4, {1, 1}},
    };
    const double total = state.trace();
    std::vector<MeasurementRecord> records;
    for (const auto &[label, ab] : outcomes) {
        std::vector<MixedState::Term> terms;
        double p = 0;
        for (const auto &t : split.terms()) {
            StateVector v = t.state.project(kLsbA, ab.first).project(kLsbB, ab.second);
            double w = t.weight * std::pow(v.norm(), 2);
            if (w > 1e-30) {
                v.normalize();
                terms.push_back({w, std::move(v)});
                p += w;
            }
        }
        for (auto &t : terms) {
            t.weight /= p;
        }
        MeasurementRecord r{label, ab.first, ab.second, p / total, {}};
        if (!terms.empty()) {
            r.post_state = MixedState(std::move(terms));
        }
        records.push_back(std::move(r));
    }
    return records;
}

MixedState reembed(const MixedState &state, const PairNames &aux) {
    MixedState joined = state.tensor(MixedState(make_bell(0, 0, kFreshA, kFreshB)));
    std::vector<std::string> order;
    for (const auto &s : state.layout()) {
        order.push_back(s.name);
        if (s.name == aux.a) {
            order.push_back(kFreshA);
        } else if (s.name == aux.b) {
            order.push_back(kFreshB);
        }
    }
    const std::string pa[] = {aux.a, kFreshA};
    const std::string pb[] = {aux.b, kFreshB};
    return joined.reordered(order).merged(pa, aux.a).merged(pb, aux.b);
}

MixedState correct(const MixedState &state, const PairNames &aux, ParityOutcome label) {
    int amount = 0;
    if (label == ParityOutcome::M2) {
        amount = -1;
    } else if (label == ParityOutcome::M3) {
        amount = +1;
    }
    if (amount == 0) {
        return state;
    }
    return state.transformed([&](StateVector &s) { s.apply_shift(aux.b, amount); });
}

MixedState reembed_and_correct(const MixedState &state, const PairNames &aux, ParityOutcome label) {
    return correct(reembed(state, aux), aux, label);
}

std::vector<double> amplitude_index_distribution(const MixedState &state, const PairNames &aux) {
    const StateVector &first = state.terms().front().state;
    const int ia = first.find(aux.a);
    const int ib = first.find(aux.b);
    const int d = first.layout()[static_cast<size_t>(ia)].dim;
    if (first.layout()[static_cast<size_t>(ib)].dim != d) {
        throw DomainError("amplitude index needs a d x d register");
    }
    size_t sa = 1;
    size_t sb = 1;
    for (size_t i = first.layout().size(); i-- > 0;) {
        if (static_cast<int>(i) == ia) {
            break;
        }
        sa *= static_cast<size_t>(first.layout()[i].dim);
    }
    for (size_t i = first.layout().size(); i-- > 0;) {
        if (static_cast<int>(i) == ib) {
            break;
        }
        sb *= static_cast<size_t>(first.layout()[i].dim);
    }
    std::vector<double> out(static_cast<size_t>(d), 0.0);
    for (const auto &t : state.terms()) {
        const auto &amps = t.state.amplitudes();
        for (size_t idx = 0; idx < amps.size(); idx++) {
            const int a = static_cast<int>((idx / sa) % static_cast<size_t>(d));
            const int b = static_cast<int>((idx / sb) % static_cast<size_t>(d));
            out[static_cast<size_t>(wrap(a - b, d))] += t.weight * std::norm(amps[idx]);
        }
    }
    return out;
}

namespace {

const PairNames kAux{"AX", "BX"};

MixedState dense_initial_aux(const StrategySpec &strategy, const NoiseModel &noise) {
    const int d = strategy.aux_dimension(noise.local_dim());
    if (!strategy.uses_embedded_aux()) {
        return MixedState(make_qudit_bell(d, 0, 0, kAux.a, kAux.b));
    }
    MixedState copies = ensemble_state(noise, strategy.m_embed);
    auto as = side_names('A', strategy.m_embed);
    auto bs = side_names('B', strategy.m_embed);
    MixedState embedded = embed_pairs(copies, as, bs, kAux.a, kAux.b);
    return noise_state(twirl_to_isotropic(embedded), kAux.a, kAux.b);
}

// Sums `visit(weight, pure joint state after the ENG)` over every product
// of mixture terms, so no joint mixture is ever held in memory.
void for_each_eng_output(
    const StrategySpec &strategy,
    const NoiseModel &noise,
    const std::function<void(double, const StateVector &)> &visit) {
    strategy.validate(noise.local_dim());
    MixedState aux = dense_initial_aux(strategy, noise);
    const int n = strategy.n;
    if (n == 0) {
        for (const auto &t : aux.terms()) {
            visit(t.weight, t.state);
        }
        return;
    }
    auto pairs = ensemble_pairs(n);
    std::vector<MixedState> copies;
    for (const auto &p : pairs) {
        copies.push_back(noise_state(noise, p.a, p.b));
    }
    std::vector<size_t> pick(static_cast<size_t>(n), 0);
    while (true) {
        double w = 1;
        StateVector joint = copies[0].terms()[pick[0]].state;
        w *= copies[0].terms()[pick[0]].weight;
        for (size_t k = 1; k < copies.size(); k++) {
            joint = joint.tensor(copies[k].terms()[pick[k]].state);
            w *= copies[k].terms()[pick[k]].weight;
        }
        for (const auto &t : aux.terms()) {
            StateVector full = joint.tensor(t.state);
            for (const auto &c : pairs) {
                apply_bcx(full, c, kAux);
            }
            visit(w * t.weight, full);
        }
        size_t k = 0;
        while (k < pick.size() && ++pick[k] == copies[k].terms().size()) {
            pick[k] = 0;
            k++;
        }
        if (k == pick.size()) {
            break;
        }
    }
}

double subspace_accept(const MixedState &state, int rounds) {
    if (rounds == 0) {
        return 1.0;
    }
    double total = 0;
    for (auto &r : measure_parity_pair(state, kAux)) {
        if (!r.odd() && r.probability > 0) {
            total += r.probability * subspace_accept(r.post_state, rounds - 1);
        }
    }
    return total;
}

}  // namespace

std::vector<double> dense_aux_distribution(const StrategySpec &strategy, const NoiseModel &noise) {
    if (strategy.kind == StrategyKind::SingleCopyBaseline) {
        throw DomainError("the single-copy baseline has no auxiliary register");
    }
    std::vector<double> out(static_cast<size_t>(strategy.aux_dimension(noise.local_dim())), 0.0);
    for_each_eng_output(strategy, noise, [&](double w, const StateVector &s) {
        auto dist = amplitude_index_distribution(MixedState(s), kAux);
        for (size_t j = 0; j < out.size(); j++) {
            out[j] += w * dist[j];
        }
    });
    return out;
}

double dense_strategy_acceptance(const StrategySpec &strategy, const NoiseModel &noise) {
    if (strategy.kind == StrategyKind::SingleCopyBaseline) {
        double p = 1;
        for (const auto &pair : ensemble_pairs(strategy.n)) {
            MixedState copy = noise_state(noise, pair.a, pair.b);
            p *= copy.expectation(make_bell(0, 0, pair.a, pair.b));
        }
        return p;
    }
    if (!strategy.uses_subspace_readout()) {
        return dense_aux_distribution(strategy, noise)[0];
    }
    double total = 0;
    for_each_eng_output(strategy, noise, [&](double w, const StateVector &s) {
        total += w * subspace_accept(MixedState(s), strategy.m);
    });
    return total;
}

Eigen::MatrixXcd hadamard() {
    Eigen::MatrixXcd h(2, 2);
    const double s = 1 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

}  // namespace enverify
