#include "enverify/oracle.h"

#include <cmath>

#include "enverify/errors.h"

namespace enverify {

namespace {

using Int128 = unsigned __int128;

int wrap(long value, int d) {
    long r = value % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

BigInt to_big(Int128 x) {
    BigInt hi(static_cast<unsigned long>(x >> 64));
    BigInt lo(static_cast<unsigned long>(x & ~0ul));
    return (hi << 64) + lo;
}

struct Scaled {
    BigInt denominator;
    std::vector<BigInt> numerators;
};

// Writes the weights as integers over their least common denominator.
Scaled scale_to_integers(const std::vector<Rational> &weights) {
    Scaled out{1, {}};
    for (const auto &w : weights) {
        mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), w.get_den_mpz_t());
    }
    for (const auto &w : weights) {
        out.numerators.push_back(w.get_num() * (out.denominator / w.get_den()));
    }
    return out;
}

template <class Int>
std::vector<Int> enumerate_tuples(const std::vector<Int> &num, const std::vector<int> &shift, int n, int d) {
    std::vector<Int> acc(static_cast<size_t>(d), Int(0));
    std::vector<size_t> choice(static_cast<size_t>(n), 0);
    std::vector<Int> prefix(static_cast<size_t>(n) + 1, Int(1));
    std::vector<int> index(static_cast<size_t>(n) + 1, 0);
    size_t level = 0;
    const size_t outcomes = num.size();
    // Depth-first walk over every outcome tuple; prefix[l] and index[l]
    // hold the weight and amplitude index after the first l copies.
    while (true) {
        if (level == static_cast<size_t>(n)) {
            acc[static_cast<size_t>(index[level])] += prefix[level];
            while (level > 0 && ++choice[level - 1] == outcomes) {
                choice[level - 1] = 0;
                level--;
            }
            if (level == 0) {
                break;
            }
            level--;
        }
        const size_t c = choice[level];
        prefix[level + 1] = prefix[level] * num[c];
        index[level + 1] = wrap(static_cast<long>(index[level]) + shift[c], d);
        level++;
    }
    return acc;
}

void check_enumeration(int n, int d) {
    if (n < 0) {
        throw DomainError("ensemble size must be >= 0");
    }
    if (d < 1) {
        throw DomainError("auxiliary dimension must be >= 1");
    }
}

}  // namespace

Rational ExactDistribution::total() const {
    Rational t = 0;
    for (const auto &w : weights) {
        t += w;
    }
    return t;
}

Rational ExactDistribution::aligned_mass(int modulus) const {
    if (modulus < 1) {
        throw DomainError("modulus must be >= 1");
    }
    Rational t = 0;
    for (int j = 0; j < d; j += modulus) {
        t += weights[static_cast<size_t>(j)];
    }
    return t;
}

ExactDistribution ExactDistribution::convolve(const ExactDistribution &other) const {
    if (other.d != d) {
        throw DomainError("convolution needs equal dimensions");
    }
    ExactDistribution out{d, std::vector<Rational>(static_cast<size_t>(d), Rational(0))};
    for (int i = 0; i < d; i++) {
        if (weights[static_cast<size_t>(i)] == 0) {
            continue;
        }
        for (int j = 0; j < d; j++) {
            out.weights[static_cast<size_t>((i + j) % d)] += weights[static_cast<size_t>(i)] * other.weights[static_cast<size_t>(j)];
        }
    }
    return out;
}

std::vector<DiagonalOutcome> computational_diagonal(const NoiseModel &noise) {
    const Rational f = noise.fidelity();
    switch (noise.kind()) {
        case NoiseModel::Kind::PureTarget:
            return {{0, 0, Rational(1, 2)}, {1, 1, Rational(1, 2)}};
        case NoiseModel::Kind::Rank2:
            // F |Psi_00><Psi_00| + (1 - F) |01><01|.
            return {{0, 0, f / 2}, {1, 1, f / 2}, {0, 1, 1 - f}, {1, 0, Rational(0)}};
        case NoiseModel::Kind::Werner: {
            // |Psi_00> and |Psi_10> both live on 00/11; |Psi_01>, |Psi_11> on 01/10.
            const Rational e = (1 - f) / 3;
            const Rational same = (f + e) / 2;
            const Rational cross = (e + e) / 2;
            return {{0, 0, same}, {1, 1, same}, {0, 1, cross}, {1, 0, cross}};
        }
        case NoiseModel::Kind::IsotropicQudit: {
            const int d = noise.local_dim();
            const Rational q = noise.weight();
            const Rational uniform = (1 - q) / Rational(d * d);
            std::vector<DiagonalOutcome> out;
            for (int a = 0; a < d; a++) {
                for (int b = 0; b < d; b++) {
                    out.push_back({a, b, uniform + (a == b ? q / d : Rational(0))});
                }
            }
            return out;
        }
    }
    return {};
}

int outcome_shift(const DiagonalOutcome &outcome, int local_dim) {
    return local_dim == 2 ? outcome.b - outcome.a : outcome.a - outcome.b;
}

ExactDistribution enumerate_shift_distribution_brute(const NoiseModel &noise, int n, int d) {
    check_enumeration(n, d);
    if (n > 12) {
        throw ResourceError("exhaustive enumeration is limited to n <= 12");
    }
    std::vector<DiagonalOutcome> outcomes;
    for (auto &o : computational_diagonal(noise)) {
        if (o.weight != 0) {
            outcomes.push_back(o);
        }
    }
    if (std::pow(static_cast<double>(outcomes.size()), n) > 1 << 26) {
        throw ResourceError("too many outcome tuples for exhaustive enumeration");
    }
    std::vector<Rational> w;
    std::vector<int> shift;
    for (const auto &o : outcomes) {
        w.push_back(o.weight);
        shift.push_back(outcome_shift(o, noise.local_dim()));
    }
    Scaled s = scale_to_integers(w);
    const BigInt scale = [&] {
        BigInt p = 1;
        for (int i = 0; i < n; i++) {
            p *= s.denominator;
        }
        return p;
    }();

    std::vector<BigInt> acc;
    bool small = mpz_sizeinbase(scale.get_mpz_t(), 2) < 126;
    for (const auto &v : s.numerators) {
        small = small && v.fits_ulong_p();
    }
    if (small) {
        std::vector<Int128> num;
        for (const auto &v : s.numerators) {
            num.push_back(static_cast<Int128>(v.get_ui()));
        }
        for (const auto &v : enumerate_tuples<Int128>(num, shift, n, d)) {
            acc.push_back(to_big(v));
        }
    } else {
        acc = enumerate_tuples<BigInt>(s.numerators, shift, n, d);
    }
    ExactDistribution out{d, {}};
    for (const auto &a : acc) {
        Rational r(a, scale);
        r.canonicalize();
        out.weights.push_back(r);
    }
    return out;
}

ExactDistribution enumerate_shift_distribution_dp(const NoiseModel &noise, int n, int d) {
    check_enumeration(n, d);
    std::vector<Rational> w;
    std::vector<int> shift;
    for (const auto &o : computational_diagonal(noise)) {
        if (o.weight != 0) {
            w.push_back(o.weight);
            shift.push_back(wrap(outcome_shift(o, noise.local_dim()), d));
        }
    }
    if (n > 10000 || static_cast<double>(n) * d * static_cast<double>(w.size()) > 5e7) {
        throw ResourceError("shift convolution exceeds its work limit (n <= 10^4, n d support <= 5e7)");
    }
    Scaled s = scale_to_integers(w);
    std::vector<BigInt> cur(static_cast<size_t>(d), BigInt(0));
    cur[0] = 1;
    std::vector<BigInt> next(static_cast<size_t>(d));
    BigInt scale = 1;
    for (int c = 0; c < n; c++) {
        for (auto &x : next) {
            x = 0;
        }
        for (int j = 0; j < d; j++) {
            if (cur[static_cast<size_t>(j)] == 0) {
                continue;
            }
            for (size_t o = 0; o < shift.size(); o++) {
                next[static_cast<size_t>((j + shift[o]) % d)] += cur[static_cast<size_t>(j)] * s.numerators[o];
            }
        }
        std::swap(cur, next);
        scale *= s.denominator;
    }
    ExactDistribution out{d, {}};
    for (const auto &a : cur) {
        Rational r(a, scale);
        r.canonicalize();
        out.weights.push_back(r);
    }
    return out;
}

ExactDistribution enumerate_shift_distribution(const NoiseModel &noise, int n, int d) {
    size_t support = 0;
    for (const auto &o : computational_diagonal(noise)) {
        support += o.weight != 0 ? 1 : 0;
    }
    if (n <= 12 && std::pow(static_cast<double>(support), n) <= 1 << 26) {
        return enumerate_shift_distribution_brute(noise, n, d);
    }
    return enumerate_shift_distribution_dp(noise, n, d);
}

ExactDistribution initial_aux_distribution(const StrategySpec &strategy, const NoiseModel &noise) {
    strategy.validate(noise.local_dim());
    if (strategy.kind == StrategyKind::SingleCopyBaseline) {
        throw DomainError("the single-copy baseline has no auxiliary register");
    }
    const int d = strategy.aux_dimension(noise.local_dim());
    ExactDistribution out{d, std::vector<Rational>(static_cast<size_t>(d), Rational(0))};
    if (!strategy.uses_embedded_aux()) {
        out.weights[0] = 1;
        return out;
    }
    // m_embed copies fused into one register overlap the target with F^m;
    // depolarizing keeps that overlap and spreads the rest evenly.
    Rational overlap = 1;
    for (int i = 0; i < strategy.m_embed; i++) {
        overlap *= noise.fidelity();
    }
    const Rational d2(d * d);
    const Rational q = (d2 * overlap - 1) / (d2 - 1);
    for (int j = 0; j < d; j++) {
        out.weights[static_cast<size_t>(j)] = (1 - q) / d + (j == 0 ? q : Rational(0));
    }
    return out;
}

Rational enumerate_strategy_failure(const StrategySpec &strategy, const NoiseModel &noise) {
    strategy.validate(noise.local_dim());
    if (strategy.kind == StrategyKind::SingleCopyBaseline) {
        Rational p = 1;
        for (int i = 0; i < strategy.n; i++) {
            p *= noise.single_copy_pass_probability();
        }
        return p;
    }
    ExactDistribution aux = initial_aux_distribution(strategy, noise);
    ExactDistribution final_dist = aux;
    if (strategy.n > 0) {
        final_dist = aux.convolve(enumerate_shift_distribution(noise, strategy.n, aux.d));
    }
    if (strategy.uses_subspace_readout()) {
        return final_dist.aligned_mass(1 << strategy.m);
    }
    return final_dist[0];
}

std::vector<Rational> enumerate_ghz_amplitude_distribution(const GhzDiagonalState &noise, int n, int d) {
    const int m = noise.parties;
    if (n < 1) {
        throw DomainError("ensemble needs at least one copy");
    }
    if (d < 2) {
        throw DomainError("auxiliary dimension must be >= 2");
    }
    if (static_cast<double>(m) * n > 24) {
        throw ResourceError("GHZ enumeration limited to 2^(m n) <= 2^24 tuples");
    }
    const unsigned strings = 1u << m;
    const unsigned mask = (1u << (m - 1)) - 1;
    // Computational diagonal of one copy: bit 0 of x is party 1, bit p is
    // party p + 1. |0k> and |1 not(k)> carry (F + lambda0)/2 when k = 0 and
    // lambda_k otherwise.
    std::vector<Rational> weight(strings);
    std::vector<std::vector<int>> shift(strings, std::vector<int>(static_cast<size_t>(m - 1)));
    for (unsigned x = 0; x < strings; x++) {
        const unsigned first = x & 1u;
        const unsigned rest = x >> 1;
        const unsigned k = first ? (~rest & mask) : rest;
        weight[x] = k == 0 ? (noise.fidelity + noise.lambda0) / 2 : noise.lambda_k(k);
        for (int p = 0; p < m - 1; p++) {
            shift[x][static_cast<size_t>(p)] = static_cast<int>((x >> (p + 1)) & 1u) - static_cast<int>(first);
        }
    }
    size_t states = 1;
    for (int p = 0; p < m - 1; p++) {
        states *= static_cast<size_t>(d);
    }
    std::vector<Rational> out(states, Rational(0));
    std::vector<unsigned> choice(static_cast<size_t>(n), 0);
    std::vector<Rational> prefix(static_cast<size_t>(n) + 1, Rational(1));
    std::vector<std::vector<int>> vec(static_cast<size_t>(n) + 1, std::vector<int>(static_cast<size_t>(m - 1), 0));
    size_t level = 0;
    while (true) {
        if (level == static_cast<size_t>(n)) {
            size_t index = 0;
            size_t scale = 1;
            for (int v : vec[level]) {
                index += static_cast<size_t>(v) * scale;
                scale *= static_cast<size_t>(d);
            }
            out[index] += prefix[level];
            while (level > 0 && ++choice[level - 1] == strings) {
                choice[level - 1] = 0;
                level--;
            }
            if (level == 0) {
                break;
            }
            level--;
        }
        const unsigned x = choice[level];
        prefix[level + 1] = prefix[level] * weight[x];
        for (int p = 0; p < m - 1; p++) {
            vec[level + 1][static_cast<size_t>(p)] =
                wrap(static_cast<long>(vec[level][static_cast<size_t>(p)]) + shift[x][static_cast<size_t>(p)], d);
        }
        level++;
    }
    return out;
}

Rational enumerate_ghz_amplitude_acceptance(const GhzDiagonalState &noise, int n) {
    int d = 2;
    while (d < n + 1) {
        d *= 2;
    }
    return enumerate_ghz_amplitude_distribution(noise, n, d)[0];
}

}  // namespace enverify
