#include "enverify/analytic.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "enverify/core_model.h"
#include "enverify/errors.h"

namespace enverify {

namespace {

template <class T>
void require_probability(const T &x, const char *what) {
    if (x < 0 || x > 1) {
        throw DomainError(std::string(what) + " must lie in [0, 1]");
    }
}

void require_n(int n) {
    if (n < 1) {
        throw DomainError("ensemble size must be >= 1");
    }
}

template <class T>
T half() {
    return Arith<T>::from(Rational(1, 2));
}

template <class T>
T quarter() {
    return Arith<T>::from(Rational(1, 4));
}

}  // namespace

template <class T>
T rank2_delta_full(const T &fidelity, int n) {
    require_probability(fidelity, "fidelity");
    require_n(n);
    return Arith<T>::pow(fidelity, static_cast<unsigned>(n));
}

template <class T>
T rank2_delta_subspace(const T &fidelity, int n, int m) {
    require_probability(fidelity, "fidelity");
    require_n(n);
    if (m < 1 || m > ceil_log2(static_cast<long>(n) + 1)) {
        throw DomainError("subspace rounds must lie in [1, ceil(log2(n + 1))]");
    }
    const unsigned step = 1u << m;
    const unsigned un = static_cast<unsigned>(n);
    T error = T(1) - fidelity;
    T total = 0;
    for (unsigned errors = 0; errors <= un; errors += step) {
        total += Arith<T>::binomial_term(un, errors, fidelity, un - errors, error, errors);
    }
    return total;
}

template <class T>
std::vector<T> werner_pr_table(const T &fidelity, int n, int d) {
    if (d < 2) {
        throw DomainError("auxiliary dimension must be >= 2");
    }
    if (n < 0) {
        throw DomainError("ensemble size must be >= 0");
    }
    auto p = werner_error_probs(fidelity);
    T unshifted = p[0] + p[3];
    std::vector<T> table(static_cast<size_t>(d), T(0));
    const unsigned un = static_cast<unsigned>(n);
    for (unsigned up = 0; up <= un; up++) {
        for (unsigned down = 0; up + down <= un; down++) {
            unsigned stay = un - up - down;
            long j = (static_cast<long>(up) - static_cast<long>(down)) % d;
            if (j < 0) {
                j += d;
            }
            table[static_cast<size_t>(j)] +=
                Arith<T>::multinomial_term(un, stay, up, down, unshifted, p[1], p[2]);
        }
    }
    return table;
}

template <class T>
T werner_pr_j(const T &fidelity, int n, int d, int j) {
    if (j < 0 || j >= d) {
        throw DomainError("amplitude index must lie in [0, d)");
    }
    return werner_pr_table(fidelity, n, d)[static_cast<size_t>(j)];
}

template <class T>
T werner_delta_full(const T &fidelity, int n) {
    require_n(n);
    return werner_pr_j(fidelity, n, n + 1, 0);
}

template <class T>
T werner_delta_subspace(const T &fidelity, int n, int m) {
    require_n(n);
    int digits = ceil_log2(static_cast<long>(n) + 1);
    int d = 1 << digits;
    if (m < 1 || m > digits) {
        throw DomainError("subspace rounds must lie in [1, log2(d)]");
    }
    auto table = werner_pr_table(fidelity, n, d);
    T total = 0;
    for (int j = 0; j < d; j += 1 << m) {
        total += table[static_cast<size_t>(j)];
    }
    return total;
}

template <class T>
T balanced_shift_probability(int s) {
    if (s < 0) {
        throw DomainError("copy count must be >= 0");
    }
    const unsigned us = static_cast<unsigned>(s);
    T total = 0;
    for (unsigned pairs = 0; 2 * pairs <= us; pairs++) {
        total += Arith<T>::multinomial_term(us, us - 2 * pairs, pairs, pairs, half<T>(), quarter<T>(), quarter<T>());
    }
    return total;
}

template <class T>
T aligned_shift_probability(int s, int m) {
    if (s < 0) {
        throw DomainError("copy count must be >= 0");
    }
    if (m < 0) {
        throw DomainError("rounds must be >= 0");
    }
    const unsigned us = static_cast<unsigned>(s);
    const unsigned step = 1u << m;
    T total = 0;
    for (unsigned t = 0; t * step <= us; t++) {
        const unsigned offset = t * step;
        T inner = 0;
        for (unsigned j = 0; 2 * j + offset <= us; j++) {
            inner += Arith<T>::multinomial_term(
                us, us - 2 * j - offset, j, j + offset, half<T>(), quarter<T>(), quarter<T>());
        }
        if (t > 0) {
            inner *= 2;
        }
        total += inner;
    }
    return total;
}

template <class T>
T werner_delta_from_weight(const T &weight, int n) {
    require_probability(weight, "weight");
    require_n(n);
    const unsigned un = static_cast<unsigned>(n);
    T mixed = T(1) - weight;
    T total = 0;
    for (unsigned i = 0; i <= un; i++) {
        total += Arith<T>::binomial_term(un, i, weight, un - i, mixed, i) *
                 balanced_shift_probability<T>(static_cast<int>(i));
    }
    return total;
}

template <class T>
T werner_delta_subspace_from_weight(const T &weight, int n, int m) {
    require_probability(weight, "weight");
    require_n(n);
    int digits = ceil_log2(static_cast<long>(n) + 1);
    if (m < 1 || m > digits) {
        throw DomainError("subspace rounds must lie in [1, log2(d)]");
    }
    const unsigned un = static_cast<unsigned>(n);
    T mixed = T(1) - weight;
    T total = 0;
    for (unsigned i = 0; i <= un; i++) {
        total += Arith<T>::binomial_term(un, i, weight, un - i, mixed, i) *
                 aligned_shift_probability<T>(static_cast<int>(i), m);
    }
    return total;
}

template <class T>
EmbeddedAux<T> embedding_q(const T &fidelity, int m_embed) {
    if (m_embed < 1 || m_embed > 30) {
        throw DomainError("m_embed must lie in [1, 30]");
    }
    if (fidelity < half<T>() || fidelity > 1) {
        throw DomainError("embedding requires 1/2 <= F <= 1");
    }
    const int d = 1 << m_embed;
    T d2 = Arith<T>::from_int(static_cast<long>(d) * d);
    T q = (d2 * Arith<T>::pow(fidelity, static_cast<unsigned>(m_embed)) - 1) / (d2 - 1);
    return {d, q};
}

template <class T>
T direct_measure_delta(const T &fidelity, int m_embed) {
    auto aux = embedding_q(fidelity, m_embed);
    T d = Arith<T>::from_int(aux.d);
    return (1 + d * Arith<T>::pow(fidelity, static_cast<unsigned>(m_embed))) / (1 + d);
}

template <class T>
T embed_eng_delta(const T &fidelity, int n, int m_embed) {
    auto aux = embedding_q(fidelity, m_embed);
    if (n < 0 || static_cast<long>(n) + 1 > aux.d) {
        throw DomainError("embedded strategies require 2^m_embed >= n + 1");
    }
    T net_zero = werner_pr_table(fidelity, n, aux.d)[0];
    return aux.q * net_zero + (T(1) - aux.q) / Arith<T>::from_int(aux.d);
}

template <class T>
T embed_eng_subspace_delta(const T &fidelity, int n, int m_embed, int m) {
    auto aux = embedding_q(fidelity, m_embed);
    if (n < 0 || static_cast<long>(n) + 1 > aux.d) {
        throw DomainError("embedded strategies require 2^m_embed >= n + 1");
    }
    if (m < 1 || m > m_embed) {
        throw DomainError("subspace rounds must lie in [1, m_embed]");
    }
    auto table = werner_pr_table(fidelity, n, aux.d);
    T aligned = 0;
    for (int j = 0; j < aux.d; j += 1 << m) {
        aligned += table[static_cast<size_t>(j)];
    }
    return aux.q * aligned + (T(1) - aux.q) / Arith<T>::from_int(1L << m);
}

template <class T>
T strategy_failure(const StrategySpec &spec, const T &fidelity) {
    spec.validate();
    switch (spec.kind) {
        case StrategyKind::Rank2Full:
            return rank2_delta_full(fidelity, spec.n);
        case StrategyKind::Rank2Subspace:
            return rank2_delta_subspace(fidelity, spec.n, spec.m);
        case StrategyKind::WernerFull:
            return werner_delta_full(fidelity, spec.n);
        case StrategyKind::WernerSubspace:
            return werner_delta_subspace(fidelity, spec.n, spec.m);
        case StrategyKind::DirectEmbedMeasure:
            return direct_measure_delta(fidelity, spec.m_embed);
        case StrategyKind::EmbedEng:
            return embed_eng_delta(fidelity, spec.n, spec.m_embed);
        case StrategyKind::EmbedEngSubspace:
            return embed_eng_subspace_delta(fidelity, spec.n, spec.m_embed, spec.m);
        case StrategyKind::SingleCopyBaseline:
            require_probability(fidelity, "fidelity");
            return Arith<T>::pow(fidelity, static_cast<unsigned>(spec.n));
    }
    throw DomainError("unknown strategy");
}

int single_copy_copies(double delta_target, double fidelity) {
    if (!(delta_target > 0 && delta_target < 1)) {
        throw DomainError("target failure probability must lie in (0, 1)");
    }
    if (!(fidelity >= 0 && fidelity <= 1)) {
        throw DomainError("fidelity must lie in [0, 1]");
    }
    if (fidelity == 1) {
        throw DomainError("baseline undefined at F=1");
    }
    if (fidelity == 0) {
        return 1;
    }
    double ratio = std::log(delta_target) / std::log(fidelity);
    // Absorb the rounding of an exact integer ratio such as ln(1/4)/ln(1/2).
    int k = static_cast<int>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
    return std::max(k, 1);
}

ResourceUse nominal_resources(const StrategySpec &spec) {
    switch (spec.kind) {
        case StrategyKind::Rank2Full:
        case StrategyKind::WernerFull: {
            double d = spec.n + 1.0;
            return {ceil_log2(spec.n + 1L), std::log2(d)};
        }
        case StrategyKind::Rank2Subspace:
        case StrategyKind::WernerSubspace:
            return {spec.m, static_cast<double>(spec.m)};
        case StrategyKind::DirectEmbedMeasure:
        case StrategyKind::EmbedEng:
            return {spec.m_embed, static_cast<double>(spec.m_embed)};
        case StrategyKind::EmbedEngSubspace:
            return {spec.m_embed, static_cast<double>(spec.m)};
        case StrategyKind::SingleCopyBaseline:
            return {spec.n, static_cast<double>(spec.n)};
    }
    return {};
}

namespace {

ResourceReport make_report(const StrategySpec &spec, double delta) {
    auto use = nominal_resources(spec);
    return {spec, spec.n, delta, use.copies_consumed, use.ebits_consumed};
}

}  // namespace

ResourceReport copies_required(const StrategySpec &spec, double fidelity, double delta_target) {
    if (!(delta_target > 0 && delta_target < 1)) {
        throw DomainError("target failure probability must lie in (0, 1)");
    }
    if (!(fidelity >= 0 && fidelity < 1)) {
        throw DomainError(fidelity == 1 ? "baseline undefined at F=1" : "fidelity must lie in [0, 1)");
    }
    const int n_max = 2 * single_copy_copies(delta_target, fidelity) + 64;

    if (fidelity == 0) {
        // Every copy is orthogonal to the target: one copy always reveals it.
        StrategySpec one = spec;
        one.n = 1;
        if (spec.uses_embedded_aux()) {
            one.n = spec.kind == StrategyKind::DirectEmbedMeasure ? 0 : 1;
            one.m_embed = 1;
            one.m = spec.uses_subspace_readout() ? 1 : 0;
        } else if (spec.uses_subspace_readout()) {
            one.m = 1;
        }
        auto report = make_report(one, 0.0);
        report.ensemble_size = 1;
        return report;
    }

    auto failure = [&](const StrategySpec &s) { return strategy_failure<double>(s, fidelity); };

    if (spec.uses_embedded_aux()) {
        const int max_embed = std::min(24, ceil_log2(static_cast<long>(n_max) + 1));
        for (int m_embed = 1; m_embed <= max_embed; m_embed++) {
            StrategySpec s = spec;
            s.m_embed = m_embed;
            s.n = spec.kind == StrategyKind::DirectEmbedMeasure ? 0 : (1 << m_embed) - 1;
            if (s.uses_subspace_readout()) {
                s.m = std::min(spec.m > 0 ? spec.m : m_embed, m_embed);
            }
            double delta = failure(s);
            if (delta <= delta_target) {
                auto report = make_report(s, delta);
                report.ensemble_size = s.n;
                return report;
            }
        }
        throw ResourceError("copies_required: no m_embed <= " + std::to_string(max_embed) + " meets the target");
    }

    StrategySpec s = spec;
    if (spec.uses_subspace_readout()) {
        // Subspace failures oscillate in n, so scan instead of bisecting.
        for (int n = 1; n <= n_max; n++) {
            s.n = n;
            if (spec.m > ceil_log2(static_cast<long>(n) + 1)) {
                continue;
            }
            double delta = failure(s);
            if (delta <= delta_target) {
                return make_report(s, delta);
            }
        }
        throw ResourceError("copies_required: search bound n <= " + std::to_string(n_max) + " exhausted");
    }

    // Full readouts and the single-copy baseline are non-increasing in n.
    // Werner full readout only decays like 1/sqrt(n), so grow the bracket.
    constexpr int kSearchCap = 1 << 20;
    int lo = 1, hi = n_max;
    while (true) {
        s.n = hi;
        if (failure(s) <= delta_target) {
            break;
        }
        if (hi >= kSearchCap) {
            throw ResourceError("copies_required: search bound n <= " + std::to_string(kSearchCap) + " exhausted");
        }
        lo = hi + 1;
        hi = std::min(2 * hi, kSearchCap);
    }
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        s.n = mid;
        if (failure(s) <= delta_target) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    s.n = lo;
    return make_report(s, failure(s));
}

#define ENVERIFY_INSTANTIATE(T)                                                      \
    template T rank2_delta_full(const T &, int);                                     \
    template T rank2_delta_subspace(const T &, int, int);                            \
    template T werner_pr_j(const T &, int, int, int);                                \
    template std::vector<T> werner_pr_table(const T &, int, int);                    \
    template T werner_delta_full(const T &, int);                                    \
    template T werner_delta_subspace(const T &, int, int);                           \
    template T balanced_shift_probability<T>(int);                                   \
    template T aligned_shift_probability<T>(int, int);                               \
    template T werner_delta_from_weight(const T &, int);                             \
    template T werner_delta_subspace_from_weight(const T &, int, int);               \
    template EmbeddedAux<T> embedding_q(const T &, int);                             \
    template T direct_measure_delta(const T &, int);                                 \
    template T embed_eng_delta(const T &, int, int);                                 \
    template T embed_eng_subspace_delta(const T &, int, int, int);                   \
    template T strategy_failure(const StrategySpec &, const T &);

ENVERIFY_INSTANTIATE(double)
ENVERIFY_INSTANTIATE(Rational)

#undef ENVERIFY_INSTANTIATE

}  // namespace enverify
