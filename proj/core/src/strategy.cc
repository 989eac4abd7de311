#include "enverify/strategy.h"

#include "enverify/errors.h"

namespace enverify {

int ceil_log2(long x) {
    if (x < 1) {
        throw DomainError("ceil_log2 needs x >= 1");
    }
    int k = 0;
    while ((1L << k) < x) {
        k++;
    }
    return k;
}

bool is_power_of_two(long x) {
    return x > 0 && (x & (x - 1)) == 0;
}

StrategySpec StrategySpec::rank2_full(int n) {
    return {StrategyKind::Rank2Full, n, 0, 0};
}
StrategySpec StrategySpec::rank2_subspace(int n, int m) {
    return {StrategyKind::Rank2Subspace, n, m, 0};
}
StrategySpec StrategySpec::werner_full(int n) {
    return {StrategyKind::WernerFull, n, 0, 0};
}
StrategySpec StrategySpec::werner_subspace(int n, int m) {
    return {StrategyKind::WernerSubspace, n, m, 0};
}
StrategySpec StrategySpec::direct_embed_measure(int m_embed) {
    return {StrategyKind::DirectEmbedMeasure, 0, 0, m_embed};
}
StrategySpec StrategySpec::embed_eng(int n, int m_embed) {
    return {StrategyKind::EmbedEng, n, 0, m_embed};
}
StrategySpec StrategySpec::embed_eng_subspace(int n, int m_embed, int m) {
    return {StrategyKind::EmbedEngSubspace, n, m, m_embed};
}
StrategySpec StrategySpec::single_copy(int n) {
    return {StrategyKind::SingleCopyBaseline, n, 0, 0};
}

bool StrategySpec::uses_subspace_readout() const {
    return kind == StrategyKind::Rank2Subspace || kind == StrategyKind::WernerSubspace ||
           kind == StrategyKind::EmbedEngSubspace;
}

bool StrategySpec::uses_embedded_aux() const {
    return kind == StrategyKind::DirectEmbedMeasure || kind == StrategyKind::EmbedEng ||
           kind == StrategyKind::EmbedEngSubspace;
}

int StrategySpec::aux_dimension(int local_dim) const {
    long span = static_cast<long>(n) * (local_dim - 1) + 1;
    switch (kind) {
        case StrategyKind::Rank2Full:
        case StrategyKind::WernerFull:
            return static_cast<int>(span);
        case StrategyKind::Rank2Subspace:
        case StrategyKind::WernerSubspace:
            return 1 << ceil_log2(span);
        case StrategyKind::DirectEmbedMeasure:
        case StrategyKind::EmbedEng:
        case StrategyKind::EmbedEngSubspace:
            return 1 << m_embed;
        case StrategyKind::SingleCopyBaseline:
            return 0;
    }
    return 0;
}

void StrategySpec::validate(int local_dim) const {
    if (local_dim < 2) {
        throw DomainError("local dimension must be >= 2");
    }
    if (kind == StrategyKind::DirectEmbedMeasure) {
        if (n != 0) {
            throw DomainError("direct-embed measures the embedded register only (n must be 0)");
        }
    } else if (n < 0 || (n == 0 && !uses_embedded_aux())) {
        throw DomainError("ensemble size must be >= 1");
    }
    if (uses_embedded_aux()) {
        if (local_dim != 2) {
            throw DomainError("embedding is defined for qubit ensembles");
        }
        if (m_embed < 1 || m_embed > 24) {
            throw DomainError("m_embed must lie in [1, 24]");
        }
        if ((1L << m_embed) < static_cast<long>(n) + 1) {
            throw DomainError("embedded strategies require 2^m_embed >= n + 1");
        }
    }
    if (uses_subspace_readout()) {
        int d = aux_dimension(local_dim);
        int digits = ceil_log2(d);
        if (m < 1 || m > digits) {
            throw DomainError("subspace rounds must lie in [1, log2(d)] with d = " + std::to_string(d));
        }
    }
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Rank2Full:
            return "rank2-full";
        case StrategyKind::Rank2Subspace:
            return "rank2-subspace";
        case StrategyKind::WernerFull:
            return "werner-full";
        case StrategyKind::WernerSubspace:
            return "werner-subspace";
        case StrategyKind::DirectEmbedMeasure:
            return "direct-embed";
        case StrategyKind::EmbedEng:
            return "embed-eng";
        case StrategyKind::EmbedEngSubspace:
            return "embed-eng-subspace";
        case StrategyKind::SingleCopyBaseline:
            return "single-copy";
    }
    return "?";
}

StrategyKind parse_strategy_kind(std::string_view name) {
    for (auto k :
         {StrategyKind::Rank2Full,
          StrategyKind::Rank2Subspace,
          StrategyKind::WernerFull,
          StrategyKind::WernerSubspace,
          StrategyKind::DirectEmbedMeasure,
          StrategyKind::EmbedEng,
          StrategyKind::EmbedEngSubspace,
          StrategyKind::SingleCopyBaseline}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw DomainError("unknown strategy: " + std::string(name));
}

std::string StrategySpec::name() const {
    return to_string(kind);
}

}  // namespace enverify
