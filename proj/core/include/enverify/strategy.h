#ifndef ENVERIFY_STRATEGY_H
#define ENVERIFY_STRATEGY_H

#include <cstdint>
#include <string>
#include <string_view>

namespace enverify {

enum class StrategyKind : uint8_t {
    Rank2Full,
    Rank2Subspace,
    WernerFull,
    WernerSubspace,
    DirectEmbedMeasure,
    EmbedEng,
    EmbedEngSubspace,
    SingleCopyBaseline,
};

/// Which protocol variant runs on an ensemble of `n` copies.
///
/// `m` is the number of qubit-pair parity rounds for subspace variants and
/// `m_embed` the number of ensemble copies embedded into the auxiliary
/// register (d = 2^m_embed) for the embedded variants.
struct StrategySpec {
    StrategyKind kind = StrategyKind::Rank2Full;
    int n = 1;
    int m = 0;
    int m_embed = 0;

    static StrategySpec rank2_full(int n);
    static StrategySpec rank2_subspace(int n, int m);
    static StrategySpec werner_full(int n);
    static StrategySpec werner_subspace(int n, int m);
    static StrategySpec direct_embed_measure(int m_embed);
    static StrategySpec embed_eng(int n, int m_embed);
    static StrategySpec embed_eng_subspace(int n, int m_embed, int m);
    static StrategySpec single_copy(int n);

    /// Dimension of the auxiliary pair for ensembles with local dimension
    /// `local_dim`. 0 for the single-copy baseline.
    int aux_dimension(int local_dim = 2) const;
    bool uses_subspace_readout() const;
    bool uses_embedded_aux() const;
    /// Throws DomainError when the combination is not runnable.
    void validate(int local_dim = 2) const;

    std::string name() const;
    bool operator==(const StrategySpec &) const = default;
};

/// Kebab-case names as used on the command line: rank2-full, rank2-subspace,
/// werner-full, werner-subspace, direct-embed, embed-eng, embed-eng-subspace,
/// single-copy.
StrategyKind parse_strategy_kind(std::string_view name);
std::string to_string(StrategyKind kind);

/// Smallest k with 2^k >= x (x >= 1).
int ceil_log2(long x);
bool is_power_of_two(long x);

}  // namespace enverify

#endif
