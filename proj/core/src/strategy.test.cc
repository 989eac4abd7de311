#include "enverify/strategy.h"

#include <gtest/gtest.h>

#include "enverify/errors.h"

using namespace enverify;

TEST(strategy, aux_dimensions) {
    ASSERT_EQ(StrategySpec::rank2_full(22).aux_dimension(), 23);
    ASSERT_EQ(StrategySpec::werner_full(2).aux_dimension(), 3);
    ASSERT_EQ(StrategySpec::werner_full(2).aux_dimension(3), 5);
    ASSERT_EQ(StrategySpec::werner_subspace(5, 1).aux_dimension(), 8);
    ASSERT_EQ(StrategySpec::rank2_subspace(7, 3).aux_dimension(), 8);
    ASSERT_EQ(StrategySpec::embed_eng(3, 2).aux_dimension(), 4);
    ASSERT_EQ(StrategySpec::direct_embed_measure(3).aux_dimension(), 8);
    ASSERT_EQ(StrategySpec::single_copy(4).aux_dimension(), 0);
}

TEST(strategy, validation) {
    ASSERT_NO_THROW(StrategySpec::werner_subspace(7, 3).validate());
    ASSERT_THROW(StrategySpec::werner_subspace(7, 4).validate(), DomainError);
    ASSERT_THROW(StrategySpec::werner_subspace(7, 0).validate(), DomainError);
    ASSERT_THROW(StrategySpec::embed_eng(4, 2).validate(), DomainError);
    ASSERT_NO_THROW(StrategySpec::embed_eng(3, 2).validate());
    ASSERT_THROW(StrategySpec::werner_full(0).validate(), DomainError);
    ASSERT_THROW(StrategySpec::embed_eng(1, 1).validate(3), DomainError);
    ASSERT_NO_THROW(StrategySpec::embed_eng_subspace(3, 2, 2).validate());
    ASSERT_THROW(StrategySpec::embed_eng_subspace(3, 2, 3).validate(), DomainError);
}

TEST(strategy, names_round_trip) {
    for (auto kind : {StrategyKind::Rank2Full, StrategyKind::Rank2Subspace, StrategyKind::WernerFull,
                      StrategyKind::WernerSubspace, StrategyKind::DirectEmbedMeasure, StrategyKind::EmbedEng,
                      StrategyKind::EmbedEngSubspace, StrategyKind::SingleCopyBaseline}) {
        ASSERT_EQ(parse_strategy_kind(to_string(kind)), kind);
    }
    ASSERT_EQ(to_string(StrategyKind::WernerSubspace), "werner-subspace");
    ASSERT_THROW(parse_strategy_kind("bogus"), DomainError);
}

TEST(strategy, log2_helpers) {
    ASSERT_EQ(ceil_log2(1), 0);
    ASSERT_EQ(ceil_log2(2), 1);
    ASSERT_EQ(ceil_log2(23), 5);
    ASSERT_EQ(ceil_log2(1024), 10);
    ASSERT_EQ(ceil_log2(1025), 11);
    ASSERT_THROW(ceil_log2(0), DomainError);
    ASSERT_TRUE(is_power_of_two(8));
    ASSERT_FALSE(is_power_of_two(12));
    ASSERT_FALSE(is_power_of_two(0));
}
