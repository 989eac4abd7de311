#include "enverify/ghz.h"

#include <gtest/gtest.h>

#include <cmath>

#include "enverify/dense_sim.h"
#include "enverify/errors.h"
#include "enverify/oracle.h"

using namespace enverify;

namespace {

GhzDiagonalState sample_noise() {
    return GhzDiagonalState(3, rat("0.7"), rat("0.04"), {rat("0.1"), rat("0.02"), rat("0.01")});
}

GhzDiagonalState phase_only(int parties) {
    return GhzDiagonalState(parties, 0, 1, std::vector<Rational>((size_t{1} << (parties - 1)) - 1, Rational(0)));
}

}  // namespace

TEST(ghz, label_validation) {
    ASSERT_NO_THROW(GhzLabel(3, 1, {0, 1}));
    ASSERT_THROW(GhzLabel(3, 2, {0, 1}), DomainError);
    ASSERT_THROW(GhzLabel(3, 0, {0}), DomainError);
    ASSERT_THROW(GhzLabel(1, 0, {}), DomainError);
    ASSERT_EQ(unpack_bits(5, 4), (std::vector<int>{1, 0, 1}));
}

TEST(ghz, diagonal_state_invariant) {
    ASSERT_NO_THROW(sample_noise());
    ASSERT_THROW(GhzDiagonalState(3, rat("0.7"), rat("0.04"), {rat("0.1"), rat("0.02"), rat("0.02")}), DomainError);
    ASSERT_THROW(GhzDiagonalState(3, rat("1.1"), rat("-0.1"), {0, 0, 0}), DomainError);
    ASSERT_THROW(GhzDiagonalState(3, 1, 0, {0, 0}), DomainError);
    auto w = GhzDiagonalState::white_noise(3, rat("0.65"));
    ASSERT_EQ(w.lambda0, Rational(1, 20));
    ASSERT_EQ(w.lambda_k(2), Rational(1, 20));
    Rational total = 0;
    for (const auto &[e, p] : w.label_distribution()) {
        total += p;
    }
    ASSERT_EQ(total, 1);
    ASSERT_EQ(GhzDiagonalState::pure(4).label_distribution().size(), 1u);
}

TEST(ghz, mcx_examples) {
    const int c1[] = {0, 1, 1};
    ASSERT_EQ(mcx_update(c1, {0, 0}, 4), (std::vector<int>{1, 1}));
    const int c2[] = {1, 0, 0};
    ASSERT_EQ(mcx_update(c2, {0, 0}, 4), (std::vector<int>{3, 3}));
    const int c3[] = {1, 1, 1};
    ASSERT_EQ(mcx_update(c3, {2, 1}, 4), (std::vector<int>{2, 1}));
    const int bad[] = {0, 2, 1};
    ASSERT_THROW(mcx_update(bad, {0, 0}, 4), DomainError);
}

TEST(ghz, mcx_matches_error_shift_exhaustively) {
    for (int m = 2; m <= 5; m++) {
        const unsigned count = 1u << (m - 1);
        for (int d : {2, 3, 4}) {
            for (unsigned k = 0; k < count; k++) {
                auto bits = unpack_bits(k, m);
                std::vector<int> low = {0};
                std::vector<int> high = {1};
                for (int b : bits) {
                    low.push_back(b);
                    high.push_back(1 - b);
                }
                std::vector<int> zero(static_cast<size_t>(m - 1), 0);
                auto from_low = mcx_update(low, zero, d);
                auto from_high = mcx_update(high, zero, d);
                auto expect_low = ghz_error_shift({GhzErrorKind::AmpLow, k}, m);
                auto expect_high = ghz_error_shift({GhzErrorKind::AmpHigh, k}, m);
                for (size_t p = 0; p < zero.size(); p++) {
                    ASSERT_EQ(from_low[p], ((expect_low[p] % d) + d) % d);
                    ASSERT_EQ(from_high[p], ((expect_high[p] % d) + d) % d);
                }
            }
        }
    }
}

TEST(ghz, depolarize_recovers_diagonal_form) {
    auto noise = sample_noise();
    auto back = ghz_depolarize(ghz_noise_state(noise, "P"));
    ASSERT_NEAR(to_double(back.fidelity), 0.7, 1e-12);
    ASSERT_NEAR(to_double(back.lambda0), 0.04, 1e-12);
    for (unsigned k = 1; k <= 3; k++) {
        ASSERT_NEAR(to_double(back.lambda_k(k)), to_double(noise.lambda_k(k)), 1e-12);
    }

    // |Psi_0,1> alone spreads evenly over the two labels sharing k = 1.
    std::vector<int> amp = {1, 0};
    auto single = ghz_depolarize(MixedState(make_ghz(3, 2, 0, amp)));
    ASSERT_EQ(single.fidelity, 0);
    ASSERT_NEAR(to_double(single.lambda_k(1)), 0.5, 1e-12);

    // A product state |000> has weight 1/2 on each of |Psi_0,0>, |Psi_1,0>.
    int zeros[] = {0, 0, 0};
    auto product = ghz_depolarize(MixedState(StateVector::basis({{"P1", 2}, {"P2", 2}, {"P3", 2}}, zeros)));
    ASSERT_NEAR(to_double(product.fidelity), 0.5, 1e-12);
    ASSERT_NEAR(to_double(product.lambda0), 0.5, 1e-12);
}

TEST(ghz, phase_error_needs_second_round) {
    std::vector<GhzDiagonalState> copies(4, GhzDiagonalState::pure(3));
    copies[2] = phase_only(3);
    ASSERT_TRUE(ghz_verify(copies, GhzRounds::AmplitudeOnly, 1).accepted());
    auto out = ghz_verify(copies, GhzRounds::AmplitudeThenPhase, 1);
    ASSERT_FALSE(out.accepted());
    ASSERT_EQ(out.copies_consumed, 3 + 1);

    copies[1] = phase_only(3);
    ASSERT_TRUE(ghz_verify(copies, GhzRounds::AmplitudeThenPhase, 1).accepted());
}

TEST(ghz, completeness) {
    for (int m = 2; m <= 5; m++) {
        for (int n = 1; n <= 9; n++) {
            auto pure = GhzDiagonalState::pure(m);
            ASSERT_EQ(ghz_failure_probability<Rational>(pure, n, GhzRounds::AmplitudeThenPhase), 1);
            std::vector<GhzDiagonalState> copies(static_cast<size_t>(n), pure);
            ASSERT_TRUE(ghz_verify(copies, GhzRounds::AmplitudeThenPhase, 7).accepted());
        }
    }
}

TEST(ghz, aux_dimension_and_accounting) {
    ASSERT_EQ(ghz_aux_dimension(1), 2);
    ASSERT_EQ(ghz_aux_dimension(3), 4);
    ASSERT_EQ(ghz_aux_dimension(4), 8);
    ASSERT_EQ(ghz_aux_dimension(7), 8);
    ASSERT_EQ(ghz_aux_dimension(8), 16);
    ASSERT_THROW(ghz_aux_dimension(0), DomainError);
    std::vector<GhzDiagonalState> copies(5, GhzDiagonalState::pure(3));
    ASSERT_EQ(ghz_verify(copies, GhzRounds::AmplitudeOnly, 3).copies_consumed, 3);
}

TEST(ghz, dp_matches_enumeration) {
    auto noise = sample_noise();
    for (int n = 1; n <= 6; n++) {
        ASSERT_EQ(ghz_failure_probability<Rational>(noise, n, GhzRounds::AmplitudeOnly),
                  enumerate_ghz_amplitude_acceptance(noise, n))
            << "n=" << n;
    }
    ASSERT_EQ(ghz_failure_probability<Rational>(noise, 4, GhzRounds::AmplitudeOnly), Rational(18514787, 50000000));
    auto white = GhzDiagonalState::white_noise(4, rat("0.8"));
    for (int n = 1; n <= 4; n++) {
        ASSERT_EQ(ghz_failure_probability<Rational>(white, n, GhzRounds::AmplitudeOnly),
                  enumerate_ghz_amplitude_acceptance(white, n));
    }
}

TEST(ghz, float_dp_tracks_exact) {
    auto noise = sample_noise();
    for (int n : {1, 5, 12}) {
        for (auto rounds : {GhzRounds::AmplitudeOnly, GhzRounds::AmplitudeThenPhase}) {
            ASSERT_NEAR(ghz_failure_probability<double>(noise, n, rounds),
                        to_double(ghz_failure_probability<Rational>(noise, n, rounds)), 1e-12);
        }
    }
}

TEST(ghz, phase_round_closed_form) {
    // Only target and phase labels: acceptance is the even-parity mass.
    GhzDiagonalState noise(3, rat("0.9"), rat("0.1"), {0, 0, 0});
    for (int n = 1; n <= 6; n++) {
        Rational even = (1 + ipow(rat("0.8"), static_cast<unsigned>(n))) / 2;
        ASSERT_EQ(ghz_failure_probability<Rational>(noise, n, GhzRounds::AmplitudeThenPhase), even);
        ASSERT_EQ(ghz_failure_probability<Rational>(noise, n, GhzRounds::AmplitudeOnly), 1);
    }
}

TEST(ghz, second_round_never_helps_a_cheater) {
    auto noise = sample_noise();
    for (int n = 1; n <= 8; n++) {
        ASSERT_LE(ghz_failure_probability<Rational>(noise, n, GhzRounds::AmplitudeThenPhase),
                  ghz_failure_probability<Rational>(noise, n, GhzRounds::AmplitudeOnly));
    }
}

TEST(ghz, acceptance_decreases_with_copies) {
    auto noise = sample_noise();
    for (auto rounds : {GhzRounds::AmplitudeOnly, GhzRounds::AmplitudeThenPhase}) {
        Rational prev = 1;
        for (int n = 1; n <= 10; n++) {
            Rational cur = ghz_failure_probability<Rational>(noise, n, rounds);
            ASSERT_LE(cur, prev) << "n=" << n;
            prev = cur;
        }
    }
}

TEST(ghz, monte_carlo_agrees_with_dp) {
    auto noise = sample_noise();
    for (auto rounds : {GhzRounds::AmplitudeOnly, GhzRounds::AmplitudeThenPhase}) {
        const double exact = ghz_failure_probability<double>(noise, 5, rounds);
        auto est = ghz_monte_carlo(noise, 5, rounds, 1 << 17, 42, 2);
        ASSERT_LT(std::abs(est.estimate - exact), 5 * est.std_error + 1e-9);
        auto again = ghz_monte_carlo(noise, 5, rounds, 1 << 17, 42, 5);
        ASSERT_EQ(est.accepted, again.accepted);
    }
}

TEST(ghz, dense_amplitude_round_matches_oracle) {
    auto noise = sample_noise();
    for (int n = 1; n <= 3; n++) {
        const int d = ghz_aux_dimension(n);
        std::vector<GhzDiagonalState> copies(static_cast<size_t>(n), noise);
        auto dense = dense_ghz_amplitude_distribution(copies, d);
        auto exact = enumerate_ghz_amplitude_distribution(noise, n, d);
        ASSERT_EQ(dense.size(), exact.size());
        for (size_t j = 0; j < dense.size(); j++) {
            ASSERT_NEAR(dense[j], to_double(exact[j]), 1e-10) << "n=" << n << " j=" << j;
        }
    }
}

TEST(ghz, dense_phase_round_matches_parity_model) {
    auto noise = sample_noise();
    // Per copy the phase bit is 1 with probability lambda0 + sum lambda_k.
    const double p = 0.04 + 0.1 + 0.02 + 0.01;
    for (int n = 1; n <= 3; n++) {
        std::vector<GhzDiagonalState> copies(static_cast<size_t>(n), noise);
        const double odd = (1 - std::pow(1 - 2 * p, n)) / 2;
        ASSERT_NEAR(dense_ghz_phase_flip_probability(copies), odd, 1e-10);
    }
    std::vector<GhzDiagonalState> one = {phase_only(3)};
    ASSERT_NEAR(dense_ghz_phase_flip_probability(one), 1.0, 1e-12);
}
