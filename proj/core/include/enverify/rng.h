#ifndef ENVERIFY_RNG_H
#define ENVERIFY_RNG_H

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace enverify {

/// 64-bit Mersenne Twister with an explicit stream-derivation rule.
///
/// Stream `index` of `seed` is seeded with
/// std::seed_seq{lo32(seed), hi32(seed), lo32(index), hi32(index)}.
/// Both std::seed_seq and std::mt19937_64 are fully specified by the
/// standard, and uniforms are built from raw 64-bit outputs, so every draw
/// is reproducible across platforms.
class Rng {
   public:
    explicit Rng(uint64_t seed) : Rng(seed, 0) {
    }
    static Rng stream(uint64_t seed, uint64_t index) {
        return Rng(seed, index);
    }

    uint64_t next() {
        return engine_();
    }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    bool bernoulli(double p) {
        return uniform() < p;
    }
    /// Uniform integer in [0, bound).
    uint64_t below(uint64_t bound);

   private:
    Rng(uint64_t seed, uint64_t index);
    std::mt19937_64 engine_;
};

/// Inverse-CDF sampler over a fixed set of outcomes.
template <class Outcome>
class DiscreteSampler {
   public:
    DiscreteSampler() = default;
    DiscreteSampler(std::vector<Outcome> outcomes, const std::vector<double> &weights)
        : outcomes_(std::move(outcomes)) {
        double total = 0;
        for (double w : weights) {
            total += w;
            cumulative_.push_back(total);
        }
        for (double &c : cumulative_) {
            c /= total;
        }
        if (!cumulative_.empty()) {
            cumulative_.back() = 1.0;
        }
    }

    const Outcome &sample(Rng &rng) const {
        double u = rng.uniform();
        size_t i = 0;
        while (cumulative_[i] <= u) {
            i++;
        }
        return outcomes_[i];
    }

   private:
    std::vector<Outcome> outcomes_;
    std::vector<double> cumulative_;
};

struct McEstimate {
    double estimate = 0;
    double std_error = 0;
    uint64_t trials = 0;
    uint64_t accepted = 0;

    static McEstimate from_counts(uint64_t accepted, uint64_t trials) {
        McEstimate e;
        e.trials = trials;
        e.accepted = accepted;
        e.estimate = static_cast<double>(accepted) / static_cast<double>(trials);
        e.std_error = std::sqrt(e.estimate * (1 - e.estimate) / static_cast<double>(trials));
        return e;
    }
};

/// Trials are cut into fixed blocks of kMonteCarloBlock; block b always uses
/// Rng::stream(seed, b), so the accept count does not depend on how many
/// workers share the blocks.
inline constexpr uint64_t kMonteCarloBlock = 1u << 14;

/// `make_trial()` is called once per worker and must return a callable
/// `bool(Rng&)` that runs one trial and reports acceptance.
template <class TrialFactory>
McEstimate blocked_monte_carlo(uint64_t trials, uint64_t seed, int workers, TrialFactory make_trial) {
    const uint64_t blocks = (trials + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<uint64_t> accepted(blocks, 0);
    std::atomic<uint64_t> next_block{0};
    auto work = [&] {
        auto trial = make_trial();
        for (uint64_t b = next_block.fetch_add(1); b < blocks; b = next_block.fetch_add(1)) {
            Rng rng = Rng::stream(seed, b);
            uint64_t begin = b * kMonteCarloBlock;
            uint64_t end = std::min(trials, begin + kMonteCarloBlock);
            uint64_t count = 0;
            for (uint64_t t = begin; t < end; t++) {
                count += trial(rng) ? 1 : 0;
            }
            accepted[b] = count;
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    uint64_t total = 0;
    for (uint64_t a : accepted) {
        total += a;
    }
    return McEstimate::from_counts(total, trials);
}

}  // namespace enverify

#endif
