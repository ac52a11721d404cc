#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ermdp {

/// splitmix64 finalizer. Used wherever a fixed 64-bit mixing function is
/// needed (stream derivation, per-trial seeds).
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream.
///
/// The generator contract, fixed so that independent implementations can
/// reproduce draws bit for bit:
///   - engine: std::mt19937_64 (its output sequence is fully specified by the
///     C++ standard), seeded with mix64(mix64(seed) ^ stream_index);
///   - uniform doubles take the top 53 bits of one engine output:
///     (x >> 11) * 2^-53, giving values in [0, 1);
///   - categorical draws use inverse CDF over the cumulative row with a
///     single uniform draw per sample.
///
/// Identical (seed, stream_index) pairs yield identical sequences across runs
/// and platforms. Instances are single-owner; use distinct stream indices for
/// parallel work.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream_index = 0)
        : seed_(seed), stream_(stream_index), engine_(mix64(mix64(seed) ^ stream_index)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform integer in [0, n).
    int next_index(int n) { return static_cast<int>(next_unit() * n); }

    /// Inverse-CDF draw over `probs`: returns the smallest index i with
    /// u < probs[0] + ... + probs[i]. If u lands past the cumulative total
    /// (possible when the row sum rounds slightly below 1), the last index
    /// with positive probability is returned.
    int sample_categorical(std::span<const double> probs) {
        const double u = next_unit();
        double cumulative = 0.0;
        int last_positive = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            cumulative += probs[i];
            last_positive = static_cast<int>(i);
            if (u < cumulative) return static_cast<int>(i);
        }
        return last_positive;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace ermdp
