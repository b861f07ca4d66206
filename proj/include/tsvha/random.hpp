#pragma once
// Deterministic random streams for reproducible simulation.
//
// Every (base_seed, run_index, channel) triple yields the same draw sequence
// on every invocation, and distinct triples yield statistically unrelated
// sequences. The normal transform is a non-caching Box-Muller, so each draw
// consumes exactly two engine words regardless of call history.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tsvha::rng {

class Stream {
  public:
    Stream() : engine_(default_seed) {}
    explicit Stream(std::uint64_t seed) : engine_(seed) {}
    explicit Stream(std::seed_seq& seq) : engine_(seq) {}

    std::mt19937_64& engine() { return engine_; }

    std::uint64_t next_word() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw; consumes exactly two engine words.
    double normal01() {
        const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    static constexpr std::uint64_t default_seed = 0x9e3779b97f4a7c15ULL;

  private:
    std::mt19937_64 engine_;
};

/// Stream for (base_seed, run_index, channel). Channel 0 carries environment
/// draws of a run; policy p inside a run uses channel 1 + p.
inline Stream derive(std::uint64_t base_seed, std::uint64_t run_index, std::uint64_t channel = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed),
                      static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(run_index),
                      static_cast<std::uint32_t>(run_index >> 32),
                      static_cast<std::uint32_t>(channel),
                      static_cast<std::uint32_t>(channel >> 32)};
    return Stream(seq);
}

/// Beta(alpha, beta) draw via the two-gamma ratio.
inline double beta_draw(Stream& stream, double alpha, double beta) {
    std::gamma_distribution<double> ga(alpha, 1.0);
    std::gamma_distribution<double> gb(beta, 1.0);
    const double x = ga(stream.engine());
    const double y = gb(stream.engine());
    return x / (x + y);
}

}  // namespace tsvha::rng
