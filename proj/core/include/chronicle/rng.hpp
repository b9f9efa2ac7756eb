#ifndef CHRONICLE_RNG_HPP
#define CHRONICLE_RNG_HPP

#include <cstdint>
#include <random>
#include <span>

#include "chronicle/errors.hpp"

namespace chronicle {

// Explicit random stream. Draws are bit-reproducible for a given seed:
// uniform doubles are built from the raw engine output rather than
// std::uniform_real_distribution, whose mapping is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Index drawn from an (unnormalized is tolerated within rounding) finite
    // distribution. The final positive-mass index absorbs rounding residue.
    int categorical(std::span<const double> weights) {
        double u = uniform();
        double acc = 0.0;
        int last_positive = -1;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            last_positive = static_cast<int>(i);
            acc += weights[i];
            if (u < acc) return static_cast<int>(i);
        }
        if (last_positive < 0)
            throw InternalError("categorical draw from all-zero weights");
        return last_positive;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

// SplitMix64 step; used to derive independent per-episode seeds from a
// master seed and an episode counter.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace chronicle

#endif
