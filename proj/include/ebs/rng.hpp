#pragma once

#include <cmath>
#include <cstdint>

namespace ebs {

// Counter-based Gaussian streams built on the splitmix64 finalizer. Every
// draw is a pure function of (master_seed, run_index, arm, draw_index), so
// the s-th reward of an arm is identical across strategies and across any
// execution order, which is what makes paired comparisons and parallel runs
// reproducible.
namespace rng {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// n-th output of the splitmix64 stream seeded with `seed`.
inline std::uint64_t stream_nth(std::uint64_t seed, std::uint64_t n) {
    return finalize(seed + (n + 1) * kGolden);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return stream_nth(seed, index);
}

// Uniform in (0, 1]; the shift keeps full double precision in the mantissa.
inline double to_unit_open(std::uint64_t v) {
    return (double(v >> 11) + 1.0) * 0x1.0p-53;
}

// Uniform in [0, 1).
inline double to_unit(std::uint64_t v) {
    return double(v >> 11) * 0x1.0p-53;
}

// Standard normal draw s of the stream `seed` (Box-Muller, two uniforms).
inline double standard_normal(std::uint64_t seed, std::uint64_t s) {
    const double u1 = to_unit_open(stream_nth(seed, 2 * s));
    const double u2 = to_unit(stream_nth(seed, 2 * s + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace rng

// Pre-committed unit-variance reward streams for one run of one instance.
class RewardStreams {
  public:
    RewardStreams(std::uint64_t master_seed, std::uint64_t run_index)
        : run_seed_(rng::substream_seed(master_seed, run_index)) {}

    // s-th draw of arm a (s counts from 0), centered at `mean`.
    double draw(int arm, long s, double mean) const {
        const std::uint64_t arm_seed =
            rng::substream_seed(run_seed_, static_cast<std::uint64_t>(arm));
        return mean + rng::standard_normal(arm_seed, static_cast<std::uint64_t>(s));
    }

  private:
    std::uint64_t run_seed_;
};

}  // namespace ebs
