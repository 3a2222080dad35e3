#ifndef IXRL_RNG_HPP
#define IXRL_RNG_HPP

#include <array>
#include <cstdint>
#include <string>

namespace ixrl {

// Identifies one random stream: every (master_seed, stream_label, run_index)
// triple maps to a fixed child seed, so paired experiments can share the
// environment stream while keeping agent/teacher streams independent.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::string stream_label;
  std::uint64_t run_index = 0;
};

// Collision-resistant mix of all three SeedSpec fields.
//
// Construction (fixed for output stability): FNV-1a over the label bytes,
// then three rounds of the splitmix64 finalizer folding in master_seed,
// label hash and run_index. Pure function of its inputs.
std::uint64_t derive_seed(const SeedSpec& spec);

// splitmix64 finalizer (Steele/Lea/Flood constants); used for seed mixing
// and for expanding a 64-bit seed into xoshiro256++ state.
std::uint64_t mix64(std::uint64_t z);

// Deterministic random stream, bit-reproducible across platforms.
//
// Engine: xoshiro256++ (Blackman/Vigna), state seeded from one 64-bit seed
// via splitmix64. All distributions are implemented here rather than with
// <random> adapters, whose outputs are not pinned by the standard:
//   uniform()      -- 53-bit uniform in [0,1), one engine draw
//   normal()       -- Box-Muller (cosine branch), exactly two engine draws
//   uniform_int(n) -- floor(uniform()*n), one engine draw
// Each stream is owned by exactly one consumer at a time.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();
  double normal();
  int uniform_int(int n);

  // Number of raw engine draws consumed so far. Lets tests assert that the
  // environment stream advances identically no matter which algorithm runs.
  std::uint64_t draw_count() const { return draws_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t draws_ = 0;
};

}  // namespace ixrl

#endif  // IXRL_RNG_HPP
