#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace wshift {

// Counter-based seed derivation.  Each experiment cell / trial derives an
// independent stream from (master_seed, i, j, t) so that results are
// bit-identical regardless of execution order or thread count.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

// Small, fast, fully deterministic random stream (xoshiro256++ state
// initialized by SplitMix64).  All variate generation is implemented here so
// results do not depend on the standard library's distribution algorithms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns an exact endpoint.
  double uniform();

  // Standard normal via Box-Muller (second variate cached).
  double normal();

  // Uniform integer in [0, m); unbiased via rejection.
  int uniform_int(int m);

 private:
  std::array<std::uint64_t, 4> s_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace wshift
