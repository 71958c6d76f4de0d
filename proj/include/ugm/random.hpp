#pragma once

#include <array>
#include <cstdint>

namespace ugm {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, stream_id); within a stream, outputs are
/// addressed by a block counter, so any draw can be replayed from its
/// coordinates without replaying the prefix.
class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block counter, Key key);

  Philox(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  // Uniform in the open interval (0, 1).
  double next_uniform();
  double next_gaussian();
  // Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound);

 private:
  void refill();

  Key key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ugm
