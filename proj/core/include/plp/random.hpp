#pragma once

#include <cstdint>
#include <random>

namespace plp {

//! Seeded uniform source. Each simulation owns its stream; streams are
//! derived from a master seed plus stream coordinates so that results do not
//! depend on which thread ran which replicate.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed);

  //! Stream for replicate `index` of campaign cell `cell` under `master`.
  static RandomStream for_replicate(std::uint64_t master, std::uint64_t cell, std::uint64_t index);

  //! Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();

  std::uint64_t next_u64() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

//! splitmix64 finaliser, used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

} // namespace plp
