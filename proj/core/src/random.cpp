#include "plp/random.hpp"

namespace plp {

std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed)
  : engine_(mix64(seed))
{}

RandomStream RandomStream::for_replicate(std::uint64_t master, std::uint64_t cell, std::uint64_t index)
{
  return RandomStream(mix64(mix64(master) ^ mix64(cell + 0x632be59bd9b4e019ULL)) ^ mix64(~index));
}

double RandomStream::uniform()
{
  // 53 random bits centred in their bucket: (k + 0.5) / 2^53 is in (0, 1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

} // namespace plp
