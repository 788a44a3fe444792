#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>

namespace plp {

//! 64-bit FNV-1a. Used for dataset fingerprints and config hashes; not a
//! cryptographic digest.
class Fnv1a
{
public:
  Fnv1a& bytes(const void* data, std::size_t size) noexcept
  {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= p[i];
      state_ *= prime;
    }
    return *this;
  }

  Fnv1a& text(std::string_view s) noexcept
  {
    bytes(s.data(), s.size());
    return u64(s.size());
  }

  Fnv1a& u64(std::uint64_t v) noexcept
  {
    for (int i = 0; i < 8; ++i) {
      const unsigned char b = static_cast<unsigned char>(v >> (8 * i));
      bytes(&b, 1);
    }
    return *this;
  }

  //! Hashes the IEEE bit pattern, so 0.0 and -0.0 differ.
  Fnv1a& real(double v) noexcept { return u64(std::bit_cast<std::uint64_t>(v)); }

  Fnv1a& reals(std::span<const double> v) noexcept
  {
    u64(v.size());
    for (double x : v) {
      real(x);
    }
    return *this;
  }

  std::uint64_t value() const noexcept { return state_; }

private:
  static constexpr std::uint64_t offset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t prime = 0x100000001b3ULL;
  std::uint64_t state_ = offset;
};

inline std::uint64_t fnv1a(std::string_view s) noexcept
{
  Fnv1a h;
  h.bytes(s.data(), s.size());
  return h.value();
}

} // namespace plp
