#pragma once

#include <filesystem>

#ifndef PLP_TEST_DATA_DIR
#error "PLP_TEST_DATA_DIR must point at the data/ directory"
#endif

namespace plp::testing {

inline std::filesystem::path data_dir()
{
  return PLP_TEST_DATA_DIR;
}

inline std::filesystem::path crow_fixture()
{
  return data_dir() / "crow_1974.txt";
}

//! FNV-1a 64 of the fixture bytes; any edit to the file changes it.
inline constexpr unsigned long long crow_fixture_fnv1a = 0x914e4fdf2a61ef28ULL;

} // namespace plp::testing
