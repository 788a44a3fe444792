#pragma once

#include <cstdint>

#include "plp/process.hpp"

namespace plp::datasets {

//! The 40 failure times of a system under development published by Crow
//! (1974), the benchmark used throughout the real-data examples.
FailureTimes crow_1974();

//! Fingerprint of the sequence: FNV-1a over the IEEE bit patterns.
std::uint64_t dataset_hash(const FailureTimes& data);

} // namespace plp::datasets
