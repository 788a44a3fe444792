#pragma once

#include <cstddef>

#include "plp/process.hpp"
#include "plp/random.hpp"

namespace plp {

//! Draws the first n failure times of a PLP by inverting the conditional
//! CDF of each gap:
//!   t_i = theta * [(t_{i-1}/theta)^beta - ln(1 - u_i)]^(1/beta),  t_0 = 0.
//! Deterministic given the stream state.
FailureTimes simulate_failure_times(const PlpParams& params, std::size_t n, RandomStream& rng);

} // namespace plp
