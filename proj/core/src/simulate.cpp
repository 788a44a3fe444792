#include "plp/simulate.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "plp/errors.hpp"

namespace plp {

FailureTimes simulate_failure_times(const PlpParams& params, std::size_t n, RandomStream& rng)
{
  if (n == 0) {
    throw DomainError("simulation needs n >= 1");
  }
  std::vector<double> times;
  times.reserve(n);
  // Work on the cumulative-intensity scale: Lambda_i = Lambda_{i-1} + E_i
  // with E_i = -ln(1 - u_i) standard exponential, t_i = theta Lambda_i^(1/beta).
  double cumulative = 0.0;
  double previous = 0.0;
  const double inv_beta = 1.0 / params.beta;
  for (std::size_t i = 0; i < n; ++i) {
    cumulative += -std::log1p(-rng.uniform());
    double t = params.theta * std::pow(cumulative, inv_beta);
    if (!(t > previous)) {
      // Gap below double resolution; keep the sequence strictly increasing.
      t = std::nextafter(previous, std::numeric_limits<double>::infinity());
    }
    times.push_back(t);
    previous = t;
  }
  return FailureTimes(std::move(times));
}

} // namespace plp
