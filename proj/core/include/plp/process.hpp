#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace plp {

//! Shape/scale pair of the power law intensity (beta/theta)(t/theta)^(beta-1).
struct PlpParams
{
  double beta;
  double theta;

  //! Throws DomainError unless both values are finite and positive.
  PlpParams(double beta, double theta);
};

//! Failure epochs of one system observed until the n-th failure
//! (failure truncation, stopping time w = t_n).
//!
//! Times are strictly increasing and positive; simultaneous failures are
//! rejected rather than jittered.
class FailureTimes
{
public:
  //! Validates and takes ownership; throws DomainError on an empty,
  //! non-positive, non-finite, or non-increasing sequence.
  explicit FailureTimes(std::vector<double> times);

  std::size_t size() const noexcept { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  double first() const noexcept { return times_.front(); }
  double last() const noexcept { return times_.back(); }
  double stopping_time() const noexcept { return times_.back(); }
  std::span<const double> values() const noexcept { return times_; }

  //! The first k failures, as if observation had stopped at t_k.
  FailureTimes truncated(std::size_t k) const;
  //! Every time multiplied by c > 0.
  FailureTimes scaled(double c) const;

private:
  std::vector<double> times_;
};

//! Sufficient statistics of the failure-truncated likelihood:
//! n, ln t_n and sum ln t_i. Every log-likelihood evaluation in the library
//! goes through this type so that different call paths agree bit-for-bit.
class LikelihoodStats
{
public:
  explicit LikelihoodStats(const FailureTimes& data);

  //! -(t_n/theta)^beta + n ln(beta/theta) + (beta-1) sum ln(t_i/theta)
  double log_likelihood(double beta, double theta) const;

  std::size_t n() const noexcept { return n_; }
  double log_last() const noexcept { return log_last_; }
  double sum_log() const noexcept { return sum_log_; }

private:
  std::size_t n_;
  double log_last_;
  double sum_log_;
};

double intensity(const PlpParams& params, double t);
double cumulative_intensity(const PlpParams& params, double t);

//! P(N(t) = n) for the Poisson count with mean (t/theta)^beta.
double count_pmf(const PlpParams& params, unsigned n, double t);

//! exp{-[Lambda(t) - Lambda(t_prev)]}; requires t >= t_prev >= 0.
double conditional_reliability(const PlpParams& params, double t_prev, double t);

//! Log of the joint density of the first n failure times. Evaluated in log
//! space only; the product form overflows for realistic n.
double log_likelihood(const FailureTimes& data, const PlpParams& params);

//! n / sum ln(t_n / t_i). Throws EstimationError for n < 2.
double mle_beta(const FailureTimes& data);

//! t_n / n^(1/beta_hat).
double mle_theta(const FailureTimes& data, double beta_hat);

//! [mle_beta(first k times) for k = n_min..n].
std::vector<double> mle_beta_trajectory(const FailureTimes& data, std::size_t n_min);

namespace detail {
double scale_from_shape(double last_time, std::size_t n, double beta);
}

} // namespace plp
