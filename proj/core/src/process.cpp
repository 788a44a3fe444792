#include "plp/process.hpp"

#include <cmath>
#include <string>

#include "plp/errors.hpp"

namespace plp {

namespace {

void require_positive_time(double t, const char* what)
{
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(what) + " must be a positive finite time");
  }
}

} // namespace

PlpParams::PlpParams(double beta_, double theta_)
  : beta(beta_)
  , theta(theta_)
{
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("PLP shape beta must be positive and finite");
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("PLP scale theta must be positive and finite");
  }
}

FailureTimes::FailureTimes(std::vector<double> times)
  : times_(std::move(times))
{
  if (times_.empty()) {
    throw DomainError("failure times must not be empty");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double t = times_[i];
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw DomainError("failure time #" + std::to_string(i + 1) +
                        " is not a positive finite number");
    }
    if (i > 0 && !(t > times_[i - 1])) {
      throw DomainError("failure times must be strictly increasing (entry #" +
                        std::to_string(i + 1) + ")");
    }
  }
}

FailureTimes FailureTimes::truncated(std::size_t k) const
{
  if (k == 0 || k > times_.size()) {
    throw DomainError("truncation length must be in 1..n");
  }
  return FailureTimes(std::vector<double>(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(k)));
}

FailureTimes FailureTimes::scaled(double c) const
{
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("scale factor must be positive and finite");
  }
  std::vector<double> out(times_);
  for (auto& t : out) {
    t *= c;
  }
  return FailureTimes(std::move(out));
}

LikelihoodStats::LikelihoodStats(const FailureTimes& data)
  : n_(data.size())
  , log_last_(std::log(data.last()))
  , sum_log_(0.0)
{
  for (double t : data.values()) {
    sum_log_ += std::log(t);
  }
}

double LikelihoodStats::log_likelihood(double beta, double theta) const
{
  const double n = static_cast<double>(n_);
  const double log_theta = std::log(theta);
  const double log_ratio_last = log_last_ - log_theta;
  return -std::exp(beta * log_ratio_last) + n * (std::log(beta) - log_theta) +
         (beta - 1.0) * (sum_log_ - n * log_theta);
}

double intensity(const PlpParams& params, double t)
{
  require_positive_time(t, "intensity argument");
  return (params.beta / params.theta) * std::pow(t / params.theta, params.beta - 1.0);
}

double cumulative_intensity(const PlpParams& params, double t)
{
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("cumulative intensity needs a non-negative finite time");
  }
  if (t == 0.0) {
    return 0.0;
  }
  return std::pow(t / params.theta, params.beta);
}

double count_pmf(const PlpParams& params, unsigned n, double t)
{
  require_positive_time(t, "count horizon");
  const double lambda = cumulative_intensity(params, t);
  if (n == 0) {
    return std::exp(-lambda);
  }
  const double k = static_cast<double>(n);
  return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

double conditional_reliability(const PlpParams& params, double t_prev, double t)
{
  if (!(t_prev >= 0.0) || !std::isfinite(t_prev) || !std::isfinite(t)) {
    throw DomainError("reliability interval needs finite times with t_prev >= 0");
  }
  if (t < t_prev) {
    throw DomainError("reliability interval needs t >= t_prev");
  }
  return std::exp(-(cumulative_intensity(params, t) - cumulative_intensity(params, t_prev)));
}

double log_likelihood(const FailureTimes& data, const PlpParams& params)
{
  return LikelihoodStats(data).log_likelihood(params.beta, params.theta);
}

double mle_beta(const FailureTimes& data)
{
  const std::size_t n = data.size();
  if (n < 2) {
    throw EstimationError("MLE of beta needs at least two failure times");
  }
  const double last = data.last();
  double denom = 0.0;
  for (double t : data.values()) {
    denom += std::log(last / t);
  }
  if (!(denom > 0.0)) {
    throw EstimationError("MLE of beta undefined: sum of log ratios is zero");
  }
  return static_cast<double>(n) / denom;
}

namespace detail {

double scale_from_shape(double last_time, std::size_t n, double beta)
{
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("shape estimate must be positive and finite");
  }
  return last_time / std::pow(static_cast<double>(n), 1.0 / beta);
}

} // namespace detail

double mle_theta(const FailureTimes& data, double beta_hat)
{
  return detail::scale_from_shape(data.last(), data.size(), beta_hat);
}

std::vector<double> mle_beta_trajectory(const FailureTimes& data, std::size_t n_min)
{
  if (n_min < 2) {
    throw DomainError("trajectory needs n_min >= 2");
  }
  if (n_min > data.size()) {
    throw DomainError("trajectory needs n_min <= n");
  }
  std::vector<double> out;
  out.reserve(data.size() - n_min + 1);
  for (std::size_t k = n_min; k <= data.size(); ++k) {
    out.push_back(mle_beta(data.truncated(k)));
  }
  return out;
}

} // namespace plp
