#include "plp/kde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "plp/errors.hpp"
#include "plp/numerics/quadrature.hpp"

namespace plp::priors {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

} // namespace

std::string_view kernel_name(Kernel k)
{
  switch (k) {
  case Kernel::gaussian:
    return "gaussian";
  case Kernel::epanechnikov:
    return "epanechnikov";
  }
  return "unknown";
}

double kernel_value(Kernel k, double u)
{
  switch (k) {
  case Kernel::gaussian:
    return inv_sqrt_2pi * std::exp(-0.5 * u * u);
  case Kernel::epanechnikov:
    return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
  }
  return 0.0;
}

double kernel_roughness(Kernel k)
{
  switch (k) {
  case Kernel::gaussian:
    return 0.5 * std::numbers::inv_sqrtpi;
  case Kernel::epanechnikov:
    return 0.6;
  }
  return 0.0;
}

double kernel_second_moment(Kernel k)
{
  switch (k) {
  case Kernel::gaussian:
    return 1.0;
  case Kernel::epanechnikov:
    return 0.2;
  }
  return 0.0;
}

KernelSpec::KernelSpec(Kernel kernel, double bandwidth, std::vector<double> sample)
  : kernel_(kernel)
  , bandwidth_(bandwidth)
  , sample_(std::move(sample))
{
  if (sample_.empty()) {
    throw DomainError("kernel density needs a non-empty sample");
  }
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw DomainError("kernel bandwidth must be positive and finite");
  }
  for (double v : sample_) {
    if (!std::isfinite(v)) {
      throw DomainError("kernel sample must be finite");
    }
  }
  // Sorted so that the density does not depend on the order of the sample,
  // not even in the last bit.
  std::sort(sample_.begin(), sample_.end());
}

double KernelSpec::density(double x) const
{
  double sum = 0.0;
  for (double b : sample_) {
    sum += kernel_value(kernel_, (x - b) / bandwidth_);
  }
  return sum / (static_cast<double>(sample_.size()) * bandwidth_);
}

double KernelSpec::log_density(double x) const
{
  const double norm = std::log(static_cast<double>(sample_.size()) * bandwidth_);
  if (kernel_ == Kernel::epanechnikov) {
    const double d = density(x);
    return d > 0.0 ? std::log(d) : neg_inf;
  }
  // Gaussian: log-sum-exp over the kernel exponents so far tails stay finite.
  double peak = neg_inf;
  for (double b : sample_) {
    const double u = (x - b) / bandwidth_;
    peak = std::max(peak, -0.5 * u * u);
  }
  double sum = 0.0;
  for (double b : sample_) {
    const double u = (x - b) / bandwidth_;
    sum += std::exp(-0.5 * u * u - peak);
  }
  return peak + std::log(sum) + std::log(inv_sqrt_2pi) - norm;
}

double burr_curvature_roughness(const BurrParams& reference)
{
  reference.validate();
  if (!(reference.alpha > 2.5)) {
    throw EstimationError("R(f'') diverges for a Burr reference with alpha <= 2.5");
  }
  auto integrand = [&reference](double x) {
    if (!(x > reference.gamma)) {
      return 0.0;
    }
    const double d2 = burr_pdf_second_derivative(reference, x);
    return d2 * d2;
  };
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  opts.max_depth = 50;
  const auto res = numerics::integrate_to_infinity(integrand, reference.gamma, reference.delta, opts);
  if (!res.converged || !(res.value[0] > 0.0) || !std::isfinite(res.value[0])) {
    throw EstimationError("R(f'') quadrature did not converge for the Burr reference");
  }
  return res.value[0];
}

double amise_bandwidth(Kernel kernel, const BurrParams& reference, std::size_t n)
{
  if (n == 0) {
    throw DomainError("AMISE bandwidth needs n >= 1");
  }
  const double k2 = kernel_second_moment(kernel);
  const double roughness = burr_curvature_roughness(reference);
  const double scale = std::pow(kernel_roughness(kernel) / (k2 * k2 * roughness), 0.2);
  // n^(-1/5) with factors of 32 pulled out as exact powers of two, so that
  // h*(32 n) is exactly h*(n) / 2.
  std::size_t m = n;
  int halvings = 0;
  while (m % 32 == 0) {
    m /= 32;
    ++halvings;
  }
  return std::ldexp(scale * std::pow(static_cast<double>(m), -0.2), -halvings);
}

KernelSpec kde_build(std::vector<double> sample, Kernel kernel, double bandwidth)
{
  return KernelSpec(kernel, bandwidth, std::move(sample));
}

KernelSpec kde_build(std::vector<double> sample, Kernel kernel, const BurrParams& reference)
{
  if (sample.empty()) {
    throw DomainError("kernel density needs a non-empty sample");
  }
  const double h = amise_bandwidth(kernel, reference, sample.size());
  return KernelSpec(kernel, h, std::move(sample));
}

KernelSpec kde_build(std::vector<double> sample, Kernel kernel)
{
  if (sample.empty()) {
    throw DomainError("kernel density needs a non-empty sample");
  }
  const BurrFit reference = burr_fit(sample);
  return kde_build(std::move(sample), kernel, reference.params);
}

} // namespace plp::priors
