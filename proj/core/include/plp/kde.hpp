#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "plp/burr.hpp"

namespace plp::priors {

enum class Kernel
{
  gaussian,
  epanechnikov,
};

std::string_view kernel_name(Kernel k);

double kernel_value(Kernel k, double u);
//! C(K) = integral of K(u)^2.
double kernel_roughness(Kernel k);
//! k_2 = integral of u^2 K(u).
double kernel_second_moment(Kernel k);

//! Kernel density estimate over a sample of shape estimates:
//!   g(b) = (1 / (n h)) sum_i K((b - b_i) / h).
class KernelSpec
{
public:
  //! Throws DomainError for an empty sample or a non-positive bandwidth.
  KernelSpec(Kernel kernel, double bandwidth, std::vector<double> sample);

  Kernel kernel() const noexcept { return kernel_; }
  double bandwidth() const noexcept { return bandwidth_; }
  //! The sample in ascending order.
  std::span<const double> sample() const noexcept { return sample_; }

  //! Density at any real x (the kernels are defined on the whole line).
  double density(double x) const;
  //! Log density, -inf where the estimate is exactly zero.
  double log_density(double x) const;

private:
  Kernel kernel_;
  double bandwidth_;
  std::vector<double> sample_;
};

//! R(f'') = integral of the squared second derivative of a Burr density.
//! Throws EstimationError when alpha <= 2.5 (f'' ~ z^(alpha-3) is not square
//! integrable at the lower support edge) or the quadrature fails.
double burr_curvature_roughness(const BurrParams& reference);

//! AMISE-optimal bandwidth [C(K) / (k_2^2 R(f''))]^(1/5) n^(-1/5) with the
//! Burr reference density standing in for the unknown f.
double amise_bandwidth(Kernel kernel, const BurrParams& reference, std::size_t n);

KernelSpec kde_build(std::vector<double> sample, Kernel kernel, double bandwidth);
//! Bandwidth from amise_bandwidth(kernel, reference, sample.size()).
KernelSpec kde_build(std::vector<double> sample, Kernel kernel, const BurrParams& reference);
//! Bandwidth from a Burr reference fitted to the sample itself.
KernelSpec kde_build(std::vector<double> sample, Kernel kernel);

} // namespace plp::priors
