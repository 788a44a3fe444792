#pragma once

#include <span>

#include "plp/random.hpp"

namespace plp::priors {

//! Four-parameter Burr type XII distribution on [gamma, inf):
//!   g(b) = alpha kappa z^(alpha-1) / (delta (1 + z^alpha)^(kappa+1)),
//!   z = (b - gamma) / delta.
struct BurrParams
{
  double alpha;
  double gamma;
  double delta;
  double kappa;

  //! Throws DomainError unless alpha, delta, kappa > 0 and gamma >= 0.
  void validate() const;
};

double burr_log_pdf(const BurrParams& p, double x);
double burr_pdf(const BurrParams& p, double x);
//! 0 for x <= gamma, else 1 - (1 + z^alpha)^(-kappa).
double burr_cdf(const BurrParams& p, double x);
//! Inverse CDF: gamma + delta [(1-u)^(-1/kappa) - 1]^(1/alpha), u in [0, 1).
double burr_quantile(const BurrParams& p, double u);
double burr_sample(const BurrParams& p, RandomStream& rng);

//! Second derivative of the density in its argument (analytic), x > gamma.
double burr_pdf_second_derivative(const BurrParams& p, double x);

double burr_log_likelihood(const BurrParams& p, std::span<const double> sample);

struct BurrFit
{
  BurrParams params;
  double log_likelihood;
  int iterations;
};

//! Maximum-likelihood fit with gamma constrained to [0, min(sample)) and
//! alpha > 1. Eight deterministic starts spaced over sample quantiles, each
//! refined by Nelder-Mead. Throws EstimationError for fewer than 8 points or
//! a degenerate (constant) sample.
BurrFit burr_fit(std::span<const double> sample);

//! Single local refinement from a given starting point.
BurrFit burr_fit_from(std::span<const double> sample, const BurrParams& start);

} // namespace plp::priors
