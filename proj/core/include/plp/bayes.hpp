#pragma once

#include <functional>
#include <optional>

#include "plp/prior.hpp"
#include "plp/process.hpp"

namespace plp::bayes {

//! Weights of the Higgins-Tsokos loss
//!   L(d) = [f1 exp(f2 d) + f2 exp(-f1 d)] / (f1 + f2) - 1,  d = estimate - truth.
struct HtLoss
{
  double f1 = 1.0;
  double f2 = 1.0;

  void validate() const;
};

double ht_loss(double estimate, double truth, const HtLoss& loss);

//! Controls the one-dimensional posterior integrals.
struct QuadratureConfig
{
  //! Lower integration limit; defaults to the prior's support lower bound.
  std::optional<double> lower;
  double rel_tol = 1e-9;
  //! Absolute tolerance on integrals of the posterior scaled to peak 1.
  double abs_tol = 1e-300;
  int max_refinements = 30;
  //! Upper/lower limits are pushed out (doubling the step from the mode)
  //! until the log integrand sits this many nats below the peak.
  double tail_nats = 45.0;

  void validate() const;
};

//! Posterior over beta for known theta.
struct PosteriorSpec
{
  FailureTimes data;
  double theta;
  priors::Prior prior;
};

//! Any unnormalised log density over beta in (lower, inf).
struct LogPosterior
{
  std::function<double(double)> log_density;
  double lower = 0.0;
};

//! log L(data; beta, theta) + log g(beta). Never normalised.
double posterior_log_unnorm(const PosteriorSpec& spec, double beta);
LogPosterior make_log_posterior(const PosteriorSpec& spec);

//! Where the posterior integrals were taken.
struct IntegrationWindow
{
  double mode;
  double log_peak;
  double lower;
  double upper;
};

struct HtEstimate
{
  double value;
  //! Integrals of exp(f1 (b - mode)) h and exp(-f2 (b - mode)) h, with h
  //! scaled so that its peak is 1.
  double numerator;
  double denominator;
  IntegrationWindow window;
};

//! (1/(f1+f2)) ln[ int e^{f1 b} h(b) db / int e^{-f2 b} h(b) db ].
//! Both integrals share the log-offset (peak of log h), so the result does
//! not depend on any constant added to the log posterior.
//! Throws QuadratureError on non-convergence or vanishing mass.
HtEstimate ht_bayes_estimate_detail(const LogPosterior& posterior,
                                    const HtLoss& loss,
                                    const QuadratureConfig& quad = {});
double ht_bayes_estimate(const LogPosterior& posterior, const HtLoss& loss, const QuadratureConfig& quad = {});
double ht_bayes_estimate(const PosteriorSpec& spec, const HtLoss& loss, const QuadratureConfig& quad = {});

//! int b h(b) db / int h(b) db; the f1 = f2 -> 0 limit of the H-T estimate.
double posterior_mean(const LogPosterior& posterior, const QuadratureConfig& quad = {});
double posterior_mean(const PosteriorSpec& spec, const QuadratureConfig& quad = {});

//! t_n / n^(1/beta_bayes): the scale MLE formula fed a Bayesian shape.
double adjusted_theta(const FailureTimes& data, double beta_bayes);

//! Intensity written as coefficient * t^exponent.
struct IntensityForm
{
  double coefficient;
  double exponent;

  double operator()(double t) const;
};

//! a = beta / theta^beta, b = beta - 1.
IntensityForm intensity_form(const PlpParams& params);

struct BayesIntensity
{
  PlpParams params;
  IntensityForm form;
};

//! Pairs the Bayesian shape with adjusted_theta and exposes the fitted
//! intensity in coefficient-exponent form.
BayesIntensity bayes_intensity(const FailureTimes& data, double beta_bayes);

//! Conditional reliability exp{-int_{t_prev}^{t} V_B(x) dx} under the
//! Bayesian parameter pair.
double bayes_reliability(const FailureTimes& data, double beta_bayes, double t_prev, double t);

} // namespace plp::bayes
