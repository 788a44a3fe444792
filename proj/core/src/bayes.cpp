#include "plp/bayes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "plp/errors.hpp"
#include "plp/numerics/quadrature.hpp"

namespace plp::bayes {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr std::size_t scan_points = 601;
constexpr double scan_min_offset = 1e-6;
constexpr double scan_max_offset = 1e3;
constexpr double max_window_step = 1e6;
constexpr int panels_per_side = 8;

double safe_log(const LogPosterior& p, double x)
{
  const double v = p.log_density(x);
  return std::isnan(v) ? neg_inf : v;
}

struct Scan
{
  std::vector<double> x;
  std::vector<double> log_h;
  std::size_t best;
};

Scan scan(const LogPosterior& p, double lower)
{
  Scan s;
  s.x.resize(scan_points);
  s.log_h.resize(scan_points);
  const double ratio = std::log(scan_max_offset / scan_min_offset) / static_cast<double>(scan_points - 1);
  s.best = 0;
  for (std::size_t i = 0; i < scan_points; ++i) {
    s.x[i] = lower + scan_min_offset * std::exp(ratio * static_cast<double>(i));
    s.log_h[i] = safe_log(p, s.x[i]);
    if (s.log_h[i] > s.log_h[s.best]) {
      s.best = i;
    }
  }
  return s;
}

// Golden-section maximisation of the log density on [a, b].
double refine_mode(const LogPosterior& p, double a, double b)
{
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = safe_log(p, c);
  double fd = safe_log(p, d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = safe_log(p, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = safe_log(p, d);
    }
  }
  return fc >= fd ? c : d;
}

IntegrationWindow locate_window(const LogPosterior& p, double lower, double tilt, double tail_nats)
{
  const Scan s = scan(p, lower);
  if (!(s.log_h[s.best] > neg_inf)) {
    throw QuadratureError("posterior mass vanishes on the whole scan range", 0.0, 0.0, lower,
                          lower + scan_max_offset);
  }
  const double bracket_lo = s.best == 0 ? lower : s.x[s.best - 1];
  const double bracket_hi = s.best + 1 < scan_points ? s.x[s.best + 1] : s.x[s.best];
  double mode = refine_mode(p, bracket_lo, bracket_hi);
  double peak = safe_log(p, mode);
  if (!(peak >= s.log_h[s.best])) {
    mode = s.x[s.best];
    peak = s.log_h[s.best];
  }

  const double floor = peak - tail_nats;
  auto envelope = [&](double x) { return safe_log(p, x) + tilt * std::abs(x - mode); };
  const double first_step = 1e-4 * std::max(std::abs(mode), 1e-3);

  double step = first_step;
  double upper = mode + step;
  while (envelope(upper) > floor) {
    step *= 2.0;
    if (step > max_window_step) {
      throw QuadratureError("posterior tail does not decay; no finite upper limit", 0.0, 0.0, lower,
                            mode + step);
    }
    upper = mode + step;
  }

  step = first_step;
  double low = std::max(lower, mode - step);
  while (low > lower && envelope(low) > floor) {
    step *= 2.0;
    low = std::max(lower, mode - step);
  }

  // Keep any secondary mode that the scan saw above the floor.
  for (std::size_t i = 0; i < scan_points; ++i) {
    if (s.log_h[i] + tilt * std::abs(s.x[i] - mode) > floor) {
      low = std::min(low, i == 0 ? lower : s.x[i - 1]);
      upper = std::max(upper, i + 1 < scan_points ? s.x[i + 1] : s.x[i]);
    }
  }
  return IntegrationWindow{mode, peak, low, upper};
}

std::vector<double> breakpoints(const IntegrationWindow& w)
{
  std::vector<double> out;
  out.reserve(2 * panels_per_side + 1);
  for (int i = 0; i < panels_per_side; ++i) {
    out.push_back(w.lower + (w.mode - w.lower) * static_cast<double>(i) / panels_per_side);
  }
  for (int i = 0; i <= panels_per_side; ++i) {
    out.push_back(w.mode + (w.upper - w.mode) * static_cast<double>(i) / panels_per_side);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

numerics::QuadratureOptions options(const QuadratureConfig& quad)
{
  numerics::QuadratureOptions o;
  o.rel_tol = quad.rel_tol;
  o.abs_tol = quad.abs_tol;
  o.max_depth = quad.max_refinements;
  return o;
}

double lower_limit(const LogPosterior& p, const QuadratureConfig& quad)
{
  return quad.lower.value_or(p.lower);
}

// Two integrals of weight(b - mode) * h(b) / h(mode) over the window.
template <class W1, class W2>
std::array<double, 2> integrate_pair(const LogPosterior& p,
                                     const IntegrationWindow& w,
                                     const QuadratureConfig& quad,
                                     W1 first,
                                     W2 second,
                                     const char* what)
{
  auto integrand = [&](double x) {
    const double scaled = std::exp(safe_log(p, x) - w.log_peak);
    const double d = x - w.mode;
    return std::array<double, 2>{first(d) * scaled, second(d) * scaled};
  };
  const auto bp = breakpoints(w);
  const auto res = numerics::integrate<2>(integrand, bp, options(quad));
  if (!res.converged) {
    std::ostringstream msg;
    msg << what << ": quadrature did not converge after " << quad.max_refinements
        << " refinement levels (integrals " << res.value[0] << ", " << res.value[1] << " on ["
        << w.lower << ", " << w.upper << "])";
    throw QuadratureError(msg.str(), res.value[0], res.value[1], w.lower, w.upper);
  }
  return res.value;
}

} // namespace

void HtLoss::validate() const
{
  if (!(f1 > 0.0) || !std::isfinite(f1) || !(f2 > 0.0) || !std::isfinite(f2)) {
    throw DomainError("H-T loss weights f1, f2 must be positive and finite");
  }
}

double ht_loss(double estimate, double truth, const HtLoss& loss)
{
  loss.validate();
  const double d = estimate - truth;
  const double v = (loss.f1 * std::exp(loss.f2 * d) + loss.f2 * std::exp(-loss.f1 * d)) / (loss.f1 + loss.f2) - 1.0;
  return std::max(v, 0.0);
}

void QuadratureConfig::validate() const
{
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_refinements < 1) {
    throw DomainError("quadrature needs max_refinements >= 1");
  }
  if (!(tail_nats > 0.0)) {
    throw DomainError("quadrature tail cut-off must be positive");
  }
  if (lower && (!(*lower >= 0.0) || !std::isfinite(*lower))) {
    throw DomainError("quadrature lower limit must be finite and non-negative");
  }
}

double posterior_log_unnorm(const PosteriorSpec& spec, double beta)
{
  if (!(spec.theta > 0.0) || !std::isfinite(spec.theta)) {
    throw DomainError("posterior needs theta > 0");
  }
  const double log_prior = priors::prior_log_density(spec.prior, beta);
  if (!(log_prior > neg_inf)) {
    return neg_inf;
  }
  return LikelihoodStats(spec.data).log_likelihood(beta, spec.theta) + log_prior;
}

LogPosterior make_log_posterior(const PosteriorSpec& spec)
{
  if (!(spec.theta > 0.0) || !std::isfinite(spec.theta)) {
    throw DomainError("posterior needs theta > 0");
  }
  LogPosterior out;
  out.lower = priors::prior_support_lower(spec.prior);
  out.log_density = [stats = LikelihoodStats(spec.data), theta = spec.theta, prior = spec.prior](double beta) {
    if (!(beta > 0.0)) {
      return neg_inf;
    }
    const double log_prior = priors::prior_log_density(prior, beta);
    if (!(log_prior > neg_inf)) {
      return neg_inf;
    }
    return stats.log_likelihood(beta, theta) + log_prior;
  };
  return out;
}

HtEstimate ht_bayes_estimate_detail(const LogPosterior& posterior, const HtLoss& loss, const QuadratureConfig& quad)
{
  loss.validate();
  quad.validate();
  const double tilt = std::max({1.0, loss.f1, loss.f2});
  const IntegrationWindow w = locate_window(posterior, lower_limit(posterior, quad), tilt, quad.tail_nats);
  const auto ints = integrate_pair(
    posterior, w, quad, [f1 = loss.f1](double d) { return std::exp(f1 * d); },
    [f2 = loss.f2](double d) { return std::exp(-f2 * d); }, "H-T estimate");
  if (!(ints[0] > quad.abs_tol) || !(ints[1] > quad.abs_tol)) {
    throw QuadratureError("H-T estimate: posterior mass below abs_tol", ints[0], ints[1], w.lower, w.upper);
  }
  const double value = w.mode + (std::log(ints[0]) - std::log(ints[1])) / (loss.f1 + loss.f2);
  return HtEstimate{value, ints[0], ints[1], w};
}

double ht_bayes_estimate(const LogPosterior& posterior, const HtLoss& loss, const QuadratureConfig& quad)
{
  return ht_bayes_estimate_detail(posterior, loss, quad).value;
}

double ht_bayes_estimate(const PosteriorSpec& spec, const HtLoss& loss, const QuadratureConfig& quad)
{
  return ht_bayes_estimate(make_log_posterior(spec), loss, quad);
}

double posterior_mean(const LogPosterior& posterior, const QuadratureConfig& quad)
{
  quad.validate();
  const IntegrationWindow w = locate_window(posterior, lower_limit(posterior, quad), 1.0, quad.tail_nats);
  // Weighting by b itself (positive on the support) rather than b - mode
  // keeps the first integral away from zero for symmetric posteriors.
  const auto ints = integrate_pair(
    posterior, w, quad, [m = w.mode](double d) { return m + d; }, [](double) { return 1.0; }, "posterior mean");
  if (!(ints[1] > quad.abs_tol)) {
    throw QuadratureError("posterior mean: posterior mass below abs_tol", ints[0], ints[1], w.lower, w.upper);
  }
  return ints[0] / ints[1];
}

double posterior_mean(const PosteriorSpec& spec, const QuadratureConfig& quad)
{
  return posterior_mean(make_log_posterior(spec), quad);
}

double adjusted_theta(const FailureTimes& data, double beta_bayes)
{
  return detail::scale_from_shape(data.last(), data.size(), beta_bayes);
}

double IntensityForm::operator()(double t) const
{
  if (!(t > 0.0)) {
    throw DomainError("intensity argument must be positive");
  }
  return coefficient * std::pow(t, exponent);
}

IntensityForm intensity_form(const PlpParams& params)
{
  return IntensityForm{params.beta / std::pow(params.theta, params.beta), params.beta - 1.0};
}

BayesIntensity bayes_intensity(const FailureTimes& data, double beta_bayes)
{
  const PlpParams params(beta_bayes, adjusted_theta(data, beta_bayes));
  return BayesIntensity{params, intensity_form(params)};
}

double bayes_reliability(const FailureTimes& data, double beta_bayes, double t_prev, double t)
{
  return conditional_reliability(bayes_intensity(data, beta_bayes).params, t_prev, t);
}

} // namespace plp::bayes
