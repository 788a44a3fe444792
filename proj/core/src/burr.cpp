#include "plp/burr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "plp/errors.hpp"
#include "plp/numerics/nelder_mead.hpp"

namespace plp::priors {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(1 + z^alpha) from log z without overflowing z^alpha.
double log1p_pow(double log_z, double alpha)
{
  const double e = alpha * log_z;
  if (e > 30.0) {
    return e + std::log1p(std::exp(-e));
  }
  return std::log1p(std::exp(e));
}

// z^alpha / (1 + z^alpha)
double pow_fraction(double log_z, double alpha)
{
  const double e = alpha * log_z;
  return e > 0.0 ? 1.0 / (1.0 + std::exp(-e)) : std::exp(e) / (1.0 + std::exp(e));
}

double logistic(double v)
{
  return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
}

double logit(double p)
{
  return std::log(p) - std::log1p(-p);
}

// Unconstrained coordinates: (ln(alpha - 1), logit(gamma / x_min), ln delta, ln kappa).
using Coords = std::array<double, 4>;

BurrParams from_coords(const Coords& c, double x_min)
{
  return BurrParams{1.0 + std::exp(c[0]), x_min * logistic(c[1]), std::exp(c[2]), std::exp(c[3])};
}

Coords to_coords(const BurrParams& p, double x_min)
{
  const double frac = std::clamp(p.gamma / x_min, 1e-12, 1.0 - 1e-12);
  return Coords{std::log(std::max(p.alpha - 1.0, 1e-12)), logit(frac), std::log(p.delta),
                std::log(p.kappa)};
}

struct SampleSummary
{
  double min;
  double max;
  double median;
};

SampleSummary summarize(std::span<const double> sample)
{
  if (sample.size() < 8) {
    throw EstimationError("Burr fit needs at least 8 observations");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("Burr fit needs positive finite observations");
    }
  }
  if (sorted.front() == sorted.back()) {
    throw EstimationError("Burr fit undefined for a constant sample");
  }
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return {sorted.front(), sorted.back(), median};
}

BurrFit refine(std::span<const double> sample, double x_min, const Coords& start, double step)
{
  const double n = static_cast<double>(sample.size());
  auto objective = [&](const Coords& c) {
    return -burr_log_likelihood(from_coords(c, x_min), sample) / n;
  };
  numerics::NelderMeadOptions opts;
  opts.max_iterations = 2000;
  opts.f_tol = 1e-10;
  opts.x_tol = 1e-10;
  const auto res = numerics::nelder_mead<4>(objective, start, Coords{step, step, step, step}, opts);
  const BurrParams params = from_coords(res.x, x_min);
  return BurrFit{params, burr_log_likelihood(params, sample), res.iterations};
}

} // namespace

void BurrParams::validate() const
{
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !(delta > 0.0) || !std::isfinite(delta) ||
      !(kappa > 0.0) || !std::isfinite(kappa) || !(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("Burr XII parameters need alpha, delta, kappa > 0 and gamma >= 0");
  }
}

double burr_log_pdf(const BurrParams& p, double x)
{
  p.validate();
  if (!(x > p.gamma)) {
    return neg_inf;
  }
  const double log_z = std::log((x - p.gamma) / p.delta);
  return std::log(p.alpha * p.kappa / p.delta) + (p.alpha - 1.0) * log_z -
         (p.kappa + 1.0) * log1p_pow(log_z, p.alpha);
}

double burr_pdf(const BurrParams& p, double x)
{
  return std::exp(burr_log_pdf(p, x));
}

double burr_cdf(const BurrParams& p, double x)
{
  p.validate();
  if (!(x > p.gamma)) {
    return 0.0;
  }
  if (std::isinf(x)) {
    return 1.0;
  }
  const double log_z = std::log((x - p.gamma) / p.delta);
  return -std::expm1(-p.kappa * log1p_pow(log_z, p.alpha));
}

double burr_quantile(const BurrParams& p, double u)
{
  p.validate();
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError("Burr quantile needs u in [0, 1)");
  }
  const double z_pow = std::expm1(-std::log1p(-u) / p.kappa);
  return p.gamma + p.delta * std::pow(z_pow, 1.0 / p.alpha);
}

double burr_sample(const BurrParams& p, RandomStream& rng)
{
  double x = burr_quantile(p, rng.uniform());
  if (!(x > p.gamma)) {
    x = std::nextafter(p.gamma, std::numeric_limits<double>::infinity());
  }
  return x;
}

double burr_pdf_second_derivative(const BurrParams& p, double x)
{
  p.validate();
  if (!(x > p.gamma)) {
    throw DomainError("Burr second derivative is defined only above gamma");
  }
  const double z = (x - p.gamma) / p.delta;
  const double log_z = std::log(z);
  const double a = p.alpha;
  const double k1 = p.kappa + 1.0;
  // g(z) = z^(a-1) (1 + z^a)^-(k+1) = exp(phi); g'' = g (phi'' + phi'^2)
  const double w = pow_fraction(log_z, a);
  const double g = std::exp((a - 1.0) * log_z - k1 * log1p_pow(log_z, a));
  const double d1 = ((a - 1.0) - k1 * a * w) / z;
  const double d2 = -((a - 1.0) + k1 * a * w * ((a - 1.0) * (1.0 - w) - w)) / (z * z);
  return (a * p.kappa / (p.delta * p.delta * p.delta)) * g * (d2 + d1 * d1);
}

double burr_log_likelihood(const BurrParams& p, std::span<const double> sample)
{
  double total = 0.0;
  for (double x : sample) {
    const double v = burr_log_pdf(p, x);
    if (!std::isfinite(v)) {
      return neg_inf;
    }
    total += v;
  }
  return total;
}

BurrFit burr_fit(std::span<const double> sample)
{
  const SampleSummary s = summarize(sample);
  const std::array<double, 2> gamma_fractions{0.25, 0.9};
  const std::array<double, 2> alpha_starts{2.0, 6.0};
  const std::array<double, 2> kappa_starts{0.75, 2.5};

  BurrFit best{BurrParams{2.0, 0.0, 1.0, 1.0}, neg_inf, 0};
  int iterations = 0;
  for (double gf : gamma_fractions) {
    for (double a0 : alpha_starts) {
      for (double k0 : kappa_starts) {
        const double g0 = gf * s.min;
        // Place the start's median on the sample median.
        const double d0 = (s.median - g0) / std::pow(std::pow(2.0, 1.0 / k0) - 1.0, 1.0 / a0);
        const BurrParams start{a0, g0, d0, k0};
        const BurrFit fit = refine(sample, s.min, to_coords(start, s.min), 0.5);
        iterations += fit.iterations;
        if (fit.log_likelihood > best.log_likelihood) {
          best = fit;
        }
      }
    }
  }
  if (!std::isfinite(best.log_likelihood)) {
    throw EstimationError("Burr fit failed: no start reached a finite likelihood");
  }
  best.iterations = iterations;
  return best;
}

BurrFit burr_fit_from(std::span<const double> sample, const BurrParams& start)
{
  start.validate();
  const SampleSummary s = summarize(sample);
  if (!(start.gamma < s.min) || !(start.alpha > 1.0)) {
    throw DomainError("Burr refit start must have alpha > 1 and gamma below the sample minimum");
  }
  const BurrFit fit = refine(sample, s.min, to_coords(start, s.min), 0.05);
  if (!std::isfinite(fit.log_likelihood)) {
    throw EstimationError("Burr refit reached a non-finite likelihood");
  }
  return fit;
}

} // namespace plp::priors
