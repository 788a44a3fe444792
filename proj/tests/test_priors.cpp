#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include "plp/burr.hpp"
#include "plp/datasets.hpp"
#include "plp/errors.hpp"
#include "plp/kde.hpp"
#include "plp/numerics/quadrature.hpp"
#include "plp/prior.hpp"
#include "plp/random.hpp"
#include "support/high_precision.hpp"
#include "support/ks.hpp"

using namespace plp;
using namespace plp::priors;

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Integral of a density over [lo, inf) with the interval split at the
// given interior points.
template <class F>
double integrate_density(F f, double lo, double scale, std::vector<double> interior = {})
{
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  opts.max_depth = 50;
  double total = 0.0;
  double a = lo;
  std::sort(interior.begin(), interior.end());
  for (double b : interior) {
    if (b > a) {
      total += numerics::integrate(f, a, b, opts).value[0];
      a = b;
    }
  }
  return total + numerics::integrate_to_infinity(f, a, scale, opts).value[0];
}

std::vector<double> crow_trajectory()
{
  return mle_beta_trajectory(datasets::crow_1974(), 5);
}

std::vector<double> burr_draws(const BurrParams& p, std::size_t n, std::uint64_t seed)
{
  RandomStream rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) {
    x = burr_sample(p, rng);
  }
  return out;
}

} // namespace

TEST_CASE("prior log densities at hand-computed points")
{
  CHECK(prior_log_density(BurrParams{1.0, 0.0, 1.0, 1.0}, 1.0) == doctest::Approx(std::log(0.25)).epsilon(1e-15));
  CHECK(prior_log_density(BurrParams{2.0, 0.4, 1.0, 1.0}, 0.3) == neg_inf);
  CHECK(prior_log_density(BurrParams{2.0, 0.4, 1.0, 1.0}, 0.4) == neg_inf);
  CHECK(prior_log_density(InvGammaParams{1.0, 1.0}, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(prior_log_density(JeffreysPrior{}, 2.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  const KernelSpec single(Kernel::gaussian, 0.1, {0.7});
  CHECK(prior_log_density(single, 0.7) ==
        doctest::Approx(std::log(1.0 / (0.1 * std::sqrt(2.0 * std::numbers::pi)))).epsilon(1e-14));

  CHECK_THROWS_AS(prior_log_density(JeffreysPrior{}, 0.0), DomainError);
  CHECK_THROWS_AS(prior_log_density(JeffreysPrior{}, -1.0), DomainError);
  CHECK_THROWS_AS(prior_log_density(BurrParams{0.0, 0.0, 1.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(prior_log_density(BurrParams{1.0, -0.1, 1.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(prior_log_density(InvGammaParams{-1.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(KernelSpec(Kernel::gaussian, 0.0, {0.7}), DomainError);
  CHECK_THROWS_AS(KernelSpec(Kernel::gaussian, 0.1, {}), DomainError);
}

TEST_CASE("Burr log density against an extended-precision evaluation")
{
  const BurrParams p{5.4576, 0.39929, 0.16184, 1.6984};
  for (double x : {0.41, 0.5, 0.7, 1.3, 4.0}) {
    const double oracle = static_cast<double>(plp::testing::hp_burr_log_pdf(
      plp::testing::hp(x), plp::testing::hp(p.alpha), plp::testing::hp(p.gamma), plp::testing::hp(p.delta),
      plp::testing::hp(p.kappa)));
    CHECK(burr_log_pdf(p, x) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("Burr cdf")
{
  const BurrParams p{2.3, 0.2, 0.6, 1.4};
  CHECK(burr_cdf(p, p.gamma) == 0.0);
  CHECK(burr_cdf(p, 0.0) == 0.0);
  CHECK(burr_cdf(BurrParams{1.0, 0.0, 1.0, 1.0}, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(burr_cdf(p, 1e12) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("closed form matches quadrature of the density")
  {
    numerics::QuadratureOptions opts;
    opts.rel_tol = 1e-12;
    for (int i = 1; i <= 20; ++i) {
      const double x = p.gamma + 0.1 * i;
      const double q = numerics::integrate([&](double b) { return burr_pdf(p, b); }, p.gamma, x, opts).value[0];
      CHECK(std::abs(q - burr_cdf(p, x)) <= 1e-8);
    }
  }

  SUBCASE("numeric derivative of the cdf is the density")
  {
    for (double x : {0.3, 0.5, 0.8, 1.2, 2.0}) {
      const double h = 1e-6;
      const double d = (burr_cdf(p, x + h) - burr_cdf(p, x - h)) / (2.0 * h);
      CHECK(std::abs(d - burr_pdf(p, x)) <= 1e-6);
    }
  }

  SUBCASE("monotone and positive density above gamma only")
  {
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double x = 0.01 * i;
      const double c = burr_cdf(p, x);
      CHECK(c >= prev);
      prev = c;
      if (x <= p.gamma) {
        CHECK(burr_pdf(p, x) == 0.0);
      } else {
        CHECK(burr_pdf(p, x) > 0.0);
      }
    }
  }
}

TEST_CASE("Burr sampler")
{
  const BurrParams p{2.3, 0.2, 0.6, 1.4};
  CHECK(burr_quantile(p, 0.0) == p.gamma);
  for (double u : {0.1, 0.5, 0.9}) {
    CHECK(std::abs(burr_cdf(p, burr_quantile(p, u)) - u) <= 1e-12);
  }
  CHECK_THROWS_AS(burr_quantile(p, 1.0), DomainError);

  const auto draws = burr_draws(p, 10000, 17);
  for (double x : draws) {
    REQUIRE(x > p.gamma);
  }
  const double d = plp::testing::ks_statistic(draws, [&](double x) { return burr_cdf(p, x); });
  CHECK(plp::testing::ks_pvalue(d, draws.size()) > 0.01);

  auto sorted = draws;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 1; k <= 9; ++k) {
    const double emp = sorted[static_cast<std::size_t>(k * 1000) - 1];
    CHECK(std::abs(emp - burr_quantile(p, k / 10.0)) < 0.02);
  }
}

TEST_CASE("Burr fit")
{
  const BurrParams truth{2.0, 0.3, 0.5, 1.5};
  const auto sample = burr_draws(truth, 500, 3);
  const BurrFit fit = burr_fit(sample);
  CHECK(fit.log_likelihood >= burr_log_likelihood(truth, sample));
  CHECK(fit.log_likelihood == doctest::Approx(burr_log_likelihood(fit.params, sample)).epsilon(1e-14));
  CHECK(fit.params.gamma < *std::min_element(sample.begin(), sample.end()));

  SUBCASE("refitting from the optimum stays put")
  {
    const BurrFit again = burr_fit_from(sample, fit.params);
    CHECK(std::abs(again.params.alpha - fit.params.alpha) < 1e-6);
    CHECK(std::abs(again.params.gamma - fit.params.gamma) < 1e-6);
    CHECK(std::abs(again.params.delta - fit.params.delta) < 1e-6);
    CHECK(std::abs(again.params.kappa - fit.params.kappa) < 1e-6);
  }

  SUBCASE("fitted density reproduces the sample mean")
  {
    const auto big = burr_draws(truth, 10000, 8);
    const BurrFit f = burr_fit(big);
    double mean = 0.0;
    for (double x : big) {
      mean += x;
    }
    mean /= static_cast<double>(big.size());
    const double model_mean = integrate_density([&](double x) { return x * burr_pdf(f.params, x); },
                                                f.params.gamma, f.params.delta);
    CHECK(std::abs(model_mean / mean - 1.0) < 0.05);
  }

  CHECK_THROWS_AS(burr_fit(std::vector<double>(10, 0.5)), EstimationError);
  CHECK_THROWS_AS(burr_fit(std::vector<double>{0.1, 0.2, 0.3}), EstimationError);
}

TEST_CASE("Burr fit to the Crow trajectory")
{
  const BurrFit fit = burr_fit(crow_trajectory());
  CHECK(std::isfinite(fit.log_likelihood));
  // R(f'') needs alpha > 2.5; the kernel priors rely on it.
  CHECK(fit.params.alpha > 2.5);
  CHECK(fit.params.gamma < 0.46);
}

TEST_CASE("kernel constants")
{
  const double rg = 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  CHECK(std::abs(kernel_roughness(Kernel::epanechnikov) - 0.6) <= 1e-12);
  CHECK(std::abs(kernel_second_moment(Kernel::epanechnikov) - 0.2) <= 1e-12);
  CHECK(std::abs(kernel_roughness(Kernel::gaussian) - rg) <= 1e-12);
  CHECK(std::abs(kernel_second_moment(Kernel::gaussian) - 1.0) <= 1e-12);

  // Independent check by quadrature of K^2 and u^2 K.
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  for (Kernel k : {Kernel::gaussian, Kernel::epanechnikov}) {
    auto sq = [k](double u) { return kernel_value(k, u) * kernel_value(k, u); };
    auto m2 = [k](double u) { return u * u * kernel_value(k, u); };
    const double c = k == Kernel::gaussian ? numerics::integrate_real_line(sq, 1.0, opts).value[0]
                                           : numerics::integrate(sq, -1.0, 1.0, opts).value[0];
    const double k2 = k == Kernel::gaussian ? numerics::integrate_real_line(m2, 1.0, opts).value[0]
                                            : numerics::integrate(m2, -1.0, 1.0, opts).value[0];
    CHECK(std::abs(c - kernel_roughness(k)) <= 1e-12);
    CHECK(std::abs(k2 - kernel_second_moment(k)) <= 1e-12);
  }
}

TEST_CASE("AMISE bandwidth")
{
  const BurrParams ref = burr_fit(crow_trajectory()).params;
  for (Kernel k : {Kernel::gaussian, Kernel::epanechnikov}) {
    for (std::size_t n : {1u, 7u, 36u, 1000u}) {
      CHECK(amise_bandwidth(k, ref, 32 * n) == amise_bandwidth(k, ref, n) / 2.0);
    }
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= 200; ++n) {
      const double h = amise_bandwidth(k, ref, n);
      CHECK(h < prev);
      prev = h;
    }
  }
  CHECK_THROWS_AS(amise_bandwidth(Kernel::gaussian, ref, 0), DomainError);
  CHECK_THROWS_AS(amise_bandwidth(Kernel::gaussian, BurrParams{2.0, 0.0, 1.0, 1.0}, 10), EstimationError);

  SUBCASE("matches the formula with an independent R(f'')")
  {
    // Central differences of the density stand in for the analytic f''.
    auto f2 = [&](double x) {
      const double h = 1e-4 * ref.delta;
      const double d = (burr_pdf(ref, x + h) - 2.0 * burr_pdf(ref, x) + burr_pdf(ref, x - h)) / (h * h);
      return d * d;
    };
    const double lo = ref.gamma + 1e-3 * ref.delta;
    const double r = integrate_density(f2, lo, ref.delta, {ref.gamma + ref.delta});
    const double expected = std::pow(0.6 / (0.04 * r), 0.2) * std::pow(36.0, -0.2);
    CHECK(amise_bandwidth(Kernel::epanechnikov, ref, 36) == doctest::Approx(expected).epsilon(1e-4));
  }

  SUBCASE("scales with the reference density's argument")
  {
    for (double c : {0.5, 3.0, 10.0}) {
      const BurrParams scaled{ref.alpha, c * ref.gamma, c * ref.delta, ref.kappa};
      CHECK(amise_bandwidth(Kernel::gaussian, scaled, 36) ==
            doctest::Approx(c * amise_bandwidth(Kernel::gaussian, ref, 36)).epsilon(1e-8));
    }
  }
}

TEST_CASE("kernel density estimate")
{
  const auto sample = crow_trajectory();
  for (Kernel k : {Kernel::gaussian, Kernel::epanechnikov}) {
    const KernelSpec kde = kde_build(sample, k);
    const double lo = *std::min_element(sample.begin(), sample.end()) - 12.0 * kde.bandwidth();
    const double hi = *std::max_element(sample.begin(), sample.end()) + 12.0 * kde.bandwidth();
    numerics::QuadratureOptions opts;
    opts.rel_tol = 1e-12;
    std::vector<double> breaks{lo};
    for (double x : sample) {
      for (double off : {-1.0, 1.0}) {
        breaks.push_back(x + off * kde.bandwidth());
      }
    }
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    auto f = [&](double x) { return std::array<double, 1>{kde.density(x)}; };
    const double total = numerics::integrate<1>(f, breaks, opts).value[0];
    CHECK(std::abs(total - 1.0) <= 1e-6);

    for (int i = -50; i <= 150; ++i) {
      CHECK(kde.density(0.01 * i) >= 0.0);
    }
  }

  SUBCASE("Epanechnikov support is compact")
  {
    const KernelSpec kde(Kernel::epanechnikov, 0.05, {0.4, 0.5, 0.6});
    CHECK(kde.density(0.35 - 1e-12) == 0.0);
    CHECK(kde.density(0.65 + 1e-12) == 0.0);
    CHECK(kde.density(0.2) == 0.0);
    CHECK(kde.log_density(0.2) == neg_inf);
    CHECK(kde.density(0.36) > 0.0);
  }

  SUBCASE("doubling h halves a single-point Gaussian peak")
  {
    const KernelSpec a(Kernel::gaussian, 0.1, {0.7});
    const KernelSpec b(Kernel::gaussian, 0.2, {0.7});
    CHECK(b.density(0.7) == doctest::Approx(a.density(0.7) / 2.0).epsilon(1e-15));
  }

  SUBCASE("permuting the sample leaves the density bit-identical")
  {
    auto shuffled = sample;
    std::mt19937 gen(4);
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    for (Kernel k : {Kernel::gaussian, Kernel::epanechnikov}) {
      const KernelSpec a(k, 0.03, sample);
      const KernelSpec b(k, 0.03, shuffled);
      for (int i = 0; i <= 100; ++i) {
        const double x = 0.3 + 0.005 * i;
        CHECK(a.density(x) == b.density(x));
        CHECK(a.log_density(x) == b.log_density(x));
      }
    }
  }

  SUBCASE("Gaussian log density stays finite far in the tails")
  {
    const KernelSpec kde(Kernel::gaussian, 0.01, sample);
    CHECK(std::isfinite(kde.log_density(5.0)));
    CHECK(kde.log_density(0.5) == doctest::Approx(std::log(kde.density(0.5))).epsilon(1e-12));
  }
}

TEST_CASE("normalised priors integrate to one")
{
  const auto sample = crow_trajectory();
  PriorFactory factory(sample);
  const BurrParams burr = factory.burr_reference();
  CHECK(std::abs(integrate_density([&](double x) { return burr_pdf(burr, x); }, burr.gamma, burr.delta,
                                   {burr.gamma + burr.delta, burr.gamma + 3.0 * burr.delta}) -
                 1.0) <= 1e-6);

  const InvGammaParams ig = std::get<InvGammaParams>(factory.make(PriorKind::inverted_gamma));
  const double ig_mode = ig.scale_mu / (ig.shape_v + 1.0);
  CHECK(std::abs(integrate_density([&](double x) { return std::exp(invgamma_log_pdf(ig, x)); }, 1e-9, ig_mode,
                                   {0.5 * ig_mode, ig_mode, 2.0 * ig_mode}) -
                 1.0) <= 1e-6);

  for (double v : {1.0, 3.5}) {
    const InvGammaParams small{v, 2.0};
    CHECK(std::abs(integrate_density([&](double x) { return std::exp(invgamma_log_pdf(small, x)); }, 1e-12, 1.0,
                                     {0.1, 1.0, 10.0}) -
                   1.0) <= 1e-6);
  }
}

TEST_CASE("inverted gamma moment match")
{
  const auto sample = crow_trajectory();
  double m = 0.0;
  for (double b : sample) {
    m += 1.0 / b;
  }
  m /= static_cast<double>(sample.size());
  double ss = 0.0;
  for (double b : sample) {
    ss += (1.0 / b - m) * (1.0 / b - m);
  }
  const double var = ss / static_cast<double>(sample.size() - 1);
  const InvGammaParams p = inverted_gamma_moment_match(sample);
  CHECK(p.shape_v == doctest::Approx(m * m / var).epsilon(1e-12));
  CHECK(p.scale_mu == doctest::Approx(m / var).epsilon(1e-12));
  CHECK_THROWS_AS(inverted_gamma_moment_match(std::vector<double>{0.5}), EstimationError);
  CHECK_THROWS_AS(inverted_gamma_moment_match(std::vector<double>{0.5, 0.5, 0.5}), EstimationError);
}

TEST_CASE("prior factory and names")
{
  const auto sample = crow_trajectory();
  PriorFactory factory(sample);
  for (PriorKind k : {PriorKind::burr, PriorKind::jeffreys, PriorKind::inverted_gamma, PriorKind::kde_gaussian,
                      PriorKind::kde_epanechnikov}) {
    CHECK(parse_prior_kind(prior_kind_name(k)) == k);
    CHECK(prior_kind(factory.make(k)) == k);
  }
  CHECK_FALSE(parse_prior_kind("gamma").has_value());

  const auto kde = std::get<KernelSpec>(factory.make(PriorKind::kde_epanechnikov));
  CHECK(kde.bandwidth() == amise_bandwidth(Kernel::epanechnikov, factory.burr_reference(), sample.size()));
  CHECK(prior_support_lower(factory.make(PriorKind::burr)) == factory.burr_reference().gamma);
  CHECK(prior_support_lower(JeffreysPrior{}) == 0.0);
}
