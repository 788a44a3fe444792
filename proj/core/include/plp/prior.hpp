#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "plp/burr.hpp"
#include "plp/kde.hpp"

namespace plp::priors {

//! Non-informative prior proportional to 1/beta. Improper: stored
//! unnormalised and only used where the normaliser cancels.
struct JeffreysPrior
{};

//! Inverted gamma density (mu/b)^(v+1) exp(-mu/b) / (mu Gamma(v)).
struct InvGammaParams
{
  double shape_v;
  double scale_mu;

  void validate() const;
};

using Prior = std::variant<BurrParams, JeffreysPrior, InvGammaParams, KernelSpec>;

enum class PriorKind
{
  burr,
  jeffreys,
  inverted_gamma,
  kde_gaussian,
  kde_epanechnikov,
};

//! CLI spelling: burr, jeffreys, invgamma, kde-gauss, kde-epan.
std::string_view prior_kind_name(PriorKind kind);
std::optional<PriorKind> parse_prior_kind(std::string_view name);
PriorKind prior_kind(const Prior& prior);

double invgamma_log_pdf(const InvGammaParams& p, double x);

//! Log prior density at beta > 0 (Jeffreys as ln(1/beta)); -inf where the
//! density vanishes. Throws DomainError for beta <= 0 or invalid parameters.
double prior_log_density(const Prior& prior, double beta);

//! Lower end of the integration range over beta: gamma for Burr, 0 otherwise.
double prior_support_lower(const Prior& prior);

//! Matches the mean and variance of 1/beta, which is Gamma(v, rate mu) when
//! beta is inverted gamma: v = m^2/s^2, mu = m/s^2.
InvGammaParams inverted_gamma_moment_match(std::span<const double> sample);

//! Builds the default priors from a sample of shape estimates. The Burr fit
//! is shared between the Burr prior and the AMISE reference of the kernel
//! priors, and computed at most once.
class PriorFactory
{
public:
  explicit PriorFactory(std::vector<double> beta_sample);

  Prior make(PriorKind kind);
  const BurrParams& burr_reference();
  std::span<const double> sample() const noexcept { return sample_; }

private:
  std::vector<double> sample_;
  std::optional<BurrParams> burr_;
};

} // namespace plp::priors
