#include "plp/prior.hpp"

#include <cmath>
#include <limits>

#include "plp/errors.hpp"

namespace plp::priors {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

void InvGammaParams::validate() const
{
  if (!(shape_v > 0.0) || !std::isfinite(shape_v) || !(scale_mu > 0.0) || !std::isfinite(scale_mu)) {
    throw DomainError("inverted gamma parameters must be positive and finite");
  }
}

std::string_view prior_kind_name(PriorKind kind)
{
  switch (kind) {
  case PriorKind::burr:
    return "burr";
  case PriorKind::jeffreys:
    return "jeffreys";
  case PriorKind::inverted_gamma:
    return "invgamma";
  case PriorKind::kde_gaussian:
    return "kde-gauss";
  case PriorKind::kde_epanechnikov:
    return "kde-epan";
  }
  return "unknown";
}

std::optional<PriorKind> parse_prior_kind(std::string_view name)
{
  for (auto kind : {PriorKind::burr, PriorKind::jeffreys, PriorKind::inverted_gamma,
                    PriorKind::kde_gaussian, PriorKind::kde_epanechnikov}) {
    if (prior_kind_name(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

PriorKind prior_kind(const Prior& prior)
{
  return std::visit(Overloaded{
                      [](const BurrParams&) { return PriorKind::burr; },
                      [](const JeffreysPrior&) { return PriorKind::jeffreys; },
                      [](const InvGammaParams&) { return PriorKind::inverted_gamma; },
                      [](const KernelSpec& k) {
                        return k.kernel() == Kernel::gaussian ? PriorKind::kde_gaussian
                                                              : PriorKind::kde_epanechnikov;
                      },
                    },
                    prior);
}

double invgamma_log_pdf(const InvGammaParams& p, double x)
{
  p.validate();
  if (!(x > 0.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  return p.shape_v * std::log(p.scale_mu) - std::lgamma(p.shape_v) - (p.shape_v + 1.0) * std::log(x) -
         p.scale_mu / x;
}

double prior_log_density(const Prior& prior, double beta)
{
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("prior density needs beta > 0");
  }
  return std::visit(Overloaded{
                      [beta](const BurrParams& p) { return burr_log_pdf(p, beta); },
                      [beta](const JeffreysPrior&) { return -std::log(beta); },
                      [beta](const InvGammaParams& p) { return invgamma_log_pdf(p, beta); },
                      [beta](const KernelSpec& k) { return k.log_density(beta); },
                    },
                    prior);
}

double prior_support_lower(const Prior& prior)
{
  if (const auto* burr = std::get_if<BurrParams>(&prior)) {
    return burr->gamma;
  }
  return 0.0;
}

InvGammaParams inverted_gamma_moment_match(std::span<const double> sample)
{
  if (sample.size() < 2) {
    throw EstimationError("inverted gamma moment match needs at least two observations");
  }
  double mean = 0.0;
  for (double b : sample) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw DomainError("inverted gamma moment match needs positive observations");
    }
    mean += 1.0 / b;
  }
  const double n = static_cast<double>(sample.size());
  mean /= n;
  double ss = 0.0;
  for (double b : sample) {
    const double d = 1.0 / b - mean;
    ss += d * d;
  }
  const double var = ss / (n - 1.0);
  if (!(var > 0.0)) {
    throw EstimationError("inverted gamma moment match undefined for a constant sample");
  }
  InvGammaParams out{mean * mean / var, mean / var};
  out.validate();
  return out;
}

PriorFactory::PriorFactory(std::vector<double> beta_sample)
  : sample_(std::move(beta_sample))
{
  if (sample_.empty()) {
    throw DomainError("prior factory needs a non-empty sample of shape estimates");
  }
}

const BurrParams& PriorFactory::burr_reference()
{
  if (!burr_) {
    burr_ = burr_fit(sample_).params;
  }
  return *burr_;
}

Prior PriorFactory::make(PriorKind kind)
{
  switch (kind) {
  case PriorKind::burr:
    return burr_reference();
  case PriorKind::jeffreys:
    return JeffreysPrior{};
  case PriorKind::inverted_gamma:
    return inverted_gamma_moment_match(sample_);
  case PriorKind::kde_gaussian:
    return kde_build(sample_, Kernel::gaussian, burr_reference());
  case PriorKind::kde_epanechnikov:
    return kde_build(sample_, Kernel::epanechnikov, burr_reference());
  }
  throw DomainError("unknown prior kind");
}

} // namespace plp::priors
