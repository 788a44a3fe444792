#include "plp/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "plp/datasets.hpp"
#include "plp/hash.hpp"
#include "plp/numerics/quadrature.hpp"
#include "plp/random.hpp"
#include "plp/simulate.hpp"

namespace plp::montecarlo {

namespace {

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double max_error_fraction = 0.01;

std::size_t cell_index(const SimConfig& c, std::size_t theta_index, std::size_t n_index)
{
  return theta_index * c.sample_sizes.size() + n_index;
}

void hash_prior(Fnv1a& h, const priors::Prior& prior)
{
  h.u64(prior.index());
  std::visit(Overloaded{
               [&h](const priors::BurrParams& p) { h.real(p.alpha).real(p.gamma).real(p.delta).real(p.kappa); },
               [](const priors::JeffreysPrior&) {},
               [&h](const priors::InvGammaParams& p) { h.real(p.shape_v).real(p.scale_mu); },
               [&h](const priors::KernelSpec& k) {
                 h.u64(static_cast<std::uint64_t>(k.kernel())).real(k.bandwidth()).reals(k.sample());
               },
             },
             prior);
}

unsigned resolve_threads(unsigned requested)
{
  if (requested == 0) {
    requested = std::max(1u, std::thread::hardware_concurrency());
  }
  return requested;
}

ReplicateRecord run_replicate(const SimConfig& config, std::size_t ti, std::size_t ni, std::size_t k)
{
  ReplicateRecord rec{};
  rec.theta_index = ti;
  rec.n_index = ni;
  rec.index = k;
  rec.failed = false;
  try {
    ReplicateData rep = replicate_dataset(config, ti, ni, k);
    rec.true_beta = rep.true_beta;
    rec.dataset_hash = datasets::dataset_hash(rep.data);
    rec.beta_mle = mle_beta(rep.data);
    rec.theta_mle = mle_theta(rep.data, rec.beta_mle);
    const double theta = config.theta_values[ti];
    for (const auto& entry : config.priors) {
      const bayes::PosteriorSpec spec{rep.data, theta, entry.prior};
      const double b = bayes::ht_bayes_estimate(spec, config.loss, config.quad);
      rec.beta_bayes.push_back(b);
      rec.theta_bayes.push_back(bayes::adjusted_theta(rep.data, b));
      rec.prior_dataset_hash.push_back(datasets::dataset_hash(spec.data));
    }
  } catch (const EstimationError& e) {
    rec.failed = true;
    rec.error = e.what();
  } catch (const DomainError& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

std::vector<ReplicateRecord> execute(const SimConfig& config, unsigned threads)
{
  const std::size_t cells = config.theta_values.size() * config.sample_sizes.size();
  const std::size_t total = cells * config.replicates;
  std::vector<ReplicateRecord> out(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      const std::size_t cell = i / config.replicates;
      const std::size_t k = i % config.replicates;
      out[i] = run_replicate(config, cell / config.sample_sizes.size(), cell % config.sample_sizes.size(), k);
    }
  };
  const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) {
      pool.emplace_back(worker);
    }
  }
  return out;
}

CellSummary summarise(double theta,
                      std::size_t n,
                      std::string name,
                      const std::vector<double>& estimates,
                      const std::vector<double>& truths,
                      std::size_t replicates,
                      std::size_t errors)
{
  CellSummary s{theta, n, std::move(name), std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(), replicates, errors};
  if (!estimates.empty()) {
    s.mean = pairwise_sum(estimates) / static_cast<double>(estimates.size());
    s.mse = mse(estimates, truths);
  }
  return s;
}

std::vector<CellSummary> aggregate(const SimConfig& config, const std::vector<ReplicateRecord>& records)
{
  std::vector<CellSummary> cells;
  const std::size_t np = config.priors.size();
  for (std::size_t ti = 0; ti < config.theta_values.size(); ++ti) {
    for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
      const double theta = config.theta_values[ti];
      const std::size_t n = config.sample_sizes[ni];
      const std::size_t base = cell_index(config, ti, ni) * config.replicates;

      std::vector<double> beta_truth;
      std::vector<double> beta_mle;
      std::vector<double> theta_mle;
      std::vector<std::vector<double>> beta_b(np);
      std::vector<std::vector<double>> theta_b(np);
      std::size_t errors = 0;
      std::string first_error;
      for (std::size_t k = 0; k < config.replicates; ++k) {
        const ReplicateRecord& r = records[base + k];
        if (r.failed) {
          if (errors++ == 0) {
            first_error = r.error;
          }
          continue;
        }
        beta_truth.push_back(r.true_beta);
        beta_mle.push_back(r.beta_mle);
        theta_mle.push_back(r.theta_mle);
        for (std::size_t p = 0; p < np; ++p) {
          beta_b[p].push_back(r.beta_bayes[p]);
          theta_b[p].push_back(r.theta_bayes[p]);
        }
      }
      if (static_cast<double>(errors) > max_error_fraction * static_cast<double>(config.replicates)) {
        std::ostringstream msg;
        msg << errors << " of " << config.replicates << " replicates failed at theta=" << theta << ", n=" << n
            << "; first error: " << first_error;
        throw CampaignError(msg.str());
      }
      const std::vector<double> theta_truth(beta_truth.size(), theta);
      cells.push_back(summarise(theta, n, "beta_mle", beta_mle, beta_truth, config.replicates, errors));
      for (std::size_t p = 0; p < np; ++p) {
        cells.push_back(summarise(theta, n, "beta_" + config.priors[p].label, beta_b[p], beta_truth,
                                  config.replicates, errors));
      }
      cells.push_back(summarise(theta, n, "theta_mle", theta_mle, theta_truth, config.replicates, errors));
      for (std::size_t p = 0; p < np; ++p) {
        cells.push_back(summarise(theta, n, "theta_" + config.priors[p].label, theta_b[p], theta_truth,
                                  config.replicates, errors));
      }
    }
  }
  return cells;
}

SimResult campaign(const SimConfig& config, bool keep_records)
{
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const unsigned threads = resolve_threads(config.threads);
  auto records = execute(config, threads);
  SimResult result;
  result.cells = aggregate(config, records);
  if (keep_records) {
    result.records = std::move(records);
  }
  const auto stop = std::chrono::steady_clock::now();
  result.metadata = CampaignMetadata{config.master_seed, config_hash(config),
                                     std::chrono::duration<double>(stop - start).count(), threads};
  return result;
}

} // namespace

void SimConfig::validate() const
{
  if (theta_values.empty() || sample_sizes.empty()) {
    throw DomainError("campaign needs at least one theta value and one sample size");
  }
  for (double t : theta_values) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw DomainError("campaign theta values must be positive and finite");
    }
  }
  for (std::size_t n : sample_sizes) {
    if (n < 2) {
      throw DomainError("campaign sample sizes must be at least 2");
    }
  }
  if (replicates < 1) {
    throw DomainError("campaign needs replicates >= 1");
  }
  std::visit(Overloaded{
               [](const FixedBeta& b) {
                 if (!(b.value > 0.0) || !std::isfinite(b.value)) {
                   throw DomainError("fixed beta must be positive and finite");
                 }
               },
               [](const priors::BurrParams& p) { p.validate(); },
             },
             beta_source);
  std::set<std::string> labels;
  for (const auto& entry : priors) {
    if (entry.label.empty()) {
      throw DomainError("prior labels must be non-empty");
    }
    if (entry.label == "mle" || !labels.insert(entry.label).second) {
      throw DomainError("duplicate or reserved prior label: " + entry.label);
    }
  }
  loss.validate();
  quad.validate();
}

const CellSummary& SimResult::cell(double theta, std::size_t n, const std::string& estimator) const
{
  for (const auto& c : cells) {
    if (c.theta == theta && c.n == n && c.estimator == estimator) {
      return c;
    }
  }
  throw std::out_of_range("no campaign cell for estimator " + estimator);
}

std::uint64_t config_hash(const SimConfig& config)
{
  Fnv1a h;
  h.reals(config.theta_values);
  h.u64(config.sample_sizes.size());
  for (std::size_t n : config.sample_sizes) {
    h.u64(n);
  }
  h.u64(config.replicates);
  h.u64(config.beta_source.index());
  std::visit(Overloaded{
               [&h](const FixedBeta& b) { h.real(b.value); },
               [&h](const priors::BurrParams& p) { h.real(p.alpha).real(p.gamma).real(p.delta).real(p.kappa); },
             },
             config.beta_source);
  h.u64(config.priors.size());
  for (const auto& entry : config.priors) {
    h.text(entry.label);
    hash_prior(h, entry.prior);
  }
  h.real(config.loss.f1).real(config.loss.f2);
  h.u64(config.master_seed);
  h.u64(config.quad.lower.has_value()).real(config.quad.lower.value_or(0.0));
  h.real(config.quad.rel_tol).real(config.quad.abs_tol).u64(static_cast<std::uint64_t>(config.quad.max_refinements));
  h.real(config.quad.tail_nats);
  return h.value();
}

ReplicateData replicate_dataset(const SimConfig& config, std::size_t theta_index, std::size_t n_index, std::size_t index)
{
  if (theta_index >= config.theta_values.size() || n_index >= config.sample_sizes.size() ||
      index >= config.replicates) {
    throw DomainError("replicate coordinates outside the campaign");
  }
  RandomStream rng =
    RandomStream::for_replicate(config.master_seed, cell_index(config, theta_index, n_index), index);
  const double beta = std::visit(Overloaded{
                                   [](const FixedBeta& b) { return b.value; },
                                   [&rng](const priors::BurrParams& p) { return priors::burr_sample(p, rng); },
                                 },
                                 config.beta_source);
  const PlpParams params(beta, config.theta_values[theta_index]);
  return ReplicateData{beta, simulate_failure_times(params, config.sample_sizes[n_index], rng)};
}

SimResult run_campaign(const SimConfig& config)
{
  return campaign(config, config.keep_replicates);
}

SimResult sensitivity_sweep(const SimConfig& config)
{
  if (config.priors.size() < 2) {
    throw DomainError("sensitivity sweep needs at least two priors");
  }
  return campaign(config, true);
}

double pairwise_sum(std::span<const double> values)
{
  constexpr std::size_t block = 8;
  if (values.size() <= block) {
    double s = 0.0;
    for (double v : values) {
      s += v;
    }
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mse(std::span<const double> estimates, std::span<const double> truths)
{
  if (estimates.size() != truths.size()) {
    throw DomainError("mse: estimates and truths differ in length");
  }
  if (estimates.empty()) {
    throw DomainError("mse: empty input");
  }
  std::vector<double> sq(estimates.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = estimates[i] - truths[i];
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(sq.size());
}

double imse(const bayes::IntensityForm& fitted, const PlpParams& truth, std::pair<double, double> range)
{
  const auto [lo, hi] = range;
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw DomainError("imse needs 0 < t_lo < t_hi < inf");
  }
  const bayes::IntensityForm v = bayes::intensity_form(truth);
  auto integrand = [&](double t) {
    const double d = fitted(t) - v(t);
    return std::array<double, 1>{d * d};
  };
  // Log-spaced panels: the intensities vary fastest near t_lo.
  constexpr int panels = 32;
  std::vector<double> breaks(panels + 1);
  const double step = std::log(hi / lo) / panels;
  for (int i = 0; i <= panels; ++i) {
    breaks[i] = lo * std::exp(step * i);
  }
  breaks.front() = lo;
  breaks.back() = hi;
  numerics::QuadratureOptions opts;
  opts.rel_tol = 1e-11;
  opts.max_depth = 40;
  const auto res = numerics::integrate<1>(integrand, breaks, opts);
  if (!res.converged) {
    throw EstimationError("imse quadrature did not converge");
  }
  return res.value[0];
}

double relative_efficiency(double imse_bayes, double imse_mle)
{
  if (!(imse_bayes >= 0.0) || !(imse_mle >= 0.0)) {
    throw DomainError("relative efficiency needs non-negative IMSE values");
  }
  if (imse_mle == 0.0) {
    throw EstimationError("relative efficiency undefined: the reference fit is exact (IMSE 0)");
  }
  return imse_bayes / imse_mle;
}

EfficiencyTable efficiency_table(const SimResult& result,
                                 double theta,
                                 std::size_t n,
                                 const std::string& prior_label,
                                 double true_beta,
                                 std::pair<double, double> range)
{
  const double beta_mle = result.cell(theta, n, "beta_mle").mean;
  const double theta_mle = result.cell(theta, n, "theta_mle").mean;
  const double beta_b = result.cell(theta, n, "beta_" + prior_label).mean;
  const double theta_b = result.cell(theta, n, "theta_" + prior_label).mean;
  const PlpParams truth(true_beta, theta);

  EfficiencyTable t{};
  t.range = range;
  t.truth = bayes::intensity_form(truth);
  t.mle = bayes::intensity_form(PlpParams(beta_mle, theta_mle));
  t.bayes_star = bayes::intensity_form(PlpParams(beta_b, theta_mle));
  t.bayes = bayes::intensity_form(PlpParams(beta_b, theta_b));
  t.imse_mle = imse(t.mle, truth, range);
  t.imse_bayes_star = imse(t.bayes_star, truth, range);
  t.imse_bayes = imse(t.bayes, truth, range);
  t.re_bayes_vs_mle = relative_efficiency(t.imse_bayes, t.imse_mle);
  t.re_bayes_vs_bayes_star = relative_efficiency(t.imse_bayes, t.imse_bayes_star);
  return t;
}

} // namespace plp::montecarlo
